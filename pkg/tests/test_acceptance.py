"""Acceptance suite: one test per criterion, at the stated tolerances.

Run with `pytest tests/test_acceptance.py -v` to get one pass/fail line per
criterion.  Pinned regression targets were produced by this implementation's
dense path on the recorded seeds at the first verified run; seeds and
parameters are in the test bodies.
"""

import numpy as np
import pytest

from latstats.dos import LimitMeasureSpec, dos_grid, fourier_decay_check, ids, limit_comparison_table
from latstats.eigensolve import (
    banded_inertia,
    eigs_in_window,
    full_spectrum,
    sturm_count,
    sturm_counts,
    tridiagonalize,
)
from latstats.experiments import (
    PowerScale,
    boundedness_scan,
    decay_experiment,
    edge_singularity_sum,
    martingale_trace,
    positivity_check,
    weak_coupling_experiment,
)
from latstats.freespec import enumerate_window, multiplicity_audit, values_1d
from latstats.lattice import (
    BandedSymmetricMatrix,
    BernoulliSign,
    ConstantProfile,
    CubeSpec,
    DecayingProfile,
    GaussianLaw,
    UniformSymmetric,
    UniformUnit,
    assemble_hamiltonian,
    realize_field,
)
from latstats.measures import (
    difference_statistic,
    free_measure,
    integrate,
    perturbation_bound,
    random_measure,
)
from latstats.serialize import write_csv
from latstats.testfunctions import Bump

LAWS = (UniformSymmetric(1.0), UniformUnit(), BernoulliSign(0.5), GaussianLaw(1.0))


def spectrum_from_enumeration(d, L):
    al = enumerate_window(d, L, 0.0, 4 * d * (L + 1))
    lam = al.positions / (L + 1.0)
    return np.sort(np.repeat(lam, al.multiplicities))


def test_a01_free_spectrum_oracle_equivalence():
    """A1: closed-form enumeration equals dense eigensolve, 1e-10/eigenvalue."""
    cases = [(1, L) for L in (1, 2, 3, 10, 100, 1687)]
    cases += [(2, L) for L in (1, 2, 3, 5, 10, 28)]
    cases += [(3, L) for L in (1, 2, 3, 7)]
    worst = 0.0
    for d, L in cases:
        assert (2 * L + 1) ** d <= 3375
        lam = spectrum_from_enumeration(d, L)
        dense = np.linalg.eigvalsh(assemble_hamiltonian(CubeSpec(d, L)).toarray())
        diff = float(np.abs(lam - dense).max())
        worst = max(worst, diff)
        assert diff <= 1e-10, (d, L, diff)
    print(f"\nA1 worst per-eigenvalue deviation: {worst:.3e}")


def test_a02_multiplicity_bound():
    """A2: max multiplicity <= d(2L+1)^(d-1), exact integers, d in {2,3}, L <= 5."""
    for d in (2, 3):
        for L in range(1, 6):
            res = multiplicity_audit(d, L)
            assert res.passed
            assert res.max_multiplicity <= d * (2 * L + 1) ** (d - 1)
    print("\nA2 multiplicity bound holds on all audited cubes")


def test_a03_d1_limit_lattice():
    """A3: d=1, E=0 atoms within 10^3/(24(L+1)^2) of pi Z, L in {100, 1000}."""
    for L in (100, 1000):
        m = free_measure(1, L, 0.0, 10.0)
        assert len(m.positions) == 7
        bound = 1e3 / (24.0 * (L + 1) ** 2)
        dist = np.abs(m.positions - np.pi * np.round(m.positions / np.pi))
        assert dist.max() <= bound, (L, dist.max(), bound)
    print("\nA3 rescaled atoms sit on the pi-lattice to Taylor accuracy")


def test_a04_perturbation_inequality_200():
    """A4: |X_L| <= bound + 1e-6 (1 + bound) on 200 random instances."""
    f = Bump(0.0, 4.0)
    rng = np.random.default_rng(2024)
    checked = 0
    for trial in range(200):
        d = int(rng.integers(2, 4))
        L = int(rng.integers(1, 7))
        e = float(rng.uniform(-2 * d + 0.5, 2 * d - 0.5))
        profile = (
            DecayingProfile(1.0, 0.5) if trial % 2 == 0 else ConstantProfile(0.3)
        )
        law = LAWS[trial % 4]
        cube = CubeSpec(d, L)
        field = realize_field(cube, profile, law, 10_000 + trial)
        fm = free_measure(d, L, e, 4.5)
        rm = random_measure(cube, field, e, 4.5)
        x = difference_statistic(fm, rm, f)
        b = perturbation_bound(f, field)
        assert abs(x) <= b + 1e-6 * (1.0 + b), (trial, d, L, e, x, b)
        checked += 1
    assert checked == 200
    print("\nA4 inequality held on all 200 instances")


# medians recorded 2026-08-08 at the first verified run of this experiment
# (d=3, E=5, Decaying{1, 0.5}, uniform-sym law, Bump K=4, seeds 1..20)
A5_PINNED = {
    3.0: 0.00035759007552825517,
    4.0: 0.0001172522770787332,
    5.0: 3.863620700104986e-05,
    6.0: 3.3588354937608145e-05,
}


def test_a05_decay_trend_and_regression():
    """A5: median |X_L| nonincreasing over Ls={3,4,5,6}; pinned medians."""
    rec = decay_experiment(
        3, [3, 4, 5, 6], 5.0, DecayingProfile(1.0, 0.5), UniformSymmetric(1.0),
        Bump(0.0, 4.0), seeds=list(range(1, 21)), threads=2,
    )
    assert not rec.errors
    meds = [rec.median_abs_x(float(L)) for L in (3, 4, 5, 6)]
    inversions = [
        (meds[i] - meds[i - 1]) / meds[i - 1] for i in range(1, 4) if meds[i] > meds[i - 1]
    ]
    assert len(inversions) <= 1
    assert all(r <= 0.10 for r in inversions)
    for L, med in zip((3.0, 4.0, 5.0, 6.0), meds):
        assert med == pytest.approx(A5_PINNED[L], rel=1e-8)
    for r in rec.rows:
        assert abs(r.x) <= r.bound + 1e-6 * (1.0 + r.bound)
    print(f"\nA5 medians {[f'{m:.3e}' for m in meds]} nonincreasing")


# medians recorded 2026-08-08 at the first verified run of this experiment
# (d=2, E=1, eps(eta) = floor(eta^(-1/3)), uniform-sym law, Bump K=4, seeds 1..20)
A6_PINNED = {
    0.1: 0.007102060469776572,
    0.03: 0.0007244862094333282,
    0.01: 0.00047214490066815884,
}


def test_a06_weak_coupling_trend_and_regression():
    """A6: median |X| decreasing as eta drops through {0.1, 0.03, 0.01}."""
    rec = weak_coupling_experiment(
        2, [0.1, 0.03, 0.01], PowerScale(1.0 / 3.0), 1.0, UniformSymmetric(1.0),
        Bump(0.0, 4.0), seeds=list(range(1, 21)), threads=2,
    )
    assert not rec.errors
    meds = [rec.median_abs_x(eta) for eta in (0.1, 0.03, 0.01)]
    assert meds[0] > meds[1] > meds[2]
    for eta, med in zip((0.1, 0.03, 0.01), meds):
        assert med == pytest.approx(A6_PINNED[eta], rel=1e-8)
    print(f"\nA6 medians {[f'{m:.3e}' for m in meds]} decreasing in eta")


def test_a07_martingale_suite():
    """A7: (i) Bernoulli trace identically zero; (ii) Var(M_inf) within 25%
    of the analytic series; (iii) normalized trace shrinks for >= 80% of seeds."""
    law = UniformSymmetric(1.0)
    tr = martingale_trace(3, 0.5, BernoulliSign(0.5), 1, 30)
    assert np.all(tr.m == 0.0)

    # Var(M_inf) = Var|q| sum_n (1+|n|)^-3 = (1/12)(2 zeta(3) - 1), d=1, eps=1
    finals = np.array(
        [martingale_trace(1, 1.0, law, 1000 + s, 2000).m[-1] for s in range(200)]
    )
    analytic = (2 * 1.2020569031595943 - 1.0) / 12.0
    ratio = finals.var(ddof=1) / analytic
    assert abs(ratio - 1.0) <= 0.25

    wins = 0
    for s in range(100):
        t = martingale_trace(3, 0.5, law, 9000 + s, 50)
        wins += abs(t.normalized[49]) < abs(t.normalized[24])
    assert wins >= 80
    print(f"\nA7 variance ratio {ratio:.3f}; normalized trace shrank for {wins}/100 seeds")


def test_a08_boundedness_and_singularity_sums():
    """A8: window masses bounded (max/median <= 3) over doubling L; the
    normalized inverse-sqrt sums self-converge within 10% from L=1000 to 2000."""
    scan = boundedness_scan(
        3, 5.0, 2.0, [20, 40, 80, 160, 320], Bump(0.0, 2.0),
        gammas=(-0.999, -0.9, -0.7, -0.5, -0.3, -0.1), i_Ls=(1000, 2000),
    )
    ratio = float(scan.integrals.max() / np.median(scan.integrals))
    assert ratio <= 3.0
    for i, g in enumerate(scan.gammas):
        a, b = scan.i_table[i]
        assert abs(b - a) / a <= 0.10, (g, a, b)
    print(f"\nA8 max/median = {ratio:.3f}; singularity sums stable on the gamma grid")


def test_a09_positivity_lower_bound():
    """A9: window mass >= 0.5 * (K/(pi sqrt 2)) N_2((E-2+d, E+2-d)) at L=320."""
    res = positivity_check(3, 5.0, 2.0, 0.5, 320)
    assert res.ratio >= 0.5
    print(f"\nA9 integral/reference = {res.ratio:.2f}")


def test_a10_eigensolve_cross_validation():
    """A10: banded vs Sturm exact on 200 pairs; QL vs closed form 1e-10;
    window extraction counts equal Sturm counts."""
    rng = np.random.default_rng(77)
    pairs = 0
    while pairs < 200:
        n = int(rng.integers(10, 2001))
        bw = int(rng.integers(1, 9))
        band = np.zeros((bw + 1, n))
        for r in range(bw + 1):
            band[r, : n - r] = rng.normal(size=n - r)
        m = BandedSymmetricMatrix(band)
        t = tridiagonalize(m)
        for mu in rng.uniform(-6.0, 6.0, size=5):
            assert banded_inertia(m, mu).count == sturm_count(t, mu).count
            pairs += 1

    for d, L in ((1, 12), (2, 2), (3, 1)):
        t = tridiagonalize(assemble_hamiltonian(CubeSpec(d, L)))
        w = full_spectrum(t)
        assert np.abs(w - spectrum_from_enumeration(d, L)).max() <= 1e-10

    cube = CubeSpec(3, 2)
    field = realize_field(cube, DecayingProfile(1.0, 0.5), GaussianLaw(1.0), 5)
    t = tridiagonalize(assemble_hamiltonian(cube, field))
    for a, b in ((-2.0, 1.0), (0.5, 4.0), (-7.0, 7.0)):
        w = eigs_in_window(t, a, b, 1e-11)
        lo = int(sturm_counts(t, np.asarray([np.nextafter(a, -np.inf)]))[0])
        hi = int(sturm_counts(t, np.asarray([b]))[0])
        assert len(w) == hi - lo
    print(f"\nA10 banded = Sturm on {pairs} (matrix, shift) pairs")


def test_a11_dos_suite():
    """A11: r=1 pointwise 1e-8 away from the edges; unit mass 1e-6 for every
    r; N_3 CDF within 0.02 of the L=6 spectrum; decay check bounded, r <= 4."""
    g1 = dos_grid(1)
    sel = np.abs(g1.energies) <= 1.9
    exact = 1.0 / (np.pi * np.sqrt(4.0 - g1.energies[sel] ** 2))
    assert np.abs(g1.values[sel] - exact).max() <= 1e-8

    for r in (1, 2, 3, 4):
        assert abs(dos_grid(r).trapz_mass() - 1.0) <= 1e-6

    lam = spectrum_from_enumeration(3, 6)
    xs = np.linspace(-5.9, 5.9, 401)
    frac = np.searchsorted(lam, xs, side="right") / len(lam)
    cdf = np.array([ids(3, -6.0001, x) for x in xs])
    sup = float(np.abs(frac - cdf).max())
    assert sup <= 0.02

    sups = []
    for r in (1, 2, 3, 4):
        res = fourier_decay_check(r)
        assert np.isfinite(res.sup_weighted) and res.sup_weighted <= 1.0
        sups.append(res.sup_weighted)
    print(f"\nA11 CDF sup-distance {sup:.4f}; decay sups {[f'{s:.3f}' for s in sups]}")


def test_a12_limit_measure_pipeline(tmp_path):
    """A12: self-convergence within 1e-3 (d=4, E=0, Bump K=1); comparison
    table against L in {24, 48, 96} emitted; no agreement asserted."""
    spec = LimitMeasureSpec(d=4, E=0.0)
    f = Bump(0.0, 1.0)
    rows = limit_comparison_table(spec, f, [24, 48, 96])
    assert [r[0] for r in rows] == ["24", "48", "96", "limit"]
    self_conv = rows[-1][2]
    assert self_conv <= 1e-3
    out = tmp_path / "limit_comparison.csv"
    write_csv(out, ["L_or_limit", "value", "self_convergence"], rows)
    assert out.exists() and len(out.read_text().splitlines()) == 5
    print(f"\nA12 emitted table; finite-L {[f'{r[1]:.4f}' for r in rows[:3]]} "
          f"vs limit {rows[-1][1]:.4f} (self-convergence {self_conv:.1e})")


def test_a13_manifest_reproducibility(tmp_path):
    """A13: rerunning an experiment from its manifest reproduces every CSV
    byte for byte."""
    from latstats.config import parse_config
    from latstats.runner import rerun_from_manifest, run

    text = """
[run]
experiment = compare
[model]
d = 3
L = 2
E = 5.0
[profile]
kind = decaying
amplitude = 1.0
epsilon = 0.5
[law]
kind = uniform-sym
[test_function]
kind = bump
K = 4.0
[seeds]
master = 7
count = 3
"""
    cfg = parse_config(text)
    manifest, code = run(cfg, tmp_path / "orig")
    assert code == 0
    _, code2 = rerun_from_manifest(tmp_path / "orig" / "compare_manifest.json",
                                   tmp_path / "rerun")
    assert code2 == 0
    for name in manifest["outputs"]:
        a = (tmp_path / "orig" / name).read_bytes()
        b = (tmp_path / "rerun" / name).read_bytes()
        assert a == b, name
    print("\nA13 rerun produced byte-identical CSVs")
