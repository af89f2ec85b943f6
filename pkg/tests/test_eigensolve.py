"""Tridiagonalization, Sturm counts, window bisection, banded inertia."""

import numpy as np
import pytest

from latstats.eigensolve import (
    banded_inertia,
    eigs_in_window,
    full_spectrum,
    sturm_count,
    sturm_counts,
    tridiagonalize,
)
from latstats.freespec import values_1d
from latstats.lattice import (
    BandedSymmetricMatrix,
    CubeSpec,
    DecayingProfile,
    UniformSymmetric,
    assemble_hamiltonian,
    realize_field,
)

SQRT2 = np.sqrt(2.0)


def random_banded(rng, n, bw):
    band = np.zeros((bw + 1, n))
    for r in range(bw + 1):
        band[r, : n - r] = rng.normal(size=n - r)
    return BandedSymmetricMatrix(band)


def cosine_sums(d, L):
    v = values_1d(L)
    s = v.copy()
    for _ in range(d - 1):
        s = (s[:, None] + v[None, :]).reshape(-1)
    return np.sort(s)


class TestTridiagonalize:
    def test_diagonal_passthrough(self):
        m = BandedSymmetricMatrix(np.array([[3.0, 1.0, -2.0]]))
        t = tridiagonalize(m)
        assert t.alpha.tolist() == [3.0, 1.0, -2.0]
        assert np.all(t.beta == 0.0)

    def test_tridiagonal_fast_path(self):
        m = assemble_hamiltonian(CubeSpec(1, 3))
        t = tridiagonalize(m)
        assert np.array_equal(t.alpha, m.band[0])
        assert np.array_equal(t.beta, m.band[1, :-1])

    def test_d2_preserves_spectrum(self):
        m = assemble_hamiltonian(CubeSpec(2, 1))
        t = tridiagonalize(m)
        w = np.sort(np.linalg.eigvalsh(t.toarray()))
        assert np.abs(w - cosine_sums(2, 1)).max() < 1e-10

    def test_rejects_nonfinite(self):
        # the constructor already rejects non-finite storage ...
        with pytest.raises(ValueError, match="non-finite"):
            BandedSymmetricMatrix(np.array([[np.inf, 0.0], [0.0, 0.0]]))
        # ... and tridiagonalize double-checks matrices built around it
        m = BandedSymmetricMatrix.__new__(BandedSymmetricMatrix)
        m.band = np.array([[np.nan, 0.0], [0.0, 0.0]])
        with pytest.raises(ValueError):
            tridiagonalize(m)

    def test_band_storage_is_frozen(self):
        m = assemble_hamiltonian(CubeSpec(1, 2))
        with pytest.raises(ValueError):
            m.band[0, 0] = 1.0


class TestSturm:
    def test_examples(self):
        t = tridiagonalize(assemble_hamiltonian(CubeSpec(1, 1)))
        assert sturm_count(t, -1.0).count == 1
        assert sturm_count(t, 0.1).count == 2

    def test_identity_diag(self):
        m = BandedSymmetricMatrix(np.ones((1, 5)))
        t = tridiagonalize(m)
        assert sturm_count(t, 0.5).count == 0

    def test_le_convention_at_exact_hit(self):
        # eigenvalues {-sqrt2, 0, sqrt2}: a shift exactly at 0 counts it
        t = tridiagonalize(assemble_hamiltonian(CubeSpec(1, 1)))
        assert sturm_count(t, 0.0).count == 2

    def test_monotone_step_function(self):
        rng = np.random.default_rng(1)
        m = random_banded(rng, 60, 3)
        t = tridiagonalize(m)
        grid = np.linspace(-8, 8, 400)
        counts = sturm_counts(t, grid)
        assert np.all(np.diff(counts) >= 0)
        assert counts[0] == 0 and counts[-1] == 60


class TestWindow:
    def test_example_window(self):
        t = tridiagonalize(assemble_hamiltonian(CubeSpec(1, 1)))
        w = eigs_in_window(t, -0.1, 2.0, 1e-12)
        assert np.allclose(w, [0.0, SQRT2], atol=1e-11)

    def test_empty_window(self):
        t = tridiagonalize(assemble_hamiltonian(CubeSpec(1, 1)))
        assert len(eigs_in_window(t, 0.3, 0.9, 1e-12)) == 0

    def test_full_range_matches_full_spectrum(self):
        rng = np.random.default_rng(2)
        m = random_banded(rng, 50, 49)
        t = tridiagonalize(m)
        w = eigs_in_window(t, -100.0, 100.0, 1e-12)
        assert np.abs(w - full_spectrum(t)).max() < 1e-10

    def test_count_identity(self):
        rng = np.random.default_rng(3)
        m = random_banded(rng, 80, 4)
        t = tridiagonalize(m)
        for a, b in ((-2.0, 1.0), (0.0, 3.0), (-7.5, 7.5)):
            w = eigs_in_window(t, a, b, 1e-11)
            lo = int(sturm_counts(t, np.asarray([np.nextafter(a, -np.inf)]))[0])
            hi = int(sturm_counts(t, np.asarray([b]))[0])
            assert len(w) == hi - lo

    def test_multiplicity_returned(self):
        # double eigenvalue 1 of diag(1,1,3) pattern
        band = np.zeros((2, 3))
        band[0] = [1.0, 1.0, 3.0]
        t = tridiagonalize(BandedSymmetricMatrix(band))
        w = eigs_in_window(t, 0.0, 2.0, 1e-13)
        assert len(w) == 2
        assert np.allclose(w, [1.0, 1.0], atol=1e-12)

    def test_tol_clamp_warns(self):
        t = tridiagonalize(assemble_hamiltonian(CubeSpec(1, 2)))
        with pytest.warns(RuntimeWarning, match="clamped"):
            eigs_in_window(t, -3.0, 3.0, 1e-300)


class TestFullSpectrum:
    def test_single_entry(self):
        m = BandedSymmetricMatrix(np.array([[4.5]]))
        assert full_spectrum(tridiagonalize(m)).tolist() == [4.5]

    def test_d2_closed_form(self):
        t = tridiagonalize(assemble_hamiltonian(CubeSpec(2, 2)))
        w = full_spectrum(t)
        assert np.abs(w - cosine_sums(2, 2)).max() < 1e-10

    def test_wigner_trace_identity(self):
        rng = np.random.default_rng(4)
        m = random_banded(rng, 100, 99)
        t = tridiagonalize(m)
        w = full_spectrum(t, check_trace=True)
        norm = m.inf_norm()
        assert abs(w.sum() - np.trace(m.toarray())) <= 1e-8 * 100 * norm


class TestBandedInertia:
    def test_identity(self):
        m = BandedSymmetricMatrix(np.ones((1, 5)))
        assert banded_inertia(m, 0.5).count == 0

    def test_agrees_with_sturm_example(self):
        m = assemble_hamiltonian(CubeSpec(1, 1))
        assert banded_inertia(m, 0.1).count == 2
        assert banded_inertia(m, 0.1).count == sturm_count(tridiagonalize(m), 0.1).count

    def test_exact_eigenvalue_nudge(self):
        # shift exactly at the eigenvalue 0 triggers the pivot breakdown path
        m = assemble_hamiltonian(CubeSpec(1, 1))
        assert banded_inertia(m, 0.0).count == 2

    def test_random_hamiltonian_cross_method(self):
        cube = CubeSpec(3, 3)
        field = realize_field(cube, DecayingProfile(1.0, 0.5), UniformSymmetric(1.0), 17)
        m = assemble_hamiltonian(cube, field)
        t = tridiagonalize(m)
        rng = np.random.default_rng(8)
        for mu in rng.uniform(-6.5, 6.5, size=20):
            assert banded_inertia(m, mu).count == sturm_count(t, mu).count

    def test_method_tags(self):
        m = assemble_hamiltonian(CubeSpec(1, 2))
        assert banded_inertia(m, 0.3).method == "banded-ldl"
        assert sturm_count(tridiagonalize(m), 0.3).method == "sturm"
