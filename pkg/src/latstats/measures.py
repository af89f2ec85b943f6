"""Rescaled local spectral measures and their integrals.

Around a reference energy E, the eigenvalues of the rescaled finite-volume
operator (L+1)(H_L - E) form an atomic measure normalized by
(2L+1)^-(d-1).  The free version comes from the closed-form spectrum; the
random version either diagonalizes the Hamiltonian inside the window
("dense") or evaluates the normalized eigenvalue counting function on a
shift grid ("counting").  All windows are closed intervals in the rescaled
variable x = (L+1)(lambda - E), |x| <= K.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import freespec
from .eigensolve import banded_inertia, eigs_in_window, sturm_counts, tridiagonalize
from .lattice import CubeSpec, SiteField, assemble_hamiltonian
from .serialize import write_csv
from .testfunctions import sup_deriv, weighted_fourier_norm

__all__ = [
    "AtomicMeasure",
    "CountingFunction",
    "IntegralEstimate",
    "free_measure",
    "random_measure",
    "integrate",
    "integrate_counting",
    "difference_statistic",
    "perturbation_bound",
]

DENSE_CAP = 12000
DEFAULT_GRID_NODES = 512


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite list of (rescaled position, weight > 0) atoms, positions sorted."""

    positions: np.ndarray
    weights: np.ndarray
    d: int
    L: int
    E: float
    K: float
    source: str  # "free" | "random"

    def total_mass(self) -> float:
        return float(self.weights.sum())

    def to_csv(self, path, metadata: dict | None = None) -> None:
        rows = zip(self.positions.tolist(), self.weights.tolist())
        write_csv(path, ["position", "weight"], rows, metadata)


@dataclass(frozen=True)
class CountingFunction:
    """Normalized counting function x -> (2L+1)^-(d-1) #{lambda <= E + x/(L+1)}.

    Values are evaluated at the uniform grid nodes, which play the role of
    cell midpoints when integrating against a test function.
    """

    x: np.ndarray
    counts: np.ndarray
    d: int
    L: int
    E: float
    K: float
    method: str  # "sturm" | "banded-ldl"

    def span_mass(self) -> float:
        return float(self.counts[-1] - self.counts[0])

    def to_csv(self, path, metadata: dict | None = None) -> None:
        rows = zip(self.x.tolist(), self.counts.tolist())
        write_csv(path, ["x", "count"], rows, metadata)


@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    error_bound: float
    grid_ok: bool


def _normalization(d: int, L: int) -> float:
    return float(2 * L + 1) ** (-(d - 1))


def free_measure(d: int, L: int, E: float, K: float, atom_cap: int | None = None) -> AtomicMeasure:
    """Atoms of the rescaled free measure in [-K, K]."""
    kwargs = {} if atom_cap is None else {"atom_cap": atom_cap}
    atoms = freespec.enumerate_window(d, L, E, K, **kwargs)
    v = _normalization(d, L)
    return AtomicMeasure(
        positions=atoms.positions,
        weights=atoms.multiplicities * v,
        d=d,
        L=L,
        E=float(E),
        K=float(K),
        source="free",
    )


def random_measure(
    cube: CubeSpec,
    field: SiteField,
    E: float,
    K: float,
    method: str = "dense",
    grid_nodes: int = DEFAULT_GRID_NODES,
    inertia: str = "sturm",
    dense_cap: int = DENSE_CAP,
    tol: float | None = None,
):
    """Rescaled local measure of H = Delta_L + diag(v) near E.

    dense    -> AtomicMeasure from window bisection of the tridiagonalized H
    counting -> CountingFunction on a uniform grid over [-K, K]

    An identically zero potential short-circuits the dense path to the
    closed-form spectrum (H = Delta exactly), so the zero-coupling
    difference statistic vanishes exactly rather than to rounding.
    """
    if field.cube != cube:
        raise ValueError("field was sampled on a different cube")
    d, L = cube.d, cube.L
    lam_lo = E - K / (L + 1.0)
    lam_hi = E + K / (L + 1.0)
    v = _normalization(d, L)
    if method == "dense" and field.v is not None and not np.any(field.v):
        base = free_measure(d, L, E, K)
        return AtomicMeasure(
            positions=base.positions,
            weights=base.weights,
            d=d,
            L=L,
            E=float(E),
            K=float(K),
            source="random",
        )
    if method == "dense":
        if cube.size > dense_cap:
            raise ValueError(f"dense path capped at N={dense_cap}, cube has {cube.size}")
        t = tridiagonalize(assemble_hamiltonian(cube, field), dense_cap=dense_cap)
        scale = max(1.0, t.norm_est())
        use_tol = tol if tol is not None else 1e-12 * scale
        eigs = eigs_in_window(t, lam_lo, lam_hi, use_tol)
        stop = max(use_tol, 4.0 * np.finfo(float).eps * scale)
        reps, mult = freespec.group_atoms(eigs, tol=8.0 * stop)
        return AtomicMeasure(
            positions=(L + 1.0) * (reps - E),
            weights=mult * v,
            d=d,
            L=L,
            E=float(E),
            K=float(K),
            source="random",
        )
    if method == "counting":
        x = np.linspace(-K, K, grid_nodes)
        shifts = E + x / (L + 1.0)
        if inertia == "sturm":
            t = tridiagonalize(assemble_hamiltonian(cube, field), dense_cap=dense_cap)
            counts = sturm_counts(t, shifts)
        elif inertia == "banded-ldl":
            m = assemble_hamiltonian(cube, field)
            counts = np.array([banded_inertia(m, s).count for s in shifts], dtype=np.int64)
        else:
            raise ValueError(f"unknown inertia method {inertia!r}")
        return CountingFunction(
            x=x,
            counts=counts * v,
            d=d,
            L=L,
            E=float(E),
            K=float(K),
            method=inertia,
        )
    raise ValueError(f"unknown method {method!r}")


def integrate(measure: AtomicMeasure, f) -> float:
    """sum of weight * f(position) (pairwise summation)."""
    if len(measure.positions) == 0:
        return 0.0
    return float(np.sum(measure.weights * f(measure.positions)))


def integrate_counting(counting: CountingFunction, f) -> IntegralEstimate:
    """Stieltjes integral of f against the counting function's measure.

    Integration by parts on the grid: with the stored nodes as cell
    midpoints and beta_j the cell boundaries, the estimator
    -sum_j C(x_j) (f(beta_{j+1}) - f(beta_j)) gives every atom the f-value
    of a point at most h/2 away, so |error| <= h/2 * sup|f'| * mass.
    """
    x = counting.x
    h = float(x[1] - x[0]) if len(x) > 1 else 0.0
    if len(x) > 2 and float(np.abs(np.diff(x) - h).max()) > 1e-9 * abs(h):
        raise ValueError("counting grid must be uniform for the midpoint-cell estimator")
    lo, hi = f.support
    grid_ok = bool(x[0] - h / 2 <= lo - h and hi + h <= x[-1] + h / 2)
    if not grid_ok:
        warnings.warn(
            "counting grid does not span the test function's support with margin",
            RuntimeWarning,
            stacklevel=2,
        )
    beta = np.concatenate(([x[0] - h / 2], 0.5 * (x[:-1] + x[1:]), [x[-1] + h / 2]))
    fb = f(beta)
    value = -float(np.sum(counting.counts * (fb[1:] - fb[:-1])))
    bound = 0.5 * h * sup_deriv(f) * counting.span_mass()
    return IntegralEstimate(value=value, error_bound=bound, grid_ok=grid_ok)


def difference_statistic(free: AtomicMeasure, random, f) -> float:
    """integral f d(random) - integral f d(free) for matching (d, L, E)."""
    meta_r = (random.d, random.L, random.E)
    if (free.d, free.L, free.E) != meta_r:
        raise ValueError(
            f"measure metadata mismatch: free {(free.d, free.L, free.E)} vs random {meta_r}"
        )
    if isinstance(random, CountingFunction):
        r_val = integrate_counting(random, f).value
    else:
        r_val = integrate(random, f)
    return r_val - integrate(free, f)


def perturbation_bound(f, field: SiteField) -> float:
    """Rigorous bound ||(i+xi) fhat||_1 (2L+1)^-(d-2) sum_n a_n |q_n|.

    Dominates |difference_statistic| for every realization on the cube.
    """
    d, L = field.cube.d, field.cube.L
    norm = weighted_fourier_norm(f).value
    return norm * float(2 * L + 1) ** (-(d - 2)) * field.abs_potential_sum()
