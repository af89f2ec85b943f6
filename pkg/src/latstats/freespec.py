"""Closed-form spectrum of the free cube Laplacian Delta_L.

The 1-d eigenvalues are 2 cos(theta_{j,L}) with theta_{j,L} = j pi / (2(L+1)),
j = 1..2L+1, strictly decreasing in j; eigenfunctions are cos(theta m) for odd
j and sin(theta m) for even j on m = -L..L.  In d dimensions eigenvalues are
sums of d such cosines, indexed by tuples (j_1, ..., j_d).

Windowed enumeration around an energy E exploits the monotone index map:
eigenvalues in an interval correspond to a contiguous j-range obtained by
inverting the cosine (arccos of the clipped endpoints), with a direct
comparison at the two boundary indices to guard against floating-point
misclassification.  Window intervals are closed: boundary atoms included.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .serialize import write_csv

__all__ = [
    "ResourceCapError",
    "angle_grid",
    "values_1d",
    "eigen_1d",
    "count_1d_window",
    "enumerate_window",
    "FreeAtomList",
    "multiplicity_audit",
    "AuditResult",
    "group_atoms",
]

# Two closed-form eigenvalue sums closer than this are treated as one atom.
# Genuinely distinct cosine sums at auditable sizes differ by far more.
GROUP_TOL = 1e-9

DEFAULT_ATOM_CAP = 20_000_000
DEFAULT_AUDIT_CAP = 2_000_000


class ResourceCapError(RuntimeError):
    """An enumeration would exceed its configured workload cap."""


def angle_grid(L: int) -> np.ndarray:
    """theta_{j,L} = j pi / (2(L+1)) for j = 1..2L+1, strictly increasing."""
    j = np.arange(1, 2 * L + 2, dtype=np.float64)
    return j * np.pi / (2.0 * (L + 1))


def _val(L: int, j) -> np.ndarray:
    """1-d eigenvalue 2 cos(theta_{j,L}); j may be any integer array."""
    j = np.asarray(j, dtype=np.float64)
    return 2.0 * np.cos(j * np.pi / (2.0 * (L + 1)))


def values_1d(L: int) -> np.ndarray:
    """All 2L+1 one-dimensional eigenvalues, decreasing in j."""
    return _val(L, np.arange(1, 2 * L + 2))


def eigen_1d(j: int, L: int) -> tuple[float, Callable]:
    """Eigenvalue 2 cos(theta_{j,L}) and the eigenfunction evaluator phi_{j,L}."""
    if not 1 <= j <= 2 * L + 1:
        raise ValueError(f"index j={j} outside 1..{2 * L + 1}")
    theta = j * np.pi / (2.0 * (L + 1))
    if j % 2 == 1:
        phi = lambda m: np.cos(theta * np.asarray(m, dtype=np.float64))
    else:
        phi = lambda m: np.sin(theta * np.asarray(m, dtype=np.float64))
    return float(2.0 * np.cos(theta)), phi


def _index_range(L: int, lo, hi) -> tuple[np.ndarray, np.ndarray]:
    """Contiguous index range {j : 2cos(theta_j) in [lo, hi]}, empty iff jmin > jmax.

    Vectorized over (lo, hi).  The arccos estimate is off by at most one
    index; two rounds of direct comparison at the boundary indices repair it.
    """
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    top = 2 * L + 1
    c = 2.0 * (L + 1) / np.pi
    t_lo = np.arccos(np.clip(hi / 2.0, -1.0, 1.0))
    t_hi = np.arccos(np.clip(lo / 2.0, -1.0, 1.0))
    jmin = np.ceil(c * t_lo - 1e-9).astype(np.int64)
    jmax = np.floor(c * t_hi + 1e-9).astype(np.int64)
    jmin = np.clip(jmin, 1, top + 1)
    jmax = np.clip(jmax, 0, top)
    for _ in range(2):
        cand = jmin - 1
        ok = (cand >= 1) & (_val(L, cand) <= hi)
        jmin = np.where(ok, cand, jmin)
    for _ in range(2):
        bad = (jmin <= top) & (_val(L, jmin) > hi)
        jmin = jmin + bad
    for _ in range(2):
        cand = jmax + 1
        ok = (cand <= top) & (_val(L, cand) >= lo)
        jmax = np.where(ok, cand, jmax)
    for _ in range(2):
        bad = (jmax >= 1) & (_val(L, jmax) < lo)
        jmax = jmax - bad
    empty = jmax < jmin
    return np.where(empty, 1, jmin), np.where(empty, 0, jmax)


def count_1d_window(L: int, a: float, b: float) -> int:
    """Exact number of 1-d eigenvalues in the closed interval [a, b], in O(1)."""
    if a > b:
        raise ValueError(f"empty interval: a={a} > b={b}")
    jmin, jmax = _index_range(L, a, b)
    return int(max(0, int(jmax) - int(jmin) + 1))


def group_atoms(values: np.ndarray, tol: float = GROUP_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Sort values and merge runs closer than tol: (representatives, counts)."""
    values = np.sort(np.asarray(values, dtype=np.float64))
    if len(values) == 0:
        return values, np.zeros(0, dtype=np.int64)
    starts = np.concatenate(([0], np.flatnonzero(np.diff(values) > tol) + 1))
    counts = np.diff(np.concatenate((starts, [len(values)])))
    reps = np.add.reduceat(values, starts) / counts
    return reps, counts.astype(np.int64)


@dataclass(frozen=True)
class FreeAtomList:
    """Atoms of the rescaled free spectrum near E: positions (L+1)(lambda - E)."""

    d: int
    L: int
    E: float
    K: float
    positions: np.ndarray
    multiplicities: np.ndarray

    def total(self) -> int:
        return int(self.multiplicities.sum())

    def to_csv(self, path, metadata: dict | None = None) -> None:
        rows = zip(self.positions.tolist(), self.multiplicities.tolist())
        write_csv(path, ["position", "multiplicity"], rows, metadata)


def enumerate_window(
    d: int,
    L: int,
    E: float,
    K: float,
    atom_cap: int = DEFAULT_ATOM_CAP,
) -> FreeAtomList:
    """All eigenvalue tuples with |sum_l 2cos(theta_{j_l}) - E| <= K/(L+1).

    Level-by-level expansion over j_1, ..., j_d: a partial sum s after r
    coordinates survives iff [lo - s - 2(d-r), hi - s + 2(d-r)] can still be
    reached, and the admissible next indices form the contiguous arccos range.
    Equal sums are merged into atoms with summed multiplicity.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if K <= 0:
        raise ValueError("window half-width K must be positive")
    if abs(E) > 2 * d:
        raise ValueError(f"E={E} outside the spectrum [-2d, 2d] = [{-2 * d}, {2 * d}]")
    lo = E - K / (L + 1.0)
    hi = E + K / (L + 1.0)
    sums = np.zeros(1)
    for level in range(1, d + 1):
        slack = 2.0 * (d - level)
        jmin, jmax = _index_range(L, lo - slack - sums, hi + slack - sums)
        counts = jmax - jmin + 1
        total = int(counts.sum())
        if total > atom_cap:
            raise ResourceCapError(
                f"window enumeration needs {total} tuples at level {level}, "
                f"beyond the atom cap {atom_cap}"
            )
        reps = counts
        base = np.repeat(jmin, reps)
        group_start = np.cumsum(counts) - counts
        js = base + (np.arange(total) - np.repeat(group_start, reps))
        sums = np.repeat(sums, reps) + _val(L, js)
    values, mult = group_atoms(sums)
    positions = (L + 1.0) * (values - E)
    return FreeAtomList(d=d, L=L, E=E, K=K, positions=positions, multiplicities=mult)


class AuditResult(NamedTuple):
    max_multiplicity: int
    bound: int
    passed: bool


def multiplicity_audit(d: int, L: int, cap: int = DEFAULT_AUDIT_CAP) -> AuditResult:
    """Largest eigenvalue multiplicity of Delta_L against the bound d(2L+1)^(d-1).

    Valid verbatim for the rescaled matrix: scaling and shifting do not
    change multiplicities.
    """
    n = (2 * L + 1) ** d
    if n > cap:
        raise ResourceCapError(f"audit needs {n} eigenvalues, beyond the cap {cap}")
    vals = values_1d(L)
    sums = vals.copy()
    for _ in range(d - 1):
        sums = (sums[:, None] + vals[None, :]).reshape(-1)
    _, counts = group_atoms(sums)
    bound = d * (2 * L + 1) ** (d - 1)
    mx = int(counts.max())
    return AuditResult(max_multiplicity=mx, bound=bound, passed=mx <= bound)
