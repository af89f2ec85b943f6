"""Symmetric eigenvalue machinery for banded lattice Hamiltonians.

Counting convention, shared by every routine here and by the measures built
on top: a count at shift mu means #{eigenvalues <= mu}.  Sturm counts follow
the LAPACK safeguard (pivots <= pivmin are snapped to -pivmin and counted),
which realizes the "<=" convention at exact hits; the banded LDLT path counts
negative pivots and nudges the shift upward by 64 ulp ||M|| when a pivot
breakdown signals an exact eigenvalue.

Dense Householder reduction (LAPACK dsytrd) is the default route to
tridiagonal form up to DENSE_CAP; the banded LDLT factorization is the
large-matrix path for counts only.  Full tridiagonal spectra use the
root-free implicit QL/QR iteration with Wilkinson shifts (LAPACK dsterf,
30-sweep-per-eigenvalue cap).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import as_strided
from scipy.linalg import lapack

from .lattice import BandedSymmetricMatrix

__all__ = [
    "TridiagonalForm",
    "InertiaCount",
    "ConvergenceError",
    "FactorizationError",
    "tridiagonalize",
    "sturm_count",
    "sturm_counts",
    "eigs_in_window",
    "full_spectrum",
    "banded_inertia",
]

DENSE_CAP = 12000

_EPS = float(np.finfo(np.float64).eps)
_SAFMIN = float(np.finfo(np.float64).tiny)


class ConvergenceError(RuntimeError):
    """An eigenvalue iteration exceeded its sweep cap."""


class FactorizationError(RuntimeError):
    """A banded factorization broke down even after the shift nudge."""


@dataclass(frozen=True)
class TridiagonalForm:
    """Orthogonal-similarity tridiagonal reduction: diagonal alpha, off-diagonal beta."""

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        if len(self.beta) != max(0, len(self.alpha) - 1):
            raise ValueError("beta must have length n-1")
        self.alpha.setflags(write=False)
        self.beta.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.alpha)

    def norm_est(self) -> float:
        """Cheap upper bound on the spectral radius."""
        top = float(np.abs(self.alpha).max()) if self.n else 0.0
        if len(self.beta):
            top += 2.0 * float(np.abs(self.beta).max())
        return top

    def toarray(self) -> np.ndarray:
        a = np.diag(self.alpha)
        if len(self.beta):
            a += np.diag(self.beta, 1) + np.diag(self.beta, -1)
        return a


@dataclass(frozen=True)
class InertiaCount:
    """#{eigenvalues <= shift}, with the method that produced it."""

    shift: float
    count: int
    method: str


def tridiagonalize(m: BandedSymmetricMatrix, dense_cap: int = DENSE_CAP) -> TridiagonalForm:
    """Householder reduction to tridiagonal form (spectrum-preserving).

    Tridiagonal input passes through unchanged.
    """
    if not np.all(np.isfinite(m.band)):
        raise ValueError("non-finite entries in matrix")
    n = m.n
    if m.bandwidth <= 1 or n == 1:
        alpha = m.band[0].copy()
        if m.bandwidth >= 1 and n > 1:
            beta = m.band[1, : n - 1].copy()
        else:
            beta = np.zeros(max(0, n - 1))
        return TridiagonalForm(alpha=alpha, beta=beta)
    if n > dense_cap:
        raise FactorizationError(
            f"dense Householder path capped at n={dense_cap}, got n={n}"
        )
    a = np.zeros((n, n), order="F")
    for r in range(m.bandwidth + 1):
        w = n - r
        if w <= 0:
            break
        a[np.arange(r, n), np.arange(w)] = m.band[r, :w]
    _, d, e, _, info = lapack.dsytrd(a, lower=1)
    if info != 0:  # pragma: no cover - dsytrd only fails on bad arguments
        raise FactorizationError(f"dsytrd failed with info={info}")
    return TridiagonalForm(alpha=np.asarray(d, dtype=np.float64), beta=np.asarray(e, dtype=np.float64))


def _pivmin(t: TridiagonalForm) -> float:
    b2max = float((t.beta**2).max()) if len(t.beta) else 0.0
    return _SAFMIN * max(1.0, b2max)


def sturm_counts(t: TridiagonalForm, shifts: np.ndarray) -> np.ndarray:
    """Vectorized Sturm-sequence counts #{eigenvalues <= shift} for each shift."""
    shifts = np.asarray(shifts, dtype=np.float64)
    pivmin = _pivmin(t)
    b2 = t.beta**2
    count = np.zeros(shifts.shape, dtype=np.int64)
    d = np.zeros(shifts.shape)
    for i in range(t.n):
        if i == 0:
            d = t.alpha[0] - shifts
        else:
            d = (t.alpha[i] - shifts) - b2[i - 1] / d
        d = np.where(np.abs(d) < pivmin, -pivmin, d)
        count += d <= 0.0
    return count


def sturm_count(t: TridiagonalForm, mu: float) -> InertiaCount:
    """Exact count of eigenvalues <= mu via the safeguarded Sturm recurrence."""
    c = sturm_counts(t, np.asarray([float(mu)]))
    return InertiaCount(shift=float(mu), count=int(c[0]), method="sturm")


def eigs_in_window(
    t: TridiagonalForm, a: float, b: float, tol: float
) -> np.ndarray:
    """Eigenvalues of T in the closed window [a, b], each within tol of a true one.

    Bisection driven by Sturm counts; repeated eigenvalues come back with
    multiplicity.  The returned count equals sturm(b) - sturm(a-).
    """
    if a > b:
        raise ValueError(f"empty window: a={a} > b={b}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    floor = 4.0 * _EPS * max(1.0, t.norm_est())
    stop = max(tol, floor)
    if tol < floor:
        warnings.warn(
            f"window tolerance {tol} below attainable precision, clamped to {stop}",
            RuntimeWarning,
            stacklevel=2,
        )
    a_minus = float(np.nextafter(a, -np.inf))
    n_lo = int(sturm_counts(t, np.asarray([a_minus]))[0])
    n_hi = int(sturm_counts(t, np.asarray([float(b)]))[0])
    m = n_hi - n_lo
    if m <= 0:
        return np.empty(0)
    ks = np.arange(n_lo + 1, n_hi + 1)
    los = np.full(m, a_minus)
    his = np.full(m, float(b))
    while float(np.max(his - los)) > stop:
        mids = 0.5 * (los + his)
        counts = sturm_counts(t, mids)
        go_left = counts >= ks
        his = np.where(go_left, mids, his)
        los = np.where(go_left, los, mids)
    return np.sort(0.5 * (los + his))


def full_spectrum(t: TridiagonalForm, check_trace: bool = False) -> np.ndarray:
    """All n eigenvalues, ascending (root-free implicit QL/QR with shifts)."""
    if t.n == 0:
        return np.empty(0)
    if t.n == 1:
        return t.alpha.copy()
    w, info = lapack.dsterf(t.alpha.copy(), t.beta.copy())
    if info != 0:
        raise ConvergenceError(
            f"QL iteration exceeded 30 sweeps; {info} off-diagonal element(s) "
            f"failed to converge (first at index {info})"
        )
    w = np.asarray(w, dtype=np.float64)
    if check_trace:
        drift = abs(float(w.sum()) - float(t.alpha.sum()))
        if drift > 1e-8 * t.n * max(1.0, t.norm_est()):
            raise ConvergenceError(f"trace drift {drift} beyond tolerance")
    return w


def _banded_ldlt_negatives(band: np.ndarray, mu: float, breakdown: float) -> int | None:
    """Negative-pivot count of the in-band LDLT of (M - mu I); None on breakdown.

    Column update: with pivot d and multipliers l, the trailing band block
    loses d * l_r l_s at A[j+r, j+s]; in band storage that is a parallelogram,
    addressed as a strided view of the (zero-padded) outer product.
    """
    kd = band.shape[0] - 1
    n = band.shape[1]
    work = band.copy()
    work[0, :] -= mu
    if kd == 0:
        return int(np.count_nonzero(work[0] < 0.0)) if np.all(np.abs(work[0]) >= breakdown) else None
    pad = np.zeros((2 * kd - 1, kd)) if kd > 1 else np.zeros((1, 1))
    neg = 0
    for j in range(n):
        d = work[0, j]
        if abs(d) < breakdown:
            return None
        if d < 0.0:
            neg += 1
        m = min(kd, n - 1 - j)
        if m == 0:
            continue
        l = work[1 : m + 1, j] / d
        pad[: 2 * m - 1, :m] = 0.0
        pad[:m, :m] = d * np.outer(l, l)
        s0, s1 = pad.strides
        v = as_strided(pad, shape=(m, m), strides=(s0, s0 + s1))
        work[0:m, j + 1 : j + 1 + m] -= v
    return neg


def banded_inertia(m: BandedSymmetricMatrix, mu: float) -> InertiaCount:
    """#{eigenvalues <= mu} via LDLT within the band.

    A pivot breakdown (exact-eigenvalue shift) retries once at
    mu + 64 ulp ||M||, which also converts the raw "<" count to "<=".
    """
    norm = max(1.0, m.inf_norm())
    breakdown = np.sqrt(_SAFMIN) * norm
    shifts = (float(mu), float(mu) + 64.0 * _EPS * norm)
    for shift in shifts:
        neg = _banded_ldlt_negatives(m.band, shift, breakdown)
        if neg is not None:
            return InertiaCount(shift=float(mu), count=int(neg), method="banded-ldl")
    raise FactorizationError(
        f"LDLT pivot breakdown at shift {mu} and at the nudged shift {shifts[1]}"
    )
