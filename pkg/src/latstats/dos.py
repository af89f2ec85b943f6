"""Lattice density of states n_r, integrated DOS, and the candidate limit measure.

n_r is the distribution density of sum_{i=1..r} 2 cos(theta_i) with the
theta_i independent and uniform on (0, pi) -- equivalently the density of
the spectral measure of the r-dimensional lattice Laplacian at the origin
vector.  n_1(E) = 1/(pi sqrt(4-E^2)) with integrable inverse-square-root
edges; n_2 has a logarithmic peak at 0; smoothness improves with r.

Grids are built so the trapezoid rule on the stored nodes reproduces the
measure: r = 1 stores the closed form with a mass-consistent edge zone
(the singular edge cells carry their exact mass), r >= 2 comes from the
angle-substituted convolution n_r(E) = (1/pi) integral n_{r-1}(E - 2cos
theta) dtheta whose substitution theta = theta(phi) removes the endpoint
inverse-square-root, followed by symmetrization and renormalization.

The candidate scaling limit of the rescaled local measures is evaluated
literally as   sum_k integral_0^pi sin(theta) n_{d-1}(E - 2cos theta)
f(pi k sin(theta)) dtheta,   truncated by the support of f and refined
until self-convergent.  Its overall normalization is not asserted anywhere;
comparisons against finite-volume data are emitted as tables only.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import j0, roots_legendre

from .serialize import write_csv

__all__ = [
    "dos_1d",
    "DensityGrid",
    "dos_grid",
    "ids",
    "FourierDecayResult",
    "fourier_decay_check",
    "LimitMeasureSpec",
    "LimitIntegralResult",
    "limit_measure_integral",
    "limit_comparison_table",
]


def dos_1d(E):
    """Closed-form 1-d density 1/(pi sqrt(4-E^2)); domain |E| < 2."""
    e = np.asarray(E, dtype=np.float64)
    if np.any(np.abs(e) >= 2.0):
        raise ValueError("dos_1d is defined for |E| < 2 (integrable singularity at the edges)")
    out = 1.0 / (np.pi * np.sqrt(4.0 - e * e))
    return float(out) if out.ndim == 0 else out


def _cdf_1d(x):
    """P(2 cos U <= x), U uniform on (0, pi)."""
    return 1.0 - np.arccos(np.clip(np.asarray(x, dtype=np.float64) / 2.0, -1.0, 1.0)) / np.pi


@dataclass(frozen=True)
class DensityGrid:
    """n_r sampled on a uniform energy grid over [-2r, 2r]."""

    r: int
    energies: np.ndarray
    values: np.ndarray
    meta: tuple = ()  # quadrature provenance, (key, value) pairs

    @property
    def spacing(self) -> float:
        return float(self.energies[1] - self.energies[0])

    def trapz_mass(self) -> float:
        return float(np.trapezoid(self.values, dx=self.spacing))

    def _cumulative(self) -> np.ndarray:
        h = self.spacing
        cells = 0.5 * h * (self.values[:-1] + self.values[1:])
        return np.concatenate(([0.0], np.cumsum(cells)))

    def integrate(self, a: float, b: float) -> float:
        """integral_a^b n_r, interval clipped to the grid span."""
        if a >= b:
            raise ValueError(f"need a < b, got ({a}, {b})")
        cum = self._cumulative()
        lo = float(np.clip(a, self.energies[0], self.energies[-1]))
        hi = float(np.clip(b, self.energies[0], self.energies[-1]))
        f_lo, f_hi = np.interp([lo, hi], self.energies, cum)
        return float(f_hi - f_lo)

    def interp(self, x) -> np.ndarray:
        """Linear interpolation, zero outside the grid."""
        return np.interp(np.asarray(x, dtype=np.float64), self.energies, self.values, left=0.0, right=0.0)

    def to_csv(self, path, metadata: dict | None = None) -> None:
        write_csv(path, ["E", "n"], zip(self.energies.tolist(), self.values.tolist()), metadata)


def _grid_1d(grid_size: int) -> DensityGrid:
    """Closed form with a mass-consistent edge zone.

    The outermost nodes are chosen so each edge-zone cell's trapezoid equals
    its exact mass (the arcsin CDF); pointwise values away from +-2 are the
    exact density.  The residual interior drift is closed onto the two
    boundary nodes, so the whole grid integrates to 1 exactly.
    """
    e = np.linspace(-2.0, 2.0, grid_size)
    h = e[1] - e[0]
    z = max(2, min(100, grid_size // 8))
    v = np.empty(grid_size)
    v[z:-z] = 1.0 / (np.pi * np.sqrt(4.0 - e[z:-z] ** 2))
    cdf = 0.5 + np.arcsin(np.clip(e / 2.0, -1.0, 1.0)) / np.pi
    for i in range(z - 1, -1, -1):  # left edge, seam inward value exact
        mass = cdf[i + 1] - cdf[i]
        v[i] = 2.0 * mass / h - v[i + 1]
    v[-z:] = v[:z][::-1]
    residual = 1.0 - float(np.trapezoid(v, dx=h))
    v[0] += residual / h
    v[-1] += residual / h
    meta = (("method", "closed form, mass-consistent edge zone"), ("edge_zone", z))
    return DensityGrid(r=1, energies=e, values=v, meta=meta)


def _n2_pointwise(e: np.ndarray, order: int = 384) -> np.ndarray:
    """n_2 by the double angle substitution, vectorized over the grid.

    n_2(E) = (1/pi^2) integral over {theta : |E - 2cos theta| < 2} of
    (4 - (E-2cos theta)^2)^(-1/2); the substitution theta = theta_a +
    (theta_b - theta_a)(1 - cos phi)/2 flattens the inverse-square-root
    endpoints.  Divergent only at E = 0 (handled by the caller).
    """
    e = np.asarray(e, dtype=np.float64)[:, None]
    th_a = np.arccos(np.clip((e + 2.0) / 2.0, -1.0, 1.0))
    th_b = np.arccos(np.clip((e - 2.0) / 2.0, -1.0, 1.0))
    phi, w = roots_legendre(order)
    phi = 0.5 * np.pi * (phi + 1.0)
    w = 0.5 * np.pi * w
    theta = th_a + (th_b - th_a) * 0.5 * (1.0 - np.cos(phi)[None, :])
    arg = e - 2.0 * np.cos(theta)
    quad = (2.0 - arg) * (2.0 + arg)
    np.clip(quad, 1e-300, None, out=quad)
    integrand = np.sin(phi)[None, :] / np.sqrt(quad)
    return ((th_b - th_a).ravel() * 0.5) * (integrand @ w) / np.pi**2


def _center_cell_average(h: float, order: int = 4096) -> float:
    """Mass of n_2 on [-h/2, h/2] divided by h (the log node's stored value)."""
    phi, w = roots_legendre(order)
    theta = 0.5 * np.pi * (phi + 1.0)
    w = 0.5 * np.pi * w
    c = 2.0 * np.cos(theta)
    mass = np.sum(w * (_cdf_1d(h / 2.0 - c) - _cdf_1d(-h / 2.0 - c))) / np.pi
    return float(mass / h)


def _convolve_step(prev: DensityGrid, grid_size: int, order: int = 512) -> np.ndarray:
    """n_r(E) = (1/pi) integral n_{r-1}(E - 2cos theta) dtheta on a new grid."""
    r = prev.r + 1
    e = np.linspace(-2.0 * r, 2.0 * r, grid_size)
    phi, w = roots_legendre(order)
    theta = 0.5 * np.pi * (phi + 1.0)
    w = 0.5 * np.pi * w
    shifts = 2.0 * np.cos(theta)
    vals = np.zeros(grid_size)
    for t, wt in zip(shifts, w):  # loop over quadrature nodes, vectorized in E
        vals += wt * prev.interp(e - t)
    return vals / np.pi


@lru_cache(maxsize=8)
def dos_grid(r: int, grid_size: int | None = None) -> DensityGrid:
    """Density grid for n_r; normalization and symmetry enforced."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if grid_size is None:
        grid_size = 20001 if r == 1 else 4001
    if grid_size < 512 or grid_size % 2 == 0:
        raise ValueError("grid_size must be an odd number >= 513")
    if r == 1:
        return _grid_1d(grid_size)
    if r == 2:
        e = np.linspace(-4.0, 4.0, grid_size)
        v = _n2_pointwise(e)
        mid = grid_size // 2
        v[mid] = _center_cell_average(float(e[1] - e[0]))
        meta = (("method", "double angle substitution"), ("order", 384),
                ("center_node", "cell average"))
    else:
        prev = dos_grid(r - 1, grid_size)
        e = np.linspace(-2.0 * r, 2.0 * r, grid_size)
        v = _convolve_step(prev, grid_size)
        meta = (("method", "angle-substituted convolution"), ("order", 512),
                ("from_r", r - 1))
    v = 0.5 * (v + v[::-1])
    np.clip(v, 0.0, None, out=v)
    mass = float(np.trapezoid(v, dx=e[1] - e[0]))
    v /= mass
    return DensityGrid(r=r, energies=e, values=v, meta=meta)


def ids(r: int, a: float, b: float, grid_size: int | None = None) -> float:
    """Integrated DOS N_r((a, b)), clipped to [-2r, 2r]."""
    return dos_grid(r, grid_size).integrate(a, b)


@dataclass(frozen=True)
class FourierDecayResult:
    r: int
    t: np.ndarray
    abs_char: np.ndarray
    weighted: np.ndarray  # |nhat_r(t)| * t^(r/2)
    sup_weighted: float


def fourier_decay_check(r: int, t_grid=None) -> FourierDecayResult:
    """|nhat_r(t)| = |J_0(2t)|^r against the t^(-r/2) decay rate.

    nhat_r is the characteristic function of one cosine term raised to the
    r-th power (probabilist's convention: nhat_r(0) = 1).
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    t = np.linspace(10.0, 1000.0, 3961) if t_grid is None else np.asarray(t_grid, dtype=np.float64)
    abs_char = np.abs(j0(2.0 * t)) ** r
    weighted = abs_char * t ** (r / 2.0)
    return FourierDecayResult(
        r=r, t=t, abs_char=abs_char, weighted=weighted, sup_weighted=float(weighted.max())
    )


# ---------------------------------------------------------------------------
# candidate limit measure


@dataclass(frozen=True)
class LimitMeasureSpec:
    """Evaluation parameters for the candidate limit of the local measures."""

    d: int
    E: float
    theta_order: int = 128
    k_margin: float = 2.0
    rel_tol: float = 1e-3
    max_refine: int = 4

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("the formula uses n_{d-1}; need d >= 2")
        if abs(self.E) >= 2 * self.d:
            raise ValueError(f"E={self.E} outside (-2d, 2d)")


@dataclass(frozen=True)
class LimitIntegralResult:
    value: float
    self_convergence: float
    theta_order: int
    k_max: int


def _gl_nodes(a: float, b: float, order: int):
    x, w = roots_legendre(order)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def _k_term_full(spec: LimitMeasureSpec, f, density: DensityGrid, theta_order: int, k: int) -> float:
    """One +-k pair integrated over the whole theta range (small-k case)."""
    theta, w = _gl_nodes(0.0, np.pi, 2 * theta_order)
    sin_t = np.sin(theta)
    dens = density.interp(spec.E - 2.0 * np.cos(theta))
    args = np.pi * k * sin_t
    return float(np.sum(w * sin_t * dens * (f(args) + f(-args))))


def _k_batch(
    spec: LimitMeasureSpec, f, density: DensityGrid, theta_order: int,
    ks: np.ndarray, s_f: float,
) -> np.ndarray:
    """+-k pair terms for a batch of k with s_f/(pi k) < 1, vectorized.

    For each k the integrand lives on [0, arcsin(s*)] and its mirror
    [pi - arcsin(s*), pi]; each region gets its own scaled Gauss-Legendre
    rule.  The +-k pair shares nodes, so reflecting f only commutes
    additions and the result is exactly invariant.
    """
    x, w = roots_legendre(theta_order)
    a = np.arcsin(s_f / (np.pi * ks))[:, None]  # (nk, 1)
    out = np.zeros(len(ks))
    for left in (True, False):
        theta = a * 0.5 * (x + 1.0) if left else np.pi - a * 0.5 * (x + 1.0)
        wts = a * 0.5 * w
        sin_t = np.sin(theta)
        dens = density.interp(spec.E - 2.0 * np.cos(theta))
        args = np.pi * ks[:, None] * sin_t
        pair = f(args) + f(-args)
        out += np.sum(wts * sin_t * dens * pair, axis=1)
    return out


def _limit_sum(
    spec: LimitMeasureSpec, f, density: DensityGrid, theta_order: int, k_min: int,
    k_cap: int = 500_000,
) -> tuple[float, int, float]:
    """Adaptive k-sum: terms fall off like 1/k^2, so the tail beyond K is
    about (last batch sum) * K / batch size; extend until that estimate is
    well inside the tolerance budget.

    Returns (value, k_used, absolute tail estimate).
    """
    lo, hi = f.support
    s_f = max(abs(lo), abs(hi)) + 1e-12
    theta0, w0 = _gl_nodes(0.0, np.pi, 4 * theta_order)
    dens0 = density.interp(spec.E - 2.0 * np.cos(theta0))
    total = float(f(0.0)) * float(np.sum(w0 * np.sin(theta0) * dens0))
    budget_rel = 0.02 * spec.rel_tol
    k_full = int(np.floor(s_f / np.pi))  # these k need the whole theta range
    for k in range(1, k_full + 1):
        total += _k_term_full(spec, f, density, theta_order, k)
    k = k_full
    tail = 0.0
    batch = 32
    while k < k_cap:
        ks = np.arange(k + 1, k + batch + 1, dtype=np.float64)
        terms = _k_batch(spec, f, density, theta_order, ks, s_f)
        total += float(terms.sum())
        k += batch
        tail = abs(float(terms[-8:].sum())) * k / 8.0
        if k >= k_min and tail <= budget_rel * max(abs(total), 1e-300):
            break
        batch = min(2 * batch, 4096)
    return total, k, tail


def limit_measure_integral(
    spec: LimitMeasureSpec, f, density: DensityGrid | None = None
) -> LimitIntegralResult:
    """Evaluate the candidate limit against f, refining until self-convergent.

    The reported self-convergence is the relative change under doubling the
    quadrature order plus the k-truncation tail estimate; enlarging the
    order or the k range further never moves the value by more than it.
    """
    if spec.d < 4:
        warnings.warn(
            f"the limit formula is proposed for d >= 4; d={spec.d} runs outside that regime",
            RuntimeWarning,
            stacklevel=2,
        )
    if density is None:
        density = dos_grid(spec.d - 1)
    lo, hi = f.support
    s_f = max(abs(lo), abs(hi))
    k_min = int(np.ceil((s_f + spec.k_margin) / np.pi)) + 4
    order = spec.theta_order
    prev, _, _ = _limit_sum(spec, f, density, order, k_min)
    for _ in range(spec.max_refine):
        order2 = 2 * order
        cur, k_used, tail = _limit_sum(spec, f, density, order2, k_min)
        scale = max(abs(cur), 1e-300)
        reported = abs(cur - prev) / scale + tail / scale
        if reported <= spec.rel_tol:
            return LimitIntegralResult(
                value=cur, self_convergence=reported, theta_order=order2, k_max=k_used
            )
        prev, order = cur, order2
    raise RuntimeError(
        f"limit-measure evaluation did not self-converge to {spec.rel_tol:.1e}: "
        f"last figure {reported:.3e} at theta_order={order}"
    )


def limit_comparison_table(spec: LimitMeasureSpec, f, Ls, atom_cap: int | None = None):
    """Rows (L_or_limit, value, self_convergence) comparing finite-volume
    window masses with the candidate limit.  No agreement is asserted."""
    from .measures import free_measure, integrate  # local import to avoid a cycle

    lo, hi = f.support
    k_w = max(abs(lo), abs(hi)) + 0.5
    rows = []
    for L in Ls:
        kwargs = {} if atom_cap is None else {"atom_cap": atom_cap}
        val = integrate(free_measure(spec.d, L, spec.E, k_w, **kwargs), f)
        rows.append((str(L), val, ""))
    res = limit_measure_integral(spec, f)
    rows.append(("limit", res.value, res.self_convergence))
    return rows
