"""Finite-volume lattice model: cubes, disorder, potential envelopes, Hamiltonians.

The model lives on the cube Lambda_L = {n in Z^d : |n_i| <= L} with the
adjacency Laplacian (Delta u)(n) = sum_{|m-n|=1} u(m) (coordinate-step
neighbours, no wraparound) and a diagonal random potential v_n = a_n * q_n,
where a_n is a deterministic envelope and q_n are i.i.d. site variables.

Conventions fixed here and relied on everywhere else:
  * sites are enumerated lexicographically over (n_1, ..., n_d), each
    coordinate running -L..L; index(n) = sum_i (n_i + L) (2L+1)^(d-i)
  * the envelope's |n| is Euclidean; the cube itself is a sup-norm ball
  * disorder is counter-based: q_n is a pure function of
    (master_seed, site coordinates, law), so regeneration is bitwise
    reproducible regardless of evaluation order or cube size
  * matrices are stored as the lower band, LAPACK-style:
    band[i, j] = A[j+i, j], bandwidth (2L+1)^(d-1)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

__all__ = [
    "CubeSpec",
    "DecayingProfile",
    "ConstantProfile",
    "UniformSymmetric",
    "UniformUnit",
    "BernoulliSign",
    "GaussianLaw",
    "SiteField",
    "BandedSymmetricMatrix",
    "enumerate_cube",
    "envelope",
    "site_values",
    "sample_disorder",
    "realize_field",
    "assemble_hamiltonian",
]

# Largest matrix order we are willing to address (entries of the band
# storage must stay well inside int32 indexing territory).
MAX_SITES = 2**31


@dataclass(frozen=True)
class CubeSpec:
    """Cube Lambda_L in Z^d, sites enumerated lexicographically."""

    d: int
    L: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got d={self.d}")
        if self.L < 1:
            raise ValueError(f"half side length must be >= 1, got L={self.L}")

    @property
    def side(self) -> int:
        return 2 * self.L + 1

    @property
    def size(self) -> int:
        return self.side**self.d

    @property
    def bandwidth(self) -> int:
        """Band of the lexicographic Laplacian: (2L+1)^(d-1)."""
        return self.side ** (self.d - 1)

    def index_of(self, site) -> np.ndarray | int:
        """Lexicographic index of a site (or array of sites, shape (..., d))."""
        site = np.asarray(site, dtype=np.int64)
        if site.shape[-1] != self.d:
            raise ValueError(f"site has {site.shape[-1]} coordinates, cube has d={self.d}")
        if np.any(np.abs(site) > self.L):
            raise ValueError("site outside the cube")
        strides = self.side ** np.arange(self.d - 1, -1, -1, dtype=np.int64)
        idx = ((site + self.L) * strides).sum(axis=-1)
        return int(idx) if idx.ndim == 0 else idx


def enumerate_cube(spec: CubeSpec) -> np.ndarray:
    """All sites of the cube in lexicographic order, shape (N, d) int64.

    Row i is the site with index i; together with CubeSpec.index_of this
    is the bijection onto 0..N-1.
    """
    if spec.size > MAX_SITES:
        raise ValueError(
            f"cube has {spec.size} sites, beyond the addressable cap {MAX_SITES}"
        )
    ax = np.arange(-spec.L, spec.L + 1, dtype=np.int64)
    grids = np.meshgrid(*([ax] * spec.d), indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=-1)


# ---------------------------------------------------------------------------
# potential envelopes


@dataclass(frozen=True)
class DecayingProfile:
    """Envelope a_n = C (1 + |n|_2)^(-2-eps); a_n (1+|n|)^(2+eps) = C is bounded."""

    amplitude: float = 1.0
    epsilon: float = 0.5

    def __post_init__(self):
        if self.amplitude <= 0:
            raise ValueError("amplitude must be positive")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")

    def envelope_at(self, sites: np.ndarray) -> np.ndarray:
        sites = np.atleast_2d(np.asarray(sites, dtype=np.float64))
        r = np.sqrt((sites * sites).sum(axis=-1))
        return self.amplitude * (1.0 + r) ** (-2.0 - self.epsilon)

    def label(self) -> str:
        return f"decaying(C={self.amplitude},eps={self.epsilon})"


@dataclass(frozen=True)
class ConstantProfile:
    """Constant coupling a_n = eta (the weak-coupling regime)."""

    eta: float = 1.0

    def __post_init__(self):
        if self.eta < 0:
            raise ValueError("eta must be >= 0")

    def envelope_at(self, sites: np.ndarray) -> np.ndarray:
        sites = np.atleast_2d(np.asarray(sites, dtype=np.float64))
        return np.full(sites.shape[0], self.eta)

    def label(self) -> str:
        return f"constant(eta={self.eta})"


def envelope(profile, n) -> float | np.ndarray:
    """Envelope value a_n at a single site or an array of sites."""
    arr = np.asarray(n, dtype=np.float64)
    scalar = arr.ndim <= 1
    out = profile.envelope_at(arr)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# disorder laws: each has samples u -> q and a closed-form E|q|


@dataclass(frozen=True)
class UniformSymmetric:
    """q uniform on [-w, w]; E|q| = w/2, Var|q| = w^2/12."""

    halfwidth: float = 1.0

    def from_uniform(self, u: np.ndarray) -> np.ndarray:
        return self.halfwidth * (2.0 * u - 1.0)

    def mean_abs(self) -> float:
        return self.halfwidth / 2.0

    def label(self) -> str:
        return f"uniform_sym(w={self.halfwidth})"


@dataclass(frozen=True)
class UniformUnit:
    """q uniform on [0, 1]; E|q| = 1/2."""

    def from_uniform(self, u: np.ndarray) -> np.ndarray:
        return u

    def mean_abs(self) -> float:
        return 0.5

    def label(self) -> str:
        return "uniform01"


@dataclass(frozen=True)
class BernoulliSign:
    """q = +1 with probability p, else -1; |q| = 1 identically."""

    p: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    def from_uniform(self, u: np.ndarray) -> np.ndarray:
        return np.where(u < self.p, 1.0, -1.0)

    def mean_abs(self) -> float:
        return 1.0

    def label(self) -> str:
        return f"bernoulli(p={self.p})"


@dataclass(frozen=True)
class GaussianLaw:
    """q ~ N(0, sigma^2); E|q| = sigma sqrt(2/pi)."""

    sigma: float = 1.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")

    def from_uniform(self, u: np.ndarray) -> np.ndarray:
        return self.sigma * ndtri(u)

    def mean_abs(self) -> float:
        return self.sigma * np.sqrt(2.0 / np.pi)

    def label(self) -> str:
        return f"gaussian(sigma={self.sigma})"


# ---------------------------------------------------------------------------
# counter-based per-site randomness (SplitMix64 over the coordinates)

_U64 = np.uint64
_MIX1 = _U64(0x9E3779B97F4A7C15)
_MIX2 = _U64(0xBF58476D1CE4E5B9)
_MIX3 = _U64(0x94D049BB133111EB)


def _mix64(x: np.ndarray) -> np.ndarray:
    x = (x + _MIX1).astype(np.uint64, copy=False)
    x = (x ^ (x >> _U64(30))) * _MIX2
    x = (x ^ (x >> _U64(27))) * _MIX3
    return x ^ (x >> _U64(31))


# one salt per coordinate axis, derived once (array op: silent uint64 wraparound)
_AXIS_SALT = _mix64(np.arange(1, 65, dtype=np.uint64) * _MIX1)


def _site_hash(master_seed: int, sites: np.ndarray) -> np.ndarray:
    """64-bit hash per site, pure in (master_seed, coordinates)."""
    sites = np.atleast_2d(np.asarray(sites, dtype=np.int64))
    h = _mix64(np.full(sites.shape[0], master_seed & 0xFFFFFFFFFFFFFFFF, dtype=np.uint64))
    for axis in range(sites.shape[1]):
        c = sites[:, axis].astype(np.int64).view(np.uint64)
        h = _mix64(h ^ _mix64(c + _AXIS_SALT[axis]))
    return h


def site_values(law, master_seed: int, sites: np.ndarray) -> np.ndarray:
    """Raw disorder q at the given sites; schedule-independent and i.i.d. in law."""
    h = _site_hash(master_seed, sites)
    u = (h >> _U64(11)).astype(np.float64)
    u = (u + 0.5) * 2.0**-53  # strictly inside (0, 1)
    return law.from_uniform(u)


@dataclass(frozen=True)
class SiteField:
    """One realized disorder configuration on a cube.

    q holds the raw i.i.d. variables, v the potential a_n q_n (None until a
    profile is applied).  Arrays are in lexicographic site order.
    """

    cube: CubeSpec
    q: np.ndarray
    v: np.ndarray | None
    master_seed: int
    law_label: str = ""
    profile_label: str = ""

    def __post_init__(self):
        if len(self.q) != self.cube.size:
            raise ValueError("q length does not match the cube")
        if self.v is not None and len(self.v) != self.cube.size:
            raise ValueError("v length does not match the cube")
        self.q.setflags(write=False)
        if self.v is not None:
            self.v.setflags(write=False)

    def abs_potential_sum(self) -> float:
        """sum_n a_n |q_n| over the cube (= sum |v_n| since a_n >= 0)."""
        if self.v is None:
            raise ValueError("field has no potential attached")
        return float(np.abs(self.v).sum())


def sample_disorder(law, master_seed: int, cube: CubeSpec) -> SiteField:
    """Draw the raw disorder q on the cube (no envelope applied yet)."""
    sites = enumerate_cube(cube)
    q = site_values(law, master_seed, sites)
    return SiteField(cube=cube, q=q, v=None, master_seed=master_seed, law_label=law.label())


def realize_field(cube: CubeSpec, profile, law, master_seed: int) -> SiteField:
    """Full site field v_n = a_n q_n on the cube."""
    sites = enumerate_cube(cube)
    q = site_values(law, master_seed, sites)
    a = profile.envelope_at(sites)
    return SiteField(
        cube=cube,
        q=q,
        v=a * q,
        master_seed=master_seed,
        law_label=law.label(),
        profile_label=profile.label(),
    )


# ---------------------------------------------------------------------------
# banded symmetric storage and Hamiltonian assembly


class BandedSymmetricMatrix:
    """Symmetric matrix stored as its lower band, band[i, j] = A[j+i, j].

    Entries of band rows beyond the matrix edge (j + i >= n) are kept at
    zero so whole-row vector operations stay safe.
    """

    def __init__(self, band: np.ndarray):
        band = np.asarray(band, dtype=np.float64)
        if band.ndim != 2:
            raise ValueError("band storage must be 2-d")
        if not np.all(np.isfinite(band)):
            raise ValueError("non-finite entries in banded matrix")
        band.setflags(write=False)  # immutable after construction, shareable
        self.band = band

    @property
    def n(self) -> int:
        return self.band.shape[1]

    @property
    def bandwidth(self) -> int:
        return self.band.shape[0] - 1

    def toarray(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for r in range(self.bandwidth + 1):
            m = self.n - r
            if m <= 0:
                break
            d = self.band[r, :m]
            a[np.arange(r, self.n), np.arange(m)] = d
            if r > 0:
                a[np.arange(m), np.arange(r, self.n)] = d
        return a

    def inf_norm(self) -> float:
        """Max absolute row sum, assembled from the band."""
        acc = np.zeros(self.n)
        for r in range(self.bandwidth + 1):
            m = self.n - r
            if m <= 0:
                break
            v = np.abs(self.band[r, :m])
            acc[r:] += v
            if r > 0:
                acc[:m] += v
        return float(acc.max()) if self.n else 0.0


def assemble_hamiltonian(
    cube: CubeSpec,
    field: SiteField | None = None,
    rescale_energy: float | None = None,
) -> BandedSymmetricMatrix:
    """Banded Delta_L, Delta_L + diag(v), or the rescaled (L+1)(M - E).

    Off-diagonal entries are exactly 1 (or exactly L+1 after rescaling) at
    index pairs whose sites differ by 1 in a single coordinate; the diagonal
    carries the potential.
    """
    if field is not None:
        if field.cube != cube:
            raise ValueError("field was sampled on a different cube")
        if field.v is None:
            raise ValueError("field has no potential attached (apply a profile)")
    n = cube.size
    if n > MAX_SITES:
        raise ValueError(f"cube has {n} sites, beyond the addressable cap {MAX_SITES}")
    b = cube.bandwidth
    band = np.zeros((b + 1, n))
    if field is not None:
        band[0, :] = field.v
    side = cube.side
    # coordinate i has lexicographic stride side^(d-i); a +1 step in that
    # coordinate is a valid neighbour iff n_i < L
    for axis in range(cube.d):
        stride = side ** (cube.d - 1 - axis)
        # index j has coordinate value (j // stride) % side at this axis
        j = np.arange(n - stride)
        ok = (j // stride) % side < side - 1
        band[stride, j[ok]] = 1.0
    if rescale_energy is not None:
        factor = float(cube.L + 1)
        band[0, :] = factor * (band[0, :] - rescale_energy)
        band[1:, :] *= factor
    return BandedSymmetricMatrix(band)
