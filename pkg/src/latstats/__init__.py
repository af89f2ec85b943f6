"""Local eigenvalue statistics of lattice Anderson Hamiltonians.

Builds finite-volume operators Delta_L + V on cubes in Z^d with decaying or
weakly coupled site disorder, computes the rescaled local spectral measures
around a reference energy, and runs desk-scale experiments probing how the
random statistics track the free ones near the band edges.
"""

__version__ = "0.1.0"

from .lattice import (
    BandedSymmetricMatrix,
    BernoulliSign,
    ConstantProfile,
    CubeSpec,
    DecayingProfile,
    GaussianLaw,
    SiteField,
    UniformSymmetric,
    UniformUnit,
    assemble_hamiltonian,
    enumerate_cube,
    envelope,
    realize_field,
    sample_disorder,
)
from .freespec import (
    FreeAtomList,
    count_1d_window,
    eigen_1d,
    enumerate_window,
    multiplicity_audit,
)
from .eigensolve import (
    TridiagonalForm,
    banded_inertia,
    eigs_in_window,
    full_spectrum,
    sturm_count,
    tridiagonalize,
)
from .testfunctions import Bump, Plateau, RaisedCosine2, weighted_fourier_norm
from .measures import (
    AtomicMeasure,
    CountingFunction,
    difference_statistic,
    free_measure,
    integrate,
    integrate_counting,
    perturbation_bound,
    random_measure,
)
from .experiments import (
    PowerScale,
    boundedness_scan,
    decay_experiment,
    edge_singularity_sum,
    gamma_of,
    martingale_trace,
    positivity_check,
    weak_coupling_experiment,
)
from .dos import (
    DensityGrid,
    LimitMeasureSpec,
    dos_1d,
    dos_grid,
    fourier_decay_check,
    ids,
    limit_measure_integral,
)

__all__ = [name for name in dir() if not name.startswith("_")]
