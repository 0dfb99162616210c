"""Fisher-Rényi complexity of one-dimensional densities.

Rényi entropy powers, (p, β)-Fisher information and their product complexity
C_{p,β,λ}; the sharp lower bound K_{p,β,λ} and its minimizers; the
differential-escort transform; d-dimensional hydrogenic and harmonic radial
densities.
"""

__version__ = "0.1.0"

from .density import (
    DensityModel,
    PblGaussianParams,
    StretchedGaussianParams,
    gaussian,
    pbl_gaussian,
    stretched_gaussian,
    translate_scale,
    uniform,
)
from .errors import DivergenceError, DomainError, FRCError, NumericalError, OutOfRangeError
from .escort import EscortMap, escort_transform, escort_uniformize
from .measures import (
    ComplexityReport,
    MeasureParams,
    complexity,
    fisher_info,
    renyi_entropy_power,
    shannon_entropy,
)
from .quadrature import Interval, QuadResult, integrate
from .quantum import PolyEval, QuantumState, energy, gegenbauer, laguerre, radial_density
from .specfun import (
    SpecFunResult,
    beta_fn,
    erf,
    inc_beta,
    inc_gamma_grow,
    inc_gamma_lower,
    inv_inc_beta,
    inv_inc_gamma_grow,
    inv_inc_gamma_lower,
    log_beta,
    log_gamma,
)
from .stam import (
    BoundReport,
    DomainClass,
    EdoResidual,
    affine_A,
    classify,
    edo_residual,
    hoelder_conjugate,
    in_domain_tilde,
    involution_T,
    sharp_bound,
    zeta,
)

__all__ = [name for name in dir() if not name.startswith("_")]
