"""Numerics for the Bessel-Struve kernel S_{alpha,lambda} on the unit disk.

Evaluation by series and by quadrature, Janowski-class predicates and
sampled membership, third-order subordination algebra and dominance.
"""

from .errors import (
    ConvergenceError,
    DegenerateDenominatorError,
    DegenerateTargetError,
    DomainError,
    NumericalError,
    PoleError,
)
from .grid import DiskGrid
from .janowski import (
    B_SPLIT,
    Certification,
    JanowskiPair,
    RegionRecord,
    certify,
    check_close_to_convex,
    check_theorem1,
    check_theorem2,
    numeric_membership,
    scan_region,
    solve_alpha0,
)
from .kernel import (
    DEFAULT_CONFIG,
    EvalConfig,
    KernelParams,
    eval_derivative,
    eval_integral,
    eval_series,
    ode_residual,
    recurrence_residual,
)
from .third_order import (
    beta_transforms,
    chain_identities_residuals,
    eval_g,
    inverse_beta,
    numeric_dominance,
)
from .verify import verify_all

__version__ = "0.1.0"
