"""
freeneg: entanglement negativity of fermionic Gaussian states.

Covariance-matrix tools, the pencil-based negativity, universal bounds,
quadratic Lindblad dynamics, negativity change rates and a dense-matrix
reference implementation for small systems.
"""

from importlib.metadata import PackageNotFoundError, version

from .bounds import (
    BoundReport,
    GaussianChannel,
    apply_channel,
    bound_report,
    identity_channel,
    random_local_channel,
    validate_channel,
)
from .dynamics import (
    LindbladGenerator,
    dgamma_dt,
    evolve_exact,
    evolve_rk4,
    negativity_trajectory,
    steady_state,
)
from .exceptions import (
    ChannelError,
    DivergentAreaLawError,
    FreeNegError,
    InvalidCovarianceError,
    NumericalError,
    SingularBlock,
    SingularGammaA,
    SizeCapError,
    UnitCircleEigenvalue,
)
from .gaussian import (
    Bipartition,
    BlockView,
    CovarianceMatrix,
    QuadraticHamiltonian,
    gibbs_covariance,
    norms,
    partition,
    purity,
    random_mixed_covariance,
    vacuum_covariance,
    validate,
)
from .models import (
    area_law_bound,
    cdw_covariance,
    clustering_constant,
    finite_area_law_bound,
    kitaev_chain,
    long_range_hopping,
    tight_binding,
    uniform_loss,
)
from .negativity import (
    NegativityResult,
    gamma_a_zero_negativity,
    negativity,
    negativity_via_twisted,
    twisted_covariance,
)
from .oracle import oracle_negativity
from .rate import pab, pab_block, pab_quadrature, rate, rate_bounds, rate_decomposition

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # pragma: no cover - source checkout without install
    __version__ = "0.0.0"
