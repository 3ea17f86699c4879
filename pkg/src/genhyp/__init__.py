"""Generalized hyperbolic triangles and the variational curvature problems built on them."""
from .errors import (
    ConvergenceError,
    DegenerateError,
    DomainError,
    DomainExitError,
    GenHypError,
    InfeasibleError,
    InputError,
    ParseError,
    QuadratureError,
    RealizabilityError,
    SizeError,
    UnsupportedCaseError,
    ValidationError,
)
from .trig import (
    GeneralizedTriangle,
    gram_angles,
    gram_lengths,
    jacobian_dl_dtheta,
    jacobian_dtheta_dl,
    law_angles_from_lengths,
    law_length_from_angles,
    law_sas,
    m_matrix,
    rho,
    rho_prime,
    tau,
    tau_prime,
)
from .appendix import appendix_laws

__version__ = "0.1.0"
