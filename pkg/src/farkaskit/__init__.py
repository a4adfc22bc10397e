"""farkaskit: exact rational Farkas machinery over polyhedral data.

Linear systems, certificates of (in)feasibility and nonnegativity,
closedness criteria for the certificate cones, LP duality with attainment
analysis, semi-infinite grid systems, and a polynomial band-approximation
demo -- all in exact rational arithmetic.
"""

from .errors import InputFormatError, InvariantViolation
from .rational import INF, NEG_INF, Q, as_q, q_str

__version__ = "0.1.0"

__all__ = [
    "INF",
    "NEG_INF",
    "Q",
    "as_q",
    "q_str",
    "InputFormatError",
    "InvariantViolation",
    "__version__",
]
