"""Fox calculus over free group rings, primitivity and Delta-primitivity tools."""

__version__ = "0.1.0"

from .words import Word, parse, format_word, RankError, ParseError  # noqa: E402
from .groupring import RingElement, LaurentElement, RingMatrix  # noqa: E402
from .fox import left_derivative, right_derivative, jacobian, double_jacobian, linearized_matrix  # noqa: E402
from .maps import Endomorphism, parse_map, is_automorphism, is_monomorphism  # noqa: E402
from .whitehead import same_orbit, whitehead_minimize, orbit_violation_witness  # noqa: E402
from .primitivity import is_primitive, blocking_verdict, blocking_search  # noqa: E402
from .delta import delta_primitive_m2, verify_inverse_certificate, classify_delta_primitive_f2  # noqa: E402

__all__ = [
    "Word", "parse", "format_word", "RankError", "ParseError",
    "RingElement", "LaurentElement", "RingMatrix",
    "left_derivative", "right_derivative", "jacobian", "double_jacobian", "linearized_matrix",
    "Endomorphism", "parse_map", "is_automorphism", "is_monomorphism",
    "same_orbit", "whitehead_minimize", "orbit_violation_witness",
    "is_primitive", "blocking_verdict", "blocking_search",
    "delta_primitive_m2", "verify_inverse_certificate", "classify_delta_primitive_f2",
]
