"""Computations in the group ring Z2F modulo the ideal generated by 1 + v + vw."""

from .construction import DESK, Params, load_config, validate
from .freegroup import invert, multiply, parse_word, reduce
from .multiturn import Certificate, RingElement, check_certificate
from .quotient import equal_mod_I, multiply_mod_I, semicanonical_reduce

__all__ = [
    "DESK",
    "Params",
    "load_config",
    "validate",
    "invert",
    "multiply",
    "parse_word",
    "reduce",
    "Certificate",
    "RingElement",
    "check_certificate",
    "equal_mod_I",
    "multiply_mod_I",
    "semicanonical_reduce",
]
