"""Signal flow calculus workbench.

Circuits are terms over a small set of generators.  Their meaning is a linear
relation over rational functions in ``x``; they also run as register
machines on streams of rationals, and any circuit can be rewired into an
executable signal flow graph.
"""

from ._kernels import BACKEND
from .algebra import Frac, Poly, parse_frac, parse_poly, series_expand
from .circuit import classify, parse, parse_file, sort_of, to_dsl
from .errors import InvariantViolation, SigflowError
from .machine import check_init_free, check_receptive, simulate
from .realise import as_rational_matrix, realise, trace_form
from .semantics import axiom_corpus, dsem, equivalent

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Frac", "Poly", "parse_frac", "parse_poly", "series_expand", "classify", "parse",
    "parse_file", "sort_of", "to_dsl", "InvariantViolation", "SigflowError", "check_init_free",
    "check_receptive", "simulate", "as_rational_matrix", "realise", "trace_form", "axiom_corpus",
    "dsem", "equivalent",
]
