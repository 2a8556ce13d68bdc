"""Class groups of imaginary quadratic orders and Mordell equations y^2 = x^3 + d."""

from .arith import Fraction, factor, is_prime, kronecker, squarefree
from .certify import parse_factor_response, render_factor_query, verify_certificate
from .classgroup import (
    Method,
    class_group,
    class_number_analytic,
    class_number_forms_oracle,
    minkowski_bound,
    verify_m_set,
)
from .ideals import (
    QuadIdeal,
    abs_norm,
    factor_ideal,
    ideal_conj,
    ideal_from_generators,
    ideal_mul,
    is_principal,
    kummer_dedekind,
    principal,
    sqrt_2,
)
from .mordell import brute_force_points, check_hypotheses, descent_trace, solve
from .quadring import QuadElem, QuadParams, units
from .timestable import TimesTable, normalize, parse_equation, parse_expr, prove_eq

__version__ = "0.1.0"
