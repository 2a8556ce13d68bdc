"""Quadratic rings R[alpha] with alpha^2 = a*alpha + b over Z or Q.

An element ``QuadElem(params, b1, b2)`` stands for ``b1 + b2*alpha``.  With
``a = 0, b = d`` this is ``Z[sqrt(d)]`` (or ``Q(sqrt(d))``); with
``a = 1, b = (d - 1)/4`` it is ``Z[w]``, ``w = (1 + sqrt(d))/2``.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import re

from .arith import is_square, squarefree


class UnsupportedOrder(ValueError):
    """Raised for orders outside the imaginary quadratic setting we handle."""


class Base(Enum):
    ZZ = "ZZ"
    QQ = "QQ"

    def coerce(self, x):
        if self is Base.ZZ:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            if isinstance(x, bool) or not isinstance(x, int):
                raise TypeError(f"expected an integer scalar, got {x!r}")
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return Fraction(x)
        raise TypeError(f"expected a rational scalar, got {x!r}")


@dataclass(frozen=True)
class QuadParams:
    a: object
    b: object
    base: Base = Base.ZZ

    def __post_init__(self):
        object.__setattr__(self, "a", self.base.coerce(self.a))
        object.__setattr__(self, "b", self.base.coerce(self.b))

    @property
    def disc(self):
        """Discriminant a^2 + 4b of the defining polynomial X^2 - aX - b."""
        return self.a * self.a + 4 * self.b

    def is_domain(self):
        """True iff X^2 - aX - b has no root in the base (so R[alpha] has no zero divisors)."""
        return not is_square(self.disc)

    def elem(self, b1=0, b2=0):
        return QuadElem(self, b1, b2)

    @property
    def one(self):
        return QuadElem(self, 1, 0)

    @property
    def zero(self):
        return QuadElem(self, 0, 0)

    @property
    def alpha(self):
        return QuadElem(self, 0, 1)

    def over_QQ(self):
        return QuadParams(self.a, self.b, Base.QQ)

    def over_ZZ(self):
        return QuadParams(self.a, self.b, Base.ZZ)

    def symbol(self):
        if self.a == 0:
            return f"sqrt({self.b})"
        if self.a == 1:
            return "w"
        return "alpha"


def sqrt_params(d, base=Base.ZZ):
    return QuadParams(0, d, base)


@dataclass(frozen=True)
class QuadElem:
    params: QuadParams
    b1: object = 0
    b2: object = 0

    def __post_init__(self):
        base = self.params.base
        object.__setattr__(self, "b1", base.coerce(self.b1))
        object.__setattr__(self, "b2", base.coerce(self.b2))

    def _lift(self, other):
        if isinstance(other, QuadElem):
            if other.params != self.params:
                raise ValueError(f"mismatched params: {self.params} vs {other.params}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadElem(self.params, other, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return QuadElem(self.params, self.b1 + other.b1, self.b2 + other.b2)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(self.params, -self.b1, -self.b2)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return QuadElem(self.params, self.b1 - other.b1, self.b2 - other.b2)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.params.a, self.params.b
        x1, x2, y1, y2 = self.b1, self.b2, other.b1, other.b2
        return QuadElem(
            self.params,
            x1 * y1 + x2 * y2 * b,
            x2 * y1 + x1 * y2 + x2 * y2 * a,
        )

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.params.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self):
        return QuadElem(self.params, self.b1 + self.params.a * self.b2, -self.b2)

    def norm(self):
        a, b = self.params.a, self.params.b
        return self.b1 * self.b1 + a * self.b1 * self.b2 - b * self.b2 * self.b2

    def trace(self):
        return 2 * self.b1 + self.params.a * self.b2

    def inverse(self):
        if self.params.base is not Base.QQ:
            raise ValueError("inverse needs a rational base ring; use over_QQ()")
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("element has zero norm")
        c = self.conj()
        return QuadElem(self.params, c.b1 / n, c.b2 / n)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def is_zero(self):
        return self.b1 == 0 and self.b2 == 0

    def to_QQ(self):
        return QuadElem(self.params.over_QQ(), self.b1, self.b2)

    def to_ZZ(self):
        return QuadElem(self.params.over_ZZ(), self.b1, self.b2)

    def __str__(self):
        return render(self)

    def __iter__(self):
        yield self.b1
        yield self.b2


def cube(x):
    """x**3; uses the closed form a(a^2 + 3b^2 d) + b(3a^2 + b^2 d) sqrt(d) when a = 0."""
    if x.params.a == 0:
        d = x.params.b
        p, q = x.b1, x.b2
        return QuadElem(x.params, p * (p * p + 3 * q * q * d), q * (3 * p * p + q * q * d))
    return x * x * x


# ---------------------------------------------------------------------------
# rings of integers


class ModelKind(Enum):
    SQRT = "sqrt"
    HALF = "half"


@dataclass(frozen=True)
class RingOfIntegersModel:
    d: int
    params: QuadParams
    kind: ModelKind


def ring_of_integers_model(d):
    """Z[sqrt d] for d = 2, 3 (mod 4); Z[(1 + sqrt d)/2] as params (1, (d-1)/4) for d = 1 (mod 4)."""
    if d in (0, 1) or not squarefree(d):
        raise ValueError(f"d = {d} must be squarefree and != 0, 1")
    if d % 4 == 1:
        return RingOfIntegersModel(d, QuadParams(1, (d - 1) // 4), ModelKind.HALF)
    return RingOfIntegersModel(d, QuadParams(0, d), ModelKind.SQRT)


def to_model_basis(x, model):
    """Coordinates of ``p + q*sqrt(d)`` in the model basis {1, alpha}, over QQ."""
    if x.params.a != 0 or x.params.b != model.d:
        raise ValueError("element must be given in the sqrt(d) basis of the model's field")
    p, q = Fraction(x.b1), Fraction(x.b2)
    target = model.params.over_QQ()
    if model.kind is ModelKind.SQRT:
        return QuadElem(target, p, q)
    # p + q sqrt(d) = (p - q) + 2q * w
    return QuadElem(target, p - q, 2 * q)


def from_model_basis(y, model):
    """Inverse of :func:`to_model_basis`; returns an element of Q(sqrt d)."""
    u, v = Fraction(y.b1), Fraction(y.b2)
    target = QuadParams(0, model.d, Base.QQ)
    if model.kind is ModelKind.SQRT:
        return QuadElem(target, u, v)
    return QuadElem(target, u + v / 2, v / 2)


def is_integral(x, model):
    """Whether ``x`` in Q(sqrt d) lies in the ring of integers modelled by ``model``.

    Decided from trace and norm (the minimal polynomial X^2 - 2pX + p^2 - d q^2);
    the answer is cross-checked against membership in the model ring.
    """
    if x.params.a != 0 or x.params.b != model.d:
        raise ValueError("element must be given in the sqrt(d) basis of the model's field")
    x = x.to_QQ() if x.params.base is Base.ZZ else x
    t, n = x.trace(), x.norm()
    integral = t.denominator == 1 and n.denominator == 1
    y = to_model_basis(x, model)
    member = y.b1.denominator == 1 and y.b2.denominator == 1
    assert integral == member, (x, model)
    return integral


# ---------------------------------------------------------------------------
# units


def units(d):
    """All units of Z[sqrt d] for squarefree d <= -1, d = 2, 3 (mod 4)."""
    if d >= 0:
        raise UnsupportedOrder(f"units: real quadratic d = {d} is not supported")
    if d % 4 not in (2, 3) or not squarefree(d):
        raise ValueError(f"units: need squarefree d = 2, 3 (mod 4), got {d}")
    params = QuadParams(0, d)
    out = []
    # p^2 - d q^2 = 1 with -d >= 1 forces |p| <= 1, |q| <= 1
    for p in (-1, 0, 1):
        for q in (-1, 0, 1):
            u = QuadElem(params, p, q)
            if u.norm() == 1:
                out.append(u)
    return sorted(out, key=lambda u: (u.b1, u.b2), reverse=True)


# ---------------------------------------------------------------------------
# text form


def _fmt_scalar(x):
    if isinstance(x, Fraction) and x.denominator != 1:
        return f"{x.numerator}/{x.denominator}"
    return str(int(x))


def render(x):
    """``b1 + b2*sqrt(d)``, ``b1 + b2*w`` or ``b1 + b2*alpha``; the sign of b2 becomes the operator."""
    sym = x.params.symbol()
    sign = "-" if x.b2 < 0 else "+"
    return f"{_fmt_scalar(x.b1)} {sign} {_fmt_scalar(abs(x.b2))}*{sym}"


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<op>[+\-*])|(?P<sym>sqrt\(\s*-?\d+\s*\)|w\b|alpha\b))"
)


def parse(text, params):
    """Parse the rendered form (and simple variants like ``2``, ``sqrt(-5)``, ``1 - 3*w``)."""
    pos, tokens = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at position {pos}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    expected = params.symbol()
    b1 = b2 = Fraction(0)
    i, first = 0, True
    while i < len(tokens):
        sign = 1
        if tokens[i][0] == "op" and tokens[i][1] in "+-":
            sign = -1 if tokens[i][1] == "-" else 1
            i += 1
        elif not first:
            raise ValueError(f"expected + or - at position {tokens[i][2]} in {text!r}")
        first = False
        coeff = Fraction(1)
        has_num = False
        if i < len(tokens) and tokens[i][0] == "num":
            coeff = Fraction(tokens[i][1])
            has_num = True
            i += 1
            if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] == "*":
                i += 1
                if i >= len(tokens) or tokens[i][0] != "sym":
                    raise ValueError(f"expected a symbol after '*' in {text!r}")
        if i < len(tokens) and tokens[i][0] == "sym":
            sym = re.sub(r"\s+", "", tokens[i][1])
            if sym != expected:
                raise ValueError(f"symbol {sym} does not match ring symbol {expected}")
            b2 += sign * coeff
            i += 1
        elif has_num:
            b1 += sign * coeff
        else:
            raise ValueError(f"unexpected token in {text!r}")
    return QuadElem(params, b1, b2)
