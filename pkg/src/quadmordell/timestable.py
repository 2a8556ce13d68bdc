"""Normal forms for polynomial expressions over a finite free ring extension.

A :class:`TimesTable` describes a commutative R-algebra S with basis
``b_0 .. b_{n-1}`` through the structure constants ``b_i * b_j = sum_k t[i][j][k] b_k``.
Each variable ``x`` of an expression is expanded as ``sum_i X_{x,i} b_i`` and the
expression is evaluated bottom-up into one polynomial per basis coordinate.
Two expressions are equal for every substitution iff their normal forms agree.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
import re

from .quadring import Base, QuadElem, QuadParams


class TableError(ValueError):
    pass


@dataclass(frozen=True)
class TimesTable:
    dim: int
    table: tuple
    base: Base = Base.ZZ
    one: tuple = None

    def __post_init__(self):
        n = self.dim
        if len(self.table) != n or any(
            len(r) != n or any(len(c) != n for c in r) for r in self.table
        ):
            raise TableError("table must be dim x dim x dim")
        tab = tuple(
            tuple(tuple(self.base.coerce(c) for c in self.table[i][j]) for j in range(n))
            for i in range(n)
        )
        object.__setattr__(self, "table", tab)
        one = self.one if self.one is not None else tuple(int(k == 0) for k in range(n))
        object.__setattr__(self, "one", tuple(self.base.coerce(c) for c in one))
        self._validate()

    def _validate(self):
        n = self.dim
        for i, j in product(range(n), repeat=2):
            if self.table[i][j] != self.table[j][i]:
                raise TableError(f"table is not symmetric at ({i}, {j})")
        basis = [tuple(int(k == i) for k in range(n)) for i in range(n)]
        for i in range(n):
            if self.mul_vec(self.one, basis[i]) != basis[i]:
                raise TableError(f"'one' is not a multiplicative identity on b_{i}")
        for i, j, k in product(range(n), repeat=3):
            left = self.mul_vec(self.mul_vec(basis[i], basis[j]), basis[k])
            right = self.mul_vec(basis[i], self.mul_vec(basis[j], basis[k]))
            if left != right:
                raise TableError(f"product is not associative on (b_{i}, b_{j}, b_{k})")

    def mul_vec(self, x, y):
        """Multiply two concrete coordinate vectors."""
        out = [0] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                row = self.table[i][j]
                for k in range(self.dim):
                    if row[k]:
                        out[k] += xi * yj * row[k]
        return tuple(out)


def table_for_quad(params):
    """Table of R[alpha] on the basis {1, alpha} with alpha^2 = b + a*alpha."""
    a, b = params.a, params.b
    return TimesTable(2, (((1, 0), (0, 1)), ((0, 1), (b, a))), base=params.base)


def table_trivial(base=Base.ZZ):
    """The base ring itself as a rank-one extension."""
    return TimesTable(1, (((1,),),), base=base)


# ---------------------------------------------------------------------------
# expressions


class RingExpr:
    __slots__ = ()

    def __add__(self, other):
        return Add(self, lift(other))

    def __radd__(self, other):
        return Add(lift(other), self)

    def __sub__(self, other):
        return Add(self, Neg(lift(other)))

    def __rsub__(self, other):
        return Add(lift(other), Neg(self))

    def __mul__(self, other):
        return Mul(self, lift(other))

    def __rmul__(self, other):
        return Mul(lift(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, n):
        return Pow(self, n)


def lift(x):
    if isinstance(x, RingExpr):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Const(x)
    raise TypeError(f"cannot use {x!r} in a ring expression")


@dataclass(frozen=True)
class Var(RingExpr):
    name: str


@dataclass(frozen=True)
class Coord(RingExpr):
    """The base-ring scalar X_{name,index}, i.e. one coordinate of a variable."""

    name: str
    index: int


@dataclass(frozen=True)
class Const(RingExpr):
    value: object


@dataclass(frozen=True)
class BasisElem(RingExpr):
    index: int


@dataclass(frozen=True)
class Add(RingExpr):
    left: RingExpr
    right: RingExpr


@dataclass(frozen=True)
class Mul(RingExpr):
    left: RingExpr
    right: RingExpr


@dataclass(frozen=True)
class Neg(RingExpr):
    arg: RingExpr


@dataclass(frozen=True)
class Pow(RingExpr):
    arg: RingExpr
    exp: int

    def __post_init__(self):
        if not isinstance(self.exp, int) or self.exp < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {self.exp!r}")


@dataclass(frozen=True)
class ScalarMul(RingExpr):
    scalar: object
    arg: RingExpr


def substitute(e, mapping):
    """Replace variables by expressions, e.g. ``{"d": 1 - 3*m**2}``."""
    if isinstance(e, Var):
        return lift(mapping[e.name]) if e.name in mapping else e
    if isinstance(e, (Add, Mul)):
        return type(e)(substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, Neg):
        return Neg(substitute(e.arg, mapping))
    if isinstance(e, Pow):
        return Pow(substitute(e.arg, mapping), e.exp)
    if isinstance(e, ScalarMul):
        return ScalarMul(e.scalar, substitute(e.arg, mapping))
    return e


def variables(e):
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Coord):
        return {e.name}
    if isinstance(e, (Add, Mul)):
        return variables(e.left) | variables(e.right)
    if isinstance(e, (Neg, Pow, ScalarMul)):
        return variables(e.arg)
    return set()


# ---------------------------------------------------------------------------
# sparse polynomials
#
# A monomial is a tuple of ((var, coord), exponent) pairs sorted by (var, coord).
# A polynomial is a dict monomial -> nonzero coefficient.


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    out = dict(m1)
    for v, e in m2:
        out[v] = out.get(v, 0) + e
    return tuple(sorted(out.items()))


def _poly_add(p, q, sign=1):
    out = dict(p)
    for m, c in q.items():
        s = out.get(m, 0) + sign * c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _poly_scale(p, c):
    if not c:
        return {}
    return {m: c * v for m, v in p.items()}


def _poly_mul(p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = _mono_mul(m1, m2)
            s = out.get(m, 0) + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def grlex_key(mono):
    """Sort key putting monomials in descending graded-lex order."""
    return (-sum(e for _, e in mono), tuple((v, -e) for v, e in mono))


@dataclass(frozen=True)
class NormalForm:
    """One canonical polynomial per basis coordinate, terms sorted by graded-lex."""

    coords: tuple

    @classmethod
    def from_dicts(cls, polys):
        return cls(tuple(tuple(sorted(p.items(), key=lambda t: grlex_key(t[0]))) for p in polys))

    def dicts(self):
        return [dict(p) for p in self.coords]

    def is_zero(self):
        return all(not p for p in self.coords)

    def evaluate(self, assignment):
        """Evaluate with ``assignment[var]`` a coordinate sequence (or QuadElem)."""
        vals = {}
        for name, x in assignment.items():
            vals[name] = tuple(x)
        out = []
        for p in self.coords:
            total = 0
            for mono, c in p:
                term = c
                for (v, i), e in mono:
                    term *= vals[v][i] ** e
                total += term
            out.append(total)
        return tuple(out)

    def to_expr(self):
        """Rebuild an expression (over Coord leaves) whose normal form is this one."""
        total = None
        for k, p in enumerate(self.coords):
            for mono, c in p:
                term = Const(c)
                for (v, i), e in mono:
                    leaf = Coord(v, i)
                    term = Mul(term, leaf if e == 1 else Pow(leaf, e))
                term = Mul(term, BasisElem(k))
                total = term if total is None else Add(total, term)
        return total if total is not None else Const(0)

    def __str__(self):
        return "[" + ", ".join(format_poly(p) for p in self.coords) + "]"


def _fmt_coeff(c):
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(int(c))


def format_poly(terms):
    if not terms:
        return "0"
    parts = []
    for mono, c in terms:
        factors = [f"{v}{i}" + (f"^{e}" if e > 1 else "") for (v, i), e in mono]
        mag = abs(c)
        body = "*".join(([_fmt_coeff(mag)] if mag != 1 or not factors else []) + factors)
        parts.append(("-" if c < 0 else "+", body))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for s, body in parts[1:]:
        out += f" {s} {body}"
    return out


# ---------------------------------------------------------------------------
# normalization


class _Normalizer:
    def __init__(self, table):
        self.t = table
        self.n = table.dim

    def const(self, c):
        c = self.t.base.coerce(c)
        return [({(): c * u} if c * u else {}) for u in self.t.one]

    def mul(self, x, y):
        out = [{} for _ in range(self.n)]
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                row = self.t.table[i][j]
                if not any(row):
                    continue
                prod = _poly_mul(xi, yj)
                for k, tk in enumerate(row):
                    if tk:
                        out[k] = _poly_add(out[k], _poly_scale(prod, tk))
        return out

    def pow(self, x, e):
        result = self.const(1)
        base = x
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def run(self, e):
        if isinstance(e, Var):
            return [{(((e.name, i), 1),): self.t.base.coerce(1)} for i in range(self.n)]
        if isinstance(e, Coord):
            if not 0 <= e.index < self.n:
                raise IndexError(f"coordinate index {e.index} out of range for dim {self.n}")
            leaf = {(((e.name, e.index), 1),): self.t.base.coerce(1)}
            return [_poly_scale(leaf, u) for u in self.t.one]
        if isinstance(e, Const):
            return self.const(e.value)
        if isinstance(e, BasisElem):
            if not 0 <= e.index < self.n:
                raise IndexError(f"basis index {e.index} out of range for dim {self.n}")
            one = self.t.base.coerce(1)
            return [({(): one} if k == e.index else {}) for k in range(self.n)]
        if isinstance(e, Add):
            return [_poly_add(p, q) for p, q in zip(self.run(e.left), self.run(e.right))]
        if isinstance(e, Neg):
            return [_poly_scale(p, -1) for p in self.run(e.arg)]
        if isinstance(e, ScalarMul):
            c = self.t.base.coerce(e.scalar)
            return [_poly_scale(p, c) for p in self.run(e.arg)]
        if isinstance(e, Mul):
            return self.mul(self.run(e.left), self.run(e.right))
        if isinstance(e, Pow):
            return self.pow(self.run(e.arg), e.exp)
        raise TypeError(f"not a ring expression: {e!r}")


def normalize(e, table):
    return NormalForm.from_dicts(_Normalizer(table).run(lift(e)))


def prove_eq(lhs, rhs, table):
    """True iff lhs == rhs holds identically (componentwise normal forms agree)."""
    return normalize(lhs, table) == normalize(rhs, table)


def evaluate(e, assignment, table):
    """Directly evaluate ``e`` on concrete coordinate vectors (no symbolic step)."""
    e = lift(e)
    n = table.dim
    if isinstance(e, Var):
        return tuple(assignment[e.name])
    if isinstance(e, Coord):
        c = tuple(assignment[e.name])[e.index]
        return tuple(c * u for u in table.one)
    if isinstance(e, Const):
        return tuple(e.value * u for u in table.one)
    if isinstance(e, BasisElem):
        return tuple(int(k == e.index) for k in range(n))
    if isinstance(e, Add):
        return tuple(p + q for p, q in zip(evaluate(e.left, assignment, table), evaluate(e.right, assignment, table)))
    if isinstance(e, Neg):
        return tuple(-p for p in evaluate(e.arg, assignment, table))
    if isinstance(e, ScalarMul):
        return tuple(e.scalar * p for p in evaluate(e.arg, assignment, table))
    if isinstance(e, Mul):
        return table.mul_vec(evaluate(e.left, assignment, table), evaluate(e.right, assignment, table))
    if isinstance(e, Pow):
        x = evaluate(e.arg, assignment, table)
        out = table.one
        for _ in range(e.exp):
            out = table.mul_vec(out, x)
        return out
    raise TypeError(f"not a ring expression: {e!r}")


def quad_value(nf_coords, params):
    """Wrap a 2-coordinate result as a QuadElem of ``params``."""
    return QuadElem(params, *nf_coords)


# ---------------------------------------------------------------------------
# infix parser
#
#   expr   := term (('+' | '-') term)*
#   term   := unary ('*' unary)*
#   unary  := '-' unary | power
#   power  := atom ('^' INT)?
#   atom   := INT | IDENT | 'sqrt' | '(' expr ')'
#
# 'sqrt' denotes the basis element b_1; every other identifier is a variable.


_LEX = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()=]))")


class ExprSyntaxError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def _tokens(text):
    pos, out = 0, []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _LEX.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1):
            out.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2):
            out.append(("ident", m.group(2), m.start(2)))
        else:
            op = m.group(3)
            out.append(("op", "^" if op == "**" else op, m.start(3)))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            raise ExprSyntaxError(f"expected {want!r}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Add(node, Neg(rhs))
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            node = Mul(node, self.unary())
        return node

    def unary(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            node = Pow(node, self.take("int")[1])
        return node

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            return Const(val)
        if kind == "ident":
            self.take()
            return BasisElem(1) if val == "sqrt" else Var(val)
        if kind == "op" and val == "(":
            self.take()
            node = self.expr()
            self.take("op", ")")
            return node
        raise ExprSyntaxError(f"unexpected {val!r}", pos)


def parse_expr(text):
    p = _Parser(text)
    node = p.expr()
    p.take("end")
    return node


def parse_equation(text):
    """Parse ``lhs = rhs``; returns the pair of expressions."""
    p = _Parser(text)
    lhs = p.expr()
    p.take("op", "=")
    rhs = p.expr()
    p.take("end")
    return lhs, rhs
