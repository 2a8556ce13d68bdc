"""Nonzero integral ideals of Z[alpha] in two-row Hermite normal form.

An ideal is stored as the lattice with Z-basis ``{n, c + m*alpha}`` where
``n > 0``, ``m > 0``, ``m | n``, ``m | c`` and ``0 <= c < n``.  This form is
unique, so ideal equality is tuple equality and the norm is ``n*m``.
"""

from dataclasses import dataclass, field
from enum import Enum
from math import gcd, isqrt

from .arith import factor, integer_sqrt, is_prime, sqrt_mod, squarefree
from .quadring import Base, QuadElem, QuadParams, UnsupportedOrder, render


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _hnf(vectors):
    """Row HNF of a rank-2 lattice in Z^2, returned as (n, c, m)."""
    vecs = [(int(x), int(y)) for x, y in vectors]
    # gcd of the alpha-coordinates, carried with its row combination
    m, cx = 0, 0
    rest = []
    for x, y in vecs:
        if y == 0:
            rest.append(x)
            continue
        if m == 0:
            m, cx = y, x
            continue
        g, s, t = _xgcd(m, y)
        # (cx, m), (x, y) -> (s*cx + t*x, g) and a row with zero second coordinate
        new_cx = s * cx + t * x
        rest.append((y // g) * cx - (m // g) * x)
        m, cx = g, new_cx
    if m < 0:
        m, cx = -m, -cx
    n = 0
    for x in rest:
        n = gcd(n, x)
    if m == 0 or n == 0:
        raise ValueError("generators do not span a full-rank lattice (zero ideal or zero divisors)")
    return n, cx % n, m


@dataclass(frozen=True)
class QuadIdeal:
    params: QuadParams
    n: int
    c: int
    m: int
    norm: int = field(init=False, compare=False)

    def __post_init__(self):
        if self.params.base is not Base.ZZ:
            raise ValueError("ideals live in an order over ZZ")
        n, c, m = self.n, self.c, self.m
        if not (n > 0 and m > 0 and 0 <= c < n):
            raise ValueError(f"not in Hermite normal form: ({n}, {c}, {m})")
        if n % m or c % m:
            raise ValueError(f"lattice ({n}, {c}, {m}) is not closed under multiplication by alpha")
        a, b = self.params.a, self.params.b
        # alpha * (c + m*alpha) = m*b + (c + m*a)*alpha must lie in the lattice
        k = (c + m * a) // m
        if (c + m * a) % m or (m * b - c * k) % n:
            raise ValueError(f"lattice ({n}, {c}, {m}) is not closed under multiplication by alpha")
        object.__setattr__(self, "norm", n * m)

    @property
    def basis(self):
        return (QuadElem(self.params, self.n, 0), QuadElem(self.params, self.c, self.m))

    def __contains__(self, x):
        return contains(self, x)

    def __mul__(self, other):
        return ideal_mul(self, other)

    def __add__(self, other):
        return ideal_sum(self, other)

    def __pow__(self, k):
        return ideal_pow(self, k)

    def __str__(self):
        return render_ideal(self)

    def to_json(self):
        return {"d": self.params.b if self.params.a == 0 else None,
                "a": self.params.a, "b": self.params.b,
                "n": self.n, "c": self.c, "m": self.m, "norm": self.norm}


def ideal_from_generators(gens, params=None):
    """Smallest ideal containing ``gens``: HNF of the lattice spanned by {g, alpha*g}."""
    gens = list(gens)
    if params is None:
        if not gens or not isinstance(gens[0], QuadElem):
            raise ValueError("need params or at least one QuadElem generator")
        params = gens[0].params
    elems = [g if isinstance(g, QuadElem) else QuadElem(params, g, 0) for g in gens]
    if any(g.params != params for g in elems):
        raise ValueError("generators have mismatched params")
    if all(g.is_zero() for g in elems):
        raise ValueError("the zero ideal is not supported")
    alpha = params.alpha
    vecs = []
    for g in elems:
        vecs.append((g.b1, g.b2))
        ag = alpha * g
        vecs.append((ag.b1, ag.b2))
    n, c, m = _hnf(vecs)
    return QuadIdeal(params, n, c, m)


def principal(g):
    return ideal_from_generators([g])


def unit_ideal(params):
    return QuadIdeal(params, 1, 0, 1)


def contains(I, x):
    if not isinstance(x, QuadElem):
        x = QuadElem(I.params, x, 0)
    if x.params != I.params:
        raise ValueError("mismatched params")
    if x.b2 % I.m:
        return False
    return (x.b1 - I.c * (x.b2 // I.m)) % I.n == 0


def ideal_contains(I, J):
    """True iff J is a subset of I (i.e. I divides J)."""
    return all(contains(I, g) for g in J.basis)


def ideal_mul(I, J):
    if I.params != J.params:
        raise ValueError("mismatched params")
    return ideal_from_generators([x * y for x in I.basis for y in J.basis], I.params)


def ideal_sum(I, J):
    if I.params != J.params:
        raise ValueError("mismatched params")
    return ideal_from_generators(list(I.basis) + list(J.basis), I.params)


def ideal_eq(I, J):
    return I == J


def ideal_conj(I):
    return ideal_from_generators([g.conj() for g in I.basis], I.params)


def ideal_pow(I, k):
    if k < 0:
        raise ValueError("negative powers need fractional ideals")
    result, base = unit_ideal(I.params), I
    while k:
        if k & 1:
            result = ideal_mul(result, base)
        k >>= 1
        if k:
            base = ideal_mul(base, base)
    return result


def abs_norm(I):
    return I.norm


def divide_by_integer(I, k):
    """The ideal J with k*J = I; requires every HNF entry to be divisible by k."""
    if k <= 0 or I.n % k or I.c % k or I.m % k:
        raise ValueError(f"{I} is not divisible by {k}")
    return QuadIdeal(I.params, I.n // k, I.c // k, I.m // k)


def render_ideal(I):
    sym = I.params.symbol()
    return f"({I.n}, {I.c} + {I.m}*{sym})"


# ---------------------------------------------------------------------------
# the ideal above 2 in Z[sqrt d]


def sqrt_2(d):
    """<sqrt d, 2> for d = 2 (mod 4) and <1 + sqrt d, 2> for d = 3 (mod 4)."""
    if d % 4 not in (2, 3):
        raise ValueError(f"sqrt_2 needs d = 2 or 3 (mod 4), got d = {d}")
    if not squarefree(d):
        raise ValueError(f"sqrt_2 needs squarefree d, got {d}")
    params = QuadParams(0, d)
    g = QuadElem(params, 0, 1) if d % 4 == 2 else QuadElem(params, 1, 1)
    return ideal_from_generators([g, QuadElem(params, 2, 0)])


# ---------------------------------------------------------------------------
# primes


class Splitting(Enum):
    INERT = "inert"
    SPLIT = "split"
    RAMIFIED = "ramified"


@dataclass(frozen=True)
class PrimeDecomposition:
    p: int
    kind: Splitting
    primes: tuple

    def product(self):
        out = unit_ideal(self.primes[0].params)
        for P in self.primes:
            out = ideal_mul(out, P)
        if self.kind is Splitting.RAMIFIED:
            out = ideal_mul(out, self.primes[0])
        return out


def _roots_mod_p(params, p):
    """Roots of X^2 - aX - b modulo p."""
    a, b = params.a % p, params.b % p
    if p == 2:
        return [r for r in (0, 1) if (r * r - a * r - b) % 2 == 0]
    disc = (a * a + 4 * b) % p
    inv2 = pow(2, -1, p)
    return sorted({(a + s) * inv2 % p for s in sqrt_mod(disc, p)})


def kummer_dedekind(p, params):
    """Decompose <p> in Z[alpha] by factoring X^2 - aX - b modulo p."""
    if not is_prime(p):
        raise ValueError(f"kummer_dedekind needs a prime, got {p}")
    roots = _roots_mod_p(params, p)
    P0 = QuadElem(params, p, 0)
    if not roots:
        dec = PrimeDecomposition(p, Splitting.INERT, (principal(P0),))
    elif len(roots) == 1:
        P = ideal_from_generators([P0, params.alpha - roots[0]])
        dec = PrimeDecomposition(p, Splitting.RAMIFIED, (P,))
    else:
        dec = PrimeDecomposition(
            p, Splitting.SPLIT,
            tuple(ideal_from_generators([P0, params.alpha - r]) for r in roots),
        )
    # valid because Z[alpha] is the full ring of integers; catches misuse on non-maximal orders
    if dec.product() != principal(P0):
        raise ValueError(f"Kummer-Dedekind failed at p = {p}: is {params} a maximal order?")
    return dec


def primes_above(p, params):
    return list(kummer_dedekind(p, params).primes)


def is_prime_ideal(I):
    if I.norm == 1:
        return False
    if is_prime(I.norm):
        return True
    p = integer_sqrt(I.norm)
    if p is None or not is_prime(p):
        return False
    dec = kummer_dedekind(p, I.params)
    return dec.kind is Splitting.INERT and I == dec.primes[0]


def valuation(I, P):
    """Largest k with I contained in P^k (containment is divisibility in a Dedekind domain)."""
    k, Q = 0, P
    while Q.norm <= I.norm and ideal_contains(Q, I):
        k += 1
        Q = ideal_mul(Q, P)
    return k


def factor_ideal(I):
    """Prime ideal factorization as a list of (P, e), ordered by (norm, n, c, m)."""
    out = []
    if I.norm == 1:
        return out
    for p, _ in factor(I.norm):
        for P in kummer_dedekind(p, I.params).primes:
            e = valuation(I, P)
            if e:
                out.append((P, e))
    out.sort(key=lambda t: (t[0].norm, t[0].n, t[0].c, t[0].m))
    if reassemble(out, I.params) != I:
        raise ValueError(f"factorization of {I} does not reassemble")
    return out


def reassemble(factorization, params):
    out = unit_ideal(params)
    for P, e in factorization:
        out = ideal_mul(out, ideal_pow(P, e))
    return out


# ---------------------------------------------------------------------------
# principality and reduction (imaginary quadratic only)


def _require_imaginary(params):
    if params.disc >= 0:
        raise UnsupportedOrder(f"only imaginary quadratic orders are supported, got {params}")


def _canonical_generator(gens):
    def ok(g):
        return g.b1 > 0 or (g.b1 == 0 and g.b2 > 0)

    preferred = [g for g in gens if ok(g)]
    return max(preferred or gens, key=lambda g: (g.b1, g.b2))


def is_principal(I):
    """A generator of I if I is principal, else None.

    Exhaustive: a generator has norm N(I), and with D = a^2 + 4b < 0,
    4N = (2*b1 + a*b2)^2 + |D|*b2^2 bounds b2.
    """
    params = I.params
    _require_imaginary(params)
    N = I.norm
    a, D = params.a, -params.disc
    found = []
    for y in range(isqrt(4 * N // D) + 1):
        s = integer_sqrt(4 * N - D * y * y)
        if s is None:
            continue
        for yy in {y, -y}:
            for ss in {s, -s}:
                t = ss - a * yy
                if t % 2:
                    continue
                g = QuadElem(params, t // 2, yy)
                if contains(I, g) and principal(g) == I:
                    found.append(g)
        if found:
            break
    return _canonical_generator(found) if found else None


def equivalent(I, J):
    """Same ideal class: I * conj(J) is principal."""
    return is_principal(ideal_mul(I, ideal_conj(J))) is not None


def primitive_part(I):
    """(content, J) with I = content * J and J not divisible by any rational integer > 1."""
    k = I.m
    return k, divide_by_integer(I, k)


def _reduce_form(A, B, C):
    while True:
        if not -A < B <= A:
            r = (A - B) // (2 * A)
            B, C = B + 2 * r * A, A * r * r + B * r + C
        if A > C or (A == C and B < 0):
            A, B, C = C, -B, A
            continue
        return A, B, C


def reduce_ideal(I):
    """The canonical reduced primitive ideal in the class of I.

    The primitive part (N, c + alpha) has lattice norm form
    N x^2 + (2c + a) x y + ((c^2 + a c - b)/N) y^2; reducing this binary form
    and reading the ideal back gives an equivalent ideal that depends only on
    the class.
    """
    params = I.params
    _require_imaginary(params)
    a, b = params.a, params.b
    _, J = primitive_part(I)
    N, c = J.n, J.c
    A, B, C = N, -(2 * c + a), (c * c + a * c - b) // N
    A, B, C = _reduce_form(A, B, C)
    # back to an ideal: [A, (-B + sqrt(D))/2] = [A, c' + alpha] with 2c' + a = -B
    cc = ((-B - a) // 2) % A
    return QuadIdeal(params, A, cc, 1)
