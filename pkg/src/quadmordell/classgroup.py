"""Class groups of Z[sqrt d] for squarefree d < 0, d = 2, 3 (mod 4)."""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import ceil, gcd, isqrt, prod

from .arith import factor, is_prime, kronecker, squarefree
from .ideals import (
    QuadIdeal,
    equivalent,
    ideal_mul,
    is_principal,
    kummer_dedekind,
    reduce_ideal,
    unit_ideal,
)
from .quadring import QuadParams, UnsupportedOrder

# 314159265/10^8 < pi, so 2/PI_LOWER > 2/pi: bounds built from it only grow.
PI_LOWER = Fraction(314159265, 10**8)

M_SET_MAX_RESOLUTION = 256


def _check_d(d, *, require_23=True):
    if d > 0:
        raise UnsupportedOrder(f"real quadratic d = {d} is not supported")
    if d in (0, 1) or not squarefree(d):
        raise ValueError(f"d = {d} must be nonzero, != 1 and squarefree")
    if require_23 and d % 4 not in (2, 3):
        raise ValueError(f"d = {d} must be 2 or 3 (mod 4)")


def discriminant(d):
    if d in (0, 1) or not squarefree(d):
        raise ValueError(f"d = {d} must be squarefree and != 0, 1")
    return d if d % 4 == 1 else 4 * d


def unit_count(d):
    """Number of roots of unity w in Q(sqrt d), d < 0."""
    return {-1: 4, -3: 6}.get(d, 2)


# ---------------------------------------------------------------------------
# generalized division with remainder: the M-set condition


class MSetStatus(Enum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class MSetCertificate:
    d: int
    M: tuple
    status: MSetStatus
    resolution: int = 0
    cells: int = 0
    witness: tuple = None

    @property
    def verified(self):
        return self.status is MSetStatus.VERIFIED


def _dist_to_Z(t):
    f = t - (t.numerator // t.denominator)
    return min(f, 1 - f)


def _max_dist(lo, hi):
    """max over t in [lo, hi] of the distance from t to the nearest integer."""
    # the distance peaks at half-integers and is linear in between
    half = ceil(lo - Fraction(1, 2)) + Fraction(1, 2)
    if half <= hi:
        return Fraction(1, 2)
    return max(_dist_to_Z(lo), _dist_to_Z(hi))


def _cell_sup(r, absd, x0, x1, y0, y1):
    """Exact sup over the closed cell of |N(r*gamma - q)| for the best q.

    With q chosen coordinatewise nearest, the norm is dist(r x)^2 + |d| dist(r y)^2,
    which is increasing in each distance; so its sup is attained at the
    coordinatewise maximal distances.
    """
    if r > 0:
        dx = _max_dist(r * x0, r * x1)
        dy = _max_dist(r * y0, r * y1)
    else:
        dx = _max_dist(r * x1, r * x0)
        dy = _max_dist(r * y1, r * y0)
    return dx * dx + absd * dy * dy


def _point_min(M, absd, x, y):
    return min(_dist_to_Z(r * x) ** 2 + absd * _dist_to_Z(r * y) ** 2 for r in M)


def verify_m_set(d, M, max_resolution=M_SET_MAX_RESOLUTION):
    """Decide: every gamma in Q(sqrt d) has q in Z[sqrt d], r in M with |N(r gamma - q)| < 1.

    gamma is reduced to [0, 1]^2.  Cells of the unit square are refined
    (quadtree) until some r in M bounds the whole closed cell below 1, down to
    cells of side 1/max_resolution.  Sample points of unresolved cells are
    checked for a counterexample.
    """
    _check_d(d)
    M = tuple(sorted(set(M)))
    if not M or any(r == 0 for r in M):
        raise ValueError("M must be a nonempty set of nonzero integers")
    absd = -d
    one = Fraction(1)
    pending = [(Fraction(0), Fraction(0), one)]  # (x0, y0, side)
    size, checked = 1, 0
    while pending:
        nxt = []
        for x0, y0, s in pending:
            checked += 1
            x1, y1 = x0 + s, y0 + s
            if any(_cell_sup(r, absd, x0, x1, y0, y1) < 1 for r in M):
                continue
            for px, py in ((x0, y0), (x0 + s / 2, y0 + s / 2), (x1, y0), (x0, y1), (x1, y1)):
                if _point_min(M, absd, px, py) >= 1:
                    return MSetCertificate(d, M, MSetStatus.REFUTED, size, checked, (px, py))
            if size >= max_resolution:
                return MSetCertificate(d, M, MSetStatus.INCONCLUSIVE, size, checked, (x0, y0))
            h = s / 2
            nxt.extend(((x0, y0, h), (x0 + h, y0, h), (x0, y0 + h, h), (x0 + h, y0 + h, h)))
        if nxt:
            size *= 2
        pending = nxt
    return MSetCertificate(d, M, MSetStatus.VERIFIED, size, checked)


def generator_primes(d, cert):
    """Prime ideals dividing <prod M>; their classes generate the class group."""
    if cert.status is not MSetStatus.VERIFIED or cert.d != d:
        raise ValueError("generator_primes needs a verified certificate for this d")
    params = QuadParams(0, d)
    total = abs(prod(cert.M))
    out = []
    if total > 1:
        for p, _ in factor(total):
            out.extend(kummer_dedekind(p, params).primes)
    return out


# ---------------------------------------------------------------------------
# Minkowski bound


def _sqrt_upper(n, digits=12):
    scale = 10**digits
    s = isqrt(n * scale * scale)
    if s * s < n * scale * scale:
        s += 1
    return Fraction(s, scale)


def minkowski_bound(d):
    """Rational upper bound for (2/pi) sqrt|disc| (degree 2, one complex pair)."""
    _check_d(d, require_23=False)
    delta = discriminant(d)
    return 2 / PI_LOWER * _sqrt_upper(abs(delta))


def minkowski_primes(d):
    """Prime ideals of norm at most the Minkowski bound."""
    params = QuadParams(0, d)
    bound = minkowski_bound(d)
    out = []
    for p in range(2, int(bound) + 1):
        if not is_prime(p):
            continue
        for P in kummer_dedekind(p, params).primes:
            if P.norm <= bound:
                out.append(P)
    return out


# ---------------------------------------------------------------------------
# the group


class Method(Enum):
    MSET = "mset"
    MINKOWSKI = "minkowski"


@dataclass(frozen=True)
class ClassGroupDescriptor:
    d: int
    discriminant: int
    h: int
    generators: tuple  # (QuadIdeal, order)
    elements: tuple  # reduced representatives, identity first
    method: Method
    M: tuple = None
    w: int = 2
    candidates: tuple = field(default=(), compare=False)

    def to_json(self):
        return {
            "d": self.d,
            "delta": self.discriminant,
            "h": self.h,
            "w": self.w,
            "method": self.method.value,
            "M": list(self.M) if self.M is not None else None,
            "generators": [{"ideal": str(P), "norm": P.norm, "order": k} for P, k in self.generators],
            "elements": [str(I) for I in self.elements],
        }


def order_of_class(I, limit=10_000):
    """Smallest k >= 1 with I^k principal (powers kept small via reduction)."""
    J = reduce_ideal(I)
    cur = J
    for k in range(1, limit + 1):
        if is_principal(cur) is not None:
            return k
        cur = reduce_ideal(ideal_mul(cur, J))
    raise RuntimeError(f"order of {I} exceeds {limit}")


def _find(elements, J):
    for E in elements:
        if equivalent(E, J):
            return E
    return None


def close_group(gens, params):
    """Close the given classes under multiplication.

    Returns (kept generators with orders, element representatives).  A
    generator whose class already lies in the subgroup so far is dropped.
    """
    elements = [unit_ideal(params)]
    kept = []
    for P in gens:
        if _find(elements, P) is not None:
            continue
        kept.append((P, order_of_class(P)))
        # cosets H, P H, P^2 H, ... until P^k lands back in H
        R = reduce_ideal(P)
        layer = list(elements)
        while True:
            layer = [reduce_ideal(ideal_mul(E, R)) for E in layer]
            if _find(elements, layer[0]) is not None:
                break
            elements.extend(layer)
    return kept, elements


def class_group(d, method=Method.MINKOWSKI, M=(1, 2)):
    _check_d(d)
    method = Method(method)
    params = QuadParams(0, d)
    if method is Method.MSET:
        cert = verify_m_set(d, M)
        if not cert.verified:
            raise ValueError(f"M = {sorted(set(M))} is not verified for d = {d}: {cert.status.value}")
        candidates = generator_primes(d, cert)
        used_M = cert.M
    else:
        candidates = minkowski_primes(d)
        used_M = None
    candidates.sort(key=lambda P: (P.norm, P.n, P.c, P.m))
    kept, elements = close_group(candidates, params)
    h = len(elements)
    for _, k in kept:
        if h % k:
            raise AssertionError(f"generator order {k} does not divide h = {h}")
    return ClassGroupDescriptor(
        d=d,
        discriminant=discriminant(d),
        h=h,
        generators=tuple(kept),
        elements=tuple(elements),
        method=method,
        M=used_M,
        w=unit_count(d),
        candidates=tuple(candidates),
    )


# ---------------------------------------------------------------------------
# independent class number oracles


def class_number_analytic(d):
    """h = w/(2 disc) * sum_{a=1}^{|disc|-1} (disc/a) a, evaluated exactly."""
    if d >= 0:
        raise UnsupportedOrder("the finite class number sum is for imaginary fields only")
    delta = discriminant(d)
    total = sum(kronecker(delta, a) * a for a in range(1, abs(delta)))
    h = Fraction(unit_count(d), 2 * delta) * total
    if h.denominator != 1 or h <= 0:
        raise ArithmeticError(f"class number sum gave {h} for d = {d}")
    return int(h)


def reduced_forms(delta):
    """Reduced primitive forms (A, B, C) of negative discriminant ``delta``."""
    out = []
    for A in range(1, isqrt(-delta // 3) + 1):
        for B in range(-A + 1, A + 1):
            if (B * B - delta) % (4 * A):
                continue
            C = (B * B - delta) // (4 * A)
            if C < A or (A == C and B < 0):
                continue
            if gcd(gcd(A, B), C) != 1:
                continue
            out.append((A, B, C))
    return out


def class_number_forms_oracle(d):
    if d >= 0:
        raise UnsupportedOrder("form counting is for imaginary fields only")
    return len(reduced_forms(discriminant(d)))
