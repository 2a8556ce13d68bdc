"""Integral points on y^2 = x^3 + d by ideal descent in Z[sqrt d].

For squarefree d < 0 with d = 2, 3 (mod 4) and 3 not dividing the class
number of Z[sqrt d], the equation is soluble iff d = -3m^2 + 1 or
d = -3m^2 - 1 for some m >= 0; then x = m^2 - d and y = +-m(3d + m^2).
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd

from .arith import integer_sqrt, squarefree
from .classgroup import class_group
from .ideals import (
    factor_ideal,
    ideal_mul,
    ideal_pow,
    ideal_sum,
    is_principal,
    principal,
    reassemble,
    unit_ideal,
)
from .quadring import QuadElem, QuadParams, cube, units

X_ODD_RESIDUES = frozenset({2, 3, 5, 6, 7})


class HypothesisError(ValueError):
    """The descent theorem does not apply to this d."""


class DescentError(RuntimeError):
    def __init__(self, stage, msg):
        super().__init__(f"descent failed at stage '{stage}': {msg}")
        self.stage = stage


@dataclass(frozen=True)
class MordellInstance:
    d: int
    negative: bool
    squarefree: bool
    residue_23_mod4: bool
    class_gcd3: bool
    h: int = None

    @property
    def qualifies(self):
        return self.negative and self.squarefree and self.residue_23_mod4 and self.class_gcd3

    def flags(self):
        return {
            "negative": self.negative,
            "squarefree": self.squarefree,
            "residue_23_mod4": self.residue_23_mod4,
            "class_gcd3": self.class_gcd3,
            "h": self.h,
        }


@dataclass(frozen=True)
class Solution:
    m: int
    x: int
    y: int


@dataclass(frozen=True)
class MordellResult:
    d: int
    solutions: tuple = ()
    reason: str = None  # set when there are no solutions: "no_integer_m" or "modular_obstruction"
    modulus: int = None

    @property
    def points(self):
        return sorted({(s.x, s.y) for s in self.solutions})


def check_hypotheses(d):
    if d == 0:
        raise ValueError("d must be nonzero")
    neg = d < 0
    sqf = squarefree(d)
    res = d % 4 in (2, 3)
    h = None
    if neg and sqf and res:
        h = class_group(d).h
    return MordellInstance(d, neg, sqf, res, h is not None and gcd(3, h) == 1, h)


def verify_solution(d, x, y):
    return y * y == x**3 + d


def solve(inst, modulus_search=72):
    """All integral points for a qualifying instance (complete by the descent theorem)."""
    if isinstance(inst, int):
        inst = check_hypotheses(inst)
    if not inst.qualifies:
        raise HypothesisError(f"d = {inst.d} does not satisfy the hypotheses: {inst.flags()}")
    d = inst.d
    sols = []
    for s in (1, -1):
        # d = s - 3m^2
        num = s - d
        if num % 3:
            continue
        m = integer_sqrt(num // 3)
        if m is None:
            continue
        x = m * m - d
        y = m * (3 * d + m * m)
        for yy in sorted({y, -y}, reverse=True):
            if not verify_solution(d, x, yy):
                raise AssertionError(f"closed form gave a non-solution ({x}, {yy}) for d = {d}")
            sols.append(Solution(m, x, yy))
    sols = sorted(set(sols), key=lambda t: (t.x, -t.y))
    if sols:
        return MordellResult(d, tuple(sols))
    n = obstruction_modulus(d, modulus_search)
    if n is not None:
        return MordellResult(d, (), "modular_obstruction", n)
    return MordellResult(d, (), "no_integer_m")


# ---------------------------------------------------------------------------
# congruence shortcuts


def quadratic_insoluble_mod(c2, c1, c0, n):
    """True iff y^2 = c2 t^2 + c1 t + c0 has no solution (t, y) modulo n."""
    if n < 2:
        raise ValueError("modulus must be at least 2")
    squares = {y * y % n for y in range(n)}
    return all((c2 * t * t + c1 * t + c0) % n not in squares for t in range(n))


def search_modulus(c2, c1, c0, n_max):
    for n in range(2, n_max + 1):
        if quadratic_insoluble_mod(c2, c1, c0, n):
            return n
    return None


def branch_quadratics(d):
    """After descent, 3a^2 = s - d for s = +-1; as (3a)^2 = 3(s - d) these are y^2 = c0."""
    return [(0, 0, 3 * (s - d)) for s in (1, -1)]


def obstruction_modulus(d, n_max=72):
    """Smallest n <= n_max ruling out both branch quadratics at once."""
    quads = branch_quadratics(d)
    for n in range(2, n_max + 1):
        if all(quadratic_insoluble_mod(*q, n) for q in quads):
            return n
    return None


def curve_insoluble_mod(d, n):
    """True iff y^2 = x^3 + d has no solution modulo n."""
    squares = {y * y % n for y in range(n)}
    return all((x**3 + d) % n not in squares for x in range(n))


@lru_cache(maxsize=None)
def _x_odd_table_ok():
    # no even x with y^2 - d = x^3 mod 8 for d mod 8 in the residue set
    for x, y, d in product(range(8), repeat=3):
        if d in X_ODD_RESIDUES and x % 2 == 0 and (y * y - d - x**3) % 8 == 0:
            return False
    return True


def x_odd_residue_counterexamples():
    """(x, y, d) mod 8 with even x solving y^2 - d = x^3 for d in the residue set."""
    return [
        (x, y, d)
        for x, y, d in product(range(8), repeat=3)
        if d in X_ODD_RESIDUES and x % 2 == 0 and (y * y - d - x**3) % 8 == 0
    ]


def x_odd_certificate(d):
    if not _x_odd_table_ok():
        raise AssertionError("mod 8 residue table check failed")
    return d % 8 in X_ODD_RESIDUES


# ---------------------------------------------------------------------------
# ideal-level certificates


def _conjugate_pair(d, y):
    params = QuadParams(0, d)
    return QuadElem(params, y, 1), QuadElem(params, y, -1)


def gcd_certificate(d, y):
    """Whether <y + sqrt d> + <y - sqrt d> is the unit ideal."""
    p, q = _conjugate_pair(d, y)
    return ideal_sum(principal(p), principal(q)) == unit_ideal(p.params)


@dataclass
class DescentTrace:
    d: int
    x: int
    y: int
    stages: list = field(default_factory=list)
    generator: tuple = None  # z = (a, b) with z^3 = y + sqrt d
    unit: tuple = None
    cube_root: object = None

    def record(self, name, ok, **info):
        self.stages.append({"stage": name, "ok": ok, **info})
        if not ok:
            raise DescentError(name, str(info))

    @property
    def ok(self):
        return bool(self.stages) and all(s["ok"] for s in self.stages)

    def to_json(self):
        return {"d": self.d, "x": self.x, "y": self.y, "ok": self.ok,
                "z": list(self.generator) if self.generator else None, "stages": self.stages}


def descent_trace(d, x, y):
    tr = DescentTrace(d, x, y)
    tr.record("curve", verify_solution(d, x, y), equation=f"{y}^2 = {x}^3 + {d}")
    inst = check_hypotheses(d)
    tr.record("hypotheses", inst.qualifies, **inst.flags())
    tr.record("x_odd", x % 2 == 1 and x_odd_certificate(d), x=x)

    params = QuadParams(0, d)
    plus, minus = _conjugate_pair(d, y)
    I, J = principal(plus), principal(minus)
    L = principal(QuadElem(params, x, 0))
    tr.record("factorization", ideal_mul(I, J) == ideal_pow(L, 3),
              I=str(I), J=str(J), L=str(L))
    tr.record("gcd", gcd_certificate(d, y), gcd=str(ideal_sum(I, J)))

    fac = factor_ideal(I)
    cube_exps = all(e % 3 == 0 for _, e in fac)
    tr.record("ideal_factorization", cube_exps,
              factors=[[str(P), e] for P, e in fac])
    L1 = reassemble([(P, e // 3) for P, e in fac], params)
    tr.cube_root = L1
    tr.record("cube_root", ideal_pow(L1, 3) == I, L1=str(L1))

    z0 = is_principal(L1)
    tr.record("principal", z0 is not None, generator=None if z0 is None else [z0.b1, z0.b2])

    target = plus
    chosen = None
    for u in units(d):
        z = u * z0
        if cube(z) == target:
            chosen = (u, z)
            break
    tr.record("unit_adjustment", chosen is not None,
              units=[[u.b1, u.b2] for u in units(d)],
              unit=None if chosen is None else [chosen[0].b1, chosen[0].b2])
    u, z = chosen
    tr.unit = (u.b1, u.b2)
    a, b = z.b1, z.b2
    tr.generator = (a, b)
    tr.record("components",
              a * (a * a + 3 * b * b * d) == y and b * (3 * a * a + b * b * d) == 1,
              rational_part=a * (a * a + 3 * b * b * d), sqrt_part=b * (3 * a * a + b * b * d))
    m = abs(a)
    tr.record("conclusion", b in (1, -1) and 3 * a * a + d == b and d == b - 3 * m * m,
              b=b, m=m, branch="d = 1 - 3m^2" if b == 1 else "d = -1 - 3m^2")
    return tr


# ---------------------------------------------------------------------------
# brute force


def brute_force_points(d, x_bound):
    """All (x, y) with |x| <= x_bound on y^2 = x^3 + d, sorted by x then y."""
    if x_bound < 1:
        raise ValueError("x_bound must be >= 1")
    out = []
    for x in range(-x_bound, x_bound + 1):
        s = integer_sqrt(x**3 + d)
        if s is None:
            continue
        out.extend((x, yy) for yy in sorted({-s, s}))
    return out
