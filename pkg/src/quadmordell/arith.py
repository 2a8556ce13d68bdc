"""Exact integer and rational helpers used throughout the package.

Rationals are ``fractions.Fraction`` (always reduced, positive denominator).
Integers are plain Python ``int``.
"""

from fractions import Fraction
from math import gcd, isqrt
import random

__all__ = [
    "Fraction",
    "squarefree",
    "squarefree_part",
    "is_square",
    "integer_sqrt",
    "is_prime",
    "factor",
    "kronecker",
    "sqrt_mod",
]

# Proven deterministic for n < 3317044064679887385961981 (covers 64 bits).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_LIMIT = 3317044064679887385961981
_TRIAL_LIMIT = 10**6

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def integer_sqrt(n):
    """Return ``s >= 0`` with ``s*s == n``, or ``None`` if ``n`` is not a perfect square."""
    if n < 0:
        return None
    s = isqrt(n)
    return s if s * s == n else None


def is_square(q):
    """True iff the rational (or integer) ``q`` is the square of a rational."""
    q = Fraction(q)
    if q < 0:
        return False
    return integer_sqrt(q.numerator) is not None and integer_sqrt(q.denominator) is not None


def _miller_rabin(n):
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n):
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    # a failed strong-pseudoprime test is a proof of compositeness at any size
    if not _miller_rabin(n):
        return False
    if n < _MR_LIMIT:
        return True
    # beyond the proven witness range only trial division settles it
    i = 41
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _pollard_brent(n, rng):
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def _split_large(n, out, rng):
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    s = integer_sqrt(n)
    if s is not None:
        _split_large(s, out, rng)
        _split_large(s, out, rng)
        return
    f = _pollard_brent(n, rng)
    _split_large(f, out, rng)
    _split_large(n // f, out, rng)


def factor(n):
    """Prime factorization of ``n >= 2`` as a list of ``(p, e)`` with increasing ``p``."""
    n = int(n)
    if n < 2:
        raise ValueError(f"factor() requires n >= 2, got {n}")
    out = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    i = 5
    while i * i <= n and i <= _TRIAL_LIMIT:
        for p in (i, i + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        i += 6
    if n > 1:
        if i * i > n:
            out[n] = out.get(n, 0) + 1
        else:
            # fixed seed keeps factor() deterministic
            _split_large(n, out, random.Random(n))
    return sorted(out.items())


def squarefree(n):
    """True iff no prime square divides ``n``. ``n = 0`` is rejected."""
    if n == 0:
        raise ValueError("squarefree is undefined for 0")
    n = abs(n)
    if n == 1:
        return True
    return all(e == 1 for _, e in factor(n))


def squarefree_part(n):
    """The squarefree kernel of ``n`` keeping its sign, e.g. -12 -> -3."""
    if n == 0:
        raise ValueError("squarefree_part is undefined for 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    if n == 1:
        return sign
    core = 1
    for p, e in factor(n):
        if e % 2:
            core *= p
    return sign * core


def kronecker(a, n):
    """Kronecker symbol (a/n); agrees with the Jacobi symbol for odd positive n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_mod(a, p):
    """All square roots of ``a`` modulo the prime ``p``, sorted."""
    a %= p
    if p == 2 or a == 0:
        return [a]
    if pow(a, (p - 1) // 2, p) != 1:
        return []
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return sorted({r, p - r})
