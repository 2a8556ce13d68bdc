"""Externally computed factorizations, checked locally.

An external computer algebra system is asked ``print(list(ZZ(n).factor()))``;
its printed answer ``[(p1, e1), (p2, e2), ...]`` is parsed and then certified
by multiplying out and testing each ``p`` for primality.  The work follows the
named stages match -> reify -> render -> exchange -> parse -> convert -> validate.
"""

from dataclasses import dataclass, field
import os
from pathlib import Path
import urllib.request

from .arith import factor, is_prime

ENDPOINT_ENV = "QUADMORDELL_CAS_ENDPOINT"
DEFAULT_TIMEOUT = 30.0


class CertificateParseError(ValueError):
    def __init__(self, msg, pos, text):
        super().__init__(f"{msg} at position {pos}: {text!r}")
        self.pos = pos
        self.text = text


@dataclass(frozen=True)
class FactorizationCertificate:
    n: int
    factors: tuple


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reasons: tuple = ()

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class ExternalExchange:
    query: str
    raw_response: str
    source: str  # "fixture:<path>", "live:<url>" or "local"

    def fixture_text(self):
        return f"{self.query}\n{self.raw_response}\n"


# ---------------------------------------------------------------------------
# query and response


def render_factor_query(n):
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"factor query needs an integer n >= 2, got {n!r}")
    return f"print(list(ZZ({n}).factor()))"


def format_factor_response(factors):
    return "[" + ", ".join(f"({p}, {e})" for p, e in factors) + "]"


class _Reader:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch):
        self.ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise CertificateParseError(f"expected {ch!r}, found {found!r}", self.pos, self.text)
        self.pos += 1

    def peek(self):
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self):
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        digits = self.text[start:self.pos]
        if not digits or not digits.isascii():
            raise CertificateParseError("expected an integer", start, self.text)
        if len(digits) > 1 and digits[0] == "0":
            raise CertificateParseError("leading zero in integer", start, self.text)
        return int(digits)


def parse_factor_response(text):
    """Parse ``'[' pair (',' pair)* ']'`` with ``pair = '(' int ',' int ')'``."""
    r = _Reader(text)
    r.expect("[")
    pairs = []
    while True:
        r.expect("(")
        p = r.integer()
        r.expect(",")
        e = r.integer()
        r.expect(")")
        pairs.append((p, e))
        if r.peek() == ",":
            r.expect(",")
            continue
        break
    r.expect("]")
    r.ws()
    if r.pos != len(text):
        raise CertificateParseError("trailing characters", r.pos, text)
    return pairs


def verify_certificate(n, factors):
    reasons = []
    factors = list(factors)
    if not factors:
        reasons.append("empty factor list")
    product = 1
    for p, e in factors:
        if e < 1:
            reasons.append(f"exponent {e} of {p} is not positive")
        if not is_prime(p):
            reasons.append(f"{p} is not prime")
        product *= p ** max(e, 0)
    if any(p2 <= p1 for (p1, _), (p2, _) in zip(factors, factors[1:])):
        reasons.append("primes are not strictly increasing")
    if product != n:
        reasons.append(f"product {product} != {n}")
    return Verdict(not reasons, tuple(reasons))


# ---------------------------------------------------------------------------
# transports


class LocalTransport:
    """Answers factor queries with the built-in factorizer (offline reference)."""

    source = "local"

    def exchange(self, query):
        n = int(query[len("print(list(ZZ("):-len(").factor()))")])
        return ExternalExchange(query, format_factor_response(factor(n)), self.source)


@dataclass
class FixtureTransport:
    """One exchange per file: first line the query, the rest the raw response."""

    path: Path

    def exchange(self, query):
        text = Path(self.path).read_text(encoding="utf-8")
        first, _, rest = text.partition("\n")
        if first.strip() != query:
            raise ValueError(f"fixture {self.path} answers {first.strip()!r}, not {query!r}")
        return ExternalExchange(query, rest.strip("\n"), f"fixture:{self.path}")


@dataclass
class LiveTransport:
    """Plain HTTP POST of the query text; the response body is the answer."""

    url: str = field(default_factory=lambda: os.environ.get(ENDPOINT_ENV, ""))
    timeout: float = DEFAULT_TIMEOUT

    def exchange(self, query):
        if not self.url:
            raise ValueError(f"no endpoint given and ${ENDPOINT_ENV} is unset")
        req = urllib.request.Request(
            self.url, data=query.encode(), method="POST",
            headers={"Content-Type": "text/plain; charset=utf-8"},
        )
        with urllib.request.urlopen(req, timeout=self.timeout) as resp:
            body = resp.read().decode("utf-8", errors="replace")
        return ExternalExchange(query, body.strip(), f"live:{self.url}")


def write_fixture(path, exchange):
    Path(path).write_text(exchange.fixture_text(), encoding="utf-8")


# ---------------------------------------------------------------------------
# the certified-replacement pipeline, factorization instance


@dataclass(frozen=True)
class CertifiedResult:
    exchange: ExternalExchange
    certificate: FactorizationCertificate
    verdict: Verdict


def certify_factorization(n, transport=None):
    """Ask ``transport`` for the factorization of ``n`` and validate the answer locally."""
    transport = transport or LocalTransport()
    # match/reify: the value itself is the reified data for natural numbers
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"cannot certify a factorization of {n!r}")
    query = render_factor_query(n)
    exchange = transport.exchange(query)
    pairs = parse_factor_response(exchange.raw_response)
    cert = FactorizationCertificate(n, tuple(pairs))
    verdict = verify_certificate(n, pairs)
    return CertifiedResult(exchange, cert, verdict)
