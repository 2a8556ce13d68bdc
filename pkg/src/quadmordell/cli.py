"""Command line front end: ``quadmordell <command> ...``.

Every command builds an envelope ``{schema, command, params, result}`` and
prints it either as JSON (sorted keys, stable bytes) or as a plain table.
Exit codes: 0 ok, 1 error, 2 hypothesis not met, 64 usage.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
import json
from pathlib import Path
import sys
import time

from . import certify
from .arith import squarefree, squarefree_part
from .classgroup import (
    Method,
    class_group,
    class_number_analytic,
    class_number_forms_oracle,
)
from .ideals import factor_ideal, ideal_from_generators, is_principal, reduce_ideal
from .mordell import HypothesisError, brute_force_points, check_hypotheses, descent_trace, solve
from .quadring import QuadParams, UnsupportedOrder, parse, render
from .timestable import normalize, parse_equation, parse_expr, prove_eq, substitute, table_for_quad, table_trivial

SCHEMA = "quadmordell/1"
EXIT_OK, EXIT_ERROR, EXIT_HYPOTHESIS, EXIT_USAGE = 0, 1, 2, 64
DEFAULT_BRUTE_BOUND = 10_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise UsageError(message)


class _Timer:
    def __init__(self):
        self.ms = {}

    def __call__(self, stage, fn, *args, **kw):
        t0 = time.perf_counter()
        try:
            return fn(*args, **kw)
        finally:
            self.ms[stage] = round((time.perf_counter() - t0) * 1000, 3)


# ---------------------------------------------------------------------------
# commands; each returns (result, exit code)


def _require_class_group_d(d):
    if d >= 0 or not squarefree(d) or d % 4 not in (2, 3):
        raise HypothesisError(f"class-group needs squarefree d < 0 with d = 2, 3 (mod 4); got {d}")


def cmd_class_group(args, timer):
    _require_class_group_d(args.d)
    M = tuple(args.m) if args.m else (1, 2)
    G = timer("class_group", class_group, args.d, Method(args.method), M)
    return G.to_json(), EXIT_OK


def cmd_class_number(args, timer):
    d = args.d
    if d >= 0:
        raise UnsupportedOrder(f"only imaginary fields are supported, got d = {d}")
    core = squarefree_part(d)
    oracles = {
        "analytic": timer("analytic", class_number_analytic, core),
        "forms": timer("forms", class_number_forms_oracle, core),
    }
    if core % 4 in (2, 3):
        oracles["group"] = timer("group", lambda: class_group(core).h)
    values = set(oracles.values())
    if len(values) != 1:
        raise ArithmeticError(f"class number oracles disagree for d = {d}: {oracles}")
    return {"d": d, "field_d": core, "h": values.pop(), "oracles": oracles}, EXIT_OK


def cmd_mordell(args, timer):
    d = args.d
    inst = timer("hypotheses", check_hypotheses, d)
    result = {"d": d, "hypotheses": inst.flags(), "qualifies": inst.qualifies}
    if args.brute_bound:
        pts = timer("brute_force", brute_force_points, d, args.brute_bound)
        result["brute_force"] = {"bound": args.brute_bound, "points": [list(p) for p in pts]}
    if not inst.qualifies:
        return result, EXIT_HYPOTHESIS
    res = timer("solve", solve, inst)
    result.update(
        method="descent",
        solutions=[list(p) for p in res.points],
        count=len(res.points),
        reason=res.reason,
        modulus=res.modulus,
    )
    if args.trace:
        result["traces"] = [timer(f"trace_{x}_{y}", descent_trace, d, x, y).to_json() for x, y in res.points]
    if args.brute_bound and set(map(tuple, result["brute_force"]["points"])) != set(res.points):
        raise ArithmeticError(f"brute force disagrees with the descent for d = {d}")
    return result, EXIT_OK


def cmd_ideal(args, timer):
    params = QuadParams(0, args.d)
    gens = [parse(g, params) for g in args.gen]
    I = timer("hnf", ideal_from_generators, gens, params)
    result = {"ideal": str(I), "hnf": I.to_json(), "norm": I.norm}
    if params.is_domain:
        fac = timer("factor", factor_ideal, I)
        z = timer("principal", is_principal, I)
        result.update(
            factors=[[str(P), e] for P, e in fac],
            principal=None if z is None else render(z),
            reduced=str(reduce_ideal(I)),
        )
    return result, EXIT_OK


def _subst_map(items):
    mapping = {}
    for item in items or ():
        name, sep, rhs = item.partition("=")
        if not sep:
            raise UsageError(f"--subst expects name=expr, got {item!r}")
        mapping[name.strip()] = parse_expr(rhs)
    return mapping


def cmd_normalize(args, timer):
    table = table_trivial() if args.d is None else table_for_quad(QuadParams(0, args.d))
    mapping = _subst_map(args.subst)
    if "=" in args.expr:
        lhs, rhs = parse_equation(args.expr)
        lhs, rhs = substitute(lhs, mapping), substitute(rhs, mapping)
        ok = timer("prove_eq", prove_eq, lhs, rhs, table)
        diff = normalize(lhs - rhs, table)
        return {"expr": args.expr, "holds": ok, "difference": str(diff)}, EXIT_OK
    e = substitute(parse_expr(args.expr), mapping)
    nf = timer("normalize", normalize, e, table)
    return {"expr": args.expr, "normal_form": str(nf)}, EXIT_OK


def _default_fixture(n):
    ref = resources.files("quadmordell") / "fixtures" / f"factor_{n}.txt"
    return Path(str(ref)) if ref.is_file() else None


def cmd_certify(args, timer):
    if args.live is not None:
        transport = certify.LiveTransport(args.live or certify.LiveTransport().url, args.timeout)
    elif args.fixture:
        transport = certify.FixtureTransport(Path(args.fixture))
    elif args.local:
        transport = certify.LocalTransport()
    else:
        path = _default_fixture(args.n)
        if path is None:
            raise FileNotFoundError(f"no bundled fixture for n = {args.n}; use --fixture, --live or --local")
        transport = certify.FixtureTransport(path)
    res = timer("certify", certify.certify_factorization, args.n, transport)
    if args.pin:
        certify.write_fixture(args.pin, res.exchange)
    result = {
        "n": args.n,
        "query": res.exchange.query,
        "response": res.exchange.raw_response,
        "source": res.exchange.source.split(":", 1)[0],
        "factors": [list(f) for f in res.certificate.factors],
        "verified": res.verdict.ok,
        "reasons": list(res.verdict.reasons),
        "pin": res.exchange.fixture_text(),
    }
    return result, EXIT_OK if res.verdict.ok else EXIT_ERROR


def sweep_row(d, bound=DEFAULT_BRUTE_BOUND):
    """One row of the (d, h, integer points) table."""
    if d == 0:
        return None
    inst = check_hypotheses(d)
    core = squarefree_part(d)
    h = class_number_analytic(core) if core < 0 else None
    if inst.qualifies:
        if len({h, inst.h, class_number_forms_oracle(core)}) != 1:
            raise ArithmeticError(f"class number oracles disagree for d = {d}")
        pts = solve(inst).points
        method = "descent"
    else:
        pts = brute_force_points(d, bound)
        method = "search, not proof"
    return {"d": d, "h": h, "count": len(pts), "points": [list(p) for p in pts], "method": method}


def cmd_sweep(args, timer):
    lo, hi = sorted((args.from_, args.to))
    ds = [d for d in range(hi, lo - 1, -1) if d != 0]
    bounds = [args.bound] * len(ds)
    t0 = time.perf_counter()
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(sweep_row, ds, bounds))
    else:
        rows = [sweep_row(d, b) for d, b in zip(ds, bounds)]
    timer.ms["sweep"] = round((time.perf_counter() - t0) * 1000, 3)
    return rows, EXIT_OK


# ---------------------------------------------------------------------------
# output


def envelope(command, params, result, durations=None):
    env = {"schema": SCHEMA, "command": command, "params": params, "result": result}
    if durations is not None:
        env["durations_ms"] = durations
    return env


def to_json(env):
    return json.dumps(env, sort_keys=True, indent=2) + "\n"


def _cell(v):
    # bare strings unless they would be misread (json-like, multiline, containing the delimiter)
    if isinstance(v, str) and v == v.strip() and "\n" not in v and "|" not in v and _uncell(v) == v:
        return v
    return json.dumps(v, sort_keys=True, separators=(",", ":"))


def _uncell(s):
    try:
        return json.loads(s)
    except ValueError:
        return s


def _grid(rows):
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return ["  |  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]


def to_table(env):
    lines = [f"# {env['command']} {_cell(env['params'])}"]
    if "durations_ms" in env:
        lines.append(f"# durations_ms {_cell(env['durations_ms'])}")
    res = env["result"]
    if isinstance(res, list):
        cols = list(res[0]) if res else []
        lines += _grid([cols] + [[_cell(r[c]) for c in cols] for r in res]) if cols else []
    else:
        lines += _grid([["key", "value"]] + [[k, _cell(v)] for k, v in sorted(res.items())])
    return "\n".join(lines) + "\n"


def parse_table(text):
    """Inverse of ``to_table``, used to compare the two output formats."""
    lines = text.rstrip("\n").split("\n")
    head = lines[0][2:]
    command, _, params = head.partition(" {")
    params = "{" + params
    env = {"schema": SCHEMA, "command": command, "params": json.loads(params)}
    body = lines[1:]
    if body and body[0].startswith("# durations_ms "):
        env["durations_ms"] = json.loads(body[0][len("# durations_ms "):])
        body = body[1:]
    rows = [[c.strip() for c in ln.split("  |  ")] for ln in body]
    if rows and rows[0] == ["key", "value"]:
        env["result"] = {k: _uncell(v) for k, v in rows[1:]}
    else:
        cols = rows[0] if rows else []
        env["result"] = [dict(zip(cols, map(_uncell, r))) for r in rows[1:]]
    return env


# ---------------------------------------------------------------------------
# argument parsing


def _int_list(text):
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--timings", action="store_true", help="include per stage durations (not byte stable)")

    p = _Parser(prog="quadmordell", description="Class groups and Mordell equations y^2 = x^3 + d.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("class-group", parents=[common], help="class group of Z[sqrt d]")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--method", choices=[m.value for m in Method], default="minkowski")
    s.add_argument("--m", type=_int_list, help="the set M for --method mset, e.g. 1,2,3,4")
    s.set_defaults(func=cmd_class_group)

    s = sub.add_parser("class-number", parents=[common], help="class number by independent oracles")
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(func=cmd_class_number)

    s = sub.add_parser("mordell", parents=[common], help="integral points on y^2 = x^3 + d")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--trace", action="store_true", help="include descent traces per point")
    s.add_argument("--brute-bound", type=int, default=0, help="cross-check by search over |x| <= bound")
    s.set_defaults(func=cmd_mordell)

    s = sub.add_parser("ideal", parents=[common], help="HNF, factorization and class of an ideal")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--gen", action="append", required=True, help="generator such as '1 + sqrt(-5)'; repeatable")
    s.set_defaults(func=cmd_ideal)

    s = sub.add_parser("normalize", parents=[common], help="normal form of an expression, or check lhs = rhs")
    s.add_argument("expr")
    s.add_argument("--d", type=int, help="work in Z[sqrt d] (default: the trivial table over Z)")
    s.add_argument("--subst", action="append", help="name=expr substitution; repeatable")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("certify", help="certify externally computed results")
    csub = s.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    f = csub.add_parser("factor", parents=[common], help="factorization of n")
    f.add_argument("--n", type=int, required=True)
    src = f.add_mutually_exclusive_group()
    src.add_argument("--live", metavar="URL", nargs="?", const="", help=f"POST the query to URL (default endpoint: ${certify.ENDPOINT_ENV})")
    src.add_argument("--fixture", metavar="PATH")
    src.add_argument("--local", action="store_true", help="answer with the built-in factorizer")
    f.add_argument("--timeout", type=float, default=certify.DEFAULT_TIMEOUT)
    f.add_argument("--pin", metavar="PATH", help="write the exchange as a fixture file")
    f.set_defaults(func=cmd_certify)

    s = sub.add_parser("sweep", parents=[common], help="h and integral points for a range of d")
    s.add_argument("--from", dest="from_", type=int, required=True)
    s.add_argument("--to", type=int, required=True)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--bound", type=int, default=DEFAULT_BRUTE_BOUND, help="search bound when the descent does not apply")
    s.set_defaults(func=cmd_sweep)
    return p


def _params(args):
    skip = {"func", "command", "kind", "format", "timings"}
    out = {k.rstrip("_"): v for k, v in vars(args).items() if k not in skip and v is not None and v is not False}
    if getattr(args, "kind", None):
        out["kind"] = args.kind
    return out


def run(argv=None, out=None):
    out = out or sys.stdout
    if isinstance(argv, str):
        argv = argv.split()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError:
        return EXIT_USAGE
    if getattr(args, "jobs", 1) < 1:
        print("quadmordell: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    timer = _Timer()
    try:
        result, code = args.func(args, timer)
    except UsageError as e:
        print(f"quadmordell: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (HypothesisError, UnsupportedOrder) as e:
        print(f"quadmordell: hypothesis not met: {e}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except Exception as e:  # noqa: BLE001 - any failure is reported, not raised
        print(f"quadmordell: error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR
    command = args.command if args.command != "certify" else f"certify {args.kind}"
    env = envelope(command, _params(args), result, timer.ms if args.timings else None)
    out.write(to_json(env) if args.format == "json" else to_table(env))
    return code


def main():
    sys.exit(run())
