"""Batch command-line front end.

Every subcommand reads its inputs from files or inline literals, writes JSON
(sorted keys) and optionally DOT, and exits with 0 on success, 2 on bad
input, 3 when a resource cap is hit and 4 when an internal check fails.
Errors are reported on stderr as one JSON object.

Series arguments are either a path to a series JSON file or a literal:

    eq:<P(t,y)>[@c0,c1,...]   branch of an algebraic equation (segment defaults to 0)
    mono:<e>[*c]              c t^e with e rational
    poly:c0,c1,...            polynomial in t
    geometric                 sum of t^n
    power-sparse              sum of t^(p^n)
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import tempfile
from fractions import Fraction

from . import series as S
from .christol import (AlgebraicSeriesRep, BranchError, ParseError, christol_forward,
                       newton_expand, ore_annihilator)
from .codec import WordError
from .dfao import DEFAULT_SUBSET_CAP, equivalent, explore, lp0_dfao, minimize, product
from .errors import ResourceError, VerificationError
from .fields import FieldError, FqField

EXIT_OK, EXIT_USER, EXIT_CAP, EXIT_VERIFY = 0, 2, 3, 4


class UsageError(ValueError):
    """Bad command-line input."""


# ---------------------------------------------------------------------------
# output

def write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(obj):
    return json.dumps(obj, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


class Output:
    """Collects the JSON and DOT artifacts of one command."""

    def __init__(self, args, out):
        self.args, self.out = args, out

    def emit(self, obj, dot=None):
        text = dumps(obj)
        if self.args.json_out:
            write_atomic(self.args.json_out, text)
        else:
            self.out.write(text)
        if dot is not None and self.args.dot_out:
            write_atomic(self.args.dot_out, dot)


# ---------------------------------------------------------------------------
# input parsing

def parse_field(args):
    modulus = None
    if args.modulus:
        try:
            modulus = tuple(int(c) for c in args.modulus.split(","))
        except ValueError:
            raise UsageError("--modulus takes comma-separated coefficients, constant first") from None
    F = FqField.parse(args.field, modulus)
    return F


def parse_element(F, text):
    """An element of F_q as an int in range(q) (base-p digits are the z-coefficients)."""
    try:
        v = int(text)
    except ValueError:
        raise UsageError(f"field element {text!r} is not an integer") from None
    if not 0 <= v < F.q:
        raise UsageError(f"field element {v} outside range({F.q})")
    return v


def parse_list(F, text):
    return [parse_element(F, c) for c in text.split(",") if c.strip()]


def parse_rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{text!r} is not a rational number") from None


def load_series(F, text, cap):
    """Series from a JSON file path or an inline literal (see the module docstring)."""
    if os.path.exists(text):
        with open(text) as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise UsageError(f"{text}: {exc}") from None
        x = S.QuasiAutomaticSeries.from_json(obj.get("series", obj))
        if x.field is not F:
            raise UsageError(f"{text}: series is over F_{x.field.q}, --field gives F_{F.q}")
        return x
    kind, _, rest = text.partition(":")
    if kind == "eq":
        eq, _, seg = rest.partition("@")
        rep = AlgebraicSeriesRep.parse(eq, F, parse_list(F, seg) if seg else (0,))
        return christol_forward(rep, cap=cap)
    if kind == "mono":
        e, _, c = rest.partition("*")
        return S.monomial(F, parse_rational(e), parse_element(F, c) if c else 1)
    if kind == "poly":
        return S.polynomial(F, parse_list(F, rest))
    if text == "geometric":
        return S.geometric(F)
    if text == "power-sparse":
        return S.power_sparse(F)
    raise UsageError(f"cannot read series {text!r}: no such file and not a literal")


def series_json(x):
    return x.to_json()


def exponents_listing(x, N, grid=0):
    """Nonzero coefficients at exponents i with a*i + b on (1/p^grid)Z and i < N."""
    F = x.field
    return [[str(e), F.format(c)] for e, c in sorted(x.truncation(N, grid).items())]


# ---------------------------------------------------------------------------
# commands

def cmd_expand(args, F, out):
    rep = AlgebraicSeriesRep.parse(args.equation, F, parse_list(F, args.branch))
    xs = newton_expand(rep, args.N)
    text = "".join(f"{i} {F.format(c)}\n" for i, c in enumerate(xs))
    if args.json_out:
        write_atomic(args.json_out, dumps({"coefficients": [F.format(c) for c in xs]}))
    out.write(text)


def cmd_christol(args, F, out):
    rep = AlgebraicSeriesRep.parse(args.equation, F, parse_list(F, args.branch))
    res = christol_forward(rep, cap=args.orbit_cap, details=True)
    xs = newton_expand(rep, args.check)
    got = S.truncated_coeffs(res.series, args.check)
    if got != xs:
        raise VerificationError("automatic coefficients differ from the Newton expansion")
    M = S.coefficient_dfao(res.series, args.cap)
    Output(args, out).emit({"series": series_json(res.series), "dimension": len(res.basis),
                            "checked_terms": args.check, "dfao_states": M.num_states},
                           M.to_dot("christol"))


def cmd_annihilate(args, F, out):
    x = load_series(F, args.series, args.cap)
    P = ore_annihilator(x, max_degree=args.max_degree)
    prec = P.metadata["verified_precision"]
    Output(args, out).emit({"annihilator": P.format(), "order": P.degree,
                            "numerators": [q.coeffs for q in P.numerators()],
                            "verified_precision": prec, "metadata": P.metadata})


def _binary(op):
    def run(args, F, out):
        x = load_series(F, args.x, args.cap)
        y = load_series(F, args.y, args.cap)
        z = op(x, y, args.cap)
        M = S.coefficient_dfao(z, args.cap)
        Output(args, out).emit({"series": series_json(z),
                                "terms": exponents_listing(z, args.N, args.grid)},
                               M.to_dot("series"))
    return run


cmd_add = _binary(S.add)
cmd_hadamard = _binary(S.hadamard)
cmd_mul = _binary(S.mul_fq)


def cmd_truncate(args, F, out):
    x = load_series(F, args.series, args.cap)
    z = S.truncate(x, parse_rational(args.r), args.cap)
    M = S.coefficient_dfao(z, args.cap)
    Output(args, out).emit({"series": series_json(z),
                            "terms": exponents_listing(z, args.N, args.grid)},
                           M.to_dot("series"))


def cmd_solve_as(args, F, out):
    from .hahn import artin_schreier_neg, artin_schreier_pos, support_min

    x = load_series(F, args.series, args.cap)
    lo = support_min(x, cap=args.cap)
    if lo is not None and lo < 0:
        y, radius = artin_schreier_neg(x, args.cap), None
    else:
        tr = artin_schreier_pos(x, parse_element(F, args.c), args.depth, args.cap)
        y, radius = tr.series, tr.radius
    M = S.coefficient_dfao(y, args.cap)
    Output(args, out).emit({"series": series_json(y), "radius": radius,
                            "terms": exponents_listing(y, args.N, args.grid)},
                           M.to_dot("artin_schreier"))


PRESETS = {
    "fibonacci-mod-2": (2, (1, 1), (0, 1)),
}


def cmd_zero_set(args, F, out):
    from .zerosets import (LinearRecurrence, algebraic_zero_dfao, binomial_gap_zero_set,
                           lrs_zero_dfao, mod_acceptor)

    if args.what == "binomial-gap":
        rep = binomial_gap_zero_set(F.p, args.N)
        if not rep.ok:
            raise VerificationError("binomial gap zero set differs from the powers of p")
        Output(args, out).emit(rep.to_json(), rep.dfao.to_dot("zero_set"))
        return
    if args.what == "series":
        if not args.series:
            raise UsageError("zero-set series needs --series")
        M = algebraic_zero_dfao(load_series(F, args.series, args.cap), args.cap)
        Output(args, out).emit({"dfao": M.to_json(F.p)}, M.to_dot("zero_set"))
        return
    report = {}
    if args.what in PRESETS:
        q, coeffs, init = PRESETS[args.what]
        if F.q != q:
            raise UsageError(f"{args.what} is defined over F_{q}")
        rec = LinearRecurrence.from_recurrence(F, coeffs, init)
    elif args.what == "recurrence":
        if not args.coeffs or not args.initial:
            raise UsageError("zero-set recurrence needs --coeffs and --initial")
        rec = LinearRecurrence.from_recurrence(F, parse_list(F, args.coeffs),
                                               parse_list(F, args.initial))
    else:
        raise UsageError(f"unknown zero-set kind {args.what!r}")
    M = lrs_zero_dfao(rec, cap=args.cap)
    if args.what == "fibonacci-mod-2":
        canon = lp0_dfao(2)
        A = minimize(product(M, canon, lambda a, b: a and b))
        B = minimize(product(mod_acceptor(2, 3), canon, lambda a, b: a and b))
        report["equivalent_to_mod3"] = equivalent(A, B)
        if not report["equivalent_to_mod3"]:
            raise VerificationError("Fibonacci zero set differs from the multiples of 3")
    terms = rec.terms(args.N)
    from .codec import encode_int

    bad = [n for n in range(args.N) if M(encode_int(n, F.p)) != (terms[n] == 0)]
    if bad:
        raise VerificationError(f"zero set automaton disagrees with the sequence at n={bad[0]}")
    report.update({"dfao": M.to_json(F.p), "checked_terms": args.N,
                   "zeros": [n for n in range(args.N) if terms[n] == 0][:64]})
    Output(args, out).emit(report, M.to_dot("zero_set"))


def cmd_counterexample(args, F, out):
    from .twist import build_counterexample, refute_counterexample

    p = F.p
    ce = build_counterexample(p, args.depth)
    orders = []
    for K in range(1, args.K + 1):
        r = refute_counterexample(p, K, depth=args.depth)
        orders.append({"order": K, "nullspace_dim": r["nullspace_dim"],
                       "families": [f["j"] for f in r["families"]]})
    ok = all(o["nullspace_dim"] == 0 for o in orders)
    Output(args, out).emit({"p": p, "depth": args.depth, "relations_verified": ce is not None,
                            "orders": orders, "refuted": ok})


def _integer_vector_dfao(x, cap):
    """Minimized DFAO on integer words (MSB first) whose states are vectors in F_q^d."""
    inner = x.inner if isinstance(x, S.QuasiAutomaticSeries) else x
    F = inner.field
    maps = inner.f1.maps
    M = explore(tuple(range(F.p)), tuple(inner.iota), lambda v, a: tuple(maps[a].apply(v)),
                lambda v: F.dot(inner.pi, v), cap=cap, what="vector tracking")
    return minimize(M)


def bench_rows(entries, cap=DEFAULT_SUBSET_CAP):
    """One row per series with S <= q^d checked.

    ``entries`` holds (name, series, factors); for a Hadamard product the
    factors are the operands and d_construction = d1 * d2 is the dimension of
    the tensor data before reduction.
    """
    rows = []
    for name, x, factors in entries:
        F = x.field
        d = x.dim
        dc = d
        if factors:
            dc = 1
            for f in factors:
                dc *= f.dim
        M = _integer_vector_dfao(x, cap)
        fs = len(S.functional_states(x, cap))
        if M.num_states > F.q ** d or M.num_states > F.q ** dc:
            raise VerificationError(f"{name}: {M.num_states} states exceed q^d = {F.q ** d}")
        rows.append({"series": name, "q": F.q, "d": d, "d_construction": dc, "S": M.num_states,
                     "functional_states": fs, "q_pow_d": F.q ** d,
                     "ratio": f"{M.num_states / F.q ** d:.4f}"})
    return rows


def default_bench(cap):
    F2, F3, F4 = FqField(2), FqField(3), FqField(2, 2)
    ps2, ps3 = S.power_sparse(F2), S.power_sparse(F3)
    alg = christol_forward(AlgebraicSeriesRep.parse("y^2+y+t", F2))
    rat = christol_forward(AlgebraicSeriesRep.parse("(1+t)*y+1", F2, (1,)))
    cub = christol_forward(AlgebraicSeriesRep.parse("y^3+y+t", F2))
    f4 = christol_forward(AlgebraicSeriesRep.parse("y^2+y+g*t", F4))
    base = [
        ("geometric/F2", S.geometric(F2), None),
        ("power-sparse/F2", ps2, None),
        ("power-sparse/F3", ps3, None),
        ("y^2+y+t/F2", alg, None),
        ("(1+t)y+1/F2", rat, None),
        ("y^3+y+t/F2", cub, None),
        ("y^2+y+g*t/F4", f4, None),
    ]
    pairs = [("power-sparse/F2", ps2, ps2), ("y^2+y+t/F2", alg, alg),
             ("y^3+y+t/F2", cub, alg), ("y^3+y+t/F2", cub, cub),
             ("power-sparse/F3", ps3, ps3), ("y^2+y+g*t/F4", f4, f4)]
    had = [(f"hadamard({n}, {y.dim}x{x.dim})", S.hadamard(x, y, cap), (x, y))
           for n, x, y in pairs]
    return base + had


def bench_csv(rows):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["series", "q", "d", "d_construction", "S",
                                        "functional_states", "q_pow_d", "ratio"],
                       lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cmd_bench_complexity(args, F, out):
    rows = bench_rows(default_bench(args.cap), args.cap)
    text = bench_csv(rows)
    if args.csv_out:
        write_atomic(args.csv_out, text)
    out.write(text)
    if args.json_out:
        write_atomic(args.json_out, dumps({"rows": rows}))


def cmd_well_ordered(args, F, out):
    x = load_series(F, args.series, args.cap)
    verdict = S.well_ordered(x, args.cap)
    Output(args, out).emit({"verdict": verdict})


# ---------------------------------------------------------------------------
# pipelines

class PipelineSpec:
    """Ordered named operations; arguments name earlier results (``$name``) or literals.

    Each step is ``{"name": ..., "op": ..., "args": [...]}``.  All steps are
    type-checked before anything runs.
    """

    OPS = {
        "load": (("literal",), "series"),
        "add": (("series", "series"), "series"),
        "hadamard": (("series", "series"), "series"),
        "mul": (("series", "series"), "series"),
        "truncate": (("series", "rational"), "series"),
        "frobenius": (("series", "int"), "series"),
        "annihilate": (("series",), "annihilator"),
        "zero-set": (("series",), "dfao"),
        "well-ordered": (("series",), "verdict"),
    }

    def __init__(self, steps):
        self.steps = list(steps)

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict) or not isinstance(obj.get("steps"), list):
            raise UsageError("a pipeline is an object with a list of steps")
        return cls(obj["steps"])

    def check(self):
        types = {}
        for i, st in enumerate(self.steps):
            name, op, argv = st.get("name"), st.get("op"), st.get("args", [])
            if op not in self.OPS:
                raise UsageError(f"step {i}: unknown operation {op!r}")
            if not name or name in types:
                raise UsageError(f"step {i}: missing or duplicate name")
            sig, ret = self.OPS[op]
            if len(argv) != len(sig):
                raise UsageError(f"step {i}: {op} takes {len(sig)} arguments")
            for a, want in zip(argv, sig):
                if isinstance(a, str) and a.startswith("$"):
                    got = types.get(a[1:])
                    if got is None:
                        raise UsageError(f"step {i}: {a} is not an earlier result")
                    if got != want:
                        raise UsageError(f"step {i}: {a} is a {got}, expected {want}")
                elif want == "series":
                    raise UsageError(f"step {i}: series arguments must reference a result")
            types[name] = ret
        return types

    def run(self, F, cap):
        self.check()
        env = {}
        for st in self.steps:
            op = st["op"]
            argv = [env[a[1:]] if isinstance(a, str) and a.startswith("$") else a
                    for a in st.get("args", [])]
            if op == "load":
                val = load_series(F, argv[0], cap)
            elif op in ("add", "hadamard", "mul"):
                f = {"add": S.add, "hadamard": S.hadamard, "mul": S.mul_fq}[op]
                val = f(argv[0], argv[1], cap)
            elif op == "truncate":
                val = S.truncate(argv[0], parse_rational(str(argv[1])), cap)
            elif op == "frobenius":
                val = S.frobenius_series(argv[0], int(argv[1]), cap)
            elif op == "annihilate":
                val = ore_annihilator(argv[0])
            elif op == "zero-set":
                from .zerosets import algebraic_zero_dfao

                val = algebraic_zero_dfao(argv[0], cap)
            else:
                val = S.well_ordered(argv[0], cap)
            env[st["name"]] = val
        return env


def _result_json(v):
    if isinstance(v, S.QuasiAutomaticSeries):
        return v.to_json()
    if hasattr(v, "format") and hasattr(v, "numerators"):
        return {"annihilator": v.format()}
    if hasattr(v, "to_json"):
        return v.to_json()
    return v


def cmd_run(args, F, out):
    with open(args.pipeline) as fh:
        try:
            spec = PipelineSpec.from_json(json.load(fh))
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.pipeline}: {exc}") from None
    env = spec.run(F, args.cap)
    Output(args, out).emit({k: _result_json(v) for k, v in env.items()})


# ---------------------------------------------------------------------------
# parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="2", help="p or p^e (default 2)")
    common.add_argument("--modulus", help="defining polynomial of F_q, constant term first")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    common.add_argument("--cap", type=int, default=S.DEFAULT_MONOID_CAP,
                        help="state/monoid cap for automaton constructions")
    common.add_argument("--json-out", help="write the JSON artifact here instead of stdout")
    common.add_argument("--dot-out", help="write a DOT rendering of the automaton here")

    listing = argparse.ArgumentParser(add_help=False)
    listing.add_argument("-N", type=int, default=16, help="list exponents below N")
    listing.add_argument("--grid", type=int, default=0, help="list exponents on (1/p^grid)Z")

    ap = argparse.ArgumentParser(prog="autoseries", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="coefficients of an algebraic branch")
    p.add_argument("equation")
    p.add_argument("--branch", default="0", help="initial coefficients c0,c1,...")
    p.add_argument("-N", type=int, default=16)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("christol", parents=[common], help="automatic data of an algebraic branch")
    p.add_argument("equation")
    p.add_argument("--branch", default="0")
    p.add_argument("--orbit-cap", type=int, default=512)
    p.add_argument("--check", type=int, default=256, help="terms compared with Newton")
    p.set_defaults(func=cmd_christol)

    p = sub.add_parser("annihilate", parents=[common], help="twisted polynomial killing a series")
    p.add_argument("series")
    p.add_argument("--max-degree", type=int, default=64)
    p.set_defaults(func=cmd_annihilate)

    for name, fn in (("add", cmd_add), ("hadamard", cmd_hadamard), ("mul", cmd_mul)):
        p = sub.add_parser(name, parents=[common, listing], help=f"{name} two series")
        p.add_argument("x")
        p.add_argument("y")
        p.set_defaults(func=fn)

    p = sub.add_parser("truncate", parents=[common, listing], help="keep exponents below r")
    p.add_argument("series")
    p.add_argument("r")
    p.set_defaults(func=cmd_truncate)

    p = sub.add_parser("solve-as", parents=[common, listing], help="solve y^p - y = x")
    p.add_argument("series")
    p.add_argument("--c", default="0", help="constant branch (positive support)")
    p.add_argument("--depth", type=int, default=8, help="Frobenius terms (positive support)")
    p.set_defaults(func=cmd_solve_as)

    p = sub.add_parser("zero-set", parents=[common], help="zero set as an automaton")
    p.add_argument("what", help="fibonacci-mod-2, recurrence, binomial-gap or series")
    p.add_argument("--coeffs")
    p.add_argument("--initial")
    p.add_argument("--series")
    p.add_argument("-N", type=int, default=4096, help="terms checked by brute force")
    p.set_defaults(func=cmd_zero_set)

    p = sub.add_parser("counterexample", parents=[common], help="refute an LRR for the example")
    p.add_argument("-K", type=int, default=3, help="orders 1..K")
    p.add_argument("--depth", type=int, default=6)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("bench-complexity", parents=[common], help="state counts versus q^d")
    p.add_argument("--csv-out")
    p.set_defaults(func=cmd_bench_complexity)

    p = sub.add_parser("well-ordered", parents=[common], help="well-ordering verdict of the support")
    p.add_argument("series")
    p.set_defaults(func=cmd_well_ordered)

    p = sub.add_parser("run", parents=[common], help="execute a JSON pipeline")
    p.add_argument("pipeline")
    p.set_defaults(func=cmd_run)
    return ap


def _error(kind, exc, code, err):
    obj = {"error": kind, "message": str(exc), "exit_code": code}
    pos = getattr(exc, "position", None)
    if pos is not None:
        obj["position"] = pos
    if isinstance(exc, ResourceError):
        obj.update({"what": exc.what, "cap": exc.cap})
    err.write(dumps(obj))
    return code


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USER if exc.code else EXIT_OK
    random.seed(args.seed)
    try:
        F = parse_field(args)
        args.func(args, F, out)
    except ResourceError as exc:
        return _error("resource-cap", exc, EXIT_CAP, err)
    except VerificationError as exc:
        return _error("verification-failure", exc, EXIT_VERIFY, err)
    except (UsageError, ParseError, BranchError, FieldError, WordError, ValueError,
            OSError, KeyError) as exc:
        return _error(type(exc).__name__, exc, EXIT_USER, err)
    return EXIT_OK


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
