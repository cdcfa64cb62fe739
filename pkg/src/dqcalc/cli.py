"""Command-line interface.

Exit status: 0 on success, 1 when a verification fails or a mathematical
error occurs, 2 for usage errors, parse errors and malformed input files.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import cech, lagrange, serialize
from .errors import DQError, ParseError
from .parser import Value, evaluate, parse_expr
from .scalars import LaurentScalar, growth_check, min_growth_constant
from .starexp import SSeries, laplace, resolvent, star_exp
from .symbols import ESymbol, WSymbol
from .wcalc import (
    OTauElement,
    apply_otau,
    commutator,
    commutator_e,
    e_to_w,
    transpose_e,
    transpose_w,
)


class UsageError(Exception):
    pass


def _expr(args, text, mode=None):
    mode = mode or args.algebra
    return evaluate(parse_expr(text, mode), mode, args.vars)


def _plain(args, text, mode=None):
    val = _expr(args, text, mode)
    if not val.is_plain():
        raise UsageError("expression must not depend on t or s here")
    return val.symbol()


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return text


def _load_json(path):
    try:
        return json.loads(_load(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def _floor(args, obj):
    if args.floor is None:
        return obj
    if isinstance(obj, (WSymbol, ESymbol, Value)):
        return obj.truncate(args.floor)
    if isinstance(obj, OTauElement):
        return OTauElement(obj.value.truncate(args.floor))
    if isinstance(obj, (SSeries,)):
        return SSeries(obj.n, {k: v.truncate(args.floor) for k, v in obj.coeffs.items()}, obj.s_floor)
    from .starexp import TWElement

    if isinstance(obj, TWElement):
        return TWElement(obj.n, {k: v.truncate(args.floor) for k, v in obj.coeffs.items()}, obj.t_floor)
    return obj


def _emit(args, obj, out):
    obj = _floor(args, obj)
    if args.format == "json":
        out.write(json.dumps(serialize.to_json(obj), sort_keys=True) + "\n")
    else:
        out.write(str(obj) + "\n")


def _emit_report(args, payload: dict, text: str, out):
    if args.format == "json":
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")


# --------------------------------------------------------------------------
# subcommands


def cmd_eval(args, out):
    val = _expr(args, args.expr)
    _emit(args, val.symbol() if val.is_plain() else val, out)
    return 0


def cmd_transpose(args, out):
    s = _plain(args, args.expr)
    _emit(args, transpose_e(s) if args.algebra == "e" else transpose_w(s), out)
    return 0


def cmd_commutator(args, out):
    mode = args.algebra
    n = _shared_n(args, args.left, args.right, mode=mode)
    p = evaluate(parse_expr(args.left, mode), mode, n)
    q = evaluate(parse_expr(args.right, mode), mode, n)
    if not (p.is_plain() and q.is_plain()):
        raise UsageError("commutator operands must not depend on t or s")
    p, q = p.symbol(), q.symbol()
    if mode == "e":
        if p.n != q.n:
            raise UsageError("both operands must agree on the use of t/tau")
        _emit(args, commutator_e(p, q), out)
    else:
        _emit(args, commutator(p, q), out)
    return 0


def _shared_n(args, *texts, mode="w"):
    from .parser import max_index

    return args.vars or max([1] + [max_index(parse_expr(t, mode)) for t in texts])


def cmd_act(args, out):
    n = _shared_n(args, args.expr, args.on)
    P = evaluate(parse_expr(args.expr, "w"), "w", n).symbol()
    F = evaluate(parse_expr(args.on, "w"), "w", n).symbol()
    if not F.u_free():
        raise UsageError("--on must be a section of O^tau (no u variables)")
    _emit(args, apply_otau(P, OTauElement(F)), out)
    return 0


def cmd_exp(args, out):
    _emit(args, star_exp(_plain(args, args.expr, "w"), args.t_depth), out)
    return 0


def cmd_resolvent(args, out):
    _emit(args, resolvent(_plain(args, args.expr, "w"), args.s_depth), out)
    return 0


def _sseries_from_text(args, text) -> SSeries:
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            obj = serialize.from_json(json.loads(stripped))
        except (json.JSONDecodeError, KeyError) as exc:
            raise UsageError(f"malformed SSeries JSON: {exc}") from None
        if not isinstance(obj, SSeries):
            raise UsageError("laplace input must be an SW series")
        return obj
    val = _expr(args, stripped, "w")
    coeffs = {}
    for (a, b), sym in val.parts.items():
        if a or b >= 0:
            raise UsageError("laplace input must be a sum of negative powers of s")
        coeffs[-b - 1] = sym
    n = val.proto.n
    return SSeries(n, coeffs)


def cmd_laplace(args, out):
    _emit(args, laplace(_sseries_from_text(args, _load(args.infile))), out)
    return 0


def cmd_e2w(args, out):
    s = _plain(args, args.expr, "e")
    _emit(args, e_to_w(s), out)
    return 0


def _laurent_from_text(args, text) -> LaurentScalar:
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            d = json.loads(stripped)
            return LaurentScalar({int(j): c for j, c in d["coeffs"].items()}, d.get("floor"))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise UsageError(f"malformed coefficient file: {exc}") from None
    sym = _plain(args, stripped, "w")
    if not sym.u_free() or any(any(e) for _, e in sym.terms):
        raise UsageError("coefficient expression must only involve tau")
    return LaurentScalar({j: c for (j, _), c in sym.terms.items()}, sym.floor)


def cmd_growth(args, out):
    a = _laurent_from_text(args, _load(args.coeffs))
    try:
        C = Fraction(args.C)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--C must be a positive rational, got {args.C!r}") from None
    rep = growth_check(a, C, args.depth)
    cmin = min_growth_constant(a, args.depth)
    payload = {
        "ok": rep.ok,
        "first_failure": rep.first_failure,
        "checked_down_to": rep.checked_down_to,
        "C": str(C),
        "min_C_lower_bound": None if cmin is None else str(cmin),
    }
    if rep.ok:
        text = f"pass: |a_j| <= C^-j (-j)! for {rep.checked_down_to} <= j <= 0 with C = {C}"
    else:
        text = f"fail: bound violated at j = {rep.first_failure} with C = {C}"
    text += "\nminimal C >= " + ("none (|a_0| > 1)" if cmin is None else str(cmin))
    _emit_report(args, payload, text, out)
    return 0 if rep.ok else 1


def cmd_cech(args, out):
    d = _load_json(args.infile)
    try:
        nv = serialize.nerve_from_json(d)
        c = serialize.cochain_from_json(d)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"malformed Cech input: {exc}") from None
    rep = cech.validate_nerve(nv)
    if not rep:
        raise UsageError(f"nerve is not closed under faces: {rep.problems[0]}")
    cyc = cech.check_cocycle2(nv, c)
    if args.action == "check":
        payload = {"cocycle": cyc.ok, "face": cyc.face, "value": cyc.value}
        if cyc.ok:
            text = "cocycle: yes"
        else:
            text = f"cocycle: no, (dc){','.join(map(str, cyc.face))} = {list(cyc.value)}"
        _emit_report(args, payload, text, out)
        return 0 if cyc.ok else 1
    if not cyc:
        _emit_report(args, {"cocycle": False, "face": cyc.face},
                     f"not a cocycle: fails on {cyc.face}", out)
        return 1
    res = cech.coboundary_solve(nv, c)
    if res.solvable:
        b = serialize.cochain_to_json(res.witness)
        payload = {"coboundary": True, "witness": b}
        text = "coboundary: yes\n" + "\n".join(f"b{k} = {v}" for k, v in b.items())
        _emit_report(args, payload, text, out)
        return 0
    cert = res.certificate
    lam = {",".join(map(str, k)): str(v) for k, v in sorted(cert.functional.items())}
    payload = {"coboundary": False, "factor": cert.factor, "functional": lam}
    text = f"coboundary: no (obstruction on factor {cert.factor})\n" + "\n".join(
        f"lambda{k} = {v}" for k, v in lam.items()
    )
    _emit_report(args, payload, text, out)
    return 1


def cmd_descent(args, out):
    d = _load_json(args.infile)
    try:
        dd, gd = serialize.descent_from_json(d)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed descent input: {exc}") from None
    rep = cech.check_descent(dd)
    lines = [f"descent: {'yes' if rep.ok else 'no'} (compared modulo tau^{rep.verified_floor - 1} and below)"]
    for f in rep.failures:
        lines.append(f"  condition {f.condition} fails on {f.face}: {f.detail}")
    payload = {
        "descent": rep.ok,
        "verified_floor": rep.verified_floor,
        "failures": [{"condition": f.condition, "face": list(f.face), "detail": f.detail} for f in rep.failures],
    }
    ok = rep.ok
    if gd is not None:
        g = cech.check_glue(gd) if rep.ok else None
        if g is None:
            lines.append("glue: skipped (descent datum rejected)")
            payload["glue"] = None
        else:
            lines.append(f"glue: {'yes' if g.ok else 'no'}" + ("" if g.ok else f", {g.failure[0]}: {g.failure[1]}"))
            payload["glue"] = {"ok": g.ok, "failure": None if g.ok else [list(g.failure[0]), g.failure[1]]}
            ok = ok and g.ok
    _emit_report(args, payload, "\n".join(lines), out)
    return 0 if ok else 1


def cmd_lagrangian(args, out):
    d = _load_json(args.infile)
    try:
        if args.action == "check":
            L = serialize.lagrangian_from_json(d)
            rep = lagrange.is_lagrangian(L)
            basis = L.basis
        else:
            cors = [serialize.correspondence_from_json(c) for c in d["correspondences"]]
            if not cors:
                raise UsageError("no correspondences given")
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed Lagrangian input: {exc}") from None
    if args.action == "compose":
        result = cors[-1]
        for c in reversed(cors[:-1]):
            result = lagrange.compose_correspondence(c, result)
        rep = lagrange.is_lagrangian(result.subspace)
        basis = result.basis
    bj = serialize.basis_to_json(basis)
    payload = {"lagrangian": rep.ok, "rank": rep.rank, "basis": bj}
    text = f"lagrangian: {'yes' if rep.ok else 'no'} (rank {rep.rank})"
    if rep.violation:
        a, b, w = rep.violation
        text += f", omega(v{a}, v{b}) = {w}"
        payload["violation"] = [a, b, str(w)]
    text += "\n" + "\n".join("[" + ", ".join(row) + "]" for row in bj)
    _emit_report(args, payload, text, out)
    return 0 if rep.ok else 1


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", choices=("w", "e"), default=argparse.SUPPRESS)
    common.add_argument("--vars", type=int, default=argparse.SUPPRESS, metavar="N")
    common.add_argument("--floor", type=int, default=argparse.SUPPRESS, metavar="N")
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="dqcalc", description="Exact W/E symbol calculus.")
    p.add_argument("--algebra", choices=("w", "e"), default="w", help="star product to use (default w)")
    p.add_argument("--vars", type=int, default=None, metavar="N", help="number of base variables")
    p.add_argument("--floor", type=int, default=None, metavar="N", help="truncate output modulo tau^(<N)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate to a total symbol")
    s.add_argument("expr")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("transpose", parents=[common], help="transposition")
    s.add_argument("expr")
    s.set_defaults(func=cmd_transpose)

    s = sub.add_parser("commutator", parents=[common], help="[P, Q]")
    s.add_argument("left")
    s.add_argument("right")
    s.set_defaults(func=cmd_commutator)

    s = sub.add_parser("act", parents=[common], help="action on O^tau")
    s.add_argument("expr")
    s.add_argument("--on", required=True, metavar="FEXPR")
    s.set_defaults(func=cmd_act)

    s = sub.add_parser("exp", parents=[common], help="star exponential exp(t tau P)")
    s.add_argument("expr")
    s.add_argument("--t-depth", type=int, required=True, metavar="N")
    s.set_defaults(func=cmd_exp)

    s = sub.add_parser("resolvent", parents=[common], help="principal part of 1/(s-P)")
    s.add_argument("expr")
    s.add_argument("--s-depth", type=int, required=True, metavar="N")
    s.set_defaults(func=cmd_resolvent)

    s = sub.add_parser("laplace", parents=[common], help="Laplace transform of an s-series")
    s.add_argument("--in", dest="infile", required=True, metavar="FILE")
    s.set_defaults(func=cmd_laplace)

    s = sub.add_parser("e2w", parents=[common], help="reduce a t-independent E-symbol to W")
    s.add_argument("expr")
    s.set_defaults(func=cmd_e2w)

    s = sub.add_parser("growth", parents=[common], help="growth bound diagnostic in k")
    s.add_argument("--coeffs", required=True, metavar="FILE")
    s.add_argument("--C", required=True, metavar="RAT")
    s.add_argument("--depth", type=int, required=True, metavar="N")
    s.set_defaults(func=cmd_growth)

    s = sub.add_parser("cech", parents=[common], help="Cech 2-cocycles")
    s.add_argument("action", choices=("check", "solve"))
    s.add_argument("--in", dest="infile", required=True, metavar="FILE")
    s.set_defaults(func=cmd_cech)

    s = sub.add_parser("descent", parents=[common], help="descent and gluing data")
    s.add_argument("action", choices=("check",))
    s.add_argument("--in", dest="infile", required=True, metavar="FILE")
    s.set_defaults(func=cmd_descent)

    s = sub.add_parser("lagrangian", parents=[common], help="linear Lagrangian subspaces")
    s.add_argument("action", choices=("check", "compose"))
    s.add_argument("--in", dest="infile", required=True, metavar="FILE")
    s.set_defaults(func=cmd_lagrangian)
    return p


def run_command(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for name in ("t_depth", "s_depth", "depth"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            err.write(f"dqcalc: error: --{name.replace('_', '-')} must be positive\n")
            return 2
    if args.vars is not None and args.vars < 1:
        err.write("dqcalc: error: --vars must be positive\n")
        return 2
    try:
        return args.func(args, out)
    except ParseError as exc:
        err.write(f"dqcalc: parse error: {exc}\n")
        return 2
    except UsageError as exc:
        err.write(f"dqcalc: error: {exc}\n")
        return 2
    except (DQError, ZeroDivisionError) as exc:
        err.write(f"dqcalc: {type(exc).__name__}: {exc}\n")
        return 1
    except ValueError as exc:
        err.write(f"dqcalc: error: {exc}\n")
        return 2


def main():
    sys.exit(run_command(sys.argv[1:]))
