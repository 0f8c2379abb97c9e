"""Command-line interface: ``chiralwalk <subcommand> [options]``.

Matrices are read as ``{"n": int, "entries": [[re, im], ...]}`` from ``--in``
or standard input. Exit status is 0 on success, 1 when a catalog or
acceptance check fails and 2 on bad input.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, graphs
from .errors import ChiralWalkError
from .linalg import eigh, from_json_dict, hermitize, to_json_dict
from .measured import StoppingRuleConfig, monte_carlo
from .mixing import (
    average_mixing,
    average_mixing_cesaro,
    is_local_uniform,
    is_uniform,
    mixing_matrix,
    mixing_time_search,
    trace_lower_bound,
)
from .quotient import parse_cells, quotient_matrix, quotient_walk_check, switching_certificate, verify_equitable


class InputError(Exception):
    pass


def _clean(obj):
    # NaN/inf are not valid JSON
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def _read_text(path):
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _parse_json(text, source):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _load_matrix(path):
    text = _read_text(path)
    data = _parse_json(text, path or "<stdin>")
    if isinstance(data, dict) and "kind" in data:
        return graphs.build(data), text
    try:
        return from_json_dict(data), text
    except ValueError as exc:
        raise InputError(f"{path or '<stdin>'}: {exc}") from None


def _matrix_rows(M):
    return [[float(x) for x in row] for row in np.asarray(M, dtype=float)]


# --- subcommands -----------------------------------------------------------

def cmd_build(args):
    if args.kind:
        spec = {"kind": args.kind}
        for key in ("n", "d", "signing"):
            if getattr(args, key) is not None:
                spec[key] = getattr(args, key)
        if args.first_row:
            spec["first_row"] = _parse_json(args.first_row, "--first-row")
        if args.edges:
            spec["edges"] = _parse_json(args.edges, "--edges")
        if args.cone:
            spec["cone"] = True
        if args.scaled:
            spec["scaled"] = True
        text = json.dumps(spec, sort_keys=True)
    else:
        text = _read_text(args.input)
        spec = _parse_json(text, args.input or "<stdin>")
    A = graphs.build(spec)
    return 0, dict(to_json_dict(A), spec=spec), text


def cmd_mix(args):
    A, text = _load_matrix(args.input)
    M = mixing_matrix(A, args.time)
    rep = is_uniform(M, args.eps)
    out = {"uniform": rep.uniform, "max_deviation": rep.max_deviation, "time": args.time,
           "mixing_matrix": _matrix_rows(M.entries)}
    return 0, out, text


def cmd_uniform(args):
    A, text = _load_matrix(args.input)
    rep = is_uniform(mixing_matrix(A, args.time), args.eps)
    out = rep.to_dict()
    out["time"] = args.time
    return 0, out, text


def cmd_local_uniform(args):
    A, text = _load_matrix(args.input)
    rep = is_local_uniform(mixing_matrix(A, args.time), args.vertex, args.eps)
    out = rep.to_dict()
    out.update(time=args.time, vertex=args.vertex)
    return 0, out, text


def cmd_avg_mix(args):
    A, text = _load_matrix(args.input)
    if args.cesaro:
        M = average_mixing_cesaro(A, args.horizon, args.steps)
    else:
        M = average_mixing(A)
    rep = is_uniform(M, args.eps)
    out = rep.to_dict()
    out.update(trace=M.trace, trace_lower_bound=trace_lower_bound(eigh(A)),
               method="cesaro" if args.cesaro else "projectors",
               average_mixing_matrix=_matrix_rows(M.entries))
    if args.cesaro:
        out.update(horizon=args.horizon, steps=args.steps)
    return 0, out, text


def cmd_search(args):
    A, text = _load_matrix(args.input)
    res = mixing_time_search(A, args.tmax, args.eps, args.grid)
    out = res.report.to_dict()
    out.update(uniform=res.found, time=res.time, min_time=res.min_time,
               min_deviation=res.min_deviation, t_max=args.tmax)
    return 0, out, text


def _complex_rows(M):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M)]


def cmd_quotient(args):
    A, text = _load_matrix(args.input)
    A = hermitize(A)
    p = verify_equitable(A, parse_cells(args.cells))
    B = quotient_matrix(p, A)
    out = {
        "cells": [list(c) for c in p.cells],
        "B": _complex_rows(B),
        "r": _complex_rows(p.row_sums),
        "c": _complex_rows(p.col_sums),
    }
    if args.time is not None:
        out["time"] = args.time
        out["quotient_walk_residual"] = quotient_walk_check(p, A, args.time)
    return 0, out, text


def cmd_switch_check(args):
    A1, t1 = _load_matrix(args.a)
    A2, t2 = _load_matrix(args.b)
    cert = switching_certificate(A1, A2)
    out = {"equivalent": cert is not None}
    if cert is not None:
        out["D"] = [[float(z.real), float(z.imag)] for z in cert.phases]
        out["residual"] = cert.residual
    return 0, out, t1 + t2


def cmd_stopping_rule(args):
    path = args.spec or args.input
    text = _read_text(path)
    data = _parse_json(text, path or "<stdin>")
    if isinstance(data, dict) and "kind" in data:
        base_spec = graphs.GraphSpec.from_dict(data)
        if base_spec.cone or base_spec.kind == "claw":
            # already a cone: the claw is the cone over the empty graph
            C = base_spec.build()
        else:
            C = graphs.cone(graphs.ConeInput(base_spec.build(), args.scaled))
    else:
        C = from_json_dict(data)
    cfg = StoppingRuleConfig(C, start=args.start, strategy=args.strategy,
                             measure_interval=args.interval, settle_time=args.settle,
                             max_rounds=args.max_rounds, seed=args.seed)
    st = monte_carlo(cfg, args.trials, from_cone=args.from_cone, keep_trace=bool(args.trace))
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["trial", "round", "outcome", "p_hit"])
            for i, rec in enumerate(st.records):
                for r, o, p in rec.trace:
                    w.writerow([i, r, o, repr(p)])
    out = st.to_dict()
    out.update(n=cfg.n, measure_interval=cfg.measure_interval, settle_time=cfg.settle_time,
               strategy=cfg.strategy, seed=cfg.seed, start=cfg.start, from_cone=args.from_cone)
    return 0, out, text


def cmd_catalog(args):
    from .catalog import build_catalog, evaluate

    entries = build_catalog()
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(evaluate, entries))
    out = {
        "entries": [dict(r.to_dict(), spec=e.graph_spec.to_dict()) for e, r in zip(entries, results)],
        "passed": sum(r.passed for r in results),
        "failed": sum(not r.passed for r in results),
    }
    return (0 if out["failed"] == 0 else 1), out, "catalog"


def cmd_verify(args):
    from .acceptance import CRITERIA

    only = sorted(CRITERIA) if not args.only else [int(x) for x in args.only.split(",")]
    unknown = [k for k in only if k not in CRITERIA]
    if unknown:
        raise InputError(f"unknown criteria {unknown}")
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(lambda k: CRITERIA[k](), only))
    ok = all(r.passed for r in results)
    lines = [json.dumps(_clean(r.to_dict()), sort_keys=True) for r in results]
    return (0 if ok else 1), lines, "verify"


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chiralwalk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"chiralwalk {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--json", action="store_true", help="compact single-line JSON")
    common.add_argument("--seed", type=int, default=0, help="random seed (stopping-rule)")
    common.add_argument("--in", dest="input", help="matrix or GraphSpec JSON (default: stdin)")
    common.add_argument("--eps", type=float, default=1e-9, help="per-entry uniformity tolerance")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="build a graph as matrix JSON")
    p.add_argument("--kind", choices=graphs.KINDS)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--signing", choices=graphs.SIGNINGS)
    p.add_argument("--first-row", help="JSON list of [re, im] pairs")
    p.add_argument("--edges", help="JSON list of [u, v] pairs")
    p.add_argument("--cone", action="store_true")
    p.add_argument("--scaled", action="store_true")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("mix", parents=[common], help="mixing matrix at a time")
    p.add_argument("--time", type=float, required=True)
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("uniform", parents=[common], help="test uniform mixing at a time")
    p.add_argument("--time", type=float, required=True)
    p.set_defaults(func=cmd_uniform)

    p = sub.add_parser("local-uniform", parents=[common], help="test local uniform mixing")
    p.add_argument("--time", type=float, required=True)
    p.add_argument("--vertex", type=int, required=True)
    p.set_defaults(func=cmd_local_uniform)

    p = sub.add_parser("avg-mix", parents=[common], help="average mixing matrix")
    p.add_argument("--cesaro", action="store_true", help="use the time-average quadrature")
    p.add_argument("--horizon", type=float, default=500.0)
    p.add_argument("--steps", type=int, default=50000)
    p.set_defaults(func=cmd_avg_mix)

    p = sub.add_parser("search", parents=[common], help="earliest uniform mixing time")
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--grid", type=int, default=20000)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("quotient", parents=[common], help="equitable partition quotient")
    p.add_argument("--cells", required=True, help='e.g. "0|1,2,3"')
    p.add_argument("--time", type=float, help="also report the quotient-walk residual")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("switch-check", parents=[common], help="switching equivalence certificate")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_switch_check)

    p = sub.add_parser("stopping-rule", parents=[common], help="Monte Carlo of the stopping rule")
    p.add_argument("--spec", help="GraphSpec of the base graph, or a cone matrix JSON")
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--strategy", choices=("restart", "continue"), default="restart")
    p.add_argument("--interval", type=float)
    p.add_argument("--settle", type=float)
    p.add_argument("--max-rounds", type=int)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--scaled", action="store_true")
    p.add_argument("--from-cone", action="store_true")
    p.add_argument("--trace", help="write per-measurement CSV here")
    p.set_defaults(func=cmd_stopping_rule)

    p = sub.add_parser("catalog", parents=[common], help="re-check every catalog entry")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance criteria")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_verify)
    return parser


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            sys.stdout = None


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status, report, source = args.func(args)
    except (InputError, ChiralWalkError, ValueError, KeyError, TypeError) as exc:
        msg = {"error": type(exc).__name__, "message": str(exc), "command": args.command}
        sys.stderr.write(json.dumps(msg) + "\n")
        return 2
    if isinstance(report, list):
        _emit("".join(line + "\n" for line in report), args.out)
        return status
    report = dict(report, version=__version__, input_digest=_digest(source), command=args.command)
    indent = None if args.json else 2
    _emit(json.dumps(_clean(report), indent=indent, sort_keys=True) + "\n", args.out)
    return status


if __name__ == "__main__":
    sys.exit(main())
