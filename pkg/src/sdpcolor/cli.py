"""Command-line front end: color, indset, verify, analyze, bench.

Results are deterministic byte-for-byte for a fixed configuration: every
random choice flows from the recorded seed, JSON keys are sorted, and no
timestamps enter result files (run metadata lives in a ``.meta.json``
side-channel next to ``--out``). Every coloring or vertex set is re-verified
immediately before serialization. The default output directory comes from
``SDPCOLOR_OUTDIR`` (falling back to the working directory).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from . import analysis
from .combined import CombinedConfig, combined_color, fit_exponent
from .graph import (
    DimacsError,
    Graph,
    read_dimacs,
    verify_coloring,
    verify_independent_set,
)
from .indset import ak_independent_set
from .rounding import kms_color, NotVectorColorableError
from .testkit import PlantedInstance, planted_k_colorable, random_graph
from .graph import Coloring

SCHEMA = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Inputs
# ---------------------------------------------------------------------------

def parse_generator_spec(spec: str):
    """Parse "name:key=val,key=val" generator descriptions."""
    name, _, rest = spec.partition(":")
    kwargs = {}
    if rest:
        for item in rest.split(","):
            key, sep, val = item.partition("=")
            if not sep:
                raise UsageError(f"malformed generator item {item!r}")
            kwargs[key.strip()] = val.strip()
    if name == "planted":
        try:
            return planted_k_colorable(
                n=int(kwargs["n"]), k=int(kwargs["k"]),
                p=float(kwargs.get("p", 0.5)), seed=int(kwargs.get("seed", 0)))
        except KeyError as exc:
            raise UsageError(f"planted generator needs n and k: missing {exc}")
    if name == "gnp":
        try:
            return random_graph(n=int(kwargs["n"]), p=float(kwargs["p"]),
                                seed=int(kwargs.get("seed", 0)))
        except KeyError as exc:
            raise UsageError(f"gnp generator needs n and p: missing {exc}")
    raise UsageError(f"unknown generator {name!r} (expected planted or gnp)")


def load_input(args) -> tuple[Graph, PlantedInstance | None]:
    if getattr(args, "input", None):
        try:
            return read_dimacs(args.input), None
        except FileNotFoundError:
            raise UsageError(f"input file not found: {args.input}")
        except DimacsError as exc:
            raise UsageError(f"malformed DIMACS input: {exc}")
    spec = getattr(args, "gen", None)
    if not spec:
        raise UsageError("exactly one of --input or --gen is required")
    made = parse_generator_spec(spec)
    if isinstance(made, PlantedInstance):
        return made.graph, made
    return made, None


def parse_float_token(token: str) -> float:
    """Floats with a pi/<d> convenience form ("pi/6", "pi", "0.5")."""
    token = token.strip()
    if token == "pi":
        return math.pi
    if token.startswith("pi/"):
        return math.pi / float(token[3:])
    return float(token)


def parse_range(token: str) -> list[float]:
    """"start:stop:step" inclusive ranges, or a comma list of values."""
    if ":" in token:
        parts = token.split(":")
        if len(parts) != 3:
            raise UsageError(f"range must be start:stop:step, got {token!r}")
        start, stop, step = (parse_float_token(p) for p in parts)
        if step <= 0:
            raise UsageError("range step must be positive")
        out = []
        x = start
        while x <= stop + 1e-12:
            out.append(round(x, 12))
            x += step
        return out
    return [parse_float_token(p) for p in token.split(",")]


# ---------------------------------------------------------------------------
# Outputs
# ---------------------------------------------------------------------------

def _outdir() -> str:
    return os.environ.get("SDPCOLOR_OUTDIR", ".")


def _resolve_out(path: str | None, default_name: str) -> str | None:
    if path is None:
        return None
    if os.path.isabs(path) or os.path.dirname(path):
        return path
    return os.path.join(_outdir(), path)


def write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)
    meta = {"written": time.strftime("%Y-%m-%dT%H:%M:%S"), "path": path}
    with open(path + ".meta.json", "w", encoding="ascii") as fh:
        json.dump(meta, fh, sort_keys=True)
        fh.write("\n")


def dump_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_color(args) -> int:
    graph, _ = load_input(args)
    if args.k < 2:
        raise UsageError("--k must be at least 2")
    cfg = CombinedConfig(eps=args.eps, trials=args.trials, seed=args.seed,
                         repeats=args.repeats, c0=args.c0)
    result = combined_color(graph, args.k, cfg)
    payload = result.to_json_dict()
    payload["schema"] = SCHEMA
    if result.coloring is not None:
        if not verify_coloring(graph, result.coloring):
            raise AssertionError("refusing to write an unverified coloring")
    write_text(_resolve_out(args.out, "color.json"), dump_json(payload))
    return EXIT_OK if result.coloring is not None else EXIT_FAILURE


def cmd_indset(args) -> int:
    graph, _ = load_input(args)
    if args.alpha < 1:
        raise UsageError("--alpha must be at least 1")
    members = ak_independent_set(graph, args.alpha, eps=args.eps,
                                 trials=args.trials, seed=args.seed)
    if not verify_independent_set(graph, members):
        raise AssertionError("refusing to write an unverified set")
    payload = {
        "schema": SCHEMA,
        "n": graph.n,
        "alpha": args.alpha,
        "size": len(members),
        "members": sorted(members),
        "seed": args.seed,
    }
    write_text(_resolve_out(args.out, "indset.json"), dump_json(payload))
    return EXIT_OK


def cmd_verify(args) -> int:
    graph, _ = load_input(args)
    with open(args.result, "r", encoding="ascii") as fh:
        payload = json.load(fh)
    if "coloring" in payload and payload["coloring"] is not None:
        ok = verify_coloring(graph, Coloring(tuple(payload["coloring"])))
        kind = "coloring"
    elif "members" in payload:
        ok = verify_independent_set(graph, set(payload["members"]))
        kind = "independent-set"
    else:
        raise UsageError("result file holds neither a coloring nor a set")
    sys.stdout.write(f"{kind}: {'valid' if ok else 'INVALID'}\n")
    return EXIT_OK if ok else EXIT_FAILURE


def cmd_analyze(args) -> int:
    betas = parse_range(args.beta)
    cs = parse_range(args.c)
    rows = analysis.sweep_rows(betas, cs, mc_samples=args.mc, seed=args.seed)
    write_text(_resolve_out(args.out, "analyze.csv"), analysis.rows_to_csv(rows))
    return EXIT_OK


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    if not sizes:
        raise UsageError("--sizes must list at least one size")
    cells = []
    for n in sizes:
        for s in range(args.seeds):
            inst = planted_k_colorable(n, args.k, args.p, seed=s)
            if args.algo == "combined":
                cfg = CombinedConfig(eps=args.eps, trials=args.trials,
                                     seed=args.seed + s, repeats=args.repeats)
                res = combined_color(inst.graph, args.k, cfg)
                if res.coloring is None:
                    raise RuntimeError(f"combined failed on n={n} seed={s}: "
                                       f"{res.failure}")
                if not verify_coloring(inst.graph, res.coloring):
                    raise AssertionError("unverified coloring in bench")
                value = res.colors_used
            elif args.algo == "kms":
                try:
                    col = kms_color(inst.graph, args.k, eps=args.eps,
                                    trials=args.trials, seed=args.seed + s)
                except NotVectorColorableError as exc:
                    raise RuntimeError(str(exc))
                if not verify_coloring(inst.graph, col):
                    raise AssertionError("unverified coloring in bench")
                value = col.colors_used
            elif args.algo == "indset":
                members = ak_independent_set(
                    inst.graph, float(args.k), eps=args.eps,
                    trials=args.trials, seed=args.seed + s)
                if not verify_independent_set(inst.graph, members):
                    raise AssertionError("unverified set in bench")
                value = len(members)
            else:
                raise UsageError(f"unknown algo {args.algo!r}")
            cells.append({"n": n, "seed": s, "value": value})
    xs = [c["n"] for c in cells]
    ys = [max(c["value"], 1) for c in cells]
    payload = {
        "schema": SCHEMA,
        "algo": args.algo,
        "k": args.k,
        "p": args.p,
        "sizes": sizes,
        "seeds": args.seeds,
        "base_seed": args.seed,
        "cells": cells,
        "fitted_exponent": fit_exponent(xs, ys) if len(set(xs)) > 1 else None,
    }
    write_text(_resolve_out(args.out, "bench.json"), dump_json(payload))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_input_args(sub):
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--input", help="DIMACS .col file")
    group.add_argument("--gen", help="generator spec name:key=val,... "
                                     "(planted:n=..,k=..,p=..,seed=.. or "
                                     "gnp:n=..,p=..,seed=..)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdpcolor",
        description="approximate coloring toolkit: SDP vector colorings, "
                    "threshold rounding, independent-set extraction, and "
                    "probability-bound sweeps")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("color", help="color a graph with the combined algorithm")
    _add_input_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--trials", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--c0", type=float, default=4.0)
    p.add_argument("--out", help="result JSON path (stdout if omitted)")
    p.set_defaults(func=cmd_color)

    p = subs.add_parser("indset", help="extract a large independent set")
    _add_input_args(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--trials", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_indset)

    p = subs.add_parser("verify", help="re-verify a result JSON against a graph")
    _add_input_args(p)
    p.add_argument("--result", required=True, help="JSON produced by color/indset")
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("analyze", help="sweep the wedge-probability sandwich")
    p.add_argument("--beta", default="pi/12,pi/6,pi/4,pi/3")
    p.add_argument("--c", default="0.25:3:0.25")
    p.add_argument("--mc", type=int, default=0,
                   help="Monte Carlo samples per grid point (0 = skip)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = subs.add_parser("bench", help="scaling experiment over planted instances")
    p.add_argument("--algo", choices=("combined", "kms", "indset"),
                   default="combined")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--sizes", required=True, help="comma list, e.g. 125,250,500")
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--trials", type=int, default=24)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except RuntimeError as exc:
        sys.stderr.write(f"failure: {exc}\n")
        return EXIT_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
