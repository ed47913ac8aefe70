"""``glim`` command-line interface.

Exit codes: 0 success, 1 usage or input error, 2 a checked invariant
failed, 3 an exhaustive routine's size cap was exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import cutnorm, density, editdist, extremal, fracdist, harness, sampler
from .errors import CapExceededError, GlimError, InvariantError
from .graphs import format_graph, read_graph
from .stepgraphon import StepKernel, embed_graph, read_graphon

GLOBAL_DEFAULTS = {"seed": 0, "threads": 1, "rational": False, "out": None}


class UsageError(GlimError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_globals(p: argparse.ArgumentParser) -> None:
    # SUPPRESS lets the flags appear before or after the subcommand
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="master random seed")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads")
    p.add_argument("--rational", action="store_true", default=argparse.SUPPRESS,
                   help="exact rational arithmetic where supported")
    p.add_argument("--out", default=argparse.SUPPRESS, help="write output here instead of stdout")


def _load_any(path: str, rational: bool = False) -> StepKernel:
    if path.endswith(".json"):
        w = read_graphon(path)
        if rational and not w.exact:
            raise UsageError(f"{path} has floating-point entries; write them as strings for --rational")
        return w
    return embed_graph(read_graph(path))


def _frac(x) -> str:
    return str(Fraction(x))


def cmd_density(args):
    f = read_graph(args.motif)
    if args.input.endswith(".json"):
        host = _load_any(args.input, args.rational)
    else:
        host = read_graph(args.input)
    value = density.density(f, host, cap=None if args.no_cap else density.DEFAULT_CAP)
    out = {"value": float(value)}
    if args.rational and isinstance(value, Fraction):
        out["rational"] = _frac(value)
    return json.dumps(out)


def cmd_cutnorm(args):
    a = _load_any(args.a)
    b = _load_any(args.b)
    kernel = a - b
    method = "heuristic" if args.heuristic else "exact"
    res = cutnorm.cut_norm(kernel, method=method, restarts=args.restarts, seed=args.seed)
    out = {"value": float(res.value), "S": list(res.S), "T": list(res.T), "method": method}
    if kernel.exact:
        out["rational"] = _frac(res.value)
    return json.dumps(out)


def cmd_editdist(args):
    g, h = read_graph(args.a), read_graph(args.b)
    if args.exact:
        res = editdist.edit_distance_exact(g, h)
    else:
        res = editdist.edit_distance_heuristic(g, h, restarts=args.restarts, seed=args.seed,
                                               threads=args.threads)
    return json.dumps(res.to_dict())


def cmd_delta1(args):
    g, h = read_graph(args.a), read_graph(args.b)
    up = fracdist.delta1_upper(g, h, starts=args.starts, seed=args.seed, threads=args.threads)
    out = {"upper": up.value, "lower": float(fracdist.delta1_lower(g, h)),
           "start": up.start, "certificate_file": None}
    if args.blowup:
        bl = fracdist.delta1_blowup_upper(g, h, args.blowup, seed=args.seed)
        out["blowup_upper"] = float(bl.value)
        out["blowup_exact_search"] = bl.exact
    if args.certificate:
        Path(args.certificate).write_text(json.dumps(up.overlay.to_dict()) + "\n", encoding="utf-8")
        out["certificate_file"] = args.certificate
    return json.dumps(out)


def _load_matrix(path: str) -> fracdist.OverlayMatrix:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, dict):
        data = data.get("alpha", data.get("matrix"))
    a = np.array(data, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise UsageError("matrix must be square")
    n = a.shape[0]
    # accept either an overlay (rows sum to 1/n) or a doubly stochastic matrix
    if np.allclose(a.sum(axis=1), 1.0, atol=1e-9) and n > 1:
        a = a / n
    return fracdist.OverlayMatrix(a)


def cmd_birkhoff(args):
    dec = fracdist.birkhoff_approximate(_load_matrix(args.matrix), args.m)
    return json.dumps(dec.to_dict())


def cmd_extremal(args):
    t = read_graph(args.template)
    res = extremal.clique_density_optimize(t, tol=args.tol, seed=args.seed)
    return json.dumps(res.to_dict(t))


def cmd_sample(args):
    w = read_graphon(args.graphon)
    return format_graph(sampler.sample_w_random(w, args.n, args.seed))


def cmd_converge(args):
    w = read_graphon(args.graphon)
    gs = [read_graph(p) for p in args.graphs]
    motifs = [read_graph(p) for p in args.motifs]
    rows = [{"graph": args.graphs[gi], "motif": args.motifs[fi], "gap": float(gap)}
            for gi, fi, gap in sampler.convergence_table(gs, w, motifs)]
    return harness.rows_to_csv(rows, ["graph", "motif", "gap"])


def cmd_stability(args):
    rows, summary = harness.stability_sweep(args.r, args.n, args.k, trials=args.trials,
                                            seed=args.seed, restarts=args.restarts,
                                            threads=args.threads)
    if not summary["non_decreasing"]:
        print(f"warning: mean distance not monotone in k: {summary['means']}", file=sys.stderr)
    return harness.rows_to_csv(rows, harness.STABILITY_COLUMNS)


def cmd_example41(args):
    return json.dumps(harness.verify_example_4_1(args.n, restarts=args.restarts, seed=args.seed))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="glim", description="graph-limit distances and extremal experiments")
    _add_globals(p)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        _add_globals(sp)
        sp.set_defaults(func=func)
        return sp

    sp = add("density", cmd_density, "homomorphism density t(F, G) or t(F, W)")
    sp.add_argument("--motif", required=True)
    sp.add_argument("--in", dest="input", required=True, help="edge list (.el) or graphon (.json)")
    sp.add_argument("--no-cap", action="store_true", help="allow motifs above 5 vertices")

    sp = add("cutnorm", cmd_cutnorm, "cut norm of the difference of two step graphons")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--heuristic", action="store_true")
    sp.add_argument("--restarts", type=int, default=64)

    sp = add("editdist", cmd_editdist, "edit distance between same-order graphs")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--exact", action="store_true")
    sp.add_argument("--restarts", type=int, default=32)

    sp = add("delta1", cmd_delta1, "upper and lower bounds on the fractional overlay distance")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--starts", type=int, default=8)
    sp.add_argument("--blowup", type=int, default=0)
    sp.add_argument("--certificate", help="write the best overlay matrix as JSON here")

    sp = add("birkhoff", cmd_birkhoff, "equal-weight permutation approximation of an overlay")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--m", type=int, default=500)

    sp = add("extremal", cmd_extremal, "maximize edge density on a weighted template")
    sp.add_argument("--template", required=True)
    sp.add_argument("--tol", type=float, default=1e-9)

    sp = add("sample", cmd_sample, "sample a W-random graph")
    sp.add_argument("--graphon", required=True)
    sp.add_argument("--n", type=int, required=True)

    sp = add("converge", cmd_converge, "density gaps between graphs and a graphon")
    sp.add_argument("--graphon", required=True)
    sp.add_argument("--graphs", nargs="+", required=True)
    sp.add_argument("--motifs", nargs="+", required=True)

    sp = add("stability", cmd_stability, "Turan-graph deletion stability experiment")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, nargs="+", required=True, help="deletion counts")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--restarts", type=int, default=8)

    sp = add("example41", cmd_example41, "recompute the 11/10 edit vs fractional separation")
    sp.add_argument("--n", type=int, default=24)
    sp.add_argument("--restarts", type=int, default=8)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, val in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, val)
    try:
        text = args.func(args)
    except CapExceededError as exc:
        print(f"glim: {exc}", file=sys.stderr)
        return 3
    except InvariantError as exc:
        print(f"glim: invariant failed: {exc}", file=sys.stderr)
        return 2
    except (GlimError, ValueError, OSError) as exc:
        print(f"glim: {exc}", file=sys.stderr)
        return 1
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
