"""Command-line entry point: ``neutralnet <subcommand> ...``.

Exit codes: 0 success, 1 a proven claim was violated, 2 usage error,
3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import shlex
import sys
from fractions import Fraction

from . import __version__
from . import dynamics, polynomials, search, spectra, theorem
from .graphs import LabeledGraph, bricklayer, hamming_ball, hamming_graph, star

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 1, 2, 3
OUTPUT_DIR_ENV = "NEUTRALNET_OUTPUT_DIR"


class UsageError(Exception):
    pass


# -- argument helpers ----------------------------------------------------------

def _ints(text: str, name: str, count: tuple[int, ...]) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"{name}: expected integers, got {text!r}") from None
    if len(vals) not in count:
        raise UsageError(f"{name}: expected {' or '.join(map(str, count))} integers, got {text!r}")
    return vals


def parse_graph_spec(spec: str):
    """bricklayer:n[,a] | ball:d,r | star:n | hamming:d,a | file:path"""
    kind, sep, rest = spec.partition(":")
    if not sep or not rest:
        raise UsageError(f"malformed graph spec {spec!r}")
    try:
        if kind == "bricklayer":
            vals = _ints(rest, kind, (1, 2))
            return bricklayer(*vals)
        if kind == "ball":
            return hamming_ball(*_ints(rest, kind, (2,)))
        if kind == "star":
            return star(*_ints(rest, kind, (1,)))
        if kind == "hamming":
            return hamming_graph(*_ints(rest, kind, (2,)))
        if kind == "file":
            with open(rest) as fh:
                return LabeledGraph.from_json(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read graph file: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"invalid graph spec {spec!r}: {exc}") from None
    raise UsageError(f"unknown graph kind {kind!r}")


def parse_range(text: str) -> range:
    """'5' or '5..20' (inclusive)."""
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise UsageError(f"invalid range {text!r}") from None
    if b < a:
        raise UsageError(f"empty range {text!r}")
    return range(a, b + 1)


def _graph_dims(g) -> tuple[int, int]:
    if hasattr(g, "d"):
        return g.d, g.a
    return g.leaves, 2  # a star K_{1,n} sits in Q_n as a unit ball


# -- output --------------------------------------------------------------------

def _cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(v)
    return "" if v is None else str(v)


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return "".join(json.dumps(r) + "\n" for r in rows)
    if not rows:
        return ""
    keys = list(rows[0])
    for r in rows[1:]:
        keys += [k for k in r if k not in keys]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _cell(r.get(k)) for k in keys})
        return buf.getvalue()
    table = [[k for k in keys]] + [[_pretty(r.get(k)) for k in keys] for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(keys))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip() + "\n" for row in table)


def _pretty(v) -> str:
    if isinstance(v, float):
        return f"{v:.6f}" if abs(v) >= 1e-4 or v == 0 else f"{v:.3e}"
    return _cell(v)


def provenance(args, fmt: str) -> str:
    info = {"tool": f"neutralnet {__version__}",
            "command": shlex.join(["neutralnet", *args.argv]),
            "seed": getattr(args, "seed", None)}
    if fmt == "json":
        return json.dumps({"provenance": info}) + "\n"
    return "".join(f"# {k}: {v}\n" for k, v in info.items())


def emit(args, text: str) -> None:
    if args.output:
        path = args.output
        base = os.environ.get(OUTPUT_DIR_ENV)
        if base and not os.path.isabs(path):
            os.makedirs(base, exist_ok=True)
            path = os.path.join(base, path)
        with open(path, "w") as fh:
            fh.write(provenance(args, args.format) + text)
    else:
        sys.stdout.write(text)


# -- subcommands ---------------------------------------------------------------

def cmd_figure1(args) -> int:
    rows = []
    for n in range(1, args.n_max + 1):
        lam = spectra.principal_eigenvalue_power(bricklayer(n)).lam
        log_n = math.log2(n)
        rows.append({"n": n, "lambda": lam, "log2_n": log_n, "margin": log_n - lam})
    emit(args, render(rows, args.format))
    return EXIT_OK


def cmd_verify(args) -> int:
    scope = args.scope
    rows: list[dict] = []
    violated = False
    if scope == "theorem":
        reports = theorem.check_theorem(args.n_max or 1024, workers=args.workers)
        rows = [r.to_dict() for r in reports]
        summary = theorem.summarize(reports)
        rows.append({"summary": summary})
        violated = summary[theorem.VIOLATED] > 0
    elif scope == "staircase":
        for k in parse_range(args.k or "3"):
            rep = theorem.check_staircase(k)
            rows.append(rep.to_dict())
            violated |= not rep.holds
        if args.k_end is not None:
            ind = theorem.staircase_induction(parse_range(args.k or "3").start, args.k_end)
            rows.append({"induction": {"k_start": ind.k_start, "k_end": ind.k_end, "holds": ind.holds,
                                       "certified_upto": ind.certified_upto, "failures": ind.failures}})
            violated |= not ind.holds
    elif scope in ("minus", "plus"):
        check = theorem.check_minus_chain if scope == "minus" else theorem.check_plus_chain
        for d in parse_range(args.d or "5..20"):
            rep = check(d)
            if args.format == "json":
                rows.append(rep.to_dict())
            else:
                rows += [{"d": d, "kind": scope, **link.to_dict()} for link in rep.links]
            violated |= not rep.holds
    elif scope == "conjecture":
        a = args.a or 3
        reports = theorem.check_conjecture(a, args.n_max or a**4, artifact_dir=args.artifact_dir)
        rows = [r.to_dict() for r in reports]
        rows.append({"summary": theorem.summarize(reports)})
    elif scope == "asymptotic":
        rep = theorem.asymptotic_probe(args.N, Fraction(args.eps), parse_range(args.d or "3..25"))
        rows = [vars(r) for r in rep.rows]
        rows.append({"summary": {"N": rep.N, "eps": rep.eps, "minus_from": rep.minus_from,
                                 "minus_stable": rep.minus_stable, "plus_from": rep.plus_from,
                                 "plus_stable": rep.plus_stable}})
    fmt = args.format
    if fmt != "json":
        # nested reports do not tabulate; fall back to JSON lines
        fmt = "json" if any(isinstance(v, (dict, list)) for r in rows for v in r.values()) else fmt
    emit(args, render(rows, fmt))
    return EXIT_VIOLATION if violated else EXIT_OK


def cmd_search(args) -> int:
    if args.mode == "exhaustive":
        rec = search.exhaustive_max_eig(args.d, args.n)
    else:
        rec = search.sample_max_eig(args.d, args.n, args.samples, args.seed, workers=args.workers)
    emit(args, render([rec.to_dict()], args.format))
    return EXIT_OK


def cmd_simulate(args) -> int:
    g = parse_graph_spec(args.graph)
    d, a = _graph_dims(g)
    params = dynamics.MutationParams(args.mu, args.fitness)
    state, traj = dynamics.evolve(g, params, t=args.generations, d=d, a=a)
    if args.format == "csv":
        emit(args, traj.to_csv())
        return EXIT_OK
    lam = spectra.principal_eigenvalue_power(g).lam
    try:
        growth = dynamics.effective_growth(traj)
    except ValueError:
        growth = None
    row = {"generations": args.generations, "mu": args.mu, "fitness": args.fitness,
           "measured_robustness": dynamics.measured_robustness(g, state, d, a),
           "predicted_robustness": lam / (d * (a - 1)),
           "growth_factor": growth,
           "predicted_growth": dynamics.predicted_growth(lam, d, a, params),
           "log_scale": state.log_scale}
    emit(args, render([row], args.format))
    return EXIT_OK


POLY_FAMILIES = ("minus", "plus", "power", "ball", "hypercube")


def cmd_poly(args) -> int:
    d = args.d
    fam = args.family
    if fam == "ball":
        if args.r is None:
            raise UsageError("--r is required for the ball family")
        p = polynomials.ball_poly(d, args.r)
    else:
        p = {"minus": polynomials.p_minus, "plus": polynomials.p_plus,
             "power": polynomials.p_power, "hypercube": polynomials.hypercube_factor}[fam](d)
    coeffs = [str(c) for c in p.coeffs]
    row = {"family": fam, "d": d, "degree": p.degree, "coeffs": coeffs, "text": p.format("x")}
    if args.format == "csv":
        emit(args, render([{"power": i, "coeff": c} for i, c in enumerate(coeffs)], "csv"))
    else:
        emit(args, render([row], args.format))
    return EXIT_OK


def cmd_eig(args) -> int:
    g = parse_graph_spec(args.graph)
    method = args.method
    if method == "power":
        res = spectra.principal_eigenvalue_power(g, tol=args.tol)
    elif method == "dense":
        res = spectra.principal_eigenvalue_dense(g)
    elif method == "char_poly":
        res = spectra.principal_eigenvalue_char_poly(g, max_vertices=args.max_vertices)
    else:
        kind, _, rest = args.graph.partition(":")
        if kind != "ball":
            raise UsageError("the distance_class method needs a ball:d,r graph")
        res = spectra.ball_eigenvalue_reduced(*_ints(rest, kind, (2,)), tol=args.tol)
    row = res.to_dict(include_vector=args.vector)
    row["vertices"] = g.num_vertices
    emit(args, render([row], args.format))
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--output", help=f"write to a file (relative paths go under ${OUTPUT_DIR_ENV} when set)")
    common.add_argument("--workers", type=int, default=1)

    p = argparse.ArgumentParser(prog="neutralnet", description="Eigenvalue bounds for subgraphs of Hamming graphs.")
    p.add_argument("--version", action="version", version=f"neutralnet {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("figure1", parents=[common], help="eigenvalue row for bricklayer graphs")
    s.add_argument("--n-max", type=int, default=16)
    s.set_defaults(func=cmd_figure1)

    s = sub.add_parser("verify", parents=[common], help="check the bound and its supporting claims")
    s.add_argument("scope", choices=("theorem", "staircase", "minus", "plus", "conjecture", "asymptotic"))
    s.add_argument("--n-max", type=int)
    s.add_argument("--k", help="k or k1..k2")
    s.add_argument("--k-end", type=int, help="also run the induction from --k up to this k")
    s.add_argument("--d", help="d or d1..d2")
    s.add_argument("--a", type=int)
    s.add_argument("--N", type=int, default=4)
    s.add_argument("--eps", default="1/2")
    s.add_argument("--artifact-dir")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", parents=[common], help="maximal-eigenvalue induced subgraphs of Q_d")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("simulate", parents=[common], help="mutation-selection dynamics on a graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--mu", type=float, default=0.01)
    s.add_argument("--fitness", type=float, default=1.0)
    s.add_argument("--generations", type=int, default=10_000)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("poly", parents=[common], help="exact characteristic polynomials")
    s.add_argument("--family", choices=POLY_FAMILIES, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--r", type=int)
    s.set_defaults(func=cmd_poly)

    s = sub.add_parser("eig", parents=[common], help="principal eigenvalue of a graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--method", choices=("power", "dense", "char_poly", "distance_class"), default="power")
    s.add_argument("--tol", type=float, default=spectra.DEFAULT_TOL)
    s.add_argument("--max-vertices", type=int, default=spectra.CHAR_POLY_GUARD)
    s.add_argument("--vector", action="store_true", help="include the eigenvector")
    s.set_defaults(func=cmd_eig)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.argv = argv
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"neutralnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except spectra.ConvergenceError as exc:
        print(f"neutralnet: no convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (ValueError, polynomials.DomainError) as exc:
        print(f"neutralnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
