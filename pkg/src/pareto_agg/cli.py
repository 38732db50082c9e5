"""Command-line batch interface.

Subcommands ``audit``, ``solve``, ``duality``, ``seu`` and ``oracle`` read a
problem file (or every problem file in a directory, in filename order) and
print a JSON report. ``generate`` writes random problem files, seeded by the
``PARETO_AGG_SEED`` environment variable.

Exit codes: 0 success or every verdict holds, 1 some verdict fails, 2 input
error, 3 internal inconsistency (duality mismatch or a broken oracle
sandwich). A batch exits with the largest code of its files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .aggregation import (DualityMismatch, ResidualFunction, duality_certificate,
                          min_oscillation, positive_weight_margin)
from .audit import (check_indifference, check_semistrong, check_sequential_strong,
                    check_strong)
from .core import (ANTECEDENT_TOL, DUALITY_TOL, MARGIN_TOL, VERDICT_TOL,
                   ParetoAggError, oscillation)
from .instances import random_dyadic_problem, random_problem
from .lp import SolverOptions, SolveStats
from .oracle import GridSpec, GridTooLarge, exact_recheck, sandwich
from .problem_io import FORMATS, InputError, ParsedInput, load, problem_to_document
from .seu import belief_pool, likelihood_floor_check, relaxed_floor_level, taste_decompose

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INCONSISTENT = 0, 1, 2, 3
SEED_ENV = "PARETO_AGG_SEED"
_SUFFIXES = {".json", ".csv"}


def _exact_str(v: Any) -> str | None:
    if isinstance(v, Fraction):
        return str(v)
    return None


def jsonable(obj: Any) -> Any:
    """Recursively replace non-finite floats with ``None`` so the report is strict JSON."""
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _verdict(holds: bool) -> str:
    return "holds" if holds else "fails"


class _Context:
    """Per-file settings shared by the subcommands."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.exact = bool(args.exact)
        self.options = SolverOptions(feas_tol=args.feas_tol, opt_tol=args.opt_tol)
        self.verdict_tol = args.verdict_tol
        self.stats = SolveStats()

    def tolerances(self) -> dict:
        return {
            "feas_tol": self.options.feas_tol,
            "opt_tol": self.options.opt_tol,
            "verdict_tol": self.verdict_tol,
            "antecedent_tol": ANTECEDENT_TOL,
            "duality_tol": DUALITY_TOL,
            "margin_tol": MARGIN_TOL,
        }

    def kw(self) -> dict:
        return {"exact": self.exact, "options": self.options, "stats": self.stats}


def _epsilon(ctx: _Context, parsed: ParsedInput, required: bool) -> float | None:
    eps = ctx.args.epsilon if ctx.args.epsilon is not None else parsed.epsilon
    if eps is None and required:
        raise InputError("epsilon", "no epsilon in the file and no --epsilon given")
    return eps


def _cmd_audit(ctx: _Context, parsed: ParsedInput) -> tuple[dict, int]:
    p = parsed.problem
    eps = _epsilon(ctx, parsed, True)
    kw = dict(ctx.kw(), tol=ctx.verdict_tol)
    verdicts = {
        "semistrong": check_semistrong(p, eps, **kw),
        "indifference": check_indifference(p, eps, **kw),
        "strong": check_strong(p, eps, **kw),
        "sequential": check_sequential_strong(p, eps, **kw),
    }
    report: dict = {"epsilon": eps}
    for name, v in verdicts.items():
        entry = v.as_dict()
        if ctx.exact and _exact_str(v.gap):
            entry["gap_exact"] = _exact_str(v.gap)
        report[name] = entry
    warnings = []
    if eps >= oscillation(p.dm):
        warnings.append("epsilon >= oscillation(dm): every axiom holds trivially and "
                        "zero weights already qualify")
    report["warnings"] = warnings
    ok = all(v.holds for v in verdicts.values())
    return report, EXIT_OK if ok else EXIT_FAIL


def _cmd_solve(ctx: _Context, parsed: ParsedInput) -> tuple[dict, int]:
    p = parsed.problem
    regime = ctx.args.regime
    eps = _epsilon(ctx, parsed, regime == "positive")
    report: dict = {"regime": regime, "epsilon": eps}
    if regime == "positive":
        m = positive_weight_margin(p, eps, **ctx.kw())
        report["mu_star"] = float(m.mu_star)
        report["status"] = m.status
        report["trivial"] = m.trivial
        holds = m.positive
        if m.weights is not None:
            res = ResidualFunction.from_weights(p, m.a)
            report.update(_weights_block(p, m.weights.a, m.weights.b, res.omega,
                                         float(res.omega) / 2))
        report["verdict"] = _verdict(holds)
        return report, EXIT_OK if holds else EXIT_FAIL
    r = min_oscillation(p, regime, **ctx.kw())
    report["status"] = r.status
    report.update(_weights_block(p, r.weights.a, r.weights.b, r.oscillation, r.sup_residual))
    if ctx.exact:
        report["oscillation_exact"] = _exact_str(r.oscillation)
    if eps is None:
        return report, EXIT_OK
    holds = (r.oscillation <= Fraction(eps)) if ctx.exact else (
        float(r.oscillation) <= eps + ctx.verdict_tol)
    report["verdict"] = _verdict(bool(holds))
    return report, EXIT_OK if holds else EXIT_FAIL


def _weights_block(p, a, b, omega, r_sup) -> dict:
    a = np.asarray(a, dtype=float)
    w = a @ p.matrix + b
    return {
        "weights": a.tolist(),
        "intercept": float(b),
        "oscillation": float(omega),
        "sup_residual": float(r_sup),
        "reconstruction": {
            "aggregate": w.tolist(),
            "max_abs_residual": float(np.max(np.abs(p.dm - w))),
        },
    }


def _cmd_duality(ctx: _Context, parsed: ParsedInput) -> tuple[dict, int]:
    p = parsed.problem
    report: dict = {}
    for regime in ("nonneg", "free"):
        try:
            d = duality_certificate(p, regime, **ctx.kw())
        except DualityMismatch as exc:
            report[regime] = {"error": str(exc)}
            return report, EXIT_INCONSISTENT
        entry = d.as_dict()
        if ctx.exact:
            entry["delta_star_exact"] = _exact_str(d.delta_star)
        report[regime] = entry
    return report, EXIT_OK


def _cmd_seu(ctx: _Context, parsed: ParsedInput) -> tuple[dict, int]:
    seu = parsed.seu
    if seu is None:
        raise InputError("seu", "missing required section for the seu command")
    eps1 = ctx.args.epsilon1 if ctx.args.epsilon1 is not None else parsed.epsilon1
    eps2 = ctx.args.epsilon2 if ctx.args.epsilon2 is not None else parsed.epsilon2
    if eps2 is not None and not 0 <= eps2 <= 1:
        raise InputError("--epsilon2", "must lie in [0, 1]")
    taste = taste_decompose(seu, eps1 if eps1 is not None else 0.0,
                            tol=ctx.verdict_tol, **ctx.kw())
    lam, resid = belief_pool(seu.P0, seu.Ps, **ctx.kw())
    relaxed = relaxed_floor_level(seu.P0, seu.Ps, **ctx.kw())
    tv = float(resid.tv_norm)
    report: dict = {
        "tastes": {
            "weights": [float(x) for x in taste.weights.a],
            "intercept": taste.weights.b,
            "oscillation": float(taste.oscillation),
            "sup_residual": float(taste.sup_residual),
            "epsilon1": eps1,
        },
        "beliefs": {
            "lambda": [float(x) for x in lam],
            "residual": [float(x) for x in resid.r],
            "tv_norm": tv,
            "relaxed_floor_level": float(relaxed),
            "epsilon2": eps2,
        },
    }
    holds = True
    if eps1 is not None:
        report["tastes"]["verdict"] = _verdict(taste.holds)
        holds &= taste.holds
    if eps2 is not None:
        floor = likelihood_floor_check(seu.P0, seu.Ps, eps2)
        report["floor"] = floor.as_dict(seu.states)
        pooled = tv <= eps2 + ctx.verdict_tol
        report["beliefs"]["verdict"] = _verdict(pooled)
        holds &= pooled
    else:
        floor = likelihood_floor_check(seu.P0, seu.Ps, 1.0)
        report["floor"] = floor.as_dict(seu.states)
        report["floor"].pop("verdict")
        report["floor"].pop("epsilon2")
    return report, EXIT_OK if holds else EXIT_FAIL


def _cmd_oracle(ctx: _Context, parsed: ParsedInput) -> tuple[dict, int]:
    p = parsed.problem
    spec = GridSpec(ctx.args.grid_k, ctx.args.weight_box, ctx.args.weight_step)
    sw = sandwich(p, spec, exact=ctx.exact)
    ctx.stats.solves += sw.stats.solves
    ctx.stats.iterations += sw.stats.iterations
    eps = _epsilon(ctx, parsed, False)
    report: dict = {"sandwich": sw.as_dict()}
    try:
        ex = exact_recheck(p, eps)
    except DualityMismatch as exc:
        report["exact"] = {"error": str(exc)}
        return report, EXIT_INCONSISTENT
    ctx.stats.solves += ex.stats.solves
    ctx.stats.iterations += ex.stats.iterations
    report["exact"] = ex.as_dict()
    return report, EXIT_OK if sw.consistent else EXIT_INCONSISTENT


COMMANDS = {
    "audit": _cmd_audit,
    "solve": _cmd_solve,
    "duality": _cmd_duality,
    "seu": _cmd_seu,
    "oracle": _cmd_oracle,
}


def run_file(args: argparse.Namespace, path: Path) -> tuple[dict, int]:
    """Run one subcommand on one file; never raises on bad input."""
    ctx = _Context(args)
    report: dict = {
        "tool": "pareto-agg",
        "version": __version__,
        "command": args.command,
        "input": str(path),
        "exact": ctx.exact,
        "tolerances": ctx.tolerances(),
    }
    try:
        parsed = load(path, args.format)
        report["echo"] = parsed.echo
        body, code = COMMANDS[args.command](ctx, parsed)
    except InputError as exc:
        body, code = {"error": {"where": exc.where, "message": exc.detail}}, EXIT_INPUT
    except GridTooLarge as exc:
        body, code = {"error": {"where": "grid", "message": str(exc)}}, EXIT_INPUT
    except (ParetoAggError, ValueError) as exc:
        body, code = {"error": {"where": "(problem)", "message": str(exc)}}, EXIT_INPUT
    report.update(body)
    report["solver"] = {"solves": ctx.stats.solves, "iterations": ctx.stats.iterations}
    report["exit_code"] = code
    return report, code


def _run_one(payload):
    args, path = payload
    return run_file(args, path)


def batch_files(directory: Path) -> list[Path]:
    return sorted((f for f in directory.iterdir()
                   if f.is_file() and f.suffix.lower() in _SUFFIXES),
                  key=lambda f: f.name)


def _cmd_generate(args: argparse.Namespace) -> int:
    seed = int(os.environ.get(SEED_ENV, "0"))
    rng = np.random.default_rng(seed)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    width = len(str(max(args.count - 1, 1)))
    for i in range(args.count):
        if args.dyadic:
            p = random_dyadic_problem(rng, max_prizes=args.max_prizes,
                                      max_individuals=args.max_individuals)
        else:
            p = random_problem(rng, args.max_prizes, args.max_individuals)
        doc = problem_to_document(p, args.epsilon)
        (out / f"instance_{i:0{width}d}.json").write_text(json.dumps(doc, indent=1) + "\n",
                                                          encoding="utf-8")
    print(json.dumps({"tool": "pareto-agg", "version": __version__, "command": "generate",
                      "seed": seed, "count": args.count, "outdir": str(out)}))
    return EXIT_OK


def _positive_float(text: str) -> float:
    v = float(text)
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError("must be a finite number > 0")
    return v


def _nonneg_float(text: str) -> float:
    v = float(text)
    if not (math.isfinite(v) and v >= 0):
        raise argparse.ArgumentTypeError("must be a finite number >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("path", help="problem file, or a directory of .json/.csv files")
    common.add_argument("--epsilon", type=_nonneg_float, help="override the file's epsilon")
    common.add_argument("--exact", action="store_true", help="solve in rational arithmetic")
    common.add_argument("--format", choices=FORMATS,
                        help="input format (default: by file extension)")
    common.add_argument("--feas-tol", type=_positive_float, default=SolverOptions.feas_tol)
    common.add_argument("--opt-tol", type=_positive_float, default=SolverOptions.opt_tol)
    common.add_argument("--verdict-tol", type=_nonneg_float, default=VERDICT_TOL)
    common.add_argument("--jobs", type=int, default=1,
                        help="worker processes for directory batches")

    parser = argparse.ArgumentParser(prog="pareto-agg", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("audit", parents=[common], help="epsilon-Pareto verdicts with certificates")
    solve_p = sub.add_parser("solve", parents=[common], help="minimum-oscillation weights")
    solve_p.add_argument("--regime", choices=("nonneg", "free", "positive"), default="nonneg")
    sub.add_parser("duality", parents=[common], help="gap versus oscillation, both regimes")
    seu_p = sub.add_parser("seu", parents=[common], help="taste and belief pooling")
    seu_p.add_argument("--epsilon1", type=_nonneg_float)
    seu_p.add_argument("--epsilon2", type=_nonneg_float)
    oracle_p = sub.add_parser("oracle", parents=[common], help="brute-force and exact rechecks")
    oracle_p.add_argument("--grid-k", type=int, default=20)
    oracle_p.add_argument("--weight-box", type=_positive_float, default=None)
    oracle_p.add_argument("--weight-step", type=_positive_float, default=0.05)

    gen = sub.add_parser("generate", help=f"write random problems (seed from ${SEED_ENV})")
    gen.add_argument("outdir")
    gen.add_argument("--count", type=int, default=200)
    gen.add_argument("--max-prizes", type=int, default=6)
    gen.add_argument("--max-individuals", type=int, default=4)
    gen.add_argument("--epsilon", type=_nonneg_float)
    gen.add_argument("--dyadic", action="store_true",
                     help="entries j/16, exactly representable")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    if args.command == "generate":
        return _cmd_generate(args)
    if args.command == "oracle" and args.grid_k < 1:
        print(json.dumps({"error": {"where": "--grid-k", "message": "must be >= 1"}}))
        return EXIT_INPUT

    path = Path(args.path)
    if path.is_dir():
        files = batch_files(path)
        payloads = [(args, f) for f in files]
        if args.jobs > 1 and len(files) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_run_one, payloads))
        else:
            results = [run_file(args, f) for f in files]
        code = max((c for _, c in results), default=EXIT_OK)
        out = {"tool": "pareto-agg", "version": __version__, "command": args.command,
               "batch": str(path), "count": len(results), "exit_code": code,
               "results": [r for r, _ in results]}
    else:
        out, code = run_file(args, path)
    json.dump(jsonable(out), sys.stdout, indent=2, allow_nan=False)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
