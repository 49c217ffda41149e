"""Command-line interface.

Exit codes: 0 success, 1 no stable model, 2 parse error, 3 semantic error,
4 cap exceeded.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import aso as aso_mod
from . import pp as pp_mod
from .core import MEASURE, canonical, powerset, set_repr, sort_models
from .engine import DEFAULT_CAP, enumerate_stable
from .errors import CapExceededError, ParseError, SemanticError
from .generate import random_pp_formula, read_edges, vertex_cover_program
from .preference import (
    OrderMode,
    check_mode,
    default_mode,
    filter_preferred,
    pref_set,
    verdict_matrix,
    weak_sum,
)
from .syntax import parse_aso, parse_pp, parse_psc, serialize, serialize_pp

EXIT_OK = 0
EXIT_NO_MODEL = 1
EXIT_PARSE = 2
EXIT_SEMANTIC = 3
EXIT_CAP = 4


@dataclass
class RunConfig:
    input: Path
    mode: Optional[OrderMode] = None
    cap: int = DEFAULT_CAP
    enumerate_all: bool = False
    format: str = "human"
    force: bool = False
    figure: Optional[Path] = None

    def __post_init__(self):
        if self.cap < 1:
            raise SemanticError("--cap must be at least 1")


def _emit(out, text: str = "") -> None:
    out.write(text + "\n")


def _json(out, payload) -> None:
    out.write(json.dumps(payload, indent=2, sort_keys=False) + "\n")


def _num(v: float):
    if v != v or v in (float("inf"), float("-inf")):
        return str(v)
    return int(v) if float(v).is_integer() else v


def _warn(warnings, err) -> None:
    for d in warnings:
        err.write(f"warning: {d.span.line}:{d.span.column}: {d.message}\n")


# --------------------------------------------------------------------------
# solve


def cmd_solve(cfg: RunConfig, out=sys.stdout, err=sys.stderr) -> int:
    warnings: list = []
    program = parse_psc(cfg.input.read_text(), warnings)
    _warn(warnings, err)
    mode = cfg.mode or default_mode(program)
    check_mode(program, mode)
    models = enumerate_stable(program, cfg.cap, cfg.force)
    preferred = filter_preferred(program, models, mode) if models else []
    measure = program.kind == MEASURE
    sums = [weak_sum(pref_set(program, m), m) for m in models] if measure else None
    matrix = verdict_matrix(program, models, mode) if cfg.enumerate_all else None

    if cfg.format == "structured":
        payload = {
            "program": serialize(program),
            "kind": program.kind,
            "mode": mode.value,
            "stable_models": [list(canonical(m)) for m in models],
            "preferred_models": [list(canonical(m)) for m in preferred],
        }
        if sums is not None:
            payload["weak_sums"] = [_num(s) for s in sums]
        if matrix is not None:
            payload["verdicts"] = [[v.value for v in row] for row in matrix]
        _json(out, payload)
    else:
        _emit(out, f"mode: {mode.value}")
        _emit(out, f"stable models: {len(models)}")
        for i, m in enumerate(models):
            extra = f"  sum={_num(sums[i])}" if sums is not None else ""
            _emit(out, f"  {set_repr(m)}{extra}")
        _emit(out, f"preferred: {len(preferred)}")
        for m in preferred:
            _emit(out, f"  {set_repr(m)}")
        if matrix is not None:
            _emit(out, "verdicts (row vs column):")
            for m, row in zip(models, matrix):
                _emit(out, f"  {set_repr(m)}: " + " ".join(v.value for v in row))

    if cfg.figure is not None and models:
        _figure(cfg.figure, models, sums, matrix, preferred)
    return EXIT_OK if models else EXIT_NO_MODEL


_VERDICT_CODE = {"first-preferred": 1, "second-preferred": -1, "equivalent": 0, "indistinguishable": 0}


def _figure(path: Path, models, sums, matrix, preferred) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = [set_repr(m) for m in models]
    fig, ax = plt.subplots(figsize=(max(4, 0.9 * len(models) + 2), 4))
    if sums is not None:
        finite = [s if s == s and abs(s) != float("inf") else 0 for s in sums]
        colors = ["tab:green" if m in preferred else "tab:gray" for m in models]
        ax.bar(range(len(models)), finite, color=colors)
        ax.set_ylabel("weak sum")
    elif matrix is not None:
        grid = [[_VERDICT_CODE[v.value] for v in row] for row in matrix]
        ax.imshow(grid, cmap="RdYlGn", vmin=-1, vmax=1)
        ax.set_yticks(range(len(models)), labels, fontsize=7)
    else:
        ax.bar(range(len(models)), [1 if m in preferred else 0 for m in models], color="tab:green")
        ax.set_ylabel("preferred")
    ax.set_xticks(range(len(models)), labels, rotation=45, ha="right", fontsize=7)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


# --------------------------------------------------------------------------
# aso


def cmd_aso(cfg: RunConfig, out=sys.stdout, err=sys.stderr) -> int:
    warnings: list = []
    program = parse_aso(cfg.input.read_text(), warnings)
    _warn(warnings, err)
    optimal = aso_mod.aso_optimal_models(program, cap=min(cfg.cap, 16) if not cfg.force else 64)
    tr = aso_mod.translate(program)
    models = enumerate_stable(tr.program, cfg.cap, cfg.force)
    results = {}
    for mode in (OrderMode.IC, OrderMode.IT):
        pref = filter_preferred(tr.program, models, mode) if models else []
        results[mode] = (pref, sort_models({tr.project(m) for m in pref}))
    ok = all(proj == optimal for _, proj in results.values())

    if cfg.format == "structured":
        payload = {
            "program": serialize(program),
            "translation": serialize(tr.program),
            "optimal_models": [list(canonical(m)) for m in optimal],
        }
        for mode, (pref, proj) in results.items():
            payload[f"preferred_{mode.value}"] = [list(canonical(m)) for m in pref]
            payload[f"projected_{mode.value}"] = [list(canonical(m)) for m in proj]
        payload["equal"] = ok
        _json(out, payload)
    else:
        _emit(out, f"optimal models: {len(optimal)}")
        for m in optimal:
            _emit(out, f"  {set_repr(m)}")
        for mode, (pref, proj) in results.items():
            _emit(out, f"translation preferred ({mode.value}): {len(pref)}")
            for m in pref:
                _emit(out, f"  {set_repr(m)} -> {set_repr(tr.project(m))}")
        _emit(out, f"optimal = projected preferred: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if models else EXIT_NO_MODEL


# --------------------------------------------------------------------------
# pp


def _parse_pairs(spec: str, universe: frozenset) -> list[tuple[frozenset, frozenset]]:
    """``a,b/c;/a`` -> [({a,b},{c}), ({},{a})]."""
    pairs = []
    for chunk in spec.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "/" not in chunk:
            raise SemanticError(f"trajectory pair {chunk!r} needs the form A/B")
        left, right = chunk.split("/", 1)
        sides = []
        for side in (left, right):
            s = frozenset(x.strip() for x in side.split(",") if x.strip())
            if not s <= universe:
                raise SemanticError(f"unknown desire in {set_repr(s)}")
            sides.append(s)
        pairs.append(tuple(sides))
    return pairs


def _pair_row(psi, atom, a, b):
    from .preference import Verdict, compare_preordered_set

    prec, indist = pp_mod.pp_prec(psi, a, b), pp_mod.pp_indist(psi, a, b)
    v = compare_preordered_set([atom], a, b)
    c_prec = v is Verdict.FIRST_PREFERRED
    c_indist = v is Verdict.EQUIVALENT
    return {
        "alpha": list(canonical(a)),
        "beta": list(canonical(b)),
        "prec": prec,
        "indist": indist,
        "compiled_prec": c_prec,
        "compiled_indist": c_indist,
        "agree": prec == c_prec and indist == c_indist,
    }


def cmd_pp(cfg: RunConfig, pairs: Optional[str] = None, random_n: int = 0,
           seed: int = 0, depth: int = 3, out=sys.stdout, err=sys.stderr) -> int:
    if random_n:
        return _pp_random(cfg, random_n, seed, depth, out)
    psi = parse_pp(cfg.input.read_text())
    atom = pp_mod.compile_theorem3(psi)
    universe = atom.base
    if pairs:
        todo = _parse_pairs(pairs, universe)
    else:
        subsets = list(powerset(universe))
        todo = list(itertools.product(subsets, subsets))
    rows = [_pair_row(psi, atom, a, b) for a, b in todo]
    if cfg.format == "structured":
        _json(out, {"formula": serialize_pp(psi), "pairs": rows})
    else:
        _emit(out, f"formula: {serialize_pp(psi)}")
        _emit(out, "alpha | beta | prec | indist | compiled prec | compiled indist | agree")
        for r in rows:
            _emit(out, " | ".join([
                set_repr(r["alpha"]), set_repr(r["beta"]),
                *(str(r[k]).lower() for k in ("prec", "indist", "compiled_prec", "compiled_indist", "agree")),
            ]))
    return EXIT_OK


def _pp_random(cfg: RunConfig, n: int, seed: int, depth: int, out) -> int:
    rng = random.Random(seed)
    total = pp_mod.CompilationReport()
    for _ in range(n):
        total.merge(pp_mod.check_compilation(random_pp_formula(rng, 4, depth)))
    fields = vars(total)
    if cfg.format == "structured":
        _json(out, {"formulas": n, "seed": seed, "depth": depth, **fields})
    else:
        _emit(out, f"formulas: {n}  seed: {seed}  depth: {depth}")
        for k, v in fields.items():
            share = f"  ({100.0 * v / total.pairs:.2f}%)" if k.endswith("agree") and total.pairs else ""
            _emit(out, f"  {k}: {v}{share}")
    return EXIT_OK


# --------------------------------------------------------------------------
# gen


def cmd_gen_vertex_cover(edges_path: Path, k: int, pivot: str, exactly_one: bool = False,
                         out=sys.stdout) -> int:
    edges = read_edges(edges_path.read_text())
    program = vertex_cover_program(edges, k, pivot, exactly_one=exactly_one)
    out.write(serialize(program))
    return EXIT_OK


# --------------------------------------------------------------------------
# entry point


def _mode(text: str) -> OrderMode:
    try:
        return OrderMode(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown mode {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="psclp", description="PSC logic programs")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, modes=True):
        p.add_argument("input", type=Path)
        if modes:
            p.add_argument("--mode", type=_mode, default=None,
                           help="ic, it, w-ic, w-it or w-is (default ic, or w-is for measure programs)")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP)
        p.add_argument("--force", action="store_true", help="enumerate beyond the cap")
        p.add_argument("--format", choices=("human", "structured"), default="human")

    solve = sub.add_parser("solve", help="stable and preferred models")
    common(solve)
    solve.add_argument("--enumerate-all", action="store_true", help="print the pairwise verdict matrix")
    solve.add_argument("--figure", type=Path, default=None, help="write a chart of the models")

    aso = sub.add_parser("aso", help="ASO optimal models against the PSC translation")
    common(aso, modes=False)

    pp = sub.add_parser("pp", help="PP formula against its compiled PSC atom")
    pp.add_argument("input", type=Path, nargs="?")
    pp.add_argument("--pairs", default=None, help="trajectory pairs, e.g. 'd1,d2/d3;/d1'")
    pp.add_argument("--random", type=int, default=0, metavar="N", help="check N random formulas")
    pp.add_argument("--seed", type=int, default=0)
    pp.add_argument("--depth", type=int, default=3)
    pp.add_argument("--format", choices=("human", "structured"), default="human")

    gen = sub.add_parser("gen", help="program generators")
    gsub = gen.add_subparsers(dest="generator", required=True)
    vc = gsub.add_parser("vertex-cover", help="covers of size below K preferring a pivot vertex")
    vc.add_argument("edges", type=Path)
    vc.add_argument("-k", "--k", type=int, required=True)
    vc.add_argument("--pivot", required=True)
    vc.add_argument("--exactly-one", action="store_true",
                    help="edge family {{u},{v}} instead of {{u},{v},{u,v}}")
    return parser


def main(argv: Optional[list] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            return cmd_gen_vertex_cover(args.edges, args.k, args.pivot, args.exactly_one, out)
        if args.command == "pp":
            if args.input is None and not args.random:
                err.write("error: pp needs a formula file or --random N\n")
                return EXIT_SEMANTIC
            cfg = RunConfig(args.input or Path("-"), format=args.format)
            return cmd_pp(cfg, args.pairs, args.random, args.seed, args.depth, out, err)
        cfg = RunConfig(
            args.input,
            mode=getattr(args, "mode", None),
            cap=args.cap,
            enumerate_all=getattr(args, "enumerate_all", False),
            format=args.format,
            force=args.force,
            figure=getattr(args, "figure", None),
        )
        if args.command == "solve":
            return cmd_solve(cfg, out, err)
        return cmd_aso(cfg, out, err)
    except ParseError as exc:
        for d in exc.diagnostics:
            err.write(f"error: {d.span.line}:{d.span.column}: {d.message}\n")
        if not exc.diagnostics:
            err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except SemanticError as exc:
        diags = getattr(exc, "diagnostics", None) or []
        for d in diags:
            err.write(f"error: {d.span.line}:{d.span.column}: {d.message}\n")
        if not diags:
            err.write(f"error: {exc}\n")
        return EXIT_SEMANTIC
    except CapExceededError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_CAP
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
