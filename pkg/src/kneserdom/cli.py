"""Command-line interface: ``kneserdom <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds, certify, constructions, solver
from .core import KneserError, KneserParams, VertexSet, elements
from .formats import dumps_json, dumps_text, loads

LEGEND = {
    "a": "domination number (k = 1)",
    "b": "k + 2*alpha closed form (first branch of the alpha rule)",
    "c": "k + 2*alpha + 1 closed form (second branch of the alpha rule)",
    "d": "large-k complement, including k = C(n-2,2) + 1",
    "e": "special cases k = C(n-3,2) + 1 and k = C(n-4,2) + 2",
    "f": "lower bound from occurrence sums, upper bound from a solver or construction",
    "g": "lower bound from monotonicity in n, upper bound from a solver or construction",
    "h": "k + r closed form, n >= r(k + r)",
    "i": "k + 3 closed form, n = 2k + 3",
}

_TAG_LETTERS = [
    ("a", {bounds.DOM_N2, bounds.THM_DOM_BIG_N, bounds.N_EQ_2R}),
    ("h", {bounds.THM_K_PLUS_R}),
    ("i", {bounds.THM_N2_K3}),
    ("b", {bounds.THM_B1}),
    ("c", {bounds.THM_B2}),
    ("e", {bounds.PROP_PART_1, bounds.PROP_PART_2}),
    ("d", {bounds.COR_LARGE_K, bounds.FULL}),
]


def cell_letter(report: bounds.ValueReport) -> str:
    tags = set(report.provenance)
    for letter, group in _TAG_LETTERS:
        if tags & group:
            return letter
    return "g" if bounds.MONOTONE_LB in tags else "f"


# -- output helpers -------------------------------------------------------------


def _config(args) -> dict:
    skip = {"func", "format", "family_func"}
    cfg = {"command": args.command}
    for key, value in sorted(vars(args).items()):
        if key in skip or key == "command" or value is None:
            continue
        cfg[key.replace("_", "-")] = value
    cfg["format"] = args.format
    return cfg


def _header(args) -> str:
    cfg = _config(args)
    parts = [cfg.pop("command")] + [f"{k}={v}" for k, v in cfg.items()]
    return "kneserdom " + " ".join(parts)


def _emit(args, text_lines: list[str], obj: dict, out=None) -> None:
    out = out or sys.stdout
    if args.format == "json":
        obj = {"config": _config(args), **obj}
        out.write(json.dumps(obj) + "\n")
    else:
        out.write(f"# {_header(args)}\n")
        for line in text_lines:
            out.write(line + "\n")


def _budget(args) -> solver.Budget:
    return solver.Budget(max_nodes=args.budget_nodes, max_seconds=args.budget_seconds)


def _report_lines(rep: bounds.ValueReport) -> list[str]:
    if not rep.feasible:
        return [f"infeasible ({', '.join(rep.provenance)})"]
    if rep.exact:
        return [f"exact {rep.lower} ({', '.join(rep.provenance)})"]
    return [f"interval [{rep.lower}, {rep.upper}] ({', '.join(rep.provenance)})"]


# -- commands ---------------------------------------------------------------------


def cmd_value(args) -> int:
    rep = bounds.gamma_value(args.n, args.r, args.k)
    _emit(args, _report_lines(rep), rep.to_json_obj())
    return 0


def cmd_packing(args) -> int:
    rep = bounds.packing_value(args.n, args.r)
    _emit(args, _report_lines(rep), rep.to_json_obj())
    return 0


def _table_cell(n: int, k: int, args) -> dict:
    rep = bounds.gamma_value(n, 2, k)
    cell = {"n": n, "k": k, "lower": rep.lower, "upper": rep.upper, "exact": rep.exact}
    if not rep.feasible:
        cell["letter"] = None
        return cell
    letter = cell_letter(rep) if rep.exact else None
    if not rep.exact and args.solve:
        out = solver.min_ktuple_dominating(KneserParams(n, 2), k, _budget(args))
        bounds.store_witness(out.witness, k)
        if out.exact:
            cell.update(lower=out.optimum, upper=out.optimum, exact=True)
            lows = bounds.MONOTONE_LB in rep.provenance and rep.lower == out.optimum
            letter = "g" if lows else "f"
        else:
            cell["upper"] = min(rep.upper, out.optimum)
    cell["letter"] = letter
    return cell


def _format_cell(cell: dict) -> str:
    if cell["lower"] is None:
        return "-"
    if cell["exact"]:
        return f"{cell['lower']}{cell['letter']}"
    return f"{cell['lower']}..{cell['upper']}"


def cmd_table(args) -> int:
    if args.legend:
        lines = [f"({letter}) {text}" for letter, text in LEGEND.items()]
        _emit(args, lines, {"legend": LEGEND})
        return 0
    if not 4 <= args.n_min <= args.n_max <= 26 or not 1 <= args.k_min <= args.k_max <= 60:
        raise KneserError("table range must satisfy 4 <= n-min <= n-max <= 26 and 1 <= k-min <= k-max <= 60")
    ns = range(args.n_min, args.n_max + 1)
    cells = [[_table_cell(n, k, args) for n in ns] for k in range(args.k_min, args.k_max + 1)]
    grid = [[_format_cell(c) for c in row] for row in cells]
    width = max(len("k\\n"), *(len(s) for row in grid for s in row), *(len(str(n)) for n in ns))
    lines = [" ".join(s.rjust(width) for s in ["k\\n", *map(str, ns)])]
    for k, row in zip(range(args.k_min, args.k_max + 1), grid):
        lines.append(" ".join(s.rjust(width) for s in [str(k), *row]))
    _emit(args, lines, {"cells": [c for row in cells for c in row]})
    return 0


_FAMILIES = {
    "disjoint": (lambda a: constructions.disjoint_family(a.n, a.r, a.m), ("n", "r", "m")),
    "dhat": (lambda a: constructions.dhat_n2(a.k, a.n), ("k",)),
    "circulant": (lambda a: constructions.circulant_layer(a.m, a.i, a.n), ("m", "i")),
    "d-m-alpha": (lambda a: constructions.d_m_alpha(a.m, a.alpha, a.n), ("m", "alpha")),
    "d-of-h": (lambda a: constructions.d_of_h(a.n, a.alpha, a.h), ("n", "alpha", "h")),
    "k-plus-2alpha": (
        lambda a: constructions.build_k_plus_2alpha(a.n, a.k, a.alpha),
        ("n", "k", "alpha"),
    ),
    "k-plus-2alpha-plus1": (
        lambda a: constructions.build_k_plus_2alpha_plus1(a.n, a.k, a.alpha),
        ("n", "k", "alpha"),
    ),
    "large-k": (lambda a: constructions.large_k_complement(a.n, a.r, a.t), ("n", "r", "t")),
    "boundary": (lambda a: constructions.boundary_family_S(a.n, a.r, a.t), ("n", "r", "t")),
    "fano": (lambda a: constructions.fano_planes()[(a.which or 1) - 1], ()),
    "k73": (lambda a: constructions.k73_gamma_sets(a.k), ("k",)),
    "steiner-4-5-11": (lambda a: constructions.steiner_4_5_11(a.which or 1), ()),
    "k115": (lambda a: constructions.k115_gamma_sets(a.k), ("k",)),
    "best": (lambda a: _best(a), ("n", "r", "k")),
}


def _best(a) -> VertexSet:
    found = constructions.best_construction(KneserParams(a.n, a.r), a.k)
    if found is None:
        raise KneserError(f"no {a.k}-tuple dominating set exists in K({a.n},{a.r})")
    return found[1]


def _write_set(args, D: VertexSet, extra: dict) -> None:
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        if args.format == "json":
            out.write(dumps_json(D, config=_config(args), **extra) + "\n")
        else:
            header = [_header(args)] + [f"{k}: {v}" for k, v in extra.items()]
            out.write(dumps_text(D, header))
    finally:
        if out is not sys.stdout:
            out.close()


def cmd_construct(args) -> int:
    build, needed = _FAMILIES[args.family]
    missing = [f"--{name}" for name in needed if getattr(args, name) is None]
    if missing:
        raise KneserError(f"family {args.family} needs {', '.join(missing)}")
    D = build(args)
    _write_set(args, D, {"n": D.params.n, "r": D.params.r, "size": len(D)})
    return 0


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def cmd_verify(args) -> int:
    text = _read_input(args.file)
    params = KneserParams(args.n, args.r) if args.n is not None and args.r is not None else None
    modes = [args.steiner, args.packing, args.perfect_code, args.tight is not None]
    if sum(map(bool, modes)) > 1:
        raise KneserError("verify checks one property at a time")
    if args.steiner:
        t, r, n = args.steiner
        D = loads(text, KneserParams(n, r))
        res = certify.is_steiner_system(t, r, n, D)
        what = f"S({t},{r},{n})"
    else:
        D = loads(text, params)
        params = D.params
        if args.packing:
            res, what = certify.is_2_packing(params, D), "2-packing"
        elif args.perfect_code:
            res, what = certify.is_perfect_1_code(params, D), "perfect 1-code"
        elif args.tight is not None:
            res = certify.certify_tight_domination(params, D, args.tight)
            what = f"tight {args.tight}-tuple domination"
        elif args.k is not None:
            res = certify.is_k_tuple_dominating(params, D, args.k)
            what = f"{args.k}-tuple domination"
        else:
            raise KneserError("verify needs one of -k, --tight, --packing, --perfect-code, --steiner")
    status = "holds" if res.holds else "fails"
    line = f"{what} {status} for {len(D)} vertices"
    if res.witness is not None:
        ws = res.witness if isinstance(res.witness, tuple) else (res.witness,)
        line += "; witness " + " ".join("{" + ",".join(map(str, elements(w))) + "}" for w in ws)
    _emit(args, [line], {"property": what, "size": len(D), **res.to_json_obj()})
    return 0 if res.holds else 1


def _outcome_lines(out: solver.SolveOutcome) -> list[str]:
    status = "optimum" if out.exact else "best found (budget exhausted)"
    lines = [f"{status} {out.optimum}, nodes {out.nodes_explored}"]
    lines += [" ".join(map(str, row)) for row in out.witness.element_rows()]
    return lines


def cmd_solve(args) -> int:
    params = KneserParams(args.n, args.r)
    out = solver.min_ktuple_dominating(
        params, args.k, _budget(args), symmetry=not args.no_symmetry, parallel=args.parallel
    )
    bounds.store_witness(out.witness, args.k)
    _emit(args, _outcome_lines(out), out.to_json_obj())
    return 0


def cmd_pack(args) -> int:
    params = KneserParams(args.n, args.r)
    out = solver.max_2_packing(params, _budget(args), symmetry=not args.no_symmetry)
    bounds.store_witness(out.witness)
    _emit(args, _outcome_lines(out), out.to_json_obj())
    return 0


def cmd_export_lp(args) -> int:
    params = KneserParams(args.n, args.r)
    print(f"# {_header(args)}", file=sys.stderr)
    if args.path in (None, "-"):
        solver.export_lp(params, args.k, sys.stdout)
    else:
        with open(args.path, "w", newline="\n") as fh:
            solver.export_lp(params, args.k, fh)
    return 0


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--budget-nodes", type=int, default=solver.Budget.max_nodes)
    common.add_argument("--budget-seconds", type=float, default=solver.Budget.max_seconds)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--parallel", action="store_true")

    def nrk(p, need=("n", "r", "k")):
        if "n" in need:
            p.add_argument("-n", "--n", type=int, required=True)
        if "r" in need:
            p.add_argument("-r", "--r", type=int, required=True)
        if "k" in need:
            p.add_argument("-k", "--k", type=int, required=True)

    parser = argparse.ArgumentParser(
        prog="kneserdom", description="k-tuple domination and 2-packing in Kneser graphs"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("value", parents=[common], help="exact value or interval for γ×k(n, r)")
    nrk(p)
    p.set_defaults(func=cmd_value)

    p = sub.add_parser("packing", parents=[common], help="exact value or interval for ρ(n, r)")
    nrk(p, ("n", "r"))
    p.set_defaults(func=cmd_packing)

    p = sub.add_parser("table", parents=[common], help="γ×k(n, 2) grid with provenance letters")
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--n-max", type=int, default=26)
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int, default=60)
    p.add_argument("--solve", action="store_true", help="run the solver on cells left as intervals")
    p.add_argument("--legend", action="store_true", help="print the provenance letters and exit")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("construct", parents=[common], help="build an explicit vertex family")
    p.add_argument("family", choices=sorted(_FAMILIES))
    for name in ("n", "r", "k", "m", "i", "t", "alpha", "h", "which"):
        flags = [f"-{name}", f"--{name}"] if name in "nrkmit" else [f"--{name}"]
        p.add_argument(*flags, type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="check a vertex-set file ('-' for stdin)")
    p.add_argument("file")
    p.add_argument("-n", "--n", type=int)
    p.add_argument("-r", "--r", type=int)
    p.add_argument("-k", "--k", type=int)
    p.add_argument("--tight", type=int, metavar="K")
    p.add_argument("--packing", action="store_true")
    p.add_argument("--perfect-code", action="store_true")
    p.add_argument("--steiner", type=int, nargs=3, metavar=("T", "R", "N"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", parents=[common], help="minimum k-tuple dominating set")
    nrk(p)
    p.add_argument("--no-symmetry", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("pack", parents=[common], help="maximum 2-packing")
    nrk(p, ("n", "r"))
    p.add_argument("--no-symmetry", action="store_true")
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("export-lp", parents=[common], help="write the ILP model in LP format")
    nrk(p)
    p.add_argument("path", nargs="?")
    p.set_defaults(func=cmd_export_lp)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (KneserError, OSError) as exc:
        print(f"kneserdom: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
