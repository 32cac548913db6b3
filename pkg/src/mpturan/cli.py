"""Command-line entry point: ``mpturan <subcommand> ...``.

Exit status is 0 on success, 2 when a search budget ran out, 1 on error.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path

from . import constructions, formulas, harness, packing
from .errors import TuranError
from .graph import MultipartiteGraph, PartSizes, parse_graph, serialize_graph
from .solver import HARD_CAP, SearchBudget, Status, verify_point

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BUDGET = 2


def _parts(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _int_range(text: str) -> list[int]:
    """``"3"``, ``"1,2,4"`` or ``"2-4"``."""
    out: list[int] = []
    try:
        for piece in text.split(","):
            if "-" in piece:
                lo, hi = piece.split("-", 1)
                out.extend(range(int(lo), int(hi) + 1))
            elif piece:
                out.append(int(piece))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}") from None
    return out


def _blocks(text: str) -> list[list[int]]:
    """``"1,4|2,3"`` -> ``[[1, 4], [2, 3]]``."""
    return [[int(x) for x in b.split(",") if x.strip()] for b in text.split("|")]


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # shared by the top-level parser and every subcommand, so flags work on either side
    d = argparse.SUPPRESS if suppress else None
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--output", "-o", type=Path, default=d, help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=d, help="output format")
    p.add_argument("--workers", type=int, default=d, help="worker processes for sweeps")
    p.add_argument("--seed", type=int, default=d, help="seed for random graphs")
    p.add_argument("--resume", action="store_true", default=d, help="continue a sweep from its JSONL file")
    p.add_argument("--verbose", "-v", action="store_true", default=d)
    return p


def _graph_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("graph", nargs="?", help="graph file in text format, '-' for stdin")
    p.add_argument("--random", type=_parts, metavar="SIZES", help="use a random graph on these part sizes")
    p.add_argument("--density", type=float, default=0.5, help="edge probability for --random")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpturan",
        description="Exact Turán numbers of disjoint cliques in complete multipartite hosts.",
        parents=[_global_flags(False)],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _global_flags(True)

    p = sub.add_parser("formula", parents=[common], help="evaluate a closed-form value")
    p.add_argument("name", choices=("g", "bet", "conj", "matching"))
    p.add_argument("--parts", type=_parts, required=True)
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--k", type=int, default=1)

    p = sub.add_parser("construct", parents=[common], help="build an extremal construction")
    p.add_argument("kind", choices=constructions.KINDS)
    p.add_argument("--parts", type=_parts, required=True)
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--partition", type=_blocks, help="blocks such as '1,4|2,3'")

    p = sub.add_parser("check-packing", parents=[common], help="test a graph for k disjoint t-cliques")
    _graph_source(p)
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--k", type=int, default=1)

    p = sub.add_parser("analyze", parents=[common], help="rich-edge structure and pair classes")
    _graph_source(p)
    p.add_argument("--k", type=int, default=1)

    p = sub.add_parser("solve", parents=[common], help="exact extremal number at one point")
    p.add_argument("--parts", type=_parts, required=True)
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--max-nodes", type=int, default=SearchBudget.max_nodes)
    p.add_argument("--max-seconds", type=float, default=SearchBudget.max_seconds)
    p.add_argument("--witness", type=Path, help="also write the witness graph here")

    p = sub.add_parser("sweep", parents=[common], help="solve every point of a grid")
    p.add_argument("--r", type=_int_range, required=True, help="part counts, e.g. '2-4'")
    p.add_argument("--t", type=_int_range, required=True)
    p.add_argument("--k", type=_int_range, required=True)
    p.add_argument("--total-max", type=int, required=True)
    p.add_argument("--total-min", type=int, default=1)
    p.add_argument("--size-max", type=int)
    p.add_argument("--max-nodes", type=int, default=SearchBudget.max_nodes)
    p.add_argument("--max-seconds", type=float, default=SearchBudget.max_seconds)

    p = sub.add_parser("survey-shapes", parents=[common], help="census of optimal block shapes")
    p.add_argument("--r", type=int, default=5)
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--min", type=int, default=1, dest="size_min")
    p.add_argument("--max", type=int, default=20, dest="size_max")

    p = sub.add_parser("audit", parents=[common], help="check the induction inequalities on a 4-partite graph")
    _graph_source(p)
    p.add_argument("--k", type=int, default=1)
    return parser


def random_graph(sizes, density: float, rng: random.Random) -> MultipartiteGraph:
    g = MultipartiteGraph(PartSizes.of(sizes))
    for x in g.vertices():
        for y in range(x + 1, g.n):
            if g.part_of[x] != g.part_of[y] and rng.random() < density:
                g.add_edge(x, y)
    return g


def _load_graph(args) -> MultipartiteGraph:
    if args.random is not None:
        return random_graph(args.random, args.density, random.Random(args.seed))
    if args.graph is None:
        raise TuranError("give a graph file or --random SIZES")
    if args.graph == "-":
        return parse_graph(sys.stdin.read())
    return parse_graph(Path(args.graph).read_text())


def _emit(args, text: str) -> None:
    if args.output is not None:
        Path(args.output).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text.rstrip("\n"))


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def cmd_formula(args) -> int:
    ns = PartSizes.of(args.parts)
    if args.name == "g":
        out = formulas.g_value(ns, args.k).to_json()
        out["terms"] = list(formulas.g_value(ns, args.k).terms)
    elif args.name == "bet":
        out = formulas.bet_value(ns, args.t).to_json()
    elif args.name == "conj":
        res = formulas.conj_value(ns, args.t, args.k)
        out = res.to_json()
        out["special_block"] = list(res.special_block)
    else:
        out = {"value": formulas.matching_extremal_value(ns, args.k)}
    out = {"formula": args.name, "ns": list(ns.sizes), "t": args.t, "k": args.k, **out}
    _emit(args, _json(out))
    return EXIT_OK


def cmd_construct(args) -> int:
    ns = PartSizes.of(args.parts)
    partition = formulas.BlockPartition.from_blocks(args.partition, ns) if args.partition else None
    built = constructions.construct(constructions.ConstructionSpec(args.kind, ns, args.k, args.t, partition))
    text = serialize_graph(built.graph)
    if args.output is not None:
        _emit(args, text)
        sidecar = Path(str(args.output) + ".json")
        sidecar.write_text(_json(built.sidecar()) + "\n")
    elif args.format == "json":
        _emit(args, _json({**built.sidecar(), "graph": text}))
    else:
        _emit(args, text)
    return EXIT_OK


def cmd_check_packing(args) -> int:
    g = _load_graph(args)
    wit = packing.find_clique_packing(g, args.k, args.t)
    if args.format == "json":
        out = {"free": wit is None, "cliques": [list(c) for c in wit.cliques] if wit else []}
        _emit(args, _json(out))
        return EXIT_OK
    lines = ["FREE" if wit is None else "NOT-FREE"]
    if wit is not None:
        lines += [f"clique {' '.join(map(str, c))}" for c in wit.cliques]
        lines += [f"edge {x} {y}" for x, y in wit.edges()]
    _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_analyze(args) -> int:
    g = _load_graph(args)
    report = packing.rich_edges(g, args.k)
    out = report.to_json()
    out["pair_classes"] = {
        f"{i}-{j}": packing.classify_pair(g, report.z_set, i, j).value
        for i in range(1, g.r + 1)
        for j in range(i + 1, g.r + 1)
    }
    _emit(args, _json(out))
    return EXIT_OK


def cmd_solve(args) -> int:
    budget = SearchBudget(max_nodes=args.max_nodes, max_seconds=args.max_seconds)
    rec = verify_point(args.parts, args.t, args.k, budget)
    if args.witness is not None:
        args.witness.write_text(serialize_graph(rec.witness))
    if args.format == "csv":
        _emit(args, harness.records_to_csv([rec]))
    else:
        _emit(args, _json(harness.record_to_json(rec)))
    return EXIT_BUDGET if rec.status == Status.BUDGET else EXIT_OK


def cmd_sweep(args) -> int:
    spec = harness.SweepSpec(
        r_values=args.r,
        t_values=args.t,
        k_values=args.k,
        total_max=args.total_max,
        total_min=args.total_min,
        size_max=args.size_max,
        budget=SearchBudget(max_nodes=args.max_nodes, max_seconds=args.max_seconds),
        output=args.output,
        resume=bool(args.resume),
        workers=args.workers or 1,
        cap=HARD_CAP,
    )
    report = harness.run_sweep(spec)
    if args.output is None:
        if args.format == "json":
            print("\n".join(json.dumps(harness.record_to_json(r)) for r in report.records))
        else:
            print(harness.records_to_csv(report.records), end="")
    summary = (
        f"{len(report.records)} points, {len(report.deviations)} deviations, "
        f"{len(report.findings)} findings"
    )
    print(summary, file=sys.stderr)
    for rec in report.deviations:
        print(f"  {'-'.join(map(str, rec.ns.sizes))} t={rec.t} k={rec.k}: {rec.status_label()}"
              f"{' FINDING' if rec.finding else ''}", file=sys.stderr)
    return EXIT_BUDGET if report.budget_exhausted else EXIT_OK


def cmd_survey_shapes(args) -> int:
    census = harness.shape_survey(args.r, args.t, args.k, (args.size_min, args.size_max))
    if args.format == "csv":
        rows = ["shape,witness,count"]
        for shape, info in census.to_json().items():
            rows.append(f"{shape},{'-'.join(map(str, info['witness']))},{info['count']}")
        _emit(args, "\n".join(rows))
    else:
        _emit(args, _json(census.to_json()))
    return EXIT_OK


def cmd_audit(args) -> int:
    g = _load_graph(args)
    _emit(args, _json(harness.audit_induction(g, args.k).to_json()))
    return EXIT_OK


COMMANDS = {
    "formula": cmd_formula,
    "construct": cmd_construct,
    "check-packing": cmd_check_packing,
    "analyze": cmd_analyze,
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "survey-shapes": cmd_survey_shapes,
    "audit": cmd_audit,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except (TuranError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
