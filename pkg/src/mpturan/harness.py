"""Grid sweeps with CSV/JSONL persistence, the bipartition shape survey, and the
induction auditor for 4-partite graphs."""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import InvalidParameterError, ResumeError
from .formulas import conj_value, delta_excess, g_value, induction_gap
from .graph import MultipartiteGraph, PartSizes, parse_graph, serialize_graph
from .solver import HARD_CAP, ExtremalRecord, SearchBudget, Status, verify_point

log = logging.getLogger(__name__)

CSV_COLUMNS = [
    "ns", "t", "k", "exact", "best", "g", "bet", "conj", "matching",
    "status", "finding", "nodes", "elapsed",
]
DIAGNOSTIC_COLUMNS = ("nodes", "elapsed")


def partitions_into(total: int, r: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Non-ascending ``r``-tuples of positive integers summing to ``total``."""
    if largest is None:
        largest = total
    if r == 0:
        if total == 0:
            yield ()
        return
    for a in range(min(total - (r - 1), largest), 0, -1):
        for rest in partitions_into(total - a, r - 1, a):
            yield (a,) + rest


@dataclass
class SweepSpec:
    r_values: list[int]
    t_values: list[int]
    k_values: list[int]
    total_max: int
    total_min: int = 1
    size_max: int | None = None
    budget: SearchBudget = field(default_factory=SearchBudget)
    output: Path | None = None
    resume: bool = False
    workers: int = 1
    cap: int = HARD_CAP

    def __post_init__(self):
        if self.total_max > self.cap:
            raise InvalidParameterError(f"total_max {self.total_max} exceeds the solver cap {self.cap}")
        if min(self.t_values, default=2) < 2 or min(self.k_values, default=1) < 1:
            raise InvalidParameterError("need t >= 2 and k >= 1")

    def points(self) -> list[tuple[tuple[int, ...], int, int]]:
        pts = []
        for t in self.t_values:
            for k in self.k_values:
                for r in self.r_values:
                    for total in range(max(r, self.total_min), self.total_max + 1):
                        for ns in partitions_into(total, r, self.size_max):
                            pts.append((ns, t, k))
        return pts


@dataclass
class SweepReport:
    records: list[ExtremalRecord]
    shape_census: dict[tuple[int, ...], list[tuple[int, ...]]] = field(default_factory=dict)

    @property
    def deviations(self) -> list[ExtremalRecord]:
        return [rec for rec in self.records if rec.status != Status.MATCHES]

    @property
    def findings(self) -> list[ExtremalRecord]:
        return [rec for rec in self.records if rec.finding]

    @property
    def budget_exhausted(self) -> bool:
        return any(rec.status == Status.BUDGET for rec in self.records)


# -- record (de)serialisation ------------------------------------------------------


def record_to_json(rec: ExtremalRecord) -> dict:
    return {
        "ns": list(rec.ns.sizes),
        "t": rec.t,
        "k": rec.k,
        "exact": rec.exact_value,
        "best": rec.best_value,
        "formulas": rec.formulas(),
        "status": rec.status.value,
        "status_formula": rec.status_formula,
        "gap": rec.gap,
        "finding": rec.finding,
        "comparisons": rec.comparisons,
        "nodes": rec.nodes_explored,
        "elapsed": round(rec.elapsed, 4),
        "witness": serialize_graph(rec.witness),
    }


def record_from_json(data: dict) -> ExtremalRecord:
    f = data["formulas"]
    return ExtremalRecord(
        ns=PartSizes(tuple(data["ns"])),
        t=data["t"],
        k=data["k"],
        exact_value=data["exact"],
        best_value=data["best"],
        witness=parse_graph(data["witness"]),
        formula_g=f["g"],
        formula_bet=f["bet"],
        formula_conj=f["conj"],
        formula_matching=f["matching"],
        status=Status(data["status"]),
        status_formula=data["status_formula"],
        gap=data["gap"],
        finding=data["finding"],
        nodes_explored=data["nodes"],
        elapsed=data["elapsed"],
        comparisons=data.get("comparisons", {}),
    )


def _blank(v) -> str:
    return "" if v is None else str(v)


def record_to_row(rec: ExtremalRecord) -> dict[str, str]:
    return {
        "ns": "-".join(map(str, rec.ns.sorted_view())),
        "t": str(rec.t),
        "k": str(rec.k),
        "exact": _blank(rec.exact_value),
        "best": str(rec.best_value),
        "g": _blank(rec.formula_g),
        "bet": _blank(rec.formula_bet),
        "conj": _blank(rec.formula_conj),
        "matching": _blank(rec.formula_matching),
        "status": rec.status_label(),
        "finding": "FINDING" if rec.finding else "",
        "nodes": str(rec.nodes_explored),
        "elapsed": f"{rec.elapsed:.4f}",
    }


def records_to_csv(records: Iterable[ExtremalRecord], diagnostics: bool = True) -> str:
    cols = [c for c in CSV_COLUMNS if diagnostics or c not in DIAGNOSTIC_COLUMNS]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for rec in records:
        writer.writerow(record_to_row(rec))
    return buf.getvalue()


def _paths(output: Path) -> tuple[Path, Path]:
    output = Path(output)
    if output.suffix == ".csv":
        return output, output.with_suffix(".jsonl")
    return output.with_suffix(".csv"), output.with_suffix(".jsonl")


def _point_key(ns, t: int, k: int) -> tuple:
    return (tuple(ns), t, k)


def load_records(jsonl: Path) -> dict[tuple, ExtremalRecord]:
    done: dict[tuple, ExtremalRecord] = {}
    with open(jsonl) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
                rec = record_from_json(data)
            except (ValueError, KeyError, TypeError) as exc:
                point = None
                try:
                    raw = json.loads(line)
                    point = (raw.get("ns"), raw.get("t"), raw.get("k"))
                except ValueError:
                    pass
                raise ResumeError(f"{jsonl}:{lineno}: corrupt record for point {point}: {exc}") from None
            done[_point_key(rec.ns.sizes, rec.t, rec.k)] = rec
    return done


def _solve_point(args) -> ExtremalRecord:
    ns, t, k, budget, cap = args
    return verify_point(ns, t, k, budget, cap)


def run_sweep(spec: SweepSpec) -> SweepReport:
    """Solve every grid point, reusing records already on disk when resuming."""
    points = spec.points()
    done: dict[tuple, ExtremalRecord] = {}
    csv_path = jsonl_path = None
    if spec.output is not None:
        csv_path, jsonl_path = _paths(spec.output)
        if spec.resume and jsonl_path.exists():
            done = load_records(jsonl_path)
            log.info("resuming: %d of %d points already on disk", len(done), len(points))
        elif jsonl_path.exists():
            jsonl_path.unlink()
    todo = [p for p in points if _point_key(*p) not in done]
    jobs = [(ns, t, k, spec.budget, spec.cap) for ns, t, k in todo]
    sink = open(jsonl_path, "a") if jsonl_path is not None else None
    try:
        if spec.workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=spec.workers) as pool:
                results = pool.map(_solve_point, jobs)
                for rec in results:
                    done[_point_key(rec.ns.sizes, rec.t, rec.k)] = rec
                    if sink:
                        sink.write(json.dumps(record_to_json(rec)) + "\n")
                        sink.flush()
        else:
            for job in jobs:
                rec = _solve_point(job)
                log.info("%s t=%d k=%d -> %s", rec.ns, rec.t, rec.k, rec.status_label())
                done[_point_key(rec.ns.sizes, rec.t, rec.k)] = rec
                if sink:
                    sink.write(json.dumps(record_to_json(rec)) + "\n")
                    sink.flush()
    finally:
        if sink:
            sink.close()
    records = [done[_point_key(*p)] for p in points]
    report = SweepReport(records, census_from_records(records))
    if csv_path is not None:
        csv_path.write_text(records_to_csv(records))
    return report


# -- shapes of the optimal bipartition ----------------------------------------------


def part_one_shape(ns, t: int, k: int) -> tuple[int, ...]:
    """The block containing part 1 in the canonical maximiser of the conjectured value."""
    return conj_value(ns, t, k).partition.blocks[0]


def census_from_records(records: Iterable[ExtremalRecord]) -> dict[tuple[int, ...], list[tuple[int, ...]]]:
    census: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for rec in records:
        if rec.formula_conj is None:
            continue
        sizes = rec.ns.sorted_view()
        census.setdefault(part_one_shape(sizes, rec.t, rec.k), []).append(sizes)
    return census


@dataclass
class ShapeCensus:
    witnesses: dict[tuple[int, ...], tuple[int, ...]]
    counts: dict[tuple[int, ...], int]

    def shapes(self) -> set[tuple[int, ...]]:
        return set(self.witnesses)

    def to_json(self) -> dict:
        return {
            "-".join(map(str, shape)): {"witness": list(self.witnesses[shape]), "count": self.counts[shape]}
            for shape in sorted(self.witnesses, key=lambda s: (len(s), s))
        }


def shape_survey(r: int = 5, t: int = 3, k: int = 2, size_range: tuple[int, int] = (1, 20),
                 vectors: Iterable[tuple[int, ...]] | None = None) -> ShapeCensus:
    """Bucket non-ascending size vectors by the block holding part 1 in the
    canonical maximiser; keeps the first witness met for each shape."""
    lo, hi = size_range
    if vectors is None:
        vectors = (
            tuple(reversed(c))
            for c in itertools.combinations_with_replacement(range(lo, hi + 1), r)
        )
    witnesses: dict[tuple[int, ...], tuple[int, ...]] = {}
    counts: dict[tuple[int, ...], int] = {}
    for ns in vectors:
        shape = part_one_shape(ns, t, k)
        counts[shape] = counts.get(shape, 0) + 1
        witnesses.setdefault(shape, tuple(ns))
    return ShapeCensus(witnesses, counts)


# -- induction audit ----------------------------------------------------------------


@dataclass
class AuditEntry:
    T: tuple[int, ...]
    incident: int
    gap: int | None
    holds: bool | None


@dataclass
class DegreeCheck:
    vertex: int
    rule: str
    threshold: int
    degree: int

    @property
    def ok(self) -> bool:
        return self.degree >= self.threshold


@dataclass
class AuditReport:
    k: int
    edges: int
    g: int
    delta: int
    entries: list[AuditEntry]
    degree_checks: list[DegreeCheck]
    thresholds_apply: bool

    @property
    def violations(self) -> list[AuditEntry]:
        return [e for e in self.entries if e.holds is False]

    @property
    def degree_violations(self) -> list[DegreeCheck]:
        return [d for d in self.degree_checks if not d.ok]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "edges": self.edges,
            "g": self.g,
            "delta": self.delta,
            "sets_checked": len(self.entries),
            "violations": [
                {"T": list(e.T), "incident": e.incident, "gap": e.gap} for e in self.violations
            ],
            "thresholds_apply": self.thresholds_apply,
            "degree_violations": [
                {"vertex": d.vertex, "rule": d.rule, "threshold": d.threshold, "degree": d.degree}
                for d in self.degree_violations
            ],
        }


def degree_thresholds(ns: PartSizes, k: int) -> dict[int, tuple[str, int]]:
    """Per original part id, the degree rule and its lower bound (sorted roles)."""
    n1, n2, n3, n4 = ns.sorted_view()
    perm = ns.sort_permutation()
    out: dict[int, tuple[str, int]] = {}
    for role, part in enumerate(perm, start=1):
        ni = ns[part]
        if role == 1:
            out[part] = ("A1", n2 + n3 + k - 1) if n1 > n2 else ("A2", n1 + n4)
        elif role in (2, 3):
            if ni > n4 and n1 < n2 + n3:
                out[part] = ("B1", n1 + n4)
            else:
                out[part] = ("B2", n2 + n3)
        else:
            out[part] = ("C", n2 + n3)
    return out


def audit_induction(g: MultipartiteGraph, k: int) -> AuditReport:
    """Check ``e(T;G) >= g(ns) - g(ns')`` for every vertex and every edge ``T``."""
    if g.r != 4:
        raise InvalidParameterError(f"audit needs a 4-partite graph, got r={g.r}")
    ns = g.parts
    gval = g_value(ns, k).value
    sets: list[tuple[int, ...]] = [(v,) for v in g.vertices()] + list(g.edges())
    entries = []
    for T in sets:
        reduced = list(ns.sizes)
        for v in T:
            reduced[g.part_of[v] - 1] -= 1
        incident = g.edges_incident(T)
        if min(reduced) < 1:
            entries.append(AuditEntry(T, incident, None, None))
            continue
        gap = induction_gap(ns, reduced, k)
        entries.append(AuditEntry(T, incident, gap, incident >= gap))
    rules = degree_thresholds(ns, k)
    checks = []
    for v in g.vertices():
        rule, bound = rules[g.part_of[v]]
        checks.append(DegreeCheck(v, rule, bound, g.degree(v)))
    n1, n2, n3, _ = ns.sorted_view()
    return AuditReport(
        k=k,
        edges=g.num_edges,
        g=gval,
        delta=delta_excess(g.num_edges, ns, k),
        entries=entries,
        degree_checks=checks,
        thresholds_apply=n1 <= n2 + n3,
    )
