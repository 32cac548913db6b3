import json

import pytest

from mpturan.constructions import build_complete, build_g1
from mpturan.errors import InvalidParameterError, ResumeError
from mpturan.formulas import conj_value
from mpturan.graph import new_graph
from mpturan.harness import (
    CSV_COLUMNS,
    SweepSpec,
    audit_induction,
    load_records,
    partitions_into,
    record_from_json,
    record_to_json,
    records_to_csv,
    run_sweep,
    shape_survey,
)
from mpturan.solver import SearchBudget, Status


def _strip_diagnostics(csv_text: str) -> list[list[str]]:
    keep = [i for i, c in enumerate(CSV_COLUMNS) if c not in ("nodes", "elapsed")]
    return [[row.split(",")[i] for i in keep] for row in csv_text.strip().splitlines()]


def test_partitions_into():
    assert list(partitions_into(5, 2)) == [(4, 1), (3, 2)]
    assert list(partitions_into(6, 3, 2)) == [(2, 2, 2)]
    assert list(partitions_into(2, 3)) == []


def test_sweep_k1_matches_bet(tmp_path):
    spec = SweepSpec([4], [3], [1], total_max=8, output=tmp_path / "k1.csv")
    report = run_sweep(spec)
    assert len(report.records) == len(spec.points()) > 0
    assert report.deviations == [] and not report.budget_exhausted
    assert all(r.status_label() == "MatchesFormula(bet)" for r in report.records)
    lines = (tmp_path / "k1.csv").read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS) and len(lines) == len(report.records) + 1
    assert lines[1].startswith("1-1-1-1,3,1,4,4,")


def test_empty_grid(tmp_path):
    report = run_sweep(SweepSpec([4], [3], [1], total_max=3, output=tmp_path / "e.csv"))
    assert report.records == [] and report.shape_census == {}
    assert (tmp_path / "e.csv").read_text().strip() == ",".join(CSV_COLUMNS)


def test_sweep_rejects_grid_over_cap():
    with pytest.raises(InvalidParameterError):
        SweepSpec([3], [3], [1], total_max=20)


def test_resume_is_equivalent(tmp_path):
    full = tmp_path / "full.csv"
    run_sweep(SweepSpec([2, 3], [2, 3], [1, 2], total_max=6, output=full))
    part = tmp_path / "part.csv"
    run_sweep(SweepSpec([2, 3], [2, 3], [1, 2], total_max=4, output=part))
    lines = part.with_suffix(".jsonl").read_text().splitlines()
    # keep a strict subset on disk, as if the run had been interrupted
    part.with_suffix(".jsonl").write_text("\n".join(lines[: len(lines) // 2]) + "\n")
    part.unlink()
    report = run_sweep(SweepSpec([2, 3], [2, 3], [1, 2], total_max=6, output=part, resume=True))
    assert _strip_diagnostics(part.read_text()) == _strip_diagnostics(full.read_text())
    assert len(load_records(part.with_suffix(".jsonl"))) == len(report.records)


def test_corrupt_resume_names_the_point(tmp_path):
    out = tmp_path / "c.csv"
    run_sweep(SweepSpec([2], [3], [1], total_max=4, output=out))
    jsonl = out.with_suffix(".jsonl")
    lines = jsonl.read_text().splitlines()
    bad = json.loads(lines[1])
    del bad["witness"]
    lines[1] = json.dumps(bad)
    jsonl.write_text("\n".join(lines) + "\n")
    with pytest.raises(ResumeError) as info:
        run_sweep(SweepSpec([2], [3], [1], total_max=4, output=out, resume=True))
    assert ":2:" in str(info.value) and str(bad["ns"]) in str(info.value)
    jsonl.write_text("{not json\n")
    with pytest.raises(ResumeError):
        load_records(jsonl)


def test_parallel_matches_serial(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    ra = run_sweep(SweepSpec([3, 4], [3], [1, 2], total_max=7, output=a, workers=1))
    rb = run_sweep(SweepSpec([3, 4], [3], [1, 2], total_max=7, output=b, workers=3))
    assert _strip_diagnostics(a.read_text()) == _strip_diagnostics(b.read_text())
    assert [r.witness for r in ra.records] == [r.witness for r in rb.records]


def test_record_json_round_trip():
    report = run_sweep(SweepSpec([3], [3], [2], total_max=5))
    for rec in report.records:
        back = record_from_json(json.loads(json.dumps(record_to_json(rec))))
        assert back.witness == rec.witness and back.status == rec.status
        assert records_to_csv([back]) == records_to_csv([rec])


def test_budget_exhaustion_in_sweep():
    report = run_sweep(SweepSpec([4], [3], [2], total_max=12, total_min=12, size_max=3,
                                 budget=SearchBudget(max_nodes=20)))
    assert report.budget_exhausted
    assert all(r.status == Status.BUDGET for r in report.records if not r.solved)


def test_shape_survey_examples():
    census = shape_survey(k=2, vectors=[(4, 4, 4, 4, 4)])
    assert len(census.shapes()) == 1 and sum(census.counts.values()) == 1
    for n in range(1, 7):
        (shape,) = shape_survey(k=2, vectors=[(n,) * 5]).shapes()
        assert len(shape) in (2, 3)


def test_shape_census_soundness():
    census = shape_survey(k=2, size_range=(1, 7))
    for shape, ns in census.witnesses.items():
        assert conj_value(ns, 3, 2).partition.blocks[0] == shape
        assert list(ns) == sorted(ns, reverse=True)


def test_audit_g1():
    g = build_g1((5, 4, 3, 2), 2)
    rep = audit_induction(g, 2)
    assert rep.delta == 0 and rep.g == 54
    v1 = [c for c in rep.degree_checks if g.part_of[c.vertex] == 1]
    assert all(c.rule == "A1" and c.threshold == 8 == c.degree for c in v1)
    assert len(rep.entries) == g.n + g.num_edges
    assert rep.to_json()["sets_checked"] == g.n + g.num_edges


def test_audit_edgeless_and_complete():
    rep = audit_induction(new_graph((3, 3, 2, 2)), 1)
    assert rep.delta == 0 and len(rep.entries) == 10
    assert all(e.incident == 0 for e in rep.entries)
    assert all(e.holds is (e.gap <= 0) for e in rep.entries)
    assert audit_induction(build_complete((2, 2, 2, 2)), 1).delta == 8
    with pytest.raises(InvalidParameterError):
        audit_induction(build_complete((1, 1, 1)), 1)


def test_audit_skips_emptying_sets():
    rep = audit_induction(build_complete((2, 1, 1, 1)), 1)
    skipped = [e for e in rep.entries if e.gap is None]
    assert skipped and all(e.holds is None for e in skipped)
