from __future__ import annotations

import json

import pytest

from conflictlens.config import AnalysisLimits
from conflictlens.conflict import (
    NO_CONFLICT,
    RESOLVED,
    UNDISCHARGED,
    UNRESOLVED,
    ConflictCause,
    ConflictReport,
    InformationBase,
    ResolutionLevel,
    analyze,
    detect_conflict,
    explain,
    find_strategy,
    offers_for,
    report_schema,
    to_json,
)
from conflictlens.errors import CapacityError, ConfigurationError, InputError
from conflictlens.formula import Atom, Not
from conflictlens.jgraph import BeliefAtom, EvidenceBase, EvidenceItem
from conflictlens.scenario import build, parse

# A moves only while B waits; B believes pushing is what it wants.
PUSHY = """\
HORIZON 1

VARS
  x : 0..1

OBSERVABLE
  x

ACTIONS
  A : go, stay
  B : wait, push
  Env : idle

TRANS
  move : on go, wait, * do x := 1

INIT
  x = 0

EVIDENCE
  odo : x = 0

GOALS_A
  phi_go : F<=1 x = 1

WEIGHTS_A
  {phi_go} = 1

GOALS_B
  phi_push : push

WEIGHTS_B
  {phi_push} = 1
"""

# Side by side on separate lanes: B's goal never interferes.
SIDE_BY_SIDE = PUSHY.replace("on go, wait, *", "on go, *, *")


def _run(text: str, max_level: ResolutionLevel = ResolutionLevel.C3) -> ConflictReport:
    built = build(parse(text))
    return find_strategy(built.evidence, built.problem, max_level)


def test_resolution_levels() -> None:
    assert ResolutionLevel.parse(" c2 ") is ResolutionLevel.C2
    assert ResolutionLevel.up_to(ResolutionLevel.C2) == (ResolutionLevel.C1, ResolutionLevel.C2)
    assert ResolutionLevel.C4.rank == 4
    assert ResolutionLevel.C3.title == "shared goals"
    with pytest.raises(InputError):
        ResolutionLevel.parse("C5")


def test_information_base_only_grows() -> None:
    base = EvidenceBase((EvidenceItem(BeliefAtom("a"), Atom("p")),))
    info = InformationBase(base)
    sizes = [info.size]
    info = info.dismiss(["a"])
    sizes.append(info.size)
    info = info.learn([EvidenceItem(BeliefAtom("b"), Not(Atom("p")))])
    sizes.append(info.size)
    info = info.share([("c", Atom("q"))]).share([("c", Atom("q"))])
    sizes.append(info.size)
    info = info.adopt(["g"])
    sizes.append(info.size)
    assert sizes == sorted(sizes)
    assert info.active().atom_ids == ("b",)
    assert info.fact_formulas == (Atom("q"),)


def test_causes_need_a_justification() -> None:
    with pytest.raises(ValueError):
        ConflictCause((), "A#0", "B#0", (), (), "g0")


def test_resolved_reports_need_a_matching_trace_entry() -> None:
    with pytest.raises(ValueError):
        ConflictReport(RESOLVED, ResolutionLevel.C1, ())
    with pytest.raises(ValueError):
        ConflictReport("maybe", None, ())


def test_independent_goals_do_not_conflict() -> None:
    report = _run(SIDE_BY_SIDE)
    assert report.verdict == NO_CONFLICT
    assert report.level is None
    assert not report.causes
    assert [s.action(0, (("0",),)) for s in report.strategies] == ["go"]


def test_blocking_belief_is_a_conflict() -> None:
    built = build(parse(PUSHY))
    report = analyze(built.evidence, built.problem)
    assert report.verdict == UNRESOLVED
    assert report.conflict
    assert not report.strategies
    cause = report.causes[0]
    assert cause.justification
    assert cause.goals_a == ("phi_go",)
    assert cause.goals_b == ("phi_push",)
    assert explain(report).causes[0].discharged_at == UNDISCHARGED


def test_without_offers_the_conflict_stays_unresolved() -> None:
    report = _run(PUSHY, ResolutionLevel.C3)
    assert report.verdict == UNRESOLVED
    assert report.trace == ()


def test_c4_needs_joint_weights() -> None:
    with pytest.raises(ConfigurationError):
        _run(PUSHY, ResolutionLevel.C4)


def test_commitment_resolves_at_c2() -> None:
    report = _run(PUSHY + "\nB_COMMITS\n  no_push : !push\n")
    assert report.verdict == RESOLVED
    assert report.level is ResolutionLevel.C2
    assert [e.level for e in report.trace] == [ResolutionLevel.C2]
    assert report.trace[0].delta == ("commit no_push",)
    assert explain(report).causes[0].discharged_at == "C2"


def test_commitment_is_out_of_reach_below_c2() -> None:
    report = _run(PUSHY + "\nB_COMMITS\n  no_push : !push\n", ResolutionLevel.C1)
    assert report.verdict == UNRESOLVED


def test_strategy_bound_is_enforced() -> None:
    built = build(parse(PUSHY))
    with pytest.raises(CapacityError):
        analyze(built.evidence, built.problem, AnalysisLimits(strategy_bound=3))


def test_offers_for_builds_weight_tables() -> None:
    offers = offers_for(commits=[("c", Atom("q"))], joint_weights={("a", "b"): 3})
    assert offers.commits == (("c", Atom("q")),)
    assert offers.joint_weights == ((frozenset({"a", "b"}), 3),)
    assert offers_for().joint_weights is None


def test_report_json_follows_the_schema() -> None:
    report = _run(PUSHY + "\nB_COMMITS\n  no_push : !push\n")
    doc = json.loads(to_json(report))
    schema = report_schema()
    assert set(doc) <= set(schema["properties"])
    assert doc["verdict"] == "resolved"
    assert doc["level"] == "C2"
    assert doc["strategies"][0]["owner"] == "A"
    assert doc["causes"][0]["blocking"][1].startswith("B#")
    assert to_json(report) == to_json(_run(PUSHY + "\nB_COMMITS\n  no_push : !push\n"))


# A wants to go and stay collision-free; only go plus swerve crashes.
LANES = """\
HORIZON 1

VARS
  c : 0..1
  broken : bool

OBSERVABLE
  c

ACTIONS
  A : go, stay
  B : hold, swerve
  Env : idle

TRANS
  crash : on go, swerve, * do c := 1

INIT
  c = 0 & !broken

EVIDENCE
  cam : c = 0

GOALS_A
  phi_A_col : G<=1 c = 0
  phi_A_go : go

WEIGHTS_A
  {phi_A_col, phi_A_go} = 2
  {phi_A_col} = 1

GOALS_B
  phi_B_lane : hold

WEIGHTS_B
  {phi_B_lane} = 1
"""


def test_partner_keeping_its_lane_is_no_conflict() -> None:
    built = build(parse(LANES))
    report = analyze(built.evidence, built.problem)
    assert report.verdict == NO_CONFLICT
    assert [s.action(0, (("0",),)) for s in report.strategies] == ["go"]


def test_partner_with_unreachable_goals_behaves_arbitrarily() -> None:
    broken = LANES.replace("phi_B_lane : hold", "phi_B_lane : hold & broken")
    built = build(parse(broken))
    report = analyze(built.evidence, built.problem)
    assert report.verdict == UNRESOLVED
    cause = report.causes[0]
    assert cause.goals_b == ()
    assert cause.failed_goals == ("phi_A_col",)
    assert "swerve" in " ".join(cause.b_decisions)


def test_detect_conflict_agrees_with_analyze() -> None:
    built = build(parse(PUSHY))
    p = built.problem
    conflict, causes = detect_conflict(built.evidence, p.model, p.goals_a, p.goals_b)
    assert conflict
    assert causes == list(analyze(built.evidence, p).causes)
    calm = build(parse(SIDE_BY_SIDE)).problem
    assert detect_conflict(built.evidence, calm.model, calm.goals_a, calm.goals_b) == (False, [])


def test_explanations_show_the_evidence_groups() -> None:
    from rich.console import Console

    from conflictlens.conflict import render

    built = build(parse(PUSHY))
    report = analyze(built.evidence, built.problem)
    assert report.graph == (("g0", "odo"),)
    assert explain(report).group_graph == [("g0", "odo")]
    console = Console(record=True, width=120)
    render(report, console)
    text = console.export_text()
    assert "evidence groups" in text
    assert "odo" in text
