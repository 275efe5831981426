import pytest

from decisionkit.engine import (EXHAUSTED, RUNNING, SATISFIED, init_session,
                                run_process, start, submit_answer)
from decisionkit.errors import (IncompleteElicitation, NoDecisionProblem,
                                NotEnumerable, ProtocolViolation)
from decisionkit.formulation import Attribute, ProblemStatement
from decisionkit.oracle import FunctionOracle, TableOracle

COST = Attribute(name="cost", scale="ordinal",
                 codomain=("low", "mid", "high"), separable=True,
                 higher_is_better=False)


def fresh():
    session = init_session(COST, ProblemStatement(kind="ranking"))
    return start(session)


def test_seed_requires_separable_enumerable_attribute():
    with pytest.raises(NoDecisionProblem):
        init_session(Attribute(name="vibe", separable=False),
                     ProblemStatement(kind="ranking"))
    with pytest.raises(NotEnumerable):
        init_session(Attribute(name="mass",
                               codomain=("interval", 0.0, 1.0)),
                     ProblemStatement(kind="ranking"))


def test_seed_space_is_the_codomain():
    session = fresh()
    assert [a.key for a in session.alternatives] == [
        "cost=low", "cost=mid", "cost=high"]
    query = session.pending[0]
    assert query.kind == "satisfaction"
    assert query.key == "0:satisfaction"
    assert query.payload["classes"] == [["cost=low"], ["cost=mid"],
                                        ["cost=high"]]


def test_protocol_head_of_queue_enforced():
    session = fresh()
    with pytest.raises(ProtocolViolation):
        submit_answer(session, "9:satisfaction", {"satisfied": True})
    with pytest.raises(ProtocolViolation):
        submit_answer(session, "0:satisfaction", {"yes": True})
    submit_answer(session, "0:satisfaction", {"satisfied": True})
    assert session.status == SATISFIED
    with pytest.raises(ProtocolViolation):
        submit_answer(session, "0:satisfaction", {"satisfied": True})


def test_dissatisfaction_defaults_to_attribute_request():
    session = fresh()
    submit_answer(session, "0:satisfaction", {"satisfied": False})
    assert session.pending[0].kind == "propose_attribute"
    with pytest.raises(ProtocolViolation):
        submit_answer(session, "0:propose_attribute", {"no": "name"})


def test_extension_prunes_and_multiplies():
    session = fresh()
    submit_answer(session, "0:satisfaction",
                  {"satisfied": False, "kept_classes": [0, 1],
                   "add_attribute": True, "add_variable": True})
    submit_answer(session, "0:propose_attribute",
                  {"name": "risk", "codomain": (0, 1),
                   "evaluator": "premium >= 1", "higher_is_better": False})
    assert session.iteration == 0  # variable proposal still pending
    submit_answer(session, "0:propose_variable",
                  {"name": "premium", "domain": ["enum", [0, 1]]})
    assert session.iteration == 1
    assert session.status == RUNNING
    # two kept seed values times two premium levels
    assert len(session.alternatives) == 4
    assert {a.key for a in session.alternatives} == {
        "cost=low,premium=0", "cost=low,premium=1",
        "cost=mid,premium=0", "cost=mid,premium=1"}
    assert session.lineage["cost=low,premium=1"] == 0
    assert session.lineage["cost=mid,premium=0"] == 1
    assert session.pending[0].key == "1:satisfaction"


def test_run_process_until_satisfied():
    session = init_session(COST, ProblemStatement(kind="ranking"))
    oracle = TableOracle({
        "0:satisfaction": {"satisfied": False, "add_attribute": True},
        "0:propose_attribute": {"name": "extra", "codomain": (0, 1),
                                "evaluator": "1"},
        "1:satisfaction": {"satisfied": True},
    })
    partition, done = run_process(session, oracle)
    assert done.status == SATISFIED
    assert done.iteration == 1
    assert partition is not None
    assert [key for key, _ in oracle.transcript] == [
        "0:satisfaction", "0:propose_attribute", "1:satisfaction"]


def test_run_process_exhausts_at_cap():
    session = init_session(COST, ProblemStatement(kind="ranking"),
                           max_iter=3)

    def never_happy(key, payload):
        if key.endswith("satisfaction"):
            return {"satisfied": False, "add_attribute": True}
        iteration = key.split(":")[0]
        return {"name": f"extra{iteration}", "codomain": (0, 1),
                "evaluator": "1"}

    _, done = run_process(session, FunctionOracle(never_happy))
    assert done.status == EXHAUSTED
    assert done.iteration == 3
    assert len(done.history) == 3


def test_run_process_missing_answer_bubbles_up():
    session = init_session(COST, ProblemStatement(kind="ranking"))
    with pytest.raises(IncompleteElicitation):
        run_process(session, TableOracle({}))


def test_clustering_statement_uses_clustering_solver():
    session = init_session(COST, ProblemStatement(kind="clustering",
                                                  class_count=2))
    start(session)
    payload = session.pending[0].payload
    assert payload["ordered"] is False
    assert len(payload["classes"]) == 2
