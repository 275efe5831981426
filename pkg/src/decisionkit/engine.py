"""Interactive set-construction loop.

The alternative space is itself decided interactively: seed it from the
codomain of one separable attribute, partition it, ask the client whether
the partition satisfies them, and if not extend the space with further
attributes and/or decision variables, repeating until satisfaction or an
iteration cap.

The session is an explicit state machine: ``start`` computes the first
partition and queues a satisfaction question; ``submit_answer`` consumes
exactly the head of the pending queue. ``run_process`` merely pumps answers
from an oracle into the machine, so a scripted transcript, a live queue and
the HTTP service all drive identical state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .aggregation import aggregate_majority
from .errors import (IncompleteElicitation, NoDecisionProblem, NotEnumerable,
                     ProtocolViolation)
from .formulation import (Alternative, Attribute, ProblemStatement, Variable,
                          evaluate_one)
from .oracle import Oracle
from .relations import Partition, Relation, relation
from .solvers import solve_clustering, solve_ranking

RUNNING = "running"
SATISFIED = "satisfied"
EXHAUSTED = "exhausted"

DEFAULT_MAX_ITER = 50

SATISFACTION = "satisfaction"
PROPOSE_ATTRIBUTE = "propose_attribute"
PROPOSE_VARIABLE = "propose_variable"
PAIRWISE = "pairwise"


@dataclass(frozen=True)
class OracleQuery:
    kind: str
    key: str
    payload: dict = field(default_factory=dict)


@dataclass
class Session:
    id: str
    variables: list[Variable]
    attributes: list[Attribute]
    statement: ProblemStatement
    alternatives: list[Alternative]
    max_iter: int = DEFAULT_MAX_ITER
    status: str = RUNNING
    iteration: int = 0
    history: list[dict] = field(default_factory=list)
    pending: list[OracleQuery] = field(default_factory=list)
    lineage: dict[str, int] = field(default_factory=dict)
    current_partition: Partition | None = None
    _staged_attribute: dict | None = None
    _staged_variable: dict | None = None
    _kept_classes: list[int] | None = None


def _is_finite_codomain(codomain: tuple) -> bool:
    if len(codomain) == 3 and codomain[0] == "interval":
        return False
    return len(codomain) > 0


def init_session(seed_attr: Attribute, statement: ProblemStatement,
                 session_id: str = "session",
                 max_iter: int = DEFAULT_MAX_ITER) -> Session:
    """Seed the space with one variable ranging over the seed attribute's
    codomain (the "assume A equals E" hypothesis)."""
    if not seed_attr.separable:
        raise NoDecisionProblem(
            "a non-separable attribute cannot seed a decision problem")
    if not _is_finite_codomain(seed_attr.codomain):
        raise NotEnumerable(
            f"codomain of {seed_attr.name} is not finitely enumerable")
    var = Variable(seed_attr.name, ("enum", tuple(seed_attr.codomain)))
    attr = seed_attr
    if attr.evaluator is None and attr.decomposition is None:
        # identity over the seeded variable; kept as an expression so the
        # session survives serialization
        attr = Attribute(
            name=seed_attr.name, scale=seed_attr.scale,
            codomain=seed_attr.codomain, origin=seed_attr.origin,
            separable=True, evaluator=seed_attr.name,
            higher_is_better=seed_attr.higher_is_better)
    alts = [Alternative((var.name,), (v,)) for v in var.values()]
    return Session(
        id=session_id,
        variables=[var],
        attributes=[attr],
        statement=statement,
        alternatives=alts,
        max_iter=max_iter,
    )


def _attribute_relation(attr: Attribute, alts: list[Alternative]) -> Relation:
    carrier = [a.key for a in alts]
    values = {a.key: evaluate_one(a, attr) for a in alts}
    if attr.scale != "nominal" and attr.codomain \
            and all(v in attr.codomain for v in values.values()):
        # ordinal enum codomains order by declared position, worst first
        values = {k: attr.codomain.index(v) for k, v in values.items()}
    pairs = []
    for x in carrier:
        for y in carrier:
            if attr.scale == "nominal":
                if values[x] == values[y]:
                    pairs.append((x, y))
            elif attr.higher_is_better:
                if values[x] >= values[y]:
                    pairs.append((x, y))
            else:
                if values[x] <= values[y]:
                    pairs.append((x, y))
    return relation(carrier, pairs)


def compute_partition(session: Session) -> Partition:
    """Aggregate the per-attribute relations by majority and solve the
    session's problem statement on the incumbent alternatives."""
    rels = [_attribute_relation(a, session.alternatives)
            for a in session.attributes]
    joint = aggregate_majority(rels, threshold=0.5)
    kind = session.statement.kind
    if kind == "clustering":
        k = session.statement.class_count or 2
        return solve_clustering(joint, min(k, len(joint.carrier)))
    return solve_ranking(joint, class_count=session.statement.class_count)


def _queue_satisfaction(session: Session) -> None:
    part = compute_partition(session)
    session.current_partition = part
    session.pending.append(OracleQuery(
        kind=SATISFACTION,
        key=f"{session.iteration}:satisfaction",
        payload={"classes": [sorted(c) for c in part.classes],
                 "ordered": part.ordered},
    ))


def start(session: Session) -> Session:
    if session.status == RUNNING and not session.pending \
            and session.current_partition is None:
        _queue_satisfaction(session)
    return session


def _serialized_partition(part: Partition) -> list[list[str]]:
    return [sorted(c) for c in part.classes]


def _extend(session: Session) -> None:
    """Apply staged proposals: prune to kept classes, then grow D and/or
    the variables space; new alternatives descend from kept classes."""
    part = session.current_partition
    kept = session._kept_classes
    if kept is None:
        kept = list(range(len(part.classes)))
    keep_elems = set()
    parent_class: dict[str, int] = {}
    for idx in kept:
        for e in part.classes[idx]:
            keep_elems.add(e)
            parent_class[e] = idx
    survivors = [a for a in session.alternatives if a.key in keep_elems]

    if session._staged_attribute is not None:
        spec = session._staged_attribute
        session.attributes.append(attribute_from_spec(spec))

    if session._staged_variable is not None:
        spec = session._staged_variable
        var = variable_from_spec(spec)
        session.variables.append(var)
        extended = []
        lineage = {}
        for alt in survivors:
            for value in var.values():
                new = Alternative(alt.names + (var.name,),
                                  alt.values + (value,))
                extended.append(new)
                lineage[new.key] = parent_class[alt.key]
        session.alternatives = extended
        session.lineage = lineage
    else:
        session.alternatives = survivors
        session.lineage = {a.key: parent_class[a.key] for a in survivors}

    session._staged_attribute = None
    session._staged_variable = None
    session._kept_classes = None


def attribute_from_spec(spec: dict) -> Attribute:
    return Attribute(
        name=spec["name"],
        scale=spec.get("scale", "ordinal"),
        codomain=tuple(spec.get("codomain", ())),
        origin=spec.get("origin", "value"),
        separable=bool(spec.get("separable", True)),
        evaluator=spec.get("evaluator"),
        higher_is_better=bool(spec.get("higher_is_better", True)),
    )


def variable_from_spec(spec: dict) -> Variable:
    domain = spec["domain"]
    if domain[0] == "enum":
        return Variable(spec["name"], ("enum", tuple(domain[1])))
    return Variable(spec["name"], tuple(domain))


def submit_answer(session: Session, key: str, answer) -> Session:
    """Consume the head of the pending queue; anything else is a protocol
    violation."""
    if session.status != RUNNING:
        raise ProtocolViolation(f"session is {session.status}")
    if not session.pending:
        raise ProtocolViolation("no question is pending")
    query = session.pending[0]
    if query.key != key:
        raise ProtocolViolation(
            f"answer for {key!r} but head of queue is {query.key!r}")

    # validate before dequeuing so a rejected answer leaves the question
    # pending and the session answerable
    if query.kind == SATISFACTION:
        if not isinstance(answer, dict) or "satisfied" not in answer:
            raise ProtocolViolation("satisfaction answer needs 'satisfied'")
    elif query.kind == PROPOSE_ATTRIBUTE:
        if not isinstance(answer, dict) or "name" not in answer:
            raise ProtocolViolation("attribute proposal needs a spec dict")
    elif query.kind == PROPOSE_VARIABLE:
        if not isinstance(answer, dict) or "domain" not in answer:
            raise ProtocolViolation("variable proposal needs a spec dict")
    else:
        raise ProtocolViolation(f"unexpected query kind {query.kind}")
    session.pending.pop(0)

    if query.kind == SATISFACTION:
        session.history.append({
            "iteration": session.iteration,
            "partition": _serialized_partition(session.current_partition),
            "answer": answer,
        })
        if answer["satisfied"]:
            session.status = SATISFIED
            return session
        session._kept_classes = answer.get("kept_classes")
        wants_attr = bool(answer.get("add_attribute"))
        wants_var = bool(answer.get("add_variable"))
        if not wants_attr and not wants_var:
            wants_attr = True  # refusing both would stall the loop
        if wants_attr:
            session.pending.append(OracleQuery(
                PROPOSE_ATTRIBUTE,
                f"{session.iteration}:propose_attribute"))
        if wants_var:
            session.pending.append(OracleQuery(
                PROPOSE_VARIABLE,
                f"{session.iteration}:propose_variable"))
        return session

    if query.kind == PROPOSE_ATTRIBUTE:
        session._staged_attribute = answer
    else:
        session._staged_variable = answer

    if not session.pending:
        _extend(session)
        session.iteration += 1
        if session.iteration >= session.max_iter:
            session.status = EXHAUSTED
        else:
            _queue_satisfaction(session)
    return session


def run_process(session: Session, oracle: Oracle,
                max_iter: int | None = None) -> tuple[Partition, Session]:
    """Pump oracle answers through the state machine until the client is
    satisfied or the iteration cap is reached."""
    if max_iter is not None:
        session.max_iter = max_iter
    if session.max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    start(session)
    while session.status == RUNNING and session.pending:
        query = session.pending[0]
        answer = oracle.ask(query.key, query.payload)
        submit_answer(session, query.key, answer)
    if session.status == RUNNING:
        # cap reached exactly at a satisfaction boundary
        session.status = EXHAUSTED
    return session.current_partition, session
