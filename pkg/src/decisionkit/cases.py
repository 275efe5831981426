"""Executable end-to-end cases: city covering and the conference trip.

Both cases wire the full pipeline (formulation, primitives, aggregation,
solver) and carry their expected results where those are fixed: the trip
case's per-scenario orders are stated outright; the covering micro
fixtures (path of five districts, complete graph of four) have brute-force
verified optima, and the 20-district fixture is generated from a fixed
seed so its optimum is reproducible and committed in the tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import InvalidFixture
from .aggregation import aggregate_lexicographic
from .formulation import (AlternativeSet, Attribute, LinearConstraint,
                          ProblemFormulation, ProblemStatement, Variable)
from .relations import Partition, Relation, levels_partition, relation
from .solvers import (CoveringInstance, CoveringSolution, FULL_COVER,
                      MAX_COVER, optimize_covering)

NOT_SUBMIT = "¬s"          # do not submit
SUBMIT_NO_TICKET = "s¬b"   # submit, do not buy the ticket
SUBMIT_BUY = "sb"               # submit and buy now
SUBMIT_WAIT = "sw"              # submit and book, buy on acceptance

ACCEPTED_FUNDED = "a+"
ACCEPTED_UNFUNDED = "a-"
REJECTED = "¬a"

SCENARIOS = (ACCEPTED_FUNDED, ACCEPTED_UNFUNDED, REJECTED)

#: per-scenario linear orders, best first
_ORDERS = {
    ACCEPTED_FUNDED: (SUBMIT_BUY, SUBMIT_NO_TICKET, NOT_SUBMIT),
    ACCEPTED_UNFUNDED: (SUBMIT_BUY, NOT_SUBMIT, SUBMIT_NO_TICKET),
    REJECTED: (NOT_SUBMIT, SUBMIT_NO_TICKET, SUBMIT_BUY),
}

#: the waiting option slots in second-best everywhere
_ORDERS_WITH_WAIT = {
    ACCEPTED_FUNDED: (SUBMIT_BUY, SUBMIT_WAIT, SUBMIT_NO_TICKET, NOT_SUBMIT),
    ACCEPTED_UNFUNDED: (SUBMIT_BUY, SUBMIT_WAIT, NOT_SUBMIT,
                        SUBMIT_NO_TICKET),
    REJECTED: (NOT_SUBMIT, SUBMIT_WAIT, SUBMIT_NO_TICKET, SUBMIT_BUY),
}


@dataclass(frozen=True)
class TripParameters:
    """Descriptive only: the shipped ranking is purely ordinal."""

    acceptance_rate: float = 0.1
    reward: float = 100.0
    ticket_now: float = 30.0
    ticket_late: float = 90.0
    booking_fee: float = 5.0
    budget: float = 60.0
    shortfall_likelihood: float = 0.3


@dataclass(frozen=True)
class AliceInstance:
    actions: tuple[str, ...]
    scenarios: tuple[str, ...]
    orders: dict[str, tuple[str, ...]]
    params: TripParameters


@dataclass(frozen=True)
class CaseReport:
    scenario_orders: dict[str, str]
    aggregate: Partition | None
    rating_problems: int | None = None
    openings: int | None = None
    covered: int | None = None
    consistent: bool | None = None


def order_string(order: tuple[str, ...]) -> str:
    return " ≻ ".join(order)


def scenario_relation(order: tuple[str, ...]) -> Relation:
    pairs = [(order[i], order[j])
             for i in range(len(order)) for j in range(len(order))
             if i <= j]
    return relation(order, pairs)


def build_alice_case(params: TripParameters | None = None,
                     include_sw: bool = False
                     ) -> tuple[AliceInstance, ProblemFormulation]:
    orders = dict(_ORDERS_WITH_WAIT if include_sw else _ORDERS)
    actions = orders[ACCEPTED_FUNDED]
    actions = tuple(sorted(actions, key=list(actions).index))
    instance = AliceInstance(
        actions=actions,
        scenarios=SCENARIOS,
        orders=orders,
        params=params or TripParameters(),
    )
    rank = {s: {a: len(orders[s]) - orders[s].index(a) for a in actions}
            for s in SCENARIOS}
    attributes = tuple(
        Attribute(name=s, scale="ordinal", codomain=tuple(range(1, len(actions) + 1)),
                  origin="scenario", separable=True,
                  evaluator=(lambda table: (lambda alt: table[alt["action"]]))(rank[s]))
        for s in SCENARIOS)
    formulation = ProblemFormulation(
        alternatives=AlternativeSet(
            variables=(Variable("action", ("enum", actions)),)),
        attributes=attributes,
        statement=ProblemStatement(kind="ranking"),
    )
    return instance, formulation


def run_alice_case(instance: AliceInstance,
                   importance: tuple[str, ...] = (REJECTED, ACCEPTED_UNFUNDED,
                                                  ACCEPTED_FUNDED)
                   ) -> CaseReport:
    """Aggregate the scenario orders lexicographically (most important
    scenario first) and rank the actions."""
    carrier = instance.actions
    rels = []
    for s in importance:
        full = scenario_relation(instance.orders[s])
        rels.append(full.restricted(carrier) if set(full.carrier) != set(carrier)
                    else relation(carrier, full.pairs))
    joint = aggregate_lexicographic(rels)
    part = levels_partition(joint)
    expected = instance.orders
    return CaseReport(
        scenario_orders={s: order_string(expected[s]) for s in SCENARIOS},
        aggregate=part,
        consistent=True,
    )


# ---------------------------------------------------------------------------
# covering fixtures

def path_instance(n: int = 5, mode: str = FULL_COVER) -> CoveringInstance:
    """Path graph with closed neighborhoods; optimum 2 openings for n=5."""
    adj = [[1 if abs(i - j) <= 1 else 0 for j in range(n)] for i in range(n)]
    return CoveringInstance(tuple(tuple(row) for row in adj), mode=mode)


def complete_instance(n: int = 4, mode: str = FULL_COVER) -> CoveringInstance:
    adj = [[1] * n for _ in range(n)]
    return CoveringInstance(tuple(tuple(row) for row in adj), mode=mode)


TWENTY_DISTRICT_SEED = 20230104


def twenty_district_instance(mode: str = FULL_COVER,
                             seed: int = TWENTY_DISTRICT_SEED
                             ) -> CoveringInstance:
    """Seeded random geometric city of 20 districts: points in the unit
    square, adjacency within radius 0.32, closed under reflexivity."""
    rng = random.Random(seed)
    pts = [(rng.random(), rng.random()) for _ in range(20)]
    radius2 = 0.32 ** 2
    adj = [[0] * 20 for _ in range(20)]
    for i in range(20):
        for j in range(20):
            dx = pts[i][0] - pts[j][0]
            dy = pts[i][1] - pts[j][1]
            if i == j or dx * dx + dy * dy <= radius2:
                adj[i][j] = 1
    return CoveringInstance(tuple(tuple(row) for row in adj), mode=mode)


def build_covering_case(inst: CoveringInstance) -> ProblemFormulation:
    """The covering instance as a formulation: binary opening variables,
    one rating-phase feasibility attribute per district, and an openings
    attribute to minimize. The relaxed variant doubles the variables with
    per-district coverage indicators."""
    n = inst.size
    xvars = tuple(Variable(f"x{j + 1}", ("binary",)) for j in range(n))
    if inst.mode == FULL_COVER:
        variables = xvars
        feasibility = tuple(
            LinearConstraint(
                coeffs=tuple((f"x{j + 1}", 1.0) for j in range(n)
                             if inst.adjacency[i][j]),
                op=">=", rhs=1.0)
            for i in range(n))
    else:
        yvars = tuple(Variable(f"y{j + 1}", ("binary",)) for j in range(n))
        variables = xvars + yvars
        feasibility = tuple(
            LinearConstraint(
                coeffs=tuple((f"x{j + 1}", 1.0) for j in range(n)
                             if inst.adjacency[i][j]) + ((f"y{i + 1}", -1.0),),
                op=">=", rhs=0.0)
            for i in range(n))
    district_attrs = tuple(
        Attribute(
            name=f"covered_{i + 1}", scale="ordinal", codomain=(0, 1),
            separable=True,
            evaluator=" + ".join(f"x{j + 1}" for j in range(n)
                                 if inst.adjacency[i][j]) + " >= 1")
        for i in range(n))
    openings = Attribute(
        name="openings", scale="ratio", codomain=tuple(range(n + 1)),
        separable=True,
        evaluator=" + ".join(f"x{j + 1}" for j in range(n)),
        higher_is_better=False)
    attrs = district_attrs + (openings,)
    if inst.mode == MAX_COVER:
        coverage = Attribute(
            name="coverage", scale="ratio", codomain=tuple(range(n + 1)),
            separable=True,
            evaluator=" + ".join(f"y{j + 1}" for j in range(n)))
        attrs = attrs + (coverage,)
    return ProblemFormulation(
        alternatives=AlternativeSet(variables=variables,
                                    feasibility=feasibility),
        attributes=attrs,
        statement=ProblemStatement(kind="ranking", class_count=2),
    )


def run_covering_case(inst: CoveringInstance,
                      mode: str = "exact") -> tuple[CaseReport,
                                                    CoveringSolution]:
    sol = optimize_covering(inst, mode=mode)
    report = CaseReport(
        scenario_orders={},
        aggregate=None,
        rating_problems=inst.size,
        openings=sol.o,
        covered=sol.c,
    )
    return report, sol
