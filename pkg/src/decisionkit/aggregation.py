"""Multi-dimensional preference aggregation.

The capability profile answers the five preconditions any aggregation has
to settle: are preference differences measurable per dimension, are they
commensurable across dimensions, are the dimensions preferentially
independent, are explicit negative statements in play, and which social
properties must the method satisfy. The dispatch table below maps each
answer combination to one of four archetypes:

    negatives present            -> veto_majority
    commensurable + independent  -> weighted_functional
    total importance order known -> lexicographic
    anything else                -> majority_relational

Anonymity, when required, forces equal weights / symmetric thresholds.
Majority output may be intransitive; transitivization is the solver's job.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .errors import (CarrierMismatch, NoAdmissibleArchetype,
                     NotCommensurable, NotRepresentable, NotTotalImportance,
                     UnconfiguredNode)
from .relations import (Pair, Relation, check_properties, decompose,
                        levels_partition, relation)

WEIGHTED_FUNCTIONAL = "weighted_functional"
MAJORITY_RELATIONAL = "majority_relational"
LEXICOGRAPHIC = "lexicographic"
VETO_MAJORITY = "veto_majority"


@dataclass(frozen=True)
class AggregationProfile:
    differences_measurable: tuple[bool, ...]
    commensurable: bool
    preferentially_independent: bool
    negative_preferences: bool
    required_properties: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.commensurable and not all(self.differences_measurable):
            raise NotCommensurable(
                "commensurability requires measurable differences on every "
                "dimension")


@dataclass(frozen=True)
class Aggregator:
    archetype: str
    weights: tuple[float, ...] | None = None
    importance_order: tuple[str, ...] | None = None
    threshold: float = 0.5
    vetoes: frozenset[Pair] = frozenset()


@dataclass(frozen=True)
class TreeNode:
    """A node of the dimension hierarchy. Leaves carry relations."""

    name: str
    tag: str = "value"  # value | opinion | scenario
    children: tuple["TreeNode", ...] = ()
    relation: Relation | None = None
    aggregator: Aggregator | None = None


@dataclass(frozen=True)
class DimensionTree:
    root: TreeNode
    joint_groups: tuple[frozenset[str], ...] = ()


@dataclass(frozen=True)
class DispatchRecord:
    """Structured log entry explaining an archetype decision."""

    archetype: str
    reasons: tuple[str, ...]


_dispatch_log: list[DispatchRecord] = []


def dispatch_log() -> tuple[DispatchRecord, ...]:
    return tuple(_dispatch_log)


def select_archetype(profile: AggregationProfile, base=None,
                     require: str | None = None) -> Aggregator:
    """Pick the archetype the profile admits (dispatch table in the module
    docstring); ``require`` forces one and fails loudly if inadmissible."""
    reasons = []
    total_importance = None
    if base is not None and base.derived_importance:
        total_importance = _total_importance_order(base)

    if require == WEIGHTED_FUNCTIONAL and not profile.commensurable:
        raise NoAdmissibleArchetype(
            "weighted_functional demanded but dimensions are not "
            "commensurable")
    if require == LEXICOGRAPHIC and total_importance is None:
        raise NoAdmissibleArchetype(
            "lexicographic demanded but no total importance order is known")

    if require:
        archetype = require
        reasons.append(f"forced: {require}")
    elif profile.negative_preferences:
        archetype = VETO_MAJORITY
        reasons.append("explicit negatives present: veto branch")
    elif profile.commensurable and profile.preferentially_independent:
        archetype = WEIGHTED_FUNCTIONAL
        reasons.append("commensurable and independent: trade-offs are sound")
    elif total_importance is not None:
        archetype = LEXICOGRAPHIC
        reasons.append("total importance order available")
    else:
        archetype = MAJORITY_RELATIONAL
        reasons.append("ordinal or incommensurable input: relational route")

    anonymity = "anonymity" in profile.required_properties
    if anonymity:
        reasons.append("anonymity required: symmetric parameters")
    n = len(profile.differences_measurable)
    weights = None
    if archetype == WEIGHTED_FUNCTIONAL:
        weights = tuple(1.0 / n for _ in range(n))
    agg = Aggregator(
        archetype=archetype,
        weights=weights,
        importance_order=total_importance,
        threshold=0.5,
    )
    _dispatch_log.append(DispatchRecord(archetype, tuple(reasons)))
    return agg


def _total_importance_order(base) -> tuple[str, ...] | None:
    """A total order over single dimensions implied by derived importance,
    if one exists."""
    singles = {next(iter(h)) for h, g in base.derived_importance
               if len(h) == 1} | \
              {next(iter(g)) for h, g in base.derived_importance
               if len(g) == 1}
    if not singles:
        return None
    beats = {(next(iter(h)), next(iter(g)))
             for h, g in base.derived_importance
             if len(h) == 1 and len(g) == 1}
    order = sorted(singles, key=lambda a: -sum(1 for x, y in beats if x == a))
    # total iff consecutive elements are actually ordered
    for a, b in zip(order, order[1:]):
        if (a, b) not in beats:
            return None
    return tuple(order)


def _common_carrier(relations: Sequence[Relation]) -> tuple[str, ...]:
    if not relations:
        raise CarrierMismatch("no relations to aggregate")
    carrier = relations[0].carrier
    for r in relations[1:]:
        if set(r.carrier) != set(carrier):
            raise CarrierMismatch("relations have different carriers")
    return carrier


def aggregate_majority(relations: Sequence[Relation], threshold: float = 0.5,
                       vetoes: frozenset[Pair] = frozenset()) -> Relation:
    """Pair survives iff enough dimensions support it and no veto hits it.

    The result may be intransitive; callers repair it with
    nearest_total_preorder when they need an ordering.
    """
    if not 0.5 <= threshold <= 1.0:
        raise ValueError("threshold must lie in [0.5, 1]")
    carrier = _common_carrier(relations)
    m = len(relations)
    pairs = set()
    for x in carrier:
        for y in carrier:
            if (x, y) in vetoes:
                continue
            support = sum(1 for r in relations if r.has(x, y))
            if support / m >= threshold:
                pairs.add((x, y))
    return relation(carrier, pairs)


def aggregate_weighted(functions: Sequence[Mapping[str, float] | Callable],
                       weights: Sequence[float],
                       commensurable: bool = True) -> Callable[[str], float]:
    """Weighted sum of per-dimension value functions."""
    if not commensurable:
        raise NotCommensurable(
            "weighted aggregation needs commensurable dimensions")
    if len(functions) != len(weights):
        raise ValueError("one weight per function required")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be non-negative")
    total = sum(weights)
    if abs(total - 1.0) > 1e-9:
        raise ValueError("weights must sum to 1")

    fns = [f if callable(f) else (lambda d: (lambda x: d[x]))(f)
           for f in functions]

    def combined(x: str) -> float:
        return sum(w * f(x) for w, f in zip(weights, fns))

    return combined


def aggregate_lexicographic(relations: Sequence[Relation]) -> Relation:
    """First non-indifferent dimension decides; input ordered most
    important first."""
    carrier = _common_carrier(relations)
    structures = [decompose(r) for r in relations]
    pairs = set((e, e) for e in carrier)
    for x in carrier:
        for y in carrier:
            if x == y:
                continue
            for s in structures:
                if s.strict.has(x, y):
                    pairs.add((x, y))
                    break
                if s.strict.has(y, x):
                    break
                # indifferent or incomparable here: next dimension decides
            else:
                pairs.add((x, y))  # indifferent everywhere
    return relation(carrier, pairs)


def aggregate_lexicographic_by_importance(relations: Mapping[str, Relation],
                                          base) -> Relation:
    """Order the per-dimension relations by derived importance, then fold
    lexicographically; a merely partial importance order is an error."""
    order = _total_importance_order(base)
    if order is None or set(order) != set(relations):
        raise NotTotalImportance(
            "derived importance does not totally order these dimensions")
    return aggregate_lexicographic([relations[d] for d in order])


def relation_from_function(f: Mapping[str, float],
                           carrier: Sequence[str] | None = None) -> Relation:
    carrier = tuple(carrier) if carrier is not None else tuple(f)
    pairs = [(x, y) for x in carrier for y in carrier if f[x] >= f[y]]
    return relation(carrier, pairs)


def function_from_relation(r: Relation) -> dict[str, float]:
    """Ordinal representation: higher level class, higher value."""
    report = check_properties(r)
    if not report.total_preorder:
        raise NotRepresentable("only total preorders admit an ordinal "
                               "representation")
    part = levels_partition(r)
    n = len(part.classes)
    out: dict[str, float] = {}
    for i, cls in enumerate(part.classes):
        for e in cls:
            out[e] = float(n - 1 - i)
    return out


def aggregate_hierarchy(tree: DimensionTree) -> Relation:
    """Fold the dimension hierarchy bottom-up to a single root relation.

    A node whose name heads a joint group aggregates all leaf relations in
    its subtree in one step (grouped levels are collapsed, as when
    preferential dependencies forbid stepwise aggregation).
    """
    joint_roots = {min(g, key=str): g for g in tree.joint_groups}

    def leaves_under(node: TreeNode) -> list[Relation]:
        if node.relation is not None:
            return [node.relation]
        out = []
        for c in node.children:
            out.extend(leaves_under(c))
        return out

    def apply(node: TreeNode, inputs: Sequence[Relation]) -> Relation:
        if len(inputs) == 1 and node.aggregator is None:
            return inputs[0]
        agg = node.aggregator
        if agg is None:
            raise UnconfiguredNode(f"node {node.name} has no aggregator")
        if agg.archetype in (MAJORITY_RELATIONAL, VETO_MAJORITY):
            return aggregate_majority(inputs, agg.threshold, agg.vetoes)
        if agg.archetype == LEXICOGRAPHIC:
            return aggregate_lexicographic(inputs)
        raise UnconfiguredNode(
            f"node {node.name}: archetype {agg.archetype} does not fold "
            "relations")

    def fold(node: TreeNode) -> Relation:
        if node.relation is not None:
            return node.relation
        if node.name in joint_roots:
            return apply(node, leaves_under(node))
        return apply(node, [fold(c) for c in node.children])

    return fold(tree.root)
