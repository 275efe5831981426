"""Client preference statements and what can be derived from them.

Statements arrive pre-structured (no language parsing). The compiler sorts
them by taxonomy kind: first-order relative and absolute comparisons enter
the primitive base directly; importance ("dimension H matters more than G")
and intensity statements are parked as consistency constraints, because
both are derivable from first-order material — importance through witness
triples over independent dimension groups, intensity through the
indifference-swap construction of a value function.

Explicit negative statements are stored as such and never inferred as the
complement of missing positives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (DependentDimensions, InconsistentStatements,
                     IncompleteElicitation, IntransitiveSwaps,
                     UnknownReference)
from .oracle import Oracle
from .relations import Pair, PreferenceStructure, Relation, decompose, relation

FIRST_ORDER_RELATIVE = "first_order_relative"
FIRST_ORDER_ABSOLUTE = "first_order_absolute"
EXTENDED = "extended"
INTENSITY = "intensity"
MULTI_ATTRIBUTE = "multi_attribute"
SECOND_ORDER = "second_order"

TRUE = "true"
FALSE = "false"
INDEPENDENT = "independent"
DEPENDENT = "dependent"
INCONCLUSIVE = "inconclusive"

#: interval width at which a bisection query chain stops refining
SWAP_TOLERANCE = 1e-9


# ---------------------------------------------------------------------------
# operand references

@dataclass(frozen=True)
class ElementRef:
    name: str


@dataclass(frozen=True)
class NormRef:
    name: str


@dataclass(frozen=True)
class ElementSetRef:
    names: frozenset[str]


@dataclass(frozen=True)
class ElementPairRef:
    """An ordered pair (better, worse) used in intensity comparisons."""

    first: str
    second: str


@dataclass(frozen=True)
class AttributeSetRef:
    names: frozenset[str]


@dataclass(frozen=True)
class PreferenceStatement:
    left: object
    right: object
    scope: tuple[str, ...] = ()
    op: str = "weak"  # weak | strict | indifferent
    polarity: str = "positive"  # positive | explicit_negative


def classify_preference_statement(stmt: PreferenceStatement,
                                  carrier=None, norms=None,
                                  attributes=None) -> str:
    """Taxonomy kind of a statement, with optional reference resolution."""

    def check(ref):
        if carrier is None:
            return
        if isinstance(ref, ElementRef) and ref.name not in carrier:
            raise UnknownReference(f"unknown element {ref.name!r}")
        if isinstance(ref, NormRef) and norms is not None \
                and ref.name not in norms:
            raise UnknownReference(f"unknown norm {ref.name!r}")
        if isinstance(ref, ElementSetRef) and not ref.names <= set(carrier):
            raise UnknownReference("unknown element in set operand")
        if isinstance(ref, ElementPairRef) and \
                {ref.first, ref.second} - set(carrier):
            raise UnknownReference("unknown element in pair operand")
        if isinstance(ref, AttributeSetRef) and attributes is not None \
                and not ref.names <= set(attributes):
            raise UnknownReference("unknown attribute in operand")

    check(stmt.left)
    check(stmt.right)
    if attributes is not None:
        for a in stmt.scope:
            if a not in attributes:
                raise UnknownReference(f"unknown attribute {a!r} in scope")

    l, r = stmt.left, stmt.right
    if isinstance(l, AttributeSetRef) or isinstance(r, AttributeSetRef):
        return SECOND_ORDER
    if isinstance(l, ElementPairRef) or isinstance(r, ElementPairRef):
        return INTENSITY
    if isinstance(l, ElementSetRef) or isinstance(r, ElementSetRef):
        return EXTENDED
    if isinstance(l, NormRef) or isinstance(r, NormRef):
        return FIRST_ORDER_ABSOLUTE
    if len(stmt.scope) >= 2:
        return MULTI_ATTRIBUTE
    return FIRST_ORDER_RELATIVE


# ---------------------------------------------------------------------------
# the primitive base

@dataclass(frozen=True)
class ValueFunction:
    """Piecewise-linear interpolant over elicited (level, value) points.

    Unique up to positive affine transformation by construction.
    """

    points: tuple[tuple[float, float], ...]

    def __call__(self, u: float) -> float:
        pts = self.points
        if len(pts) == 1:
            return pts[0][1]
        if u <= pts[0][0]:
            return pts[0][1]
        for (a, va), (b, vb) in zip(pts, pts[1:]):
            if u <= b:
                if b == a:
                    return vb
                return va + (vb - va) * (u - a) / (b - a)
        return pts[-1][1]


@dataclass
class PrimitiveBase:
    """Everything compiled from client statements, per dimension.

    ``per_dimension`` and ``absolute`` hold weak-preference pair sets;
    ``multi_attribute`` keys are frozensets of attribute names; derived
    material (importance, value functions) is always marked as such and
    never accepted as raw input.
    """

    carrier: tuple[str, ...] = ()
    per_dimension: dict[str, set[Pair]] = field(default_factory=dict)
    absolute: dict[str, set[Pair]] = field(default_factory=dict)
    norms: dict[str, tuple[str, ...]] = field(default_factory=dict)
    multi_attribute: dict[frozenset, set[Pair]] = field(default_factory=dict)
    extended: dict[str, set[tuple[frozenset, frozenset]]] = field(default_factory=dict)
    derived_importance: set[tuple[frozenset, frozenset]] = field(default_factory=set)
    derived_values: dict[str, ValueFunction] = field(default_factory=dict)
    negative_assertions: dict[str, set[Pair]] = field(default_factory=dict)
    parked: list[tuple[PreferenceStatement, str]] = field(default_factory=list)
    profiles: dict[str, dict[str, object]] = field(default_factory=dict)
    _strict_converses: dict[str, set[Pair]] = field(default_factory=dict)

    def dimension_relation(self, attr: str) -> Relation:
        return relation(self.carrier, self.per_dimension.get(attr, set()))

    def dimension_structure(self, attr: str) -> PreferenceStructure:
        return decompose(self.dimension_relation(attr))

    def subset_relation(self, attrs: frozenset) -> Relation | None:
        """Relation over a dimension subset: recorded multi-attribute data
        for proper subsets, the per-dimension relation for singletons."""
        attrs = frozenset(attrs)
        if attrs in self.multi_attribute:
            return relation(self.carrier, self.multi_attribute[attrs])
        if len(attrs) == 1:
            (a,) = attrs
            if a in self.per_dimension:
                return self.dimension_relation(a)
        return None


@dataclass(frozen=True)
class RejectionNote:
    statement: PreferenceStatement
    reason: str


def _dim_key(stmt: PreferenceStatement) -> str:
    if not stmt.scope:
        raise UnknownReference("statement has no dimension scope")
    return stmt.scope[0]


def _insert_pairs(base: PrimitiveBase, store: dict, key, stmt,
                  x: str, y: str) -> None:
    pairs = store.setdefault(key, set())
    neg = base.negative_assertions.get(str(key), set())
    conv = base._strict_converses.setdefault(str(key), set())

    def add(a, b):
        if (a, b) in neg:
            raise InconsistentStatements(
                f"({a},{b}) contradicts a recorded explicit negative on {key}")
        if (a, b) in conv:
            raise InconsistentStatements(
                f"({a},{b}) contradicts an earlier strict statement on {key}")
        pairs.add((a, b))

    if stmt.op == "weak":
        add(x, y)
    elif stmt.op == "strict":
        add(x, y)
        if (y, x) in pairs:
            raise InconsistentStatements(
                f"strict ({x},{y}) contradicts recorded ({y},{x}) on {key}")
        conv.add((y, x))
    elif stmt.op == "indifferent":
        add(x, y)
        add(y, x)
    else:
        raise UnknownReference(f"unknown statement op {stmt.op!r}")


def compile_primitive_base(statements, carrier, norms=None,
                           profiles=None) -> tuple[PrimitiveBase, list[RejectionNote]]:
    """Build the primitive base from structured statements.

    Importance and intensity statements never become primitives: they are
    parked, to be checked later against derived importance / value
    functions. Explicit negatives are recorded separately and consistency-
    checked against positive assertions, in both insertion orders.
    """
    base = PrimitiveBase(carrier=tuple(carrier))
    if norms:
        base.norms = {k: tuple(v) for k, v in norms.items()}
    if profiles:
        base.profiles = {e: dict(v) for e, v in profiles.items()}
    report: list[RejectionNote] = []
    norm_names = {n for vs in base.norms.values() for n in vs}

    for stmt in statements:
        kind = classify_preference_statement(
            stmt, carrier=base.carrier, norms=norm_names or None)

        if kind in (SECOND_ORDER, INTENSITY):
            reason = ("not a primitive: importance is derivable from "
                      "first-order comparisons" if kind == SECOND_ORDER else
                      "not a primitive: intensity is derivable through "
                      "indifference swaps")
            base.parked.append((stmt, kind))
            report.append(RejectionNote(stmt, reason))
            continue

        if stmt.polarity == "explicit_negative":
            dim = _dim_key(stmt)
            x, y = stmt.left.name, stmt.right.name
            if (x, y) in base.per_dimension.get(dim, set()):
                raise InconsistentStatements(
                    f"negative ({x},{y}) contradicts recorded pair on {dim}")
            base.negative_assertions.setdefault(dim, set()).add((x, y))
            continue

        if kind == FIRST_ORDER_RELATIVE:
            dim = _dim_key(stmt)
            _insert_pairs(base, base.per_dimension, dim, stmt,
                          stmt.left.name, stmt.right.name)
        elif kind == FIRST_ORDER_ABSOLUTE:
            dim = _dim_key(stmt)
            _insert_pairs(base, base.absolute, dim, stmt,
                          stmt.left.name, stmt.right.name)
        elif kind == MULTI_ATTRIBUTE:
            key = frozenset(stmt.scope)
            _insert_pairs(base, base.multi_attribute, key, stmt,
                          stmt.left.name, stmt.right.name)
        elif kind == EXTENDED:
            dim = _dim_key(stmt)
            base.extended.setdefault(dim, set()).add(
                (frozenset(stmt.left.names), frozenset(stmt.right.names)))
        else:  # pragma: no cover - taxonomy is closed
            raise UnknownReference(f"unhandled statement kind {kind}")

    return base, report


# ---------------------------------------------------------------------------
# derivations

@dataclass(frozen=True)
class ImportanceVerdict:
    direction: str  # left | right | incomparable
    witness: Pair | None = None


def _status(rel: Relation, x: str, y: str) -> str:
    fwd, back = rel.has(x, y), rel.has(y, x)
    if fwd and back:
        return "~"
    if fwd:
        return ">"
    if back:
        return "<"
    return "?"


def derive_importance(base: PrimitiveBase, h, g) -> ImportanceVerdict:
    """Importance of dimension group H over G from witness triples.

    H outweighs G when some pair is weakly ordered one way on H, strictly
    the opposite way on G, yet strictly follows H on the joint relation.
    Requires preferential independence between the groups; a dependence is
    reported through DependentDimensions together with the implication
    found.
    """
    h, g = frozenset(h), frozenset(g)
    if h & g:
        raise UnknownReference("importance groups must be disjoint")
    verdict = check_preferential_independence(base, h, g)
    if verdict.verdict == DEPENDENT:
        raise DependentDimensions(
            "groups are preferentially dependent; no importance order "
            "can be derived", implication=verdict.counterexample)

    rel_h = base.subset_relation(h)
    rel_g = base.subset_relation(g)
    rel_hg = base.subset_relation(h | g)
    if rel_h is None or rel_g is None or rel_hg is None:
        return ImportanceVerdict("incomparable")

    def witness(first: Relation, second: Relation) -> Pair | None:
        for x in base.carrier:
            for y in base.carrier:
                if x == y:
                    continue
                if first.has(x, y) and _status(second, y, x) == ">" \
                        and _status(rel_hg, x, y) == ">":
                    return (x, y)
        return None

    w_h = witness(rel_h, rel_g)
    w_g = witness(rel_g, rel_h)
    if w_h and w_g:
        raise InconsistentStatements(
            "witnesses found in both directions; joint data is inconsistent")
    if w_h:
        base.derived_importance.add((h, g))
        return ImportanceVerdict("left", w_h)
    if w_g:
        base.derived_importance.add((g, h))
        return ImportanceVerdict("right", w_g)
    return ImportanceVerdict("incomparable")


@dataclass(frozen=True)
class IndependenceVerdict:
    verdict: str  # independent | dependent | inconclusive
    counterexample: tuple | None = None


def check_preferential_independence(base: PrimitiveBase, h, g) -> IndependenceVerdict:
    """Observational independence of preferences on H from levels of G.

    Looks at pairs agreeing on G but varying on H within the joint
    relation; independent iff the H-restricted comparison outcome is the
    same at every observed G-level. Needs some H-comparison observed at
    two distinct G-levels to conclude anything.
    """
    h, g = frozenset(h), frozenset(g)
    joint = base.subset_relation(h | g)
    if joint is None or not base.profiles:
        return IndependenceVerdict(INCONCLUSIVE)
    hk = tuple(sorted(h))
    gk = tuple(sorted(g))

    def prof(e, keys):
        p = base.profiles.get(e)
        if p is None:
            return None
        return tuple(p.get(k) for k in keys)

    seen: dict[tuple, dict[tuple, tuple]] = {}
    for x in base.carrier:
        for y in base.carrier:
            if x == y:
                continue
            px, py = prof(x, gk), prof(y, gk)
            if px is None or py is None or px != py:
                continue
            hx, hy = prof(x, hk), prof(y, hk)
            if hx == hy:
                continue
            status = _status(joint, x, y)
            if status == "?":
                continue
            level_map = seen.setdefault((hx, hy), {})
            if px in level_map:
                continue
            level_map[px] = (status, x, y)

    comparable = False
    for (hx, hy), levels in seen.items():
        if len(levels) < 2:
            continue
        comparable = True
        statuses = {s for s, _, _ in levels.values()}
        if len(statuses) > 1:
            items = sorted(levels.items(), key=lambda kv: str(kv[0]))
            picked = {}
            for _, (s, x, y) in items:
                picked.setdefault(s, (x, y))
            (x1, y1), (x2, y2) = list(picked.values())[:2]
            return IndependenceVerdict(DEPENDENT, (x1, y1, x2, y2))
    if not comparable:
        return IndependenceVerdict(INCONCLUSIVE)
    return IndependenceVerdict(INDEPENDENT)


@dataclass(frozen=True)
class SeparabilityVerdict:
    verdict: str  # true | false | inconclusive
    witness: Pair | None = None


def check_separability(attr: str, base: PrimitiveBase) -> SeparabilityVerdict:
    """Does attr ever discriminate two otherwise-identical alternatives?"""
    if not base.profiles or len(base.carrier) < 2:
        return SeparabilityVerdict(INCONCLUSIVE)
    others = sorted({a for p in base.profiles.values() for a in p} - {attr})
    joint = base.subset_relation(frozenset(others) | {attr})
    if joint is None:
        joint = base.subset_relation(frozenset({attr}))

    found_pair = False
    for i, x in enumerate(base.carrier):
        for y in base.carrier[i + 1:]:
            px, py = base.profiles.get(x), base.profiles.get(y)
            if px is None or py is None:
                continue
            if px.get(attr) == py.get(attr):
                continue
            if any(px.get(o) != py.get(o) for o in others):
                continue
            found_pair = True
            if joint is not None and _status(joint, x, y) in (">", "<"):
                return SeparabilityVerdict(TRUE, (x, y))
    if not found_pair:
        return SeparabilityVerdict(INCONCLUSIVE)
    return SeparabilityVerdict(FALSE)


# ---------------------------------------------------------------------------
# value function elicitation

def _swap_key(attr: str, a: float, b: float, c: float, d: float) -> str:
    return f"swap:{attr}:{a:.12g}->{b:.12g}|{c:.12g}->{d:.12g}"


def _compare_swaps(oracle: Oracle, attr: str, a, b, c, d) -> int:
    """Oracle verdict: is the preference gain of a->b smaller (-1), equal
    (0) or larger (+1) than the gain of c->d?"""
    ans = oracle.ask(_swap_key(attr, a, b, c, d))
    if ans not in (-1, 0, 1):
        raise IncompleteElicitation(f"non-ternary swap answer {ans!r}")
    return ans


def _find_midpoint(oracle: Oracle, attr: str, lo: float, hi: float) -> float:
    """Bisect for m with gain(lo->m) indifferent to gain(m->hi)."""
    a, b = lo, hi
    while b - a > SWAP_TOLERANCE:
        m = (a + b) / 2
        verdict = _compare_swaps(oracle, attr, lo, m, m, hi)
        if verdict == 0:
            return m
        if verdict < 0:  # lower half gains less: push m up
            a = m
        else:
            b = m
    return (a + b) / 2


def derive_value_function(base: PrimitiveBase, attr, oracle: Oracle,
                          grid: int = 9) -> ValueFunction:
    """Interval-scale value function from a standard swap sequence.

    For a numeric interval codomain, dyadic bisection builds at least
    ``grid`` equally-valued steps; each refinement level halves every
    step through midpoint queries. The result is unique up to positive
    affine transformation. A verification pass compares every constructed
    step against every other; strict answers forming a directed cycle
    reveal an intransitive oracle and raise IntransitiveSwaps (isolated
    strict answers are tolerated as discrimination-threshold noise).
    """
    name = attr if isinstance(attr, str) else attr.name
    codomain = attr.codomain if not isinstance(attr, str) else None
    if codomain is None:
        raise IncompleteElicitation(
            "derive_value_function needs the attribute object with codomain")
    if len(codomain) == 1:
        vf = ValueFunction(((float(codomain[0]), 0.0),))
        base.derived_values[name] = vf
        return vf
    if len(codomain) != 2 or not all(isinstance(v, (int, float))
                                     for v in codomain):
        # discrete ordinal codomain: level index is the (ordinal) value
        pts = tuple((float(i), float(i)) for i in range(len(codomain)))
        vf = ValueFunction(pts)
        base.derived_values[name] = vf
        return vf

    lo, hi = float(codomain[0]), float(codomain[1])
    if grid < 2:
        raise ValueError("grid must be at least 2")
    depth = max(1, math.ceil(math.log2(grid - 1)))
    points = [lo, hi]
    for _ in range(depth):
        refined = [points[0]]
        for a, b in zip(points, points[1:]):
            refined.append(_find_midpoint(oracle, name, a, b))
            refined.append(b)
        points = refined

    # consistency pass: strict step-vs-step answers must not form a cycle
    steps = list(zip(points, points[1:]))
    greater: dict[int, set[int]] = {i: set() for i in range(len(steps))}
    for i, (a, b) in enumerate(steps):
        for j, (c, d) in enumerate(steps):
            if i == j:
                continue
            if _compare_swaps(oracle, name, a, b, c, d) > 0:
                greater[i].add(j)

    def on_cycle(start: int) -> bool:
        stack, seen = [(start, iter(greater[start]))], {start}
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                continue
            if nxt == start:
                return True
            if nxt not in seen:
                seen.add(nxt)
                stack.append((nxt, iter(greater[nxt])))
        return False

    if any(on_cycle(i) for i in greater):
        raise IntransitiveSwaps(
            "oracle swap answers contain a strict preference cycle")

    n = len(points) - 1
    vf = ValueFunction(tuple((u, i / n) for i, u in enumerate(points)))
    base.derived_values[name] = vf
    return vf
