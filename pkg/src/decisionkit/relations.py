"""Algebra of binary preference relations.

A Relation is a set of ordered pairs over an explicitly listed carrier.
Everything downstream (aggregation, solvers, the process loop) manipulates
relations through the pure functions in this module: decomposition into
strict / indifferent / incomparable parts, transitive closure, property
checks, nearest-total-preorder repair and level partitioning.

Conventions fixed here once, for the whole package:

* orientation: "best" means maximal under the relation read as
  "at least as good as"; cost-like dimensions are reversed by the caller.
* relations declared as weak preferences are reflexively closed on input
  where reflexivity matters (nearest_total_preorder).
* all tie-breaks are deterministic and lexicographic in carrier order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import CapExceeded, CyclicStrictPart, MalformedRelation

Pair = tuple[str, str]

RELATIVE = "relative"
ABSOLUTE = "absolute"
SECOND_ORDER = "second_order"

#: largest carrier for which the exact nearest-preorder search is allowed;
#: the number of weak orders grows super-exponentially past this point.
DEFAULT_EXACT_CAP = 8


@dataclass(frozen=True)
class Relation:
    """A named binary relation over an ordered carrier.

    ``kind`` is "relative" (pairs within the carrier), "absolute" (second
    endpoint may live in ``norms``) or "second_order" (carrier holds
    attribute names).
    """

    carrier: tuple[str, ...]
    pairs: frozenset[Pair]
    kind: str = RELATIVE
    norms: tuple[str, ...] = ()

    def __post_init__(self):
        seen = set()
        for e in self.carrier:
            if not e:
                raise MalformedRelation("empty element id in carrier")
            if e in seen:
                raise MalformedRelation(f"duplicate carrier element {e!r}")
            seen.add(e)
        allowed_second = seen | set(self.norms)
        for x, y in self.pairs:
            if x not in seen and not (self.kind == ABSOLUTE and x in allowed_second):
                raise MalformedRelation(f"pair endpoint {x!r} not in carrier")
            if y not in allowed_second:
                raise MalformedRelation(f"pair endpoint {y!r} not in carrier")

    def has(self, x: str, y: str) -> bool:
        return (x, y) in self.pairs

    def with_pairs(self, pairs: Iterable[Pair]) -> "Relation":
        return Relation(self.carrier, frozenset(pairs), self.kind, self.norms)

    def restricted(self, keep: Iterable[str]) -> "Relation":
        keep_set = set(keep)
        carrier = tuple(e for e in self.carrier if e in keep_set)
        pairs = frozenset((x, y) for x, y in self.pairs
                          if x in keep_set and y in keep_set)
        return Relation(carrier, pairs, self.kind, self.norms)


def relation(carrier: Iterable[str], pairs: Iterable[Pair] = (),
             kind: str = RELATIVE, norms: Iterable[str] = ()) -> Relation:
    """Convenience constructor accepting any iterables."""
    return Relation(tuple(carrier), frozenset(pairs), kind, tuple(norms))


@dataclass(frozen=True)
class PreferenceStructure:
    """The three-way split of a weak relation plus its incomparable pairs."""

    weak: Relation
    strict: Relation
    indifference: Relation
    incomparable: frozenset[frozenset[str]]


@dataclass(frozen=True)
class PropertyReport:
    reflexive: bool
    antisymmetric: bool
    transitive: bool
    complete: bool

    @property
    def partial_order(self) -> bool:
        return self.reflexive and self.antisymmetric and self.transitive

    @property
    def total_preorder(self) -> bool:
        return self.reflexive and self.transitive and self.complete


@dataclass(frozen=True)
class Partition:
    """Classes over a carrier, optionally ordered best-first.

    ``class_order`` relates class indices (as decimal strings); it is the
    natural order of indices when ``ordered`` and empty otherwise.
    """

    classes: tuple[frozenset[str], ...]
    ordered: bool = False
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        seen: set[str] = set()
        for cls in self.classes:
            if not cls:
                raise MalformedRelation("empty partition class")
            if seen & cls:
                raise MalformedRelation("overlapping partition classes")
            seen |= cls
        if self.labels is not None and len(self.labels) != len(self.classes):
            raise MalformedRelation("label count does not match class count")

    @property
    def carrier(self) -> frozenset[str]:
        out: set[str] = set()
        for cls in self.classes:
            out |= cls
        return frozenset(out)

    @property
    def class_order(self) -> Relation:
        idx = tuple(str(i) for i in range(len(self.classes)))
        if not self.ordered:
            return relation(idx, [])
        pairs = [(str(i), str(j)) for i in range(len(idx))
                 for j in range(len(idx)) if i <= j]
        return relation(idx, pairs)

    def class_of(self, element: str) -> int:
        for i, cls in enumerate(self.classes):
            if element in cls:
                return i
        raise KeyError(element)


def _require_relative(r: Relation) -> None:
    if r.kind != RELATIVE:
        raise MalformedRelation(f"expected a relative relation, got {r.kind}")


def reflexive_closure(r: Relation) -> Relation:
    _require_relative(r)
    return r.with_pairs(set(r.pairs) | {(e, e) for e in r.carrier})


def decompose(r: Relation) -> PreferenceStructure:
    """Split a weak relation into strict, indifferent and incomparable parts.

    The input pairs are taken literally: diagonal pairs, when present, land
    in the indifference part; missing off-diagonal pairs in both directions
    become incomparable.
    """
    _require_relative(r)
    strict = frozenset((x, y) for x, y in r.pairs if (y, x) not in r.pairs)
    indiff = frozenset((x, y) for x, y in r.pairs if (y, x) in r.pairs)
    incomp = frozenset(
        frozenset((x, y))
        for i, x in enumerate(r.carrier)
        for y in r.carrier[i + 1:]
        if (x, y) not in r.pairs and (y, x) not in r.pairs
    )
    return PreferenceStructure(
        weak=r,
        strict=r.with_pairs(strict),
        indifference=r.with_pairs(indiff),
        incomparable=incomp,
    )


def transitive_closure(r: Relation) -> Relation:
    """Smallest transitive superset of r on the same carrier (Warshall)."""
    _require_relative(r)
    n = len(r.carrier)
    index = {e: i for i, e in enumerate(r.carrier)}
    adj = [[False] * n for _ in range(n)]
    for x, y in r.pairs:
        adj[index[x]][index[y]] = True
    for k in range(n):
        row_k = adj[k]
        for i in range(n):
            if adj[i][k]:
                row_i = adj[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    pairs = frozenset((r.carrier[i], r.carrier[j])
                      for i in range(n) for j in range(n) if adj[i][j])
    return r.with_pairs(pairs)


def check_properties(r: Relation) -> PropertyReport:
    _require_relative(r)
    c = r.carrier
    p = r.pairs
    reflexive = all((e, e) in p for e in c)
    antisymmetric = all(not ((x, y) in p and (y, x) in p)
                        for i, x in enumerate(c) for y in c[i + 1:])
    transitive = all((x, z) in p
                     for x, y in p for y2, z in p if y == y2)
    complete = all((x, y) in p or (y, x) in p
                   for i, x in enumerate(c) for y in c[i + 1:])
    return PropertyReport(reflexive, antisymmetric, transitive, complete)


def symmetric_difference_distance(a: Relation, b: Relation) -> int:
    """Kemeny-style distance: cardinality of the pair-set symmetric difference."""
    return len(a.pairs ^ b.pairs)


def _level_relation(carrier: tuple[str, ...], levels: tuple[int, ...]) -> Relation:
    pairs = frozenset((x, y)
                      for i, x in enumerate(carrier)
                      for j, y in enumerate(carrier)
                      if levels[i] <= levels[j])
    return relation(carrier, pairs)


def _iter_level_assignments(n: int):
    """Yield every surjective level assignment in lexicographic tuple order.

    A tuple t of length n with values forming {0..k-1} for some k encodes a
    total preorder: t[i] is element i's level, 0 best. Lexicographic yield
    order implements the package-wide deterministic tie-break.
    """
    levels = [0] * n

    def rec(i: int, used: set[int], max_used: int):
        if i == n:
            if max_used >= 0 and len(used) == max_used + 1:
                yield tuple(levels)
            return
        remaining = n - i
        for v in range(n):
            new_max = max(max_used, v)
            new_used = used | {v}
            # every level 0..new_max must still be reachable
            gaps = (new_max + 1) - len(new_used)
            if gaps <= remaining - 1:
                levels[i] = v
                yield from rec(i + 1, new_used, new_max)
        levels[i] = 0

    if n == 0:
        yield ()
        return
    yield from rec(0, set(), -1)


def nearest_total_preorder(r: Relation, mode: str = "exact",
                           exact_cap: int = DEFAULT_EXACT_CAP) -> Relation:
    """Total preorder minimizing symmetric-difference distance to r.

    Exact mode searches every weak order on the carrier (capped); heuristic
    mode orders elements by Copeland score (wins minus losses of the strict
    part). The input is reflexively closed first, as it stands for a weak
    preference. Among equally distant optima the one with the
    lexicographically smallest level tuple in carrier order wins.
    """
    _require_relative(r)
    closed = reflexive_closure(r)
    n = len(r.carrier)
    if mode == "exact":
        if n > exact_cap:
            raise CapExceeded(
                f"carrier size {n} exceeds exact cap {exact_cap}")
        best_levels: tuple[int, ...] | None = None
        best_dist = None
        for levels in _iter_level_assignments(n):
            cand = _level_relation(r.carrier, levels)
            d = symmetric_difference_distance(cand, closed)
            if best_dist is None or d < best_dist:
                best_dist = d
                best_levels = levels
        assert best_levels is not None
        return _level_relation(r.carrier, best_levels)
    if mode == "heuristic":
        strict = decompose(closed).strict.pairs
        score = {e: 0 for e in r.carrier}
        for x, y in strict:
            score[x] += 1
            score[y] -= 1
        distinct = sorted(set(score.values()), reverse=True)
        rank = {s: i for i, s in enumerate(distinct)}
        levels = tuple(rank[score[e]] for e in r.carrier)
        return _level_relation(r.carrier, levels)
    raise ValueError(f"unknown mode {mode!r}")


def _strict_cycle(carrier: tuple[str, ...], strict: frozenset[Pair]) -> bool:
    out = {e: [] for e in carrier}
    indeg = {e: 0 for e in carrier}
    for x, y in strict:
        out[x].append(y)
        indeg[y] += 1
    queue = [e for e in carrier if indeg[e] == 0]
    seen = 0
    while queue:
        e = queue.pop()
        seen += 1
        for y in out[e]:
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    return seen != len(carrier)


def maximal_elements(r: Relation) -> frozenset[str]:
    """Elements with nothing strictly above them.

    The caller must repair cyclic strict parts (nearest_total_preorder)
    first; a cycle makes "maximal" meaningless here.
    """
    _require_relative(r)
    strict = decompose(r).strict.pairs
    if _strict_cycle(r.carrier, strict):
        raise CyclicStrictPart("strict part contains a cycle")
    dominated = {y for _, y in strict}
    return frozenset(e for e in r.carrier if e not in dominated)


def levels_partition(r: Relation) -> Partition:
    """Peel maximal elements repeatedly; class 1 best, last class worst."""
    _require_relative(r)
    classes: list[frozenset[str]] = []
    current = r
    while current.carrier:
        top = maximal_elements(current)
        classes.append(top)
        current = current.restricted(set(current.carrier) - top)
    return Partition(tuple(classes), ordered=True)


def all_total_preorders(carrier: tuple[str, ...]):
    """Every total preorder on the carrier, lexicographic by level tuple."""
    for levels in _iter_level_assignments(len(carrier)):
        yield _level_relation(carrier, levels)
