"""Partitioning procedures for the four problem statements, plus the
facility-covering optimizer and brute-force oracles used as test ground
truth.

Ranking and rating reduce to relation repair plus level peeling; assignment
is rule matching; clustering builds a disagreement distance from the
relation and optimizes a k-medoids fit. Tie-breaks are deterministic
everywhere (lexicographic level tuples, lowest index) so solver-vs-oracle
comparisons are exact equalities, not set membership.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .errors import (AmbiguousAssignment, BadK, CapExceeded, Infeasible,
                     InvalidFixture, MalformedNorms)
from .relations import (DEFAULT_EXACT_CAP, Partition, Relation, decompose,
                        levels_partition, nearest_total_preorder, relation,
                        symmetric_difference_distance, reflexive_closure,
                        _iter_level_assignments, _level_relation)

UNASSIGNED = "unassigned"


# ---------------------------------------------------------------------------
# ranking

def _merge_trailing(part: Partition, class_count: int) -> Partition:
    if class_count >= len(part.classes):
        return part
    head = part.classes[:class_count - 1]
    tail = frozenset().union(*part.classes[class_count - 1:])
    return Partition(head + (tail,), ordered=True)


def solve_ranking(r: Relation, class_count: int | None = None,
                  exact_cap: int = DEFAULT_EXACT_CAP) -> Partition:
    """Repair the relation to the nearest total preorder and peel levels.

    Exact repair up to the cap, Copeland heuristic beyond. With a class
    count, trailing classes merge into the last one; the two-class case is
    the "choice" statement: best class against the rest.
    """
    mode = "exact" if len(r.carrier) <= exact_cap else "heuristic"
    repaired = nearest_total_preorder(r, mode=mode, exact_cap=exact_cap)
    part = levels_partition(repaired)
    if class_count is not None:
        part = _merge_trailing(part, class_count)
    return part


def brute_force_ranking(r: Relation) -> Partition:
    """Independent ground truth: scan every ordered set partition, score by
    symmetric-difference distance, minimize (distance, level tuple)."""
    carrier = r.carrier
    closed = reflexive_closure(r)
    n = len(carrier)
    if n > 8:
        raise CapExceeded("oracle capped at 8 elements")
    best_key = None
    best_levels = None
    for k in range(1, n + 1):
        for assignment in itertools.product(range(k), repeat=n):
            if set(assignment) != set(range(k)):
                continue
            pairs = frozenset(
                (carrier[i], carrier[j])
                for i in range(n) for j in range(n)
                if assignment[i] <= assignment[j])
            d = len(pairs ^ closed.pairs)
            key = (d, assignment)
            if best_key is None or key < best_key:
                best_key = key
                best_levels = assignment
    classes = []
    for level in range(max(best_levels) + 1):
        classes.append(frozenset(carrier[i] for i in range(n)
                                 if best_levels[i] == level))
    return Partition(tuple(classes), ordered=True)


# ---------------------------------------------------------------------------
# rating

def solve_rating(absolute: Relation, norms: Sequence[str]) -> Partition:
    """Assign each element the highest class whose norm it weakly beats.

    ``norms`` are ordered best first; an element beating norm i (and no
    better one) lands in class i, elements beating none land below the
    worst norm. Empty classes are dropped.
    """
    if len(set(norms)) != len(norms) or not norms:
        raise MalformedNorms("norms must be a non-empty duplicate-free order")
    buckets: list[set[str]] = [set() for _ in range(len(norms) + 1)]
    for e in absolute.carrier:
        for i, nrm in enumerate(norms):
            if absolute.has(e, nrm):
                buckets[i].add(e)
                break
        else:
            buckets[-1].add(e)
    classes = tuple(frozenset(b) for b in buckets if b)
    return Partition(classes, ordered=True)


# ---------------------------------------------------------------------------
# assignment

@dataclass(frozen=True)
class AssignmentRule:
    name: str
    predicate: Callable[[Mapping[str, object]], bool]
    priority: int = 0


def solve_assignment(profiles: Mapping[str, Mapping[str, object]],
                     rules: Sequence[AssignmentRule]) -> Partition:
    """Place each element in the class of its highest-priority matching
    rule; same-priority double matches are a modelling error, unmatched
    elements go to an explicit "unassigned" class."""
    buckets: dict[str, set[str]] = {r.name: set() for r in rules}
    buckets[UNASSIGNED] = set()
    for element, profile in profiles.items():
        matches = [r for r in rules if r.predicate(profile)]
        if not matches:
            buckets[UNASSIGNED].add(element)
            continue
        top = max(r.priority for r in matches)
        winners = [r for r in matches if r.priority == top]
        if len(winners) > 1:
            raise AmbiguousAssignment(
                f"element {element!r} matches rules "
                f"{[r.name for r in winners]} at priority {top}")
        buckets[winners[0].name].add(element)
    labels, classes = [], []
    for name in [r.name for r in rules] + [UNASSIGNED]:
        if buckets[name]:
            labels.append(name)
            classes.append(frozenset(buckets[name]))
    return Partition(tuple(classes), ordered=False, labels=tuple(labels))


# ---------------------------------------------------------------------------
# clustering

def disagreement_distance(r: Relation) -> dict[tuple[str, str], int]:
    """d(x,y) = number of third elements z that x and y relate to
    differently (strictly-above / strictly-below / indifferent /
    incomparable)."""
    structure = decompose(r)
    strict = structure.strict.pairs

    def status(a, b):
        if (a, b) in strict:
            return ">"
        if (b, a) in strict:
            return "<"
        if structure.indifference.has(a, b):
            return "~"
        return "?"

    carrier = r.carrier
    d = {}
    for x in carrier:
        for y in carrier:
            d[(x, y)] = sum(1 for z in carrier
                            if z not in (x, y)
                            and status(x, z) != status(y, z))
    return d


def _rgs_strings(n: int, k: int):
    """Restricted growth strings with exactly k blocks (canonical partition
    encoding: block indices appear in first-occurrence order)."""
    code = [0] * n

    def rec(i: int, max_used: int):
        if i == n:
            if max_used == k - 1:
                yield tuple(code)
            return
        for v in range(min(max_used + 1, k - 1) + 1):
            code[i] = v
            yield from rec(i + 1, max(max_used, v))

    yield from rec(1, 0) if n else iter(())


def _partition_cost(carrier, code, dist) -> int:
    total = 0
    for block in range(max(code) + 1):
        members = [carrier[i] for i in range(len(carrier))
                   if code[i] == block]
        total += min(sum(dist[(x, m)] for x in members) for m in members)
    return total


def solve_clustering(r: Relation, k: int, exact_cap: int = 8,
                     seed: int = 0) -> Partition:
    """k-medoids over the preference-disagreement distance.

    Exact by exhaustion over canonical partitions up to the cap; beyond it
    a seeded medoid-swap heuristic. Ties resolve to the lexicographically
    smallest canonical partition encoding.
    """
    carrier = r.carrier
    n = len(carrier)
    if not 1 <= k <= n:
        raise BadK(f"k={k} out of range for {n} elements")
    dist = disagreement_distance(r)
    if n <= exact_cap:
        best = min(((code, _partition_cost(carrier, code, dist))
                    for code in _rgs_strings(n, k)),
                   key=lambda cv: (cv[1], cv[0]))
        code = best[0]
    else:
        code = _pam_heuristic(carrier, dist, k, seed)
    classes = tuple(frozenset(carrier[i] for i in range(n)
                              if code[i] == b)
                    for b in range(max(code) + 1))
    return Partition(classes, ordered=False)


def _pam_heuristic(carrier, dist, k, seed) -> tuple[int, ...]:
    import random
    rng = random.Random(seed)
    n = len(carrier)
    medoids = sorted(rng.sample(range(n), k))

    def assign(meds):
        code_raw = []
        for i in range(n):
            best_m = min(meds, key=lambda m: (dist[(carrier[i], carrier[m])], m))
            code_raw.append(best_m)
        # canonicalize to a restricted growth string
        remap: dict[int, int] = {}
        code = []
        for c in code_raw:
            if c not in remap:
                remap[c] = len(remap)
            code.append(remap[c])
        return tuple(code)

    def cost(meds):
        return sum(min(dist[(carrier[i], carrier[m])] for m in meds)
                   for i in range(n))

    improved = True
    while improved:
        improved = False
        current = cost(medoids)
        for mi, m in enumerate(list(medoids)):
            for cand in range(n):
                if cand in medoids:
                    continue
                trial = sorted(medoids[:mi] + [cand] + medoids[mi + 1:])
                if cost(trial) < current:
                    medoids = trial
                    current = cost(trial)
                    improved = True
    return assign(medoids)


def brute_force_clustering(r: Relation, k: int) -> Partition:
    """Independent ground truth: filter every assignment vector down to the
    canonical partitions, score with the same fitting function."""
    carrier = r.carrier
    n = len(carrier)
    if n > 8:
        raise CapExceeded("oracle capped at 8 elements")
    if not 1 <= k <= n:
        raise BadK(f"k={k} out of range")
    dist = disagreement_distance(r)
    best_key = None
    best_code = None
    for code in itertools.product(range(k), repeat=n):
        if code[0] != 0:
            continue
        # canonical: each block index must be preceded by all smaller ones
        seen_max = 0
        ok = True
        for c in code:
            if c > seen_max + 1:
                ok = False
                break
            seen_max = max(seen_max, c)
        if not ok or seen_max != k - 1:
            continue
        cost = _partition_cost(carrier, code, dist)
        key = (cost, code)
        if best_key is None or key < best_key:
            best_key = key
            best_code = code
    classes = tuple(frozenset(carrier[i] for i in range(n)
                              if best_code[i] == b)
                    for b in range(k))
    return Partition(classes, ordered=False)


# ---------------------------------------------------------------------------
# covering

FULL_COVER = "full_cover"
MAX_COVER = "max_cover"


@dataclass(frozen=True)
class CoveringInstance:
    """Facility covering over districts with a reflexive adjacency matrix.

    A facility in district j covers j itself and its adjacent districts;
    non-reflexive matrices are rejected because they make self-coverage
    ambiguous and full coverage potentially impossible.
    """

    adjacency: tuple[tuple[int, ...], ...]
    mode: str = FULL_COVER
    costs: tuple[float, ...] | None = None
    budget: float | None = None
    populations: tuple[float, ...] | None = None
    target: float | None = None

    def __post_init__(self):
        n = len(self.adjacency)
        for i, row in enumerate(self.adjacency):
            if len(row) != n:
                raise InvalidFixture("adjacency matrix must be square")
            if row[i] != 1:
                raise InvalidFixture(
                    f"adjacency must be reflexive (district {i})")
        if self.costs is not None and len(self.costs) != n:
            raise InvalidFixture("one cost per district required")
        if self.populations is not None and len(self.populations) != n:
            raise InvalidFixture("one population per district required")

    @property
    def size(self) -> int:
        return len(self.adjacency)

    def cover_masks(self) -> list[int]:
        """cover_masks[j] = bitmask of districts covered by opening j."""
        n = self.size
        masks = []
        for j in range(n):
            m = 0
            for i in range(n):
                if self.adjacency[i][j]:
                    m |= 1 << i
            masks.append(m)
        return masks


@dataclass(frozen=True)
class CoveringSolution:
    openings: tuple[int, ...]
    coverage: tuple[int, ...]
    o: int
    c: int


def _solution(inst: CoveringInstance, open_mask: int,
              masks: list[int]) -> CoveringSolution:
    n = inst.size
    covered = 0
    for j in range(n):
        if open_mask >> j & 1:
            covered |= masks[j]
    return CoveringSolution(
        openings=tuple(open_mask >> j & 1 for j in range(n)),
        coverage=tuple(covered >> i & 1 for i in range(n)),
        o=bin(open_mask).count("1"),
        c=bin(covered).count("1"),
    )


def _cost(inst: CoveringInstance, open_mask: int) -> float:
    if inst.costs is None:
        return bin(open_mask).count("1")
    return sum(inst.costs[j] for j in range(inst.size)
               if open_mask >> j & 1)


def _coverage_value(inst: CoveringInstance, covered: int) -> float:
    if inst.populations is None:
        return bin(covered).count("1")
    return sum(inst.populations[i] for i in range(inst.size)
               if covered >> i & 1)


def optimize_covering(inst: CoveringInstance,
                      mode: str = "exact") -> CoveringSolution:
    """Minimum openings covering every district (full_cover), or
    lexicographically maximum coverage then minimum openings (max_cover),
    honoring an opening budget when present.

    Exact search branches on the uncovered district with the fewest
    coverers; greedy repeatedly opens the district covering the most
    uncovered ones, lowest index first.
    """
    if inst.size > 24 and mode == "exact":
        raise CapExceeded("exact covering capped at 24 districts")
    masks = inst.cover_masks()
    if mode == "exact":
        open_mask = (_exact_full_cover(inst, masks)
                     if inst.mode == FULL_COVER
                     else _exact_max_cover(inst, masks))
    elif mode == "greedy":
        open_mask = _greedy_cover(inst, masks)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    sol = _solution(inst, open_mask, masks)
    if inst.mode == FULL_COVER and sol.c != inst.size:
        raise Infeasible("no affordable opening set covers every district")
    if inst.mode == MAX_COVER and inst.target is not None \
            and _coverage_value(inst, sum(masks[j] for j in range(inst.size)
                                          if sol.openings[j])) < inst.target:
        raise Infeasible("coverage target unreachable within budget")
    return sol


def _within_budget(inst: CoveringInstance, open_mask: int) -> bool:
    return inst.budget is None or _cost(inst, open_mask) <= inst.budget


def _exact_full_cover(inst: CoveringInstance, masks: list[int]) -> int:
    n = inst.size
    full = (1 << n) - 1
    coverers = [[j for j in range(n) if masks[j] >> i & 1] for i in range(n)]
    best: list = [None, n + 1]  # mask, opens

    def rec(covered: int, open_mask: int, opens: int):
        if opens >= best[1]:
            return
        if covered == full:
            best[0], best[1] = open_mask, opens
            return
        # branch on the uncovered district with fewest remaining coverers
        target = min((i for i in range(n) if not covered >> i & 1),
                     key=lambda i: len(coverers[i]))
        for j in coverers[target]:
            if open_mask >> j & 1:
                continue
            new_mask = open_mask | 1 << j
            if not _within_budget(inst, new_mask):
                continue
            rec(covered | masks[j], new_mask, opens + 1)

    rec(0, 0, 0)
    if best[0] is None:
        raise Infeasible("no affordable opening set covers every district")
    return best[0]


def _exact_max_cover(inst: CoveringInstance, masks: list[int]) -> int:
    """Lexicographic (max coverage, min openings) by depth-first search
    over include/exclude decisions with a coverage upper bound."""
    n = inst.size
    suffix_union = [0] * (n + 1)
    for j in range(n - 1, -1, -1):
        suffix_union[j] = suffix_union[j + 1] | masks[j]
    best: list = [-1, n + 1, 0]  # coverage count, opens, mask

    def rec(j: int, covered: int, open_mask: int, opens: int):
        potential = bin(covered | suffix_union[j]).count("1")
        current = bin(covered).count("1")
        if (potential, -opens) < (best[0], -best[1]):
            return
        if j == n:
            key = (current, -opens)
            if key > (best[0], -best[1]):
                best[0], best[1], best[2] = current, opens, open_mask
            return
        new_mask = open_mask | 1 << j
        if _within_budget(inst, new_mask):
            rec(j + 1, covered | masks[j], new_mask, opens + 1)
        rec(j + 1, covered, open_mask, opens)

    rec(0, 0, 0, 0)
    return best[2]


def _greedy_cover(inst: CoveringInstance, masks: list[int]) -> int:
    n = inst.size
    full = (1 << n) - 1
    covered = 0
    open_mask = 0
    while covered != full:
        gain, pick = 0, None
        for j in range(n):
            if open_mask >> j & 1:
                continue
            if not _within_budget(inst, open_mask | 1 << j):
                continue
            g = bin(masks[j] & ~covered & full).count("1")
            if g > gain:
                gain, pick = g, j
        if pick is None or gain == 0:
            break
        open_mask |= 1 << pick
        covered |= masks[pick]
    return open_mask


def brute_force_covering(inst: CoveringInstance) -> CoveringSolution:
    """Full subset enumeration ground truth (capped at 20 districts)."""
    n = inst.size
    if n > 20:
        raise CapExceeded("covering oracle capped at 20 districts")
    masks = inst.cover_masks()
    full = (1 << n) - 1
    best_key = None
    best_mask = 0

    def rec(j: int, covered: int, open_mask: int, opens: int):
        nonlocal best_key, best_mask
        if j == n:
            if not _within_budget(inst, open_mask):
                return
            if inst.mode == FULL_COVER:
                if covered != full:
                    return
                key = (opens, open_mask)
                better = best_key is None or key < best_key
            else:
                key = (bin(covered).count("1"), -opens, -open_mask)
                better = best_key is None or key > best_key
            if better:
                best_key = key
                best_mask = open_mask
            return
        rec(j + 1, covered | masks[j], open_mask | 1 << j, opens + 1)
        rec(j + 1, covered, open_mask, opens)

    rec(0, 0, 0, 0)
    if inst.mode == FULL_COVER and best_key is None:
        raise Infeasible("no subset covers every district")
    return _solution(inst, best_mask, masks)
