import pytest

from decisionkit.errors import (AmbiguousAssignment, BadK, CapExceeded,
                                Infeasible, InvalidFixture, MalformedNorms)
from decisionkit.relations import relation
from decisionkit.solvers import (AssignmentRule, CoveringInstance,
                                 brute_force_covering, brute_force_ranking,
                                 disagreement_distance, optimize_covering,
                                 solve_assignment, solve_clustering,
                                 solve_rating, solve_ranking)


def weak(carrier, levels):
    return relation(carrier, [(x, y) for x, lx in zip(carrier, levels)
                              for y, ly in zip(carrier, levels) if lx <= ly])


def classes(part):
    return [sorted(c) for c in part.classes]


def test_ranking_repairs_and_peels():
    r = relation("abc", [("a", "b"), ("b", "c"), ("c", "a")])
    assert classes(solve_ranking(r)) == [["a"], ["b"], ["c"]]


def test_ranking_class_count_merges_trailing():
    r = weak(("a", "b", "c", "d"), (0, 1, 2, 3))
    part = solve_ranking(r, class_count=2)
    assert classes(part) == [["a"], ["b", "c", "d"]]
    assert classes(solve_ranking(r, class_count=9)) == [
        ["a"], ["b"], ["c"], ["d"]]


def test_ranking_matches_oracle_on_example():
    r = relation("abcd", [("a", "b"), ("b", "a"), ("c", "d")])
    assert classes(solve_ranking(r)) == classes(brute_force_ranking(r))


def test_ranking_falls_back_to_heuristic_beyond_cap():
    carrier = tuple(f"e{i}" for i in range(9))
    levels = tuple(range(9))
    part = solve_ranking(weak(carrier, levels))
    assert classes(part) == [[e] for e in carrier]


def test_rating_buckets_by_best_beaten_norm():
    r = relation(["x", "y", "z"],
                 [("x", "good"), ("x", "fair"), ("y", "fair")],
                 kind="absolute", norms=["good", "fair"])
    part = solve_rating(r, ["good", "fair"])
    assert classes(part) == [["x"], ["y"], ["z"]]
    assert part.ordered
    with pytest.raises(MalformedNorms):
        solve_rating(r, [])
    with pytest.raises(MalformedNorms):
        solve_rating(r, ["good", "good"])


def test_assignment_rules_and_unassigned():
    profiles = {"a": {"score": 9}, "b": {"score": 4}, "c": {"score": -1}}
    rules = [AssignmentRule("high", lambda p: p["score"] >= 8, priority=1),
             AssignmentRule("ok", lambda p: p["score"] >= 0)]
    part = solve_assignment(profiles, rules)
    assert not part.ordered
    assert dict(zip(part.labels, classes(part))) == {
        "high": ["a"], "ok": ["b"], "unassigned": ["c"]}


def test_assignment_same_priority_double_match_is_error():
    rules = [AssignmentRule("r1", lambda p: True),
             AssignmentRule("r2", lambda p: True)]
    with pytest.raises(AmbiguousAssignment):
        solve_assignment({"a": {}}, rules)


def test_disagreement_distance_symmetry():
    r = weak(("a", "b", "c", "d"), (0, 0, 1, 2))
    d = disagreement_distance(r)
    assert d[("a", "b")] == 0
    assert all(d[(x, y)] == d[(y, x)] for x in r.carrier for y in r.carrier)


def test_clustering_recovers_two_cliques():
    carrier = ("a", "b", "c", "d")
    pairs = {(x, y) for x in carrier for y in carrier
             if (x in "ab") == (y in "ab")}
    pairs |= {(x, y) for x in "ab" for y in "cd"}  # strict across cliques
    part = solve_clustering(relation(carrier, pairs), k=2)
    assert sorted(classes(part)) == [["a", "b"], ["c", "d"]]
    with pytest.raises(BadK):
        solve_clustering(relation(carrier, pairs), k=9)


def test_clustering_heuristic_beyond_cap():
    carrier = tuple(f"e{i}" for i in range(10))
    pairs = {(x, y) for x in carrier for y in carrier
             if (x < "e5") == (y < "e5")}
    part = solve_clustering(relation(carrier, pairs), k=2)
    assert len(part.classes) == 2


def test_covering_fixture_validation():
    with pytest.raises(InvalidFixture):
        CoveringInstance(((0, 1), (1, 1)))
    with pytest.raises(InvalidFixture):
        CoveringInstance(((1, 1), (1,)))
    with pytest.raises(InvalidFixture):
        CoveringInstance(((1,),), costs=(1.0, 2.0))


def test_covering_exact_matches_brute_force_on_micro_fixtures():
    p5 = CoveringInstance(tuple(
        tuple(1 if abs(i - j) <= 1 else 0 for j in range(5))
        for i in range(5)))
    assert optimize_covering(p5).o == brute_force_covering(p5).o == 2
    k4 = CoveringInstance(tuple(tuple(1 for _ in range(4))
                                for _ in range(4)))
    assert optimize_covering(k4).o == brute_force_covering(k4).o == 1


def test_covering_greedy_lowest_index_tie_break():
    k4 = CoveringInstance(tuple(tuple(1 for _ in range(4))
                                for _ in range(4)))
    sol = optimize_covering(k4, mode="greedy")
    assert sol.openings == (1, 0, 0, 0)


def test_covering_budget_infeasible():
    p5 = CoveringInstance(tuple(
        tuple(1 if abs(i - j) <= 1 else 0 for j in range(5))
        for i in range(5)), budget=1)
    with pytest.raises(Infeasible):
        optimize_covering(p5)


def test_max_cover_budget_is_lexicographic():
    p5 = CoveringInstance(tuple(
        tuple(1 if abs(i - j) <= 1 else 0 for j in range(5))
        for i in range(5)), mode="max_cover", budget=1)
    sol = optimize_covering(p5)
    assert sol.o == 1 and sol.c == 3
    brute = brute_force_covering(p5)
    assert (sol.c, sol.o) == (brute.c, brute.o)


def test_max_cover_target_infeasible():
    iso = CoveringInstance(((1, 0), (0, 1)), mode="max_cover", budget=1,
                           target=2)
    with pytest.raises(Infeasible):
        optimize_covering(iso)


def test_covering_exact_cap():
    n = 25
    adj = tuple(tuple(1 if i == j else 0 for j in range(n))
                for i in range(n))
    with pytest.raises(CapExceeded):
        optimize_covering(CoveringInstance(adj))
