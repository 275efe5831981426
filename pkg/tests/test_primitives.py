import re

import pytest

from decisionkit.errors import (DependentDimensions, InconsistentStatements,
                                IntransitiveSwaps, UnknownReference)
from decisionkit.oracle import FunctionOracle
from decisionkit.primitives import (AttributeSetRef, ElementPairRef,
                                    ElementRef, ElementSetRef, NormRef,
                                    PreferenceStatement, PrimitiveBase,
                                    check_preferential_independence,
                                    check_separability,
                                    classify_preference_statement,
                                    compile_primitive_base, derive_importance,
                                    derive_value_function)
from decisionkit.formulation import Attribute

E = ElementRef


def test_statement_taxonomy():
    cases = [
        (PreferenceStatement(E("a"), E("b")), "first_order_relative"),
        (PreferenceStatement(E("a"), NormRef("good")),
         "first_order_absolute"),
        (PreferenceStatement(ElementSetRef(frozenset({"a", "b"})), E("c")),
         "extended"),
        (PreferenceStatement(ElementPairRef("a", "b"),
                             ElementPairRef("b", "c")), "intensity"),
        (PreferenceStatement(E("a"), E("b"), scope=("price", "speed")),
         "multi_attribute"),
        (PreferenceStatement(AttributeSetRef(frozenset({"price"})),
                             AttributeSetRef(frozenset({"speed"}))),
         "second_order"),
    ]
    for stmt, expected in cases:
        assert classify_preference_statement(stmt) == expected


def test_classification_resolves_references():
    with pytest.raises(UnknownReference):
        classify_preference_statement(
            PreferenceStatement(E("a"), E("zz")), carrier=("a", "b"))
    with pytest.raises(UnknownReference):
        classify_preference_statement(
            PreferenceStatement(E("a"), E("b"), scope=("mystery",)),
            carrier=("a", "b"), attributes=("price",))


def test_compile_parks_importance_and_intensity():
    statements = [
        PreferenceStatement(E("a"), E("b"), scope=("price",)),
        PreferenceStatement(AttributeSetRef(frozenset({"price"})),
                            AttributeSetRef(frozenset({"speed"}))),
        PreferenceStatement(ElementPairRef("a", "b"),
                            ElementPairRef("b", "c")),
    ]
    base, notes = compile_primitive_base(statements, carrier=("a", "b", "c"))
    assert ("a", "b") in base.per_dimension["price"]
    assert len(base.parked) == 2
    assert len(notes) == 2
    assert all("not a primitive" in n.reason for n in notes)
    assert not base.derived_importance


def test_explicit_negative_never_becomes_positive():
    statements = [
        PreferenceStatement(E("a"), E("b"), scope=("price",),
                            polarity="explicit_negative"),
        PreferenceStatement(E("b"), E("a"), scope=("price",)),
    ]
    base, _ = compile_primitive_base(statements, carrier=("a", "b"))
    assert ("a", "b") in base.negative_assertions["price"]
    assert ("a", "b") not in base.per_dimension["price"]


def test_contradictory_negative_raises_in_both_orders():
    positive = PreferenceStatement(E("a"), E("b"), scope=("price",))
    negative = PreferenceStatement(E("a"), E("b"), scope=("price",),
                                   polarity="explicit_negative")
    for order in ([positive, negative], [negative, positive]):
        with pytest.raises(InconsistentStatements):
            compile_primitive_base(order, carrier=("a", "b"))


def lex_base(profiles, primary="p", secondary="q"):
    """Primitive base whose joint relation ranks by primary then secondary."""
    carrier = tuple(sorted(profiles))

    def rel(keyfn):
        return {(x, y) for x in carrier for y in carrier
                if keyfn(profiles[x]) >= keyfn(profiles[y])}

    base = PrimitiveBase(carrier=carrier)
    base.per_dimension[primary] = rel(lambda p: p[primary])
    base.per_dimension[secondary] = rel(lambda p: p[secondary])
    base.multi_attribute[frozenset({primary, secondary})] = rel(
        lambda p: (p[primary], p[secondary]))
    base.profiles = {e: dict(v) for e, v in profiles.items()}
    return base


def test_derive_importance_finds_planted_direction():
    base = lex_base({"a": {"p": 2, "q": 0}, "b": {"p": 1, "q": 3},
                     "c": {"p": 1, "q": 1}, "d": {"p": 0, "q": 2}})
    verdict = derive_importance(base, {"p"}, {"q"})
    assert verdict.direction == "left"
    x, y = verdict.witness
    assert base.profiles[x]["p"] > base.profiles[y]["p"]
    assert base.profiles[x]["q"] < base.profiles[y]["q"]
    assert (frozenset({"p"}), frozenset({"q"})) in base.derived_importance


def test_derive_importance_symmetric_data_is_incomparable():
    base = lex_base({"a": {"p": 2, "q": 2}, "b": {"p": 1, "q": 1},
                     "c": {"p": 0, "q": 0}})
    verdict = derive_importance(base, {"p"}, {"q"})
    assert verdict.direction == "incomparable"
    assert verdict.witness is None


def test_derive_importance_rejects_dependent_groups():
    # preference on p flips with the level of q
    profiles = {"a": {"p": 1, "q": 0}, "b": {"p": 0, "q": 0},
                "c": {"p": 1, "q": 1}, "d": {"p": 0, "q": 1}}
    carrier = ("a", "b", "c", "d")
    joint = {(x, x) for x in carrier}
    joint |= {("a", "b"), ("d", "c")}  # p-order reverses at q=1
    base = PrimitiveBase(carrier=carrier)
    base.per_dimension["p"] = {(x, x) for x in carrier}
    base.per_dimension["q"] = {(x, x) for x in carrier}
    base.multi_attribute[frozenset({"p", "q"})] = joint
    base.profiles = profiles
    with pytest.raises(DependentDimensions) as err:
        derive_importance(base, {"p"}, {"q"})
    assert err.value.implication is not None


def test_derive_importance_overlapping_groups_rejected():
    base = lex_base({"a": {"p": 1, "q": 0}, "b": {"p": 0, "q": 1}})
    with pytest.raises(UnknownReference):
        derive_importance(base, {"p"}, {"p", "q"})


def test_independence_verdicts():
    independent = lex_base({"a": {"p": 2, "q": 0}, "b": {"p": 1, "q": 0},
                            "c": {"p": 2, "q": 1}, "d": {"p": 1, "q": 1}})
    assert check_preferential_independence(
        independent, {"p"}, {"q"}).verdict == "independent"

    single_level = lex_base({"a": {"p": 2, "q": 0}, "b": {"p": 1, "q": 0}})
    assert check_preferential_independence(
        single_level, {"p"}, {"q"}).verdict == "inconclusive"


def test_independence_counterexample_quadruple():
    carrier = ("a", "b", "c", "d")
    profiles = {"a": {"p": 1, "q": 0}, "b": {"p": 0, "q": 0},
                "c": {"p": 1, "q": 1}, "d": {"p": 0, "q": 1}}
    joint = {(x, x) for x in carrier} | {("a", "b"), ("d", "c")}
    base = PrimitiveBase(carrier=carrier)
    base.multi_attribute[frozenset({"p", "q"})] = joint
    base.profiles = profiles
    verdict = check_preferential_independence(base, {"p"}, {"q"})
    assert verdict.verdict == "dependent"
    assert len(verdict.counterexample) == 4


def test_separability_verdicts():
    base = lex_base({"a": {"p": 1, "q": 5}, "b": {"p": 0, "q": 5}})
    assert check_separability("p", base).verdict == "true"

    # otherwise-identical pair observed, but joint says indifferent on p
    carrier = ("a", "b")
    flat = PrimitiveBase(carrier=carrier)
    flat.profiles = {"a": {"p": 1, "q": 5}, "b": {"p": 0, "q": 5}}
    flat.multi_attribute[frozenset({"p", "q"})] = {
        ("a", "a"), ("b", "b"), ("a", "b"), ("b", "a")}
    assert check_separability("p", flat).verdict == "false"

    no_pair = lex_base({"a": {"p": 1, "q": 5}, "b": {"p": 0, "q": 7}})
    assert check_separability("p", no_pair).verdict == "inconclusive"


# ---------------------------------------------------------------------------
# value functions

SWAP_RE = re.compile(r"^swap:(.+):(.+)->(.+)\|(.+)->(.+)$")


def affine_oracle(alpha, beta, tol=1e-12):
    def answer(key, payload):
        m = SWAP_RE.match(key)
        a, b, c, d = (float(g) for g in m.groups()[1:])
        gain = alpha * (b - a) - alpha * (d - c)
        if abs(gain) <= tol:
            return 0
        return 1 if gain > 0 else -1

    return FunctionOracle(answer)


def test_value_function_degenerate_codomains():
    base = PrimitiveBase(carrier=("a",))
    single = Attribute(name="flag", codomain=(7,))
    vf = derive_value_function(base, single, FunctionOracle(lambda k, p: 0))
    assert vf(7.0) == 0.0

    discrete = Attribute(name="grade", codomain=("bad", "ok", "good"))
    vf = derive_value_function(base, discrete,
                               FunctionOracle(lambda k, p: 0))
    assert [vf(float(i)) for i in range(3)] == [0.0, 1.0, 2.0]
    assert "grade" in base.derived_values


def test_value_function_linear_recovery():
    base = PrimitiveBase(carrier=("a",))
    attr = Attribute(name="u", codomain=(0.0, 16.0))
    vf = derive_value_function(base, attr, affine_oracle(3.0, -2.0))
    # linear planted function: equal value steps are equal length steps
    us = [u for u, _ in vf.points]
    widths = [b - a for a, b in zip(us, us[1:])]
    assert max(widths) - min(widths) < 1e-6
    assert vf(0.0) == 0.0 and vf(16.0) == 1.0
    assert abs(vf(8.0) - 0.5) < 1e-9


def test_value_function_cyclic_oracle_detected():
    def answer(key, payload):
        m = SWAP_RE.match(key)
        _, b, c, _ = (float(g) for g in m.groups()[1:])
        return 0 if b == c else 1  # every disjoint swap beats every other

    base = PrimitiveBase(carrier=("a",))
    attr = Attribute(name="u", codomain=(0.0, 1.0))
    with pytest.raises(IntransitiveSwaps):
        derive_value_function(base, attr, FunctionOracle(answer), grid=5)
