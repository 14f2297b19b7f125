import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pkn.errors import (DegenerateVector, EmptyReferenceClass, MissingTermBounds,
                        NonContiguousRange, OutOfRange, UnknownTerm)
from pkn.fuzzy import (MembershipVector, QuantifierThresholds, apply_modifier, build_range,
                       defuzzify, find_ranges, fuzzify, fuzzify_many, fuzzy_and, fuzzy_not,
                       fuzzy_or, make_range, membership, quantifier_holds)
from pkn.graph import KnowledgeGraph
from pkn.model import Name

AGE_TEXT = """\
range of age is infant, child, adult for person
age of infant is 0, 4 for person
age of child is 5, 17 for person
age of adult is 18, age-at-death for person
"""


@pytest.fixture
def age():
    return build_range(KnowledgeGraph.from_text(AGE_TEXT), "age", "person")


@pytest.fixture
def temperature():
    return make_range("temperature", [("cold", -10, 15), ("warm", 15, 25), ("hot", 25, 45)],
                      half_width=1.0)


def close(vec, expected):
    return np.allclose(vec.as_tuple() if isinstance(vec, MembershipVector) else vec,
                       expected, atol=1e-9)


# ------------------------------------------------------------------ ranges


def test_build_age_range(age):
    assert age.quantity == Name("age") and age.scope == Name("person")
    assert [(str(t.name), t.lower, t.upper) for t in age.terms] == [
        ("infant", 0, 4), ("child", 5, 17), ("adult", 18, 120)]
    assert age.boundaries.tolist() == [4.5, 17.5]
    assert np.allclose(age.half_widths, [0.4, 1.2])


def test_symbolic_bound_uses_ceiling():
    g = KnowledgeGraph.from_text(AGE_TEXT)
    assert build_range(g, "age", "person", ceiling=100).upper == 100
    assert build_range(g, "age", "person", symbols={"age-at-death": 90}).upper == 90


def test_missing_bounds():
    g = KnowledgeGraph.from_text(AGE_TEXT.replace("age of child is 5, 17 for person\n", ""))
    with pytest.raises(MissingTermBounds):
        build_range(g, "age", "person")


def test_missing_range_statement():
    with pytest.raises(MissingTermBounds):
        build_range(KnowledgeGraph.from_text("a likes b"), "age", "person")


def test_gap_of_two_is_non_contiguous():
    with pytest.raises(NonContiguousRange):
        make_range("age", [("infant", 0, 4), ("child", 6, 17)])


def test_overlapping_terms_are_non_contiguous():
    with pytest.raises(NonContiguousRange):
        make_range("age", [("infant", 0, 5), ("child", 4, 17)])


def test_find_ranges_one_per_scope():
    text = AGE_TEXT + ("range of age is puppy, dog for canine\n"
                       "age of puppy is 0, 1 for canine\nage of dog is 2, 15 for canine\n")
    ranges = find_ranges(KnowledgeGraph.from_text(text), "age")
    assert sorted(str(r.scope) for r in ranges) == ["canine", "person"]


def test_unknown_term(age):
    with pytest.raises(UnknownTerm):
        membership(age, "elderly", 50)


# -------------------------------------------------------------- fuzzify


def test_fuzzify_interior_value(age):
    assert close(fuzzify(age, 10), (0, 1, 0))


def test_temperature_crossfade(temperature):
    assert close(fuzzify(temperature, 25.8), (0, 0.1, 0.9))
    assert close(fuzzify(temperature, 25.6), (0, 0.2, 0.8))
    assert close(fuzzify(temperature, 25), (0, 0.5, 0.5))


def test_crossfade_matches_ramp(temperature):
    for v in np.linspace(23, 27, 41):
        assert membership(temperature, "hot", v) == pytest.approx(
            min(1, max(0, (v - 24) / 2)), abs=1e-9)


def test_out_of_range(age):
    with pytest.raises(OutOfRange):
        fuzzify(age, -1)
    with pytest.raises(OutOfRange):
        fuzzify(age, 121)


def test_membership_vector_indexing(age):
    mv = fuzzify(age, 4.5)
    assert mv["infant"] == pytest.approx(0.5) and mv[Name("child")] == pytest.approx(0.5)
    assert mv[2] == 0 and len(mv) == 3


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 120))
def test_fuzzify_normalized(v):
    rng = make_range("age", [("infant", 0, 4), ("child", 5, 17), ("adult", 18, 120)])
    m = fuzzify(rng, v)
    assert abs(sum(m) - 1) <= 1e-9
    assert all(0 <= x <= 1 for x in m)


# ------------------------------------------------------------ defuzzify


def test_defuzzify_examples(age):
    assert defuzzify(age, (0, 1, 0)) == 11
    assert defuzzify(age, (0.5, 0.5, 0)) == 6.5


def test_defuzzify_degenerate(age):
    with pytest.raises(DegenerateVector):
        defuzzify(age, (0, 0, 0))


def test_defuzzify_interior_round_trip(age):
    for v, mid in [(1, 2), (10, 11), (60, 69)]:
        assert defuzzify(age, fuzzify(age, v)) == mid


def test_defuzzify_monotone(age):
    values = np.linspace(0, 120, 4801)
    out = [defuzzify(age, m) for m in fuzzify_many(age, values)]
    assert all(b >= a - 1e-12 for a, b in zip(out, out[1:]))


# ---------------------------------------------------------- connectives


def test_connective_examples():
    assert fuzzy_and(0.2, 0.8) == 0.2
    assert fuzzy_or(0.2, 0.8) == 0.8
    assert fuzzy_not(fuzzy_not(0.3)) == pytest.approx(0.3)


_unit = st.floats(0, 1)


@settings(max_examples=200, deadline=None)
@given(_unit, _unit, _unit)
def test_connective_laws(a, b, c):
    assert fuzzy_and(a, a) == a and fuzzy_or(a, a) == a
    assert fuzzy_and(a, b) == fuzzy_and(b, a) and fuzzy_or(a, b) == fuzzy_or(b, a)
    assert fuzzy_and(a, fuzzy_and(b, c)) == fuzzy_and(fuzzy_and(a, b), c)
    assert fuzzy_or(a, fuzzy_or(b, c)) == fuzzy_or(fuzzy_or(a, b), c)
    assert fuzzy_not(fuzzy_and(a, b)) == pytest.approx(fuzzy_or(fuzzy_not(a), fuzzy_not(b)))
    assert fuzzy_not(fuzzy_or(a, b)) == pytest.approx(fuzzy_and(fuzzy_not(a), fuzzy_not(b)))


def test_connectives_vectorize():
    a, b = np.array([0.1, 0.7]), np.array([0.4, 0.2])
    assert fuzzy_and(a, b).tolist() == [0.1, 0.2]
    assert fuzzy_not(a) == pytest.approx([0.9, 0.3])


# ------------------------------------------------------------ modifiers


@pytest.fixture
def lifespan():
    return make_range("age", [("young", 0, 40), ("old", 41, 120)], "person")


def test_very_squares_membership(lifespan):
    mv = MembershipVector(lifespan.names, np.array([0.1, 0.9]))
    assert apply_modifier("very", lifespan, "old", mv) == pytest.approx(0.81)


def test_very_keeps_full_membership(lifespan):
    assert apply_modifier("very", lifespan, "old", 90) == 1.0


def test_modifiers_chain(lifespan):
    mv = MembershipVector(lifespan.names, np.array([0.1, 0.9]))
    assert apply_modifier("extremely:very", lifespan, "old", mv) == pytest.approx(0.9 ** 6)


def test_graph_definition_overrides_hedge(lifespan):
    g = KnowledgeGraph.from_text("age of very:old greater-than 75 for person")
    assert apply_modifier("very", lifespan, "old", 80, graph=g) == 1.0
    assert apply_modifier("very", lifespan, "old", 70, graph=g) == 0.0


def test_unknown_modifier(lifespan):
    with pytest.raises(UnknownTerm):
        apply_modifier("mostly", lifespan, "old", 50)


def test_modifier_on_unknown_term(lifespan):
    with pytest.raises(UnknownTerm):
        apply_modifier("very", lifespan, "ancient", 50)


# ----------------------------------------------------------- quantifiers


def test_quantifier_examples():
    assert quantifier_holds("few", 2, 10) == (True, 0.2)
    assert quantifier_holds("most", 8, 10) == (True, 0.8)
    assert quantifier_holds("few", 0, 10) == (False, 0.0)
    assert quantifier_holds("few", 5, 10).holds is False


def test_empty_reference_class():
    with pytest.raises(EmptyReferenceClass):
        quantifier_holds("many", 0, 0)


def test_where_count_above_from_count():
    with pytest.raises(ValueError):
        quantifier_holds("many", 11, 10)


def test_custom_thresholds():
    assert quantifier_holds("few", 3, 10, QuantifierThresholds(few=0.3)).holds


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 200).flatmap(lambda n: st.tuples(st.integers(0, n), st.just(n))))
def test_quantifiers_consistent(counts):
    w, n = counts
    few, many, most = (quantifier_holds(k, w, n).holds for k in ("few", "many", "most"))
    assert not most or many
    assert not few or not many
