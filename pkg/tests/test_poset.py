import pytest
from helpers import brute_dimension, brute_le, brute_linear_extensions, poset_strategy
from hypothesis import given, settings
from hypothesis import strategies as st

from afbposet.errors import (
    CycleInCovers,
    NotALinearExtension,
    NotConnected,
    NotMinimal,
    PairNotIncomparable,
    PosetError,
    RedundantCover,
    SearchBudgetExceeded,
)
from afbposet.poset import (
    AlternatingCycle,
    Poset,
    Realizer,
    closure_from_covers,
    dimension_exact,
    dual,
    find_strict_alternating_cycle,
    incomparable_pairs,
    is_alternating_cycle,
    is_linear_extension,
    is_realizer,
    is_strict_alternating_cycle,
    reverse_set,
    standard_example,
    unfold,
)

CHAIN = Poset("abc", [("a", "b"), ("b", "c")])
ANTI = Poset("ab")
V = Poset("abc", [("a", "c"), ("b", "c")])


def test_closure_from_covers_is_transitive():
    P = closure_from_covers({("a", "b"), ("b", "c")})
    assert P.le("a", "c") and not P.le("c", "a")
    assert P.elements == ("a", "b", "c")


def test_bad_covers_rejected():
    with pytest.raises(CycleInCovers):
        Poset("ab", [("a", "b"), ("b", "a")])
    with pytest.raises(RedundantCover):
        Poset("abc", [("a", "b"), ("b", "c"), ("a", "c")])


def test_incomparable_pairs_examples():
    assert incomparable_pairs(CHAIN) == set()
    assert incomparable_pairs(ANTI) == {("a", "b"), ("b", "a")}
    assert incomparable_pairs(V) == {("a", "b"), ("b", "a")}


def test_reverse_set_antichain():
    assert reverse_set(ANTI, {("a", "b")}) == ("b", "a")
    cyc = reverse_set(ANTI, {("a", "b"), ("b", "a")})
    assert isinstance(cyc, AlternatingCycle) and len(cyc) == 2


def test_reverse_set_standard_example_cycle():
    S2 = standard_example(2)
    S = {("a1", "b1"), ("a2", "b2")}
    cyc = reverse_set(S2, S)
    assert isinstance(cyc, AlternatingCycle) and len(cyc) == 2
    assert set(cyc.pairs) <= S
    assert is_strict_alternating_cycle(S2, cyc.pairs)
    found = find_strict_alternating_cycle(S2, S)
    assert found is not None and len(found) == 2


def test_reverse_set_rejects_comparable_pair():
    with pytest.raises(PairNotIncomparable):
        reverse_set(CHAIN, {("a", "b")})
    with pytest.raises(PairNotIncomparable):
        find_strict_alternating_cycle(CHAIN, {("c", "a")})


def test_find_cycle_trivial_cases():
    assert find_strict_alternating_cycle(V, set()) is None
    assert find_strict_alternating_cycle(CHAIN, set()) is None


def test_is_realizer_examples():
    assert is_realizer(CHAIN, Realizer([("a", "b", "c")]))
    assert is_realizer(V, Realizer([("a", "b", "c"), ("b", "a", "c")]))
    assert not is_realizer(V, Realizer([("a", "b", "c")]))
    with pytest.raises(NotALinearExtension) as err:
        is_realizer(V, Realizer([("a", "b", "c"), ("c", "a", "b")]))
    assert err.value.index == 1


def test_s3_has_no_two_realizer():
    S3 = standard_example(3)
    exts = list(brute_linear_extensions(S3))
    assert not any(is_realizer(S3, [L1, L2]) for L1 in exts for L2 in exts)


def test_dimension_examples():
    assert dimension_exact(CHAIN) == 1
    assert dimension_exact(ANTI) == 2
    assert dimension_exact(standard_example(3)) == 3
    assert dimension_exact(standard_example(4)) == 4


def test_dimension_guards():
    with pytest.raises(SearchBudgetExceeded):
        dimension_exact(standard_example(6), max_inc=10)
    assert dimension_exact(standard_example(4), max_k=3) is None


def test_standard_example_shape():
    S2 = standard_example(2)
    assert S2.elements == ("a1", "a2", "b1", "b2")
    assert S2.covers == {("a1", "b2"), ("a2", "b1")}
    S3 = standard_example(3)
    assert len(S3) == 6 and len(S3.covers) == 6
    with pytest.raises(PosetError):
        standard_example(1)


def test_unfold_examples():
    assert unfold(V, "a").layers == (frozenset("a"), frozenset("c"), frozenset("b"))
    assert unfold(Poset("ab", [("a", "b")]), "a").layers == (frozenset("a"), frozenset("b"))
    assert unfold(Poset("a"), "a").layers == (frozenset("a"),)
    with pytest.raises(NotMinimal):
        unfold(V, "c")
    with pytest.raises(NotConnected):
        unfold(ANTI, "a")


def test_dual_examples():
    assert dual(Poset("ab", [("a", "b")])).covers == {("b", "a")}
    L = dual(V)
    assert L.minimal_elements() == ("c",) and set(L.maximal_elements()) == {"a", "b"}
    assert dual(dual(V)) == V


def test_poset_json_round_trip():
    assert Poset.from_dict(V.to_dict()) == V


# -- properties against brute force ----------------------------------------


@settings(max_examples=60, deadline=None)
@given(poset_strategy(6))
def test_le_matches_brute_closure(P):
    assert set(P.leq) == brute_le(P)


@settings(max_examples=80, deadline=None)
@given(poset_strategy(6), st.data())
def test_reverse_set_xor_strict_cycle(P, data):
    inc = sorted(incomparable_pairs(P))
    S = set(data.draw(st.lists(st.sampled_from(inc), max_size=6))) if inc else set()
    res = reverse_set(P, S)
    found = find_strict_alternating_cycle(P, S)
    if isinstance(res, AlternatingCycle):
        assert found is not None
        assert set(res.pairs) <= S and is_strict_alternating_cycle(P, res.pairs)
        assert is_strict_alternating_cycle(P, found.pairs)
    else:
        assert found is None
        assert is_linear_extension(P, res)
        pos = {x: i for i, x in enumerate(res)}
        assert all(pos[x] > pos[y] for x, y in S)


@settings(max_examples=40, deadline=None)
@given(poset_strategy(6))
def test_dimension_matches_brute_and_dual(P):
    d = dimension_exact(P)
    assert d == brute_dimension(P)
    assert dimension_exact(dual(P)) == d


@settings(max_examples=40, deadline=None)
@given(poset_strategy(5), st.data())
def test_is_realizer_pairwise_definition(P, data):
    exts = list(brute_linear_extensions(P))
    R = data.draw(st.lists(st.sampled_from(exts), min_size=1, max_size=3))
    rel = brute_le(P)
    expect = all(
        ((x, y) in rel) == all(L.index(x) <= L.index(y) for L in R) for x in P.elements for y in P.elements
    )
    assert is_realizer(P, R) == expect


def test_alternating_cycle_predicates():
    S2 = standard_example(2)
    assert is_alternating_cycle(S2, [("a1", "b1"), ("a2", "b2")])
    assert not is_alternating_cycle(S2, [("a1", "b1")])
