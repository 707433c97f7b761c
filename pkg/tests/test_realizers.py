from fractions import Fraction as F

import pytest
from helpers import diamond, diamond_with_inner, draw, hat, load, vee, wraparound

from afbposet.embedding import EmbeddedDiagram
from afbposet.errors import IrreversibleSet, NotIncomparable, NotMinimal, NoZero
from afbposet.oracle import CorpusSpec, random_afb_diagram, random_zero_diagram
from afbposet.poset import (
    dimension_exact,
    incomparable_pairs,
    is_linear_extension,
    is_realizer,
    is_reversible,
)
from afbposet.realizers import (
    LABELS,
    MinPairAnalysis,
    classify_min_pair,
    cover_min_pairs,
    dfs_extension,
    min_profile,
    realize_afb,
    realize_planar_with_zero,
    realizer_from_dict,
    realizer_to_dict,
)

SHAPES = ("stacked", "grid", "wraparound")
CHAIN = draw({"a": (0, 0), "b": (1, 1), "c": (F(1, 2), 2)}, [("a", "b"), ("b", "c")])


def emb(d):
    return EmbeddedDiagram(d)


def test_dfs_extension_examples():
    c = emb(CHAIN)
    assert dfs_extension(c, "a", "left") == dfs_extension(c, "a", "right") == ("a", "b", "c")
    h = emb(hat())
    assert dfs_extension(h, "z", "left") == ("z", "a", "b")
    assert dfs_extension(h, "z", "right") == ("z", "b", "a")
    # t waits until both of its lower covers have been visited
    assert dfs_extension(emb(diamond_with_inner()), "z", "left") == ("z", "l", "m", "r", "t")


def test_zero_realizer_examples():
    R = realize_planar_with_zero(emb(CHAIN))
    assert len(R) == 3 and all(L == ("a", "b", "c") for L in R)
    e = emb(diamond())
    R = realize_planar_with_zero(e)
    assert len(R) == 3 and is_realizer(e.poset, R)
    L1, L2, _ = R.extensions
    assert any(L.index("l") > L.index("r") for L in (L1, L2))
    R = realize_planar_with_zero(emb(diamond_with_inner()))
    L3 = R.extensions[2]
    assert L3.index("m") > L3.index("t")
    with pytest.raises(NoZero):
        realize_planar_with_zero(emb(vee()))


def test_profile_examples():
    v = emb(vee())
    env = v.envelope_order()
    p = min_profile(v, env, "c")
    assert (p.M_y, p.lr_order, p.kind, p.a, p.b) == (("a", "b"), ("a", "b"), 1, "a", "b")
    p = min_profile(v, env, "a")
    assert p.M_y == ("a",) and p.kind == 1 and p.a == p.b == p.s == p.t == "a"
    w = emb(wraparound())
    env = w.envelope_order()
    assert env.order == ("m1", "m2", "m3")
    p = min_profile(w, env, "y")
    assert p.lr_order == ("m3", "m1") and (p.kind, p.j) == (2, 2)
    assert (p.a, p.b, p.s, p.t) == ("m1", "m3", "m3", "m1")


def test_label_examples():
    v = emb(vee())
    env = v.envelope_order()
    assert classify_min_pair(v, env, "a", "b").label == "1A"
    assert classify_min_pair(v, env, "b", "a").label == "1C"
    w = emb(wraparound())
    assert classify_min_pair(w, w.envelope_order(), "m2", "y").label == "2C"
    with pytest.raises(NotMinimal):
        classify_min_pair(v, env, "c", "a")
    with pytest.raises(NotIncomparable):
        classify_min_pair(v, env, "a", "c")


def test_cover_examples():
    fam = cover_min_pairs(emb(vee()))
    assert fam.sets == {"1A+2A": {("a", "b")}, "1C+2E": {("b", "a")}}
    assert realizer_to_dict(realize_afb(emb(vee()))[0])["extensions"]


def test_realize_afb_examples():
    R, prov = realize_afb(emb(CHAIN))
    assert len(R) == 1 and prov == {}
    e = emb(vee())
    R, prov = realize_afb(e)
    assert len(R) <= 6 and is_realizer(e.poset, R)
    assert dimension_exact(e.poset) == 2 <= len(R)


def test_realizer_json_round_trip():
    R, prov = realize_afb(emb(diamond_with_inner()))
    data = realizer_to_dict(R, prov)
    assert realizer_from_dict(data).extensions == R.extensions
    assert all(isinstance(k, int) for k in data["provenance"].values())


def _corpus(count, sizes):
    sizes = list(sizes)
    for s in range(count):
        yield s, random_afb_diagram(CorpusSpec(s, sizes[s % len(sizes)], SHAPES[s % 3]))


def test_profiles_labels_and_covers_on_corpus():
    for s, d in _corpus(60, range(3, 16)):
        e = emb(d)
        P = e.poset
        if not P.is_connected():
            continue
        an = MinPairAnalysis(e)
        L = an.L
        for y in P.elements:
            p = an.profile(y)
            if p.kind == 1:
                assert (p.a, p.b) == (p.s, p.t)
                assert [L[u] for u in p.lr_order] == sorted(L[u] for u in p.lr_order)
            else:
                assert L[p.a] <= L[p.t] < L[p.s] <= L[p.b]
        target = {(x, y) for x, y in incomparable_pairs(P) if P.is_minimal(x)}
        assert set(an.min_pairs()) == target
        for x, y in target:
            lab = an.label(x, y)
            assert lab.label in LABELS
            assert not (lab.left_biased and lab.right_biased)
        for mode, limit in (("five", 5), ("seven", 7)):
            fam = cover_min_pairs(e, mode=mode, analysis=an)
            assert fam.union() == target
            assert len(fam.sets) <= limit and all(fam.sets.values())
            for pairs in fam.sets.values():
                assert is_reversible(P, pairs)


def test_realize_afb_on_corpus_against_oracle():
    for s, d in _corpus(40, range(3, 13)):
        e = emb(d)
        P = e.poset
        for mode, limit in (("five", 6), ("seven", 8)):
            R, prov = realize_afb(e, mode=mode)
            assert len(R) <= limit and is_realizer(P, R)
            for L in R:
                assert is_linear_extension(P, L)
            for (x, y), k in prov.items():
                L = R.extensions[k]
                assert L.index(x) > L.index(y)
        if len(incomparable_pairs(P)) <= 60:
            assert dimension_exact(P) <= len(realize_afb(e)[0])


def test_zero_realizer_on_corpus():
    for s in range(40):
        e = emb(random_zero_diagram(s, 2 + s % 20))
        R = realize_planar_with_zero(e)
        assert len(R) == 3 and is_realizer(e.poset, R)


def test_five_mode_gap_is_reported_and_repaired():
    # a valid AFB drawing where the 2B+2D set holds an alternating cycle
    e = emb(load("five_mode_gap.json"))
    assert e.afb_check()[0]
    with pytest.raises(IrreversibleSet):
        cover_min_pairs(e, mode="five")
    fam = cover_min_pairs(e, mode="seven")
    assert all(is_reversible(e.poset, s) for s in fam.sets.values())
    R, _ = realize_afb(e)
    assert len(R) <= 6 and is_realizer(e.poset, R)
