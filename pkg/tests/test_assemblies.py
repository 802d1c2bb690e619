import json
import random

import hypothesis
import hypothesis.strategies as st
import pytest

from degrees_kit import assemblies as A
from degrees_kit import logic as L
from degrees_kit.fixtures import corpus
from degrees_kit.pca import LambdaPca
from degrees_kit.rsets import (ALL, EMPTY, Ctx, arrow, contains, finite, is_empty, meet, member,
                               paired, union)
from degrees_kit.suite import random_elements

import oracles

P = LambdaPca()
CTX = Ctx(P)
POOL = [P.numeral(k) for k in range(4)] + [P.k, P.s, P.pair, P.succ]


def el(text):
    return P.parse_element(text)


def oracle_apply(r, p):
    """Named-term application; None when it runs out of steps."""
    try:
        nf = oracles.normalize(("a", oracles.from_package(r), oracles.from_package(p)), budget=3000)
    except oracles.Diverged:
        return None
    return oracles.to_debruijn(nf)


def shape(e):
    return oracles.package_shape(e)


# ----------------------------------------------------------------------------
# finite realizer sets against explicit Python sets


@st.composite
def s_finite_expr(draw, depth=3):
    """A pair (package set, explicit frozenset of element shapes)."""
    kind = draw(st.sampled_from(["lit", "lit", "pair", "union", "meet"] if depth else ["lit"]))
    if kind == "lit":
        els = draw(st.lists(st.sampled_from(POOL), max_size=3))
        return finite(els), frozenset(shape(e) for e in els), els
    a = draw(s_finite_expr(depth - 1))
    b = draw(s_finite_expr(depth - 1))
    if kind == "pair":
        members = [P.make_pair(x, y) for x in a[2] for y in b[2]]
        return paired(P, a[0], b[0]), frozenset(shape(e) for e in members), members
    if kind == "union":
        return union(a[0], b[0]), a[1] | b[1], a[2] + b[2]
    members = [e for e in a[2] if shape(e) in b[1]]
    return meet(a[0], b[0]), a[1] & b[1], members


@hypothesis.given(s_finite_expr(), st.sampled_from(POOL))
@hypothesis.settings(max_examples=200, deadline=None)
def test_membership_of_finite_sets(expr, probe):
    R, explicit, members = expr
    for e in members + [probe]:
        assert contains(CTX, e, R) is (shape(e) in explicit)
    assert is_empty(R, CTX) is (not explicit)


@hypothesis.given(s_finite_expr(2), s_finite_expr(2), st.sampled_from(POOL + [P.i, P.fst]))
@hypothesis.settings(max_examples=150, deadline=None)
def test_arrow_membership_against_application(src, tgt, r):
    R = arrow(src[0], tgt[0])
    outs = [oracle_apply(r, p) for p in src[2]]
    v = member(CTX, r, R)
    if any(o is None for o in outs):
        assert not v.holds
        return
    assert v.holds is all(o in tgt[1] for o in outs)
    assert v.fails is (not all(o in tgt[1] for o in outs))


def test_empty_source_arrow_is_everything():
    assert arrow(EMPTY, finite([P.k])) is ALL


def test_all_and_empty():
    assert member(CTX, P.s, ALL).holds
    assert member(CTX, P.s, EMPTY).fails
    assert is_empty(ALL, CTX) is False


def test_symbolic_arrow_on_all():
    # K maps every input to a constant function, so it lands in ALL -> ALL
    assert member(CTX, P.k, arrow(ALL, ALL)).holds
    assert member(CTX, P.i, arrow(ALL, ALL)).holds
    assert member(CTX, P.k, arrow(ALL, finite([P.numeral(0)]))).fails


def test_generic_identity_into_the_same_set():
    R = paired(P, ALL, finite([P.numeral(1)]))
    assert member(CTX, P.i, arrow(R, R)).holds
    assert member(CTX, P.snd, arrow(R, finite([P.numeral(1)]))).holds
    assert member(CTX, P.fst, arrow(R, finite([P.numeral(1)]))).fails


# ----------------------------------------------------------------------------
# assemblies


def test_assemblies_reject_empty_points():
    with pytest.raises(A.AssemblyError):
        A.Assembly(P, [0, 1], {0: ALL, 1: EMPTY})
    with pytest.raises(A.AssemblyError):
        A.Assembly(P, [], {})
    with pytest.raises(A.AssemblyError):
        A.Assembly(P, [0, 0], {0: ALL})


def test_modest_and_partitioned():
    N3 = A.nat_assembly(P, 3)
    assert A.is_modest(N3).holds and A.is_partitioned(N3).holds
    nab = A.nabla(P, [0, 1])
    assert A.is_modest(nab).fails and A.is_partitioned(nab).fails
    fat = A.Assembly(P, [0, 1], {0: finite([P.numeral(0), P.numeral(2)]), 1: finite([P.numeral(1)])})
    assert A.is_modest(fat).holds and A.is_partitioned(fat).fails


def test_product_and_coproduct_shapes():
    N2, N3 = A.nat_assembly(P, 2), A.nat_assembly(P, 3)
    assert len(A.product(N2, N3)) == 6
    C = A.coproduct(N2, N3)
    assert len(C) == 5
    assert A.is_modest(C).holds
    inl, inr = A.inclusion_trackers(P)
    assert A.check_tracks(N2, C, lambda x: (0, x), inl).holds
    assert A.check_tracks(N3, C, lambda x: (1, x), inr).holds
    assert A.check_tracks(N3, C, lambda x: (0, x % 2), inr).fails


def test_successor_is_tracked():
    N2, N3 = A.nat_assembly(P, 2), A.nat_assembly(P, 3)
    assert A.check_tracks(N2, N3, lambda x: x + 1, P.succ).holds
    assert A.check_tracks(N2, N3, lambda x: x, P.succ).fails
    r = A.find_tracker(N2, N3, {0: 1, 1: 2}, search_depth=500)
    assert r is not None and A.check_tracks(N2, N3, {0: 1, 1: 2}, r).holds


def test_constant_maps_from_nabla():
    nab, N2 = A.nabla(P, [0, 1]), A.nat_assembly(P, 2)
    assert A.find_tracker(nab, N2, {0: 1, 1: 1}, search_depth=500) is not None
    # a tracker cannot tell the points of nabla apart
    assert A.check_tracks(nab, N2, {0: 0, 1: 1}, P.i).fails


def test_bounded_exponential_of_finite_sets():
    N2 = A.nat_assembly(P, 2)
    E = A.exponential_bounded(N2, N2, search_depth=300)
    assert set(E.carrier) == {(0, 0), (1, 1), (0, 1), (1, 0)}


def test_json_round_trip():
    S = A.Assembly(P, ["a", (0, 1)], {"a": finite([P.k]), (0, 1): paired(P, ALL, finite([P.s]))})
    obj = json.loads(json.dumps(A.assembly_to_json(S)))
    S2 = A.assembly_from_json(obj, P)
    assert S2.carrier == S.carrier
    assert all(S2.realize(x) == S.realize(x) for x in S.carrier)


# ----------------------------------------------------------------------------
# predicates and connectives


def test_connectives_on_finite_fibers():
    N2 = A.nat_assembly(P, 2)
    phi = L.RzPredicate(N2, {0: finite([P.numeral(0)]), 1: EMPTY})
    psi = L.RzPredicate(N2, {0: ALL, 1: finite([P.numeral(1)])})
    c = L.conj(phi, psi)
    assert c.at(1) is EMPTY
    d = L.disj(phi, psi)
    assert contains(CTX, P.make_pair(P.numeral(1), P.numeral(1)), d.at(1)) is True
    assert contains(CTX, P.make_pair(P.numeral(0), P.numeral(1)), d.at(1)) is False
    n = L.neg(phi)
    assert n.at(0) is EMPTY and n.at(1) is ALL
    assert L.dneg(phi).at(0) is ALL


def test_density():
    c = corpus(P)
    assert L.is_dense(c["dense_N3"]).holds
    assert L.is_dense(c["mixed_N3"]).fails
    assert L.is_dense(c["bottom"]).holds


@pytest.mark.parametrize("name", ["split_N2", "dense_N3", "tagged_N2", "parity_N4", "prod"])
def test_entailment_is_reflexive(name):
    phi = corpus(P)[name]
    assert L.leq_S(phi, phi, search_depth=400).holds


def test_entailment_fails_with_an_empty_target():
    c = corpus(P)
    assert L.leq_S(c["top_N2"], c["bot_N2"]).fails
    assert L.leq_S(c["bot_N2"], c["top_N2"], search_depth=50).holds


def test_equality_predicate():
    N2 = A.nat_assembly(P, 2)
    eq = L.eq_pred(N2)
    assert eq.at((0, 0)) is ALL and eq.at((0, 1)) is EMPTY


def test_predicate_json_round_trip():
    for name, phi in corpus(P).items():
        obj = json.loads(json.dumps(L.predicate_to_json(phi)))
        if phi.is_bottom:
            assert obj["bottom"]
            continue
        back = L.predicate_from_json(obj, P)
        assert back.carrier == phi.carrier
        assert all(back.at(x) == phi.at(x) for x in phi.carrier), name


@hypothesis.given(st.integers(0, 2 ** 32))
@hypothesis.settings(max_examples=50, deadline=None)
def test_pairs_of_members_realize_the_conjunction(seed):
    rng = random.Random(seed)
    els = random_elements(rng, 4)
    N2 = A.nat_assembly(P, 2)
    phi = L.RzPredicate(N2, {0: finite(els[:2]), 1: finite(els[1:3])})
    psi = L.RzPredicate(N2, {0: finite(els[2:]), 1: ALL})
    c = L.conj(phi, psi)
    for x in N2.carrier:
        for a in phi.at(x).elements:
            for b in (psi.at(x).elements if psi.at(x).finite else [P.k, a]):
                assert contains(CTX, P.make_pair(a, b), c.at(x)) is True


def test_constant_combinator_does_not_track_parity():
    N4, N2 = A.nat_assembly(P, 4), A.nat_assembly(P, 2)
    v = A.check_tracks(N4, N2, lambda x: x % 2, P.k)
    # K applied to a numeral is a constant function, never a numeral
    assert v.fails and v.data["point"] == 0
