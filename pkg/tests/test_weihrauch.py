import json

import hypothesis
import hypothesis.strategies as st
import pytest

from degrees_kit import degrees as D
from degrees_kit import k2
from degrees_kit import weihrauch as W
from degrees_kit.fixtures import corpus, finite_realizers
from degrees_kit.pca import LambdaPca, PcaError
from degrees_kit.rsets import ALL, EMPTY, finite

P = LambdaPca()
K2P = k2.K2Pca()
N = [P.numeral(k) for k in range(4)]
ELEMS = N + [P.k, P.s, P.pair]
PASS = D.Witness(P.i, P.apply(P.k, P.i).value)  # l1 = I, l2 r = I


def one(k):
    return finite([N[k]])


s_theta = st.sampled_from([one(0), one(1), one(2), finite([N[0], N[1]]), ALL])


@st.composite
def s_table(draw):
    rs = draw(st.lists(st.sampled_from(ELEMS), min_size=1, max_size=4, unique_by=lambda e: P.key(e)))
    return W.table_predicate(P, [(r, draw(st.lists(s_theta, min_size=1, max_size=3))) for r in rs])


# ----------------------------------------------------------------------------
# the two built-ins over K2


def test_lpo_reduces_to_wlem():
    lpo, wlem = W.builtin_lpo(K2P), W.builtin_wlem(K2P)
    assert W.check_ext_reduction(lpo, wlem, W.lpo_wlem_witness(K2P)).holds


def test_wlem_does_not_reduce_to_lpo():
    lpo, wlem = W.builtin_lpo(K2P), W.builtin_wlem(K2P)
    assert W.check_ext_reduction(wlem, lpo, W.lpo_wlem_witness(K2P)).fails
    res = W.search_ext_reduction(wlem, lpo, search_depth=30)
    assert not res.found and res.verdict.fails
    assert "ℓ₂(α,b) = 0̄" in res.verdict.detail and "ℓ₂(α,b) = 1̄" in res.verdict.detail


def test_shape_of_the_built_ins():
    lpo, wlem = W.builtin_lpo(K2P), W.builtin_wlem(K2P)
    assert W.is_modest_ext(lpo).holds and W.is_dense_ext(lpo).holds
    assert W.is_modest_ext(wlem).fails and W.is_dense_ext(wlem).holds
    assert lpo.at(k2.Table({}, 0)) == [finite([K2P.numeral(0)])]
    assert lpo.at(k2.Table({3: 1}, 0)) == [finite([K2P.numeral(1)])]


def test_built_ins_need_k2():
    with pytest.raises(PcaError):
        W.builtin_lpo(P)


# ----------------------------------------------------------------------------
# table predicates


def test_pass_through_witness():
    f = W.table_predicate(P, [(N[0], [one(1)])])
    g = W.table_predicate(P, [(N[0], [one(1)])])
    assert W.check_ext_reduction(f, g, PASS).holds
    h = W.table_predicate(P, [(N[0], [one(2)])])
    assert W.check_ext_reduction(f, h, PASS).fails


def test_leaving_the_support_fails():
    f = W.table_predicate(P, [(N[0], [one(1)])])
    g = W.table_predicate(P, [(N[1], [one(1)])])
    assert W.check_ext_reduction(f, g, PASS).fails


def test_more_answers_on_the_right_help():
    # g offers two answer sets; l2 must serve every demanded set from one of them
    f = W.table_predicate(P, [(N[0], [one(0), one(1)])])
    g = W.table_predicate(P, [(N[0], [one(0), one(1)])])
    assert W.check_ext_reduction(f, g, PASS).holds
    single = W.table_predicate(P, [(N[0], [one(0)])])
    assert W.check_ext_reduction(f, single, PASS).fails


@hypothesis.given(s_table())
@hypothesis.settings(max_examples=60, deadline=None)
def test_reflexive_through_pass_witness(f):
    assert W.check_ext_reduction(f, f, PASS).holds


@hypothesis.given(s_table())
@hypothesis.settings(max_examples=60, deadline=None)
def test_instance_round_trip(f):
    back = W.from_instance(W.to_instance(f))
    assert W.same(back, f)


@hypothesis.given(s_table())
@hypothesis.settings(max_examples=60, deadline=None)
def test_json_round_trip(f):
    g = W.ext_from_json(json.loads(W.dumps(f)), P)
    assert W.same(f, g)
    assert W.dumps(g) == W.dumps(f)


@pytest.mark.parametrize("name", [n for n, phi in corpus(P).items() if finite_realizers(phi)])
def test_corpus_predicates_survive_the_round_trip(name):
    phi = corpus(P)[name]
    f = W.from_instance(phi)
    assert W.same(W.from_instance(W.to_instance(f)), f)


def test_bottom_has_no_extended_form():
    with pytest.raises(Exception):
        W.from_instance(corpus(P)["bottom"])


# ----------------------------------------------------------------------------
# ordinary predicates


def test_ordinary_embedding_round_trip():
    U = W.ord_table(P, [(N[0], one(1)), (N[1], finite([N[2], N[3]]))], probes=[P.k])
    f = W.embed_ordinary(U)
    assert W.is_modest_ext(f).holds and W.is_dense_ext(f).holds
    assert f.at(P.k) == []
    assert W.same_ord(W.project_ordinary(f), U)


def test_ordinary_reduction():
    U = W.ord_table(P, [(N[0], one(1))])
    V = W.ord_table(P, [(N[0], one(1))])
    assert W.check_ord_reduction(U, V, PASS).holds
    V2 = W.ord_table(P, [(N[0], one(2))])
    assert W.check_ord_reduction(U, V2, PASS).fails


def test_projection_needs_single_inhabited_sets():
    f = W.table_predicate(P, [(N[0], [one(0), one(1)])])
    with pytest.raises(Exception):
        W.project_ordinary(f)


# ----------------------------------------------------------------------------
# Church's thesis and relatives


def test_ct_in_the_term_model():
    ct = W.builtin_ct(P, [P.succ, P.k])
    succ_codes = ct.at(P.succ)
    assert len(succ_codes) == 1
    assert ct.at(P.k) == []


def test_ct_in_k2():
    ct = W.builtin_ct(K2P, [k2.Table({}, 0), k2.Programmed(P.succ)])
    assert ct.at(k2.Table({}, 0)) == [EMPTY]
    assert len(ct.at(k2.Programmed(P.succ))) == 1


def test_lem_and_medvedev_shapes():
    lem = W.builtin_lem(P, [EMPTY, one(0)])
    assert len(lem.at(P.k)) == 2
    T = W.builtin_medvedev_T(P, one(1))
    assert T.at(N[1]) == [ALL] and T.at(N[2]) == []
    star = W.builtin_medvedev_star(P, one(1))
    assert W.is_modest_ext(star).holds
