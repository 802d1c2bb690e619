import hypothesis
import hypothesis.strategies as st
import pytest

from degrees_kit import degrees as D
from degrees_kit import logic as L
from degrees_kit.assemblies import nabla
from degrees_kit.fixtures import corpus
from degrees_kit.pca import LambdaPca
from degrees_kit.rsets import ALL, EMPTY, finite
from degrees_kit.smyth import classical_leq

P = LambdaPca()
C = corpus(P)
NAMES = [n for n in C if n != "bottom"]


def bool_pred(values):
    """Predicate on a nabla carrier with fibers ALL (true) or EMPTY (false)."""
    if not values:
        return L.bottom_predicate()
    S = nabla(P, list(range(len(values))))
    return L.RzPredicate(S, {i: ALL if v else EMPTY for i, v in enumerate(values)})


s_bools = st.lists(st.booleans(), max_size=3)


@hypothesis.given(s_bools, s_bools)
@hypothesis.settings(max_examples=80, deadline=None)
def test_two_valued_predicates_reduce_classically(a, b):
    phi, psi = bool_pred(a), bool_pred(b)
    expected = classical_leq(dict(enumerate(a)), dict(enumerate(b)))
    v = D.check_reduction(phi, psi, D.identity_witness(P))
    assert v.holds is expected
    if not expected:
        assert v.fails


@pytest.mark.parametrize("name", NAMES)
def test_identity_witness_is_reflexivity(name):
    assert D.check_reduction(C[name], C[name], D.identity_witness(P)).holds


@pytest.mark.parametrize("name", NAMES)
def test_bottom_is_least(name):
    bottom = C["bottom"]
    assert D.search_reduction(bottom, C[name]).found
    assert D.check_reduction(C[name], bottom, D.identity_witness(P)).fails
    assert not D.search_reduction(C[name], bottom).found


def test_wrong_witness_is_refuted():
    # split_N2 sends 0 and 1 to different fibers; swapping the points breaks it
    phi = C["split_N2"]
    swap = P.parse_element("(lam (s) (app s K (num 1) (num 0)))")
    v = D.check_reduction(phi, phi, D.Witness(swap, D.identity_witness(P).l2))
    assert v.fails


def test_search_finds_a_checked_witness():
    r = D.search_reduction(C["split_N2"], C["dense_N3"], search_depth=300)
    if r.found:
        assert D.check_reduction(C["split_N2"], C["dense_N3"], r.witness).holds


@pytest.mark.parametrize("a,b,c", [("split_N2", "split_N2", "split_N2"),
                                   ("zero_N1", "split_N2", "top_N2"),
                                   ("top_N2", "split_N2", "bot_N2")])
def test_composition_of_witnesses(a, b, c):
    w1 = D.search_reduction(C[a], C[b], search_depth=300, hints=[D.identity_witness(P)])
    w2 = D.search_reduction(C[b], C[c], search_depth=300, hints=[D.identity_witness(P)])
    assert w1.found and w2.found
    assert D.check_reduction(C[a], C[c], D.compose(P, w1.witness, w2.witness)).holds


# ----------------------------------------------------------------------------
# lattice structure


PAIRS = [("split_N2", "dense_N3"), ("tagged_N2", "zero_N1"), ("fun_N2", "mixed_nabla2"),
         ("union_N2", "two_one")]


@pytest.mark.parametrize("a,b", PAIRS)
def test_join_and_meet_bounds(a, b):
    phi, psi = C[a], C[b]
    sup, inf = D.sup2(phi, psi), D.inf2(phi, psi)
    inl, inr = D.inclusion_witnesses(P)
    assert D.check_reduction(phi, sup, inl).holds
    assert D.check_reduction(psi, sup, inr).holds
    pl, pr = D.projection_witnesses(P)
    assert D.check_reduction(inf, phi, pl).holds
    assert D.check_reduction(inf, psi, pr).holds


@pytest.mark.parametrize("a,b", PAIRS)
def test_universal_properties(a, b):
    phi, psi = C[a], C[b]
    i = D.identity_witness(P)
    sup, inf = D.sup2(phi, psi), D.inf2(phi, psi)
    inl, inr = D.inclusion_witnesses(P)
    pl, pr = D.projection_witnesses(P)
    # sup <= sup through the copairing of its own inclusions, likewise for inf
    assert D.check_reduction(sup, sup, D.copair_witness(P, inl, inr)).holds
    assert D.check_reduction(inf, inf, D.pair_witness(P, pl, pr)).holds
    assert D.check_reduction(phi, phi, i).holds


def test_distributivity():
    phi, psi, theta = C["split_N2"], C["zero_N1"], C["dense_nabla3"]
    lhs, rhs = D.distributivity_instance(phi, psi, theta)
    assert D.check_reduction(lhs, rhs, D.distributivity_witness(P)).holds


def test_family_infima_agree():
    fam = [C["split_N2"], C["zero_N1"]]
    simple, full = D.inf_family_simple(fam), D.inf_family(fam)
    to_full, to_simple = D.family_witnesses(P, 2)
    assert D.check_reduction(simple, full, to_full).holds
    assert D.check_reduction(full, simple, to_simple).holds
    for j in range(2):
        assert D.check_reduction(full, fam[j], D.family_projection_witness(P, j, 2)).holds


def test_family_size_guard():
    with pytest.raises(D.ResourceError):
        D.inf_family([C["parity_N4"]])


def test_sup_family_contains_members():
    fam = [C["split_N2"], C["two_one"], C["zero_N1"]]
    sup = D.sup_family(fam)
    assert len(sup.carrier) == sum(len(f.carrier) for f in fam)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_parameterized_power_is_equivalent(k):
    phi = C["split_N2"]
    assert D.check_reduction(phi, D.parameterize(phi, k), D.constant_tuple_witness(P, k)).holds


def test_currying():
    theta, phi = C["zero_N1"], C["split_N2"]
    psi = D.inf2(theta, phi)
    w = D.projection_witnesses(P)[0]  # theta ^ phi <= theta
    impl = D.curry_witness(theta, phi, w)
    assert D.check_witness(P, impl) is None
    assert D.check_witness(P, D.uncurry_witness(P, impl)) is None
    assert D.check_reduction(psi, theta, w).holds


# ----------------------------------------------------------------------------
# classification


def test_top_and_truth():
    assert D.is_top(D.top_degree(P)).holds
    assert D.is_top(D.true_one(P)).fails
    assert D.below_true_one(D.true_one(P)).holds
    assert D.below_true_one(C["bot_N2"]).fails


def test_embeddings_of_truth_values():
    assert D.embed_truth_monotone(P, EMPTY).is_bottom
    hat = D.embed_truth_anti(P, finite([P.k]))
    assert hat.at("*") == finite([P.k])


def test_classify_tags():
    tags = D.classify(C["dense_N3"], search_depth=200)
    assert tags["is_dense"].holds and tags["is_bottom"].fails


@hypothesis.given(st.dictionaries(st.integers(0, 5), st.booleans(), min_size=1, max_size=5))
def test_drinker_equivalence(values):
    assert D.drinker_check(values).holds
