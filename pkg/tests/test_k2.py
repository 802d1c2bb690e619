import hypothesis
import hypothesis.strategies as st

from degrees_kit import k2
from degrees_kit import terms as T
from degrees_kit.numbering import encode_seq
from degrees_kit.pca import FuelExhausted, LambdaPca, Undefined
from degrees_kit.suite import identity_point, successor_of_head

P = LambdaPca()
K2 = k2.K2Pca()


def oracle_apply(table, default, beta, n, limit=6):
    """Protocol run straight from a dict: scan prefixes of beta.

    Keys code sequences of length at most 4, so a longer query can only
    see the default.
    """
    prefix = []
    for k in range(limit):
        v = table.get(encode_seq([n, *prefix]), default)
        if v > 0:
            return v - 1, k
        prefix.append(beta[k])
    return None, None


s_beta = st.lists(st.integers(0, 3), min_size=6, max_size=6)


@st.composite
def s_table(draw):
    table = {}
    for _ in range(draw(st.integers(0, 6))):
        n = draw(st.integers(0, 3))
        prefix = draw(st.lists(st.integers(0, 3), max_size=3))
        table[encode_seq([n, *prefix])] = draw(st.integers(0, 5))
    return table, draw(st.integers(0, 3))


# ----------------------------------------------------------------------------
# lookups


def test_empty_table_is_zero():
    assert k2.k2_lookup(k2.Table({}, 0), 17).value == 0


def test_programmed_successor():
    prog = k2.Programmed(P.parse_element("(lam x (app succ x))"))
    assert k2.k2_lookup(prog, 4).value == 5


def test_divergent_program_exhausts_fuel():
    prog = k2.Programmed(P.parse_element("(lam x (app x (lam y (app y y)) (lam y (app y y))))"))
    assert isinstance(k2.k2_lookup(prog, 0, fuel=2000), FuelExhausted)


def test_non_numeral_program_is_undefined():
    assert isinstance(k2.k2_lookup(k2.Programmed(P.k), 0), Undefined)


def test_constant_zero_alpha_never_answers():
    assert isinstance(k2.k2_apply(k2.Table({}, 0), k2.const(1), 0, fuel=500), FuelExhausted)


def test_constant_alpha_answers_at_once():
    out = k2.k2_apply(k2.Table({}, 4), k2.const(0), 9)
    assert out.value == 3
    assert k2.trace(k2.Table({}, 4), k2.const(0), 9) == 0


# ----------------------------------------------------------------------------
# the protocol against the dict oracle


@hypothesis.given(s_table(), s_beta, st.integers(0, 3))
@hypothesis.settings(max_examples=300, deadline=None)
def test_protocol_matches_oracle(tab, beta_vals, n):
    table, default = tab
    beta = k2.Table(dict(enumerate(beta_vals)), 0)
    want, depth = oracle_apply(table, default, beta_vals, n)
    got = k2.k2_apply(k2.Table(table, default), beta, n, fuel=3000)
    if want is None:
        assert isinstance(got, FuelExhausted)
    else:
        assert got.value == want
        assert k2.trace(k2.Table(table, default), beta, n, fuel=3000) == depth


@hypothesis.given(s_table(), s_beta, s_beta, st.integers(0, 3))
@hypothesis.settings(max_examples=200, deadline=None)
def test_answers_depend_only_on_the_queried_prefix(tab, b1, b2, n):
    table, default = tab
    alpha = k2.Table(table, default)
    beta1 = k2.Table(dict(enumerate(b1)), 0)
    k = k2.trace(alpha, beta1, n, fuel=3000)
    hypothesis.assume(k is not None and k <= len(b1))
    mixed = k2.Table(dict(enumerate(b1[:k] + b2[k:])), 0)
    assert k2.k2_apply(alpha, beta1, n).value == k2.k2_apply(alpha, mixed, n).value


# ----------------------------------------------------------------------------
# natives and the algebra


def test_successor_of_head():
    f = successor_of_head()
    beta = k2.Table({0: 6, 1: 2}, 0)
    r = k2.lazy_app(f, beta)
    f_ = T.Fuel(1000)
    assert [r.at(i, f_) for i in range(3)] == [7, 7, 7]


def test_identity_point_returns_argument():
    beta = k2.Table({0: 3, 2: 8}, 1)
    assert k2.lazy_app(identity_point(), beta) is beta


def test_k_law():
    a, b = k2.const(4), k2.Table({0: 1}, 0)
    out = K2.apply_many(K2.k, a, b)
    assert out.converged and K2.equal(out.value, a)


def test_s_law_on_numerals():
    a = K2.apply(K2.k, K2.succ).value
    out = K2.apply_many(K2.s, a, K2.i, K2.numeral(5))
    assert K2.numeral_decode(out.value) == 6


def test_pairing():
    a, b = k2.const(2), k2.const(9)
    p = K2.make_pair(a, b)
    assert K2.numeral_decode(K2.proj_fst(p).value) == 2
    assert K2.numeral_decode(K2.proj_snd(p).value) == 9
    vals = K2.values(k2.Pair(a, b), 6)
    assert vals == [2, 9, 2, 9, 2, 9]


def test_sub_membership():
    assert k2.k2_in_subpca(k2.Programmed(P.i))
    assert not k2.k2_in_subpca(k2.Table({}, 0))
    assert k2.k2_in_subpca(K2.k)


def test_tables_never_equal_computable_points():
    assert K2.equal(k2.Table({}, 3), k2.const(3)) is False


def test_json_round_trip():
    for a in [k2.Table({0: 1, 5: 2}, 3), k2.Programmed(P.i), K2.k, k2.const(7)]:
        assert k2.from_json(k2.to_json(a)).key() == a.key()


def test_basis_is_computable():
    assert all(K2.in_sub(b) for b in K2.basis())
