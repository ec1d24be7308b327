from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from semigrowth import (AlphabetMismatch, Dfao, LinRep, Matrix, SeqVerdict, add, conv_oracle, convolve,
                        digit_sum, epsilon_indicator, eval_rep, from_dfao, growth_degree_seq,
                        is_tame_matrix, minimize, one, thue_morse, thue_morse_dfao)
from semigrowth.regseq import all_words, parse_word, seq_max_table
from semigrowth.tameness import products_up_to
from helpers import direct_eval, words

S2 = digit_sum()
TM = thue_morse()
ONE = one()
FIB = LinRep((1, 0), (Matrix([[1, 1], [1, 0]]), Matrix.identity(2)), (1, 0))
ZOO = {"one": ONE, "tm": TM, "s2": S2, "eps": epsilon_indicator()}


def s2_oracle(word):
    # symbol i stands for bit i - 1
    return sum(s - 1 for s in word)


def tm_oracle(word):
    return sum(s - 1 for s in word) % 2


def test_parse_word():
    assert parse_word("", 2) == ()
    assert parse_word("ε", 2) == ()
    assert parse_word("112", 2) == (1, 1, 2)
    assert parse_word("1,10", 10) == (1, 10)
    assert parse_word("01", 2, ("0", "1")) == (1, 2)
    with pytest.raises(ValueError):
        parse_word("3", 2)
    with pytest.raises(ValueError):
        parse_word("2", 2, ("0", "1"))


def test_all_words_shortlex():
    assert list(all_words(2, 2)) == [(), (1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2)]


def test_eval_examples():
    assert eval_rep(S2, "11") == 2
    assert eval_rep(S2, (2, 2)) == 2
    assert eval_rep(TM, (1, 1, 2)) == 1
    assert eval_rep(S2, ()) == 0
    for name, rep in ZOO.items():
        wv = sum(Fraction(a) * b for a, b in zip(rep.w, rep.v))
        assert eval_rep(rep, ()) == wv
    with pytest.raises(ValueError):
        eval_rep(S2, (3,))


def test_zoo_against_oracles():
    for u in words(2, 8):
        assert eval_rep(S2, u) == s2_oracle(u)
        assert eval_rep(TM, u) == tm_oracle(u)
        assert eval_rep(ONE, u) == 1
        assert eval_rep(epsilon_indicator(), u) == (1 if not u else 0)
        assert eval_rep(FIB, u) == direct_eval(FIB, u)


def test_word_order_leftmost_outermost():
    a = Matrix([[1, 2], [0, 1]])
    b = Matrix([[1, 0], [3, 1]])
    rep = LinRep((1, 0), (a, b), (0, 1))
    assert eval_rep(rep, (1, 2)) == (a @ b)[0, 1]
    assert eval_rep(rep, (2, 1)) == (b @ a)[0, 1]


def test_linrep_validation():
    with pytest.raises(ValueError):
        LinRep((1, 0), (Matrix([[1]]),), (1, 0))
    with pytest.raises(ValueError):
        LinRep((1,), (), (1,))


def test_add_examples():
    zero = add(S2, S2, -1)
    assert all(eval_rep(zero, u) == 0 for u in words(2, 6))
    assert eval_rep(add(S2, S2, 1), "11") == 4
    same = add(S2, TM, 0)
    assert all(eval_rep(same, u) == eval_rep(S2, u) for u in words(2, 6))
    assert add(S2, TM).d == S2.d + TM.d


def test_convolve_examples():
    c = convolve(ONE, ONE)
    assert eval_rep(c, (1, 1, 1, 1)) == 5
    assert all(eval_rep(c, u) == len(u) + 1 for u in words(2, 6))
    assert eval_rep(convolve(S2, ONE), "11") == 3
    assert conv_oracle(S2, ONE, (2, 2)) == 3
    assert conv_oracle(ONE, ONE, (1, 2, 1, 2)) == 5
    for f in ZOO.values():
        for g in ZOO.values():
            assert eval_rep(convolve(f, g), ()) == eval_rep(f, ()) * eval_rep(g, ())
            assert conv_oracle(f, g, ()) == eval_rep(f, ()) * eval_rep(g, ())


def test_alphabet_mismatch_names_both():
    three = one(3)
    with pytest.raises(AlphabetMismatch) as err:
        add(S2, three)
    assert "['0', '1']" in str(err.value) and "['0', '1', '2']" in str(err.value)
    other = LinRep((1,), (Matrix([[1]]), Matrix([[1]])), (1,), ("a", "b"))
    with pytest.raises(AlphabetMismatch):
        convolve(S2, other)


def test_convolve_matches_oracle_zoo():
    for f in ZOO.values():
        for g in ZOO.values():
            c = convolve(f, g)
            for u in words(2, 6):
                assert eval_rep(c, u) == conv_oracle(f, g, u)


small_reps = st.integers(1, 2).flatmap(lambda d: st.builds(
    lambda w, a, b, v: LinRep(tuple(w), (Matrix(a), Matrix(b)), tuple(v)),
    st.lists(st.integers(-2, 2), min_size=d, max_size=d),
    st.lists(st.lists(st.integers(-1, 1), min_size=d, max_size=d), min_size=d, max_size=d),
    st.lists(st.lists(st.integers(-1, 1), min_size=d, max_size=d), min_size=d, max_size=d),
    st.lists(st.integers(-2, 2), min_size=d, max_size=d)))
reps = st.one_of(st.sampled_from(list(ZOO.values())), small_reps)


@settings(max_examples=30, deadline=None)
@given(reps, reps, reps, st.fractions(-3, 3, max_denominator=3))
def test_convolution_ring_laws(f, g, h, lam):
    fg = convolve(f, g)
    left = convolve(fg, h)
    right = convolve(f, convolve(g, h))
    bil = convolve(add(f, g, lam), h)
    unit_l, unit_r = convolve(epsilon_indicator(), f), convolve(f, epsilon_indicator())
    for u in words(2, 5):
        assert eval_rep(left, u) == eval_rep(right, u)
        assert eval_rep(bil, u) == eval_rep(convolve(f, h), u) + lam * eval_rep(convolve(g, h), u)
        assert eval_rep(unit_l, u) == eval_rep(f, u) == eval_rep(unit_r, u)
        assert eval_rep(fg, u) == conv_oracle(f, g, u)


def test_convolution_preserves_tameness():
    for f in (ONE, TM, S2):
        for g in (ONE, TM, S2):
            c = convolve(f, g)
            for _, x in products_up_to(list(c.matrices), 2 * c.d):
                assert is_tame_matrix(x)


@settings(max_examples=40, deadline=None)
@given(reps, reps)
def test_minimize_sound(f, g):
    for rep in (f, add(f, g, 2), convolve(f, g)):
        mrep = minimize(rep)
        assert mrep.d <= rep.d
        for u in words(2, 6):
            assert eval_rep(mrep, u) == eval_rep(rep, u)


def test_minimize_examples():
    assert minimize(S2).d == 2
    assert minimize(add(S2, S2, 1)).d <= S2.d
    assert minimize(add(S2, S2, -1)).d == 1
    dead = LinRep((1, 0), (Matrix([[1, 0], [0, 2]]), Matrix([[1, 0], [0, 3]])), (1, 0))
    assert minimize(dead).d == 1
    assert minimize(convolve(S2, S2)).d == 4


def test_minimize_is_idempotent_in_dimension():
    for rep in (convolve(S2, S2), add(TM, S2), convolve(ONE, TM)):
        m1 = minimize(rep)
        assert minimize(m1).d == m1.d


def test_from_dfao():
    rep = from_dfao(Dfao(1, 0, [[0], [0]], [1]))
    assert all(eval_rep(rep, u) == 1 for u in words(2, 4))
    tm = thue_morse_dfao()
    rep = from_dfao(tm)
    for u in words(2, 8):
        assert eval_rep(rep, u) == tm_oracle(u) == tm.run(u)
    values = {eval_rep(rep, u) for u in words(2, 10)}
    assert len(values) <= len(set(tm.output))
    unreachable = Dfao(3, 0, [[0, 1, 2], [1, 0, 2]], [0, 1, 5])
    assert minimize(from_dfao(unreachable)).d <= 2


def test_dfao_validation():
    with pytest.raises(ValueError):
        Dfao(2, 0, [[0, 2], [1, 0]], [0, 1])
    with pytest.raises(ValueError):
        Dfao(2, 5, [[0, 1], [1, 0]], [0, 1])


def test_seq_max_table():
    vals, trunc = seq_max_table(S2, 6)
    assert vals == tuple(range(7)) and trunc is None
    vals, _ = seq_max_table(convolve(ONE, ONE), 5)
    assert vals == tuple(n + 1 for n in range(6))


@pytest.mark.parametrize("rep,verdict,deg,r0", [
    (TM, SeqVerdict.FINITE_DEGREE, 0, "yes"),
    (S2, SeqVerdict.FINITE_DEGREE, 1, "yes"),
    (ONE, SeqVerdict.FINITE_DEGREE, 0, "yes"),
    (convolve(ONE, ONE), SeqVerdict.FINITE_DEGREE, 1, "yes"),
    (FIB, SeqVerdict.INFINITE, None, "no"),
    (epsilon_indicator(), SeqVerdict.DEGENERATE, None, "yes"),
    (add(S2, S2, -1), SeqVerdict.DEGENERATE, None, "yes"),
])
def test_growth_degree_seq(rep, verdict, deg, r0):
    r = growth_degree_seq(rep, max_n=10)
    assert r.verdict is verdict and r.grdeg == deg and r.in_r0 == r0


def test_three_way_agreement():
    """FiniteDegree iff the minimized matrices pass the tame pipeline iff max |f| <= c n^deg."""
    for rep in (TM, S2, ONE, convolve(ONE, ONE), convolve(S2, TM), FIB):
        r = growth_degree_seq(rep, max_n=10)
        mats = list(minimize(rep).matrices)
        tame = all(is_tame_matrix(x) for _, x in products_up_to(mats, 2 * len(mats[0].to_lists())))
        finite = r.verdict is SeqVerdict.FINITE_DEGREE
        assert finite == tame
        if finite:
            assert all(r.max_table[n] <= r.bound_c * n**r.grdeg for n in range(1, len(r.max_table)))
        else:
            # exponential: ratios to any fixed polynomial keep growing
            t = r.max_table
            assert t[-1] / len(t) ** 2 > t[len(t) // 2] / (len(t) // 2) ** 2
