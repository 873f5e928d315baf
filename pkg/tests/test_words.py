import pytest
from hypothesis import given, settings, strategies as st

from dehnfill.words import (
    CommutingPair,
    InvalidN,
    Word,
    bmt_word,
    commutator,
    conjugate,
    cyclic_canonical,
    cyclic_reduce,
    exponent_sum,
    invert,
    is_conjugate_free,
    is_cyclically_reduced,
    iterate_construction,
    torus_gn,
)

import oracles

W = Word.parse


# ---------------------------------------------------------------------------
# strategies
# ---------------------------------------------------------------------------

syllables = st.lists(
    st.tuples(st.sampled_from("xyz"), st.integers(-3, 3)), max_size=8
)
small_words = syllables.map(Word)
nonempty_words = small_words.filter(lambda w: not w.is_identity())


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------


def test_reduce_cancellation():
    assert W("x x^-1").is_identity()
    assert W("x y y^-1 x") == W("x^2")


def test_reduce_cascading():
    assert W("x y z z^-1 y^-1 x") == W("x^2")


def test_reduce_matches_letter_oracle_on_g1_expansion():
    # substitute n = 1 into the closed form's building blocks and reduce both ways
    expanded, closed = torus_gn(1)
    x, y = [("x", 1)], [("y", 1)]
    g = oracles.concat(x, y, oracles.invert_letters(x), oracles.invert_letters(y))
    w1 = oracles.concat(y, oracles.power(oracles.concat(x, y), 2))
    big = oracles.concat(
        oracles.conjugate_letters(g, oracles.conjugate_letters(g, w1)),
        oracles.power(g, -2),
    )
    assert list(expanded.letters()) == big
    assert list(closed.letters()) == big


@given(small_words)
@settings(max_examples=200, derandomize=True)
def test_reduce_idempotent(w):
    assert Word(w.syllables) == w


@given(small_words)
@settings(max_examples=200, derandomize=True)
def test_word_times_inverse_is_identity(w):
    assert (w * invert(w)).is_identity()
    assert (invert(w) * w).is_identity()


@given(small_words)
@settings(max_examples=200, derandomize=True)
def test_parse_print_round_trip(w):
    assert Word.parse(str(w)) == w


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        Word.parse("x^")
    with pytest.raises(ValueError):
        Word.parse("3x")


# ---------------------------------------------------------------------------
# inversion, conjugation, commutators
# ---------------------------------------------------------------------------


def test_conjugate_definition():
    assert conjugate(W("x"), W("y")) == W("y^-1 x y")


def test_commutator_convention():
    assert commutator(W("x"), W("y")) == W("x y x^-1 y^-1")


def test_inverted_commutator_is_the_yxYX_factor():
    assert invert(commutator(W("x"), W("y"))) == W("y x y^-1 x^-1")


@given(small_words, nonempty_words)
@settings(max_examples=150, derandomize=True)
def test_conjugation_round_trip(g, b):
    assert conjugate(conjugate(g, b), invert(b)) == g


@given(small_words, small_words)
@settings(max_examples=150, derandomize=True)
def test_exponent_sum_invariant_under_conjugation(g, b):
    for gen in "xyz":
        assert exponent_sum(conjugate(g, b), gen) == exponent_sum(g, gen)


def test_exponent_sum_examples():
    assert exponent_sum(W("x^2 y^-3"), "x") == 2
    assert exponent_sum(W("x^2 y^-3"), "y") == -3
    assert exponent_sum(commutator(W("a"), W("b")), "a") == 0
    expanded, _ = torus_gn(4)
    assert exponent_sum(expanded, "x") == 0
    assert exponent_sum(expanded, "y") == 0


# ---------------------------------------------------------------------------
# cyclic reduction and conjugacy
# ---------------------------------------------------------------------------


def test_cyclic_reduce_peels_conjugation():
    cw = cyclic_reduce(W("x y x^-1"))
    assert cw.base == W("y")
    assert cw.reassemble() == W("x y x^-1")


def test_cyclic_reduce_fixed_point():
    cw = cyclic_reduce(W("x y"))
    assert cw.base == W("x y")
    assert cw.conjugator.is_identity()


def test_cyclic_reduce_g2_matches_brute_force():
    expanded, closed = torus_gn(2)
    cw = cyclic_reduce(expanded)
    assert cw.base == closed
    assert list(cw.base.letters()) == oracles.cyclic_reduce_letters(
        oracles.word_to_letters(expanded)
    )


@given(small_words)
@settings(max_examples=200, derandomize=True)
def test_cyclic_reduce_invariants(w):
    cw = cyclic_reduce(w)
    assert is_cyclically_reduced(cw.base)
    assert cw.reassemble() == w
    assert cw.base.letter_length() <= w.letter_length()


def test_conjugacy_rotation():
    assert is_conjugate_free(W("x y"), W("y x"))
    assert not is_conjugate_free(W("x"), W("x^-1"))


def test_commutator_not_conjugate_to_its_reverse():
    assert not is_conjugate_free(commutator(W("x"), W("y")), commutator(W("y"), W("x")))
    # the oracle agrees after checking all four rotations
    assert not oracles.conjugate_by_rotation(
        commutator(W("x"), W("y")), commutator(W("y"), W("x"))
    )


@given(small_words, small_words)
@settings(max_examples=250, derandomize=True)
def test_conjugacy_matches_rotation_oracle(w1, w2):
    assert is_conjugate_free(w1, w2) == oracles.conjugate_by_rotation(w1, w2)


@given(small_words, nonempty_words)
@settings(max_examples=150, derandomize=True)
def test_conjugates_are_conjugate(g, b):
    assert is_conjugate_free(g, conjugate(g, b))


def test_cyclic_canonical_is_a_class_key():
    classes = {}
    for text in ("x y", "y x", "x^-1 y^-1", "x y x^-1 y^-1", "y^-1 x y^2"):
        classes.setdefault(cyclic_canonical(W(text)), []).append(text)
    grouped = sorted(sorted(v) for v in classes.values())
    assert grouped == [["x y", "y x", "y^-1 x y^2"], ["x y x^-1 y^-1"], ["x^-1 y^-1"]]


# ---------------------------------------------------------------------------
# the one-relator construction
# ---------------------------------------------------------------------------


def test_bmt_word_expansion():
    assert bmt_word(W("b"), W("a")) == W("b^-1 a^-1 b a b^-1 a b a^-2")


def test_bmt_word_commuting_pair():
    with pytest.raises(CommutingPair):
        bmt_word(W("a"), W("a^2"))


def test_bmt_word_ab_case_matches_oracle():
    w = bmt_word(W("b"), W("a b"))
    a, b = [("a", 1)], [("b", 1)]
    v = oracles.concat(a, b)
    vu = oracles.conjugate_letters(v, b)
    expected = oracles.concat(
        oracles.conjugate_letters(v, vu), oracles.power(v, -2)
    )
    assert list(w.letters()) == expected
    assert w.letter_length() == 10


@given(nonempty_words, nonempty_words)
@settings(max_examples=200, derandomize=True)
def test_bmt_output_homologous_to_v_inverse(u, v):
    if commutator(u, v).is_identity():
        return
    w = bmt_word(u, v)
    assert not w.is_identity()
    for gen in "xyz":
        assert exponent_sum(w, gen) == -exponent_sum(v, gen)


def test_iterate_construction_base_cases():
    x = W("x")
    assert iterate_construction(x, []) == [x]
    chain = iterate_construction(x, [W("y")])
    assert chain[0] == x
    assert chain[1] == conjugate(x, conjugate(x, W("y"))) * x ** -2


def test_iterate_construction_rejects_identity():
    with pytest.raises(ValueError):
        iterate_construction(Word(), [W("y")])


@given(nonempty_words, st.lists(small_words, max_size=3))
@settings(max_examples=100, derandomize=True)
def test_iterate_exponent_sums_alternate(g, alphas):
    chain = iterate_construction(g, alphas)
    for i, gi in enumerate(chain):
        for gen in "xyz":
            assert exponent_sum(gi, gen) == (-1) ** i * exponent_sum(g, gen)


# ---------------------------------------------------------------------------
# torus words
# ---------------------------------------------------------------------------


def test_torus_gn_rejects_bad_n():
    with pytest.raises(InvalidN):
        torus_gn(0)


@pytest.mark.parametrize("n", range(1, 11))
def test_torus_gn_identity(n):
    expanded, closed = torus_gn(n)
    assert expanded == closed
    assert is_cyclically_reduced(closed)
    assert closed.letter_length() == 8 * n + 24


def test_torus_gn_pairwise_nonconjugate():
    words = [torus_gn(n)[1] for n in range(1, 11)]
    for i in range(10):
        for j in range(i + 1, 10):
            assert not is_conjugate_free(words[i], words[j])
