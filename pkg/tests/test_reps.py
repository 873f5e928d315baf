import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dehnfill.knots import figure_eight_group
from dehnfill.presentations import UnknownGenerator
from dehnfill.reps import (
    DegenerateZeta,
    DiscriminantMismatch,
    ProjMatrix2,
    QuadExt,
    Representation,
    ZeroZeta,
    eval_word,
    figure_eight_holonomy,
    invariant_nonperipheral,
    invariant_peripheral,
    is_peripheral_trace,
    parse_quad,
    quad,
    sign_canonical,
    stays_peripheral,
    trace_pm,
)
from dehnfill.words import Word

import oracles

W = Word.parse

OMEGA = quad(Fraction(-1, 2), Fraction(1, 2), -3)


# ---------------------------------------------------------------------------
# field arithmetic
# ---------------------------------------------------------------------------


def test_omega_is_a_cube_root_of_unity():
    assert OMEGA ** 3 == 1
    assert OMEGA ** 2 + OMEGA + 1 == 0
    assert OMEGA ** 4 == OMEGA


def test_conjugation_is_an_involution_fixing_rationals():
    x = quad(Fraction(2, 3), Fraction(-1, 5), 5)
    assert x.conjugate().conjugate() == x
    r = quad(7, 0, 5)
    assert r.conjugate() == r


def test_inverse_and_division():
    x = quad(1, 2, 5)
    assert x * x.inverse() == 1
    assert (x / x) == 1
    with pytest.raises(ZeroDivisionError):
        quad(0, 0, 5).inverse()


def test_discriminant_mismatch():
    with pytest.raises(DiscriminantMismatch):
        quad(0, 1, 5) + quad(0, 1, -3)
    # rational payloads cross fields freely
    assert quad(2, 0, 5) + quad(3, 0, -3) == 5
    assert quad(2, 0, 5) == quad(2, 0, -3)
    with pytest.raises(DiscriminantMismatch):
        quad(0, 1, 5) == quad(0, 1, -3)


def test_discriminant_must_be_square_free():
    for bad in (0, 1, 4, 12, -12):
        with pytest.raises(ValueError):
            quad(1, 1, bad)


def test_quad_text_round_trip():
    cases = ["5", "-2/3", "sqrt(-3)", "2*sqrt(-3)", "1/2+1/2*sqrt(-3)", "1-2/7*sqrt(5)"]
    for text in cases:
        value = parse_quad(text, d=-3) if "sqrt" not in text else parse_quad(text)
        assert parse_quad(str(value), value.d) == value
    assert parse_quad("5", d=-3) == 5
    with pytest.raises(ValueError):
        parse_quad("5")  # rationals still need a field to live in
    with pytest.raises(ValueError):
        parse_quad("sqrt(two)")


fractions_strategy = st.fractions(
    min_value=-4, max_value=4, max_denominator=5
)


def quad_strategy(d):
    return st.tuples(fractions_strategy, fractions_strategy).map(
        lambda t: QuadExt(t[0], t[1], d)
    )


@given(quad_strategy(-3), quad_strategy(-3), quad_strategy(-3))
@settings(max_examples=200, derandomize=True)
def test_field_laws_d_minus_three(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert x * y == y * x


@given(quad_strategy(5))
@settings(max_examples=200, derandomize=True)
def test_nonzero_elements_invert_exactly(x):
    if not x.is_zero:
        assert x * x.inverse() == 1


# ---------------------------------------------------------------------------
# projective matrices
# ---------------------------------------------------------------------------


def test_determinant_must_be_one():
    with pytest.raises(ValueError):
        ProjMatrix2.from_rows([[1, 0], [0, 2]], -3)


def test_sign_canonicalization_identifies_negatives():
    m = ProjMatrix2.from_rows([[1, 5], [0, 1]], -3)
    neg = ProjMatrix2.from_rows([[-1, -5], [0, -1]], -3)
    assert m == neg
    assert m.m11 == 1


def test_canonicalization_tie_breaks_on_irrational_part():
    m = ProjMatrix2.from_rows([[quad(0, -1, 5), quad(Fraction(1, 5), 0, 5)], [-5, 0]], 5)
    assert m.m11 == quad(0, 1, 5)


def _rand_det1(rng, d):
    while True:
        x = QuadExt(Fraction(rng.randint(-3, 3), rng.randint(1, 2)), Fraction(rng.randint(-2, 2)), d)
        y = QuadExt(Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-2, 2)), d)
        z = QuadExt(Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-2, 2)), d)
        if x.is_zero:
            continue
        return ProjMatrix2(x, y, z, (1 + y * z) / x)


def test_matrix_group_laws():
    rng = random.Random(11)
    identity = ProjMatrix2.identity_matrix(-3)
    for _ in range(40):
        a, b = _rand_det1(rng, -3), _rand_det1(rng, -3)
        assert (a * b).inverse() == b.inverse() * a.inverse()
        assert a * a.inverse() == identity
        assert a ** 0 == identity
        assert a ** -2 == (a.inverse()) ** 2


def test_trace_pm_values():
    identity = ProjMatrix2.identity_matrix(-3)
    assert trace_pm(identity) == 2
    parabolic = ProjMatrix2.from_rows([[1, quad(0, 3, -3)], [0, 1]], -3)
    assert trace_pm(parabolic) == 2
    assert is_peripheral_trace(parabolic)
    loxodromic = ProjMatrix2.from_rows([[2, 0], [0, Fraction(1, 2)]], -3)
    assert trace_pm(loxodromic) == Fraction(5, 2)
    assert not is_peripheral_trace(loxodromic)


def test_trace_is_conjugation_invariant():
    rng = random.Random(5)
    for _ in range(40):
        m = _rand_det1(rng, 5)
        p = _rand_det1(rng, 5)
        assert trace_pm(p.inverse() * m * p) == trace_pm(m)


def test_negated_trace_canonicalizes():
    m = ProjMatrix2.from_rows([[-2, -1], [1, 0]], -3)
    assert trace_pm(m) == 2


# ---------------------------------------------------------------------------
# the figure-eight holonomy preset
# ---------------------------------------------------------------------------


def test_holonomy_generator_images():
    rep = figure_eight_holonomy()
    assert eval_word(rep, W("mu")) == ProjMatrix2.from_rows([[1, 1], [0, 1]], -3)
    assert eval_word(rep, W("h")) == ProjMatrix2.from_rows([[1, 0], [-OMEGA, 1]], -3)


def test_holonomy_longitude_image():
    rep = figure_eight_holonomy()
    lam = figure_eight_group().longitude
    assert eval_word(rep, lam) == ProjMatrix2.from_rows([[1, quad(0, 2, -3)], [0, 1]], -3)
    assert is_peripheral_trace(eval_word(rep, lam))
    assert is_peripheral_trace(eval_word(rep, W("h")))


def test_holonomy_slope_elements():
    rep = figure_eight_holonomy()
    knot = figure_eight_group()
    for p, q in [(1, 0), (0, 1), (2, 3), (-5, 4), (5, -5)]:
        got = eval_word(rep, knot.meridian ** p * knot.longitude ** q)
        assert got == ProjMatrix2.from_rows([[1, quad(p, 2 * q, -3)], [0, 1]], -3)


def test_eval_word_empty_and_unknown():
    rep = figure_eight_holonomy()
    assert eval_word(rep, Word()).is_identity()
    with pytest.raises(UnknownGenerator):
        eval_word(rep, W("q"))


def test_eval_word_is_a_homomorphism():
    rng = random.Random(3)
    rep = figure_eight_holonomy()
    gens = ["mu", "h"]
    for _ in range(25):
        w1 = Word([(rng.choice(gens), rng.randint(-2, 2)) for _ in range(4)])
        w2 = Word([(rng.choice(gens), rng.randint(-2, 2)) for _ in range(4)])
        assert eval_word(rep, w1 * w2) == eval_word(rep, w1) * eval_word(rep, w2)


def test_representation_rejects_wrong_images():
    knot = figure_eight_group()
    # a diagonal h image cannot be conjugate to the parabolic mu image
    bad = {
        "mu": ProjMatrix2.from_rows([[1, 1], [0, 1]], -3),
        "h": ProjMatrix2.from_rows([[2, 0], [0, Fraction(1, 2)]], -3),
    }
    with pytest.raises(ValueError):
        Representation(source=knot.presentation, assignment=bad)
    # equal parabolic images do satisfy the relator: a legal degenerate case
    same = ProjMatrix2.from_rows([[1, 1], [0, 1]], -3)
    Representation(source=knot.presentation, assignment={"mu": same, "h": same})


# ---------------------------------------------------------------------------
# conjugacy invariants
# ---------------------------------------------------------------------------


def test_nonperipheral_invariant_frozen_case():
    # zeta = 2, alpha = [[1, 1], [1, 2]]: values recomputed with the
    # independent matrix oracle below
    zeta = quad(2, 0, 5)
    alpha = ProjMatrix2.from_rows([[1, 1], [1, 2]], 5)
    r = invariant_nonperipheral(zeta, alpha)
    assert r == Fraction(7, 2)

    g = ((oracles.q2(2), oracles.q2(0)), (oracles.q2(0), oracles.q2(Fraction(1, 2))))
    a = ((oracles.q2(1), oracles.q2(1)), (oracles.q2(1), oracles.q2(2)))
    trace = oracles.construction_trace(g, a, 5)
    assert trace == oracles.q2(Fraction(445, 16))
    s1 = Fraction(5, 2)
    s3 = Fraction(65, 8)
    assert -Fraction(7, 2) * (s1 - s3) + s3 == Fraction(445, 16)


def test_nonperipheral_invariant_identity_alpha():
    zeta = quad(2, 0, 5)
    r = invariant_nonperipheral(zeta, ProjMatrix2.identity_matrix(5))
    assert r == -1
    # alpha = I collapses the construction to g^-1, whose trace is 5/2
    g = ((oracles.q2(2), oracles.q2(0)), (oracles.q2(0), oracles.q2(Fraction(1, 2))))
    i2 = ((oracles.q2(1), oracles.q2(0)), (oracles.q2(0), oracles.q2(1)))
    assert oracles.construction_trace(g, i2, 5) == oracles.q2(Fraction(5, 2))


def test_nonperipheral_degenerate_zeta():
    alpha = ProjMatrix2.identity_matrix(5)
    for z in (quad(1, 0, 5), quad(-1, 0, 5), quad(0, 0, 5)):
        with pytest.raises(DegenerateZeta):
            invariant_nonperipheral(z, alpha)


def test_peripheral_invariant_figure_eight_values():
    rep = figure_eight_holonomy()
    h_img = eval_word(rep, W("h"))
    r = invariant_peripheral(quad(1, 0, -3), h_img)
    assert r == quad(1, 1, -3)  # 2*omega + 2 = 1 + sqrt(-3)
    assert not stays_peripheral(r)


def test_peripheral_invariant_hn_family():
    rep = figure_eight_holonomy()
    knot = figure_eight_group()
    for n in (1, 2, 3):
        for p, q in [(1, 0), (2, 1)]:
            zeta = quad(p, 2 * q, -3)
            alpha = eval_word(rep, W("h") ** n)
            expected = 2 * (n ** 4) * OMEGA * zeta ** 4 + 2
            assert invariant_peripheral(zeta, alpha) == expected


def test_peripheral_invariant_upper_triangular_alpha():
    alpha = ProjMatrix2.from_rows([[1, 7], [0, 1]], -3)
    r = invariant_peripheral(quad(3, 0, -3), alpha)
    assert r == 2
    assert stays_peripheral(r)


def test_peripheral_zero_zeta():
    with pytest.raises(ZeroZeta):
        invariant_peripheral(quad(0, 0, -3), ProjMatrix2.identity_matrix(-3))


def _random_alpha(rng, d):
    while True:
        def entry():
            irr = Fraction(rng.randint(-3, 3), rng.randint(1, 2)) if rng.random() < 0.5 else Fraction(0)
            return QuadExt(Fraction(rng.randint(-3, 3), rng.randint(1, 2)), irr, d)

        x, y, z = entry(), entry(), entry()
        if x.is_zero:
            continue
        return ProjMatrix2(x, y, z, (1 + y * z) / x)


def _as_pair(value):
    return (value.a, value.b)


def test_invariants_match_independent_oracle_on_seeded_draws():
    rng = random.Random(20)
    checked = 0
    while checked < 40:
        d = (-3, -1, 2, 5)[checked % 4]
        zeta = QuadExt(
            Fraction(rng.randint(-3, 3), rng.randint(1, 2)),
            Fraction(rng.randint(-2, 2)) if rng.random() < 0.5 else Fraction(0),
            d,
        )
        if zeta.is_zero or zeta * zeta == 1:
            continue
        alpha = _random_alpha(rng, d)
        r = invariant_nonperipheral(zeta, alpha)
        g = (
            (_as_pair(zeta), oracles.q2(0)),
            (oracles.q2(0), _as_pair(zeta.inverse())),
        )
        a = tuple(tuple(_as_pair(e) for e in row) for row in
                  ((alpha.m11, alpha.m12), (alpha.m21, alpha.m22)))
        trace = oracles.construction_trace(g, a, d)
        s1 = zeta + zeta.inverse()
        s3 = zeta ** 3 + zeta.inverse() ** 3
        predicted = (-r) * (s1 - s3) + s3
        assert _as_pair(predicted) in (trace, oracles.q2_neg(trace))
        checked += 1

    checked = 0
    while checked < 40:
        d = (-3, -1, 2, 5)[checked % 4]
        zeta = QuadExt(
            Fraction(rng.randint(-3, 3), rng.randint(1, 2)),
            Fraction(rng.randint(-2, 2)) if rng.random() < 0.5 else Fraction(0),
            d,
        )
        if zeta.is_zero:
            continue
        alpha = _random_alpha(rng, d)
        r = invariant_peripheral(zeta, alpha)
        g = ((oracles.q2(1), _as_pair(zeta)), (oracles.q2(0), oracles.q2(1)))
        a = tuple(tuple(_as_pair(e) for e in row) for row in
                  ((alpha.m11, alpha.m12), (alpha.m21, alpha.m22)))
        trace = oracles.construction_trace(g, a, d)
        assert _as_pair(r) in (trace, oracles.q2_neg(trace))
        checked += 1


def test_example_family_distinct_for_twenty_multipliers():
    zeta = quad(1, 0, -3)
    seen = set()
    for m in range(1, 21):
        value = sign_canonical(2 * (-m * OMEGA) ** 4 * zeta ** 4 + 2)
        seen.add((value.a, value.b))
    assert len(seen) == 20
