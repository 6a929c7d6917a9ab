import random
from fractions import Fraction

import pytest

from hallq.qlaurent import (
    ExactDivisionError,
    LaurentPoly,
    QScalar,
    b_closed_form,
    b_partial_sum,
    check_identity_4_2,
    eval_sqrt_q,
    qbinom,
    qfact,
    qint,
    sqrt_q_power,
    v_power,
)


def rand_poly(rng, span=4, nterms=4):
    return LaurentPoly({rng.randint(-span, span): rng.randint(-5, 5) for _ in range(nterms)})


def qbinom_pascal(m, t):
    """Independent oracle: balanced q-Pascal recursion for d = 1."""
    if t == 0 or t == m:
        return LaurentPoly.one()
    return v_power(t) * qbinom_pascal(m - 1, t) + v_power(t - m) * qbinom_pascal(m - 1, t - 1)


def test_qint_examples():
    assert qint(0, 1).is_zero()
    assert qint(3, 1) == LaurentPoly({2: 1, 0: 1, -2: 1})
    # (v^4 - v^-4)/(v^2 - v^-2) expanded by hand:
    assert qint(2, 2) == LaurentPoly({2: 1, -2: 1})
    assert qint(-3, 1) == -qint(3, 1)
    assert qint(1, 3) == LaurentPoly.one()


def test_qint_matches_defining_quotient():
    for m in range(1, 9):
        for d in (1, 2, 3):
            num = v_power(d * m) - v_power(-d * m)
            den = v_power(d) - v_power(-d)
            assert qint(m, d) == num.divexact(den)


def test_qfact_examples():
    assert qfact(0, 1) == LaurentPoly.one()
    assert qfact(2, 1) == LaurentPoly({1: 1, -1: 1})
    assert qfact(3, 1) == LaurentPoly({3: 1, 1: 2, -1: 2, -3: 1})


def test_qbinom_examples():
    for m in range(0, 7):
        assert qbinom(m, 0, 2) == LaurentPoly.one()
    assert qbinom(3, 1, 1) == LaurentPoly({2: 1, 0: 1, -2: 1})
    assert qbinom(5, 2, 1) == qbinom_pascal(5, 2)


def test_qbinom_pascal_oracle():
    for m in range(1, 13):
        for t in range(1, m):
            assert qbinom(m, t, 1) == qbinom_pascal(m, t)


def test_qbinom_symmetry():
    for d in (1, 2, 3):
        for m in range(0, 16):
            for t in range(0, m + 1):
                assert qbinom(m, t, d) == qbinom(m, m - t, d)


def test_bar_invariance():
    for d in (1, 2, 3):
        for m in range(0, 9):
            assert qint(m, d).bar() == qint(m, d)
            for t in range(0, m + 1):
                assert qbinom(m, t, d).bar() == qbinom(m, t, d)


def test_ring_axioms_random():
    rng = random.Random(7)
    for _ in range(60):
        a, b, c = (rand_poly(rng) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_divexact_errors():
    with pytest.raises(ExactDivisionError):
        (v_power(1) + 1).divexact(v_power(1) - 1)
    with pytest.raises(ZeroDivisionError):
        v_power(1).divexact(LaurentPoly.zero())


def test_b_partial_sum_examples():
    assert b_partial_sum(1, 1) == -qint(3)
    assert b_partial_sum(2, 2) == -qint(5)
    assert b_partial_sum(3, 2) == b_closed_form(3, 2)


def test_b_closed_form_examples():
    for n in range(1, 6):
        assert b_closed_form(n, n) == -qint(2 * n + 1)
    assert b_closed_form(1, 1) == LaurentPoly({2: -1, 0: -1, -2: -1})
    assert b_closed_form(4, 2) == b_partial_sum(4, 2)


def test_lemma_4_2_equality():
    for n in range(1, 13):
        for i in range(1, n + 1):
            assert b_partial_sum(n, i) == b_closed_form(n, i)


def test_sum_b_vanishes():
    for n in range(1, 21):
        assert (qint(2 * n + 1) + b_partial_sum(n, n)).is_zero()


def test_identity_4_2():
    assert check_identity_4_2(1, 1)
    assert check_identity_4_2(5, 3)
    assert check_identity_4_2(12, 7)
    for n in range(1, 13):
        for i in range(1, n + 1):
            assert check_identity_4_2(n, i)


def test_eval_sqrt_q_examples():
    assert eval_sqrt_q(LaurentPoly.one(), 5) == QScalar(1, 0, 5)
    assert eval_sqrt_q(LaurentPoly({2: 1, 0: 1, -2: 1}), 2) == QScalar(Fraction(7, 2), 0, 2)
    assert eval_sqrt_q(v_power(1), 3) == QScalar(0, 1, 3)
    assert eval_sqrt_q(v_power(-3), 2) == QScalar(0, Fraction(1, 4), 2)


def test_eval_sqrt_q_is_ring_hom():
    rng = random.Random(11)
    for q in (2, 3, 4, 5):
        for _ in range(25):
            a, b = rand_poly(rng), rand_poly(rng)
            assert eval_sqrt_q(a + b, q) == eval_sqrt_q(a, q) + eval_sqrt_q(b, q)
            assert eval_sqrt_q(a * b, q) == eval_sqrt_q(a, q) * eval_sqrt_q(b, q)


def test_qscalar_square_root_folds():
    s = QScalar(1, 2, 4)  # sqrt(4) = 2 folds into the rational part
    assert s.a == 5 and s.b == 0


def test_qscalar_field_ops():
    x = QScalar(Fraction(3, 2), Fraction(-1, 3), 2)
    assert x * x.inverse() == QScalar(1, 0, 2)
    assert (x / x) == QScalar(1, 0, 2)
    y = QScalar(0, 1, 2)
    assert y * y == QScalar(2, 0, 2)


def test_qscalar_sqrt():
    assert QScalar(2, 0, 2).sqrt() == QScalar(0, 1, 2)
    assert QScalar(9, 0, 3).sqrt() == QScalar(3, 0, 3)
    three_plus = QScalar(3, 2, 2)  # (1 + sqrt(2))^2
    assert three_plus.sqrt() == QScalar(1, 1, 2)
    assert QScalar(5, 0, 2).sqrt() is None


def test_sqrt_q_power():
    assert sqrt_q_power(2, 2) == QScalar(2, 0, 2)
    assert sqrt_q_power(2, -1) == QScalar(0, Fraction(1, 2), 2)
    assert sqrt_q_power(3, 3) == QScalar(0, 3, 3)
    for m in range(-6, 7):
        assert sqrt_q_power(5, m) == eval_sqrt_q(v_power(m), 5)
