"""Exact arithmetic: field operations, certified signs, interval refinement."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from wildfan.exactnum import (
    Inconclusive,
    IntervalExpr,
    NegativeRadicand,
    QuadExt,
    RadicandMismatch,
    Rational,
    adjoin_sqrt,
    as_xreal,
    sign,
    xreal_from_json,
    xreal_to_json,
)


def test_rational_basic():
    assert (Rational(1, 2) + Rational(1, 3)) == Rational(5, 6)
    assert (Rational(1, 2) - Rational(1, 2)) == Rational(0)
    assert (Rational(2, 3) * Rational(9, 4)) == Rational(3, 2)
    assert (Rational(1) / Rational(4)) == Rational(1, 4)
    with pytest.raises(ZeroDivisionError):
        Rational(1) / Rational(0)


def test_sqrt5_squared_stays_in_tower():
    s5 = QuadExt.sqrt_of(5)
    sq = s5 * s5
    assert isinstance(sq, QuadExt)
    assert sq.radicands == (5,)
    assert sq.coeffs == (Fraction(5), Fraction(0))


def test_inverse_of_one_plus_sqrt5_in_two_radical_tower():
    # 1/(1+sqrt5) = (-1 + sqrt5)/4, embedded in Q(sqrt5, sqrt1141)
    one_plus = QuadExt((5, 1141), (1, 1, 0, 0))
    inv = Rational(1) / one_plus
    assert isinstance(inv, QuadExt)
    assert inv.coeffs == (Fraction(-1, 4), Fraction(1, 4), Fraction(0), Fraction(0))
    # brute-force check: product back to exactly 1
    prod = inv * one_plus
    assert prod.coeffs == (Fraction(1), Fraction(0), Fraction(0), Fraction(0))


def test_sign_paper_inequalities():
    s5 = QuadExt.sqrt_of(5)
    lhs = Rational(83033, 4300) - Rational(8050, 4300) * s5
    assert sign(lhs - Rational(151, 10)) == 1
    assert sign(Rational(151, 10) - Rational(27, 4) * s5) == 1
    assert sign(Rational(0)) == 0


def test_adjoin_sqrt_rational_cases():
    r = adjoin_sqrt(8)
    assert isinstance(r, QuadExt)
    assert r.radicands == (2,)
    assert r.coeffs == (Fraction(0), Fraction(2))  # 2*sqrt(2)
    assert adjoin_sqrt(0) == Rational(0)
    assert adjoin_sqrt(Rational(9, 4)) == Rational(3, 2)
    with pytest.raises(NegativeRadicand):
        adjoin_sqrt(-1)


def test_adjoin_sqrt_field_element_gives_interval():
    s5 = QuadExt.sqrt_of(5)
    x = Rational(45, 4) * 5 + s5  # no exact sqrt in the tower
    r = adjoin_sqrt(x)
    assert isinstance(r, IntervalExpr)
    iv = r.enclosure(128)
    approx = float(x) ** 0.5
    assert float(iv.lo) <= approx <= float(iv.hi)
    assert float(iv.hi - iv.lo) < 1e-30


def test_radicand_mismatch_three_radicals():
    a = QuadExt((2, 5), (1, 1, 0, 0))
    b = QuadExt.sqrt_of(3)
    with pytest.raises(RadicandMismatch):
        a + b


def test_same_field_radicands_merge():
    # sqrt(8) = 2*sqrt(2): towers (2,) and (8,) describe the same field
    a = QuadExt((2,), (0, 1))
    b = QuadExt((8,), (0, 1))
    s = a + b
    assert isinstance(s, QuadExt)
    assert float(s) == pytest.approx(3 * 2 ** 0.5)


def test_random_field_ops_roundtrip():
    rng = random.Random(7)
    for _ in range(1000):
        coeffs_a = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(4))
        coeffs_b = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(4))
        a = QuadExt((2, 7), coeffs_a)
        b = QuadExt((2, 7), coeffs_b)
        if b.is_zero():
            continue
        assert (a * b) / b == a
        zero = a + (-a)
        assert zero.is_zero()


def test_sign_agrees_with_float_on_random_elements():
    rng = random.Random(11)
    for _ in range(300):
        a = QuadExt((3, 11), tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 20))
                                   for _ in range(4)))
        s = sign(a)
        approx = float(a)
        if abs(approx) > 1e-9:
            assert s == (1 if approx > 0 else -1)


def test_sign_never_contradicts_128bit_enclosure():
    rng = random.Random(13)
    for _ in range(200):
        a = QuadExt((2, 19), tuple(Fraction(rng.randint(-30, 30), rng.randint(1, 30))
                                   for _ in range(4)))
        s = sign(a)
        iv = a.enclosure(128)
        if iv.lo > 0:
            assert s == 1
        elif iv.hi < 0:
            assert s == -1
        else:
            assert iv.lo <= 0 <= iv.hi  # enclosure must contain the true value


def test_exact_sqrt_products_collapse_in_field():
    expr = adjoin_sqrt(2) * adjoin_sqrt(3) - adjoin_sqrt(6)
    assert isinstance(expr, QuadExt)
    assert sign(expr) == 0


def test_interval_refinement_monotone():
    expr = IntervalExpr.sqrt(as_xreal(2)) * IntervalExpr.sqrt(as_xreal(3)) \
        - IntervalExpr.sqrt(as_xreal(6))
    assert isinstance(expr, IntervalExpr)
    coarse = expr.enclosure(64)
    fine = expr.enclosure(256)
    assert coarse.lo <= fine.lo and fine.hi <= coarse.hi
    # the value is exactly 0, so sign must stay inconclusive
    with pytest.raises(Inconclusive):
        sign(expr, precision_cap=512)


def test_interval_division_by_possible_zero():
    z = IntervalExpr.sqrt(as_xreal(2)) * IntervalExpr.sqrt(as_xreal(2)) - as_xreal(2)  # exact 0
    with pytest.raises((ZeroDivisionError, Inconclusive)):
        val = as_xreal(1) / z
        sign(val, precision_cap=256)


def test_interval_sign_separates_nonzero():
    expr = IntervalExpr.sqrt(as_xreal(2)) + IntervalExpr.sqrt(as_xreal(3)) - as_xreal(3)
    assert sign(expr) == 1  # sqrt2 + sqrt3 = 3.146... > 3


def test_pow_and_log_nodes():
    x = IntervalExpr.pow_rational(as_xreal(4), 3, 2)  # 4^{3/2} = 8
    iv = x.enclosure(96)
    assert float(iv.lo) <= 8.0 <= float(iv.hi)
    assert float(iv.hi - iv.lo) < 1e-25
    ln = IntervalExpr.log(as_xreal(2))
    iv = ln.enclosure(96)
    assert abs(float((iv.lo + iv.hi) / 2) - 0.6931471805599453) < 1e-15
    assert float(iv.hi - iv.lo) < 1e-25


def test_serialization():
    assert xreal_to_json(Rational(5, 3)) == "5/3"
    s5 = QuadExt((5, 1141), (Fraction(1, 2), Fraction(-3), 0, 0))
    enc = xreal_to_json(s5)
    assert enc == {"d": [5, 1141], "c": ["1/2", "-3/1", "0/1", "0/1"]}
    back = xreal_from_json(enc)
    assert isinstance(back, QuadExt) and back == s5
    iv_enc = xreal_to_json(IntervalExpr.sqrt(as_xreal(2)) + as_xreal(1))
    assert isinstance(iv_enc, str) and iv_enc.startswith("[") and "," in iv_enc
    lo, hi = (float(v) for v in iv_enc[1:-1].split(","))
    assert lo <= 2 ** 0.5 + 1 <= hi


def test_comparison_operators():
    assert Rational(1, 3) < Rational(1, 2)
    s2 = adjoin_sqrt(2)
    assert s2 > Rational(7, 5)
    assert s2 < Rational(3, 2)


def test_precision_cap_env_override(monkeypatch):
    from wildfan.exactnum import default_precision_cap
    monkeypatch.setenv("WILDFAN_PRECISION_CAP", "8192")
    assert default_precision_cap() == 8192
    monkeypatch.delenv("WILDFAN_PRECISION_CAP")
    assert default_precision_cap() == 4096
