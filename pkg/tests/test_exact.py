from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from dhl_omega.exact import LogValue, format_rational, logvalue_to_float, parse_rational, prime_exponents

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=60)
positive = st.fractions(min_value=Fraction(1, 50), max_value=50, max_denominator=60)


def test_log_additivity():
    v = LogValue.log(Fraction(6, 5)) + LogValue.log(Fraction(5, 3))
    assert v == LogValue.log(2)
    assert v.log_terms == {2: 1}
    assert v.rational == 0


def test_log_cancellation_to_rational():
    a = LogValue(Fraction(-3, 4), {2: 2})
    b = LogValue(Fraction(17, 12), {2: -2})
    assert a + b == Fraction(2, 3)
    assert (a + b).is_rational()


def test_arcoth_normalization():
    assert LogValue.log(Fraction(5, 3)) * Fraction(1, 2) == LogValue.arcoth(4)
    with pytest.raises(ValueError):
        LogValue.arcoth(1)


def test_parse_and_format():
    assert parse_rational(" -7/21 ") == Fraction(-1, 3)
    assert format_rational(Fraction(4, 2)) == "2"
    for bad in ("0.5", "1/0", "x", ""):
        with pytest.raises((ValueError, ZeroDivisionError)):
            parse_rational(bad)


def test_prime_exponents():
    assert prime_exponents(Fraction(12, 5)) == {2: 2, 3: 1, 5: -1}


def test_float_values():
    a = logvalue_to_float(LogValue.log(Fraction(5, 3)))
    with mpmath.workprec(600):
        assert abs(a.value - mpmath.log(mpmath.mpf(5) / 3)) <= a.error
    assert abs(float(a.value) - 0.5108256238) < 1e-10
    b = logvalue_to_float(LogValue(Fraction(2977019, 51030)))
    assert abs(float(b.value) - 58.3386047423) < 1e-9
    z = logvalue_to_float(LogValue(0))
    assert z.value == 0 and z.error == 0


def test_error_bound_shape():
    v = LogValue(1, {3: Fraction(5, 2), 7: -1})
    a = logvalue_to_float(v, 80)
    assert a.error <= 2 ** (1 - 80) * (1 + Fraction(5, 2) + 1)
    with mpmath.workprec(600):
        exact = 1 + mpmath.mpf(5) / 2 * mpmath.log(3) - mpmath.log(7)
        assert abs(a.value - exact) <= a.error


@given(rationals, rationals, positive, positive)
def test_float_homomorphism(p, q, x, y):
    a = LogValue(p, {x: 1})
    b = LogValue(q, {y: -2})
    fa, fb, fs = (logvalue_to_float(v) for v in (a, b, a + b))
    with mpmath.workprec(600):
        _check(a, b, q, fa, fb, fs)


def _check(a, b, q, fa, fb, fs):
    assert abs(fs.value - (fa.value + fb.value)) <= fs.error + fa.error + fb.error
    fd = logvalue_to_float(a - b)
    assert abs(fd.value - (fa.value - fb.value)) <= fd.error + fa.error + fb.error
    fm = logvalue_to_float(a * q)
    assert abs(fm.value - fa.value * q) <= fm.error + fa.error * abs(q) + 1e-60


@given(rationals, positive, rationals)
def test_canonical_idempotent(r, x, c):
    v = LogValue(r, {x: c})
    assert v.canonical().canonical() == v.canonical() == v


@given(rationals)
def test_rational_round_trip(r):
    v = LogValue(r)
    assert v == r
    assert float(v) == pytest.approx(float(r), abs=1e-15)
