import math
from fractions import Fraction

import numpy as np
import pytest

from dhl_omega import _mc_py, kernels
from dhl_omega.functionals import FunctionalValue, SieveParams
from dhl_omega.oracle import (
    McResult,
    collapsed_value,
    compare,
    mc_functional,
    mc_volume,
    random_test_polys,
    stream,
)
from dhl_omega.poly import Poly

Q4 = Fraction(1, 4)


def test_compare():
    mc = McResult(0.1669, 0.0002, 10 ** 6, 0)
    assert compare(Fraction(1, 6), mc) == pytest.approx(1.1667, abs=1e-3)
    assert compare(FunctionalValue.rational(Fraction(1, 2)), McResult(0.5, 0.1, 10, 0)) == 0
    with pytest.raises(ValueError):
        compare(1.0, McResult(1.0, 0.0, 10, 0))


@pytest.mark.parametrize("lam", [Fraction(1, 2), Fraction(1), Fraction(6, 5)])
def test_volume_scaling(lam):
    r = mc_volume("simplex", 4, scale=lam, samples=10 ** 6, seed=3)
    assert abs(r.estimate - float(lam) ** 4 / 24) <= 3 * r.std_error


def test_extended_volume_k2_is_unit_square():
    r = mc_volume("extended", 2, samples=10 ** 5, seed=1)
    assert r.estimate == pytest.approx(1.0)


def test_determinism():
    p = SieveParams.epsilon(3, Q4, Fraction(1, 5))
    f = Poly([1, 2, -1])
    a = mc_functional("Q", p, f, samples=4 * 10 ** 5, seed=9)
    b = mc_functional("Q", p, f, samples=4 * 10 ** 5, seed=9, workers=4)
    assert a == b
    c = mc_functional("Q", p, f, samples=4 * 10 ** 5, seed=10)
    assert c.estimate != a.estimate


def test_streams_differ():
    assert stream(1, 0).random() != stream(1, 1).random()
    assert stream(1, 0).random() == stream(1, 0).random()


def test_backends_agree():
    if kernels.BACKEND != "cython":
        pytest.skip("compiled kernels not built")
    rng = np.random.default_rng(0)
    pts = np.ascontiguousarray(rng.random((5000, 3)) * 1.2)
    y = np.ascontiguousarray(1e-6 + rng.random(5000) * 4)
    coeffs = np.array([1.0, -2.0, 0.5, 3.0])
    for a, b in ((math.inf, 1.0), (1.0, math.inf), (1.2, 1.2)):
        np.testing.assert_allclose(kernels.acc_volume(pts, a, b), _mc_py.acc_volume(pts, a, b), rtol=1e-12)
        np.testing.assert_allclose(kernels.acc_I(pts, coeffs, a, b), _mc_py.acc_I(pts, coeffs, a, b), rtol=1e-12)
        args = (pts, y, 2, coeffs, a, b, 0.5, 4.0, 2.0, 1.2, 0.8)
        np.testing.assert_allclose(kernels.acc_Q(*args), _mc_py.acc_Q(*args), rtol=1e-12)
        ti2 = np.ascontiguousarray(y / 4)
        np.testing.assert_allclose(
            kernels.acc_J(pts, ti2, 1, coeffs, a, b, 0.8), _mc_py.acc_J(pts, ti2, 1, coeffs, a, b, 0.8), rtol=1e-12
        )


def test_known_values():
    f = Poly.parse("12,63,100@1-x")
    r = mc_functional("I", SieveParams.extended(4, Fraction(1, 2)), f, samples=10 ** 6, seed=5)
    assert abs(r.estimate - 58.3386047423) <= 3 * r.std_error
    r = mc_functional("J", SieveParams.epsilon(2, Q4, 0, ell=1), Poly([1]), samples=10 ** 6, seed=5)
    assert abs(r.estimate - 1 / 3) <= 3 * r.std_error


@pytest.mark.parametrize("regime", ["standard", "extended", "epsilon"])
def test_collapse_small(regime):
    if regime == "epsilon":
        p = SieveParams.epsilon(3, Q4, Fraction(1, 5))
    else:
        p = SieveParams(regime, 3, Q4)
    f = random_test_polys(2, 1)[0]
    for which in ("I", "Q") + (() if regime == "extended" else ("J",)):
        mc = mc_functional(which, p, f, samples=10 ** 6, seed=4)
        assert compare(collapsed_value(p, f, which), mc) <= 4


def test_argument_checks():
    p = SieveParams.standard(3, Q4)
    with pytest.raises(ValueError):
        mc_functional("X", p, Poly([1]), samples=10 ** 6)
    with pytest.raises(ValueError):
        mc_functional("Q", p, Poly([1]), i=4, samples=10 ** 6)
    with pytest.raises(ValueError):
        mc_volume("cube", 3)


def test_random_polys_reproducible():
    a, b = random_test_polys(7, 3), random_test_polys(7, 3)
    assert a == b
    assert all(p.coeffs[0] != 0 and p.degree == 3 for p in a)
