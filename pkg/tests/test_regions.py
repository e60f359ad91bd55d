from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial import HalfspaceIntersection

from dhl_omega.exact import LogValue
from dhl_omega.functionals import eps_regions, ext_regions, std_regions
from dhl_omega.poly import MPoly
from dhl_omega.regions import (
    AffineRegion,
    DivergentKernelError,
    RegionError,
    breakpoints_of,
    integrate_polytope,
    integrate_region,
    kernel_integrate,
    lt,
    merged_breakpoints,
    polytope,
)


def _simplex(variables, scale):
    vs = [MPoly.var(v, variables) for v in variables]
    cons = [lt(0, v) for v in vs]
    cons.append(lt(sum(vs[1:], vs[0]), scale))
    return cons


def test_simplex_volume():
    V = ("t1", "t2", "t3")
    p = polytope(V, _simplex(V, 1))
    assert integrate_polytope(MPoly.const(1, V), p) == Fraction(1, 6)


def test_unit_square():
    V = ("a", "b")
    a, b = (MPoly.var(v, V) for v in V)
    p = polytope(V, [lt(0, a), lt(a, 1), lt(0, b), lt(b, 1)])
    assert integrate_polytope(MPoly.const(1, V), p) == 1


def test_bitten_simplex():
    # k = 3, theta = 1/2, t = 1: the bite t2 > 1/theta - y is a translated simplex
    V = ("y", "t1", "t2")
    y, t1, t2 = (MPoly.var(v, V) for v in V)
    region = AffineRegion(V, [lt(0, y), lt(y, 2), lt(0, t1), lt(0, t2), lt(t1 + t2, 1)])
    bite = region.intersect(lt(2 - y, t2))
    one = MPoly.const(1, ("t1", "t2"))
    y0 = Fraction(3, 2)
    assert integrate_polytope(one, bite.slice(y0)) == Fraction(1, 8)
    full = integrate_polytope(one, region.slice(y0))
    assert full - integrate_polytope(one, bite.slice(y0)) == Fraction(3, 8)


def test_slice_of_square():
    V = ("y", "t")
    y, t = (MPoly.var(v, V) for v in V)
    sq = AffineRegion(V, [lt(0, y), lt(y, 1), lt(0, t), lt(t, 1)])
    s = sq.slice(Fraction(1, 3))
    assert sorted(v[0] for v in s.vertices) == [0, 1]


def test_slice_vertex_count_matches_halfspace_oracle():
    E = ext_regions(4, Fraction(1, 2))["E"]
    s = E.slice(Fraction(1, 4))
    halfspaces = np.array([[float(x) for x in c.coeffs] + [-float(c.bound)] for c in s.constraints if any(c.coeffs)])
    hs = HalfspaceIntersection(halfspaces, np.array([0.1, 0.5, 0.6]))
    oracle = {tuple(np.round(v, 9)) for v in hs.intersections}
    ours = {tuple(round(float(x), 9) for x in v) for v in s.vertices}
    assert len(ours) == len(oracle)
    assert ours == oracle


def test_breakpoints():
    d = std_regions(Fraction(1, 4))
    assert merged_breakpoints(list(d.values())) == [0, 1, 3, 4]
    h = eps_regions(Fraction(1, 4), 2, Fraction(1, 5))
    assert Fraction(2) in merged_breakpoints(list(h.values()))
    V = ("y", "t")
    y, t = (MPoly.var(v, V) for v in V)
    box = AffineRegion(V, [lt(0, y), lt(y, 3), lt(0, t), lt(t, 1)])
    assert breakpoints_of(box) == [0, 3]


def test_unbounded_region_raises():
    V = ("y", "t")
    y, t = (MPoly.var(v, V) for v in V)
    with pytest.raises(RegionError):
        AffineRegion(V, [lt(0, y), lt(y, 1), lt(0, t)])


def test_divergent_kernel_raises():
    V = ("y", "t")
    y, t = (MPoly.var(v, V) for v in V)
    box = AffineRegion(V, [lt(0, y), lt(y, 1), lt(0, t), lt(t, 1)])
    with pytest.raises(DivergentKernelError):
        kernel_integrate(box, MPoly.const(1, V), Fraction(1, 2))


def test_kernel_closed_form_on_box():
    # int_0^1 (1 - y/2)/y * y dy = 3/4
    V = ("y", "t")
    y, t = (MPoly.var(v, V) for v in V)
    box = AffineRegion(V, [lt(0, y), lt(y, 1), lt(0, t), lt(t, 1)])
    assert kernel_integrate(box, y, Fraction(1, 2)).exact == Fraction(3, 4)
    # away from 0 the 1/y part produces a logarithm: int_1^2 (1/y - 1/2) dy = ln 2 - 1/2
    far = AffineRegion(V, [lt(1, y), lt(y, 2), lt(0, t), lt(t, 1)])
    assert kernel_integrate(far, MPoly.const(1, V), Fraction(1, 2)).exact == LogValue(Fraction(-1, 2), {2: 1})


def test_additivity_E():
    th = Fraction(1, 4)
    V = ("y", "s", "t", "x")
    y, s, t, x = (MPoly.var(v, V) for v in V)
    p = y * (x - t + 2) * (1 + s * s)
    regs = ext_regions(3, th)
    assert kernel_integrate(regs["E"], p, th).exact == (
        kernel_integrate(regs["E1"], p, th).exact + kernel_integrate(regs["E2"], p, th).exact
    )


@pytest.mark.parametrize("lam", [Fraction(1, 2), Fraction(1), Fraction(6, 5)])
def test_scaling_law(lam):
    V = ("a", "b", "c", "d")
    region = AffineRegion(V, _simplex(V, lam))
    assert integrate_region(region, MPoly.const(1, V)) == lam ** 4 / 24


def _catalogue():
    out = []
    for theta in (Fraction(1, 4), Fraction(1, 2)):
        vs = ("y", "t")
        y, t = (MPoly.var(v, vs) for v in vs)
        out += [(f"D{theta}/{n}", r, y * (t * t + 3), theta) for n, r in std_regions(theta).items()]
        vs = ("y", "s", "t", "x")
        y, s, t, x = (MPoly.var(v, vs) for v in vs)
        out += [(f"E{theta}/{n}", r, y * (x + s) * t, theta) for n, r in ext_regions(4, theta).items() if n != "E"]
    vs = ("y", "t", "x")
    y, t, x = (MPoly.var(v, vs) for v in vs)
    ell = Fraction(5, 2)
    for n, r in eps_regions(Fraction(1, 4), ell, Fraction(1, 5)).items():
        out.append((f"H/{n}", r, y * (x * x + t), ell / 4))
    return out


@pytest.mark.parametrize("name,region,integrand,c", _catalogue(), ids=lambda v: v if isinstance(v, str) else "")
def test_exact_vs_quadrature(name, region, integrand, c):
    ex = kernel_integrate(region, integrand, c)
    qu = kernel_integrate(region, integrand, c, exact=False, tol=1e-11)
    assert abs(ex.numeric - qu.numeric) <= ex.error + qu.error + 1e-11
