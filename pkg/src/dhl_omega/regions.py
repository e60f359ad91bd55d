"""Affine regions in a handful of variables and integration over them.

A region is an intersection of half-spaces.  Integrals of the form

    int (1 - c*y)/y * g(y) dy,    g(y) = int_{slice at y} p

are computed by slicing at the kernel variable ``y``: the slice is a convex
polytope in the remaining variables, integrated exactly (fan triangulation
plus the monomial formula on the standard simplex), and ``y`` is handled
either exactly (``g`` is a polynomial between consecutive breakpoints) or
by Gauss-Legendre panels.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exact import LogValue
from .poly import MPoly, NumericPoly

Point = Tuple[Fraction, ...]


class RegionError(ValueError):
    pass


class QuadratureError(ArithmeticError):
    pass


class DivergentKernelError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Constraint:
    """``sum(coeffs * v) < bound`` (``strict``) or ``<= bound``."""

    coeffs: Tuple[Fraction, ...]
    bound: Fraction
    strict: bool = True

    def slack(self, point: Sequence) -> Fraction:
        return self.bound - sum(c * x for c, x in zip(self.coeffs, point))


def _constraint(lhs, rhs, strict: bool, variables=None) -> Constraint:
    expr = _as_mpoly(lhs, rhs) * 1
    diff = _to_mpoly(lhs, expr.vars) - _to_mpoly(rhs, expr.vars)
    coeffs, const = diff.affine_parts()
    return Constraint(coeffs, -const, strict)


def _as_mpoly(*items) -> MPoly:
    for it in items:
        if isinstance(it, MPoly):
            return it
    raise RegionError("a constraint needs at least one side that is an MPoly")


def _to_mpoly(x, variables) -> MPoly:
    return x if isinstance(x, MPoly) else MPoly.const(Fraction(x), variables)


def lt(lhs, rhs) -> Constraint:
    """Constraint ``lhs < rhs`` between affine MPolys (or numbers)."""
    return _constraint(lhs, rhs, True)


def le(lhs, rhs) -> Constraint:
    return _constraint(lhs, rhs, False)


def gt(lhs, rhs) -> Constraint:
    return _constraint(rhs, lhs, True)


def ge(lhs, rhs) -> Constraint:
    return _constraint(rhs, lhs, False)


# ---------------------------------------------------------------------------
# exact linear algebra


def _solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[i][n] / m[i][i] for i in range(n)]


def _det(mat: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(mat)
    m = [list(r) for r in mat]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return det


def _affine_rank(points: Sequence[Sequence]) -> int:
    if not points:
        return -1
    base = points[0]
    rows = [[a - b for a, b in zip(p, base)] for p in points[1:]]
    rank = 0
    ncols = len(base)
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col] * inv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def enumerate_vertices(constraints: Sequence[Constraint], dim: int) -> List[Point]:
    """Vertices of ``{v : coeffs.v <= bound}`` by brute force over ``dim``-subsets."""
    if dim == 0:
        return [()] if all(c.bound >= 0 for c in constraints) else []
    seen = set()
    out = []
    for combo in itertools.combinations(constraints, dim):
        sol = _solve([c.coeffs for c in combo], [c.bound for c in combo])
        if sol is None:
            continue
        pt = tuple(sol)
        if pt in seen:
            continue
        if all(c.slack(pt) >= 0 for c in constraints):
            seen.add(pt)
            out.append(pt)
    out.sort()
    return out


# ---------------------------------------------------------------------------
# polytopes


@dataclass
class Polytope:
    """A convex polytope in ``variables`` with its vertex list."""

    variables: Tuple[str, ...]
    constraints: List[Constraint]
    vertices: List[Point]

    @property
    def dim(self) -> int:
        return _affine_rank(self.vertices)

    def is_empty(self) -> bool:
        return not self.vertices

    def is_full(self) -> bool:
        return bool(self.vertices) and self.dim == len(self.variables)


def polytope(variables: Sequence[str], constraints: Sequence[Constraint]) -> Polytope:
    variables = tuple(variables)
    kept = []
    for c in constraints:
        if any(c.coeffs):
            kept.append(c)
        elif c.bound < 0 or (c.strict and c.bound == 0):
            return Polytope(variables, list(constraints), [])
    return Polytope(variables, kept, enumerate_vertices(kept, len(variables)))


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _fan_order_2d(points: List[Sequence]) -> List[Sequence]:
    """Sort convex-position points counter-clockwise, starting at the lex-min one."""
    apex = min(points)
    rest = [p for p in points if p != apex]

    def cmp(a, b):
        c = _cross2(apex, a, b)
        if c > 0:
            return -1
        if c < 0:
            return 1
        da = (a[0] - apex[0]) ** 2 + (a[1] - apex[1]) ** 2
        db = (b[0] - apex[0]) ** 2 + (b[1] - apex[1]) ** 2
        return -1 if da < db else (1 if da > db else 0)

    return [apex] + sorted(rest, key=cmp_to_key(cmp))


def triangulate(poly: Polytope) -> List[Tuple[Point, ...]]:
    """Fan triangulation from the lexicographically lowest vertex."""
    d = len(poly.variables)
    verts = poly.vertices
    if not verts or _affine_rank(verts) < d:
        return []
    if d == 1:
        return [(verts[0], verts[-1])]
    if d == 2:
        ring = _fan_order_2d(verts)
        return [(ring[0], ring[i], ring[i + 1]) for i in range(1, len(ring) - 1)]
    if d == 3:
        apex = verts[0]
        simplices = []
        facets = set()
        for c in poly.constraints:
            on = tuple(sorted(v for v in verts if c.slack(v) == 0))
            if len(on) < 3 or on in facets or apex in on:
                continue
            if _affine_rank(list(on)) != 2:
                continue
            facets.add(on)
            drop = max(range(3), key=lambda j: abs(c.coeffs[j]))
            keep = [j for j in range(3) if j != drop]
            proj = {tuple(v[j] for j in keep): v for v in on}
            ring = [proj[p] for p in _fan_order_2d(list(proj))]
            for i in range(1, len(ring) - 1):
                simplices.append((apex, ring[0], ring[i], ring[i + 1]))
        return simplices
    raise RegionError(f"triangulation implemented for dimension <= 3, got {d}")


@lru_cache(maxsize=None)
def _simplex_moment(alpha: Tuple[int, ...]) -> Fraction:
    d = len(alpha)
    num = 1
    for a in alpha:
        num *= math.factorial(a)
    return Fraction(num, math.factorial(sum(alpha) + d))


def integrate_simplex(p: MPoly, simplex: Sequence[Point]) -> Fraction:
    """Exact integral of ``p`` over the simplex with the given vertices."""
    d = len(p.vars)
    v0 = simplex[0]
    cols = [[vi[j] - v0[j] for j in range(d)] for vi in simplex[1:]]
    det = _det([[cols[i][j] for i in range(d)] for j in range(d)])
    if det == 0:
        return Fraction(0)
    images = {}
    for j, name in enumerate(p.vars):
        images[name] = MPoly.affine(
            {p.vars[i]: cols[i][j] for i in range(d)}, v0[j], p.vars
        )
    q = p.substitute(images)
    total = sum((c * _simplex_moment(e) for e, c in q.terms.items()), Fraction(0))
    return abs(det) * total


def integrate_polytope(p: MPoly, poly: Polytope) -> Fraction:
    """Exact integral of a polynomial over a bounded polytope (0 if degenerate)."""
    if p.vars != poly.variables:
        p = p.with_vars(poly.variables)
    if p.is_zero():
        return Fraction(0)
    if len(poly.variables) == 1:
        if len(poly.vertices) < 2:
            return Fraction(0)
        (a,), (b,) = poly.vertices[0], poly.vertices[-1]
        return p.integrate(p.vars[0], a, b).constant_value()
    return sum((integrate_simplex(p, s) for s in triangulate(poly)), Fraction(0))


# ---------------------------------------------------------------------------
# regions


class AffineRegion:
    """Bounded intersection of affine half-spaces over named variables."""

    def __init__(self, variables: Sequence[str], constraints: Sequence[Constraint], name: str = "", check_bounded: bool = True):
        self.variables = tuple(variables)
        self.constraints = list(constraints)
        self.name = name
        for c in self.constraints:
            if len(c.coeffs) != len(self.variables):
                raise RegionError("constraint arity does not match the region variables")
        self._vertices: Optional[List[Point]] = None
        if check_bounded:
            self.check_bounded()

    def __repr__(self):
        return f"AffineRegion({self.name or '?'}, {self.variables}, {len(self.constraints)} constraints)"

    def intersect(self, *extra: Constraint, name: str = "") -> "AffineRegion":
        return AffineRegion(self.variables, self.constraints + list(extra), name or self.name, check_bounded=False)

    def check_bounded(self) -> None:
        """LP sup/inf of every coordinate; raises if some coordinate is unbounded."""
        from scipy.optimize import linprog

        A = np.array([[float(x) for x in c.coeffs] for c in self.constraints], dtype=float)
        b = np.array([float(c.bound) for c in self.constraints], dtype=float)
        n = len(self.variables)
        for j in range(n):
            for sign in (1.0, -1.0):
                cost = np.zeros(n)
                cost[j] = sign
                res = linprog(cost, A_ub=A, b_ub=b, bounds=[(None, None)] * n, method="highs")
                if res.status == 3:
                    raise RegionError(f"region {self.name!r} is unbounded in {self.variables[j]}")
                if res.status == 2:
                    return  # infeasible, trivially bounded

    def vertices(self) -> List[Point]:
        if self._vertices is None:
            self._vertices = enumerate_vertices(self.constraints, len(self.variables))
        return self._vertices

    def vertex_dicts(self) -> List[Dict[str, Fraction]]:
        return [dict(zip(self.variables, v)) for v in self.vertices()]

    def is_empty(self) -> bool:
        verts = self.vertices()
        return not verts or _affine_rank(verts) < len(self.variables)

    def range_of(self, var: str) -> Tuple[Fraction, Fraction]:
        j = self.variables.index(var)
        vals = [v[j] for v in self.vertices()]
        if not vals:
            raise RegionError(f"region {self.name!r} is empty")
        return min(vals), max(vals)

    def as_polytope(self) -> Polytope:
        return Polytope(self.variables, self.constraints, self.vertices())

    def slice(self, value, var: str = "y") -> Polytope:
        """The polytope in the remaining variables at ``var = value``."""
        value = Fraction(value)
        j = self.variables.index(var)
        rest = tuple(v for i, v in enumerate(self.variables) if i != j)
        cons = []
        for c in self.constraints:
            coeffs = tuple(x for i, x in enumerate(c.coeffs) if i != j)
            cons.append(Constraint(coeffs, c.bound - c.coeffs[j] * value, c.strict))
        return polytope(rest, cons)


def slice_region(region: AffineRegion, y, var: str = "y") -> Polytope:
    return region.slice(y, var)


def breakpoints_of(region: AffineRegion, var: str = "y") -> List[Fraction]:
    """Values of ``var`` at which the combinatorial type of the slice can change.

    These are exactly the ``var``-coordinates of the region's vertices.
    """
    if region.is_empty():
        return []
    j = region.variables.index(var)
    return sorted({v[j] for v in region.vertices()})


def merged_breakpoints(regions: Sequence[AffineRegion], var: str = "y") -> List[Fraction]:
    out = set()
    for r in regions:
        out.update(breakpoints_of(r, var))
    return sorted(out)


# ---------------------------------------------------------------------------
# exact path for kernel integrals


def _interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> List[Fraction]:
    """Monomial coefficients of the interpolating polynomial (Newton form)."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        new = [Fraction(0)] * n
        for k in range(n - 1):
            new[k + 1] += poly[k]
            new[k] -= poly[k] * xs[i]
        new[0] += coef[i]
        poly = new
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _eval_coeffs(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def slice_polynomial(region: AffineRegion, integrand: MPoly, a: Fraction, b: Fraction, var: str = "y") -> List[Fraction]:
    """``g(y) = int_{slice} integrand`` on ``(a, b)`` as monomial coefficients in ``y``.

    Between breakpoints the slice vertices are affine in ``y``, so ``g`` is a
    polynomial of degree at most ``deg(integrand) + dim(slice)``; it is
    recovered by exact interpolation and checked at one extra node.
    """
    rest_dim = len(region.variables) - 1
    deg = integrand.degree() + rest_dim
    npts = deg + 2
    xs = [a + (b - a) * Fraction(i + 1, npts + 1) for i in range(npts)]
    ys = []
    for x in xs:
        sl = region.slice(x, var)
        p = integrand.evaluate({var: x})
        rest = sl.variables
        ys.append(integrate_polytope(_drop_var(p, var, rest), sl))
    coeffs = _interpolate(xs[:-1], ys[:-1])
    if _eval_coeffs(coeffs, xs[-1]) != ys[-1]:
        raise RegionError(f"slice integral of {region.name!r} is not polynomial on ({a}, {b})")
    return coeffs


def _drop_var(p: MPoly, var: str, rest: Sequence[str]) -> MPoly:
    j = p.vars.index(var)
    terms = {}
    for e, c in p.terms.items():
        if e[j]:
            raise RegionError("variable still present")
        terms[tuple(x for i, x in enumerate(e) if i != j)] = c
    return MPoly(tuple(rest), terms)


def kernel_piece_exact(coeffs: Sequence[Fraction], a: Fraction, b: Fraction, c: Fraction) -> LogValue:
    """Exact ``int_a^b (1 - c*y)/y * g(y) dy`` for ``g`` given by coefficients."""
    g0 = coeffs[0] if coeffs else Fraction(0)
    h = list(coeffs[1:])  # g = g0 + y*h
    # (1 - c y) h(y) integrated
    poly = [Fraction(0)] * (len(h) + 1)
    for i, x in enumerate(h):
        poly[i] += x
        poly[i + 1] -= c * x
    val = Fraction(0)
    for i, x in enumerate(poly):
        val += x * (b ** (i + 1) - a ** (i + 1)) / (i + 1)
    out = LogValue(val - c * g0 * (b - a))
    if g0:
        if a <= 0 or b <= 0:
            raise DivergentKernelError("slice integral does not vanish at y = 0")
        out = out + LogValue.log(b / a, g0)
    return out


# ---------------------------------------------------------------------------
# numeric path (floats)


_LEG = {}


def _leggauss(n: int):
    if n not in _LEG:
        _LEG[n] = np.polynomial.legendre.leggauss(n)
    return _LEG[n]


@lru_cache(maxsize=None)
def simplex_rule(dim: int, degree: int) -> Tuple[np.ndarray, np.ndarray]:
    """Collapsed (Duffy) Gauss-Jacobi rule on the unit simplex, exact to ``degree``."""
    from scipy.special import roots_jacobi

    n = max(1, (degree + 2) // 2)
    axes = []
    for k in range(dim):
        alpha = dim - 1 - k
        x, w = roots_jacobi(n, alpha, 0)
        # map [-1,1] with (1-x)^alpha to [0,1] with (1-a)^alpha
        a = (x + 1) / 2
        w = w / 2 ** (alpha + 1)
        axes.append((a, w))
    grids = np.meshgrid(*[ax[0] for ax in axes], indexing="ij")
    wgrid = np.ones_like(grids[0])
    for k, g in enumerate(np.meshgrid(*[ax[1] for ax in axes], indexing="ij")):
        wgrid = wgrid * g
    a = [g.ravel() for g in grids]
    pts = np.zeros((a[0].size, dim))
    remaining = np.ones(a[0].size)
    for k in range(dim):
        if k < dim - 1:
            pts[:, k] = remaining * a[k]
            remaining = remaining * (1 - a[k])
        else:
            pts[:, k] = remaining * a[k]
    return pts, wgrid.ravel()


class FloatSlicer:
    """Slices a region at float ``y`` and integrates a polynomial numerically."""

    def __init__(self, region: AffineRegion, integrand: MPoly, var: str = "y"):
        self.region = region
        j = region.variables.index(var)
        self.j = j
        self.rest = tuple(v for i, v in enumerate(region.variables) if i != j)
        self.A = np.array([[float(x) for i, x in enumerate(c.coeffs) if i != j] for c in region.constraints])
        self.Ay = np.array([float(c.coeffs[j]) for c in region.constraints])
        self.b = np.array([float(c.bound) for c in region.constraints])
        if integrand.vars != region.variables:
            integrand = integrand.with_vars(region.variables)
        self.poly = NumericPoly(integrand)
        self.dim = len(self.rest)
        self.pts, self.wts = simplex_rule(self.dim, max(integrand.degree(), 0)) if self.dim else (None, None)
        scale = np.abs(self.A).sum(axis=1) + np.abs(self.b) + np.abs(self.Ay)
        self.tol = 1e-11 * np.maximum(scale, 1.0)
        combos = list(itertools.combinations(range(len(self.b)), self.dim))
        self.combos = [c for c in combos if abs(np.linalg.det(self.A[list(c)])) > 1e-12]

    def vertices(self, y: float) -> np.ndarray:
        b = self.b - self.Ay * y
        keep = np.any(self.A != 0, axis=1)
        if np.any((~keep) & (b < -self.tol)):
            return np.zeros((0, self.dim))
        out = []
        for combo in self.combos:
            idx = list(combo)
            x = np.linalg.solve(self.A[idx], b[idx])
            if np.all(self.A @ x <= b + self.tol):
                if not any(np.allclose(x, v, rtol=0, atol=1e-10) for v in out):
                    out.append(x)
        return np.array(out).reshape(-1, self.dim)

    def simplices(self, y: float) -> List[np.ndarray]:
        v = self.vertices(y)
        d = self.dim
        if len(v) < d + 1:
            return []
        if d == 1:
            return [np.array([[v[:, 0].min()], [v[:, 0].max()]])]
        order = np.lexsort(v.T[::-1])
        v = v[order]
        apex = v[0]
        if d == 2:
            rest = v[1:]
            ang = np.arctan2(rest[:, 1] - apex[1], rest[:, 0] - apex[0])
            rest = rest[np.argsort(ang, kind="stable")]
            return [np.array([apex, rest[i], rest[i + 1]]) for i in range(len(rest) - 1)]
        if d == 3:
            b = self.b - self.Ay * y
            out = []
            seen = set()
            for r in range(len(b)):
                if not np.any(self.A[r]):
                    continue
                on = np.where(np.abs(v @ self.A[r] - b[r]) <= 1e-10 * (1 + abs(b[r])))[0]
                key = tuple(on)
                if len(on) < 3 or 0 in on or key in seen:
                    continue
                seen.add(key)
                fv = v[on]
                c = fv.mean(axis=0)
                normal = self.A[r] / np.linalg.norm(self.A[r])
                e1 = fv[0] - c
                if np.linalg.norm(e1) < 1e-14:
                    e1 = fv[1] - c
                e1 = e1 / np.linalg.norm(e1)
                e2 = np.cross(normal, e1)
                ang = np.arctan2((fv - c) @ e2, (fv - c) @ e1)
                ring = fv[np.argsort(ang)]
                if abs(np.linalg.det(np.array([ring[1] - ring[0], ring[2] - ring[0], apex - ring[0]]))) < 1e-14 and len(ring) == 3:
                    continue
                for i in range(1, len(ring) - 1):
                    out.append(np.array([apex, ring[0], ring[i], ring[i + 1]]))
            return out
        raise RegionError("float slicing implemented for dimension <= 3")

    def __call__(self, y: float) -> Tuple[float, float]:
        """Slice integral at ``y`` and a matching absolute-value scale."""
        total = 0.0
        scale = 0.0
        if self.dim == 0:
            raise RegionError("cannot slice a one-dimensional region")
        for s in self.simplices(y):
            v0 = s[0]
            M = (s[1:] - v0).T
            det = abs(np.linalg.det(M))
            if det == 0.0:
                continue
            x = v0 + self.pts @ M.T
            full = np.insert(x, self.j, y, axis=1)
            val, mag = self.poly.with_abs(full)
            total += det * float(self.wts @ val)
            scale += det * float(self.wts @ mag)
        return total, scale


@dataclass
class KernelResult:
    exact: Optional[LogValue]
    numeric: float
    error: float
    method: str
    pieces: List[Tuple[Fraction, Fraction]] = field(default_factory=list)


def _gl(fun, a: float, b: float, n: int = 32):
    x, w = _leggauss(n)
    ys = 0.5 * (b - a) * x + 0.5 * (a + b)
    vals = [fun(y) for y in ys]
    v = np.array([p[0] for p in vals])
    m = np.array([p[1] for p in vals])
    half = 0.5 * (b - a)
    return half * float(w @ v), half * float(w @ np.abs(m))


def kernel_integrate(
    region: AffineRegion,
    integrand: MPoly,
    c: Fraction,
    *,
    var: str = "y",
    tol: float = 1e-12,
    exact: bool = True,
    order: int = 32,
    max_depth: int = 12,
) -> KernelResult:
    """``int (1 - c*y)/y * (int_{slice at y} integrand) dy`` over ``region``.

    ``exact=True`` returns the closed form (and its float value);
    ``exact=False`` uses adaptive Gauss-Legendre panels between breakpoints.
    """
    c = Fraction(c)
    if integrand.vars != region.variables:
        integrand = integrand.with_vars(region.variables)
    bps = breakpoints_of(region, var)
    pieces = list(zip(bps, bps[1:]))
    if integrand.is_zero() or not pieces:
        return KernelResult(LogValue(0) if exact else None, 0.0, 0.0, "exact" if exact else "quadrature", pieces)
    if exact:
        total = LogValue(0)
        for a, b in pieces:
            coeffs = slice_polynomial(region, integrand, a, b, var)
            total = total + kernel_piece_exact(coeffs, a, b, c)
        approx = total.to_float()
        return KernelResult(total, float(approx.value), float(approx.error) + abs(float(approx.value)) * 2.0 ** -52, "exact", pieces)

    slicer = FloatSlicer(region, integrand, var)
    cf = float(c)

    def weighted(y):
        g, m = slicer(y)
        k = (1.0 - cf * y) / y
        return k * g, abs(k) * m

    span = float(bps[-1] - bps[0])
    value = 0.0
    err = 0.0
    roundoff = 0.0

    def panel(a, b, depth):
        whole, mag = _gl(weighted, a, b, order)
        m = 0.5 * (a + b)
        left, mag_l = _gl(weighted, a, m, order)
        right, mag_r = _gl(weighted, m, b, order)
        diff = abs(whole - (left + right))
        local_tol = max(tol * (b - a) / span, 1e-300)
        if diff <= local_tol or diff <= 64 * np.finfo(float).eps * (mag_l + mag_r):
            return left + right, diff, mag_l + mag_r
        if depth >= max_depth:
            raise QuadratureError(f"tolerance {tol} not reached within panel budget on ({a}, {b})")
        v1, e1, m1 = panel(a, m, depth + 1)
        v2, e2, m2 = panel(m, b, depth + 1)
        return v1 + v2, e1 + e2, m1 + m2

    for a, b in pieces:
        v, e, m = panel(float(a), float(b), 0)
        value += v
        err += e
        roundoff += m
    err += 256 * np.finfo(float).eps * roundoff
    return KernelResult(None, value, err, "quadrature", pieces)


def integrate_region(region: AffineRegion, integrand: MPoly) -> Fraction:
    """Exact integral of a polynomial over the full region (any dimension up to 4).

    Slices in the first variable and integrates the piecewise polynomial.
    """
    if integrand.vars != region.variables:
        integrand = integrand.with_vars(region.variables)
    if len(region.variables) <= 3:
        return integrate_polytope(integrand, region.as_polytope())
    var = region.variables[0]
    total = Fraction(0)
    for a, b in zip(breakpoints_of(region, var), breakpoints_of(region, var)[1:]):
        coeffs = slice_polynomial(region, integrand, a, b, var)
        for i, x in enumerate(coeffs):
            total += x * (b ** (i + 1) - a ** (i + 1)) / (i + 1)
    return total
