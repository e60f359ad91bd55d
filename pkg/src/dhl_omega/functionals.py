"""The sieve functionals for collapsed test functions ``F = f(t_1 + ... + t_k)``.

Three regimes are supported:

* ``standard``: support on the simplex, factorial-free normalization
  (``I = int_0^1 f^2 t^(k-1)``).
* ``extended``: support on the extended simplex, normalization with the
  ``1/(k-3)!`` factor of the four-variable integrals over ``(y, s, t, x)``.
* ``epsilon``: support on ``(1+eps) R_k'`` with ``eta = 1 + eps``,
  normalization with ``1/(k-1)!`` in ``I`` and ``1/(k-2)!`` in ``Q``.

Each regime computes ``Omega = k (Q + theta (1 - ell) J) / I + ell k``; the
quotient does not depend on the normalization.  Every quadratic functional
has a bilinear counterpart obtained by replacing ``f^2`` with ``f g``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

from .exact import LogValue, format_rational
from .poly import MPoly, Poly, integrate_reciprocal
from .regions import AffineRegion, KernelResult, gt, kernel_integrate, lt

REGIMES = ("standard", "extended", "epsilon")


class ConstraintError(ValueError):
    """Parameters violate the admissibility conditions of the regime."""


class UnsupportedParamsError(ValueError):
    """Parameters are admissible but outside what the collapsed evaluators cover."""


def _frac(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("parameters must be exact rationals, not floats")
    return Fraction(x)


@dataclass(frozen=True)
class SieveParams:
    regime: str
    k: int
    theta: Fraction
    ell: Fraction = Fraction(1)
    eps: Fraction = Fraction(0)
    eta: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "theta", _frac(self.theta))
        object.__setattr__(self, "ell", _frac(self.ell))
        object.__setattr__(self, "eps", _frac(self.eps))
        eta = 1 + self.eps if self.eta is None else _frac(self.eta)
        object.__setattr__(self, "eta", eta)
        self.validate()

    def validate(self) -> None:
        if self.regime not in REGIMES:
            raise ConstraintError(f"unknown regime {self.regime!r}")
        if not isinstance(self.k, int) or self.k < 2:
            raise ConstraintError("k must be an integer >= 2")
        if not 0 < self.theta <= Fraction(1, 2):
            raise ConstraintError("theta must lie in (0, 1/2]")
        if not 0 <= self.eps < 1:
            raise ConstraintError("eps must lie in [0, 1)")
        if self.eta < 1 + self.eps:
            raise ConstraintError("eta must be at least 1 + eps")
        if self.ell < 1:
            raise ConstraintError("ell must be at least 1")
        if self.regime != "epsilon" and (self.eps or self.eta != 1):
            raise ConstraintError("eps and eta are only meaningful in the epsilon regime")
        if self.regime == "extended" and self.ell != 1:
            raise ConstraintError("the extended regime is defined for ell = 1 only")
        if self.eps > 0:
            if self.ell <= 1:
                raise ConstraintError("ell must exceed 1 when eps > 0")
            if 2 * self.theta * self.eta + 1 / self.ell > 1:
                raise ConstraintError(
                    f"2*theta*eta + 1/ell = {format_rational(2 * self.theta * self.eta + 1 / self.ell)} exceeds 1"
                )

    @classmethod
    def standard(cls, k: int, theta, ell=1) -> "SieveParams":
        return cls("standard", k, theta, ell)

    @classmethod
    def extended(cls, k: int, theta) -> "SieveParams":
        return cls("extended", k, theta)

    @classmethod
    def epsilon(cls, k: int, theta, eps, ell=None, eta=None) -> "SieveParams":
        eps = _frac(eps)
        theta = _frac(theta)
        eta = 1 + eps if eta is None else _frac(eta)
        if ell is None:
            ell = default_ell(theta, eta) if eps else Fraction(1)
        return cls("epsilon", k, theta, ell, eps, eta)

    @property
    def support_end(self) -> Fraction:
        """Right end of the one-dimensional support of ``f``."""
        return 1 + self.eps

    def as_dict(self) -> Dict[str, object]:
        return {
            "regime": self.regime,
            "k": self.k,
            "theta": format_rational(self.theta),
            "ell": format_rational(self.ell),
            "eps": format_rational(self.eps),
            "eta": format_rational(self.eta),
        }


def default_ell(theta, eta) -> Fraction:
    """The ``ell`` with ``2 theta eta + 1/ell = 1``."""
    theta, eta = _frac(theta), _frac(eta)
    gap = 1 - 2 * theta * eta
    if gap <= 0:
        raise ConstraintError("2*theta*eta >= 1 leaves no admissible ell")
    return 1 / gap


@dataclass
class FunctionalValue:
    exact: Optional[LogValue]
    numeric: float
    error_bound: float
    method: str
    parts: Dict[str, "FunctionalValue"] = field(default_factory=dict, repr=False)

    @classmethod
    def rational(cls, q: Fraction) -> "FunctionalValue":
        v = LogValue(q)
        return cls(v, float(q), abs(float(q)) * 2.0 ** -52, "exact")

    @classmethod
    def from_logvalue(cls, v: LogValue) -> "FunctionalValue":
        approx = v.to_float()
        num = float(approx.value)
        return cls(v, num, float(approx.error) + abs(num) * 2.0 ** -52, "exact")

    @classmethod
    def from_kernel(cls, r: KernelResult) -> "FunctionalValue":
        return cls(r.exact, r.numeric, r.error, r.method)

    def __add__(self, other: "FunctionalValue") -> "FunctionalValue":
        exact = self.exact + other.exact if self.exact is not None and other.exact is not None else None
        method = "exact" if exact is not None else "quadrature"
        if exact is not None:
            return FunctionalValue.from_logvalue(exact)
        return FunctionalValue(None, self.numeric + other.numeric, self.error_bound + other.error_bound, method)

    def scale(self, c: Fraction) -> "FunctionalValue":
        c = Fraction(c)
        if self.exact is not None:
            return FunctionalValue.from_logvalue(self.exact * c)
        return FunctionalValue(None, self.numeric * float(c), self.error_bound * abs(float(c)), self.method)

    def __float__(self) -> float:
        return self.numeric

    def as_dict(self) -> Dict[str, object]:
        out = {"value": self.numeric, "error_bound": self.error_bound, "method": self.method}
        if self.exact is not None:
            out["exact"] = str(self.exact)
        return out


def _mono(f: Poly) -> Poly:
    return f.monomial()


def _mp(f: Poly, var: str, variables) -> MPoly:
    return _mono(f).to_mpoly(var, variables)


def _pair_integrand(f: Poly, g: Poly, var: str, variables) -> MPoly:
    return _mp(f, var, variables) * _mp(g, var, variables)


def _diff(f: Poly, var: str, shift: str, variables) -> MPoly:
    p = _mp(f, var, variables)
    moved = p.substitute({var: MPoly.var(var, variables) + MPoly.var(shift, variables)})
    return p - moved


def _kernel_sum(pieces, c: Fraction, exact: bool, tol: float) -> FunctionalValue:
    total = None
    parts = {}
    for region, integrand in pieces:
        r = FunctionalValue.from_kernel(kernel_integrate(region, integrand, c, exact=exact, tol=tol))
        total = r if total is None else total + r
        if region.name:
            parts[region.name] = r if region.name not in parts else parts[region.name] + r
    if total is None:
        return FunctionalValue.rational(Fraction(0))
    total.parts = parts
    return total


# ---------------------------------------------------------------------------
# standard regime (variables y, t)

_STD_VARS = ("y", "t")


def std_regions(theta: Fraction) -> Dict[str, AffineRegion]:
    """The five pieces D1..D5 of the (y, t) domain, keyed by name."""
    y, t = (MPoly.var(v, _STD_VARS) for v in _STD_VARS)
    a = 1 / Fraction(theta)
    return {
        "D1": AffineRegion(_STD_VARS, [lt(0, y), lt(y, 1), lt(0, t), lt(t, 1 - y)], "D1"),
        "D2": AffineRegion(_STD_VARS, [lt(0, y), lt(y, 1), lt(1 - y, t), lt(t, 1)], "D2"),
        "D3": AffineRegion(_STD_VARS, [lt(1, y), lt(y, a - 1), lt(0, t), lt(t, 1)], "D3"),
        "D4": AffineRegion(_STD_VARS, [lt(a - 1, y), lt(y, a), lt(0, t), lt(t, a - y)], "D4"),
        "D5": AffineRegion(_STD_VARS, [lt(a - 1, y), lt(y, a), lt(a - y, t), lt(t, 1)], "D5"),
    }


def _std_pieces(f: Poly, g: Poly, k: int, theta: Fraction):
    V = _STD_VARS
    y, t = (MPoly.var(v, V) for v in V)
    a = 1 / theta
    w = t ** (k - 1)
    fg = _pair_integrand(f, g, "t", V)
    regs = std_regions(theta)
    return {
        "Q1": [(regs["D1"], _diff(f, "t", "y", V) * _diff(g, "t", "y", V) * w)],
        "Q2": [(regs[n], fg * w) for n in ("D2", "D3", "D4")],
        "Q3": [(regs["D5"], fg * (w - (t + y - a) ** (k - 1)))],
    }


def _std_I(f: Poly, g: Poly, k: int) -> FunctionalValue:
    p = _mono(f) * _mono(g)
    return FunctionalValue.rational(p.integral(0, 1, weight_power=k - 1))


def std_I(f: Poly, k: int) -> FunctionalValue:
    """``int_0^1 f(t)^2 t^(k-1) dt``."""
    return _std_I(f, f, k)


def _std_Q(f, g, k, theta, ell=1, exact=True, tol=1e-12, parts=False):
    theta, ell = Fraction(theta), Fraction(ell)
    pieces = _std_pieces(f, g, k, theta)
    comps = {name: _kernel_sum(p, ell * theta, exact, tol) for name, p in pieces.items()}
    total = comps["Q1"] + comps["Q2"] + comps["Q3"]
    total.parts = comps
    if not exact:
        total.method = "quadrature"
    return total


def std_Q(f: Poly, k: int, theta, ell=1, *, exact: bool = True, tol: float = 1e-12) -> FunctionalValue:
    """Sum of the three standard-regime Q pieces with kernel ``(1 - ell theta y)/y``.

    ``ell = 1`` gives the usual barred functional; the ``ell`` variant is the
    one paired with ``std_J`` in the Omega assembly.
    """
    return _std_Q(f, f, k, theta, ell, exact, tol)


def _std_J(f: Poly, g: Poly, k: int) -> FunctionalValue:
    if k < 2:
        raise ConstraintError("J needs k >= 2")
    F = _tail_integral(_mono(f), Fraction(1))
    G = _tail_integral(_mono(g), Fraction(1))
    return FunctionalValue.rational((k - 1) * (F * G).integral(0, 1, weight_power=k - 2))


def std_J(f: Poly, k: int) -> FunctionalValue:
    """``(k-1) int_0^1 (int_t^1 f)^2 t^(k-2) dt``."""
    return _std_J(f, f, k)


def _tail_integral(f: Poly, end: Fraction) -> Poly:
    """``t -> int_t^end f``."""
    coeffs = [Fraction(0)] + [c / (i + 1) for i, c in enumerate(f.coeffs)]
    anti = Poly(coeffs)
    return Poly([anti(end)]) - anti


# ---------------------------------------------------------------------------
# extended regime (k >= 3: variables y, s, t, x)

_EXT_VARS = ("y", "s", "t", "x")


def _need_ext(k: int) -> None:
    if k < 3:
        raise ConstraintError("the four-variable extended functionals need k >= 3")


def _ext_I(f: Poly, g: Poly, k: int) -> FunctionalValue:
    _need_ext(k)
    V = ("s", "t", "x")
    s, t, x = (MPoly.var(v, V) for v in V)
    p = _pair_integrand(f, g, "x", V) * (t - s) ** (k - 3)
    p = p.integrate("x", t, 1 + s / (k - 1))
    p = p.integrate("s", 0, t)
    p = p.integrate("t", 0, 1)
    return FunctionalValue.rational(p.constant_value() / math.factorial(k - 3))


def ext_I(f: Poly, k: int) -> FunctionalValue:
    """``1/(k-3)! int_0^1 int_0^t int_t^{1+s/(k-1)} f(x)^2 (t-s)^(k-3) dx ds dt``."""
    return _ext_I(f, f, k)


def ext_regions(k: int, theta: Fraction) -> Dict[str, AffineRegion]:
    """E1 (where x + y stays inside the support) and E2 (where it leaves)."""
    V = _EXT_VARS
    y, s, t, x = (MPoly.var(v, V) for v in V)
    top = 1 + s / (k - 1)
    base = [lt(0, s), lt(s, t), lt(t, 1), lt(t, x), lt(x, top)]
    return {
        "E1": AffineRegion(V, base + [lt(0, y), lt(y, top - x)], "E1"),
        "E2": AffineRegion(V, base + [lt(top - x, y), lt(y, 1 / Fraction(theta) + t - x)], "E2"),
        "E": AffineRegion(V, base + [lt(0, y), lt(y, 1 / Fraction(theta) + t - x)], "E"),
    }


def _ext_Q_closed(f: Poly, g: Poly, k: int, theta: Fraction) -> LogValue:
    """Closed form by integrating y first, then x, t and s."""
    V = _EXT_VARS
    y, s, t, x = (MPoly.var(v, V) for v in V)
    top = 1 + s / (k - 1)
    fx, gx = _mp(f, "x", V), _mp(g, "x", V)
    dfg = _diff(f, "x", "y", V) * _diff(g, "x", "y", V)
    inner1 = ((1 - theta * y) * dfg.divide_by_var("y")).integrate("y", 0, top - x)
    inner2 = integrate_reciprocal(1 - theta * y, "y", top - x, 1 / theta + t - x) * (fx * gx)
    body = (inner2 + inner1) * (t - s) ** (k - 3)
    body = body.integrate("x", t, top)
    body = body.integrate("t", s, 1)
    body = body.integrate("s", 0, 1)
    return body.to_logvalue() / math.factorial(k - 3)


def _ext_Q(f, g, k, theta, method="exact", tol=1e-12):
    _need_ext(k)
    theta = Fraction(theta)
    if method == "exact":
        return FunctionalValue.from_logvalue(_ext_Q_closed(f, g, k, theta))
    V = _EXT_VARS
    y, s, t, x = (MPoly.var(v, V) for v in V)
    w = (t - s) ** (k - 3) / math.factorial(k - 3)
    regs = ext_regions(k, theta)
    pieces = [
        (regs["E1"], _diff(f, "x", "y", V) * _diff(g, "x", "y", V) * w),
        (regs["E2"], _pair_integrand(f, g, "x", V) * w),
    ]
    exact = method == "region"
    out = _kernel_sum(pieces, theta, exact, tol)
    out.method = "exact" if exact else "quadrature"
    return out


def ext_Q(f: Poly, k: int, theta, *, method: str = "exact", tol: float = 1e-12) -> FunctionalValue:
    """Extended-regime Q over E = E1 u E2.

    ``method``: ``exact`` (iterated closed form, y innermost), ``region``
    (exact slicing in y through the region engine) or ``quadrature``.
    """
    return _ext_Q(f, f, k, theta, method, tol)


# k = 2 extended: support is the unit square; variables y, t (= t_1), x (= t_1 + t_2)

_EXT2_VARS = ("y", "t", "x")


def ext2_regions(theta: Fraction) -> Dict[str, AffineRegion]:
    V = _EXT2_VARS
    y, t, x = (MPoly.var(v, V) for v in V)
    a = 1 / Fraction(theta)
    base = [lt(0, t), lt(t, 1), lt(t, x), lt(x, t + 1), lt(0, y), lt(y, a - x + t)]
    return {
        "inside": AffineRegion(V, base + [lt(y, t + 1 - x)], "ext2-inside"),
        "outside": AffineRegion(V, base + [gt(y, t + 1 - x)], "ext2-outside"),
    }


def _ext2_I(f: Poly, g: Poly) -> FunctionalValue:
    p = _mono(f) * _mono(g)
    # int_0^2 p(x) min(x, 2 - x) dx
    left = p.integral(0, 1, weight_power=1)
    right = 2 * p.integral(1, 2) - p.integral(1, 2, weight_power=1)
    return FunctionalValue.rational(left + right)


def _ext2_Q(f, g, theta, exact=True, tol=1e-12):
    V = _EXT2_VARS
    regs = ext2_regions(Fraction(theta))
    pieces = [
        (regs["inside"], _diff(f, "x", "y", V) * _diff(g, "x", "y", V)),
        (regs["outside"], _pair_integrand(f, g, "x", V)),
    ]
    return _kernel_sum(pieces, Fraction(theta), exact, tol)


# ---------------------------------------------------------------------------
# epsilon regime (variables y, t, x)

_EPS_VARS = ("y", "t", "x")


def _need_collapsed(params: SieveParams) -> None:
    if params.eta != 1 + params.eps:
        raise UnsupportedParamsError("the collapsed epsilon evaluators require eta = 1 + eps")


def _eps_I(f: Poly, g: Poly, k: int, eps: Fraction) -> FunctionalValue:
    p = _mono(f) * _mono(g)
    return FunctionalValue.rational(p.integral(0, 1 + eps, weight_power=k - 1) / math.factorial(k - 1))


def eps_I(f: Poly, k: int, eps) -> FunctionalValue:
    """``1/(k-1)! int_0^{1+eps} f(t)^2 t^(k-1) dt``."""
    return _eps_I(f, f, k, Fraction(eps))


def _eps_J(f: Poly, g: Poly, k: int, eps: Fraction) -> FunctionalValue:
    if k < 2:
        raise ConstraintError("J needs k >= 2")
    F = _tail_integral(_mono(f), 1 + eps)
    G = _tail_integral(_mono(g), 1 + eps)
    val = (F * G).integral(0, 1 - eps, weight_power=k - 2) / math.factorial(k - 2)
    return FunctionalValue.rational(val)


def eps_J(f: Poly, k: int, eps) -> FunctionalValue:
    """``int_0^{1-eps} (int_t^{1+eps} f)^2 t^(k-2)/(k-2)! dt``."""
    return _eps_J(f, f, k, Fraction(eps))


def eps_regions(theta, ell, eps) -> Dict[str, AffineRegion]:
    """H split by whether ``x + y`` stays in the support and by ``y`` versus ``1/(ell theta)``.

    Keys ``diff_*`` carry the difference integrand, ``sq_*`` carry ``f(x)^2``;
    suffix ``lo`` is ``y < 1/(ell theta)`` and ``hi`` the gated part where
    additionally ``t < 1 - eps``.
    """
    theta, ell, eps = Fraction(theta), Fraction(ell), Fraction(eps)
    V = _EPS_VARS
    y, t, x = (MPoly.var(v, V) for v in V)
    end = 1 + eps
    a = 1 / theta
    cut = 1 / (ell * theta)
    base = [lt(0, y), lt(y, a), lt(0, t), lt(t, x), lt(x, end), lt(x - t, a - y)]
    out = {}
    lo = [lt(y, cut)] if cut < a else []
    out["diff_lo"] = AffineRegion(V, base + lo + [lt(x + y, end)], "H-diff-lo")
    out["sq_lo"] = AffineRegion(V, base + lo + [gt(x + y, end)], "H-sq-lo")
    if cut < a:
        hi = [gt(y, cut), lt(t, 1 - eps)]
        out["diff_hi"] = AffineRegion(V, base + hi + [lt(x + y, end)], "H-diff-hi")
        out["sq_hi"] = AffineRegion(V, base + hi + [gt(x + y, end)], "H-sq-hi")
    return out


def _eps_Q(f, g, k, theta, ell, eps, exact=True, tol=1e-12):
    theta, ell, eps = Fraction(theta), Fraction(ell), Fraction(eps)
    V = _EPS_VARS
    y, t, x = (MPoly.var(v, V) for v in V)
    w = t ** (k - 2) / math.factorial(k - 2)
    d = _diff(f, "x", "y", V) * _diff(g, "x", "y", V) * w
    sq = _pair_integrand(f, g, "x", V) * w
    pieces = [(r, d if name.startswith("diff") else sq) for name, r in eps_regions(theta, ell, eps).items()]
    return _kernel_sum(pieces, ell * theta, exact, tol)


def eps_Q(f: Poly, k: int, theta, ell, eps, *, exact: bool = True, tol: float = 1e-12) -> FunctionalValue:
    """``Q_(1) + Q_(2)`` with kernel ``(1 - ell theta y)/y`` over the H pieces."""
    return _eps_Q(f, f, k, theta, ell, eps, exact, tol)


# ---------------------------------------------------------------------------
# dispatch


@dataclass
class Components:
    I: FunctionalValue
    Q: FunctionalValue
    J: Optional[FunctionalValue]


def components(params: SieveParams, f: Poly, g: Optional[Poly] = None, *, method: str = "exact", tol: float = 1e-12) -> Components:
    """Bilinear I, Q, J of the regime at ``(f, g)`` (``g = f`` by default)."""
    g = f if g is None else g
    exact = method == "exact"
    k, th = params.k, params.theta
    if params.regime == "standard":
        return Components(_std_I(f, g, k), _std_Q(f, g, k, th, params.ell, exact, tol), _std_J(f, g, k))
    if params.regime == "extended":
        if k == 2:
            return Components(_ext2_I(f, g), _ext2_Q(f, g, th, exact, tol), None)
        return Components(_ext_I(f, g, k), _ext_Q(f, g, k, th, "exact" if exact else "quadrature", tol), None)
    _need_collapsed(params)
    return Components(
        _eps_I(f, g, k, params.eps),
        _eps_Q(f, g, k, th, params.ell, params.eps, exact, tol),
        _eps_J(f, g, k, params.eps),
    )


def numerator(params: SieveParams, comps: Components) -> FunctionalValue:
    """``k (Q + theta (1 - ell) J)``, the quadratic form on top of the quotient."""
    k = params.k
    out = comps.Q
    if comps.J is not None and params.ell != 1:
        out = out + comps.J.scale(params.theta * (1 - params.ell))
    return out.scale(k)


def omega_value(params: SieveParams, f: Poly, *, method: str = "exact", tol: float = 1e-12) -> FunctionalValue:
    """``k (Q + theta (1 - ell) J) / I + ell k`` for the regime of ``params``."""
    comps = components(params, f, method=method, tol=tol)
    if comps.I.exact is None or not comps.I.exact:
        raise ZeroDivisionError("I(f) = 0: the zero function has no quotient")
    num = numerator(params, comps)
    I = comps.I.exact.rational
    shift = params.ell * params.k
    if num.exact is not None:
        out = FunctionalValue.from_logvalue(num.exact / I + shift)
    else:
        out = FunctionalValue(None, num.numeric / float(I) + float(shift), num.error_bound / float(I), num.method)
    out.parts = {"I": comps.I, "Q": comps.Q}
    if comps.J is not None:
        out.parts["J"] = comps.J
    return out


def quadratic(params: SieveParams, f: Poly, which: str, *, method: str = "exact", tol: float = 1e-12) -> FunctionalValue:
    return bilinear(params, f, f, which, method=method, tol=tol)


def bilinear(params: SieveParams, f: Poly, g: Poly, which: str, *, method: str = "exact", tol: float = 1e-12) -> FunctionalValue:
    """Symmetric bilinear form of ``I``, ``Q`` or ``J`` (``which``) at ``(f, g)``."""
    which = which.upper()
    if which not in ("I", "Q", "J"):
        raise ValueError("which must be I, Q or J")
    if which == "I":
        # no quadrature involved; skip the Q work
        k = params.k
        if params.regime == "standard":
            return _std_I(f, g, k)
        if params.regime == "extended":
            return _ext2_I(f, g) if k == 2 else _ext_I(f, g, k)
        _need_collapsed(params)
        return _eps_I(f, g, k, params.eps)
    if which == "J":
        if params.regime == "extended":
            raise UnsupportedParamsError("J is not used in the extended regime (ell = 1)")
        if params.regime == "standard":
            return _std_J(f, g, params.k)
        _need_collapsed(params)
        return _eps_J(f, g, params.k, params.eps)
    return components(params, f, g, method=method, tol=tol).Q


# ---------------------------------------------------------------------------
# nested ordered-variable integral


def nested_L(k: int) -> MPoly:
    """The nested integral over ``s < t_2 < ... < t_{k-2}`` as a polynomial in ``(t, s)``.

    ``t_j`` runs from ``t_{j-1}`` (with ``t_1 = s``) up to
    ``(t - s - t_2 - ... - t_{j-1}) / (k - j)``.
    """
    if k < 3:
        raise ConstraintError("defined for k >= 3")
    inner = [f"t{j}" for j in range(2, k - 1)]
    V = ("t", "s") + tuple(inner)
    var = {v: MPoly.var(v, V) for v in V}
    p = MPoly.const(1, V)
    for j in range(k - 2, 1, -1):
        prev = var["s"] if j == 2 else var[f"t{j - 1}"]
        spent = var["t"] - var["s"]
        for i in range(2, j):
            spent = spent - var[f"t{i}"]
        p = p.integrate(f"t{j}", prev, spent / (k - j))
    return p.with_vars(("t", "s"))


def nested_L_closed(k: int) -> MPoly:
    V = ("t", "s")
    t, s = MPoly.var("t", V), MPoly.var("s", V)
    return (t - (k - 1) * s) ** (k - 3) / (math.factorial(k - 2) * math.factorial(k - 3))
