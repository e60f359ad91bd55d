"""Polynomials over the rationals, plus polynomial-times-logarithm forms.

``Poly`` is univariate with a declared basis (powers of ``x`` or of
``c - x``).  ``MPoly`` is a sparse multivariate polynomial over a fixed
ordered tuple of variable names.  ``LogPoly`` adds terms
``coeff * ln(affine)`` and supports exact iterated integration with affine
limits.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .exact import LogValue, RationalLike, format_rational, parse_rational, prime_exponents

Exp = Tuple[int, ...]
Number = Union[int, Fraction]

MAX_ARITY = 8


class ArityError(ValueError):
    pass


class UnsupportedFormError(TypeError):
    """Raised for products of logarithms and other forms outside Q[v] + Q[v]*ln(affine)."""


class DivergentIntegralError(ArithmeticError):
    pass


class LogDomainError(ValueError):
    """A logarithm argument is non-positive inside the integration domain."""


# ---------------------------------------------------------------------------
# univariate


def _mul_lists(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _trim(c: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _reflect(coeffs: Sequence[Fraction], c: Fraction) -> Tuple[Fraction, ...]:
    """Coefficients of ``p(c - u)`` in powers of ``u`` given those of ``p``."""
    out = [Fraction(0)] * len(coeffs)
    power = [Fraction(1)]
    lin = [c, Fraction(-1)]
    for a in coeffs:
        if a:
            for i, b in enumerate(power):
                out[i] += a * b
        power = _mul_lists(power, lin)
    return _trim(out)


class Poly:
    """Univariate polynomial ``sum(coeffs[j] * b(x)**j)``.

    ``shift is None`` means the monomial basis ``b(x) = x``; otherwise
    ``b(x) = shift - x``.
    """

    __slots__ = ("coeffs", "shift")

    def __init__(self, coeffs: Iterable[RationalLike] = (), shift: Optional[RationalLike] = None):
        self.coeffs = _trim(Fraction(c) for c in coeffs)
        self.shift = None if shift is None else Fraction(shift)

    @classmethod
    def parse(cls, literal: str, eps: Optional[RationalLike] = None) -> "Poly":
        """Parse ``"c0,c1,...@basis"`` with basis ``x``, ``1-x`` or ``1+eps-x``."""
        body, _, basis = literal.partition("@")
        basis = (basis or "x").replace(" ", "")
        coeffs = [parse_rational(c) for c in body.split(",") if c.strip()]
        if basis == "x":
            return cls(coeffs)
        if basis == "1-x":
            return cls(coeffs, 1)
        if basis == "1+eps-x":
            if eps is None:
                raise ValueError("basis 1+eps-x needs a value for eps")
            return cls(coeffs, 1 + Fraction(eps))
        raise ValueError(f"unknown basis {basis!r}")

    def literal(self) -> str:
        body = ",".join(format_rational(c) for c in self.coeffs) or "0"
        if self.shift is None:
            return f"{body}@x"
        if self.shift == 1:
            return f"{body}@1-x"
        return f"{body}@{format_rational(self.shift)}-x"

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def is_zero(self) -> bool:
        return not self.coeffs

    def monomial(self) -> "Poly":
        if self.shift is None:
            return self
        return Poly(_reflect(self.coeffs, self.shift))

    def change_basis(self, shift: Optional[RationalLike]) -> "Poly":
        shift = None if shift is None else Fraction(shift)
        if shift == self.shift:
            return self
        mono = self.monomial()
        if shift is None:
            return mono
        return Poly(_reflect(mono.coeffs, shift), shift)

    def __call__(self, x):
        b = x if self.shift is None else self.shift - x
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * b + c
        return acc

    def _unify(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        if other.shift == self.shift:
            return self, other
        return self.monomial(), other.monomial()

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly([other], self.shift)
        a, b = self._unify(other)
        n = max(len(a.coeffs), len(b.coeffs))
        ca = list(a.coeffs) + [Fraction(0)] * (n - len(a.coeffs))
        cb = list(b.coeffs) + [Fraction(0)] * (n - len(b.coeffs))
        return Poly([x + y for x, y in zip(ca, cb)], a.shift)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.shift)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs], self.shift)
        a, b = self._unify(other)
        return Poly(_mul_lists(a.coeffs, b.coeffs), a.shift)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs and self.shift == other.shift

    def __hash__(self):
        return hash((self.coeffs, self.shift))

    def equals(self, other: "Poly") -> bool:
        """Pointwise equality regardless of basis."""
        return self.monomial().coeffs == other.monomial().coeffs

    def to_mpoly(self, var: str, variables: Sequence[str]) -> "MPoly":
        mono = self.monomial()
        i = list(variables).index(var)
        n = len(variables)
        terms = {}
        for j, c in enumerate(mono.coeffs):
            if c:
                e = [0] * n
                e[i] = j
                terms[tuple(e)] = c
        return MPoly(variables, terms)

    def integral(self, a: RationalLike, b: RationalLike, weight_power: int = 0) -> Fraction:
        """Exact ``int_a^b p(x) x**weight_power dx``."""
        mono = self.monomial().coeffs
        a, b = Fraction(a), Fraction(b)
        total = Fraction(0)
        for j, c in enumerate(mono):
            n = j + weight_power + 1
            total += c * (b ** n - a ** n) / n
        return total

    def __repr__(self):
        return f"Poly({self.literal()!r})"


def shift_substitute(p: Poly, x: str = "x", y: str = "y", variables: Optional[Sequence[str]] = None) -> "MPoly":
    """The bivariate expansion of ``p(x + y)``."""
    variables = tuple(variables or (x, y))
    return p.to_mpoly(x, variables).substitute({x: MPoly.var(x, variables) + MPoly.var(y, variables)})


# ---------------------------------------------------------------------------
# multivariate


class MPoly:
    """Sparse polynomial with rational coefficients over named variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Optional[Mapping[Exp, Number]] = None):
        variables = tuple(variables)
        if len(variables) > MAX_ARITY:
            raise ArityError(f"at most {MAX_ARITY} variables supported, got {len(variables)}")
        self.vars = variables
        clean: Dict[Exp, Fraction] = {}
        n = len(variables)
        for e, c in (terms or {}).items():
            if c:
                if len(e) != n:
                    raise ArityError("exponent tuple does not match the variable count")
                clean[tuple(e)] = Fraction(c)
        self.terms = clean

    # construction -----------------------------------------------------------
    @classmethod
    def const(cls, c: Number, variables: Sequence[str]) -> "MPoly":
        return cls(variables, {(0,) * len(tuple(variables)): c})

    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> "MPoly":
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(variables, {tuple(e): 1})

    @classmethod
    def affine(cls, coeffs: Mapping[str, Number], constant: Number, variables: Sequence[str]) -> "MPoly":
        variables = tuple(variables)
        out = cls.const(constant, variables)
        for name, c in coeffs.items():
            out = out + cls.var(name, variables) * Fraction(c)
        return out

    def with_vars(self, variables: Sequence[str]) -> "MPoly":
        """Re-express over a superset (or reordering) of the current variables."""
        variables = tuple(variables)
        idx = []
        for v in self.vars:
            if v not in variables:
                if any(e[self.vars.index(v)] for e in self.terms):
                    raise ArityError(f"variable {v} is used but missing from {variables}")
                idx.append(None)
            else:
                idx.append(variables.index(v))
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for k, j in enumerate(idx):
                if j is not None:
                    ne[j] = e[k]
            terms[tuple(ne)] = c
        return MPoly(variables, terms)

    # inspection -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        i = self.vars.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def uses(self, var: str) -> bool:
        i = self.vars.index(var)
        return any(e[i] for e in self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def affine_parts(self) -> Tuple[Tuple[Fraction, ...], Fraction]:
        if self.degree() > 1:
            raise ValueError("not an affine expression")
        n = len(self.vars)
        coeffs = [Fraction(0)] * n
        const = Fraction(0)
        for e, c in self.terms.items():
            if any(e):
                coeffs[e.index(1)] = c
            else:
                const = c
        return tuple(coeffs), const

    # arithmetic -------------------------------------------------------------
    def _check(self, other: "MPoly"):
        if other.vars != self.vars:
            raise ArityError(f"variable mismatch: {self.vars} vs {other.vars}")

    def _coerce(self, other):
        if isinstance(other, MPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(other, self.vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return MPoly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MPoly(self.vars)
            return MPoly(self.vars, {e: c * other for e, c in self.terms.items()})
        if isinstance(other, LogPoly):
            return other * self
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: Dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MPoly(self.vars, terms)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / Fraction(scalar))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = MPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        other = self._coerce(other) if isinstance(other, (MPoly, int, Fraction)) else NotImplemented
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # calculus and substitution ----------------------------------------------
    def substitute(self, images: Mapping[str, Union["MPoly", Number]]) -> "MPoly":
        """Simultaneously replace variables by polynomials (over the same variables)."""
        full = []
        for v in self.vars:
            img = images.get(v)
            if img is None:
                full.append(MPoly.var(v, self.vars))
            elif isinstance(img, MPoly):
                self._check(img)
                full.append(img)
            else:
                full.append(MPoly.const(img, self.vars))
        return _horner(self.terms, 0, full, self.vars)

    def evaluate(self, values: Mapping[str, Number]) -> "MPoly":
        """Partial evaluation at rational values; the variable slots are kept."""
        idx = {self.vars.index(k): Fraction(v) for k, v in values.items()}
        terms: Dict[Exp, Fraction] = {}
        for e, c in self.terms.items():
            ne = list(e)
            for i, val in idx.items():
                if ne[i]:
                    c = c * val ** ne[i]
                    ne[i] = 0
            t = tuple(ne)
            terms[t] = terms.get(t, 0) + c
        return MPoly(self.vars, terms)

    def __call__(self, *args, **kwargs) -> Fraction:
        values = dict(zip(self.vars, args))
        values.update(kwargs)
        return self.evaluate(values).constant_value()

    def derivative(self, var: str) -> "MPoly":
        i = self.vars.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                terms[tuple(ne)] = c * e[i]
        return MPoly(self.vars, terms)

    def antiderivative(self, var: str) -> "MPoly":
        i = self.vars.index(var)
        terms = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[i] += 1
            terms[tuple(ne)] = c / ne[i]
        return MPoly(self.vars, terms)

    def divide_by_var(self, var: str) -> "MPoly":
        """Exact division by ``var``; fails unless every term contains it."""
        i = self.vars.index(var)
        terms = {}
        for e, c in self.terms.items():
            if not e[i]:
                raise ArithmeticError(f"polynomial is not divisible by {var}")
            ne = list(e)
            ne[i] -= 1
            terms[tuple(ne)] = c
        return MPoly(self.vars, terms)

    def integrate(self, var: str, lower, upper) -> "MPoly":
        """Definite integral in ``var`` between affine limits in the other variables."""
        lower = _limit(lower, self.vars, var)
        upper = _limit(upper, self.vars, var)
        anti = self.antiderivative(var)
        return anti.substitute({var: upper}) - anti.substitute({var: lower})

    # numeric ----------------------------------------------------------------
    def numeric(self) -> "NumericPoly":
        return NumericPoly(self)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            coef = format_rational(c)
            parts.append(f"{coef}*{mono}" if mono else coef)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"MPoly({self.vars}, {str(self)!r})"


def _horner(terms: Mapping[Exp, Fraction], idx: int, images: Sequence[MPoly], variables) -> MPoly:
    if idx == len(images):
        return MPoly.const(sum(terms.values(), Fraction(0)), variables)
    buckets: Dict[int, Dict[Exp, Fraction]] = {}
    for e, c in terms.items():
        buckets.setdefault(e[idx], {})[e] = c
    if not buckets:
        return MPoly(variables)
    result = MPoly(variables)
    img = images[idx]
    for a in range(max(buckets), -1, -1):
        if a != max(buckets):
            result = result * img
        if a in buckets:
            result = result + _horner(buckets[a], idx + 1, images, variables)
    return result


def _limit(value, variables, var) -> MPoly:
    if isinstance(value, MPoly):
        if value.vars != tuple(variables):
            value = value.with_vars(variables)
        if value.uses(var):
            raise ValueError(f"integration limit depends on the integration variable {var}")
        if value.degree() > 1:
            raise ValueError("integration limits must be affine")
        return value
    return MPoly.const(Fraction(value), variables)


class NumericPoly:
    """Float evaluator for an MPoly: ``p(points)`` with ``points[..., nvars]``."""

    def __init__(self, p: MPoly):
        self.vars = p.vars
        items = sorted(p.terms.items())
        self.exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), len(p.vars))
        self.coeffs = np.array([float(c) for _, c in items], dtype=float)
        self.abs_coeffs = np.abs(self.coeffs)
        self.max_exp = self.exps.max(axis=0) if len(items) else np.zeros(len(p.vars), dtype=np.int64)

    def _monomials(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        out = np.ones(points.shape[:-1] + (len(self.coeffs),))
        for j in range(points.shape[-1]):
            m = int(self.max_exp[j]) if len(self.coeffs) else 0
            if m == 0:
                continue
            powers = np.ones(points.shape[:-1] + (m + 1,))
            for k in range(1, m + 1):
                powers[..., k] = powers[..., k - 1] * points[..., j]
            out *= powers[..., self.exps[:, j]]
        return out

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self._monomials(points) @ self.coeffs

    def with_abs(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Values and ``sum |c_m * monomial_m|`` (a rounding-error scale)."""
        mono = self._monomials(points)
        return mono @ self.coeffs, np.abs(mono) @ self.abs_coeffs


# ---------------------------------------------------------------------------
# polynomial times logarithms

AffineKey = Tuple[Tuple[Fraction, ...], Fraction]


def _normalize_log_arg(arg: MPoly) -> Tuple[Dict[AffineKey, int], Optional[AffineKey]]:
    """Split ``ln(arg)`` into prime-constant logs plus one normalized affine log.

    Returns ``(prime_keys -> multiplicity, affine_key or None)``.
    """
    coeffs, const = arg.affine_parts()
    n = len(coeffs)
    zero = (Fraction(0),) * n
    if not any(coeffs):
        if const <= 0:
            raise LogDomainError(f"logarithm of non-positive constant {const}")
        return {(zero, Fraction(p)): e for p, e in prime_exponents(const).items()}, None
    lead = next(abs(c) for c in coeffs if c)
    key = (tuple(c / lead for c in coeffs), const / lead)
    primes = {}
    if lead != 1:
        primes = {(zero, Fraction(p)): e for p, e in prime_exponents(lead).items()}
    return primes, key


def _key_to_mpoly(key: AffineKey, variables) -> MPoly:
    coeffs, const = key
    return MPoly.affine(dict(zip(variables, coeffs)), const, variables)


class LogPoly:
    """``poly + sum(coeff_k * ln(arg_k))`` with affine arguments ``arg_k``."""

    __slots__ = ("vars", "poly", "logs")

    def __init__(self, poly: MPoly, logs: Optional[Mapping[AffineKey, MPoly]] = None):
        self.vars = poly.vars
        self.poly = poly
        self.logs: Dict[AffineKey, MPoly] = {}
        for key, coeff in (logs or {}).items():
            if coeff.vars != self.vars:
                raise ArityError("log coefficient variables do not match")
            if not coeff.is_zero():
                self.logs[key] = coeff

    @classmethod
    def from_log(cls, coeff: MPoly, arg: MPoly) -> "LogPoly":
        """``coeff * ln(arg)`` for an affine ``arg``."""
        primes, key = _normalize_log_arg(arg)
        logs: Dict[AffineKey, MPoly] = {}
        for pk, e in primes.items():
            logs[pk] = logs.get(pk, MPoly(coeff.vars)) + coeff * e
        if key is not None:
            logs[key] = logs.get(key, MPoly(coeff.vars)) + coeff
        return cls(MPoly(coeff.vars), logs)

    @classmethod
    def lift(cls, p: Union[MPoly, "LogPoly"]) -> "LogPoly":
        return p if isinstance(p, LogPoly) else cls(p)

    def has_logs(self) -> bool:
        return bool(self.logs)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.vars)
        other = LogPoly.lift(other)
        logs = dict(self.logs)
        for k, c in other.logs.items():
            logs[k] = logs[k] + c if k in logs else c
        return LogPoly(self.poly + other.poly, logs)

    __radd__ = __add__

    def __neg__(self):
        return LogPoly(-self.poly, {k: -c for k, c in self.logs.items()})

    def __sub__(self, other):
        return self + (-LogPoly.lift(other) if not isinstance(other, (int, Fraction)) else -Fraction(other))

    def __mul__(self, other):
        if isinstance(other, LogPoly):
            if other.has_logs() and self.has_logs():
                raise UnsupportedFormError("product of logarithmic terms (log-log) is not supported")
            if not other.has_logs():
                other = other.poly
            else:
                return other * self.poly
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.vars)
        return LogPoly(self.poly * other, {k: c * other for k, c in self.logs.items()})

    __rmul__ = __mul__

    def check_domain(self, points: Iterable[Mapping[str, Number]]) -> None:
        """Raise if some log argument is negative at one of ``points``.

        The arguments are affine, so checking the vertices of a convex
        domain covers its interior.
        """
        points = list(points)
        for key in self.logs:
            arg = _key_to_mpoly(key, self.vars)
            for pt in points:
                val = arg(**{v: pt[v] for v in self.vars if v in pt})
                if val < 0:
                    raise LogDomainError(f"ln argument {arg} is negative at {dict(pt)}")

    def integrate(self, var: str, lower, upper, domain=None) -> "LogPoly":
        """Exact ``int_lower^upper self d(var)`` with affine limits."""
        if domain is not None:
            self.check_domain(domain)
        lower = _limit(lower, self.vars, var)
        upper = _limit(upper, self.vars, var)
        out = LogPoly(self.poly.integrate(var, lower, upper))
        i = self.vars.index(var)
        for key, coeff in self.logs.items():
            coeffs, const = key
            a = coeffs[i]
            if not a:
                out = out + LogPoly(MPoly(self.vars), {key: coeff.integrate(var, lower, upper)})
                continue
            arg = _key_to_mpoly(key, self.vars)
            w = MPoly.var(var, self.vars)
            rest = arg - w * a
            # coefficient as a polynomial in w = arg, reusing the slot of var
            cw = coeff.substitute({var: (w - rest) / a})
            P = cw.antiderivative(var)
            R = P.divide_by_var(var).antiderivative(var)
            for limit, sign in ((upper, 1), (lower, -1)):
                w_lim = arg.substitute({var: limit})
                p_at = P.substitute({var: w_lim})
                r_at = R.substitute({var: w_lim})
                out = out + LogPoly(r_at * Fraction(-sign) / a)
                if p_at.is_zero():
                    continue
                if w_lim.is_zero():
                    raise DivergentIntegralError("log argument vanishes identically at a limit")
                out = out + LogPoly.from_log(p_at * Fraction(sign) / a, w_lim)
        return out

    def to_logvalue(self) -> LogValue:
        if not self.poly.is_constant():
            raise ValueError("polynomial part still depends on a variable")
        rational = self.poly.constant_value()
        logs = {}
        for key, coeff in self.logs.items():
            coeffs, const = key
            if any(coeffs):
                raise ValueError("a log argument still depends on a variable")
            logs[const] = logs.get(const, Fraction(0)) + coeff.constant_value()
        return LogValue(rational, logs)

    def value(self, **point: float) -> float:
        args = [point.get(v, 0.0) for v in self.vars]
        total = _eval_float(self.poly, args)
        for key, coeff in self.logs.items():
            coeffs, const = key
            arg = float(const) + sum(float(c) * x for c, x in zip(coeffs, args))
            c = _eval_float(coeff, args)
            if c:
                total += c * math.log(arg)
        return total

    def __repr__(self):
        logs = " + ".join(
            f"({c})*ln({_key_to_mpoly(k, self.vars)})" for k, c in self.logs.items()
        )
        return f"LogPoly({self.poly}{' + ' + logs if logs else ''})"


def _eval_float(p: MPoly, args: Sequence[float]) -> float:
    total = 0.0
    for e, c in p.terms.items():
        term = float(c)
        for x, k in zip(args, e):
            if k:
                term *= x ** k
        total += term
    return total


def integrate_affine(p: Union[MPoly, LogPoly], var: str, lower, upper, domain=None):
    """Definite integral with affine limits; MPoly in, MPoly out (LogPoly likewise)."""
    if isinstance(p, LogPoly):
        return p.integrate(var, lower, upper, domain=domain)
    return p.integrate(var, lower, upper)


def integrate_reciprocal(p: MPoly, var: str, lower, upper) -> LogPoly:
    """Exact ``int_lower^upper p / var d(var)``.

    ``p = p0 + var * p1`` with ``p0`` free of ``var``; a limit that is
    identically zero is only allowed when ``p0 == 0``.
    """
    lower = _limit(lower, p.vars, var)
    upper = _limit(upper, p.vars, var)
    p0 = p.evaluate({var: 0})
    p1 = (p - p0).divide_by_var(var)
    out = LogPoly(p1.integrate(var, lower, upper))
    if p0.is_zero():
        return out
    if lower.is_zero() or upper.is_zero():
        raise DivergentIntegralError(f"integrand does not vanish at {var}=0")
    return out + LogPoly.from_log(p0, upper) - LogPoly.from_log(p0, lower)
