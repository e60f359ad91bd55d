"""Exact scalars: rationals and closed forms ``q0 + sum(qi * ln(p_i))``.

Every logarithm is stored over the prime basis, so two values are equal
exactly when their canonical forms agree field by field.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple, Union

import mpmath

Rational = Fraction
RationalLike = Union[Fraction, int]

DEFAULT_PRECISION = 256

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``. Decimal and float notation is rejected."""
    m = _RATIONAL_RE.match(str(text))
    if not m:
        raise ValueError(f"not a rational literal (expected p/q or p): {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: RationalLike) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@lru_cache(maxsize=4096)
def _factor(n: int) -> Tuple[Tuple[int, int], ...]:
    if n < 1:
        raise ValueError("can only factor positive integers")
    out = []
    for p in (2, 3, 5):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    p, step = 7, 4
    while p * p <= n and p < 1_000_000:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += step
        step = 6 - step
    if n > 1:
        if p * p > n:
            out.append((n, 1))
        else:
            from sympy import factorint

            out.extend(sorted(factorint(n).items()))
    return tuple(out)


def prime_exponents(q: RationalLike) -> Dict[int, int]:
    """Exponents of ``q > 0`` over the primes: 12/5 -> {2: 2, 3: 1, 5: -1}."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"logarithm of non-positive rational {q}")
    exps: Dict[int, int] = {}
    for p, e in _factor(q.numerator):
        exps[p] = exps.get(p, 0) + e
    for p, e in _factor(q.denominator):
        exps[p] = exps.get(p, 0) - e
    return exps


@dataclass(frozen=True)
class Approx:
    """A high-precision value with an absolute error bound."""

    value: mpmath.mpf
    error: mpmath.mpf

    def __float__(self) -> float:
        return float(self.value)


class LogValue:
    """Immutable closed-form scalar ``rational + sum(coeff * ln(prime))``."""

    __slots__ = ("_rational", "_logs", "_hash")

    def __init__(self, rational: RationalLike = 0, logs: Mapping[RationalLike, RationalLike] | None = None):
        acc: Dict[int, Fraction] = {}
        for arg, coeff in (logs or {}).items():
            coeff = Fraction(coeff)
            if not coeff:
                continue
            for p, e in prime_exponents(arg).items():
                acc[p] = acc.get(p, Fraction(0)) + coeff * e
        self._rational = Fraction(rational)
        self._logs: Tuple[Tuple[int, Fraction], ...] = tuple(
            sorted((p, c) for p, c in acc.items() if c)
        )
        self._hash = None

    @classmethod
    def log(cls, arg: RationalLike, coeff: RationalLike = 1) -> "LogValue":
        return cls(0, {arg: coeff})

    @classmethod
    def arcoth(cls, x: RationalLike, coeff: RationalLike = 1) -> "LogValue":
        x = Fraction(x)
        if abs(x) <= 1:
            raise ValueError("arcoth needs |x| > 1")
        return cls.log((x + 1) / (x - 1), Fraction(coeff) / 2)

    @property
    def rational(self) -> Fraction:
        return self._rational

    @property
    def log_terms(self) -> Dict[int, Fraction]:
        return dict(self._logs)

    def is_rational(self) -> bool:
        return not self._logs

    def canonical(self) -> "LogValue":
        return LogValue(self._rational, dict(self._logs))

    def __add__(self, other):
        other = _as_logvalue(other)
        if other is NotImplemented:
            return NotImplemented
        logs = dict(self._logs)
        for p, c in other._logs:
            logs[p] = logs.get(p, Fraction(0)) + c
        return LogValue(self._rational + other._rational, logs)

    __radd__ = __add__

    def __neg__(self):
        return LogValue(-self._rational, {p: -c for p, c in self._logs})

    def __sub__(self, other):
        other = _as_logvalue(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scale):
        if isinstance(scale, LogValue):
            if scale.is_rational():
                scale = scale.rational
            elif self.is_rational():
                return scale * self._rational
            else:
                raise TypeError("product of two logarithmic values is outside Q + Q*ln(Q+)")
        if not isinstance(scale, (int, Fraction)):
            return NotImplemented
        s = Fraction(scale)
        return LogValue(self._rational * s, {p: c * s for p, c in self._logs})

    __rmul__ = __mul__

    def __truediv__(self, scale):
        if isinstance(scale, LogValue):
            if not scale.is_rational():
                raise TypeError("division by a logarithmic value")
            scale = scale.rational
        return self * (1 / Fraction(scale))

    def __eq__(self, other):
        other = _as_logvalue(other)
        if other is NotImplemented:
            return NotImplemented
        return self._rational == other._rational and self._logs == other._logs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._rational, self._logs))
        return self._hash

    def __bool__(self):
        return bool(self._rational) or bool(self._logs)

    def to_float(self, precision: int = DEFAULT_PRECISION) -> Approx:
        return logvalue_to_float(self, precision)

    def __float__(self) -> float:
        return float(self.to_float(64 + 53).value)

    def __str__(self) -> str:
        parts = []
        if self._rational or not self._logs:
            parts.append(format_rational(self._rational))
        for p, c in self._logs:
            if c == 1:
                term = f"ln({p})"
            elif c == -1:
                term = f"-ln({p})"
            else:
                term = f"{format_rational(c)}*ln({p})"
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __repr__(self) -> str:
        return f"LogValue({str(self)!r})"


def _as_logvalue(x):
    if isinstance(x, LogValue):
        return x
    if isinstance(x, (int, Fraction)):
        return LogValue(x)
    return NotImplemented


def logvalue_combine(a: LogValue, b, op: str) -> LogValue:
    """``op`` is one of ``add``, ``sub`` or ``scale`` (``b`` a rational)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "scale":
        return a * Fraction(b)
    raise ValueError(f"unknown op {op!r}")


def logvalue_to_float(v: LogValue | RationalLike, precision: int = DEFAULT_PRECISION) -> Approx:
    """Evaluate with absolute error at most ``2**(1-precision) * (1 + sum|q_i|)``."""
    if precision < 53:
        raise ValueError("precision must be at least 53 bits")
    v = _as_logvalue(v)
    if not v:
        return Approx(mpmath.mpf(0), mpmath.mpf(0))
    weight = 1 + sum(abs(c) for _, c in v._logs)
    mag = max(1, abs(v._rational)) + weight * 64
    guard = 16 + int(mag).bit_length() + len(v._logs).bit_length()
    with mpmath.workprec(precision + guard):
        total = mpmath.mpf(v._rational.numerator) / v._rational.denominator
        for p, c in v._logs:
            total += (mpmath.mpf(c.numerator) / c.denominator) * mpmath.log(p)
        bound = mpmath.ldexp(mpmath.mpf(weight.numerator) / weight.denominator, 1 - precision)
    return Approx(total, bound)


def sum_logvalues(values: Iterable[LogValue | RationalLike]) -> LogValue:
    out = LogValue(0)
    for v in values:
        out = out + v
    return out
