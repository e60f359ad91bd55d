"""Monte Carlo integration of the multidimensional functionals.

Used as an independent check on the one-dimensional reductions: the
integrals are estimated directly over ``t in R^k`` (plus ``y`` for Q) with
``F(t) = f(t_1 + ... + t_k)`` restricted to the regime's support.
"""
from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import numpy as np

from . import kernels
from .functionals import (
    FunctionalValue,
    SieveParams,
    UnsupportedParamsError,
    components,
)
from .poly import Poly

DELTA = 1e-6
CHUNK = 1 << 18
DEFAULT_PARTITIONS = 16
INF = math.inf


@dataclass(frozen=True)
class McResult:
    estimate: float
    std_error: float
    samples: int
    seed: int
    bias_bound: float = 0.0

    def as_dict(self):
        return {
            "value": self.estimate,
            "error_bound": self.std_error,
            "method": "monte-carlo",
            "samples": self.samples,
            "seed": self.seed,
            "bias_bound": self.bias_bound,
        }


def stream(seed: int, index: int) -> np.random.Generator:
    """Counter-based generator keyed by ``(seed, index)``."""
    key = (int(seed) & ((1 << 64) - 1)) << 64 | (int(index) & ((1 << 64) - 1))
    return np.random.Generator(np.random.Philox(key=key))


def _split(samples: int, parts: int) -> List[int]:
    base, extra = divmod(samples, parts)
    return [base + (1 if j < extra else 0) for j in range(parts)]


def _run(task, samples: int, seed: int, partitions: int, workers: int) -> Tuple[float, float]:
    sizes = _split(samples, partitions)

    def one(j):
        rng = stream(seed, j)
        s = ss = 0.0
        left = sizes[j]
        while left > 0:
            n = min(CHUNK, left)
            a, b = task(rng, n)
            s += a
            ss += b
            left -= n
        return s, ss

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, range(partitions)))
    else:
        parts = [one(j) for j in range(partitions)]
    s = ss = 0.0
    for a, b in parts:  # fixed order
        s += a
        ss += b
    return s, ss


def _result(s: float, ss: float, n: int, scale: float, seed: int, bias: float = 0.0) -> McResult:
    mean = s / n
    var = max(ss / n - mean * mean, 0.0) * n / max(n - 1, 1)
    return McResult(scale * mean, scale * math.sqrt(var / n), n, seed, bias)


def support_of(params: SieveParams) -> Tuple[float, float]:
    """``(a, b)`` with support ``{sum - min <= a, sum <= b}``."""
    if params.regime == "standard":
        return INF, 1.0
    if params.regime == "extended":
        return 1.0, INF
    return float(1 + params.eps), float(params.eta)


def _box(a: float, b: float) -> float:
    return min(a, b)


def mc_volume(
    region: str,
    k: int,
    *,
    scale=1,
    params: Optional[SieveParams] = None,
    samples: int = 10 ** 6,
    seed: int = 0,
    partitions: int = DEFAULT_PARTITIONS,
    workers: int = 1,
) -> McResult:
    """Volume of ``simplex`` (``scale * R_k``), ``extended`` (``scale * R_k'``) or ``epsilon``."""
    if samples < 10 ** 4:
        raise ValueError("use at least 10^4 samples")
    lam = float(Fraction(scale))
    if region == "simplex":
        a, b = INF, lam
    elif region == "extended":
        a, b = lam, INF
    elif region == "epsilon":
        if params is None:
            raise ValueError("the epsilon region needs params")
        a, b = support_of(params)
    else:
        raise ValueError(f"unknown region {region!r}")
    L = _box(a, b)

    def task(rng, n):
        pts = np.ascontiguousarray(rng.random((n, k)) * L)
        return kernels.acc_volume(pts, a, b)

    s, ss = _run(task, samples, seed, partitions, workers)
    return _result(s, ss, samples, L ** k, seed)


def _coeffs(f: Poly) -> np.ndarray:
    return np.ascontiguousarray([float(c) for c in f.monomial().coeffs] or [0.0], dtype=float)


def mc_functional(
    which: str,
    params: SieveParams,
    f: Poly,
    *,
    i: int = 1,
    samples: int = 10 ** 6,
    seed: int = 0,
    partitions: int = DEFAULT_PARTITIONS,
    workers: int = 1,
    delta: float = DELTA,
) -> McResult:
    """Estimate ``I``, ``J_i`` or ``Q_i`` (epsilon variants in the epsilon regime).

    ``i`` is the 1-based coordinate index of the difference operator.
    """
    which = which.upper()
    k = params.k
    if not 1 <= i <= k:
        raise ValueError("i must lie in 1..k")
    if which not in ("I", "J", "Q"):
        raise ValueError("which must be I, J or Q")
    if samples < 10 ** 5 and which != "I":
        raise ValueError("use at least 10^5 samples")
    ii = i - 1
    a, b = support_of(params)
    L = _box(a, b)
    coeffs = _coeffs(f)
    eps = float(params.eps)

    if which == "I":

        def task(rng, n):
            pts = np.ascontiguousarray(rng.random((n, k)) * L)
            return kernels.acc_I(pts, coeffs, a, b)

        s, ss = _run(task, samples, seed, partitions, workers)
        return _result(s, ss, samples, L ** k, seed)

    if which == "J":
        gate = 1.0 - eps if params.regime == "epsilon" else INF

        def task(rng, n):
            pts = np.ascontiguousarray(rng.random((n, k)) * L)
            ti2 = np.ascontiguousarray(rng.random(n) * L)
            return kernels.acc_J(pts, ti2, ii, coeffs, a, b, gate)

        s, ss = _run(task, samples, seed, partitions, workers)
        return _result(s, ss, samples, L ** (k + 1), seed)

    theta = float(params.theta)
    inv = 1.0 / theta
    c = float(params.ell * params.theta)
    if params.regime == "epsilon":
        cut = float(1 / (params.ell * params.theta))
        gate_lo, gate_hi = 1.0 + eps, 1.0 - eps
    else:
        cut, gate_lo, gate_hi = INF, INF, INF

    def task(rng, n):
        pts = np.ascontiguousarray(rng.random((n, k)) * L)
        y = np.ascontiguousarray(delta + rng.random(n) * (inv - delta))
        return kernels.acc_Q(pts, y, ii, coeffs, a, b, c, inv, cut, gate_lo, gate_hi)

    s, ss = _run(task, samples, seed, partitions, workers)
    # the skipped strip y < delta holds at most delta * L^k * max f^2 (leaving-support part)
    fmax = float(np.max(np.abs(np.polynomial.polynomial.polyval(np.linspace(0, L * k, 257), coeffs))))
    bias = delta * L ** k * fmax ** 2
    return _result(s, ss, samples, (inv - delta) * L ** k, seed, bias)


def collapsed_value(params: SieveParams, f: Poly, which: str, *, method: str = "exact") -> FunctionalValue:
    """The one-dimensional value of ``which`` in the normalization of the multidimensional integral."""
    which = which.upper()
    comps = components(params, f, method=method)
    value = {"I": comps.I, "Q": comps.Q, "J": comps.J}[which]
    if value is None:
        raise UnsupportedParamsError(f"{which} is not defined for the {params.regime} regime")
    if params.regime == "standard":
        return value.scale(Fraction(1, math.factorial(params.k - 1)))
    return value


def compare(exact: Union[FunctionalValue, float], mc: McResult) -> float:
    """``|exact - estimate| / std_error``."""
    if mc.std_error <= 0:
        raise ValueError("Monte Carlo standard error must be positive")
    value = exact.numeric if isinstance(exact, FunctionalValue) else float(exact)
    return abs(value - mc.estimate) / mc.std_error


def random_test_polys(seed: int, count: int, degree: int = 3) -> List[Poly]:
    """Reproducible polynomials with small rational coefficients and ``f(0) != 0``."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        coeffs = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(degree + 1)]
        if coeffs[0] == 0:
            coeffs[0] = Fraction(1)
        if coeffs[-1] == 0:
            coeffs[-1] = Fraction(1, 2)
        out.append(Poly(coeffs))
    return out
