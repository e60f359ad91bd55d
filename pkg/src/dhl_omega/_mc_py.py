"""Numpy implementation of the Monte Carlo accumulators.

Every accumulator takes a block of uniform samples already scaled to the
sampling box and returns ``(sum, sum of squares)`` of the per-sample
integrand.  The support of ``F`` is ``{sum - min <= a, sum <= b}``.
"""
import numpy as np


def _horner(coeffs, x):
    out = np.zeros_like(x)
    for c in coeffs[::-1]:
        out = out * x + c
    return out


def _inside(total, smallest, a, b):
    return (total - smallest <= a) & (total <= b)


def acc_volume(pts, a, b):
    total = pts.sum(axis=1)
    mask = _inside(total, pts.min(axis=1), a, b)
    n = float(np.count_nonzero(mask))
    return n, n


def acc_I(pts, coeffs, a, b):
    total = pts.sum(axis=1)
    F = np.where(_inside(total, pts.min(axis=1), a, b), _horner(coeffs, total), 0.0)
    v = F * F
    return float(v.sum()), float((v * v).sum())


def acc_J(pts, ti2, i, coeffs, a, b, gate):
    """Pair estimator of ``(int F dt_i)^2``: ``pts[:, i]`` and ``ti2`` are two draws of ``t_i``."""
    total = pts.sum(axis=1)
    rest = total - pts[:, i]
    F1 = np.where(_inside(total, pts.min(axis=1), a, b), _horner(coeffs, total), 0.0)
    other = pts.copy()
    other[:, i] = ti2
    total2 = rest + ti2
    F2 = np.where(_inside(total2, other.min(axis=1), a, b), _horner(coeffs, total2), 0.0)
    v = np.where(rest <= gate, F1 * F2, 0.0)
    return float(v.sum()), float((v * v).sum())


def acc_Q(pts, y, i, coeffs, a, b, c, inv_theta, cut, gate_lo, gate_hi):
    """``(1 - c y)/y * (F(t + y e_i) - F(t))^2`` with the ``t_i < 1/theta - y`` and Phi gates."""
    total = pts.sum(axis=1)
    rest = total - pts[:, i]
    F1 = np.where(_inside(total, pts.min(axis=1), a, b), _horner(coeffs, total), 0.0)
    moved = pts.copy()
    moved[:, i] += y
    total2 = total + y
    F2 = np.where(_inside(total2, moved.min(axis=1), a, b), _horner(coeffs, total2), 0.0)
    gate = np.where(y < cut, gate_lo, gate_hi)
    keep = (pts[:, i] < inv_theta - y) & (rest <= gate)
    d = F2 - F1
    v = np.where(keep, (1.0 - c * y) / y * d * d, 0.0)
    return float(v.sum()), float((v * v).sum())
