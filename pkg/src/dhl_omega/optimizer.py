"""Rayleigh-quotient minimization over polynomial bases and DHL bookkeeping."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exact import LogValue, format_rational
from .functionals import (
    ConstraintError,
    SieveParams,
    components,
    numerator,
    omega_value,
)
from .poly import Poly

MAX_BASIS = 8
RESIDUAL_RTOL = 1e-10


class DependentBasisError(ArithmeticError):
    """The denominator form is not positive definite on the basis span."""


@dataclass
class QuadraticFormPair:
    basis: List[Poly]
    A: np.ndarray
    A_error: np.ndarray
    A_exact: List[List[Optional[LogValue]]]
    B: List[List[Fraction]]
    shift: Fraction

    @property
    def B_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.B])

    def quotient(self, x: Sequence[float]) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.A @ x) / float(x @ self.B_float @ x) + float(self.shift)


def assemble(params: SieveParams, basis: Sequence[Poly], *, method: str = "exact", tol: float = 1e-12) -> QuadraticFormPair:
    """Numerator and denominator forms so that ``x'Ax / x'Bx + ell k`` is Omega."""
    basis = list(basis)
    n = len(basis)
    if not n:
        raise ValueError("empty basis")
    if n > MAX_BASIS:
        raise ValueError(f"basis length is limited to {MAX_BASIS}")
    A = np.zeros((n, n))
    Aerr = np.zeros((n, n))
    Aex: List[List[Optional[LogValue]]] = [[None] * n for _ in range(n)]
    B = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            comps = components(params, basis[i], basis[j], method=method, tol=tol)
            num = numerator(params, comps)
            for a, b in ((i, j), (j, i)):
                A[a, b] = num.numeric
                Aerr[a, b] = num.error_bound
                Aex[a][b] = num.exact
                B[a][b] = comps.I.exact.rational
    return QuadraticFormPair(basis, A, Aerr, Aex, B, params.ell * params.k)


def ldl_exact(B: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    """Pivots of the exact LDL' factorization; raises if B is not positive definite."""
    n = len(B)
    L = [[Fraction(0)] * n for _ in range(n)]
    D = [Fraction(0)] * n
    for j in range(n):
        D[j] = B[j][j] - sum(L[j][k] ** 2 * D[k] for k in range(j))
        if D[j] <= 0:
            raise DependentBasisError(f"denominator form is not positive definite (pivot {j} = {D[j]})")
        L[j][j] = Fraction(1)
        for i in range(j + 1, n):
            L[i][j] = (B[i][j] - sum(L[i][k] * L[j][k] * D[k] for k in range(j))) / D[j]
    return D


def cholesky(B: np.ndarray) -> np.ndarray:
    n = B.shape[0]
    L = np.zeros_like(B)
    for j in range(n):
        d = B[j, j] - L[j, :j] @ L[j, :j]
        if d <= 0:
            raise DependentBasisError("Cholesky failed: B is not positive definite in floating point")
        L[j, j] = math.sqrt(d)
        for i in range(j + 1, n):
            L[i, j] = (B[i, j] - L[i, :j] @ L[j, :j]) / L[j, j]
    return L


def jacobi_eigh(S: np.ndarray, tol: float = 1e-15, max_sweeps: int = 100) -> Tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi rotations for a small symmetric matrix; ascending eigenvalues."""
    S = np.array(S, dtype=float, copy=True)
    n = S.shape[0]
    V = np.eye(n)
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.tril(S, -1) ** 2)))
        if off <= tol * max(np.linalg.norm(S), np.finfo(float).tiny):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if S[p, q] == 0.0:
                    continue
                tau = (S[q, q] - S[p, p]) / (2 * S[p, q])
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1 + tau * tau))
                c = 1 / math.sqrt(1 + t * t)
                s = t * c
                R = np.eye(n)
                R[p, p] = R[q, q] = c
                R[p, q] = s
                R[q, p] = -s
                S = R.T @ S @ R
                V = V @ R
    w = np.diag(S).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


@dataclass
class RayleighResult:
    value: float
    coeffs: np.ndarray
    residual: float
    error: float


def _fix_sign(x: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(x) > 1e-14 * np.max(np.abs(x)))
    if nz.size and x[nz[0]] < 0:
        x = -x
    return x


def min_rayleigh(pair: QuadraticFormPair) -> RayleighResult:
    """Smallest generalized eigenvalue of ``A x = lambda B x`` (without the shift)."""
    ldl_exact(pair.B)
    A = pair.A
    B = pair.B_float
    L = cholesky(B)
    Linv = np.linalg.solve(L, np.eye(len(B)))
    S = Linv @ A @ Linv.T
    S = 0.5 * (S + S.T)
    w, V = jacobi_eigh(S)
    lam = float(w[0])
    x = Linv.T @ V[:, 0]
    # one step of Rayleigh refinement against the original pencil
    lam = float(x @ A @ x) / float(x @ B @ x)
    x = _fix_sign(x / np.linalg.norm(x))
    residual = float(np.linalg.norm(A @ x - lam * B @ x))
    normA = float(np.linalg.norm(A))
    if residual > RESIDUAL_RTOL * normA:
        raise ArithmeticError(f"eigen residual {residual:.3e} exceeds {RESIDUAL_RTOL:g} * ||A||")
    lam_min_B = float(np.min(np.linalg.eigvalsh(B)))
    error = float(np.linalg.norm(pair.A_error)) / lam_min_B
    return RayleighResult(lam, x, residual, error)


@dataclass
class BoundReport:
    params: SieveParams
    bound: float
    witness: Poly
    rho: int
    method: str
    error: float = 0.0
    residual: Optional[float] = None
    exact: Optional[LogValue] = None
    provenance: Dict[str, object] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, object]:
        out = {
            "params": self.params.as_dict(),
            "bound": self.bound,
            "error_bound": self.error,
            "witness": self.witness.literal(),
            "rho": self.rho,
            "method": self.method,
            "provenance": dict(self.provenance),
        }
        if self.residual is not None:
            out["eigen_residual"] = self.residual
        if self.exact is not None:
            out["exact"] = str(self.exact)
        return out


def rho_of(bound: float) -> int:
    """Largest ``rho`` certified: an integer ``m > bound`` gives ``rho = m - 1``."""
    if not math.isfinite(bound):
        raise ValueError("bound must be finite")
    return math.floor(bound)


def power_basis(degree: int, shift: Fraction) -> List[Poly]:
    return [Poly([0] * j + [1], shift=shift) for j in range(degree + 1)]


def witness_report(params: SieveParams, f: Poly, *, method: str = "exact", tol: float = 1e-12) -> BoundReport:
    """Bound certified by one explicit polynomial."""
    val = omega_value(params, f, method=method, tol=tol)
    return BoundReport(
        params, val.numeric, f, rho_of(val.numeric), "fixed-witness", val.error_bound, None, val.exact,
        {"evaluation": val.method},
    )


def optimize(
    params: SieveParams,
    degree: int,
    scan: Optional[Sequence[Fraction]] = None,
    *,
    method: str = "exact",
    tol: float = 1e-12,
) -> BoundReport:
    """Minimize Omega over polynomials of the given degree in the basis ``(c - x)^j``.

    With ``scan``, ``params`` must be in the epsilon regime and every ``eps``
    of the grid is tried with ``ell`` from the equality constraint; the
    smallest bound wins (ties keep the earlier grid point).
    """
    if not 0 <= degree <= MAX_BASIS - 1:
        raise ValueError(f"degree must lie in 0..{MAX_BASIS - 1}")
    if scan:
        if params.regime != "epsilon":
            raise ConstraintError("an eps scan needs the epsilon regime")
        best = None
        for eps in scan:
            p = SieveParams.epsilon(params.k, params.theta, Fraction(eps))
            rep = optimize(p, degree, method=method, tol=tol)
            if best is None or rep.bound < best.bound:
                best = rep
        best.provenance["scan"] = [format_rational(Fraction(e)) for e in scan]
        return best
    shift = params.support_end
    basis = power_basis(degree, shift)
    pair = assemble(params, basis, method=method, tol=tol)
    res = min_rayleigh(pair)
    coeffs = res.coeffs
    lead = coeffs[np.flatnonzero(np.abs(coeffs) > 1e-14 * np.max(np.abs(coeffs)))[0]]
    coeffs = coeffs / lead
    witness = Poly([Fraction(float(c)).limit_denominator(10 ** 12) for c in coeffs], shift=shift)
    bound = res.value + float(params.ell * params.k)
    return BoundReport(
        params,
        bound,
        witness,
        rho_of(bound),
        "eigen",
        res.error,
        res.residual,
        None,
        {"evaluation": method, "degree": degree, "basis": f"({format_rational(shift)}-x)^j"},
    )


@dataclass(frozen=True)
class DHLStatement:
    k: int
    rho: int
    assumption: str

    def __str__(self) -> str:
        return f"DHL_Omega[{self.k}; {self.rho}] ({self.assumption})"


def assumption_of(theta: Fraction) -> str:
    theta = Fraction(theta)
    if theta <= Fraction(1, 4):
        return "unconditional"
    if theta == Fraction(1, 2):
        return "GEH"
    return f"GEH[{format_rational(theta)}]"


def dhl(report: BoundReport) -> DHLStatement:
    return DHLStatement(report.params.k, rho_of(report.bound), assumption_of(report.params.theta))
