"""Variational sieve functionals: exact evaluation, optimization and Monte Carlo checks."""
from .exact import LogValue, parse_rational
from .functionals import FunctionalValue, SieveParams, omega_value
from .optimizer import BoundReport, dhl, optimize, witness_report
from .poly import Poly

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "FunctionalValue",
    "LogValue",
    "Poly",
    "SieveParams",
    "dhl",
    "omega_value",
    "optimize",
    "parse_rational",
    "witness_report",
    "__version__",
]
