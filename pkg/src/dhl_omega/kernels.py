"""Selects the compiled Monte Carlo accumulators, falling back to numpy.

Set ``DHL_OMEGA_PURE=1`` to force the numpy implementation.
"""
import os

from . import _mc_py

BACKEND = "numpy"
_impl = _mc_py

if os.environ.get("DHL_OMEGA_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _mc_core as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _mc_py

acc_volume = _impl.acc_volume
acc_I = _impl.acc_I
acc_J = _impl.acc_J
acc_Q = _impl.acc_Q

__all__ = ["BACKEND", "acc_volume", "acc_I", "acc_J", "acc_Q"]
