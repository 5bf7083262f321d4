"""Hot state-vector kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly and ``NSGHZ_DISABLE_NUMBA``
is unset or ``0``. Both paths share one contract, so callers never branch.
Inputs here are already validated; public wrappers live in ``nsghz.qudit``
and ``nsghz.builder``.
"""
import os

import numpy as np

from . import _numpy

DISABLE_ENV = "NSGHZ_DISABLE_NUMBA"

_jit = None
if os.environ.get(DISABLE_ENV, "0").strip().lower() in ("", "0", "false", "no"):
    try:
        from . import _numba as _jit
    except ImportError:  # numba missing or broken
        _jit = None

BACKEND = "numba" if _jit is not None else "numpy"
_impl = _jit if _jit is not None else _numpy


def backend_module(name=None):
    """Return the kernel module for ``name`` ("numba"/"numpy"), default active."""
    if name is None:
        return _impl
    if name == "numpy":
        return _numpy
    if name == "numba":
        if _jit is None:
            raise RuntimeError("numba backend is not available")
        return _jit
    raise ValueError(f"unknown backend {name!r}")


def _as_batch(amps):
    arr = np.ascontiguousarray(amps, dtype=np.complex128)
    return arr.reshape(1, -1) if arr.ndim == 1 else arr


def _restore(out, like):
    return out.reshape(-1) if np.ndim(like) == 1 else out


def _sites(sites):
    return np.asarray(sites, dtype=np.int64).reshape(-1)


def apply_local(amps, d, n, site, op, backend=None):
    mod = backend_module(backend)
    out = mod.apply_local(_as_batch(amps), d, n, int(site),
                          np.ascontiguousarray(op, dtype=np.complex128))
    return _restore(out, amps)


def apply_phase_product(amps, d, n, sites, weight, backend=None):
    mod = backend_module(backend)
    out = mod.apply_phase_product(_as_batch(amps), d, n, _sites(sites), float(weight))
    return _restore(out, amps)


def apply_phase_table(amps, d, n, sites, table, backend=None):
    mod = backend_module(backend)
    out = mod.apply_phase_table(_as_batch(amps), d, n, _sites(sites),
                                np.ascontiguousarray(table, dtype=np.float64))
    return _restore(out, amps)


def apply_controlled(amps, d, n, controls, target, powers, backend=None):
    mod = backend_module(backend)
    out = mod.apply_controlled(_as_batch(amps), d, n, _sites(controls), int(target),
                               np.ascontiguousarray(powers, dtype=np.complex128))
    return _restore(out, amps)
