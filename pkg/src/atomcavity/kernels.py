"""Backend selection for the hot loops.

The compiled extension ``_kernels`` is used when it was built; otherwise the
numpy fallback. Set ``ATOMCAVITY_PURE_PYTHON=1`` to force the fallback.

Kernels
-------
phase_sum_batch(positions, q)
    (1/N) sum_j exp(i q . r_j) for each layout in a (S, N, 3) stack.
cavity_sums_batch(positions, k)
    G = (1/N) sum exp(i k x_j) cos(k z_j) and H = (1/N) sum cos^2(k z_j).
cavity_spectra(delta_a, delta_c, eta_abs, eta_emit, gamma, kappa)
    Transmission, free-space emission (cavity drive), cavity emission and
    free-space emission ratio (side drive) on a detuning grid, RWA.
"""
import os

import numpy as np

from . import _kernels_py

if os.environ.get("ATOMCAVITY_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"
BACKENDS = {"python": _kernels_py}
if BACKEND == "cython":
    BACKENDS["cython"] = _impl


def _stack(positions):
    arr = np.ascontiguousarray(positions, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[1] == 0:
        raise ValueError(f"positions must have shape (S, N, 3) with N >= 1, got {arr.shape}")
    return arr


def phase_sum_batch(positions, q, backend=None):
    impl = BACKENDS[backend] if backend else _impl
    return impl.phase_sum_batch(_stack(positions), np.ascontiguousarray(q, dtype=np.float64))


def cavity_sums_batch(positions, k, backend=None):
    impl = BACKENDS[backend] if backend else _impl
    return impl.cavity_sums_batch(_stack(positions), float(k))


def cavity_spectra(delta_a, delta_c, eta_abs, eta_emit, gamma, kappa, backend=None):
    impl = BACKENDS[backend] if backend else _impl
    delta_a = np.ascontiguousarray(delta_a, dtype=np.float64)
    delta_c = np.ascontiguousarray(np.broadcast_to(delta_c, delta_a.shape), dtype=np.float64)
    return impl.cavity_spectra(
        delta_a, delta_c, float(eta_abs), float(eta_emit), float(gamma), float(kappa)
    )
