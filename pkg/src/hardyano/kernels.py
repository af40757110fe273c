"""Backend selection for the sample-domain kernels.

The compiled extension is preferred; the numpy fallback is used when it is
missing or when the environment variable ``HARDYANO_PURE`` is set to a
non-empty value other than ``0``.
"""

import os

import numpy as np

from . import _kernels_py

_force_pure = os.environ.get("HARDYANO_PURE", "") not in ("", "0")

_impl = _kernels_py
BACKEND = "python"
if not _force_pure:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        _impl = _kernels_py


def _c128(z):
    return np.ascontiguousarray(z, dtype=np.complex128)


def _f64(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def abs_power_mean(z, p):
    return _impl.abs_power_mean(_c128(z), float(p))


def abs_max(z):
    return _impl.abs_max(_c128(z))


def phi_mean(x, scale, r):
    return _impl.phi_mean(_f64(x), float(scale), float(r))


def zygmund_mean(x, r):
    return _impl.zygmund_mean(_f64(x), float(r))


def a_lambda(x, lam):
    return _impl.a_lambda(_f64(x), float(lam))


def reciprocal_analytic(a, h):
    return _impl.reciprocal_analytic(_f64(a), _f64(h))


def g_from_f(F):
    return _impl.g_from_f(_c128(F))
