"""numpy implementations of the sample-domain kernels.

Used when the compiled ``_kernels`` extension is unavailable or when
``HARDYANO_PURE=1`` is set. Signatures and semantics match the Cython module.
"""

import numpy as np


def abs_power_mean(z, p):
    """Mean of |z|^p over the samples."""
    z = np.asarray(z)
    if p == 2.0:
        return float(np.mean(z.real**2 + z.imag**2))
    a = np.abs(z)
    if p == 1.0:
        return float(np.mean(a))
    return float(np.mean(a**p))


def abs_max(z):
    return float(np.max(np.abs(z)))


def phi_mean(x, scale, r):
    """Mean of x s ((1 + log(1 + x s))^r - 1) with s = scale."""
    y = np.asarray(x, dtype=float) * scale
    return float(np.mean(y * np.expm1(r * np.log1p(np.log1p(y)))))


def zygmund_mean(x, r):
    """Mean of x log^r(1 + x)."""
    x = np.asarray(x, dtype=float)
    return float(np.mean(x * np.log1p(x) ** r))


def a_lambda(x, lam):
    """max(1, (x / lam)^(1/3)) elementwise."""
    return np.maximum(1.0, np.cbrt(np.asarray(x, dtype=float) / lam))


def reciprocal_analytic(a, h):
    """1 / (a + i h) elementwise."""
    return 1.0 / (np.asarray(a, dtype=float) + 1j * np.asarray(h, dtype=float))


def g_from_f(F):
    """1 - (1 - F^4)^4 elementwise."""
    F = np.asarray(F, dtype=complex)
    w = F * F
    w = w * w
    u = 1.0 - w
    u = u * u
    return 1.0 - u * u
