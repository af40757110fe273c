"""Zygmund-class functionals and the Luxemburg norm of ``L log^r L``.

The Young function is ``Phi_r(x) = x ((1 + log(1 + x))^r - 1)``; it is
evaluated as ``x * expm1(r * log1p(log1p(x)))`` to keep full relative
accuracy for small ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import defaults, kernels
from .errors import DomainError, InvalidInput, ParameterError
from .spectral import GridFunction

__all__ = ["OrliczParams", "phi_r", "zygmund_functional", "orlicz_modular", "luxemburg_norm"]


@dataclass(frozen=True)
class OrliczParams:
    r: float
    tol: float = defaults.LUXEMBURG_TOL

    def __post_init__(self):
        if not self.r > 0:
            raise ParameterError(f"r must be positive, got {self.r}")
        if not 0 < self.tol < 1e-2:
            raise ParameterError(f"tol must lie in (0, 1e-2), got {self.tol}")


def phi_r(x, r: float):
    """``Phi_r`` for scalars or arrays of non-negative reals."""
    if not r > 0:
        raise ParameterError(f"r must be positive, got {r}")
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(np.isnan(xa)):
        raise DomainError("Phi_r is defined for x >= 0 only")
    out = xa * np.expm1(r * np.log1p(np.log1p(xa)))
    return float(out) if out.ndim == 0 else out


def zygmund_functional(g: GridFunction, r: float) -> float:
    """``mean |g| log^r(1 + |g|)`` over the grid."""
    return kernels.zygmund_mean(np.abs(g.samples), r)


def orlicz_modular(absg: np.ndarray, lam: float, r: float) -> float:
    """``mean Phi_r(|g| / lam)`` for precomputed moduli ``absg``."""
    return kernels.phi_mean(absg, 1.0 / lam, r)


def luxemburg_norm(g: GridFunction, params: OrliczParams | float) -> float:
    """``inf { lam > 0 : mean Phi_r(|g| / lam) <= 1 }``.

    The modular is continuous and strictly decreasing in ``lam`` for nonzero
    ``g``, so the root is bracketed and then bisected on ``log lam`` until
    the bracket's relative width is below ``params.tol``.
    """
    if not isinstance(params, OrliczParams):
        params = OrliczParams(float(params))
    s = g.samples
    if not np.all(np.isfinite(s)):
        raise InvalidInput("samples must be finite")
    absg = np.ascontiguousarray(np.abs(s), dtype=np.float64)
    top = float(absg.max())
    if top == 0.0:
        return 0.0
    r = params.r

    def excess(lam):
        return orlicz_modular(absg, lam, r) - 1.0

    lo, hi = 1e-12 * top, top + 1.0
    while excess(lo) <= 0.0:
        hi = lo
        lo *= 1e-3
    while excess(hi) > 0.0:
        lo = hi
        hi *= 4.0
    while hi / lo - 1.0 > params.tol:
        mid = math.sqrt(lo) * math.sqrt(hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return math.sqrt(lo) * math.sqrt(hi)
