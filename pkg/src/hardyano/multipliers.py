"""Fourier multiplier operators on the torus.

All operators act on :class:`~hardyano.spectral.TrigPoly` coefficient
tables, except :func:`square_function`, which needs a grid, and
:func:`conjugate_samples`, the grid-domain Hilbert transform used by the
decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import AliasingError, ParameterError
from .spectral import GridFunction, TrigPoly, _check_grid

__all__ = [
    "MultiplierSymbol",
    "apply_multiplier",
    "hilbert",
    "riesz_projection",
    "dyadic_index",
    "dyadic_window",
    "dyadic_block",
    "square_function",
    "lambda_set",
    "in_lambda",
    "lacunary_projection",
    "conjugate_samples",
    "IDENTITY",
    "ZERO",
    "HILBERT",
    "RIESZ",
    "LACUNARY",
]


@dataclass(frozen=True)
class MultiplierSymbol:
    """A symbol ``n -> m(n)``; ``rule`` is applied to integer arrays."""

    name: str
    rule: Callable[[np.ndarray], np.ndarray]

    def __call__(self, n):
        return np.broadcast_to(self.rule(np.asarray(n, dtype=np.int64)), np.shape(n))


def apply_multiplier(f: TrigPoly, m: MultiplierSymbol) -> TrigPoly:
    if f.is_zero():
        return f
    return TrigPoly(f.n_min, f.coeffs * m(f.frequencies()))


IDENTITY = MultiplierSymbol("identity", lambda n: np.ones(n.shape))
ZERO = MultiplierSymbol("zero", lambda n: np.zeros(n.shape))
HILBERT = MultiplierSymbol("hilbert", lambda n: -1j * np.sign(n))
RIESZ = MultiplierSymbol("riesz", lambda n: (n >= 0).astype(float))


def hilbert(f: TrigPoly) -> TrigPoly:
    """Periodic Hilbert transform, symbol ``-i sgn(n)`` with ``sgn(0) = 0``."""
    return apply_multiplier(f, HILBERT)


def riesz_projection(f: TrigPoly) -> TrigPoly:
    """Projection onto the non-negative frequencies."""
    if f.is_zero() or f.n_min >= 0:
        return f
    return f.restrict(0, max(f.n_max, 0))


def dyadic_index(n) -> np.ndarray:
    """Block index ``k`` of each frequency: ``n in [2^(k-1), 2^k - 1]`` for
    ``k > 0``, the mirror image for ``k < 0``, and ``k = 0`` for ``n = 0``."""
    n = np.asarray(n, dtype=np.int64)
    a = np.abs(n)
    k = np.zeros(n.shape, dtype=np.int64)
    nz = a > 0
    # bit length of |n| is floor(log2 |n|) + 1, exact for int64
    k[nz] = np.frexp(a[nz].astype(np.float64))[1]
    return np.where(n < 0, -k, k)


def dyadic_window(k: int) -> tuple[int, int]:
    """Inclusive frequency window of the block ``Delta_k``."""
    k = int(k)
    if k == 0:
        return 0, 0
    if k > 0:
        return 2 ** (k - 1), 2**k - 1
    return -(2 ** (-k)) + 1, -(2 ** (-k - 1))


def dyadic_block(f: TrigPoly, k: int) -> TrigPoly:
    lo, hi = dyadic_window(k)
    return f.restrict(lo, hi)


def square_function(f: TrigPoly, m: int) -> GridFunction:
    """Samples of ``(sum_k |Delta_k f|^2)^(1/2)`` on the ``m``-point grid.

    Each nonempty block is synthesized separately and the squared moduli are
    accumulated in increasing block order, so the result is deterministic.
    """
    _check_grid(m)
    if m <= 2 * f.degree():
        raise AliasingError(f"grid of size {m} aliases a polynomial of degree {f.degree()}")
    acc = np.zeros(m, dtype=np.float64)
    if f.is_zero():
        return GridFunction(acc)
    freqs = f.frequencies()
    for k in np.unique(dyadic_index(freqs[f.coeffs != 0])):
        lo, hi = dyadic_window(int(k))
        block = f.restrict(lo, hi)
        buf = np.zeros(m, dtype=np.complex128)
        buf[block.frequencies() % m] = block.coeffs
        z = np.fft.ifft(buf) * m
        acc += z.real**2 + z.imag**2
    return GridFunction(np.sqrt(acc))


@lru_cache(maxsize=64)
def _lambda_tuple(max_freq: int) -> tuple[int, ...]:
    out = set()
    k = 1
    # smallest element with leading power 3^k is 3^k - 3^(k-1)
    while 2 * 3 ** (k - 1) <= max_freq:
        for m in range(k):
            v = 3**k - 3**m
            if v <= max_freq:
                out.add(v)
        k += 1
    return tuple(sorted(out))


def lambda_set(max_freq: int) -> list[int]:
    """Sorted elements ``3^k - 3^m <= max_freq`` with ``0 <= m < k``."""
    if max_freq < 2:
        raise ParameterError(f"max_freq must be >= 2, got {max_freq}")
    return list(_lambda_tuple(int(max_freq)))


def in_lambda(n) -> np.ndarray:
    """Vectorized membership test for the lacunary set."""
    n = np.asarray(n, dtype=np.int64)
    top = int(n.max()) if n.size else 0
    if top < 2:
        return np.zeros(n.shape, dtype=bool)
    lam = np.asarray(_lambda_tuple(top), dtype=np.int64)
    idx = np.searchsorted(lam, n)
    idx = np.minimum(idx, len(lam) - 1)
    return lam[idx] == n


LACUNARY = MultiplierSymbol("lacunary", lambda n: in_lambda(n).astype(float))


def lacunary_projection(f: TrigPoly) -> TrigPoly:
    """Keep exactly the frequencies of ``f`` lying in the lacunary set."""
    if f.is_zero() or f.n_max < 2:
        return TrigPoly(0, [])
    return apply_multiplier(f, LACUNARY)


def conjugate_samples(a: GridFunction) -> GridFunction:
    """Hilbert transform of real samples through the full Nyquist band.

    Equivalent to analyzing on :func:`~hardyano.spectral.full_band`,
    applying :func:`hilbert` and synthesizing back; the ``0`` and ``-M/2``
    bins are dropped.
    """
    if not a.is_real:
        raise ParameterError("conjugate_samples expects real samples")
    m = a.grid_size
    c = np.fft.rfft(a.samples)
    c *= -1j
    c[0] = 0.0
    c[-1] = 0.0  # Nyquist bin
    return GridFunction(np.fft.irfft(c, n=m))
