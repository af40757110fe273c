"""Analytic decomposition of unity for analytic trigonometric polynomials.

For a level ``lam > 0`` put

    a_lam = max(1, (|f| / lam)^(1/3)),
    F_lam = 1 / (a_lam + i H(a_lam)),
    G_lam = 1 - (1 - F_lam^4)^4,

where ``H`` is the periodic Hilbert transform. ``F_lam`` and ``G_lam`` are
bounded analytic functions, ``|G_lam| <= 15 min(1, lam / |f|)``, and the
pieces

    f_0 = G_1 f,    f_n = (G_{2^n} - G_{2^(n-1)}) f,   n = 1..N,

telescope to ``G_{2^N} f = f`` once ``2^N >= sup |f|``. Everything here is
evaluated on a uniform grid; the Hilbert transform is taken spectrally
through the full Nyquist band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import defaults, kernels
from .errors import NotAnalytic, NumericalConsistencyError, ParameterError
from .multipliers import conjugate_samples
from .spectral import (
    GridFunction,
    TrigPoly,
    grid_size_for,
    negative_energy_ratio,
    synthesize,
)

__all__ = [
    "a_lambda",
    "f_lambda",
    "g_lambda",
    "cutoff_index",
    "DecompositionPiece",
    "Decomposition",
    "decompose",
    "envelope_report",
    "EnvelopeRow",
    "check_envelopes",
    "leakage_sequence",
]


def a_lambda(g: GridFunction, lam: float) -> GridFunction:
    """``max(1, (g / lam)^(1/3))`` for samples ``g = |f| >= 0``."""
    if not lam > 0:
        raise ParameterError(f"lambda must be positive, got {lam}")
    x = g.samples
    if not g.is_real:
        if np.any(x.imag != 0):
            raise ParameterError("a_lambda expects real non-negative samples")
        x = x.real
    if np.any(x < 0):
        raise ParameterError("a_lambda expects non-negative samples")
    return GridFunction(kernels.a_lambda(x, lam))


def _f_from_modulus(absf: GridFunction, lam: float) -> GridFunction:
    a = a_lambda(absf, lam)
    # H kills constants, so H(a) = H(a - 1); this keeps F exactly 1 when a == 1
    h = conjugate_samples(GridFunction(a.samples - 1.0))
    F = kernels.reciprocal_analytic(a.samples, h.samples)
    if np.any(a.samples**2 + h.samples**2 < 1.0):
        raise NumericalConsistencyError("|a + iH(a)| < 1 on the grid")
    return GridFunction(F)


def _modulus(f: TrigPoly, m: int | None) -> GridFunction:
    if m is None:
        m = grid_size_for(f.degree())
    return synthesize(f, m).abs()


def f_lambda(f: TrigPoly, lam: float, m: int | None = None) -> GridFunction:
    """Samples of ``F_lam = 1 / (a_lam + i H(a_lam))``."""
    return _f_from_modulus(_modulus(f, m), lam)


def g_lambda(f: TrigPoly, lam: float, m: int | None = None) -> GridFunction:
    """Samples of ``G_lam = 1 - (1 - F_lam^4)^4``."""
    F = f_lambda(f, lam, m)
    return GridFunction(kernels.g_from_f(F.samples))


def cutoff_index(sup: float) -> int:
    """Smallest ``N >= 0`` with ``2^N >= sup``."""
    if sup <= 1.0:
        return 0
    n = max(0, math.ceil(math.log2(sup)))
    while 2.0**n < sup:
        n += 1
    while n > 0 and 2.0 ** (n - 1) >= sup:
        n -= 1
    return n


@dataclass(frozen=True)
class DecompositionPiece:
    index: int
    values: GridFunction
    sup_bound: float
    leakage: float


@dataclass(frozen=True)
class Decomposition:
    """Pieces ``f_0..f_N`` of an analytic polynomial on an ``M``-point grid.

    ``levels[n]`` holds ``(F_{2^n}, G_{2^n})`` so that callers checking the
    pointwise estimates do not have to recompute them.
    """

    pieces: tuple[DecompositionPiece, ...]
    cutoff: int
    grid_size: int
    source: TrigPoly
    samples: GridFunction
    levels: tuple[tuple[GridFunction, GridFunction], ...] = field(repr=False)

    @property
    def sup(self) -> float:
        return self.samples.sup()

    def values(self, n: int) -> np.ndarray:
        return self.pieces[n].values.samples

    def residual(self) -> float:
        """Max pointwise ``|sum_n f_n - f|`` over the grid."""
        acc = np.zeros(self.grid_size, dtype=np.complex128)
        for p in self.pieces:
            acc += p.values.samples
        return float(np.max(np.abs(acc - self.samples.samples)))


def _leakage(g: GridFunction) -> float:
    if not np.any(g.samples):
        return 0.0
    return negative_energy_ratio(g)


def decompose(f: TrigPoly, m: int | None = None) -> Decomposition:
    """Split an analytic polynomial into bounded near-analytic pieces.

    ``N`` is the smallest integer with ``2^N >= sup |f|`` measured on the
    grid, which makes ``G_{2^N}`` identically one there.
    """
    if not f.is_analytic():
        raise NotAnalytic(f"input has negative frequencies down to {f.n_min}")
    if m is None:
        m = grid_size_for(f.degree())
    fs = synthesize(f, m)
    absf = fs.abs()
    n_cut = cutoff_index(absf.sup())
    levels = []
    for n in range(n_cut + 1):
        F = _f_from_modulus(absf, 2.0**n)
        levels.append((F, GridFunction(kernels.g_from_f(F.samples))))
    x = fs.samples
    pieces = []
    prev = None
    for n, (_, G) in enumerate(levels):
        w = G.samples if prev is None else G.samples - prev
        v = GridFunction(w * x)
        pieces.append(DecompositionPiece(n, v, v.sup(), _leakage(v)))
        prev = G.samples
    return Decomposition(tuple(pieces), n_cut, m, f, fs, tuple(levels))


@dataclass(frozen=True)
class EnvelopeRow:
    n: int
    measured_sup: float
    bound: float
    leakage: float

    @property
    def ok(self) -> bool:
        return self.measured_sup <= self.bound


def envelope_report(d: Decomposition) -> list[EnvelopeRow]:
    """Per piece: grid sup of ``f_n``, the bound ``22.5 * 2^n`` and leakage."""
    return [EnvelopeRow(p.index, p.sup_bound, defaults.A0_PRIME * 2.0**p.index, p.leakage) for p in d.pieces]


def check_envelopes(d: Decomposition, slack: float = defaults.ENVELOPE_SLACK) -> dict[str, int]:
    """Count pointwise violations of the four envelope bounds.

    Returns a mapping from bound name to the number of offending samples
    (summed over all levels).
    """
    absf = d.samples.abs().samples
    counts = {"a_ge_1": 0, "F_envelope": 0, "G_envelope": 0, "piece_envelope": 0}
    with np.errstate(divide="ignore"):
        for n, (F, G) in enumerate(d.levels):
            lam = 2.0**n
            a = kernels.a_lambda(absf, lam)
            counts["a_ge_1"] += int(np.sum(a < 1.0))
            ratio = np.where(absf > 0, lam / absf, np.inf)
            env_f = np.minimum(1.0, np.cbrt(ratio))
            counts["F_envelope"] += int(np.sum(np.abs(F.samples) > env_f + slack))
            env_g = defaults.A0 * np.minimum(1.0, ratio)
            counts["G_envelope"] += int(np.sum(np.abs(G.samples) > env_g + slack))
    for p in d.pieces:
        counts["piece_envelope"] += int(np.sum(np.abs(p.values.samples) > defaults.A0_PRIME * 2.0**p.index))
    return counts


def leakage_sequence(f: TrigPoly, oversample: float = defaults.OVERSAMPLE, doublings: int = 2) -> list[list[float]]:
    """Per-piece leakage on grids ``M, 2M, ..., 2^doublings M``.

    Returns ``out[n][k]``, the leakage of piece ``n`` on the ``k``-th grid.
    The cutoff is taken from the finest grid so every row has the same
    length; pieces beyond a coarser grid's cutoff are identically zero there.
    """
    m0 = grid_size_for(f.degree(), oversample)
    decs = [decompose(f, m0 * 2**k) for k in range(doublings + 1)]
    n_max = max(d.cutoff for d in decs)
    out = []
    for n in range(n_max + 1):
        out.append([d.pieces[n].leakage if n <= d.cutoff else 0.0 for d in decs])
    return out
