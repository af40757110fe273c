"""Spectral and sampled representations of functions on the torus.

A :class:`TrigPoly` stores the exact Fourier coefficients of a trigonometric
polynomial on a dense integer window. A :class:`GridFunction` stores samples
on the uniform grid ``theta_j = j / M`` with ``M`` a power of two. The torus
carries normalized Lebesgue measure, so every integral below is a plain mean
over the grid.

Frequencies on a grid of size ``M`` live in the signed window
``[-M/2, M/2)``; the ``-M/2`` bin is never written by :func:`synthesize`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Number
from typing import Iterable, Iterator

import numpy as np

from . import defaults, kernels
from .errors import (
    AliasingError,
    BandError,
    GridMismatch,
    InvalidCoefficient,
    InvalidInput,
    UnsupportedExponent,
    ZeroFunction,
)

__all__ = [
    "TrigPoly",
    "GridFunction",
    "BandSpec",
    "poly_from_coeffs",
    "monomial",
    "synthesize",
    "analyze",
    "full_band",
    "lp_norm",
    "negative_energy_ratio",
    "pointwise",
    "grid_size_for",
    "is_power_of_two",
    "read_coefficients",
    "write_coefficients",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def is_power_of_two(m: int) -> bool:
    return isinstance(m, (int, np.integer)) and m >= 1 and (m & (m - 1)) == 0


class TrigPoly:
    """Finite Fourier series ``sum_n c_n e^{i 2 pi n theta}``.

    Coefficients are kept on the dense window ``[n_min, n_max]`` and trimmed
    so that both end coefficients are nonzero. The zero polynomial has an
    empty window.
    """

    __slots__ = ("_n_min", "_coeffs")

    def __init__(self, n_min: int, coeffs):
        c = np.array(coeffs, dtype=np.complex128).reshape(-1)
        if not np.all(np.isfinite(c)):
            raise InvalidCoefficient("coefficients must be finite")
        nz = np.flatnonzero(c)
        if nz.size == 0:
            n_min, c = 0, np.zeros(0, dtype=np.complex128)
        else:
            c = c[nz[0] : nz[-1] + 1].copy()
            n_min = int(n_min) + int(nz[0])
        self._n_min = int(n_min)
        self._coeffs = _frozen(c)

    @property
    def n_min(self) -> int:
        return self._n_min

    @property
    def n_max(self) -> int:
        return self._n_min + len(self._coeffs) - 1

    @property
    def coeffs(self) -> np.ndarray:
        """Read-only dense coefficient array for ``n_min..n_max``."""
        return self._coeffs

    def is_zero(self) -> bool:
        return self._coeffs.size == 0

    def degree(self) -> int:
        if self.is_zero():
            return 0
        return max(abs(self.n_min), abs(self.n_max))

    def frequencies(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_min + len(self._coeffs))

    def support(self) -> np.ndarray:
        return self.frequencies()[self._coeffs != 0]

    def coefficient(self, n: int) -> complex:
        k = int(n) - self.n_min
        if 0 <= k < len(self._coeffs):
            return complex(self._coeffs[k])
        return 0j

    def items(self) -> Iterator[tuple[int, complex]]:
        for n, c in zip(self.frequencies(), self._coeffs):
            if c != 0:
                yield int(n), complex(c)

    def is_analytic(self) -> bool:
        return self.is_zero() or self.n_min >= 0

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self._coeffs) ** 2)))

    def restrict(self, lo: int, hi: int) -> "TrigPoly":
        """Keep only the frequencies in ``[lo, hi]``."""
        if self.is_zero() or hi < self.n_min or lo > self.n_max:
            return TrigPoly(0, [])
        a = max(lo, self.n_min)
        b = min(hi, self.n_max)
        return TrigPoly(a, self._coeffs[a - self.n_min : b - self.n_min + 1])

    def shift(self, k: int) -> "TrigPoly":
        """Multiply by ``e^{i 2 pi k theta}``."""
        return TrigPoly(self.n_min + int(k), self._coeffs)

    def _combine(self, other: "TrigPoly", sign: float) -> "TrigPoly":
        if self.is_zero():
            return other if sign > 0 else -other
        if other.is_zero():
            return self
        lo = min(self.n_min, other.n_min)
        hi = max(self.n_max, other.n_max)
        out = np.zeros(hi - lo + 1, dtype=np.complex128)
        out[self.n_min - lo : self.n_max - lo + 1] += self._coeffs
        out[other.n_min - lo : other.n_max - lo + 1] += sign * other._coeffs
        return TrigPoly(lo, out)

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        return self._combine(other, 1.0)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self._combine(other, -1.0)

    def __neg__(self) -> "TrigPoly":
        return TrigPoly(self.n_min, -self._coeffs)

    def __mul__(self, c) -> "TrigPoly":
        if not isinstance(c, Number):
            return NotImplemented
        return TrigPoly(self.n_min, self._coeffs * complex(c))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self.n_min == other.n_min and np.array_equal(self._coeffs, other._coeffs)

    def __hash__(self):
        return hash((self.n_min, self._coeffs.tobytes()))

    def __repr__(self) -> str:
        if self.is_zero():
            return "TrigPoly(0)"
        return f"TrigPoly(n=[{self.n_min}, {self.n_max}], {len(self.support())} terms)"


def poly_from_coeffs(entries: Iterable[tuple[int, complex]]) -> TrigPoly:
    """Build a polynomial from ``(n, value)`` pairs; duplicate ``n`` are summed."""
    entries = list(entries)
    if not entries:
        return TrigPoly(0, [])
    ns = []
    vals = []
    for n, v in entries:
        if isinstance(n, float) and not n.is_integer():
            raise InvalidCoefficient(f"frequency must be an integer, got {n!r}")
        v = complex(v)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise InvalidCoefficient(f"non-finite coefficient at n={n}")
        ns.append(int(n))
        vals.append(v)
    ns_arr = np.asarray(ns, dtype=np.int64)
    lo = int(ns_arr.min())
    out = np.zeros(int(ns_arr.max()) - lo + 1, dtype=np.complex128)
    np.add.at(out, ns_arr - lo, np.asarray(vals, dtype=np.complex128))
    return TrigPoly(lo, out)


def monomial(n: int, c: complex = 1.0) -> TrigPoly:
    """``c e^{i 2 pi n theta}``."""
    return TrigPoly(n, [c])


@dataclass(frozen=True)
class BandSpec:
    """Inclusive frequency window ``[n_min, n_max]``."""

    n_min: int
    n_max: int

    def __post_init__(self):
        if self.n_min > self.n_max:
            raise BandError(f"empty band [{self.n_min}, {self.n_max}]")

    def fits(self, m: int) -> bool:
        return -m // 2 < self.n_min and self.n_max < m // 2


def full_band(m: int) -> BandSpec:
    """Largest band that fits strictly inside the Nyquist window of ``m``."""
    return BandSpec(-(m // 2) + 1, m // 2 - 1)


class GridFunction:
    """Samples of a function on ``theta_j = j / M``, ``M`` a power of two."""

    __slots__ = ("_samples",)

    def __init__(self, samples):
        s = np.array(samples)
        if s.dtype.kind not in "fc":
            s = s.astype(np.float64)
        elif s.dtype.kind == "f":
            s = s.astype(np.float64, copy=False)
        else:
            s = s.astype(np.complex128, copy=False)
        s = s.reshape(-1)
        m = s.shape[0]
        if m < 2 or not is_power_of_two(m):
            raise InvalidInput(f"grid size must be a power of two >= 2, got {m}")
        if not np.all(np.isfinite(s)):
            raise InvalidInput("grid samples must be finite")
        self._samples = _frozen(s)

    @property
    def samples(self) -> np.ndarray:
        return self._samples

    @property
    def grid_size(self) -> int:
        return self._samples.shape[0]

    @property
    def is_real(self) -> bool:
        return self._samples.dtype.kind == "f"

    def abs(self) -> "GridFunction":
        return GridFunction(np.abs(self._samples))

    def sup(self) -> float:
        return kernels.abs_max(self._samples)

    def mean(self) -> complex:
        return complex(np.mean(self._samples))

    def nodes(self) -> np.ndarray:
        return np.arange(self.grid_size) / self.grid_size

    def _check(self, other: "GridFunction"):
        if not isinstance(other, GridFunction):
            raise TypeError("expected GridFunction")
        if other.grid_size != self.grid_size:
            raise GridMismatch(f"grid sizes differ: {self.grid_size} vs {other.grid_size}")

    def __add__(self, other):
        self._check(other)
        return GridFunction(self._samples + other._samples)

    def __sub__(self, other):
        self._check(other)
        return GridFunction(self._samples - other._samples)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self._samples * other._samples)
        if isinstance(other, Number):
            return GridFunction(self._samples * other)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return GridFunction(-self._samples)

    def __repr__(self) -> str:
        return f"GridFunction(M={self.grid_size}, {'real' if self.is_real else 'complex'})"


def grid_size_for(degree: int, oversample: float = defaults.OVERSAMPLE) -> int:
    """Smallest power of two >= ``oversample * (2 * degree + 1)`` (and >= 2)."""
    if oversample < 1:
        raise InvalidInput("oversample must be >= 1")
    target = max(2.0, oversample * (2 * int(degree) + 1))
    return 1 << int(math.ceil(math.log2(target)))


def _check_grid(m: int):
    if not is_power_of_two(m) or m < 2:
        raise InvalidInput(f"grid size must be a power of two >= 2, got {m}")


def synthesize(f: TrigPoly, m: int) -> GridFunction:
    """Evaluate ``f`` on the ``m``-point grid via an inverse FFT."""
    _check_grid(m)
    if m <= 2 * f.degree():
        raise AliasingError(f"grid of size {m} aliases a polynomial of degree {f.degree()}")
    buf = np.zeros(m, dtype=np.complex128)
    if not f.is_zero():
        buf[f.frequencies() % m] = f.coeffs
    return GridFunction(np.fft.ifft(buf) * m)


def _spectrum(g: GridFunction) -> np.ndarray:
    return np.fft.fft(g.samples) / g.grid_size


def analyze(g: GridFunction, band: BandSpec | None = None) -> TrigPoly:
    """Fourier coefficients of the samples restricted to ``band``.

    ``band`` defaults to :func:`full_band`.
    """
    m = g.grid_size
    if band is None:
        band = full_band(m)
    if not band.fits(m):
        raise BandError(f"band [{band.n_min}, {band.n_max}] exceeds the Nyquist window of M={m}")
    c = _spectrum(g)
    n = np.arange(band.n_min, band.n_max + 1)
    return TrigPoly(band.n_min, c[n % m])


def lp_norm(g: GridFunction, p: float) -> float:
    """``(mean |g|^p)^(1/p)``; ``p = math.inf`` gives the sup over the grid."""
    if p == math.inf:
        return g.sup()
    if not p >= 1:
        raise UnsupportedExponent(f"p must be >= 1, got {p}")
    s = kernels.abs_power_mean(g.samples, p)
    if p == 1.0:
        return s
    if p == 2.0:
        return math.sqrt(s)
    return s ** (1.0 / p)


def negative_energy_ratio(g: GridFunction) -> float:
    """Relative l2 mass of the negative frequencies in ``[-M/2, M/2)``."""
    m = g.grid_size
    e = np.abs(_spectrum(g)) ** 2
    total = float(np.sum(e))
    if total == 0.0:
        raise ZeroFunction("negative_energy_ratio of the zero function")
    neg = float(np.sum(e[m // 2 :]))
    return math.sqrt(neg / total)


def pointwise(g: GridFunction, h: GridFunction | None, op: str, c: complex | None = None) -> GridFunction:
    """Elementwise ``add``, ``sub``, ``mul``, ``abs`` or ``scale`` (by ``c``)."""
    if op == "abs":
        return g.abs()
    if op == "scale":
        if c is None:
            raise InvalidInput("scale needs a constant c")
        return g * c
    if h is None:
        raise InvalidInput(f"{op} needs two operands")
    if op == "add":
        return g + h
    if op == "sub":
        return g - h
    if op == "mul":
        return g * h
    raise InvalidInput(f"unknown pointwise op {op!r}")


def read_coefficients(path) -> TrigPoly:
    """Parse a ``n,re,im`` coefficient file (``#`` starts a comment)."""
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 3:
                raise InvalidInput(f"{path}:{lineno}: expected 'n,re,im', got {raw.strip()!r}")
            try:
                n = int(parts[0])
                re_, im_ = float(parts[1]), float(parts[2])
            except ValueError as exc:
                raise InvalidInput(f"{path}:{lineno}: {exc}") from None
            entries.append((n, complex(re_, im_)))
    try:
        return poly_from_coeffs(entries)
    except InvalidCoefficient as exc:
        raise InvalidCoefficient(f"{path}: {exc}") from None


def write_coefficients(f: TrigPoly, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# n,re,im\n")
        for n, c in f.items():
            fh.write(f"{n},{c.real!r},{c.imag!r}\n")
