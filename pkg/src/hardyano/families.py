"""Test functions: Fejer and de la Vallee Poussin kernels, the modulated
kernels ``beta_N``, analytic Dirichlet and geometric polynomials, random
lacunary polynomials, and the decomposition corpus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ParameterError
from .multipliers import lambda_set
from .spectral import TrigPoly, grid_size_for, synthesize

__all__ = [
    "FamilySpec",
    "fejer",
    "vallee_poussin",
    "beta",
    "beta_center",
    "dirichlet_analytic",
    "geometric",
    "geometric_degree",
    "random_lambda",
    "random_analytic",
    "build_family",
    "parse_family",
    "decomposition_corpus",
]

BETA_MAX_N = 9


def fejer(n: int) -> TrigPoly:
    """``K_n``: coefficients ``1 - |j| / (n + 1)`` on ``|j| <= n``."""
    if n < 0:
        raise ParameterError(f"Fejer order must be >= 0, got {n}")
    j = np.arange(-n, n + 1)
    return TrigPoly(-n, 1.0 - np.abs(j) / (n + 1.0))


def vallee_poussin(n: int) -> TrigPoly:
    """``V_n = 2 K_{2n+1} - K_n``; equal to 1 on ``|j| <= n``."""
    if n < 1:
        raise ParameterError(f"de la Vallee Poussin order must be >= 1, got {n}")
    return 2.0 * fejer(2 * n + 1) - fejer(n)


def beta_center(N: int) -> int:
    return 2 * 3**N + 1


def beta(N: int) -> TrigPoly:
    """``e_{2 3^N + 1} V_{3^N}``; analytic, plateau ``[3^N + 1, 3^(N+1) + 1]``."""
    if not 1 <= N <= BETA_MAX_N:
        raise ParameterError(f"beta needs 1 <= N <= {BETA_MAX_N}, got {N}")
    return vallee_poussin(3**N).shift(beta_center(N))


def dirichlet_analytic(m: int) -> TrigPoly:
    """Coefficient 1 on ``0..m``."""
    if m < 0:
        raise ParameterError(f"dirichlet_analytic needs m >= 0, got {m}")
    return TrigPoly(0, np.ones(m + 1))


def geometric_degree(rho: float, floor: float = 1e-12) -> int:
    """Smallest degree with ``rho^deg < floor``."""
    return max(1, int(np.ceil(np.log(floor) / np.log(rho))) + 1)


def geometric(rho: float, deg: int | None = None) -> TrigPoly:
    """Truncated ``1 / (1 - rho e_1)``: coefficient ``rho^n`` on ``0..deg``."""
    if not 0 < rho < 1:
        raise ParameterError(f"rho must lie in (0, 1), got {rho}")
    if deg is None:
        deg = geometric_degree(rho)
    if deg < 1:
        raise ParameterError(f"deg must be >= 1, got {deg}")
    return TrigPoly(0, rho ** np.arange(deg + 1, dtype=float))


def _complex_gaussian(rng: np.random.Generator, size: int) -> np.ndarray:
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)


def random_lambda(count: int, max_freq: int, seed: int) -> TrigPoly:
    """Unit-L2 polynomial on ``count`` distinct lacunary frequencies."""
    lam = lambda_set(max_freq)
    if not 1 <= count <= len(lam):
        raise ParameterError(f"count must lie in [1, {len(lam)}] for max_freq={max_freq}, got {count}")
    rng = np.random.default_rng(seed)
    freqs = np.sort(rng.choice(np.asarray(lam), size=count, replace=False))
    c = _complex_gaussian(rng, count)
    c /= np.sqrt(np.sum(np.abs(c) ** 2))
    out = np.zeros(freqs[-1] - freqs[0] + 1, dtype=complex)
    out[freqs - freqs[0]] = c
    return TrigPoly(int(freqs[0]), out)


def random_analytic(deg: int, seed: int, sup: float | None = None) -> TrigPoly:
    """Gaussian coefficients on ``0..deg``; rescaled to the given grid sup."""
    if deg < 0:
        raise ParameterError(f"deg must be >= 0, got {deg}")
    rng = np.random.default_rng(seed)
    f = TrigPoly(0, _complex_gaussian(rng, deg + 1))
    if sup is not None:
        f = f * (sup / synthesize(f, grid_size_for(deg)).sup())
    return f


@dataclass(frozen=True)
class FamilySpec:
    """A named family member: ``kind`` plus keyword parameters."""

    kind: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params), "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "FamilySpec":
        return cls(d["kind"], dict(d.get("params", {})), int(d.get("seed", 0)))

    def __str__(self) -> str:
        if not self.params:
            return self.kind
        return self.kind + ":" + ",".join(f"{k}={v}" for k, v in self.params.items())


_BUILDERS = {
    "fejer": (fejer, ("n",)),
    "vallee_poussin": (vallee_poussin, ("n",)),
    "beta": (beta, ("N",)),
    "dirichlet_analytic": (dirichlet_analytic, ("m",)),
    "geometric": (geometric, ("rho", "deg")),
    "random_lambda": (random_lambda, ("count", "max_freq")),
    "random_analytic": (random_analytic, ("deg", "sup")),
}

_INT_PARAMS = {"n", "N", "m", "deg", "count", "max_freq"}


def _coerce(key: str, value):
    if isinstance(value, str):
        value = float(value)
    if key in _INT_PARAMS:
        if float(value) != int(value):
            raise ParameterError(f"{key} must be an integer, got {value}")
        return int(value)
    return float(value)


def parse_family(text: str, seed: int = 0) -> FamilySpec:
    """Parse ``kind[:key=value,...]``, e.g. ``geometric:rho=0.9,deg=300``."""
    kind, _, rest = text.partition(":")
    kind = kind.strip()
    if kind not in _BUILDERS:
        raise ParameterError(f"unknown family {kind!r}; choose from {sorted(_BUILDERS)}")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise ParameterError(f"malformed family parameter {item!r}")
        params[key.strip()] = _coerce(key.strip(), value.strip())
    return FamilySpec(kind, params, seed)


def build_family(spec: FamilySpec) -> TrigPoly:
    """Construct the polynomial described by ``spec``; deterministic."""
    if spec.kind not in _BUILDERS:
        raise ParameterError(f"unknown family {spec.kind!r}")
    fn, allowed = _BUILDERS[spec.kind]
    unknown = set(spec.params) - set(allowed)
    if unknown:
        raise ParameterError(f"family {spec.kind} does not take {sorted(unknown)}")
    kwargs = {k: _coerce(k, v) for k, v in spec.params.items()}
    if spec.kind in ("random_lambda", "random_analytic"):
        kwargs["seed"] = spec.seed
    try:
        return fn(**kwargs)
    except TypeError as exc:
        raise ParameterError(f"family {spec.kind}: {exc}") from None


def decomposition_corpus(seed: int = 0) -> list[tuple[str, TrigPoly]]:
    """Fixed corpus of 56 analytic polynomials for the decomposition suites.

    Degrees stay at or below 512 and grid sup norms span ``1e-1 .. 1e3``:
    40 random polynomials with log-spaced sup targets, plus Dirichlet,
    geometric, ``beta_N`` and monomial members.
    """
    rng = np.random.default_rng(seed)
    out = []
    sups = np.logspace(-1, 3, 40)
    for i, s in enumerate(sups):
        deg = int(rng.integers(1, 513))
        out.append((f"random[{i}] deg={deg} sup={s:.3g}", random_analytic(deg, seed * 1000 + i, float(s))))
    for m in (0, 4, 16, 64, 256, 512):
        out.append((f"dirichlet_analytic({m})", dirichlet_analytic(m)))
    for rho in (0.5, 0.8, 0.9, 0.97):
        f = geometric(rho, min(512, geometric_degree(rho)))
        out.append((f"geometric({rho})", f))
    for n in (1, 2, 3, 4):
        out.append((f"beta({n})", beta(n)))
    out.append(("0.5", TrigPoly(0, [0.5])))
    out.append(("0.1 e_3", TrigPoly(3, [0.1])))
    return out
