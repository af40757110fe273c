"""Experiment runners behind the command line, plus power-law fitting and
report emission.

Each ``run_*`` function takes an :class:`ExperimentConfig` and returns an
:class:`ExperimentReport` whose rows follow the configured parameter order.
Sweeps fan out over a thread pool capped by ``HARDY_THREADS``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import platform
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, NamedTuple

import numpy as np

from . import defaults, kernels
from .errors import FitError, InvalidInput, ParameterError, ReportIOError
from .families import FamilySpec, beta, build_family, parse_family, random_lambda
from .kislyakov import check_envelopes, decompose, envelope_report
from .multipliers import lambda_set
from .orlicz import OrliczParams, luxemburg_norm, zygmund_functional
from .spectral import TrigPoly, grid_size_for, lp_norm, read_coefficients, synthesize
from .yano import (
    compose_with_riesz,
    operator_by_name,
    piecewise_pn_norms,
    trace_proof,
)

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "ExperimentReport",
    "FitResult",
    "fit_power_law",
    "worker_count",
    "parallel_map",
    "run_experiment",
    "run_growth",
    "run_zygmund",
    "run_sharpness",
    "run_bonami",
    "run_decompose",
    "run_trace",
    "run_equivalence",
    "run_orlicz_norm",
    "emit_report",
    "render_report",
]

EXPERIMENTS = ("growth", "zygmund", "sharpness", "bonami", "decompose", "trace", "equivalence", "orlicz-norm")
FORMATS = ("json", "csv")

_DEFAULTS = {
    "growth": {"operator": "square_function", "family": "geometric", "p_grid": (1.05, 1.1, 1.2, 1.3, 1.5)},
    "zygmund": {"operator": "square_function", "family": "dirichlet_analytic",
                "m_range": (64, 128, 256, 512, 1024, 2048, 4096), "r": 1.0},
    "sharpness": {"operator": "lacunary_projection", "n_range": tuple(range(1, 9))},
    "bonami": {"q_grid": (4.0, 6.0, 8.0), "trials": 200, "m_range": (3**6, 3**7, 3**8, 3**9)},
    "decompose": {},
    "trace": {"operator": "square_function"},
    "equivalence": {"operator": "square_function", "family": "geometric",
                    "m_range": (4, 8, 16, 32, 64, 128, 256, 512)},
    "orlicz-norm": {"r": 1.0},
}

# sharpness fits use N >= 3 so the first, pre-asymptotic members do not bias the slope
SHARPNESS_FIT_MIN_N = 3
BONAMI_TOLERANCE = 0.2


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one report.

    ``m_range`` holds the swept size parameter: polynomial size for the
    Zygmund and endpoint sweeps, ``max_freq`` for the Bonami suite.
    """

    experiment: str
    operator: str | None = None
    family: str | None = None
    coeffs: str | None = None
    p_grid: tuple[float, ...] | None = None
    n_range: tuple[int, ...] | None = None
    m_range: tuple[int, ...] | None = None
    q_grid: tuple[float, ...] | None = None
    r: float | None = None
    trials: int | None = None
    oversample: float = defaults.OVERSAMPLE
    seed: int = 0
    out: str | None = None
    format: str = "json"

    def resolved(self) -> "ExperimentConfig":
        """Fill per-experiment defaults and validate."""
        if self.experiment not in EXPERIMENTS:
            raise ParameterError(f"unknown experiment {self.experiment!r}; choose from {list(EXPERIMENTS)}")
        filled = {k: v for k, v in _DEFAULTS[self.experiment].items() if getattr(self, k) is None}
        if self.coeffs is not None:
            filled.pop("family", None)
        cfg = replace(self, **filled)
        if cfg.family is not None and cfg.coeffs is not None:
            raise ParameterError("give either a family or a coefficient file, not both")
        cfg._validate()
        return cfg

    def _validate(self):
        if self.format not in FORMATS:
            raise ParameterError(f"format must be one of {FORMATS}, got {self.format!r}")
        if not self.oversample >= 2:
            raise ParameterError(f"grid oversampling must be >= 2, got {self.oversample}")
        if self.r is not None and not self.r > 0:
            raise ParameterError(f"r must be positive, got {self.r}")
        if self.operator is not None:
            operator_by_name(self.operator)
        if self.family is not None:
            parse_family(self.family, self.seed)
        exp = self.experiment
        if exp == "growth":
            p = self.p_grid
            if len(p) < 5 or any(not 1.0 < x <= 2.0 for x in p):
                raise ParameterError("growth needs at least 5 exponents in (1, 2]")
        if exp in ("zygmund", "equivalence", "bonami"):
            if len(self.m_range) < 3 or any(m < 1 for m in self.m_range):
                raise ParameterError(f"{exp} needs at least 3 positive sizes")
        if exp == "zygmund" and self.operator != "square_function":
            raise ParameterError("the Zygmund experiment is defined for the square function only")
        if exp == "sharpness" and any(not 1 <= n <= 9 for n in self.n_range):
            raise ParameterError("sharpness needs N in [1, 9]")
        if exp == "bonami":
            if self.trials < 100:
                raise ParameterError("bonami needs at least 100 trials")
            if any(not 2.0 < q <= 16.0 for q in self.q_grid):
                raise ParameterError("bonami needs q in (2, 16]")
            if any(m < 2 for m in self.m_range):
                raise ParameterError("bonami needs max_freq >= 2")
        if exp in ("decompose", "trace", "orlicz-norm") and self.family is None and self.coeffs is None:
            raise ParameterError(f"{exp} needs --family or --coeffs")

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        kw = dict(d)
        for k in ("p_grid", "n_range", "m_range", "q_grid"):
            if kw.get(k) is not None:
                kw[k] = tuple(kw[k])
        return cls(**kw)


@dataclass
class ExperimentReport:
    config: dict
    rows: list[dict]
    fits: dict = field(default_factory=dict)
    environment: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema_version": defaults.SCHEMA_VERSION,
            "config": self.config,
            "rows": self.rows,
            "fits": self.fits,
            "environment": self.environment,
        }


class FitResult(NamedTuple):
    slope: float
    intercept: float
    residual: float


def fit_power_law(points) -> FitResult:
    """Least-squares line through ``(log x, log y)``.

    ``residual`` is the root mean square of the log-space residuals.
    """
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 3:
        raise FitError(f"need at least 3 points, got {len(pts)}")
    x, y = np.array(pts).T
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))) or np.any(x <= 0) or np.any(y <= 0):
        raise FitError("power-law fit needs finite positive x and y")
    if len(np.unique(x)) != len(x):
        raise FitError("power-law fit needs distinct x")
    lx, ly = np.log(x), np.log(y)
    A = np.column_stack([lx, np.ones_like(lx)])
    (slope, intercept), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - (slope * lx + intercept)
    return FitResult(float(slope), float(intercept), float(np.sqrt(np.mean(resid**2))))


def worker_count() -> int:
    """Thread cap: ``HARDY_THREADS`` if set, else the CPU count (at most 8)."""
    raw = os.environ.get("HARDY_THREADS")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ParameterError(f"HARDY_THREADS must be a positive integer, got {raw!r}") from None
        if n < 1:
            raise ParameterError(f"HARDY_THREADS must be a positive integer, got {raw!r}")
        return n
    return max(1, min(8, os.cpu_count() or 1))


def parallel_map(fn: Callable, items) -> list:
    """``[fn(x) for x in items]`` on a thread pool; output keeps input order."""
    items = list(items)
    n = min(worker_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# input resolution

_TIES = {
    "dirichlet_analytic": lambda m: {"m": int(m)},
    "fejer": lambda m: {"n": int(m)},
    "geometric": lambda m: {"rho": 1.0 - 1.0 / m},
    "random_analytic": lambda m: {"deg": int(m)},
}


def _member(cfg: ExperimentConfig, tie: dict | None = None) -> tuple[str, TrigPoly]:
    """Build the input polynomial; ``tie`` fills parameters the user left open."""
    if cfg.coeffs is not None:
        return cfg.coeffs, read_coefficients(cfg.coeffs)
    spec = parse_family(cfg.family, cfg.seed)
    params = dict(tie or {})
    params.update(spec.params)
    spec = FamilySpec(spec.kind, params, spec.seed)
    return str(spec), build_family(spec)


def _size_tie(cfg: ExperimentConfig, size: int) -> dict:
    if cfg.coeffs is not None:
        return {}
    kind = parse_family(cfg.family).kind
    if kind not in _TIES:
        raise ParameterError(f"family {kind} has no size parameter to sweep; choose from {sorted(_TIES)}")
    return _TIES[kind](size)


def growth_member_beta(p: float) -> int:
    """``N`` tied to ``p`` for the beta family: about ``1 / (2 (p - 1))``."""
    return int(min(8, max(1, round(1.0 / (2.0 * (p - 1.0))))))


def _p_tie(cfg: ExperimentConfig, p: float) -> dict:
    if cfg.coeffs is not None:
        return {}
    kind = parse_family(cfg.family).kind
    if kind == "geometric":
        return {"rho": 2.0 - p}
    if kind == "beta":
        return {"N": growth_member_beta(p)}
    return {}


def _grid(cfg: ExperimentConfig, f: TrigPoly) -> int:
    return grid_size_for(f.degree(), cfg.oversample)


def _environment(cfg: ExperimentConfig, rows: list[dict]) -> dict:
    grids = sorted({int(r["grid_size"]) for r in rows if "grid_size" in r})
    return {
        "backend": kernels.BACKEND,
        "numpy": np.__version__,
        "python": platform.python_version(),
        "threads": worker_count(),
        "grid_sizes": grids,
        "oversample": cfg.oversample,
        "luxemburg_tol": defaults.LUXEMBURG_TOL,
        "envelope_slack": defaults.ENVELOPE_SLACK,
    }


def _fit(value, rows, **extra) -> dict:
    return {"value": value, "rows": list(rows), **extra}


def _report(cfg: ExperimentConfig, rows: list[dict], fits: dict) -> ExperimentReport:
    return ExperimentReport(cfg.to_dict(), rows, fits, _environment(cfg, rows))


def _power_fit(rows, idx, xkey, ykey) -> dict:
    res = fit_power_law([(rows[i][xkey], rows[i][ykey]) for i in idx])
    return _fit(res.slope, idx, intercept=res.intercept, residual=res.residual)


# runners

def run_growth(cfg: ExperimentConfig) -> ExperimentReport:
    """``||T f_p||_p / ||f_p||_p`` across ``p`` and its slope against ``p - 1``."""
    cfg = cfg.resolved()
    op = operator_by_name(cfg.operator)

    def point(p):
        label, f = _member(cfg, _p_tie(cfg, p))
        m = _grid(cfg, f)
        nf = lp_norm(synthesize(f, m), p)
        nt = lp_norm(op.apply(f, m), p)
        return {"p": p, "family": label, "grid_size": m, "norm_f": nf, "norm_tf": nt,
                "ratio": nt / nf if nf > 0 else math.nan}

    rows = parallel_map(point, cfg.p_grid)
    usable = [i for i, r in enumerate(rows) if math.isfinite(r["ratio"]) and r["ratio"] > 0]
    if len(usable) < 3:
        raise FitError("fewer than 3 usable growth points")
    res = fit_power_law([(rows[i]["p"] - 1.0, rows[i]["ratio"]) for i in usable])
    fits = {"slope": _fit(res.slope, usable, intercept=res.intercept, residual=res.residual)}
    return _report(cfg, rows, fits)


def run_zygmund(cfg: ExperimentConfig) -> ExperimentReport:
    """``||S f||_1`` against ``1 + int |f| log^r(1 + |f|)`` and against ``||f||_1``."""
    cfg = cfg.resolved()
    op = operator_by_name(cfg.operator)

    def point(size):
        label, f = _member(cfg, _size_tie(cfg, size))
        m = _grid(cfg, f)
        fs = synthesize(f, m)
        s1 = lp_norm(op.apply(f, m), 1.0)
        f1 = lp_norm(fs, 1.0)
        z = 1.0 + zygmund_functional(fs, cfg.r)
        return {"size": size, "family": label, "grid_size": m, "norm_sf_l1": s1, "norm_f_l1": f1,
                "one_plus_zygmund": z, "ratio": s1 / z, "l1_ratio": s1 / f1}

    rows = parallel_map(point, cfg.m_range)
    idx = list(range(len(rows)))
    ratio = [r["ratio"] for r in rows]
    l1 = [r["l1_ratio"] for r in rows]
    fits = {
        "max_ratio": _fit(max(ratio), idx),
        "ratio_last_over_first": _fit(ratio[-1] / ratio[0], [0, idx[-1]]),
        "l1_ratio_last_over_first": _fit(l1[-1] / l1[0], [0, idx[-1]]),
    }
    return _report(cfg, rows, fits)


def lacunary_l2_squared(N: int) -> Fraction:
    """``||T_Lambda beta_N||_2^2`` in exact rational arithmetic."""
    n = 3**N
    center = 2 * n + 1
    total = Fraction(0)
    for lam in lambda_set(center + 2 * n + 1):
        j = abs(lam - center)
        if j > 2 * n + 1:
            continue
        c = 2 * (1 - Fraction(j, 2 * n + 2)) - max(Fraction(0), 1 - Fraction(j, n + 1))
        total += c * c
    return total


SHARPNESS_EXPONENTS = (0.25, 0.5, 1.0)


def run_sharpness(cfg: ExperimentConfig) -> ExperimentReport:
    """Lacunary projection of the ``beta_N`` family against its Zygmund norms."""
    cfg = cfg.resolved()
    op = operator_by_name(cfg.operator)

    def point(N):
        f = beta(N)
        m = _grid(cfg, f)
        fs = synthesize(f, m)
        tf = op.apply(f, m)
        exact = lacunary_l2_squared(N)
        row = {"N": N, "grid_size": m, "norm_tf_l1": lp_norm(tf, 1.0), "norm_tf_l2": lp_norm(tf, 2.0),
               "norm_tf_l2_exact": math.sqrt(exact), "lower_bound": math.sqrt(N + 1),
               "lower_bound_holds": exact >= N + 1}
        for s in SHARPNESS_EXPONENTS:
            lux = luxemburg_norm(fs, OrliczParams(s))
            row[f"lux_r{s:g}"] = lux
            row[f"ratio_r{s:g}"] = row["norm_tf_l1"] / lux
        return row

    rows = parallel_map(point, cfg.n_range)
    idx = [i for i, r in enumerate(rows) if r["N"] >= SHARPNESS_FIT_MIN_N]
    if len(idx) < 3:
        idx = list(range(len(rows)))
    fits = {
        "exponent_tf_l2": _power_fit(rows, idx, "N", "norm_tf_l2_exact"),
        "lower_bound_all": _fit(all(r["lower_bound_holds"] for r in rows), list(range(len(rows)))),
    }
    for s in SHARPNESS_EXPONENTS:
        fits[f"exponent_lux_r{s:g}"] = _power_fit(rows, idx, "N", f"lux_r{s:g}")
        vals = [rows[i][f"ratio_r{s:g}"] for i in idx]
        fits[f"max_ratio_r{s:g}"] = _fit(max(vals), idx)
        fits[f"ratio_r{s:g}_nondecreasing"] = _fit(bool(all(b >= a for a, b in zip(vals, vals[1:]))), idx)
    return _report(cfg, rows, fits)


def _trial_seed(seed: int, scale: int, t: int) -> int:
    return int(np.random.SeedSequence([seed, scale, t]).generate_state(1)[0])


def run_bonami(cfg: ExperimentConfig) -> ExperimentReport:
    """Maxima of ``||h||_q / (q ||h||_2)`` and ``||h||_2 / ||h||_1`` over random
    polynomials using every lacunary frequency up to ``max_freq``."""
    cfg = cfg.resolved()
    rows = []
    for scale in cfg.m_range:
        count = len(lambda_set(scale))
        m = grid_size_for(scale, cfg.oversample)

        def trial(t, scale=scale, count=count, m=m):
            h = synthesize(random_lambda(count, scale, _trial_seed(cfg.seed, scale, t)), m)
            l2 = lp_norm(h, 2.0)
            return [lp_norm(h, q) / (q * l2) for q in cfg.q_grid], l2 / lp_norm(h, 1.0)

        out = parallel_map(trial, range(cfg.trials))
        row = {"max_freq": scale, "count": count, "trials": cfg.trials, "grid_size": m}
        for k, q in enumerate(cfg.q_grid):
            row[f"c_q{q:g}"] = max(o[0][k] for o in out)
        row["l2_over_l1"] = max(o[1] for o in out)
        rows.append(row)
    idx = list(range(len(rows)))
    fits = {}
    for key in [f"c_q{q:g}" for q in cfg.q_grid] + ["l2_over_l1"]:
        vals = np.array([r[key] for r in rows])
        spread = float(np.max(np.abs(vals / vals[0] - 1.0)))
        fits[f"{key}_max"] = _fit(float(vals.max()), idx)
        fits[f"{key}_spread"] = _fit(spread, idx)
        fits[f"{key}_stable"] = _fit(bool(np.all(np.isfinite(vals)) and spread <= BONAMI_TOLERANCE), idx)
    return _report(cfg, rows, fits)


def run_decompose(cfg: ExperimentConfig) -> ExperimentReport:
    """Per-piece table of the analytic decomposition."""
    cfg = cfg.resolved()
    label, f = _member(cfg)
    m = _grid(cfg, f)
    d = decompose(f, m)
    norms = piecewise_pn_norms(d)
    rows = []
    for env, (n, pn, lpn), piece in zip(envelope_report(d), norms, d.pieces):
        rows.append({"n": n, "grid_size": m, "sup": env.measured_sup, "bound": env.bound,
                     "norm_l1": lp_norm(piece.values, 1.0), "p_n": pn, "norm_pn": lpn,
                     "leakage": env.leakage, "envelope_ok": env.ok})
    idx = list(range(len(rows)))
    counts = check_envelopes(d)
    fits = {"input": _fit(label, []), "cutoff": _fit(d.cutoff, idx),
            "telescoping_residual": _fit(d.residual(), idx)}
    for k, v in counts.items():
        fits[f"violations_{k}"] = _fit(v, idx)
    return _report(cfg, rows, fits)


def run_trace(cfg: ExperimentConfig) -> ExperimentReport:
    """Every estimate of the extrapolation chain, per piece and in total."""
    cfg = cfg.resolved()
    op = operator_by_name(cfg.operator, cfg.r)
    label, f = _member(cfg)
    tr = trace_proof(f, op, _grid(cfg, f))
    rows = []
    for rec in tr.pieces:
        d = rec.to_dict()
        checks = d.pop("checks")
        d["grid_size"] = tr.grid_size
        d.update({f"ok_{k}": v for k, v in checks.items()})
        rows.append(d)
    idx = list(range(len(rows)))
    fits = {"input": _fit(label, []), "operator": _fit(tr.operator, []), "r": _fit(tr.r, []),
            "c0": _fit(tr.c0, []), "all_ok": _fit(tr.ok, idx)}
    fits.update({k: _fit(v, idx) for k, v in tr.totals.items()})
    fits.update({f"flag_{k}": _fit(v, idx) for k, v in tr.flags.items()})
    return _report(cfg, rows, fits)


def run_equivalence(cfg: ExperimentConfig) -> ExperimentReport:
    """Endpoint constant ``||T f||_1 / ||f||_{L log^r L}`` across a sweep,
    next to the plain ``L^1`` ratio and the ``L log^(r+1) L`` ratio that
    composing with the projection would give."""
    cfg = cfg.resolved()
    op = operator_by_name(cfg.operator, cfg.r)
    naive = compose_with_riesz(op)

    def point(size):
        label, f = _member(cfg, _size_tie(cfg, size))
        m = _grid(cfg, f)
        fs = synthesize(f, m)
        t1 = lp_norm(op.apply(f, m), 1.0)
        return {"size": size, "family": label, "grid_size": m, "norm_tf_l1": t1,
                "ratio_l1": t1 / lp_norm(fs, 1.0),
                "endpoint_ratio": t1 / luxemburg_norm(fs, OrliczParams(op.r)),
                "endpoint_ratio_composed": t1 / luxemburg_norm(fs, OrliczParams(naive.r))}

    rows = parallel_map(point, cfg.m_range)
    idx = list(range(len(rows)))
    fits = {"r": _fit(op.r, []), "r_composed": _fit(naive.r, [])}
    for key in ("endpoint_ratio", "ratio_l1", "endpoint_ratio_composed"):
        vals = [r[key] for r in rows]
        fits[f"max_{key}"] = _fit(max(vals), idx)
        fits[f"{key}_last_over_first"] = _fit(vals[-1] / vals[0], [0, idx[-1]])
    return _report(cfg, rows, fits)


def run_orlicz_norm(cfg: ExperimentConfig) -> ExperimentReport:
    """Luxemburg norm, Zygmund functional and ``L^1`` norm of one input."""
    cfg = cfg.resolved()
    label, f = _member(cfg)
    m = _grid(cfg, f)
    fs = synthesize(f, m)
    rows = [{"input": label, "r": cfg.r, "grid_size": m,
             "luxemburg": luxemburg_norm(fs, OrliczParams(cfg.r)),
             "zygmund": zygmund_functional(fs, cfg.r), "norm_l1": lp_norm(fs, 1.0)}]
    return _report(cfg, rows, {})


_RUNNERS = {
    "growth": run_growth,
    "zygmund": run_zygmund,
    "sharpness": run_sharpness,
    "bonami": run_bonami,
    "decompose": run_decompose,
    "trace": run_trace,
    "equivalence": run_equivalence,
    "orlicz-norm": run_orlicz_norm,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    if cfg.experiment not in _RUNNERS:
        raise ParameterError(f"unknown experiment {cfg.experiment!r}")
    return _RUNNERS[cfg.experiment](cfg)


# output

def _plain(v: Any):
    """JSON-safe copy: numpy scalars unwrapped, non-finite floats as strings."""
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.generic):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return v


def render_report(report: ExperimentReport, fmt: str = "json") -> str:
    if not report.rows:
        raise InvalidInput("report has no rows")
    data = _plain(report.to_dict())
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if fmt != "csv":
        raise ParameterError(f"format must be one of {FORMATS}, got {fmt!r}")
    header: list[str] = []
    for row in data["rows"]:
        header += [k for k in row if k not in header]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    w.writeheader()
    w.writerows(data["rows"])
    for name, fit in data["fits"].items():
        buf.write(f"# {name}: {json.dumps(fit)}\n")
    return buf.getvalue()


def emit_report(report: ExperimentReport, path: str | None, fmt: str = "json") -> None:
    """Write the report to ``path`` (stdout for ``None`` or ``-``)."""
    text = render_report(report, fmt)
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportIOError(f"cannot write report to {path}: {exc}") from exc
