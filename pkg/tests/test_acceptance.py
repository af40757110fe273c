"""Exit criteria of the build, one test group per criterion.

Each test records a one-line measurement; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import json
import math
import time

import numpy as np
import pytest

from hardyano import defaults
from hardyano.cli import main
from hardyano.experiments import ExperimentConfig, run_bonami, run_growth, run_sharpness, run_zygmund
from hardyano.families import decomposition_corpus
from hardyano.kislyakov import check_envelopes, decompose, leakage_sequence
from hardyano.multipliers import square_function
from hardyano.orlicz import OrliczParams, luxemburg_norm, orlicz_modular
from hardyano.spectral import GridFunction, TrigPoly, analyze, full_band, grid_size_for, lp_norm, synthesize
from hardyano.yano import elementary_inequality_check, square_function_operator, trace_proof


@pytest.fixture
def note(request):
    def add(text):
        request.node.user_properties.append(("detail", text))

    return add


@pytest.fixture(scope="module")
def corpus():
    return decomposition_corpus()


# 1: spectral correctness


@pytest.mark.acceptance(1)
def test_spectral_correctness(note):
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    worst_rt = worst_parseval = worst_s = 0.0
    for _ in range(100):
        deg = int(rng.integers(0, 513))
        n_min = int(rng.integers(-deg, 1))
        f = TrigPoly(n_min, rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1))
        m = grid_size_for(max(abs(f.n_min), abs(f.n_max)))
        g = synthesize(f, m)
        back = analyze(g, full_band(m))
        scale = np.max(np.abs(f.coeffs))
        err = max(abs(back.coefficient(n) - c) for n, c in f.items()) / scale
        worst_rt = max(worst_rt, err)
        l2 = f.l2_norm()
        worst_parseval = max(worst_parseval, abs(lp_norm(g, 2.0) - l2) / l2)
        worst_s = max(worst_s, abs(lp_norm(square_function(f, m), 2.0) - l2) / l2)
    elapsed = time.perf_counter() - t0
    note(f"round trip {worst_rt:.1e}, Parseval {worst_parseval:.1e}, S isometry {worst_s:.1e}, {elapsed:.1f}s")
    assert worst_rt <= 1e-12
    assert worst_parseval <= 1e-10 and worst_s <= 1e-10
    assert elapsed < 10.0


# 2: decomposition suite


@pytest.mark.acceptance(2)
def test_decomposition_suite(corpus, note):
    t0 = time.perf_counter()
    assert len(corpus) >= 50
    sups, worst_res, violations = [], 0.0, {}
    for _, f in corpus:
        assert f.is_analytic() and f.degree() <= 512
        d = decompose(f)
        sups.append(d.sup)
        worst_res = max(worst_res, d.residual() / (1.0 + d.sup))
        for k, v in check_envelopes(d).items():
            violations[k] = violations.get(k, 0) + v
    elapsed = time.perf_counter() - t0
    note(f"{len(corpus)} inputs, sup {min(sups):.2g}..{max(sups):.2g}, residual/(1+sup) {worst_res:.1e}, "
         f"violations {sum(violations.values())}, {elapsed:.1f}s")
    assert min(sups) <= 0.1 + 1e-12 and max(sups) >= 1e3 * (1 - 1e-12)
    assert worst_res <= 1e-9
    assert violations == {k: 0 for k in violations}
    assert elapsed < 120.0


# 3: analyticity convergence


@pytest.mark.acceptance(3)
def test_leakage_convergence(corpus, note):
    # leakage at or below the roundoff floor counts as converged
    floor = defaults.LEAKAGE_FLOOR
    not_decreasing, worst_final, worst_name = [], 0.0, ""
    for name, f in corpus:
        seq = leakage_sequence(f, oversample=8, doublings=2)
        for n, row in enumerate(seq):
            for a, b in zip(row, row[1:]):
                if not (b < a or b <= floor):
                    not_decreasing.append((name, n))
                    break
            if row[-1] > worst_final:
                worst_final, worst_name = row[-1], name
    note(f"non-decreasing pieces {len(not_decreasing)}, worst final leakage {worst_final:.2e} ({worst_name})")
    assert not not_decreasing, not_decreasing[:10]
    assert worst_final <= 1e-2


# 4: elementary inequality


@pytest.mark.acceptance(4)
def test_elementary_inequality(note):
    t0 = time.perf_counter()
    bad = [(t, n, r) for t in np.logspace(-8, 8, 33) for n in range(65) for r in (0.5, 1.0, 1.5, 2.0)
           if not elementary_inequality_check(float(t), n, r)]
    elapsed = time.perf_counter() - t0
    note(f"{33 * 65 * 4} points, {len(bad)} violations, {elapsed * 1e3:.0f}ms")
    assert not bad
    assert elapsed < 1.0


# 5: proof tracer


@pytest.mark.acceptance(5)
def test_proof_tracer(corpus, note):
    op = square_function_operator(r=1.0)
    keys = ("model_step", "pn_to_l1", "first_piece_l1", "alpha_tail", "beta_tail")
    failures, worst_c_main, bound = [], 0.0, math.inf
    for name, f in corpus:
        tr = trace_proof(f, op)
        for k in keys:
            if not tr.flags.get(k, True):
                failures.append((name, k))
        c_main = tr.totals["c_main"]
        bound = tr.totals["main_bound"]
        if not (math.isfinite(c_main) and c_main <= bound):
            failures.append((name, "main_estimate"))
        worst_c_main = max(worst_c_main, c_main)
    note(f"{len(failures)} failed per-piece checks, max implied constant {worst_c_main:.3g} <= {bound:.4g}")
    assert not failures, failures[:10]


# 6: Zygmund experiment


@pytest.mark.acceptance(6)
def test_zygmund_experiment(note):
    t0 = time.perf_counter()
    rep = run_zygmund(ExperimentConfig("zygmund"))
    elapsed = time.perf_counter() - t0
    assert [r["size"] for r in rep.rows] == [64, 128, 256, 512, 1024, 2048, 4096]
    fits = rep.fits
    last_first = fits["ratio_last_over_first"]["value"]
    l1_growth = fits["l1_ratio_last_over_first"]["value"]
    note(f"max ratio {fits['max_ratio']['value']:.3f}, last/first {last_first:.3f}, "
         f"L1 ratio growth {l1_growth:.2f}x, {elapsed:.1f}s")
    assert math.isfinite(fits["max_ratio"]["value"])
    assert last_first <= 1.5
    assert l1_growth >= 2.0
    assert elapsed < 120.0


# 7: growth of the square function near p = 1


@pytest.mark.acceptance(7)
def test_growth_slope(note):
    # a lower-bound witness on one family, not the operator norm
    rep = run_growth(ExperimentConfig("growth", operator="square_function", family="geometric"))
    slope = rep.fits["slope"]["value"]
    note(f"slope {slope:.3f} over p = {[r['p'] for r in rep.rows]}")
    assert -1.3 <= slope <= -0.5


# 8: lacunary sharpness family


@pytest.fixture(scope="module")
def sharpness_report():
    return run_sharpness(ExperimentConfig("sharpness", n_range=tuple(range(1, 9))))


@pytest.mark.acceptance(8)
def test_sharpness_lower_bound(sharpness_report, note):
    holds = [r["lower_bound_holds"] for r in sharpness_report.rows]
    note(f"exact lower bound holds for N=1..8: {all(holds)}")
    assert all(holds) and len(holds) == 8


@pytest.mark.acceptance(8)
def test_sharpness_l2_exponent(sharpness_report, note):
    e = sharpness_report.fits["exponent_tf_l2"]["value"]
    note(f"L2 exponent {e:.3f}")
    assert abs(e - 0.5) <= 0.15


@pytest.mark.acceptance(8)
def test_sharpness_llogl_exponent(sharpness_report, note):
    e = sharpness_report.fits["exponent_lux_r1"]["value"]
    note(f"L log L exponent {e:.3f}")
    assert abs(e - 1.0) <= 0.2


# 9: Bonami suite


@pytest.mark.acceptance(9)
@pytest.mark.slow
def test_bonami_suite(note):
    rep = run_bonami(ExperimentConfig("bonami", q_grid=(4.0, 6.0, 8.0), trials=200,
                                      m_range=(3**6, 3**7, 3**8, 3**9)))
    keys = ["c_q4", "c_q6", "c_q8", "l2_over_l1"]
    parts = []
    for k in keys:
        vals = [r[k] for r in rep.rows]
        assert all(math.isfinite(v) for v in vals)
        spread = max(vals) / min(vals) - 1.0
        parts.append(f"{k} {min(vals):.3f}..{max(vals):.3f}")
        assert rep.fits[f"{k}_spread"]["value"] <= 0.2
        assert spread <= 0.2
    note(", ".join(parts))


# 10: Orlicz module


@pytest.mark.acceptance(10)
def test_orlicz_module(note):
    tol = defaults.LUXEMBURG_TOL
    rng = np.random.default_rng(10)
    worst_h = worst_n = 0.0
    for _ in range(100):
        m = int(rng.choice([64, 256, 1024]))
        g = GridFunction((rng.standard_normal(m) + 1j * rng.standard_normal(m)) * 10.0 ** rng.uniform(-3, 3))
        c = 10.0 ** rng.uniform(-4, 4)
        r = float(rng.uniform(0.25, 2.0))
        lam = luxemburg_norm(g, OrliczParams(r))
        worst_h = max(worst_h, abs(luxemburg_norm(c * g, OrliczParams(r)) / (c * lam) - 1.0))
        worst_n = max(worst_n, abs(orlicz_modular(np.abs(g.samples), lam, r) - 1.0))
    one = luxemburg_norm(GridFunction(np.ones(16)), OrliczParams(1.0))
    note(f"homogeneity {worst_h:.1e}, normalization {worst_n:.1e}, constant-1 norm {one:.6f}")
    assert worst_h <= 10 * tol
    assert worst_n <= 10 * tol
    assert abs(one - 0.8065) <= 1e-3


# 11: CLI determinism and exit codes

_CLI_RUNS = {
    "growth": [],
    "zygmund": ["--m-range", "64,128,256"],
    "sharpness": ["--n-range", "1..5"],
    "bonami": ["--trials", "100", "--m-range", "27,81,243"],
    "decompose": ["--family", "dirichlet_analytic:m=256"],
    "trace": ["--family", "random_analytic:deg=128", "--seed", "7"],
    "equivalence": ["--m-range", "8,32,128"],
    "orlicz-norm": ["--family", "geometric:rho=0.9"],
}


@pytest.mark.acceptance(11)
@pytest.mark.parametrize("sub", sorted(_CLI_RUNS))
@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_cli_determinism(sub, fmt, tmp_path, note, capsys):
    outs = []
    path = tmp_path / f"report.{fmt}"
    for _ in range(2):
        code = main([sub, *_CLI_RUNS[sub], "--format", fmt, "--out", str(path)])
        assert code == 0, capsys.readouterr().err
        outs.append(path.read_text())
    if fmt == "json":
        a, b = (json.loads(s) for s in outs)
        a.pop("environment")
        b.pop("environment")
        assert a == b
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    else:
        assert outs[0] == outs[1]


@pytest.mark.acceptance(11)
def test_cli_exit_codes(tmp_path, note, capsys):
    neg = tmp_path / "neg.txt"
    neg.write_text("-1,1.0,0.0\n0,1.0,0.0\n")
    cases = {
        0: ["orlicz-norm", "--family", "dirichlet_analytic:m=4", "--out", str(tmp_path / "ok.json")],
        1: ["growth", "--p-grid", "1.1,1.2"],
        2: ["decompose", "--coeffs", str(neg)],
        3: ["decompose", "--coeffs", str(tmp_path / "missing.txt")],
    }
    got = {}
    for expected, args in cases.items():
        try:
            got[expected] = main(args)
        except SystemExit as exc:
            got[expected] = exc.code
    capsys.readouterr()
    got[3.5] = main(["growth", "--out", str(tmp_path / "no" / "such" / "dir.json")])
    note(f"exit codes {got}")
    assert got == {0: 0, 1: 1, 2: 2, 3: 3, 3.5: 3}
