import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardyano import _kernels_py, kernels

compiled = pytest.importorskip("hardyano._kernels")

RTOL = 1e-12


def _inputs(seed, m):
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) * 10.0 ** rng.uniform(-3, 3)
    x = np.abs(z)
    h = rng.standard_normal(m) * 5
    a = np.maximum(1.0, np.cbrt(x / 2.0))
    return z, x, a, h


@given(st.integers(0, 10_000), st.sampled_from([1, 7, 64, 1000]))
@settings(max_examples=40, deadline=None)
def test_reductions_agree(seed, m):
    z, x, _, _ = _inputs(seed, m)
    for p in (1.0, 1.25, 2.0, 3.5):
        assert compiled.abs_power_mean(z, p) == pytest.approx(_kernels_py.abs_power_mean(z, p), rel=RTOL)
    assert compiled.abs_max(z) == pytest.approx(_kernels_py.abs_max(z), rel=RTOL)
    for r in (0.25, 1.0, 2.0):
        assert compiled.phi_mean(x, 0.7, r) == pytest.approx(_kernels_py.phi_mean(x, 0.7, r), rel=RTOL)
        assert compiled.zygmund_mean(x, r) == pytest.approx(_kernels_py.zygmund_mean(x, r), rel=RTOL)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_elementwise_agree(seed):
    z, x, a, h = _inputs(seed, 333)
    np.testing.assert_allclose(compiled.a_lambda(x, 3.0), _kernels_py.a_lambda(x, 3.0), rtol=RTOL)
    np.testing.assert_allclose(compiled.reciprocal_analytic(a, h), _kernels_py.reciprocal_analytic(a, h), rtol=RTOL)
    F = _kernels_py.reciprocal_analytic(a, h)
    np.testing.assert_allclose(compiled.g_from_f(F), _kernels_py.g_from_f(F), rtol=1e-11, atol=1e-15)


def test_tiny_values():
    z = np.array([1e-310 + 0j, 0j, 3e-320j])
    assert compiled.abs_max(z) == _kernels_py.abs_max(z) == 1e-310
    assert compiled.abs_power_mean(z, 1.0) == pytest.approx(_kernels_py.abs_power_mean(z, 1.0), rel=1e-6)


def test_wrappers_coerce():
    assert kernels.abs_max([3, 4j]) == 4.0
    assert kernels.a_lambda([8], 1).tolist() == [2.0]


def _backend_in_subprocess(env_value):
    env = dict(os.environ)
    env.pop("HARDYANO_PURE", None)
    if env_value is not None:
        env["HARDYANO_PURE"] = env_value
    code = "from hardyano import kernels; print(kernels.BACKEND)"
    return subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout.strip()


def test_backend_selection():
    assert _backend_in_subprocess(None) == "cython"
    assert _backend_in_subprocess("0") == "cython"
    assert _backend_in_subprocess("1") == "python"
