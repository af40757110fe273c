import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardyano.errors import (
    AliasingError,
    BandError,
    GridMismatch,
    InvalidCoefficient,
    InvalidInput,
    UnsupportedExponent,
    ZeroFunction,
)
from hardyano.spectral import (
    BandSpec,
    GridFunction,
    TrigPoly,
    analyze,
    grid_size_for,
    lp_norm,
    monomial,
    negative_energy_ratio,
    pointwise,
    poly_from_coeffs,
    read_coefficients,
    synthesize,
    write_coefficients,
)

from strategies import polys


class TestPolyFromCoeffs:
    def test_constant(self):
        f = poly_from_coeffs([(0, 1)])
        assert f == TrigPoly(0, [1.0])
        assert f.degree() == 0

    def test_duplicates_summed(self):
        assert poly_from_coeffs([(1, 1), (1, 2)]).coefficient(1) == 3

    def test_support_and_degree(self):
        f = poly_from_coeffs([(-3, 0.5j), (7, 1)])
        assert list(f.support()) == [-3, 7]
        assert f.degree() == 7

    def test_non_finite(self):
        with pytest.raises(InvalidCoefficient):
            poly_from_coeffs([(0, float("nan"))])
        with pytest.raises(InvalidCoefficient):
            TrigPoly(0, [np.inf])

    def test_zero_trimmed(self):
        f = TrigPoly(-2, [0, 0, 1, 0])
        assert (f.n_min, f.n_max) == (0, 0)
        assert TrigPoly(5, [0, 0]).is_zero()
        assert TrigPoly(0, []).degree() == 0


class TestSynthesize:
    def test_constant(self):
        assert np.allclose(synthesize(TrigPoly(0, [1]), 8).samples, 1.0)

    def test_roots_of_unity(self):
        assert np.allclose(synthesize(monomial(1), 4).samples, [1, 1j, -1, -1j], atol=1e-15)

    def test_negative_frequency(self):
        j = np.arange(8)
        assert np.allclose(synthesize(monomial(-2), 8).samples, np.exp(-1j * 4 * np.pi * j / 8))

    def test_aliasing(self):
        with pytest.raises(AliasingError):
            synthesize(monomial(4), 8)
        with pytest.raises(InvalidInput):
            synthesize(monomial(1), 12)

    def test_grid_size_for(self):
        assert grid_size_for(0) == 8
        assert grid_size_for(1) == 32
        assert grid_size_for(512) == 16384
        assert grid_size_for(512, 32) == 65536


class TestAnalyze:
    def test_round_trip_monomial(self):
        f = analyze(synthesize(monomial(1), 8), BandSpec(-3, 3))
        assert abs(f.coefficient(1) - 1) <= 1e-12
        assert all(abs(f.coefficient(n)) <= 1e-12 for n in range(-3, 4) if n != 1)

    def test_constant(self):
        f = analyze(GridFunction(np.ones(16)))
        assert abs(f.coefficient(0) - 1) <= 1e-15

    def test_modulus_of_e1(self):
        f = analyze(synthesize(monomial(1), 16).abs())
        assert abs(f.coefficient(0) - 1) <= 1e-15

    def test_band_outside_nyquist(self):
        with pytest.raises(BandError):
            analyze(GridFunction(np.ones(8)), BandSpec(-4, 3))
        with pytest.raises(BandError):
            BandSpec(3, 2)

    @given(polys())
    @settings(max_examples=60, deadline=None)
    def test_round_trip_property(self, f):
        m = grid_size_for(f.degree(), 2)
        g = analyze(synthesize(f, m), BandSpec(f.n_min, f.n_max))
        got = np.array([g.coefficient(n) for n in f.frequencies()])
        assert np.max(np.abs(got - f.coeffs)) <= 1e-12 * np.max(np.abs(f.coeffs))


class TestLpNorm:
    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 7.0, math.inf])
    def test_constant(self, p):
        assert lp_norm(GridFunction(np.full(8, -3 + 4j)), p) == pytest.approx(5.0, rel=1e-15)

    def test_unimodular(self):
        assert lp_norm(synthesize(monomial(1), 64), 2) == pytest.approx(1.0, rel=1e-15)

    def test_one_plus_e1(self):
        g = synthesize(TrigPoly(0, [1, 1]), 1024)
        assert abs(lp_norm(g, 1) - 4 / math.pi) <= 1e-6

    def test_exponent_below_one(self):
        with pytest.raises(UnsupportedExponent):
            lp_norm(GridFunction(np.ones(4)), 0.5)

    @given(polys(), st.floats(1, 8), st.floats(1, 8))
    @settings(max_examples=60, deadline=None)
    def test_monotone_in_p(self, f, p, q):
        g = synthesize(f, grid_size_for(f.degree(), 2))
        p, q = min(p, q), max(p, q)
        assert lp_norm(g, p) <= lp_norm(g, q) * (1 + 1e-12) + 1e-12

    @given(polys())
    @settings(max_examples=60, deadline=None)
    def test_parseval(self, f):
        g = synthesize(f, grid_size_for(f.degree(), 2))
        assert lp_norm(g, 2) ** 2 == pytest.approx(f.l2_norm() ** 2, rel=1e-12)


class TestNegativeEnergy:
    def test_positive(self):
        assert negative_energy_ratio(synthesize(monomial(3), 16)) == pytest.approx(0, abs=1e-15)

    def test_negative(self):
        assert negative_energy_ratio(synthesize(monomial(-3), 16)) == pytest.approx(1.0, abs=1e-15)

    def test_even_split(self):
        g = synthesize(TrigPoly(-1, [1, 0, 1]), 16)
        assert negative_energy_ratio(g) == pytest.approx(1 / math.sqrt(2), rel=1e-14)

    def test_zero(self):
        with pytest.raises(ZeroFunction):
            negative_energy_ratio(GridFunction(np.zeros(8)))

    @given(polys(analytic=True))
    @settings(max_examples=40, deadline=None)
    def test_analytic_has_none(self, f):
        g = synthesize(f, grid_size_for(f.degree(), 2))
        # the ifft/fft round trip leaves roundoff in the negative bins
        assert negative_energy_ratio(g) <= 1e-14


class TestPointwise:
    def test_add_neg(self):
        g = synthesize(TrigPoly(0, [1, 2j, 3]), 16)
        assert not np.any(pointwise(g, -g, "add").samples)

    def test_mul_one(self):
        g = synthesize(TrigPoly(0, [1, 2j, 3]), 16)
        assert np.array_equal(pointwise(GridFunction(np.ones(16)), g, "mul").samples, g.samples)

    def test_abs(self):
        assert np.allclose(pointwise(synthesize(monomial(1), 8), None, "abs").samples, 1.0)

    def test_scale(self):
        g = GridFunction(np.arange(4.0))
        assert np.array_equal(pointwise(g, None, "scale", 2).samples, 2 * np.arange(4.0))

    def test_mismatch(self):
        with pytest.raises(GridMismatch):
            pointwise(GridFunction(np.ones(4)), GridFunction(np.ones(8)), "add")

    def test_grid_validation(self):
        with pytest.raises(InvalidInput):
            GridFunction(np.ones(6))
        with pytest.raises(InvalidInput):
            GridFunction([1.0, np.nan])

    def test_immutable(self):
        g = GridFunction(np.ones(4))
        with pytest.raises(ValueError):
            g.samples[0] = 2.0


class TestCoefficientFile:
    def test_round_trip(self, tmp_path):
        f = TrigPoly(-2, [1, 0.5j, 0, 3 - 1j])
        path = tmp_path / "f.txt"
        write_coefficients(f, path)
        assert read_coefficients(path) == f

    def test_comments_and_duplicates(self, tmp_path):
        path = tmp_path / "f.txt"
        path.write_text("# header\n3,1,0\n\n0, 2.5, -1  # inline\n3,0.5,0\n")
        f = read_coefficients(path)
        assert f.coefficient(3) == 1.5
        assert f.coefficient(0) == 2.5 - 1j

    def test_bad_line(self, tmp_path):
        path = tmp_path / "f.txt"
        path.write_text("0,1,0\n1,2\n")
        with pytest.raises(InvalidInput, match=":2:"):
            read_coefficients(path)
