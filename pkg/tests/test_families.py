import numpy as np
import pytest

from hardyano.errors import ParameterError
from hardyano.families import (
    FamilySpec,
    beta,
    beta_center,
    build_family,
    decomposition_corpus,
    dirichlet_analytic,
    fejer,
    geometric,
    parse_family,
    random_analytic,
    random_lambda,
    vallee_poussin,
)
from hardyano.multipliers import lambda_set
from hardyano.spectral import TrigPoly, grid_size_for, lp_norm, negative_energy_ratio, synthesize


class TestFejer:
    def test_order_zero(self):
        assert fejer(0) == TrigPoly(0, [1.0])

    def test_order_two(self):
        assert np.allclose(fejer(2).coeffs, [1 / 3, 2 / 3, 1, 2 / 3, 1 / 3])
        assert fejer(2).n_min == -2

    @pytest.mark.parametrize("n", [1, 5, 20])
    def test_unit_l1(self, n):
        g = synthesize(fejer(n), grid_size_for(n, 32))
        assert np.all(g.samples.real >= -1e-12)
        assert abs(lp_norm(g, 1) - 1) <= 1e-8

    def test_negative_order(self):
        with pytest.raises(ParameterError):
            fejer(-1)


class TestValleePoussin:
    def test_first_coefficients(self):
        v = vallee_poussin(1)
        assert v.coefficient(0) == pytest.approx(1.0, abs=1e-15)
        assert v.coefficient(1) == pytest.approx(2 * (1 - 1 / 4) - (1 - 1 / 2), abs=1e-15)

    @pytest.mark.parametrize("n", [1, 10, 100])
    def test_l1_at_most_three(self, n):
        g = synthesize(vallee_poussin(n), grid_size_for(2 * n + 1, 16))
        assert lp_norm(g, 1) <= 3

    @pytest.mark.parametrize("n", [1, 4, 27])
    def test_plateau(self, n):
        v = vallee_poussin(n)
        for j in range(-n, n + 1):
            assert v.coefficient(j) == pytest.approx(1.0, abs=1e-14)
        assert v.degree() == 2 * n + 1
        assert v.coefficient(2 * n + 2) == 0


class TestBeta:
    def test_first_member(self):
        b = beta(1)
        assert b.n_min >= 0 and b.n_max <= 14
        assert beta_center(1) == 7
        assert b.coefficient(7) == pytest.approx(1.0)
        assert b.coefficient(8) == pytest.approx(1.0)

    @pytest.mark.parametrize("N", range(1, 10))
    def test_analytic_and_plateau(self, N):
        b = beta(N)
        assert b.is_analytic()
        assert (b.n_min, b.n_max) == (0, 4 * 3**N + 2)
        for m in range(N + 1):
            assert b.coefficient(3 ** (N + 1) - 3**m) == pytest.approx(1.0, abs=1e-12)
        assert b.coefficient(3**N + 1) == pytest.approx(1.0, abs=1e-12)
        assert b.coefficient(3 ** (N + 1) + 1) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("N", range(1, 6))
    def test_no_negative_energy(self, N):
        b = beta(N)
        assert negative_energy_ratio(synthesize(b, grid_size_for(b.degree()))) <= 1e-14

    def test_lacunary_lower_bound_by_counting(self):
        for N in range(1, 9):
            hits = [lam for lam in lambda_set(4 * 3**N + 2) if 3**N + 1 <= lam <= 3 ** (N + 1) + 1]
            # every 3^(N+1) - 3^m lies on the plateau, so the count is at least N + 1
            assert len(hits) >= N + 1

    @pytest.mark.parametrize("N", [0, 10])
    def test_range(self, N):
        with pytest.raises(ParameterError):
            beta(N)


class TestSimpleFamilies:
    def test_dirichlet(self):
        assert dirichlet_analytic(0) == TrigPoly(0, [1])
        assert dirichlet_analytic(2) == TrigPoly(0, [1, 1, 1])
        f = dirichlet_analytic(300)
        assert abs(lp_norm(synthesize(f, grid_size_for(300)), 2) - np.sqrt(301)) <= 1e-10

    def test_geometric(self):
        rho = 0.7
        f = geometric(rho, 40)
        assert f.coefficient(0) == 1
        expected = (1 - rho ** (2 * 41)) / (1 - rho**2)
        assert abs(lp_norm(synthesize(f, grid_size_for(40)), 2) ** 2 - expected) <= 1e-10
        assert geometric(rho, 1) == TrigPoly(0, [1, rho])
        assert rho ** geometric(rho).degree() < 1e-12

    def test_geometric_range(self):
        with pytest.raises(ParameterError):
            geometric(1.0)
        with pytest.raises(ParameterError):
            geometric(0.5, 0)


class TestRandomLambda:
    def test_single(self):
        f = random_lambda(1, 100, 3)
        assert len(f.support()) == 1 and int(f.support()[0]) in lambda_set(100)
        assert f.l2_norm() == pytest.approx(1.0)

    def test_deterministic(self):
        assert random_lambda(8, 3**7, 42) == random_lambda(8, 3**7, 42)
        assert random_lambda(8, 3**7, 42) != random_lambda(8, 3**7, 43)

    def test_support(self):
        f = random_lambda(20, 3**7, 0)
        assert set(f.support().tolist()) <= set(lambda_set(3**7))
        assert len(f.support()) == 20

    def test_too_many(self):
        with pytest.raises(ParameterError):
            random_lambda(len(lambda_set(100)) + 1, 100, 0)


class TestSpecs:
    def test_parse_and_build(self):
        spec = parse_family("geometric:rho=0.9,deg=50")
        assert spec.kind == "geometric" and spec.params == {"rho": 0.9, "deg": 50}
        assert build_family(spec) == geometric(0.9, 50)
        assert str(spec) == "geometric:rho=0.9,deg=50"

    def test_round_trip(self):
        spec = FamilySpec("random_lambda", {"count": 5, "max_freq": 729}, seed=7)
        again = FamilySpec.from_dict(spec.to_dict())
        assert again == spec
        assert build_family(again) == build_family(spec)

    def test_errors(self):
        with pytest.raises(ParameterError):
            parse_family("nope")
        with pytest.raises(ParameterError):
            parse_family("beta:N=1.5")
        with pytest.raises(ParameterError):
            parse_family("beta:N")
        with pytest.raises(ParameterError):
            build_family(FamilySpec("beta", {"rho": 1}))
        with pytest.raises(ParameterError):
            build_family(FamilySpec("beta", {}))

    def test_random_analytic_sup(self):
        f = random_analytic(64, 1, sup=5.0)
        assert synthesize(f, grid_size_for(64)).sup() == pytest.approx(5.0)


def test_corpus_shape():
    corpus = decomposition_corpus()
    assert len(corpus) >= 50
    sups = []
    for _, f in corpus:
        assert f.is_analytic() and f.degree() <= 512
        sups.append(synthesize(f, grid_size_for(f.degree())).sup())
    assert min(sups) <= 0.1 + 1e-12 and max(sups) >= 1e3 - 1e-9
