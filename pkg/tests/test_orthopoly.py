import math
import warnings

import numpy as np
import pytest

from matquad import oracle, orthopoly
from matquad.errors import DegenerateWeightError, NotPSDError
from matquad.matpoly import MatrixPolynomial
from matquad.orthopoly import (
    Recurrence,
    WeightSpec,
    christoffel_darboux_residual,
    eval_orthonormal,
    inner_product,
    kernel,
    moment,
    normalize,
    stieltjes_recurrence,
)

from conftest import SQ2, random_weight


class TestWeightSpec:
    def test_rejects_indefinite_coefficient(self):
        with pytest.raises(NotPSDError):
            WeightSpec((-1, 1), ((np.diag([1.0, -1.0]), "legendre"),))

    def test_rejects_bad_interval_and_base(self):
        with pytest.raises(ValueError):
            WeightSpec((1, -1), ((np.eye(1), "legendre"),))
        with pytest.raises(ValueError):
            WeightSpec((-1, math.inf), ((np.eye(1), "legendre"),))
        with pytest.raises(ValueError):
            WeightSpec((-1, 1), ((np.eye(1), "hermite"),))

    def test_evaluate_mixed_chebyshev_weight(self, example_w):
        x = 0.3
        expected = np.diag([1 / (math.pi * math.sqrt(1 - x * x)), 2 * math.sqrt(1 - x * x) / math.pi])
        assert np.allclose(example_w(x), expected)
        assert example_w.is_nondegenerate()

    def test_degenerate_weight_detected(self):
        w = WeightSpec((-1, 1), ((np.diag([1.0, 0.0]), "legendre"),))
        assert not w.is_nondegenerate()
        with pytest.raises(DegenerateWeightError):
            normalize(w)

    def test_dict_roundtrip(self):
        w = WeightSpec((0.0, 2.0), ((np.eye(2), {"jacobi": [0.5, 1.5]}), (np.ones((2, 2)), "chebyshev2")))
        doc = w.to_dict()
        assert set(doc) >= {"interval", "terms"}
        assert set(doc["terms"][0]) == {"C", "base"}
        assert doc["terms"][0]["base"] == {"jacobi": [0.5, 1.5]}
        w2 = WeightSpec.from_dict(doc)
        assert np.allclose(w2(0.7), w(0.7))

    def test_builtin_lookup(self):
        assert orthopoly.builtin_weight("paper-chebyshev-mixed").p == 2
        with pytest.raises(KeyError):
            orthopoly.builtin_weight("nope")


class TestMoments:
    def test_mixed_chebyshev_weight_moments(self, example_w):
        assert np.allclose(moment(example_w, 0), np.eye(2), atol=1e-15)
        assert np.allclose(moment(example_w, 2), np.diag([0.5, 0.25]), atol=1e-15)
        for k in (1, 3, 5, 7):
            assert np.abs(moment(example_w, k)).max() == 0.0

    def test_normalize_scaling(self, example_w):
        w2 = example_w.scaled(2.0)
        wn, S = normalize(w2)
        assert np.allclose(S, SQ2 * np.eye(2))
        assert np.allclose(moment(wn, 0), np.eye(2), atol=1e-14)

    def test_normalize_diagonal(self):
        w = WeightSpec((-1, 1), ((np.diag([4.0, 1.0]), "legendre"),))
        _, S = normalize(w)
        assert np.allclose(S, np.diag([2.0, 1.0]), atol=1e-15)

    def test_normalized_weight_is_identity_congruence(self, example_w):
        wn, S = normalize(example_w)
        assert wn is example_w
        assert np.array_equal(S, np.eye(2))

    def test_inner_product_examples(self, example_w, example_rec):
        I = MatrixPolynomial.identity(2)
        assert np.allclose(inner_product(I, I, example_w), np.eye(2))
        P0, P1 = example_rec.polynomials(1)
        assert np.abs(inner_product(P1, P0, example_w)).max() < 1e-15


class TestRecurrence:
    def test_example_coefficients(self, example_rec):
        assert np.allclose(example_rec.Dn(1), np.diag([1 / SQ2, 0.5]), atol=1e-14)
        for n in range(2, 13):
            assert np.allclose(example_rec.Dn(n), 0.5 * np.eye(2), atol=1e-13)
        for E in example_rec.E:
            assert np.abs(E).max() < 1e-14

    def test_example_family_closed_form(self, example_rec):
        # P_n = diag(sqrt2 T_n, U_n) on the whole range
        for x in np.linspace(-1, 1, 9):
            for n in range(1, 13):
                t = math.acos(x) if abs(x) < 1 else (0.0 if x > 0 else math.pi)
                Tn = math.cos(n * t)
                Un = (n + 1) * (1 if x > 0 else (-1) ** n) if abs(x) == 1 else math.sin((n + 1) * t) / math.sin(t)
                assert np.allclose(eval_orthonormal(example_rec, n, x), np.diag([SQ2 * Tn, Un]), atol=1e-11)

    def test_eval_examples(self, example_rec):
        assert np.allclose(eval_orthonormal(example_rec, 0, 0.37), np.eye(2))
        assert np.allclose(eval_orthonormal(example_rec, 3, 1.0), np.diag([SQ2, 4.0]))
        assert np.allclose(eval_orthonormal(example_rec, 2, 0.5), np.diag([-SQ2 / 2, 0.0]), atol=1e-15)
        with pytest.raises(IndexError):
            eval_orthonormal(example_rec, 13, 0.0)

    def test_scalar_chebyshev(self):
        rec = stieltjes_recurrence(orthopoly.builtin_weight("chebyshev1"), 8)
        assert rec.Dn(1)[0, 0] == pytest.approx(1 / SQ2, abs=1e-15)
        for n in range(2, 9):
            assert rec.Dn(n)[0, 0] == pytest.approx(0.5, abs=1e-14)

    def test_monomial_and_recurrence_evaluation_agree(self, example_rec):
        polys = example_rec.polynomials(6)
        for x in (-0.9, 0.2, 0.77):
            vals = example_rec.evaluate_all(6, x)
            for P, v in zip(polys, vals):
                assert np.allclose(P(x), v, atol=1e-12)

    def test_unnormalized_weight_records_normalizer(self):
        w = WeightSpec((-1, 1), ((np.array([[4.0, 1.0], [1.0, 2.0]]), "chebyshev2"),))
        rec = stieltjes_recurrence(w, 3)
        assert np.allclose(rec.normalizer @ rec.normalizer, moment(w, 0))
        # P_n(x) S^{-1} is orthonormal for the original weight
        Sinv = np.linalg.inv(rec.normalizer)
        P2 = rec.polynomial(2) @ Sinv
        assert np.allclose(inner_product(P2, P2, w), np.eye(2), atol=1e-12)

    def test_dict_roundtrip(self, example_rec):
        rec = Recurrence.from_dict(example_rec.to_dict())
        assert np.allclose(eval_orthonormal(rec, 5, 0.3), eval_orthonormal(example_rec, 5, 0.3))

    def test_large_degree_warns(self):
        w = orthopoly.builtin_weight("legendre")
        with pytest.warns(RuntimeWarning):
            stieltjes_recurrence(w, orthopoly.SUPPORTED_N + 1)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            stieltjes_recurrence(w, orthopoly.SUPPORTED_N)

    @pytest.mark.parametrize("seed", range(6))
    def test_orthonormality_by_moments(self, seed):
        rng = np.random.default_rng(seed)
        w = random_weight(rng, 2 + seed % 2, interval=(-1.0, 1.0))
        N = 8
        rec = stieltjes_recurrence(w, N)
        polys = rec.polynomials(N)
        for n in range(N + 1):
            for m in range(n + 1):
                G = inner_product(polys[n], polys[m], rec.weight)
                assert np.abs(G - (np.eye(w.p) if n == m else 0)).max() <= 1e-9
        Pn = polys[N] @ np.linalg.inv(rec.normalizer)
        assert np.abs(inner_product(Pn, Pn, w) - np.eye(w.p)).max() <= 1e-9
        for E, D in zip(rec.E, rec.D):
            assert np.allclose(E, E.T, atol=1e-12)
            assert np.allclose(D, D.T, atol=1e-12) and np.linalg.eigvalsh(D)[0] > 0

    @pytest.mark.parametrize("seed", range(4))
    def test_orthonormality_by_oracle(self, seed):
        # shifted intervals: the monomial form is too ill-conditioned to check
        # at 1e-9, so integrate the recurrence-evaluated family instead
        rng = np.random.default_rng(100 + seed)
        w = random_weight(rng, 2)
        N = 10
        rec = stieltjes_recurrence(w, N)
        Sinv = np.linalg.inv(rec.normalizer)

        def P(n):
            return lambda x: eval_orthonormal(rec, n, x) @ Sinv

        for m in (0, N - 1, N):
            G = oracle.integrate_weighted(P(N), P(m), w)
            assert np.abs(G - (np.eye(2) if m == N else 0)).max() <= 1e-9


class TestKernel:
    def test_examples(self, example_rec):
        assert np.allclose(kernel(example_rec, 0, 0.2, -0.9), np.eye(2))
        x = 1 / SQ2
        assert np.allclose(kernel(example_rec, 1, x, x), np.diag([2.0, 3.0]))

    def test_christoffel_darboux_point(self, example_rec):
        assert christoffel_darboux_residual(example_rec, 4, 0.3, -0.7) <= 1e-12

    def test_confluent_form(self, example_rec):
        n = 5
        polys = example_rec.polynomials(n + 1)
        D = example_rec.Dn(n + 1)
        for x in (-0.8, 0.1, 0.6):
            lhs = kernel(example_rec, n, x, x)
            rhs = (polys[n + 1].derivative()(x).T @ D @ polys[n](x)
                   - polys[n].derivative()(x).T @ D @ polys[n + 1](x))
            assert np.abs(lhs - rhs).max() <= 1e-10 * max(1, np.abs(lhs).max())

    def test_symmetric_cd_product(self):
        rng = np.random.default_rng(4)
        rec = stieltjes_recurrence(random_weight(rng, 3, decoupled=False), 6)
        for x in (-0.3, 0.5):
            Px = rec.evaluate_all(6, x)
            M = Px[5].T @ rec.Dn(6) @ Px[6]
            assert np.abs(M - M.T).max() <= 1e-10 * max(1, np.abs(M).max())
