import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from pwframes import (
    DomainError,
    IncompatibleModelsError,
    PWFunction,
    SpectralModel,
    apply_spectral_multiplier,
    bernstein_verify,
    build_fourier_model,
    build_helgason_model,
    evaluate,
    inner_product,
    random_pw,
)
from pwframes.hyperbolic import eigenfunction


def _one_node(weight=1.0, t=0.0):
    return SpectralModel(
        eigenvalues=[(2 * np.pi * t) ** 2],
        weights=[weight],
        params=[[t]],
        omega=1.0,
        point_kind="real",
        kernel=lambda p, x: np.exp(2j * np.pi * np.outer(x, p[:, 0])),
    )


class TestInnerProduct:
    def test_single_unit_node(self):
        m = _one_node()
        f = m.basis(0)
        assert inner_product(f, f) == 1

    def test_disjoint_supports(self, line_model):
        assert inner_product(line_model.basis(0, 2.0), line_model.basis(5, 1j)) == 0

    def test_matches_trapezoid_quadrature(self):
        # trapezoid model: weights are exactly the composite trapezoid weights
        m = build_fourier_model(0.5, 33, rule="trapezoid")
        f = random_pw(m, 7)
        t = m.params[:, 0]
        oracle = trapezoid(np.abs(f.coefficients) ** 2, t)
        assert abs(inner_product(f, f) - oracle) <= 1e-12

    def test_model_mismatch(self, line_model):
        other = build_fourier_model(1.0, 16)
        with pytest.raises(IncompatibleModelsError, match="incompatible spectral models"):
            inner_product(line_model.basis(0), other.basis(0))

    @given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_conjugate_symmetric(self, s1, s2):
        m = build_fourier_model(1.0, 12)
        f, g = random_pw(m, s1), random_pw(m, s2)
        assert abs(inner_product(f, g) - np.conj(inner_product(g, f))) <= 1e-14
        ff = inner_product(f, f)
        assert ff.imag == 0 and ff.real >= 0
        assert abs(ff.real - np.sum(m.weights * np.abs(f.coefficients) ** 2)) <= 1e-14


class TestEvaluate:
    def test_zero_function(self, line_model, hyp_model):
        assert np.all(evaluate(line_model.zeros(), np.linspace(-3, 3, 7)) == 0)
        assert evaluate(hyp_model.zeros(), 0.3 + 2j) == 0

    def test_constant_eigenfunction(self):
        m = _one_node(weight=0.37)
        f = m.basis(0)
        for x in (-2.5, 0.0, 11.0):
            assert evaluate(f, x) == pytest.approx(0.37, abs=1e-15)

    def test_hyperbolic_at_i(self, hyp_model):
        f = random_pw(hyp_model, 3)
        # independent path: kernel values computed node by node
        e = np.array([eigenfunction(t, phi, 1j) for t, phi in hyp_model.params])
        assert np.allclose(e, 1.0, atol=1e-15)
        expected = np.sum(hyp_model.weights * f.coefficients)
        assert abs(evaluate(f, 1j) - expected) <= 1e-14

    def test_domain_error(self, hyp_model):
        with pytest.raises(DomainError):
            evaluate(hyp_model.zeros(), 1.0 - 0.5j)
        with pytest.raises(DomainError):
            evaluate(hyp_model.zeros(), 2.0)

    @given(st.complex_numbers(max_magnitude=3), st.complex_numbers(max_magnitude=3),
           st.floats(-6, 6))
    @settings(max_examples=40, deadline=None)
    def test_linearity(self, a, b, x):
        m = build_fourier_model(1.0, 12)
        f, g = random_pw(m, 1), random_pw(m, 2)
        lhs = evaluate(a * f + b * g, x)
        rhs = a * evaluate(f, x) + b * evaluate(g, x)
        assert abs(lhs - rhs) <= 1e-12 * (1 + abs(a) + abs(b))


class TestMultiplier:
    def test_identity(self, hyp_model):
        f = random_pw(hyp_model, 0)
        g = apply_spectral_multiplier(f, lambda lam: np.ones_like(lam))
        assert np.array_equal(f.coefficients, g.coefficients)

    def test_inverse_pair(self, hyp_model):
        f = random_pw(hyp_model, 0)
        g = apply_spectral_multiplier(f, lambda lam: 1 / (1 + lam))
        h = apply_spectral_multiplier(g, lambda lam: 1 + lam)
        assert np.max(np.abs(h.coefficients - f.coefficients)) <= 1e-14

    def test_eigenvalue_quarter_at_t0(self):
        # a node at t = 0 carries eigenvalue t^2 + 1/4
        m = SpectralModel([0.25], [1.0], [[0.0, 0.0]], 1.0, "upper_half", lambda p, z: np.ones((len(z), 1)))
        f = apply_spectral_multiplier(m.basis(0, 2.0), lambda lam: lam)
        assert f.coefficients[0] == 0.5

    def test_non_finite_names_node(self, line_model):
        with pytest.raises(ValueError, match="node"):
            apply_spectral_multiplier(line_model.basis(0), lambda lam: 1 / (lam - line_model.eigenvalues[3]))

    def test_scalar_only_callable(self, line_model):
        f = random_pw(line_model, 1)
        g = apply_spectral_multiplier(f, lambda lam: math.sqrt(lam))
        assert np.allclose(g.coefficients, np.sqrt(line_model.eigenvalues) * f.coefficients)

    def test_composition(self, hyp_model):
        f = random_pw(hyp_model, 2)
        a = apply_spectral_multiplier(apply_spectral_multiplier(f, np.sqrt), lambda x: x ** 2)
        b = apply_spectral_multiplier(f, lambda x: x ** 2.5)
        assert np.allclose(a.coefficients, b.coefficients, rtol=1e-13)

    @pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
    def test_self_adjoint(self, hyp_model, s):
        for seed in range(10):
            f, g = random_pw(hyp_model, seed), random_pw(hyp_model, seed + 100)
            m = lambda lam: lam ** s
            lhs = inner_product(apply_spectral_multiplier(f, m), g)
            rhs = inner_product(f, apply_spectral_multiplier(g, m))
            assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


class TestBernstein:
    def test_s_zero(self, hyp_model):
        r = bernstein_verify(random_pw(hyp_model, 0), 0)
        assert r.lhs == pytest.approx(r.rhs, rel=1e-14) and r.holds

    def test_extreme_node_equality(self):
        # trapezoid nodes sit on the band edge, so the band constant is attained
        m = build_fourier_model(0.5, 9, rule="trapezoid")
        f = m.basis(m.size - 1, 1 + 1j)
        for s in (0.5, 1, 2):
            r = bernstein_verify(f, s)
            assert abs(r.lhs - r.rhs) <= 1e-12 * r.rhs

    def test_random_hyperbolic_strict(self, hyp_model):
        f = random_pw(hyp_model, 5)
        r = bernstein_verify(f, 2)
        # brute force over node eigenvalues
        brute = np.sqrt(np.sum(hyp_model.weights * hyp_model.eigenvalues ** 4 * np.abs(f.coefficients) ** 2))
        assert r.lhs == pytest.approx(brute, rel=1e-13)
        assert r.holds and r.lhs < r.rhs
        assert r.rhs == pytest.approx((4.0 ** 2 + 0.25) ** 2)

    def test_empty(self, line_model):
        with pytest.raises(ValueError, match="empty function"):
            bernstein_verify(line_model.zeros(), 1)


class TestRandomPW:
    def test_deterministic(self, hyp_model):
        assert np.array_equal(random_pw(hyp_model, 9).coefficients, random_pw(hyp_model, 9).coefficients)

    def test_unit_norm(self, hyp_model, line_model):
        for m in (hyp_model, line_model):
            assert abs(random_pw(m, 4).norm() - 1) <= 1e-14

    def test_seeds_differ(self, line_model):
        assert np.any(random_pw(line_model, 1).coefficients != random_pw(line_model, 2).coefficients)


class TestModelInvariants:
    def test_rejects_bad_weights(self):
        with pytest.raises(ValueError):
            SpectralModel([1.0], [0.0], [[0.0]], 1.0, "real", lambda p, x: x)

    def test_nodes_dense_ids(self, hyp_model):
        nodes = hyp_model.nodes
        assert [n.id for n in nodes] == list(range(hyp_model.size))
        assert all(n.weight > 0 and n.eigenvalue >= 0.25 for n in nodes)

    def test_immutable(self, line_model):
        f = random_pw(line_model, 0)
        with pytest.raises(ValueError):
            f.coefficients[0] = 0
        with pytest.raises(ValueError):
            line_model.weights[0] = 1

    def test_shape_check(self, line_model):
        with pytest.raises(ValueError):
            PWFunction(line_model, np.zeros(3))

    def test_kernel_deterministic(self, hyp_model):
        z = np.array([0.1 + 1j, -2 + 0.3j])
        assert np.array_equal(hyp_model.kernel_matrix(z), hyp_model.kernel_matrix(z))

    def test_band_predicate(self):
        m = build_helgason_model(2.0, 8, 8)
        assert m.size == 64
        assert np.all(np.abs(m.params[:, 0]) <= 2.0)
        assert np.all(m.eigenvalues <= 2.0 ** 2 + 0.25)
