import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwframes import (
    FourierBandGrid,
    band_interior_pw,
    build_fourier_model,
    evaluate,
    exponential_frame_bounds,
    jittered_sample_points,
    parseval_check,
    random_pw,
    regular_samples,
    shannon_reconstruct,
)


def box_sinc(a):
    """Closed-form function whose transform is the box |t| <= a/2."""
    return lambda x: np.sinc(a * np.asarray(x, dtype=float))


class TestGrid:
    def test_trapezoid_two_nodes(self):
        g = FourierBandGrid(0.5, 2, "trapezoid")
        assert np.allclose(g.nodes, [-0.5, 0.5])
        assert np.allclose(g.weights, [0.5, 0.5])

    def test_zero_frequency_node(self):
        m = build_fourier_model(0.5, 5, rule="trapezoid")
        assert m.params[2, 0] == 0.0 and m.eigenvalues[2] == 0.0

    @pytest.mark.parametrize("rule", ["midpoint", "trapezoid"])
    @pytest.mark.parametrize("K", [2, 3, 10, 257])
    def test_weights_sum_and_order(self, rule, K):
        g = FourierBandGrid(0.5, K, rule)
        assert abs(g.weights.sum() - 1.0) <= 1e-12
        t = g.nodes
        assert np.all(np.diff(t) > 0) and t[0] >= -0.5 and t[-1] <= 0.5

    def test_eigenvalues(self):
        m = build_fourier_model(1.5, 7)
        assert np.allclose(m.eigenvalues, (2 * np.pi * m.params[:, 0]) ** 2)

    def test_k_too_small(self):
        with pytest.raises(ValueError):
            build_fourier_model(1.0, 1)

    def test_exponential_kernel(self):
        m = build_fourier_model(0.5, 4, kernel="exponential")
        x = np.array([0.3, -1.2])
        assert np.allclose(m.kernel_matrix(x), np.exp(2j * np.pi * np.outer(x, m.params[:, 0])))

    def test_cell_kernel_is_cell_average(self):
        # oracle: numerical average of exp(2 pi i t x) over each cell
        m = build_fourier_model(0.5, 6)
        g = FourierBandGrid(0.5, 6)
        x = 1.7
        avg = []
        for a, b in g.cells:
            t = np.linspace(a, b, 4001)
            avg.append(np.trapezoid(np.exp(2j * np.pi * t * x), t) / (b - a))
        assert np.allclose(m.kernel_matrix(x)[0], avg, atol=1e-7)


class TestShannon:
    def test_center(self):
        assert shannon_reconstruct({0: 1}, 0.5, 0.0, 10) == 1

    def test_other_sample_point(self):
        assert abs(shannon_reconstruct({0: 1}, 0.5, 1.0, 10)) <= 1e-16

    def test_kernel_value(self):
        assert shannon_reconstruct({0: 1}, 0.5, 0.5, 10) == pytest.approx(2 / np.pi, abs=1e-15)

    def test_missing_indices_are_zero(self):
        assert shannon_reconstruct({}, 0.5, 0.3, 5) == 0

    def test_interpolates_at_sample_points(self, line_model):
        f = random_pw(line_model, 0)
        s = regular_samples(f, 40)
        xs = np.arange(-40, 41) / 2.0
        assert np.allclose(shannon_reconstruct(s, 1.0, xs, 40), [s[j] for j in range(-40, 41)], atol=1e-13)

    def test_partial_sums_converge(self):
        f = box_sinc(0.6)
        x = np.random.default_rng(0).uniform(-50, 50, 100)
        errs = []
        for J in (250, 500, 1000, 2000):
            s = {j: f(j) for j in range(-J, J + 1)}
            errs.append(np.max(np.abs(shannon_reconstruct(s, 0.5, x, J) - f(x))))
        assert all(b < a for a, b in zip(errs, errs[1:]))

    def test_model_function(self):
        m = build_fourier_model(0.5, 65)
        f = band_interior_pw(m, 1)
        x = np.linspace(-30, 30, 50)
        approx = shannon_reconstruct(regular_samples(f, 1000), 0.5, x, 1000)
        assert np.max(np.abs(approx - evaluate(f, x))) <= 1e-4


class TestParseval:
    def test_non_decaying_flagged(self):
        m = build_fourier_model(0.5, 3, rule="trapezoid", kernel="exponential")
        r = parseval_check(m.basis(1), 200)
        assert not r.decaying and np.isnan(r.ratio)

    def test_richardson_oracle(self):
        # truncation error is O(1/J): extrapolation 2 r(2J) - r(J) lands closer to 1
        m = build_fourier_model(0.5, 257)
        f = band_interior_pw(m, 0)
        r1, r2 = parseval_check(f, 1000).ratio, parseval_check(f, 2000).ratio
        extrap = 2 * r2 - r1
        assert abs(extrap - 1) < abs(r2 - 1) / 10
        assert 0.99 <= r2 <= 1.01

    def test_homogeneity(self, line_model):
        f = band_interior_pw(line_model, 2)
        a, b = parseval_check(f, 500), parseval_check(3 * f, 500)
        assert b.continuous == pytest.approx(3 * a.continuous, rel=1e-12)
        assert b.discrete == pytest.approx(3 * a.discrete, rel=1e-12)
        assert abs(a.ratio - b.ratio) <= 1e-12

    def test_zero(self, line_model):
        with pytest.raises(ValueError):
            parseval_check(line_model.zeros(), 10)

    def test_band_interior_taper(self):
        m = build_fourier_model(0.5, 64)
        f = band_interior_pw(m, 3)
        t = np.abs(m.params[:, 0])
        assert np.all(f.coefficients[t >= 0.375] == 0)
        assert f.norm() == pytest.approx(1.0, abs=1e-14)


class TestJitter:
    def test_no_jitter(self):
        pts = jittered_sample_points(0.5, 10, 0.0, 1).points
        assert np.array_equal(pts, np.arange(-10, 11, dtype=float))

    def test_deterministic(self):
        a = jittered_sample_points(0.5, 10, 0.2, 4).points
        b = jittered_sample_points(0.5, 10, 0.2, 4).points
        assert np.array_equal(a, b)

    @given(st.integers(0, 10_000), st.floats(0, 0.2499))
    @settings(max_examples=30, deadline=None)
    def test_bound_and_order(self, seed, delta):
        pts = jittered_sample_points(0.5, 30, delta, seed).points
        assert np.all(np.abs(pts - np.arange(-30, 31)) <= delta + 1e-15)
        assert np.all(np.diff(pts) > 0)

    def test_warning_at_quarter(self):
        with pytest.warns(UserWarning, match="jitter"):
            r = jittered_sample_points(0.5, 5, 0.3, 0)
        assert r.warning is not None

    @pytest.mark.parametrize("delta", [0.0, 0.1, 0.2])
    def test_exponential_frame(self, delta):
        m = build_fourier_model(0.5, 16, kernel="exponential")
        # one period of the discretized exponentials is 1/dt = 16
        pts = jittered_sample_points(0.5, 8, delta, 11).points[:-1]
        A, B = exponential_frame_bounds(m, pts)
        assert A > 0.1 * B
        if delta == 0.0:
            # regular points over one period diagonalize the grid: tight frame
            assert A == pytest.approx(B, rel=1e-12)
