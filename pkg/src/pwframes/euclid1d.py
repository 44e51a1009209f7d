"""
Paley-Wiener functions on the real line.

The band ``[-omega, omega]`` is split into ``K`` cells, one node per cell.
Two kernels are available:

``"cell"`` (default)
    ``e_m(x) = (1/w_m) * integral over cell m of exp(2 pi i t x) dt``.  A
    coefficient vector is then the piecewise-constant transform of an honest
    element of PW_omega(R): the Plancherel sum is the exact L2(R) norm and the
    function decays like 1/|x|.
``"exponential"``
    ``e_m(x) = exp(2 pi i t_m x)``, the point-quadrature kernel.  Functions are
    trigonometric polynomials, periodic with period ``1/dt`` (``K`` cells of
    equal width), so infinite sample sums over the line diverge.

Eigenvalues are those of ``-d^2/dx^2``: ``(2 pi t_m)^2``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np

from .spectral import PWFunction, SpectralModel, evaluate, random_pw

__all__ = [
    "FourierBandGrid",
    "JitteredPoints",
    "ParsevalReport",
    "band_interior_pw",
    "build_fourier_model",
    "exponential_frame_bounds",
    "jittered_sample_points",
    "parseval_check",
    "regular_samples",
    "shannon_reconstruct",
]


@dataclass(frozen=True)
class FourierBandGrid:
    """Nodes, weights and cells of a quadrature rule on ``[-omega, omega]``."""

    omega: float
    K: int
    rule: str = "midpoint"

    def __post_init__(self):
        if self.K < 2:
            raise ValueError("a Fourier band grid needs K >= 2 nodes")
        if self.omega <= 0:
            raise ValueError("bandlimit omega must be positive")
        if self.rule not in ("midpoint", "trapezoid"):
            raise ValueError(f"unknown quadrature rule {self.rule!r}")

    @property
    def nodes(self) -> np.ndarray:
        om, K = self.omega, self.K
        if self.rule == "midpoint":
            dt = 2 * om / K
            return -om + dt * (np.arange(K) + 0.5)
        return np.linspace(-om, om, K)

    @property
    def cells(self) -> np.ndarray:
        """Cell edges, shape ``(K, 2)``; widths equal the weights."""
        t = self.nodes
        if self.rule == "midpoint":
            h = self.omega / self.K
            return np.stack([t - h, t + h], axis=1)
        h = self.omega / (self.K - 1)
        return np.clip(np.stack([t - h, t + h], axis=1), -self.omega, self.omega)

    @property
    def weights(self) -> np.ndarray:
        a, b = self.cells.T
        return b - a


def _cell_kernel(centers, widths):
    def kernel(params, x):
        # np.sinc(u) = sin(pi u)/(pi u)
        return np.exp(2j * np.pi * np.outer(x, centers)) * np.sinc(np.outer(x, widths))

    return kernel


def _exp_kernel(params, x):
    return np.exp(2j * np.pi * np.outer(x, params[:, 0]))


def build_fourier_model(
    omega: float, K: int, rule: str = "midpoint", kernel: str = "cell"
) -> SpectralModel:
    """Spectral model of PW_omega(R) with ``K`` band nodes.

    Parameters
    ----------
    omega : float
        Bandlimit; the transform lives on ``[-omega, omega]``.
    K : int
        Number of nodes, at least 2.
    rule : {"midpoint", "trapezoid"}
        Placement of the nodes and weights.
    kernel : {"cell", "exponential"}
        See the module docstring.
    """
    grid = FourierBandGrid(float(omega), int(K), rule)
    t = grid.nodes
    cells = grid.cells
    w = grid.weights
    if kernel == "cell":
        kern = _cell_kernel(cells.mean(axis=1), w)
    elif kernel == "exponential":
        kern = _exp_kernel
    else:
        raise ValueError(f"unknown kernel {kernel!r}")
    return SpectralModel(
        eigenvalues=(2 * np.pi * t) ** 2,
        weights=w,
        params=t[:, None],
        omega=float(omega),
        point_kind="real",
        kernel=kern,
        band_bound=(2 * np.pi * omega) ** 2,
        spectrum_floor=0.0,
        name="euclid1d",
        meta={"K": int(K), "rule": rule, "kernel": kernel},
    )


def band_interior_pw(model: SpectralModel, seed: int, margin: float = 0.25) -> PWFunction:
    """Random unit-norm function whose transform vanishes near the band edges.

    The complex Gaussian coefficients of :func:`random_pw` are multiplied by a
    cosine taper equal to 1 on ``|t| <= (1 - 2*margin) omega`` and to 0 on
    ``|t| >= (1 - margin) omega``.
    """
    if not 0 < margin < 0.5:
        raise ValueError("margin must lie in (0, 1/2)")
    t = np.abs(model.params[:, 0]) / model.omega
    inner, outer = 1 - 2 * margin, 1 - margin
    u = np.clip((t - inner) / (outer - inner), 0.0, 1.0)
    taper = np.where(u < 1.0, np.cos(0.5 * np.pi * u) ** 2, 0.0)
    if not np.any(taper > 0):
        raise ValueError("grid too coarse: no node inside the band interior")
    f = random_pw(model, seed)
    g = PWFunction(model, f.coefficients * taper)
    return g / g.norm()


def regular_samples(f: PWFunction, J: int) -> dict[int, complex]:
    """Samples ``f(j / 2 omega)`` for ``|j| <= J``."""
    j = np.arange(-J, J + 1)
    vals = evaluate(f, j / (2 * f.model.omega))
    return dict(zip(j.tolist(), vals.tolist()))


def shannon_reconstruct(samples: Mapping[int, complex], omega: float, x, J: int):
    """Truncated cardinal series ``sum_{|j|<=J} f(j/2w) sinc(2w x - j)``.

    Indices missing from ``samples`` count as zero samples.  ``x`` may be a
    scalar or an array.
    """
    j = np.arange(-J, J + 1)
    v = np.array([samples.get(int(k), 0.0) for k in j], dtype=complex)
    xs = np.asarray(x, dtype=float)
    # np.sinc is exactly 1 at the removable singularity x = j / 2w
    out = np.sinc(2 * omega * xs.reshape(-1, 1) - j) @ v
    if xs.ndim == 0:
        return complex(out[0])
    return out.reshape(xs.shape)


class ParsevalReport(NamedTuple):
    continuous: float
    discrete: float
    ratio: float
    decaying: bool


def parseval_check(f: PWFunction, J: int = 2000) -> ParsevalReport:
    """Compare the Plancherel norm with the normalized l2 norm of regular samples.

    The sample energy over ``J/2 < |j| <= J`` is compared with the energy over
    ``|j| <= J/2``; if it exceeds 25% the samples are flagged as non-decaying
    (e.g. a trigonometric polynomial from the exponential kernel) and
    ``ratio`` is NaN.
    """
    continuous = f.norm()
    if continuous == 0:
        raise ValueError("empty function")
    om = f.model.omega
    j = np.arange(-J, J + 1)
    vals = evaluate(f, j / (2 * om))
    energy = np.abs(vals) ** 2 / (2 * om)
    inner = energy[np.abs(j) <= J // 2].sum()
    outer = energy.sum() - inner
    discrete = float(np.sqrt(energy.sum()))
    decaying = bool(outer <= 0.25 * inner)
    ratio = discrete / continuous if decaying else math.nan
    return ParsevalReport(continuous, discrete, ratio, decaying)


class JitteredPoints(NamedTuple):
    points: np.ndarray
    warning: str | None


def jittered_sample_points(omega: float, J: int, delta: float, seed: int) -> JitteredPoints:
    """Perturbed Nyquist points ``j/2w + u_j delta/2w``, ``u_j ~ U[-1, 1]``.

    ``delta >= 1/4`` is allowed for experiments but recorded in ``warning``
    (and issued as a :class:`UserWarning`).
    """
    if delta < 0:
        raise ValueError("jitter fraction must be nonnegative")
    rng = np.random.default_rng(seed)
    j = np.arange(-J, J + 1)
    u = rng.uniform(-1.0, 1.0, j.size)
    x = (j + u * delta) / (2 * omega)
    msg = None
    if delta >= 0.25:
        msg = f"jitter fraction {delta} >= 1/4: no exponential-frame guarantee"
        warnings.warn(msg, stacklevel=2)
    return JitteredPoints(x, msg)


def exponential_frame_bounds(model: SpectralModel, points) -> tuple[float, float]:
    """Frame bounds of point evaluations ``{f -> f(x_j)}`` on the model.

    Returns ``(A, B)`` with ``A ||f||^2 <= sum_j |f(x_j)|^2 <= B ||f||^2``,
    computed from the singular values of the weighted kernel matrix.
    """
    E = model.kernel_matrix(points) * np.sqrt(model.weights)
    s = np.linalg.svd(E, compute_uv=False)
    A = float(s[-1] ** 2) if E.shape[0] >= E.shape[1] else 0.0
    return A, float(s[0] ** 2)
