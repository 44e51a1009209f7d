"""
Finite spectral representation shared by the geometric models.

A :class:`SpectralModel` is a finite set of nodes of the diagonalized
(positive) Laplacian.  Each node carries an eigenvalue, a positive Plancherel
quadrature weight and the parameters of its eigenfunction.  A
:class:`PWFunction` is a coefficient vector over those nodes; it plays the
role of the transform of a bandlimited function.

    <f, g>   = sum_m w_m f_m conj(g_m)
    f(x)     = sum_m w_m f_m e_m(x)
    m(D) f   = (m(lambda_m) f_m)_m
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

__all__ = [
    "BernsteinReport",
    "DomainError",
    "IncompatibleModelsError",
    "PWFunction",
    "SpectralModel",
    "SpectralNode",
    "apply_spectral_multiplier",
    "bernstein_verify",
    "evaluate",
    "inner_product",
    "kernel_transform",
    "random_pw",
]


class IncompatibleModelsError(ValueError):
    """Raised when two objects live on different spectral models."""


class DomainError(ValueError):
    """Raised when a point lies outside the model's domain."""


class SpectralNode(NamedTuple):
    id: int
    eigenvalue: float
    weight: float
    kernel_params: tuple


KernelFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class SpectralModel:
    """Finite discretization of the spectral decomposition of a Laplacian.

    Parameters
    ----------
    eigenvalues : array_like, shape (K,)
        Eigenvalue of the positive Laplacian at each node.
    weights : array_like, shape (K,)
        Plancherel quadrature weights, all strictly positive.
    params : array_like, shape (K, p)
        Eigenfunction parameters per node (``t`` in 1-D, ``(t, phi)`` on the
        half-plane).
    omega : float
        Bandlimit.
    point_kind : {"real", "upper_half"}
        Kind of points the kernel accepts.
    kernel : callable
        ``kernel(params, points) -> (P, K)`` complex matrix of eigenfunction
        values ``e_m(x_p)``.  Must be deterministic.
    band_bound : float
        Supremum of the eigenvalues allowed by the band (Bernstein constant).
    spectrum_floor : float
        Infimum of the continuous spectrum of the underlying Laplacian.
    name : str
        Short tag used in reports.
    """

    eigenvalues: np.ndarray
    weights: np.ndarray
    params: np.ndarray
    omega: float
    point_kind: str
    kernel: KernelFn = field(repr=False)
    band_bound: float = np.inf
    spectrum_floor: float = 0.0
    name: str = "model"
    meta: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        eig = np.asarray(self.eigenvalues, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        params = np.asarray(self.params, dtype=float)
        if params.ndim == 1:
            params = params[:, None]
        if not (eig.ndim == w.ndim == 1 and eig.shape == w.shape == params.shape[:1]):
            raise ValueError("eigenvalues, weights and params must have one entry per node")
        if eig.size == 0:
            raise ValueError("a spectral model needs at least one node")
        if np.any(~np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("all Plancherel weights must be finite and strictly positive")
        if np.any(eig < 0):
            raise ValueError("eigenvalues of the positive Laplacian must be nonnegative")
        if self.omega <= 0:
            raise ValueError("bandlimit omega must be positive")
        if self.point_kind not in ("real", "upper_half"):
            raise ValueError(f"unknown point kind {self.point_kind!r}")
        for name, arr in (("eigenvalues", eig), ("weights", w), ("params", params)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def size(self) -> int:
        return self.eigenvalues.shape[0]

    def __len__(self) -> int:
        return self.size

    @property
    def nodes(self) -> list[SpectralNode]:
        return [
            SpectralNode(m, float(lam), float(w), tuple(float(p) for p in par))
            for m, (lam, w, par) in enumerate(zip(self.eigenvalues, self.weights, self.params))
        ]

    @property
    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues.max())

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues.min())

    def check_points(self, x) -> np.ndarray:
        """Validate and convert points to the model's array representation."""
        if self.point_kind == "real":
            pts = np.asarray(x, dtype=float)
            if np.iscomplexobj(x):
                raise DomainError("real-line model expects real points")
        else:
            pts = _as_complex(x)
            if np.any(~(pts.imag > 0)):
                raise DomainError("points must lie in the upper half-plane (Im z > 0)")
        return pts

    def kernel_matrix(self, x) -> np.ndarray:
        """Eigenfunction values, shape ``(P, K)`` for ``P`` points."""
        pts = np.atleast_1d(self.check_points(x))
        return self.kernel(self.params, pts.ravel())

    def zeros(self) -> "PWFunction":
        return PWFunction(self, np.zeros(self.size, dtype=complex))

    def basis(self, m: int, value: complex = 1.0) -> "PWFunction":
        """Function supported on node ``m`` only."""
        c = np.zeros(self.size, dtype=complex)
        c[m] = value
        return PWFunction(self, c)


def _as_complex(x) -> np.ndarray:
    if hasattr(x, "x") and hasattr(x, "y") and not isinstance(x, np.ndarray):
        return np.asarray(complex(x.x, x.y))
    if isinstance(x, (list, tuple)) and x and hasattr(x[0], "y"):
        return np.asarray([complex(p.x, p.y) for p in x])
    return np.asarray(x, dtype=complex)


@dataclass(frozen=True, eq=False)
class PWFunction:
    """Bandlimited function represented by its transform values at the nodes."""

    model: SpectralModel
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex)
        if c.shape != (self.model.size,):
            raise ValueError(
                f"expected {self.model.size} coefficients, got shape {c.shape}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    def norm(self) -> float:
        return float(np.sqrt(inner_product(self, self).real))

    def __call__(self, x):
        return evaluate(self, x)

    def _check(self, other: "PWFunction"):
        if other.model is not self.model:
            raise IncompatibleModelsError("incompatible spectral models")

    def __add__(self, other: "PWFunction") -> "PWFunction":
        self._check(other)
        return PWFunction(self.model, self.coefficients + other.coefficients)

    def __sub__(self, other: "PWFunction") -> "PWFunction":
        self._check(other)
        return PWFunction(self.model, self.coefficients - other.coefficients)

    def __mul__(self, alpha: complex) -> "PWFunction":
        return PWFunction(self.model, alpha * self.coefficients)

    __rmul__ = __mul__

    def __truediv__(self, alpha: complex) -> "PWFunction":
        return PWFunction(self.model, self.coefficients / alpha)

    def __neg__(self) -> "PWFunction":
        return PWFunction(self.model, -self.coefficients)


def inner_product(f: PWFunction, g: PWFunction) -> complex:
    """Plancherel inner product ``sum_m w_m f_m conj(g_m)``."""
    if f.model is not g.model:
        raise IncompatibleModelsError("incompatible spectral models")
    w = f.model.weights
    if f is g or np.array_equal(f.coefficients, g.coefficients):
        # exactly real on the diagonal
        return complex(np.sum(w * (f.coefficients.real ** 2 + f.coefficients.imag ** 2)))
    return complex(np.sum(w * f.coefficients * np.conj(g.coefficients)))


def evaluate(f: PWFunction, x):
    """Synthesize ``f`` at one point or an array of points.

    This is the quadrature form of the inversion formula,
    ``sum_m w_m c_m e_m(x)``.  Scalar input returns a Python complex.
    """
    pts = f.model.check_points(x)
    values = f.model.kernel_matrix(pts) @ (f.model.weights * f.coefficients)
    if pts.ndim == 0:
        return complex(values[0])
    return values.reshape(pts.shape)


def kernel_transform(model: SpectralModel, points, masses) -> np.ndarray:
    """Apply the measure ``sum_k masses_k delta_{points_k}`` to every eigenfunction.

    Returns the length-``K`` vector ``(sum_k mu_k e_m(p_k))_m``.
    """
    masses = np.atleast_1d(np.asarray(masses, dtype=float))
    E = model.kernel_matrix(points)
    if E.shape[0] != masses.shape[0]:
        raise ValueError("one mass per support point is required")
    return masses @ E


def _multiplier_values(model: SpectralModel, m) -> np.ndarray:
    lam = model.eigenvalues
    with np.errstate(all="ignore"):
        try:
            vals = np.asarray(m(lam), dtype=float)
            vals = np.broadcast_to(vals, lam.shape).copy()
        except (TypeError, ValueError):
            vals = np.array([float(m(float(x))) for x in lam])
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        k = int(bad[0])
        raise ValueError(
            f"multiplier is not finite at node {k} (eigenvalue {lam[k]!r})"
        )
    return vals


def apply_spectral_multiplier(f: PWFunction, m) -> PWFunction:
    """Return ``m(Laplacian) f``; ``m`` maps eigenvalues to reals.

    ``m`` may be vectorized over a numpy array or a plain scalar function.
    """
    return PWFunction(f.model, _multiplier_values(f.model, m) * f.coefficients)


class BernsteinReport(NamedTuple):
    lhs: float
    rhs: float
    holds: bool
    sharp_rhs: float


def bernstein_verify(f: PWFunction, s: float, bound: float | None = None) -> BernsteinReport:
    """Compare ``||D^s f||`` with ``bound**s * ||f||``.

    ``bound`` defaults to the band constant of the model (``(2 pi omega)^2``
    on the line, ``omega^2 + 1/4`` on the half-plane).  ``sharp_rhs`` uses
    the largest node eigenvalue instead, which is attained by functions
    supported on an extreme node.
    """
    if s < 0:
        raise ValueError("Bernstein exponent must be nonnegative")
    norm = f.norm()
    if norm == 0:
        raise ValueError("empty function")
    B = f.model.band_bound if bound is None else float(bound)
    lhs = apply_spectral_multiplier(f, lambda lam: lam ** s).norm()
    rhs = B ** s * norm
    sharp = f.model.max_eigenvalue ** s * norm
    return BernsteinReport(lhs, rhs, bool(lhs <= rhs * (1 + 1e-12)), sharp)


def random_pw(model: SpectralModel, seed: int) -> PWFunction:
    """Random function with unit Plancherel norm.

    Coefficients are i.i.d. standard complex Gaussians (independent real and
    imaginary parts of variance 1/2) drawn from ``numpy.random.default_rng(seed)``.
    """
    rng = np.random.default_rng(seed)
    c = (rng.standard_normal(model.size) + 1j * rng.standard_normal(model.size)) / np.sqrt(2)
    f = PWFunction(model, c)
    return f / f.norm()
