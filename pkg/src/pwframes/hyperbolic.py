"""
Poincare upper half-plane: geometry and a discretized Helgason transform.

Points are complex numbers ``z = x + iy`` with ``y > 0`` (an
:class:`UpperHalfPoint` is accepted wherever a point is).  The metric is
``y^-2 (dx^2 + dy^2)`` and the invariant measure ``y^-2 dx dy``.

Eigenfunctions of the Laplacian are the horocyclic waves
``Im(k_phi z)^(1/2 + it)`` with eigenvalue ``t^2 + 1/4`` of the positive
Laplacian ``-y^2 (d_xx + d_yy)``.  ``k_phi`` is the rotation matrix
``[[cos phi, -sin phi], [sin phi, cos phi]]`` acting by Moebius
transformation.  Because ``k_phi`` and ``k_(phi + pi)`` induce the same map,
the spectral grid uses rotation angles in ``(0, pi]``; each rotation angle
accounts for a boundary angle ``2 phi`` in ``(0, 2 pi]``, so the angular
weight is ``2 pi / K_phi``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .spectral import DomainError, PWFunction, SpectralModel, apply_spectral_multiplier, evaluate, kernel_transform

__all__ = [
    "LaplacianCheck",
    "UpperHalfPoint",
    "build_helgason_model",
    "eigenfunction",
    "functional_transform",
    "geodesic_distance",
    "geodesic_polar_point",
    "laplacian_pointwise_check",
    "mobius",
    "plancherel_density",
    "rotated_imaginary_part",
]


class UpperHalfPoint(NamedTuple):
    x: float
    y: float

    def __complex__(self):
        return complex(self.x, self.y)


def _z(z) -> np.ndarray:
    if isinstance(z, UpperHalfPoint):
        z = complex(z)
    elif isinstance(z, (list, tuple)) and z and isinstance(z[0], UpperHalfPoint):
        z = [complex(p) for p in z]
    arr = np.asarray(z, dtype=complex)
    if np.any(~(arr.imag > 0)):
        raise DomainError("points must lie in the upper half-plane (Im z > 0)")
    return arr


def mobius(matrix, z):
    """Fractional linear action ``(a z + b) / (c z + d)``."""
    (a, b), (c, d) = np.asarray(matrix, dtype=float)
    z = np.asarray(z, dtype=complex)
    return (a * z + b) / (c * z + d)


def rotated_imaginary_part(phi, z):
    """``Im(k_phi . z)`` in closed form, ``y / ((x sin phi + cos phi)^2 + (y sin phi)^2)``."""
    z = _z(z)
    s, c = np.sin(phi), np.cos(phi)
    return z.imag / ((z.real * s + c) ** 2 + (z.imag * s) ** 2)


def eigenfunction(t, phi, z):
    """Horocyclic wave ``Im(k_phi z)^(it + 1/2)``; its modulus is ``sqrt(Im(k_phi z))``."""
    return np.exp((1j * np.asarray(t) + 0.5) * np.log(rotated_imaginary_part(phi, z)))


def geodesic_distance(z, w):
    """Hyperbolic distance ``arccosh(1 + |z - w|^2 / (2 Im z Im w))``."""
    z, w = _z(z), _z(w)
    arg = 1.0 + np.abs(z - w) ** 2 / (2.0 * z.imag * w.imag)
    return np.arccosh(np.maximum(arg, 1.0))


def geodesic_polar_point(center, r, theta):
    """Point at distance ``r`` from ``center`` in direction ``theta``.

    Built as ``x0 + y0 * k_theta(i e^r)``; both maps are isometries and the
    rotation fixes ``i``.
    """
    c = _z(center)
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    w = 1j * np.exp(r)
    cs, sn = np.cos(theta), np.sin(theta)
    rotated = (cs * w - sn) / (sn * w + cs)
    return c.real + c.imag * rotated


def plancherel_density(t):
    """Helgason Plancherel density ``t tanh(pi t) / (8 pi^2)``."""
    t = np.asarray(t, dtype=float)
    return t * np.tanh(np.pi * t) / (8 * np.pi ** 2)


def _helgason_kernel(params, z):
    t, phi = params[:, 0], params[:, 1]
    s, c = np.sin(phi), np.cos(phi)
    x = z.real[:, None]
    y = z.imag[:, None]
    im = y / ((x * s + c) ** 2 + (y * s) ** 2)
    return np.exp((1j * t + 0.5) * np.log(im))


def build_helgason_model(omega: float, K_t: int, K_phi: int, rule: str = "midpoint") -> SpectralModel:
    """Discretized Helgason band ``|t| <= omega`` with ``K_t * K_phi`` nodes.

    Parameters
    ----------
    omega : float
        Bandlimit.
    K_t, K_phi : int
        Grid sizes in ``t`` and in the rotation angle.  ``K_t`` must be even
        so that ``t = 0``, where the Plancherel density vanishes, is never a
        node.
    rule : {"midpoint", "trapezoid"}
        ``t`` grid on ``[-omega, omega]``.  The trapezoid grid contains the
        band edges ``+-omega`` (half weight there), so functions on the
        extreme nodes attain the Bernstein constant ``omega^2 + 1/4``.

    Rotation angles use a midpoint grid on ``(0, pi]``.  Node weight is
    ``t tanh(pi t) / (8 pi^2) * dt_m * (2 pi / K_phi)``.
    """
    if K_t < 2 or K_t % 2:
        raise ValueError("t-grid must avoid t=0 (zero Plancherel weight): K_t must be even and >= 2")
    if K_phi < 1:
        raise ValueError("K_phi must be >= 1")
    if omega <= 0:
        raise ValueError("bandlimit omega must be positive")
    if rule == "midpoint":
        dt = 2.0 * omega / K_t
        t = -omega + dt * (np.arange(K_t) + 0.5)
        dts = np.full(K_t, dt)
    elif rule == "trapezoid":
        t = np.linspace(-omega, omega, K_t)
        dts = np.full(K_t, t[1] - t[0])
        dts[[0, -1]] *= 0.5
    else:
        raise ValueError(f"unknown quadrature rule {rule!r}")
    phi = (np.pi / K_phi) * (np.arange(K_phi) + 0.5)
    DT = np.repeat(dts, K_phi)
    T, P = np.meshgrid(t, phi, indexing="ij")
    T, P = T.ravel(), P.ravel()
    w = plancherel_density(T) * DT * (2 * np.pi / K_phi)
    return SpectralModel(
        eigenvalues=T ** 2 + 0.25,
        weights=w,
        params=np.stack([T, P], axis=1),
        omega=float(omega),
        point_kind="upper_half",
        kernel=_helgason_kernel,
        band_bound=omega ** 2 + 0.25,
        spectrum_floor=0.25,
        name="hyperbolic",
        meta={"K_t": int(K_t), "K_phi": int(K_phi), "rule": rule},
    )


class LaplacianCheck(NamedTuple):
    fd_value: complex
    spectral_value: complex
    rel_err: float


def laplacian_pointwise_check(f: PWFunction, z, h: float) -> LaplacianCheck:
    """Compare ``y^2 (f_xx + f_yy)`` by the five-point stencil with ``-(t^2+1/4)`` f.

    The spectral side is ``evaluate(apply_spectral_multiplier(f, -lambda), z)``,
    i.e. the Laplace-Beltrami operator with its geometric (negative) sign.
    """
    if h <= 0:
        raise ValueError("finite-difference step h must be positive")
    z0 = complex(_z(z))
    if h >= z0.imag:
        raise DomainError("step h must be smaller than Im z")
    stencil = np.array([z0 + h, z0 - h, z0 + 1j * h, z0 - 1j * h, z0])
    v = evaluate(f, stencil)
    fd = z0.imag ** 2 * (v[0] + v[1] + v[2] + v[3] - 4 * v[4]) / h ** 2
    spectral = evaluate(apply_spectral_multiplier(f, lambda lam: -lam), z0)
    scale = abs(spectral)
    rel = abs(fd - spectral) / scale if scale > 0 else abs(fd - spectral)
    return LaplacianCheck(complex(fd), complex(spectral), float(rel))


def functional_transform(functional, model: SpectralModel) -> np.ndarray:
    """Helgason transform of a finite positive measure.

    ``functional`` needs ``points`` (complex, in the half-plane) and
    ``masses``.  Component ``m`` is ``sum_k mu_k Im(k_phi p_k)^(it + 1/2)``.
    """
    if model.point_kind != "upper_half":
        raise ValueError("functional_transform needs a half-plane model")
    pts = _z(functional.points)
    return kernel_transform(model, pts, functional.masses)
