"""
rho-lattices, sampling functionals and their Riesz representers.

A lattice is built by greedy packing: candidates are scanned once and a
candidate is kept when it is at distance >= rho/2 from every kept point.  The
rho/4-balls around kept points are then disjoint and every candidate lies
within rho/2 of a kept point.

A sampling functional is a finite positive measure ``sum_k mu_k delta_{p_k}``
supported within rho/2 of its lattice point.  With derivative order ``n`` it
acts as ``f -> Phi((1 + Laplacian)^n f)`` ("shifted") or
``f -> Phi(Laplacian^n f)`` ("pure").
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .hyperbolic import geodesic_distance, geodesic_polar_point
from .spectral import (
    DomainError,
    IncompatibleModelsError,
    PWFunction,
    SpectralModel,
    apply_spectral_multiplier,
    evaluate,
    kernel_transform,
)

__all__ = [
    "FunctionalFamily",
    "HalfPlaneBox",
    "Interval",
    "Lattice",
    "LatticeCertificate",
    "SamplingFunctional",
    "apply_functional",
    "build_lattice",
    "derivative_multiplier",
    "make_functional_family",
    "read_lattice_csv",
    "representer",
    "verify_lattice",
    "write_lattice_csv",
]


# -- domains -----------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[a, b]`` of the real line."""

    a: float
    b: float
    point_kind = "real"

    def __post_init__(self):
        if not self.b >= self.a:
            raise DomainError(f"empty interval [{self.a}, {self.b}]")

    def distance(self, p, q):
        return np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float))

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.a, self.b, n)

    def sorted_order(self, pts):
        return np.argsort(pts, kind="stable")

    def ball_point(self, center, r, theta):
        # theta in [0, 2 pi): first half to the right, second half to the left
        return center + r * np.where(np.asarray(theta) < np.pi, 1.0, -1.0)


@dataclass(frozen=True)
class HalfPlaneBox:
    """Box ``[x0, x1] x [y0, y1]`` of the upper half-plane, ``y0 > 0``."""

    x0: float
    x1: float
    y0: float
    y1: float
    point_kind = "upper_half"

    def __post_init__(self):
        if not self.y0 > 0:
            raise DomainError("box must lie in the upper half-plane (y0 > 0)")
        if not (self.x1 >= self.x0 and self.y1 >= self.y0):
            raise DomainError("empty box")

    def distance(self, p, q):
        return geodesic_distance(p, q)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Uniform draws w.r.t. the invariant measure ``y^-2 dx dy``."""
        x = rng.uniform(self.x0, self.x1, n)
        # inverse CDF of the density ~ y^-2 on [y0, y1]
        u = rng.uniform(1.0 / self.y1, 1.0 / self.y0, n)
        return x + 1j / u

    def sorted_order(self, pts):
        return np.lexsort((pts.real, pts.imag))

    def ball_point(self, center, r, theta):
        return geodesic_polar_point(center, r, theta)


Domain = Interval | HalfPlaneBox


# -- lattices ----------------------------------------------------------------


class LatticeCertificate(NamedTuple):
    min_pairwise_distance: float
    covering_radius: float
    multiplicity_bound: int

    def to_dict(self) -> dict:
        d = self._asdict()
        # JSON has no infinity
        if not np.isfinite(d["min_pairwise_distance"]):
            d["min_pairwise_distance"] = None
        return d


@dataclass(frozen=True, eq=False)
class Lattice:
    points: np.ndarray
    rho: float
    domain: Domain
    certificate: LatticeCertificate

    def __len__(self):
        return len(self.points)


def _nearest(domain: Domain, probes, points, chunk: int = 2048) -> np.ndarray:
    out = np.empty(len(probes))
    for s in range(0, len(probes), chunk):
        block = probes[s:s + chunk]
        out[s:s + chunk] = domain.distance(block[:, None], points[None, :]).min(axis=1)
    return out


def _certificate(domain: Domain, points, rho, probes) -> LatticeCertificate:
    if len(points) == 0:
        raise ValueError("empty lattice")
    if len(points) > 1:
        d = domain.distance(points[:, None], points[None, :])
        np.fill_diagonal(d, np.inf)
        min_pair = float(d.min())
    else:
        min_pair = float("inf")
    cover = float(_nearest(domain, probes, points).max()) if len(probes) else 0.0
    mult = 0
    for s in range(0, len(probes), 2048):
        block = probes[s:s + 2048]
        counts = (domain.distance(block[:, None], points[None, :]) < rho).sum(axis=1)
        mult = max(mult, int(counts.max()))
    return LatticeCertificate(min_pair, cover, mult)


def build_lattice(
    domain: Domain,
    rho: float,
    candidate_count: int = 20000,
    seed: int = 0,
    order: str = "shuffled",
) -> Lattice:
    """Greedy maximal rho/2-separated subset of a random candidate pool.

    Parameters
    ----------
    domain : Interval or HalfPlaneBox
    rho : float
        Lattice scale; accepted points are pairwise >= rho/2 apart.
    candidate_count : int
        Size of the candidate pool, drawn uniformly from the domain (with
        respect to the Riemannian measure).
    seed : int
        Seeds both the pool and its scan order.
    order : {"shuffled", "sweep"}
        ``"shuffled"`` scans in random order; ``"sweep"`` scans in coordinate
        order, which packs more tightly (e.g. the regular grid on an interval).

    The certificate's covering radius is measured over the candidate pool.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    if candidate_count < 1:
        raise ValueError("candidate_count must be >= 1")
    rng = np.random.default_rng(seed)
    cand = domain.sample(candidate_count, rng)
    if order == "shuffled":
        cand = cand[rng.permutation(candidate_count)]
    elif order == "sweep":
        cand = cand[domain.sorted_order(cand)]
    else:
        raise ValueError(f"unknown scan order {order!r}")

    half = rho / 2.0
    accepted = np.empty(candidate_count, dtype=cand.dtype)
    count = 0
    for p in cand:
        if count == 0 or domain.distance(p, accepted[:count]).min() >= half:
            accepted[count] = p
            count += 1
    points = accepted[:count].copy()
    return Lattice(points, float(rho), domain, _certificate(domain, points, rho, cand))


def verify_lattice(lattice: Lattice, probes) -> LatticeCertificate:
    """Recompute the packing/covering certificate against ``probes``."""
    probes = np.asarray(probes, dtype=lattice.points.dtype)
    return _certificate(lattice.domain, np.asarray(lattice.points), lattice.rho, probes)


def write_lattice_csv(lattice: Lattice, path) -> None:
    """``index,coord1,coord2``; on the line ``coord2`` is empty."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "coord1", "coord2"])
        for i, p in enumerate(lattice.points):
            if np.iscomplexobj(lattice.points):
                w.writerow([i, repr(float(p.real)), repr(float(p.imag))])
            else:
                w.writerow([i, repr(float(p)), ""])


def read_lattice_csv(path) -> np.ndarray:
    """Inverse of :func:`write_lattice_csv` (points only)."""
    with open(Path(path), newline="") as fh:
        rows = list(csv.DictReader(fh))
    if rows and rows[0]["coord2"] != "":
        return np.array([complex(float(r["coord1"]), float(r["coord2"])) for r in rows])
    return np.array([float(r["coord1"]) for r in rows])


# -- functionals -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SamplingFunctional:
    center: complex | float
    kind: str
    points: np.ndarray
    masses: np.ndarray

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.masses))


@dataclass(frozen=True, eq=False)
class FunctionalFamily:
    functionals: list[SamplingFunctional]
    n: int
    c_phi: float
    C_phi: float
    rho: float
    domain: Domain = field(repr=False)

    def __len__(self):
        return len(self.functionals)

    def __iter__(self):
        return iter(self.functionals)

    def __getitem__(self, j):
        return self.functionals[j]


def _ball_quadrature(domain: Domain, center, radius: float, n_r: int = 4, n_theta: int = 8):
    """Midpoint polar rule in geodesic polar coordinates about ``center``."""
    if isinstance(domain, Interval):
        # symmetric midpoint rule on [c - r, c + r] with Lebesgue weights
        k = 2 * n_r
        offs = radius * (-1 + (2 * np.arange(k) + 1) / k)
        return center + offs, np.full(k, 1.0 / k)
    dr = radius / n_r
    r = dr * (np.arange(n_r) + 0.5)
    th = (2 * np.pi / n_theta) * np.arange(n_theta)
    R, TH = np.meshgrid(r, th, indexing="ij")
    # Riemannian area element in geodesic polar coordinates: sinh(r) dr dtheta
    w = np.sinh(R).ravel()
    pts = domain.ball_point(center, R.ravel(), TH.ravel())
    return pts, w / w.sum()


def make_functional_family(
    lattice: Lattice,
    kind: str = "dirac",
    masses: Sequence[float] | float = 1.0,
    n: int = 0,
    seed: int = 0,
    sub_count: int | None = None,
    sub_radius: float | None = None,
    c_phi: float = 0.5,
    C_phi: float = 2.0,
) -> FunctionalFamily:
    """One sampling functional per lattice point.

    kind="dirac"
        ``mu * delta_{x_j}`` with ``mu = masses`` (a scalar).
    kind="weighted_diracs"
        ``sub_count`` random points of the ball ``B(x_j, sub_radius)``
        carrying ``masses`` (a sequence; a scalar is spread evenly).
    kind="ball_average"
        midpoint polar quadrature of the Riemannian measure on
        ``B(x_j, sub_radius)``, scaled to total mass ``masses`` (default 1).

    Raises ``ValueError`` naming the first functional whose total mass leaves
    ``[c_phi, C_phi]``.
    """
    if n < 0 or int(n) != n:
        raise ValueError("derivative order n must be a nonnegative integer")
    if not 0 < c_phi <= C_phi:
        raise ValueError("mass bounds must satisfy 0 < c_phi <= C_phi")
    rho = lattice.rho
    if sub_radius is None:
        sub_radius = rho / 4
    if sub_radius > rho / 2 or sub_radius < 0:
        raise ValueError(f"sub_radius {sub_radius} must lie in [0, rho/2]")
    domain = lattice.domain
    rng = np.random.default_rng(seed)
    dtype = lattice.points.dtype

    funcs = []
    for j, x in enumerate(lattice.points):
        if kind == "dirac":
            mu = np.atleast_1d(np.asarray(masses, dtype=float))
            if mu.size != 1:
                raise ValueError("a Dirac functional takes a single mass")
            pts = np.array([x], dtype=dtype)
        elif kind == "weighted_diracs":
            mu = np.atleast_1d(np.asarray(masses, dtype=float))
            count = sub_count if sub_count is not None else mu.size
            if mu.size == 1 and count > 1:
                mu = np.full(count, mu[0] / count)
            if mu.size != count:
                raise ValueError("weighted_diracs needs one mass per sub-point")
            r = sub_radius * np.sqrt(rng.uniform(0, 1, count))
            theta = rng.uniform(0, 2 * np.pi, count)
            pts = np.asarray(domain.ball_point(x, r, theta), dtype=dtype)
        elif kind == "ball_average":
            total = float(np.sum(masses))
            pts, w = _ball_quadrature(domain, x, sub_radius)
            pts = np.asarray(pts, dtype=dtype)
            mu = total * w
        else:
            raise ValueError(f"unknown functional kind {kind!r}")
        if np.any(mu <= 0):
            raise ValueError(f"functional {j}: masses must be strictly positive")
        total = float(mu.sum())
        if not c_phi <= total <= C_phi:
            raise ValueError(
                f"functional {j}: total mass {total} outside [{c_phi}, {C_phi}]"
            )
        funcs.append(SamplingFunctional(x, kind, pts, mu))
    return FunctionalFamily(funcs, int(n), float(c_phi), float(C_phi), rho, domain)


def derivative_multiplier(n: int, multiplier: str = "shifted"):
    """``lambda -> (1 + lambda)^n`` ("shifted") or ``lambda -> lambda^n`` ("pure")."""
    if multiplier == "shifted":
        return lambda lam: (1.0 + lam) ** n
    if multiplier == "pure":
        return lambda lam: lam ** n
    raise ValueError(f"unknown multiplier {multiplier!r}")


def _check_domain(functional: SamplingFunctional, model: SpectralModel):
    kind = "upper_half" if np.iscomplexobj(functional.points) else "real"
    if kind != model.point_kind:
        raise IncompatibleModelsError(
            f"functional lives on {kind} points but the model expects {model.point_kind}"
        )


def apply_functional(
    functional: SamplingFunctional, f: PWFunction, n: int = 0, multiplier: str = "shifted"
) -> complex:
    """``Phi((1 + Laplacian)^n f)`` computed by pointwise synthesis."""
    _check_domain(functional, f.model)
    g = apply_spectral_multiplier(f, derivative_multiplier(n, multiplier))
    return complex(np.dot(functional.masses, evaluate(g, functional.points)))


def representer(
    functional: SamplingFunctional, n: int, model: SpectralModel, multiplier: str = "shifted"
) -> PWFunction:
    """Riesz representer ``phi`` with ``<f, phi> = Phi^(n)(f)`` for every ``f``.

    Its coefficient at node ``m`` is ``conj(m(lambda_m) * Phi(e_m))``.
    """
    _check_domain(functional, model)
    mult = derivative_multiplier(n, multiplier)(model.eigenvalues)
    transform = kernel_transform(model, functional.points, functional.masses)
    return PWFunction(model, np.conj(mult * transform))
