"""
Frame engine on a finite Paley-Wiener model.

A :class:`FrameSystem` stores the representers ``phi_j`` of a family of
sampling functionals as the rows of a ``(J, K)`` coefficient matrix.  With
``W = diag(weights)``:

    analysis     v_j = <f, phi_j>                  = conj(R) W c
    synthesis    sum_j v_j phi_j                   = R^T v
    frame op.    F f = sum_j <f, phi_j> phi_j      = R^T conj(R) W c

``F`` is self-adjoint and positive with respect to the Plancherel inner
product.  Frame bounds come from power iteration; ``F`` is inverted by the
Neumann series ``F^-1 = B^-1 sum_m (I - F/B)^m`` (Richardson iteration with
relaxation ``1/B``), optionally by conjugate gradients.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .sampling import FunctionalFamily, derivative_multiplier, representer
from .spectral import IncompatibleModelsError, PWFunction, SpectralModel

__all__ = [
    "ConvergenceWarning",
    "FrameBounds",
    "FrameNotCertifiedError",
    "FrameSystem",
    "PlancherelPolyaReport",
    "ReconstructionReport",
    "analysis",
    "build_frame",
    "default_max_iter",
    "dual_frame",
    "estimate_frame_bounds",
    "frame_from_representers",
    "frame_operator",
    "invert_frame_operator",
    "plancherel_polya_report",
    "reconstruct",
    "synthesis",
]

CERTIFY_THRESHOLD = 1e-10


class FrameNotCertifiedError(RuntimeError):
    """The system has no positive lower frame bound; inversion is undefined."""


class ConvergenceWarning(UserWarning):
    pass


class FrameBounds(NamedTuple):
    A: float
    B: float
    residual_A: float
    residual_B: float
    iterations_A: int
    iterations_B: int
    low_confidence: bool
    method: str


@dataclass(frozen=True, eq=False)
class FrameSystem:
    model: SpectralModel
    coefficients: np.ndarray  # (J, K), row j = representer phi_j
    n: int
    multiplier: str
    bounds: FrameBounds
    certified: bool
    threshold: float = CERTIFY_THRESHOLD
    bound_method: dict = field(default_factory=dict)

    def __len__(self):
        return self.coefficients.shape[0]

    @property
    def A(self) -> float:
        return self.bounds.A

    @property
    def B(self) -> float:
        return self.bounds.B

    @property
    def contraction(self) -> float:
        """Neumann contraction factor ``(B - A) / B``."""
        return (self.B - self.A) / self.B if self.B > 0 else 1.0

    @property
    def representers(self) -> list[PWFunction]:
        return [PWFunction(self.model, row) for row in self.coefficients]


# -- coefficient-level operators ---------------------------------------------


def _wnorm(w, C):
    """Plancherel norms of a vector or of the columns of a matrix."""
    if C.ndim == 1:
        return float(np.sqrt(np.sum(w * np.abs(C) ** 2)))
    return np.sqrt(np.sum(w[:, None] * np.abs(C) ** 2, axis=0))


def _analysis(R, w, C):
    WC = w * C if C.ndim == 1 else w[:, None] * C
    return np.conj(R) @ WC


def _synthesis(R, V):
    return R.T @ V


def _frame_apply(R, w, C):
    return _synthesis(R, _analysis(R, w, C))


def _check_model(frame: FrameSystem, f: PWFunction):
    if f.model is not frame.model:
        raise IncompatibleModelsError("incompatible spectral models")


def analysis(frame: FrameSystem, f: PWFunction) -> np.ndarray:
    """Sample sequence ``v_j = <f, phi_j>`` (equal to ``Phi_j^(n)(f)``)."""
    _check_model(frame, f)
    return _analysis(frame.coefficients, frame.model.weights, f.coefficients)


def synthesis(frame: FrameSystem, v) -> PWFunction:
    """``sum_j v_j phi_j``; the adjoint of :func:`analysis`."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (len(frame),):
        raise ValueError(f"expected {len(frame)} coefficients, got shape {v.shape}")
    return PWFunction(frame.model, _synthesis(frame.coefficients, v))


def frame_operator(frame: FrameSystem, f: PWFunction) -> PWFunction:
    _check_model(frame, f)
    return PWFunction(
        frame.model, _frame_apply(frame.coefficients, frame.model.weights, f.coefficients)
    )


# -- bounds ------------------------------------------------------------------


def _power(apply, w, v, maxiter, tol, scale=None):
    """Power iteration in the weighted inner product.

    Returns ``(mu, residual, iterations, converged)`` where ``residual`` is
    ``||A v - mu v||`` for the final unit vector ``v``.
    """
    v = v / _wnorm(w, v)
    mu, res = 0.0, math.inf
    for k in range(1, maxiter + 1):
        Av = apply(v)
        mu = float(np.real(np.sum(w * Av * np.conj(v))))
        res = _wnorm(w, Av - mu * v)
        ref = abs(mu) if scale is None else scale
        if res <= tol * ref:
            return mu, res, k, True
        nrm = _wnorm(w, Av)
        if nrm == 0.0:
            return 0.0, 0.0, k, True
        v = Av / nrm
    return mu, res, maxiter, False


def _bounds(R, w, iterations, seed, tol=1e-10) -> FrameBounds:
    J, K = R.shape
    rng = np.random.default_rng(seed)

    def start():
        return rng.standard_normal(K) + 1j * rng.standard_normal(K)

    B, resB, itB, okB = _power(lambda c: _frame_apply(R, w, c), w, start(), iterations, tol)
    if B <= 0:
        return FrameBounds(0.0, 0.0, resB, 0.0, itB, 0, not okB, "power iteration")
    if J < K:
        # rank(F) <= J < K: the smallest eigenvalue is exactly zero
        return FrameBounds(0.0, B, resB, 0.0, itB, 0, not okB, "power iteration; rank audit J < K")
    mu, resA, itA, okA = _power(
        lambda c: B * c - _frame_apply(R, w, c), w, start(), iterations, tol, scale=B
    )
    A = max(B - mu, 0.0)
    return FrameBounds(A, B, resB, resA, itB, itA, not (okA and okB), "power iteration")


def estimate_frame_bounds(frame: FrameSystem, iterations: int = 500_000, seed: int = 0) -> FrameBounds:
    """Largest and smallest eigenvalue of the frame operator.

    ``B`` by power iteration on ``F``; ``A = B - mu`` where ``mu`` is the top
    eigenvalue of ``B I - F``, also by power iteration.  Both stop when the
    eigen-residual falls below ``1e-10 * B``; otherwise ``low_confidence`` is
    set.  If ``J < K`` the rank audit gives ``A = 0`` directly.
    """
    return _bounds(frame.coefficients, frame.model.weights, iterations, seed)


def frame_from_representers(
    model: SpectralModel,
    representers,
    n: int = 0,
    multiplier: str = "shifted",
    threshold: float = CERTIFY_THRESHOLD,
    iterations: int = 500_000,
    seed: int = 0,
) -> FrameSystem:
    """Wrap explicit representers (``PWFunction`` list or ``(J, K)`` array) as a frame."""
    if isinstance(representers, np.ndarray):
        R = np.array(representers, dtype=complex)
    else:
        reps = list(representers)
        for r in reps:
            if r.model is not model:
                raise IncompatibleModelsError("incompatible spectral models")
        R = np.array([r.coefficients for r in reps], dtype=complex).reshape(len(reps), model.size)
    if R.ndim != 2 or R.shape[1] != model.size or R.shape[0] < 1:
        raise ValueError("representer matrix must have shape (J, K) with J >= 1")
    R.setflags(write=False)
    bounds = _bounds(R, model.weights, iterations, seed)
    J, K = R.shape
    certified = bool(J >= K and bounds.A > threshold * bounds.B and not bounds.low_confidence)
    method = {
        "bounds": bounds.method,
        "iterations": [bounds.iterations_B, bounds.iterations_A],
        "residuals": [bounds.residual_B, bounds.residual_A],
        "rank_audit": {"J": J, "K": K, "J_ge_K": J >= K},
        "threshold": threshold,
    }
    return FrameSystem(model, R, int(n), multiplier, bounds, certified, threshold, method)


def build_frame(
    family: FunctionalFamily,
    model: SpectralModel,
    multiplier: str = "shifted",
    threshold: float = CERTIFY_THRESHOLD,
    iterations: int = 500_000,
    seed: int = 0,
) -> FrameSystem:
    """Representers of ``family`` with ``(1 + lambda)^n`` or ``lambda^n`` and their bounds.

    ``multiplier="pure"`` is only allowed when the spectrum of the model's
    Laplacian is bounded away from zero (the half-plane, where it is >= 1/4).
    The frame is certified when ``J >= K``, ``A > threshold * B`` and the
    bound estimates converged.
    """
    derivative_multiplier(family.n, multiplier)  # validates the tag
    if multiplier == "pure" and not model.spectrum_floor > 0:
        raise ValueError("pure-derivative sampling requires spectrum bounded away from zero")
    reps = [representer(phi, family.n, model, multiplier) for phi in family]
    return frame_from_representers(
        model, reps, family.n, multiplier, threshold, iterations, seed
    )


# -- inversion ---------------------------------------------------------------


def default_max_iter(frame: FrameSystem, tol: float) -> int:
    """``ceil(log(tol) / log((B - A) / B)) + 10``."""
    q = frame.contraction
    if q <= 0:
        return 11
    if q >= 1:
        return 10
    return int(math.ceil(math.log(tol) / math.log(q))) + 10


def _require_certified(frame: FrameSystem):
    if not frame.certified:
        raise FrameNotCertifiedError("frame not certified; inversion undefined")


def _neumann(frame: FrameSystem, H, tol, max_iter):
    """Richardson/Neumann iteration on one or several right-hand sides.

    Returns ``(G, history, iterations, converged)``; ``history`` holds the
    worst relative residual per iterate.
    """
    R, w, B = frame.coefficients, frame.model.weights, frame.B
    hn = _wnorm(w, H)
    hn = np.where(hn > 0, hn, 1.0) if np.ndim(hn) else (hn if hn > 0 else 1.0)
    G = H / B
    it = 1
    res = _wnorm(w, H - _frame_apply(R, w, G)) / hn
    Rk = H - _frame_apply(R, w, G)
    history = [float(np.max(res))]
    while history[-1] > tol and it < max_iter:
        G = G + Rk / B
        it += 1
        Rk = H - _frame_apply(R, w, G)
        history.append(float(np.max(_wnorm(w, Rk) / hn)))
    return G, history, it, history[-1] <= tol


def _cg(frame: FrameSystem, h, tol, max_iter):
    """Conjugate gradients in the Plancherel inner product (one right-hand side)."""
    R, w = frame.coefficients, frame.model.weights
    hn = _wnorm(w, h) or 1.0
    g = np.zeros_like(h)
    r = h.copy()
    p = r.copy()
    rr = np.real(np.sum(w * r * np.conj(r)))
    history = [math.sqrt(rr) / hn]
    it = 0
    while history[-1] > tol and it < max_iter:
        Fp = _frame_apply(R, w, p)
        alpha = rr / np.real(np.sum(w * Fp * np.conj(p)))
        g = g + alpha * p
        r = r - alpha * Fp
        rr_new = np.real(np.sum(w * r * np.conj(r)))
        p = r + (rr_new / rr) * p
        rr = rr_new
        it += 1
        history.append(math.sqrt(rr) / hn)
    # report the true residual, not the recursively updated one
    history[-1] = _wnorm(w, h - _frame_apply(R, w, g)) / hn
    return g, history, it, history[-1] <= tol


def _solve(frame, H, tol, max_iter, method):
    _require_certified(frame)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if max_iter is None:
        max_iter = default_max_iter(frame, tol)
    if method == "neumann":
        return _neumann(frame, H, tol, max_iter)
    if method == "cg":
        if H.ndim == 1:
            return _cg(frame, H, tol, max_iter)
        cols = [_cg(frame, H[:, k], tol, max_iter) for k in range(H.shape[1])]
        G = np.stack([c[0] for c in cols], axis=1)
        n = max(len(c[1]) for c in cols)
        hist = [max(c[1][min(i, len(c[1]) - 1)] for c in cols) for i in range(n)]
        return G, hist, max(c[2] for c in cols), all(c[3] for c in cols)
    raise ValueError(f"unknown solver {method!r}")


def invert_frame_operator(
    frame: FrameSystem,
    h: PWFunction,
    tol: float = 1e-8,
    max_iter: int | None = None,
    method: str = "neumann",
) -> PWFunction:
    """Solve ``F g = h`` until ``||h - F g|| <= tol ||h||``.

    The Neumann iterates are ``g_0 = h/B``, ``g_(m+1) = g_m + (h - F g_m)/B``;
    each step shrinks the residual by at least ``(B - A)/B``.  If
    ``max_iter`` (default :func:`default_max_iter`) runs out, the last iterate
    is returned and a :class:`ConvergenceWarning` is issued.
    """
    _check_model(frame, h)
    g, hist, it, ok = _solve(frame, h.coefficients, tol, max_iter, method)
    if not ok:
        warnings.warn(
            f"frame inversion stopped after {it} iterations at residual {hist[-1]:.3e}",
            ConvergenceWarning,
            stacklevel=2,
        )
    return PWFunction(frame.model, g)


def dual_frame(frame: FrameSystem, tol: float = 1e-8, max_iter: int | None = None,
               method: str = "neumann") -> list[PWFunction]:
    """Canonical dual ``Theta_j = F^-1 phi_j``, all right-hand sides at once."""
    G, hist, it, ok = _solve(frame, frame.coefficients.T.copy(), tol, max_iter, method)
    if not ok:
        warnings.warn(
            f"dual frame stopped after {it} iterations at residual {hist[-1]:.3e}",
            ConvergenceWarning,
            stacklevel=2,
        )
    return [PWFunction(frame.model, G[:, j]) for j in range(G.shape[1])]


# -- reconstruction ----------------------------------------------------------


@dataclass
class ReconstructionReport:
    iterations: int
    residuals: list[float]
    A: float
    B: float
    contraction: float
    rel_error: float | None = None
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "iterations": int(self.iterations),
            "residuals": [float(r) for r in self.residuals],
            "A": float(self.A),
            "B": float(self.B),
            "contraction": float(self.contraction),
            "rel_error": None if self.rel_error is None else float(self.rel_error),
            "flags": list(self.flags),
        }


def reconstruct(
    frame: FrameSystem,
    samples,
    tol: float = 1e-8,
    max_iter: int | None = None,
    method: str = "neumann",
    reference: PWFunction | None = None,
) -> tuple[PWFunction, ReconstructionReport]:
    """Recover ``f`` from ``samples`` as ``F^-1(sum_j v_j phi_j)``.

    This equals ``sum_j v_j Theta_j``.  For samples outside the range of the
    analysis operator the result is the least-squares fit, flagged
    ``"projected"``.

    Raises
    ------
    FrameNotCertifiedError
        If the frame has no certified lower bound.
    """
    _require_certified(frame)
    v = np.asarray(samples, dtype=complex)
    h = synthesis(frame, v)
    g, hist, it, ok = _solve(frame, h.coefficients, tol, max_iter, method)
    f = PWFunction(frame.model, g)

    flags = []
    if not ok:
        flags.append("not converged")
    if frame.bounds.low_confidence:
        flags.append("low-confidence bounds")
    vn = np.linalg.norm(v)
    if vn > 0:
        misfit = np.linalg.norm(analysis(frame, f) - v) / vn
        if misfit > 10 * tol * frame.B / frame.A:
            flags.append("projected")
    rel = None
    if reference is not None:
        _check_model(frame, reference)
        rn = reference.norm()
        rel = (f - reference).norm() / rn if rn > 0 else (f - reference).norm()
    report = ReconstructionReport(it, hist, frame.A, frame.B, frame.contraction, rel, flags)
    return f, report


class PlancherelPolyaReport(NamedTuple):
    A_emp: float
    B_emp: float
    A: float
    B: float
    within_bounds: bool
    noise_gain: float
    gain_bound: float
    dimension: int


def plancherel_polya_report(
    frame: FrameSystem,
    trials: int = 100,
    seed: int = 0,
    noise_trials: int = 20,
    noise_level: float = 1e-6,
    tol: float = 1e-12,
) -> PlancherelPolyaReport:
    """Empirical sampling inequality and noise amplification.

    ``A_emp``/``B_emp`` are the min/max of ``sum_j |Phi_j^(n)(f)|^2`` over
    ``trials`` random unit-norm ``f``; ``within_bounds`` checks
    ``A - 1e-10 <= A_emp <= B_emp <= B + 1e-10``.  ``noise_gain`` is the
    largest ``||f_rec - f|| / ||e||`` over ``noise_trials`` reconstructions
    from samples perturbed by Gaussian ``e`` with ``||e|| = noise_level
    ||v||``; for a certified frame it stays below ``sqrt(B)/A``.
    """
    from .spectral import random_pw

    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    seeds = rng.integers(0, 2**63 - 1, size=trials + noise_trials)
    energies = []
    for s in seeds[:trials]:
        v = analysis(frame, random_pw(frame.model, int(s)))
        energies.append(float(np.sum(np.abs(v) ** 2)))
    A_emp, B_emp = min(energies), max(energies)
    within = bool(frame.A - 1e-10 <= A_emp and B_emp <= frame.B + 1e-10)

    gain = math.nan
    if frame.certified and noise_trials > 0:
        gains = []
        for s in seeds[trials:]:
            f = random_pw(frame.model, int(s))
            v = analysis(frame, f)
            e = rng.standard_normal(v.size) + 1j * rng.standard_normal(v.size)
            e *= noise_level * np.linalg.norm(v) / np.linalg.norm(e)
            g, _ = reconstruct(frame, v + e, tol=tol)
            gains.append((g - f).norm() / np.linalg.norm(e))
        gain = max(gains)
    bound = math.sqrt(frame.B) / frame.A if frame.A > 0 else math.inf
    d = 1 if frame.model.point_kind == "real" else 2
    return PlancherelPolyaReport(A_emp, B_emp, frame.A, frame.B, within, gain, bound, d)
