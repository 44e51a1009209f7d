"""
Experiment configuration and the model -> lattice -> frame -> reconstruction pipeline.

A config is a JSON object::

    {
      "model":      {"kind": "hyperbolic", "omega": 4.0, "K_t": 4, "K_phi": 2},
      "domain":     {"x0": -4, "x1": 4, "y0": 0.25, "y1": 4},
      "rho":        0.5,
      "functional": {"kind": "dirac", "n": 0, "multiplier": "shifted",
                     "masses": 1.0, "c_phi": 0.5, "C_phi": 2.0},
      "solver":     {"tol": 1e-8, "max_iter": null},
      "trials":     20,
      "seed":       0
    }

For ``"kind": "euclid1d"`` the model takes ``K`` (and optionally ``rule``)
and the domain only ``x0``, ``x1``.  Optional sections: ``lattice``
(``candidate_count``, ``order``) and ``sweep`` (lists ``rho``, ``n``,
``multiplier``).  Unknown fields are rejected.
"""

from __future__ import annotations

import copy
import csv
import json
import math
import time
from dataclasses import dataclass
from pathlib import Path

from .euclid1d import build_fourier_model
from .frames import analysis, build_frame, reconstruct
from .hyperbolic import build_helgason_model
from .sampling import HalfPlaneBox, Interval, build_lattice, make_functional_family, write_lattice_csv
from .spectral import random_pw

SWEEP_HEADER = ["rho", "n", "multiplier", "A", "B", "contraction", "iterations", "rel_error", "certified"]

EXIT_OK, EXIT_CONFIG, EXIT_UNCERTIFIED = 0, 1, 2


class ConfigError(ValueError):
    """Invalid experiment configuration; ``field`` is the dotted path of the culprit."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


_SCHEMA = {
    "model": {"kind", "omega", "K", "rule", "kernel", "K_t", "K_phi"},
    "domain": {"x0", "x1", "y0", "y1"},
    "rho": None,
    "functional": {"kind", "n", "multiplier", "masses", "c_phi", "C_phi", "sub_count", "sub_radius"},
    "solver": {"tol", "max_iter", "method"},
    "lattice": {"candidate_count", "order"},
    "trials": None,
    "seed": None,
    "sweep": {"rho", "n", "multiplier"},
}
_REQUIRED = ("model", "domain", "rho")

_DEFAULTS = {
    "functional": {"kind": "dirac", "n": 0, "multiplier": "shifted", "masses": 1.0,
                   "c_phi": 0.5, "C_phi": 2.0, "sub_count": None, "sub_radius": None},
    "solver": {"tol": 1e-8, "max_iter": None, "method": "neumann"},
    "lattice": {"candidate_count": 20000, "order": "shuffled"},
    "trials": 20,
    "seed": 0,
}


def _is_num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _positive(cfg, path):
    sec, _, key = path.rpartition(".")
    v = cfg[sec][key] if sec else cfg[key]
    if not _is_num(v) or v <= 0:
        raise ConfigError(path, f"must be a positive number, got {v!r}")


def _int(cfg, path, minimum):
    sec, _, key = path.rpartition(".")
    v = cfg[sec][key] if sec else cfg[key]
    if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
        raise ConfigError(path, f"must be an integer >= {minimum}, got {v!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    model: dict
    domain: dict
    rho: float
    functional: dict
    solver: dict
    lattice: dict
    trials: int
    seed: int
    sweep: dict | None = None

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError("<root>", "config must be a JSON object")
        for key in raw:
            if key not in _SCHEMA:
                raise ConfigError(key, "unknown field")
        for key in _REQUIRED:
            if key not in raw:
                raise ConfigError(key, "missing required field")
        cfg = copy.deepcopy(raw)
        for sec, keys in _SCHEMA.items():
            if keys is None or sec not in cfg:
                continue
            if not isinstance(cfg[sec], dict):
                raise ConfigError(sec, "must be an object")
            for key in cfg[sec]:
                if key not in keys:
                    raise ConfigError(f"{sec}.{key}", "unknown field")
        for sec, default in _DEFAULTS.items():
            if isinstance(default, dict):
                cfg[sec] = {**default, **cfg.get(sec, {})}
            else:
                cfg.setdefault(sec, default)
        _validate(cfg)
        return cls(**{k: cfg.get(k) for k in _SCHEMA})

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError("<file>", str(exc)) from None
        except json.JSONDecodeError as exc:
            raise ConfigError("<file>", f"not valid JSON ({exc})") from None
        return cls.from_dict(raw)

    def with_seed(self, seed: int | None) -> "ExperimentConfig":
        if seed is None:
            return self
        if seed < 0:
            raise ConfigError("seed", "must be nonnegative")
        return ExperimentConfig(**{**self.__dict__, "seed": int(seed)})

    @property
    def kind(self) -> str:
        return self.model["kind"]


def _validate(cfg):
    m = cfg["model"]
    if m.get("kind") not in ("euclid1d", "hyperbolic"):
        raise ConfigError("model.kind", f"must be 'euclid1d' or 'hyperbolic', got {m.get('kind')!r}")
    if "omega" not in m:
        _missing("model.omega")
    _positive(cfg, "model.omega")
    if m.get("rule", "midpoint") not in ("midpoint", "trapezoid"):
        raise ConfigError("model.rule", "must be 'midpoint' or 'trapezoid'")
    if m["kind"] == "euclid1d":
        for bad in ("K_t", "K_phi"):
            if bad in m:
                raise ConfigError(f"model.{bad}", "only valid for the hyperbolic model")
        if "K" not in m:
            _missing("model.K")
        _int(cfg, "model.K", 2)
        if m.get("kernel", "cell") not in ("cell", "exponential"):
            raise ConfigError("model.kernel", "must be 'cell' or 'exponential'")
    else:
        for bad in ("K", "kernel"):
            if bad in m:
                raise ConfigError(f"model.{bad}", "only valid for the euclid1d model")
        for key in ("K_t", "K_phi"):
            if key not in m:
                _missing(f"model.{key}")
        _int(cfg, "model.K_t", 2)
        if m["K_t"] % 2:
            raise ConfigError("model.K_t", "must be even (t-grid must avoid t=0)")
        _int(cfg, "model.K_phi", 1)

    d = cfg["domain"]
    need = ("x0", "x1") if m["kind"] == "euclid1d" else ("x0", "x1", "y0", "y1")
    for key in d:
        if key not in need:
            raise ConfigError(f"domain.{key}", f"not used by the {m['kind']} model")
    for key in need:
        if key not in d:
            _missing(f"domain.{key}")
        if not _is_num(d[key]):
            raise ConfigError(f"domain.{key}", f"must be a number, got {d[key]!r}")
    if d["x1"] <= d["x0"]:
        raise ConfigError("domain.x1", "must exceed domain.x0")
    if m["kind"] == "hyperbolic":
        if d["y0"] <= 0:
            raise ConfigError("domain.y0", "must be positive (upper half-plane)")
        if d["y1"] <= d["y0"]:
            raise ConfigError("domain.y1", "must exceed domain.y0")

    _positive(cfg, "rho")
    f = cfg["functional"]
    if f["kind"] not in ("dirac", "weighted_diracs", "ball_average"):
        raise ConfigError("functional.kind", f"unknown functional kind {f['kind']!r}")
    _int(cfg, "functional.n", 0)
    if f["multiplier"] not in ("shifted", "pure"):
        raise ConfigError("functional.multiplier", "must be 'shifted' or 'pure'")
    if f["multiplier"] == "pure" and m["kind"] != "hyperbolic":
        raise ConfigError("functional.multiplier", "'pure' requires the hyperbolic model")
    masses = f["masses"]
    ms = masses if isinstance(masses, list) else [masses]
    if not ms or not all(_is_num(x) and x > 0 for x in ms):
        raise ConfigError("functional.masses", "masses must be positive numbers")
    _positive(cfg, "functional.c_phi")
    _positive(cfg, "functional.C_phi")
    if f["C_phi"] < f["c_phi"]:
        raise ConfigError("functional.C_phi", "must be >= functional.c_phi")
    if not f["c_phi"] <= sum(ms) <= f["C_phi"]:
        raise ConfigError("functional.masses", f"total mass {sum(ms)} outside [c_phi, C_phi]")
    if f["sub_count"] is not None:
        _int(cfg, "functional.sub_count", 1)
    if f["sub_radius"] is not None:
        if not _is_num(f["sub_radius"]) or not 0 <= f["sub_radius"] <= cfg["rho"] / 2:
            raise ConfigError("functional.sub_radius", "must lie in [0, rho/2]")

    s = cfg["solver"]
    _positive(cfg, "solver.tol")
    if s["max_iter"] is not None:
        _int(cfg, "solver.max_iter", 1)
    if s["method"] not in ("neumann", "cg"):
        raise ConfigError("solver.method", "must be 'neumann' or 'cg'")
    _int(cfg, "lattice.candidate_count", 1)
    if cfg["lattice"]["order"] not in ("shuffled", "sweep"):
        raise ConfigError("lattice.order", "must be 'shuffled' or 'sweep'")
    _int(cfg, "trials", 1)
    _int(cfg, "seed", 0)

    sw = cfg.get("sweep")
    if sw is not None:
        for key, vals in sw.items():
            if not isinstance(vals, list) or not vals:
                raise ConfigError(f"sweep.{key}", "must be a nonempty list")
        for r in sw.get("rho", []):
            if not _is_num(r) or r <= 0:
                raise ConfigError("sweep.rho", f"must be positive numbers, got {r!r}")
        for n in sw.get("n", []):
            if not isinstance(n, int) or isinstance(n, bool) or n < 0:
                raise ConfigError("sweep.n", f"must be nonnegative integers, got {n!r}")
        for mu in sw.get("multiplier", []):
            if mu not in ("shifted", "pure"):
                raise ConfigError("sweep.multiplier", f"unknown multiplier {mu!r}")
            if mu == "pure" and m["kind"] != "hyperbolic":
                raise ConfigError("sweep.multiplier", "'pure' requires the hyperbolic model")


def _missing(path):
    raise ConfigError(path, "missing required field")


# -- pipeline ----------------------------------------------------------------


def make_model(cfg: ExperimentConfig):
    m = cfg.model
    if m["kind"] == "euclid1d":
        return build_fourier_model(m["omega"], m["K"], m.get("rule", "midpoint"), m.get("kernel", "cell"))
    return build_helgason_model(m["omega"], m["K_t"], m["K_phi"], m.get("rule", "midpoint"))


def make_domain(cfg: ExperimentConfig):
    d = cfg.domain
    if cfg.kind == "euclid1d":
        return Interval(d["x0"], d["x1"])
    return HalfPlaneBox(d["x0"], d["x1"], d["y0"], d["y1"])


def make_lattice(cfg: ExperimentConfig, rho: float | None = None):
    return build_lattice(
        make_domain(cfg),
        cfg.rho if rho is None else rho,
        candidate_count=cfg.lattice["candidate_count"],
        seed=cfg.seed,
        order=cfg.lattice["order"],
    )


def run_cell(cfg: ExperimentConfig, model=None, rho=None, n=None, multiplier=None):
    """One pipeline pass; returns ``(frame, report_dict, lattice)``.

    The report is the reconstruction report, or for an uncertified frame the
    same fields with ``flags`` containing ``"not certified"``.
    """
    f = cfg.functional
    n = f["n"] if n is None else n
    multiplier = f["multiplier"] if multiplier is None else multiplier
    model = make_model(cfg) if model is None else model
    lattice = make_lattice(cfg, rho)
    family = make_functional_family(
        lattice, f["kind"], f["masses"], n, seed=cfg.seed,
        sub_count=f["sub_count"], sub_radius=f["sub_radius"],
        c_phi=f["c_phi"], C_phi=f["C_phi"],
    )
    frame = build_frame(family, model, multiplier, seed=cfg.seed)
    if not frame.certified:
        report = {
            "iterations": 0, "residuals": [], "A": frame.A, "B": frame.B,
            "contraction": frame.contraction, "rel_error": None, "flags": ["not certified"],
        }
        return frame, report, lattice
    f_true = random_pw(model, cfg.seed + 1)
    _, rep = reconstruct(
        frame, analysis(frame, f_true), tol=cfg.solver["tol"],
        max_iter=cfg.solver["max_iter"], method=cfg.solver["method"], reference=f_true,
    )
    return frame, rep.to_dict(), lattice


def _write_json(path: Path, obj):
    path.write_text(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def cmd_lattice(cfg: ExperimentConfig, out: Path) -> int:
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    lat = make_lattice(cfg)
    write_lattice_csv(lat, out / "lattice.csv")
    cert = {
        "rho": lat.rho,
        "count": len(lat),
        "seed": cfg.seed,
        **lat.certificate.to_dict(),
    }
    _write_json(out / "certificate.json", cert)
    _write_json(out / "timing.json", {"lattice_seconds": time.perf_counter() - t0})
    return EXIT_OK


def cmd_reconstruct(cfg: ExperimentConfig, out: Path) -> int:
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    frame, report, lattice = run_cell(cfg)
    _write_json(out / "report.json", report)
    _write_json(out / "timing.json", {"total_seconds": time.perf_counter() - t0,
                                      "J": len(lattice), "K": frame.model.size})
    return EXIT_OK if frame.certified else EXIT_UNCERTIFIED


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    return repr(x)


def cmd_sweep(cfg: ExperimentConfig, out: Path) -> int:
    out.mkdir(parents=True, exist_ok=True)
    sw = cfg.sweep or {}
    rhos = sw.get("rho", [cfg.rho])
    ns = sw.get("n", [cfg.functional["n"]])
    mults = sw.get("multiplier", [cfg.functional["multiplier"]])
    model = make_model(cfg)
    t0 = time.perf_counter()
    rows = []
    for rho in rhos:
        for n in ns:
            for mu in mults:
                frame, rep, _ = run_cell(cfg, model, rho, n, mu)
                rows.append({
                    "rho": float(rho), "n": int(n), "multiplier": mu,
                    "A": rep["A"], "B": rep["B"], "contraction": rep["contraction"],
                    "iterations": rep["iterations"], "rel_error": rep["rel_error"],
                    "certified": frame.certified,
                })
    rows.sort(key=lambda r: (r["rho"], r["n"], r["multiplier"]))
    with open(out / "sweep.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_HEADER)
        for r in rows:
            w.writerow([_fmt(r[k]) for k in SWEEP_HEADER])
    _write_json(out / "timing.json", {"sweep_seconds": time.perf_counter() - t0, "cells": len(rows)})
    return EXIT_OK
