"""Command-line front end: ``cqlax <group> <command> [flags]``.

Exit status is 0 when every check passes, 2 when a check exceeds its
tolerance and 1 for usage, configuration, domain or I/O errors.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import acceptance
from . import correspondence as corr
from . import evolve as ev
from . import orthopoly as op
from . import susy
from .config import CommandSchema, RunConfig, load_config, validate_grid, validate_time
from .errors import ConfigError, CqlaxError
from .laxpair import (Trajectory, assemble_lax, canonical_family, catalog_pair, classical_potential,
                      ho_trajectory_exact, integrate_newton, zcc_residual)
from .report import read_csv, write_csv, write_json, write_svg

EXIT_PASS, EXIT_ERROR, EXIT_TOLERANCE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Result:
    results: dict
    checks: dict = field(default_factory=dict)     # name -> (value, tolerance key)
    residual: dict | None = None
    resolved: dict = field(default_factory=dict)
    table: tuple | None = None                      # (columns, meta)
    plot: tuple | None = None                       # (x, series, title)


@dataclass(frozen=True)
class Command:
    schema: CommandSchema
    run: Callable[[RunConfig, dict], Result]
    help: str
    options: tuple = ()                             # extra string flags


# ------------------------------------------------------------- helpers
def _family_params(cfg: RunConfig, defaults: dict, shared: tuple = ()) -> dict:
    fam_defaults = defaults[cfg.family]
    for k, v in cfg.params.items():
        if v is not None and k not in fam_defaults and k not in shared:
            raise ConfigError(f"config.params.{k}: not a parameter of family {cfg.family!r}")
    out = {k: (cfg.params[k] if cfg.params.get(k) is not None else d) for k, d in fam_defaults.items()}
    cfg.params = {**{k: v for k, v in cfg.params.items() if k in shared and v is not None}, **out}
    return out


def _fill(cfg: RunConfig, grid: dict | None = None, time_: dict | None = None, tolerances: dict | None = None):
    for sec, d in ((cfg.grid, grid), (cfg.time, time_), (cfg.tolerances, tolerances)):
        for k, v in (d or {}).items():
            if sec.get(k) is None:
                sec[k] = v
    validate_grid(cfg.grid)
    validate_time(cfg.time)


def _x(cfg: RunConfig) -> np.ndarray:
    g = cfg.grid
    return np.linspace(g["x_min"], g["x_max"], int(g["n_points"]))


def _t(cfg: RunConfig) -> np.ndarray:
    tm = cfg.time
    n = int(math.floor((tm["t1"] - tm["t0"]) / tm["dt"] + 1e-9)) + 1
    return tm["t0"] + tm["dt"] * np.arange(max(n, 2))


def _res(r) -> dict:
    return {"max_abs": r.max_abs, "max_rel": r.max_rel}


# ---------------------------------------------------------------- poly
POLY_DEFAULTS = {
    "laguerre": {"n": 3, "alpha": 0.5},
    "jacobi": {"n": 3, "alpha": 0.5, "beta": 1.5},
    "exc-laguerre": {"N": 1, "n": 2, "l": 1.0},
    "exc-jacobi": {"N": 1, "n": 2, "g": 1.0, "h": 2.0},
}


def run_poly_eval(cfg: RunConfig, opts: dict) -> Result:
    p = _family_params(cfg, POLY_DEFAULTS)
    x = _x(cfg)
    fam = cfg.family
    if fam == "laguerre":
        y = op.laguerre(p["n"], p["alpha"], x)
    elif fam == "jacobi":
        y = op.jacobi(p["n"], p["alpha"], p["beta"], x)
    elif fam == "exc-laguerre":
        y = op.exc_laguerre(p["N"], p["n"], p["l"], x)
    else:
        y = op.exc_jacobi(p["n"], p["N"], p["g"], p["h"], x)
    y = np.asarray(y, float)
    return Result({"grid": x, "values": y}, {"nonfinite_count": (int(np.sum(~np.isfinite(y))), "nonfinite")},
                  table=({"x": x, "value": y}, {"family": fam, **p}), plot=(x, {fam: y}, f"{fam} {p}"))


# ---------------------------------------------------------------- susy
SUSY_DEFAULTS = {
    "ho": {"omega": 1.0, "l": 1.0, "N": 1, "n": 1},
    "pt": {"g": 1.0, "h": 2.0, "N": 1, "n": 1},
    "hydrogen": {"mu": 1.0, "l": 1.0, "N": 0, "n": 0},
}
SUSY_GRIDS = {"ho": (0.2, 5.0), "pt": (0.1, math.pi / 2 - 0.1), "hydrogen": (0.2, 3.8)}
SUSY_PARAMS = {"omega": None, "l": None, "g": None, "h": None, "mu": None, "N": None, "n": None}


def _spec(cfg: RunConfig, shared: tuple = ()):
    p = _family_params(cfg, SUSY_DEFAULTS, shared)
    lo, hi = SUSY_GRIDS[cfg.family]
    _fill(cfg, {"x_min": lo, "x_max": hi})
    return susy.make_spec(cfg.family, **p)


def run_susy_vq(cfg: RunConfig, opts: dict) -> Result:
    spec = _spec(cfg)
    x = _x(cfg)
    vq = susy.quantum_potential(spec)(x)
    closed = spec.vq_closed_form(x)
    dev = float(np.max(np.abs(vq - closed) / np.maximum(np.abs(closed), 1.0)))
    eig = susy.eigen_residual(spec, x)
    return Result({"grid": x, "values": vq, "closed_form": closed, "residuals": {"eigen": _res(eig),
                                                                                "closed_form_rel": dev}},
                  {"closed_form_rel": (dev, "closed_form"), "eigen_rel": (eig.max_rel, "eigen")},
                  _res(eig), table=({"x": x, "vq": vq}, {"family": cfg.family, **cfg.params}),
                  plot=(x, {"V_q": vq}, f"V_q {cfg.family}"))


def run_susy_k1(cfg: RunConfig, opts: dict) -> Result:
    spec = _spec(cfg)
    x = _x(cfg)
    r = susy.intertwining_residual(spec, x)
    return Result({"k1": susy.k1_value(spec), "epsilon": susy.epsilon(spec), "eigenvalue": spec.eigenvalue(),
                   "grid": x, "residuals": {"intertwining": _res(r)}},
                  {"intertwining_rel": (r.max_rel, "intertwining")}, _res(r),
                  resolved={"k1": susy.k1_value(spec)})


def run_susy_b1(cfg: RunConfig, opts: dict) -> Result:
    spec = _spec(cfg)
    x = _x(cfg)
    b1 = susy.build_b1(spec)
    vals = b1(x)
    k = corr.KCoefficients(susy.k1_value(spec))
    r = corr.vq_residual(susy.quantum_potential(spec), b1, k, x)
    closed = spec.b1_closed_form(x)
    return Result({"grid": x, "values": vals, "closed_form": closed,
                   "closed_form_rel": float(np.max(np.abs(vals - closed) / np.maximum(np.abs(closed), 1e-300))),
                   "residuals": {"vq": _res(r)}},
                  {"vq_rel": (r.max_rel, "vq")}, _res(r),
                  table=({"x": x, "b1": vals}, {"family": cfg.family, **cfg.params}),
                  plot=(x, {"b1": vals}, f"b1 {cfg.family}"))


DEFECT_DEFAULTS = {"ho": {"omega": 1.0, "l": 1.0, "delta": 1.0}, "pt-hyperbolic": {"l": 1.0, "g": 2.0, "delta": 1.0}}


def run_susy_defect(cfg: RunConfig, opts: dict) -> Result:
    p = _family_params(cfg, DEFECT_DEFAULTS)
    delta = p.pop("delta")
    cat = susy.LADDERS[cfg.family]
    probes = acceptance.probe_functions(np.linspace(0.8, 2.6, 10), np.linspace(0.6, 2.4, 10))
    x = _x(cfg)
    c, dev = susy.shape_invariance_defect(cat, p, delta, probes, x)
    expect = susy.shape_invariance_constant(cat, p, delta)
    return Result({"constant": c, "closed_form": expect, "deviation": dev, "probes": len(probes)},
                  {"deviation": (dev, "deviation"), "constant_error": (abs(c - expect), "constant")},
                  {"max_abs": dev, "max_rel": dev}, resolved={"constant": c})


# ---------------------------------------------------------------- corr
HO_CORR = {"ho": {"omega": 1.0, "l": 1.5, "E": 4.0}}


def run_corr_vc(cfg: RunConfig, opts: dict) -> Result:
    p = _family_params(cfg, HO_CORR, ("k3_sign",))
    x = _x(cfg)
    res = corr.resolve_k3_sign(p["omega"], p["l"], p["E"], x, x, cfg.tolerances["vc"])
    sign = cfg.params.get("k3_sign")
    if sign is not None and sign not in (-1, 1):
        raise ConfigError("config.params.k3_sign: must be +1 or -1")
    chosen = int(sign) if sign is not None else res["resolved_sign"]
    if chosen is None:
        raise CqlaxError("no k3 sign zeroes both residuals")
    k = corr.KCoefficients(2 * p["omega"] ** 2, -4 * p["E"], chosen * 2 * p["l"] ** 2)
    r = corr.vc_residual(corr.ho_classical_potential(p["omega"], p["l"], p["E"]), corr.square_field("u^2"), k, x)
    return Result({"grid": x, "candidates": res["candidates"], "k": k.as_dict()},
                  {"vc_rel": (r.max_rel, "vc")}, _res(r),
                  resolved={"k_resolved": {"k3_sign": res["resolved_sign"], "k3": res["k3"],
                                           "unique": res["unique"], "tabulated_k3": res["tabulated_k3"],
                                           "tabulated_confirmed": res["tabulated_sign_confirmed"]},
                            "k3_used": k.k3})


def _closure(cfg: RunConfig):
    spec = _spec(cfg, ("k1",))
    k1 = cfg.params.get("k1")
    k1 = susy.k1_value(spec) if k1 is None else k1
    return spec, susy.build_b1(spec), susy.quantum_potential(spec), k1


def run_corr_vq(cfg: RunConfig, opts: dict) -> Result:
    spec, b1, vq, k1 = _closure(cfg)
    x = _x(cfg)
    r = corr.vq_residual(vq, b1, corr.KCoefficients(k1), x)
    r4 = corr.linear4_residual(b1, vq, k1, x)
    return Result({"grid": x, "k1": k1, "k1_value": susy.k1_value(spec),
                   "residuals": {"vq": _res(r), "linear4": _res(r4)}},
                  {"vq_rel": (r.max_rel, "vq"), "linear4_rel": (r4.max_rel, "linear4")}, _res(r),
                  resolved={"k_resolved": {"k1": k1, "k2": 0.0, "k3": 0.0}},
                  table=({"x": x, "residual": r.values}, {"family": cfg.family, "k1": k1}))


def run_corr_gambier(cfg: RunConfig, opts: dict) -> Result:
    spec, b1, vq, k1 = _closure(cfg)
    windows = corr.zero_free_windows(b1, cfg.grid["x_min"], cfg.grid["x_max"])
    n = int(cfg.grid["n_points"])
    worst_abs = worst_rel = 0.0
    for a, b in windows:
        r = corr.gambier_residual(b1, vq, k1, np.linspace(a, b, n))
        worst_abs, worst_rel = max(worst_abs, r.max_abs), max(worst_rel, r.max_rel)
    return Result({"windows": windows, "k1": k1}, {"gambier_rel": (worst_rel, "gambier")},
                  {"max_abs": worst_abs, "max_rel": worst_rel}, resolved={"k_resolved": {"k1": k1}})


def run_corr_master(cfg: RunConfig, opts: dict) -> Result:
    p = _family_params(cfg, {"ho": {"omega": 1.0, "l": 1.0, "E": 3.0}})
    x, t = _x(cfg), _t(cfg)
    tr = ho_trajectory_exact(p["E"], p["l"], p["omega"], t)
    b = corr.BSplit(corr.square_field("b1"), corr.square_field("b2"))
    r = corr.master_residual(b, corr.ho_classical_potential(p["omega"], p["l"], p["E"]),
                             corr.ho_quantum_potential(p["omega"], p["l"], p["E"]), tr, x)
    return Result({"grid": x, "t": t}, {"master_rel": (r.max_rel, "master")}, _res(r),
                  resolved={"k_resolved": corr.ho_k_coefficients(p["omega"], p["l"], p["E"]).as_dict()})


def run_corr_solve_b2(cfg: RunConfig, opts: dict) -> Result:
    p = _family_params(cfg, {"ho": {"omega": 1.0, "l": 1.0, "E": 3.0, "u0": 1.2, "sign": 1}})
    u = _x(cfg)
    k = corr.ho_k_coefficients(p["omega"], p["l"], p["E"])
    sol = corr.solve_b2(corr.ho_classical_potential(p["omega"], p["l"], p["E"]), k, p["u0"], p["u0"] ** 2,
                        int(p["sign"]), u)
    ref = sol.u ** 2
    err = float(np.max(np.abs(sol.b2 - ref) / ref))
    return Result({"u": sol.u, "b2": sol.b2, "excluded": sol.excluded, "reference": "u^2"},
                  {"b2_rel": (err, "b2")}, {"max_abs": float(np.max(np.abs(sol.b2 - ref))), "max_rel": err},
                  resolved={"k_resolved": k.as_dict()},
                  table=({"u": sol.u, "b2": sol.b2}, {"family": "ho", **p}),
                  plot=(sol.u, {"b2": sol.b2, "u^2": ref}, "b2(u)"))


# ----------------------------------------------------------------- lax
LAX_DEFAULTS = {
    "ho": {"omega": 1.0, "l": 1.0, "E": 3.0},
    "piv": {"alpha": 1.0, "beta": -0.5, "u0": 0.8, "v0": 0.0, "t_init": 0.5},
    "pv": {"sigma": 0.25, "xi": 0.125, "zeta": 0.125, "u0": 1.0, "v0": 0.0, "t_init": 0.0},
}
LAX_TIME = {"ho": {"t0": 0.2, "t1": 2.8, "dt": 1e-3}, "piv": {"t0": 0.5, "t1": 1.5, "dt": 1e-3},
            "pv": {"t0": 0.02, "t1": 0.15, "dt": 1e-3}}
LAX_GRID = {"ho": {"x_min": 0.5, "x_max": 4.0}, "piv": {"x_min": 0.5, "x_max": 2.0},
            "pv": {"x_min": 0.5, "x_max": 2.0}}
LAX_PARAMS = {"omega": None, "l": None, "E": None, "alpha": None, "beta": None, "sigma": None, "xi": None,
              "zeta": None, "u0": None, "v0": None, "t_init": None, "dt_fd": None}
PAD = 0.01


def _lax_setup(cfg: RunConfig) -> dict:
    p = _family_params(cfg, LAX_DEFAULTS, ("dt_fd",))
    _fill(cfg, LAX_GRID[cfg.family], LAX_TIME[cfg.family])
    return p


def _trajectory(cfg: RunConfig, p: dict, path=None) -> Trajectory:
    tm = cfg.time
    if path:
        return load_trajectory(path, cfg.family)
    if cfg.family == "ho":
        return ho_trajectory_exact(p["E"], p["l"], p["omega"], np.linspace(tm["t0"] - PAD, tm["t1"] + PAD, 2001))
    phys = {k: p[k] for k in p if k not in ("u0", "v0", "t_init")}
    lo, hi = min(p["t_init"], tm["t0"] - PAD), max(p["t_init"], tm["t1"] + PAD)
    return integrate_newton(cfg.family, phys, p["u0"], p["v0"], (lo, hi), tm["dt"], t_initial=p["t_init"])


def _phys(p: dict) -> dict:
    return {k: v for k, v in p.items() if k not in ("u0", "v0", "t_init", "E")}


def load_trajectory(path, family: str) -> Trajectory:
    meta, cols = read_csv(path)
    if set(cols) < {"t", "u", "udot"}:
        raise ConfigError(f"{path}: trajectory CSV needs columns t, u, udot")
    fam = canonical_family(meta.get("family", family))
    if fam != family:
        raise ConfigError(f"{path}: trajectory is for family {fam!r}, command uses {family!r}")
    names = {"ho": ("omega", "l"), "piv": ("alpha", "beta"), "pv": ("sigma", "xi", "zeta")}[fam]
    try:
        params = {k: float(meta[k]) for k in names}
        E = float(meta.get("E", "nan"))
    except KeyError as e:
        raise ConfigError(f"{path}: missing metadata {e.args[0]!r}") from None
    acc = -classical_potential(fam, params).dq(cols["u"], cols["t"])
    return Trajectory(fam, params, cols["t"], cols["u"], cols["udot"], E, "explicit", acc)


def run_lax_zcc(cfg: RunConfig, opts: dict) -> Result:
    p = _lax_setup(cfg)
    _fill(cfg, tolerances={"zcc": 1e-6 if cfg.family == "ho" else 1e-5})
    dt_fd = cfg.params.get("dt_fd") or (3e-5 if cfg.family == "ho" else 1e-3)
    tr = _trajectory(cfg, p, opts.get("trajectory"))
    pair = catalog_pair(cfg.family, _phys(p), tr)
    win = (cfg.time["t0"], cfg.time["t1"])
    x = _x(cfg)
    r = zcc_residual(pair, x, win, dt_fd, locus_margin=0.1 if cfg.family == "ho" else None)
    r2 = zcc_residual(pair, x, win, dt_fd / 2, locus_margin=0.1 if cfg.family == "ho" else None)
    return Result({"window": win, "zcc": r.summary(), "zcc_half_step": r2.summary(),
                   "converging": bool(r2.max_abs <= r.max_abs or r2.max_abs < cfg.tolerances["zcc"]),
                   "trajectory": {"newton_residual": tr.newton_residual(), "samples": len(tr.t)}},
                  {"zcc_abs": (r.max_abs, "zcc")}, {"max_abs": r.max_abs, "max_rel": r.max_rel})


def run_lax_integrate(cfg: RunConfig, opts: dict) -> Result:
    p = _lax_setup(cfg)
    if cfg.family == "ho":
        lo, hi = cfg.time["t0"], cfg.time["t1"]
        u0, v0 = ho_trajectory_exact(p["E"], p["l"], p["omega"], [lo]).exact(lo)
        tr = integrate_newton("ho", _phys(p), float(u0), float(v0), (lo, hi), cfg.time["dt"])
    else:
        tr = _trajectory(cfg, p)
    nr = tr.newton_residual()
    meta = {"family": tr.family, "E": tr.E, **tr.params}
    return Result({"window": tr.window, "E": tr.E, "newton_residual": nr, "energy_drift": tr.energy_drift(),
                   "samples": len(tr.t)},
                  {"newton": (nr, "newton")}, {"max_abs": nr, "max_rel": nr},
                  table=({"t": tr.t, "u": tr.u, "udot": tr.udot}, meta),
                  plot=(tr.t, {"u": tr.u, "udot": tr.udot}, f"{tr.family} trajectory"))


def run_lax_assemble(cfg: RunConfig, opts: dict) -> Result:
    p = _family_params(cfg, {"ho": {"omega": 1.0, "l": 1.0, "E": 3.0}})
    w, l, E = p["omega"], p["l"], p["E"]
    x, t = _x(cfg), _t(cfg)
    tr = ho_trajectory_exact(E, l, w, t)
    b = corr.BSplit(corr.square_field("b1"), corr.square_field("b2"))
    asm = assemble_lax(b, corr.ho_quantum_potential(w, l, E), tr)
    cat = catalog_pair("ho", {"omega": w, "l": l}, tr)
    X, T = np.meshgrid(x, t)
    u, _ = tr.state(T)
    m = np.abs(X * X - u * u) > 0.1
    xs, ts = X[m], T[m]
    dU = np.abs(asm.U(xs, ts) - cat.U(xs, ts)).max(axis=(-2, -1))
    dV = np.abs(asm.V(xs, ts) - cat.V(xs, ts)).max(axis=(-2, -1))
    scale = np.maximum(1.0, np.maximum(np.abs(cat.U(xs, ts)), np.abs(cat.V(xs, ts))).max(axis=(-2, -1)))
    rel = float(np.max(np.maximum(dU, dV) / scale))
    return Result({"samples": int(m.sum()), "U_max_abs": float(dU.max()), "V_max_abs": float(dV.max())},
                  {"entry_rel": (rel, "assemble")},
                  {"max_abs": float(max(dU.max(), dV.max())), "max_rel": rel})


# ----------------------------------------------------------------- lsp
LSP_DEFAULTS = {"ho": {"n": 0, "l": 1.0, "omega": 1.0}}


def run_lsp_two_term(cfg: RunConfig, opts: dict) -> Result:
    p = _family_params(cfg, LSP_DEFAULTS)
    n, l, w = int(p["n"]), p["l"], p["omega"]
    s = ev.two_term_solution(n, l, w)
    x, t = _x(cfg), _t(cfg)
    tr = ho_trajectory_exact(s.E, l, w, t)
    c = ev.constraint_residual(s.phi1, tr, x, t)
    X, T = np.meshgrid(x, t)
    u, _ = tr.state(T)
    m = np.abs(X * X - u * u) > 0.1
    rx, rt = ev.lsp_residuals(s.phi1, tr, X[m], T[m])
    cs = ev.coefficient_system(s.coefficients, s.E, n + 3, l, w)
    coef = max(float(np.max(np.abs(v))) for v in cs.values())
    td = np.linspace(0.0, 4 * math.pi / w, 2001)
    d = ev.density_observables(s.phi1, np.linspace(0.0, 13.0 / math.sqrt(w), 2601), td, probes=(1.3 / math.sqrt(w),))
    period = next(iter(d["periods"].values()))
    worst = max(c.max_rel, rx.max_rel, rt.max_rel)
    snap = s.phi1(x, np.full_like(x, t[0]))
    return Result({"E": s.E, "E1": s.E1, "E2": s.E2, "ratio": s.ratio, "residual_max": worst,
                   "period_estimate": period, "norm_drift_rel": d["norm_drift_rel"],
                   "energy_sandwich": bool(ev.energy_sandwich(n, l)),
                   "residuals": {"constraint": _res(c), "lsp_x": _res(rx), "lsp_t": _res(rt), "coefficients": coef}},
                  {"constraint_rel": (c.max_rel, "constraint"), "lsp_rel": (max(rx.max_rel, rt.max_rel), "lsp"),
                   "coefficient_abs": (coef, "coefficients")},
                  {"max_abs": max(c.max_abs, rx.max_abs, rt.max_abs), "max_rel": worst},
                  table=({"x": x, "re": snap.real, "im": snap.imag}, {"n": n, "l": l, "omega": w, "t": t[0]}),
                  plot=(x, {f"|phi|^2 t={tk:.3g}": np.abs(s.phi1(x, np.full_like(x, tk))) ** 2
                            for tk in np.linspace(0, math.pi / (2 * w), 3)}, "two-term density"))


def run_lsp_constraint(cfg: RunConfig, opts: dict) -> Result:
    p = _family_params(cfg, {"ho": {"n": 0, "l": 1.0, "omega": 1.0, "stationary": 0}})
    x, t = _x(cfg), _t(cfg)
    if p["stationary"]:
        phi, E = ev.stationary_solution(p["l"], p["omega"]), p["omega"] * p["l"]
    else:
        s = ev.two_term_solution(int(p["n"]), p["l"], p["omega"])
        phi, E = s.phi1, s.E
    r = ev.constraint_residual(phi, ho_trajectory_exact(E, p["l"], p["omega"], t), x, t)
    return Result({"E": E, "residuals": {"constraint": _res(r)}}, {"constraint_rel": (r.max_rel, "constraint")},
                  _res(r))


def run_lsp_evolve(cfg: RunConfig, opts: dict) -> Result:
    p = _family_params(cfg, {"ho": {"n": 0, "l": 2.0, "omega": 1.0}})
    n, l, w = int(p["n"]), p["l"], p["omega"]
    _fill(cfg, {"x_min": 0.0, "x_max": 8.0 / math.sqrt(w)})
    g, tm = cfg.grid, cfg.time
    x = np.linspace(g["x_min"], g["x_max"], int(g["n_points"]))
    psi0 = np.zeros_like(x, complex)
    inner = (x > 0)
    inner[0] = inner[-1] = False
    psi0[inner] = ev.chi(n, l, w, x[inner])
    field0 = ev.WaveField(x, np.array([tm["t0"]]), psi0[None, :])

    def Vq(y):
        return w ** 2 * y * y / 2 + (l * l - 0.25) / (2 * y * y)

    steps = int(round((tm["t1"] - tm["t0"]) / tm["dt"]))
    wf = ev.crank_nicolson_evolve(Vq, field0, tm["dt"], steps, store_every=max(steps // 8, 1))
    En = w * (2 * n + l + 1)
    T = wf.t[-1] - wf.t[0]
    ov = np.vdot(wf.psi[0], wf.psi[-1]) / np.vdot(wf.psi[0], wf.psi[0])
    phase = float(abs(np.angle(ov * np.exp(1j * En * T))))
    drift = wf.norm_drift_rel() / max(steps, 1)
    last = wf.psi[-1]
    return Result({"E_n": En, "steps": steps, "T": T, "phase_error": phase, "norm_drift_per_step": drift,
                   "norms": wf.norms(), "t": wf.t},
                  {"phase": (phase, "phase"), "norm_drift": (drift, "norm_drift")},
                  {"max_abs": phase, "max_rel": phase},
                  table=({"x": x, "re": last.real, "im": last.imag}, {"n": n, "l": l, "omega": w, "t": wf.t[-1]}),
                  plot=(x, {f"Re psi t={tk:.3g}": wf.psi[k].real for k, tk in enumerate(wf.t)}, "Crank-Nicolson"))


# ---------------------------------------------------------- registry
GRID_DEFAULT = {"x_min": 0.0, "x_max": 1.0, "n_points": 64}
G_NONE = {"x_min": None, "x_max": None, "n_points": 64}

COMMANDS: dict[tuple[str, str], Command] = {
    ("poly", "eval"): Command(CommandSchema(
        {"n": None, "N": None, "alpha": None, "beta": None, "l": None, "g": None, "h": None},
        tuple(POLY_DEFAULTS), "laguerre", dict(GRID_DEFAULT), tolerances={"nonfinite": 0.5},
        integer_params=("n", "N")), run_poly_eval, "evaluate a polynomial family on a grid"),
    ("susy", "vq"): Command(CommandSchema(dict(SUSY_PARAMS), tuple(SUSY_DEFAULTS), "ho", dict(G_NONE),
                                          tolerances={"closed_form": 1e-10, "eigen": 1e-8},
                                          integer_params=("N", "n")), run_susy_vq, "quantum potential from W"),
    ("susy", "k1"): Command(CommandSchema(dict(SUSY_PARAMS), tuple(SUSY_DEFAULTS), "ho", dict(G_NONE),
                                          tolerances={"intertwining": 1e-8}, integer_params=("N", "n")),
                            run_susy_k1, "separation constant k1 and the intertwining check"),
    ("susy", "b1"): Command(CommandSchema(dict(SUSY_PARAMS), tuple(SUSY_DEFAULTS), "ho", dict(G_NONE),
                                          tolerances={"vq": 1e-7}, integer_params=("N", "n")),
                            run_susy_b1, "b1 = phi psi"),
    ("susy", "defect"): Command(CommandSchema({"omega": None, "l": None, "g": None, "delta": None},
                                              tuple(DEFECT_DEFAULTS), "ho", {"x_min": 0.5, "x_max": 3.0,
                                                                             "n_points": 60},
                                              tolerances={"deviation": 1e-8, "constant": 1e-8}),
                                run_susy_defect, "shape-invariance defect constancy"),
    ("corr", "vc"): Command(CommandSchema({"omega": None, "l": None, "E": None, "k3_sign": None}, ("ho",), "ho",
                                          {"x_min": 0.4, "x_max": 3.0, "n_points": 60}, tolerances={"vc": 1e-10},
                                          integer_params=("k3_sign",)), run_corr_vc, "classical ODE and k3 sign"),
    ("corr", "vq"): Command(CommandSchema({**SUSY_PARAMS, "k1": None}, tuple(SUSY_DEFAULTS), "ho", dict(G_NONE),
                                          tolerances={"vq": 1e-7, "linear4": 1e-6}, integer_params=("N", "n")),
                            run_corr_vq, "quantum ODE residual for b1"),
    ("corr", "gambier"): Command(CommandSchema({**SUSY_PARAMS, "k1": None}, tuple(SUSY_DEFAULTS), "ho",
                                               dict(G_NONE), tolerances={"gambier": 1e-6},
                                               integer_params=("N", "n")), run_corr_gambier,
                                 "Gambier equation on zero-free windows"),
    ("corr", "master"): Command(CommandSchema({"omega": None, "l": None, "E": None}, ("ho",), "ho",
                                              {"x_min": 0.5, "x_max": 4.0, "n_points": 40},
                                              {"t0": 0.0, "t1": math.pi, "dt": math.pi / 40},
                                              tolerances={"master": 1e-8}), run_corr_master, "master PDE residual"),
    ("corr", "solve-b2"): Command(CommandSchema({"omega": None, "l": None, "E": None, "u0": None, "sign": None},
                                                ("ho",), "ho", {"x_min": 0.6, "x_max": 2.2, "n_points": 80},
                                                tolerances={"b2": 1e-7}, integer_params=("sign",)),
                                  run_corr_solve_b2, "integrate the classical quadrature for b2"),
    ("lax", "zcc"): Command(CommandSchema(dict(LAX_PARAMS), tuple(LAX_DEFAULTS), "piv",
                                          {"x_min": None, "x_max": None, "n_points": 40},
                                          {"t0": None, "t1": None, "dt": None}, tolerances={"zcc": None}),
                            run_lax_zcc, "zero-curvature residual along a trajectory", ("trajectory",)),
    ("lax", "integrate"): Command(CommandSchema(dict(LAX_PARAMS), tuple(LAX_DEFAULTS), "piv",
                                                {"x_min": None, "x_max": None, "n_points": 40},
                                                {"t0": None, "t1": None, "dt": None},
                                                tolerances={"newton": 1e-6}), run_lax_integrate,
                                  "RK4 Newton trajectory written as CSV"),
    ("lax", "assemble"): Command(CommandSchema({"omega": None, "l": None, "E": None}, ("ho",), "ho",
                                               {"x_min": 0.5, "x_max": 4.0, "n_points": 25},
                                               {"t0": 0.0, "t1": math.pi, "dt": math.pi / 20},
                                               tolerances={"assemble": 1e-8}), run_lax_assemble,
                                 "assembled pair against the catalog"),
    ("lsp", "two-term"): Command(CommandSchema({"n": None, "l": None, "omega": None}, ("ho",), "ho",
                                               {"x_min": 0.3, "x_max": 4.0, "n_points": 48},
                                               {"t0": 0.0, "t1": math.pi, "dt": math.pi / 39},
                                               tolerances={"constraint": 1e-8, "lsp": 1e-7, "coefficients": 1e-12},
                                               integer_params=("n",)), run_lsp_two_term, "two-term solution"),
    ("lsp", "constraint"): Command(CommandSchema({"n": None, "l": None, "omega": None, "stationary": None},
                                                 ("ho",), "ho", {"x_min": 0.3, "x_max": 4.0, "n_points": 48},
                                                 {"t0": 0.0, "t1": math.pi, "dt": math.pi / 39},
                                                 tolerances={"constraint": 1e-8}, integer_params=("n", "stationary")),
                                   run_lsp_constraint, "constraint residual along the trajectory"),
    ("lsp", "evolve"): Command(CommandSchema({"n": None, "l": None, "omega": None}, ("ho",), "ho",
                                             {"x_min": None, "x_max": None, "n_points": 1601},
                                             {"t0": 0.0, "t1": 1.0, "dt": 1e-3},
                                             tolerances={"phase": 1e-3, "norm_drift": 1e-10},
                                             integer_params=("n",)), run_lsp_evolve,
                               "Crank-Nicolson evolution of an eigenstate"),
}

GROUPS = ("poly", "susy", "corr", "lax", "lsp")


# ------------------------------------------------------------- argparse
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def _global_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="JSON config file")
    p.add_argument("--out", metavar="DIR", help="output directory")
    p.add_argument("--format", metavar="LIST", help="comma list from json,csv,svg")
    p.add_argument("--tol-override", metavar="NAME=VALUE", action="append", default=[],
                   help="override a named tolerance (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    root = _Parser(prog="cqlax", description="classical-quantum correspondence toolkit")
    groups = root.add_subparsers(dest="group", metavar="group", parser_class=_Parser)
    subs: dict[str, argparse._SubParsersAction] = {}
    for g in GROUPS:
        gp = groups.add_parser(g, help=f"{g} commands")
        subs[g] = gp.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    for (g, c), cmd in COMMANDS.items():
        p = subs[g].add_parser(c, help=cmd.help, description=cmd.help)
        _global_flags(p)
        sc = cmd.schema
        if sc.families:
            p.add_argument("--family", choices=sc.families)
        for k in sc.params:
            p.add_argument(_flag(k), dest=f"param__{k}", type=float, metavar="VALUE")
        if sc.grid is not None:
            p.add_argument("--x-min", dest="grid__x_min", type=float, metavar="X")
            p.add_argument("--x-max", dest="grid__x_max", type=float, metavar="X")
            p.add_argument("--n-points", dest="grid__n_points", type=int, metavar="N")
        if sc.time is not None:
            p.add_argument("--t0", dest="time__t0", type=float, metavar="T")
            p.add_argument("--t1", dest="time__t1", type=float, metavar="T")
            p.add_argument("--dt", dest="time__dt", type=float, metavar="DT")
        for o in cmd.options:
            p.add_argument(_flag(o), dest=f"opt__{o}", metavar="PATH")
    acc = groups.add_parser("acceptance", help="run the acceptance suite")
    _global_flags(acc)
    acc.add_argument("--criteria", metavar="LIST", help="comma list of criterion numbers (default: all)")
    return root


def _tol_overrides(items) -> dict:
    out = {}
    for it in items:
        name, sep, val = it.partition("=")
        if not sep or not name:
            raise UsageError(f"--tol-override expects NAME=VALUE, got {it!r}")
        try:
            out[name.strip()] = float(val)
        except ValueError:
            raise UsageError(f"--tol-override {name}: {val!r} is not a number") from None
    return out


def _flags(ns: argparse.Namespace) -> dict:
    d = vars(ns)
    sect = lambda pre: {k[len(pre):]: v for k, v in d.items() if k.startswith(pre)}  # noqa: E731
    return {"params": sect("param__"), "grid": sect("grid__"), "time": sect("time__"),
            "family": d.get("family"), "out": d.get("out"), "formats": d.get("format"),
            "tolerances": _tol_overrides(d.get("tol_override") or [])}


# ---------------------------------------------------------------- main
def _colour(text: str, ok: bool, stream) -> str:
    if os.environ.get("NO_COLOR") or not getattr(stream, "isatty", lambda: False)():
        return text
    return f"\033[{32 if ok else 31}m{text}\033[0m"


def execute(group: str, command: str, cfg: RunConfig, opts: dict) -> tuple[dict, Result]:
    cmd = COMMANDS[(group, command)]
    res = cmd.run(cfg, opts)
    checks = {}
    for name, (value, key) in res.checks.items():
        tol = cfg.tolerances[key]
        checks[name] = {"value": value, "tolerance": key, "tol": tol, "passed": bool(value < tol)}
    report = {
        "command": f"{group} {command}",
        "config": cfg.echo(),
        "results": res.results,
        "residual": res.residual,
        "checks": checks,
        "resolved": res.resolved,
        "passed": all(c["passed"] for c in checks.values()),
    }
    return report, res


def write_artifacts(cfg: RunConfig, stem: str, report: dict, res: Result) -> list[Path]:
    out = Path(cfg.out)
    paths = []
    if "json" in cfg.formats:
        paths.append(write_json(out / f"{stem}.json", report))
    if "csv" in cfg.formats and res.table is not None:
        paths.append(write_csv(out / f"{stem}.csv", res.table[0], res.table[1]))
    if "svg" in cfg.formats and res.plot is not None:
        paths.append(write_svg(out / f"{stem}.svg", *res.plot))
    return paths


def _run_acceptance(ns: argparse.Namespace) -> int:
    if ns.config:
        raise ConfigError("acceptance takes no config file")
    if ns.tol_override:
        raise ConfigError("acceptance tolerances are fixed")
    out = Path(ns.out or "cqlax-acceptance")
    nums = None
    if ns.criteria:
        try:
            nums = sorted({int(s) for s in ns.criteria.split(",") if s.strip()})
        except ValueError:
            raise UsageError(f"--criteria expects integers, got {ns.criteria!r}") from None
        bad = [k for k in nums if k not in acceptance.CRITERIA and k != 12]
        if bad:
            raise UsageError(f"unknown criterion {bad[0]}")
    echo = lambda s: print(_colour(s, s.startswith("[PASS]"), sys.stdout))  # noqa: E731
    outs = acceptance.run_all(out, echo) if nums is None else _subset(nums, out, echo)
    summary = {"criteria": {str(o.number): o.passed for o in outs}, "passed": all(o.passed for o in outs)}
    write_json(out / "summary.json", summary)
    return EXIT_PASS if summary["passed"] else EXIT_TOLERANCE


def _subset(nums, out, echo):
    base = [k for k in nums if k != 12]
    outs, walls = acceptance.run_criteria(base, out)
    if 12 in nums:
        t0 = time.perf_counter()
        det = acceptance.c12_determinism(outs, out)
        walls[12] = time.perf_counter() - t0
        write_json(out / acceptance.report_name(det), det.as_dict())
        outs.append(det)
    for o in outs:
        echo(f"[{'PASS' if o.passed else 'FAIL'}] criterion {o.number:2d}: {o.name} ({walls[o.number]:.2f} s)")
    return outs


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.group is None:
            parser.print_help(sys.stderr)
            return EXIT_ERROR
        if ns.group == "acceptance":
            return _run_acceptance(ns)
        if getattr(ns, "command", None) is None:
            raise UsageError(f"cqlax {ns.group}: a command is required")
        cmd = COMMANDS[(ns.group, ns.command)]
        cfg = load_config(f"{ns.group} {ns.command}", cmd.schema, ns.config, _flags(ns))
        opts = {o: getattr(ns, f"opt__{o}") for o in cmd.options}
        t0 = time.perf_counter()
        report, res = execute(ns.group, ns.command, cfg, opts)
        wall = time.perf_counter() - t0
        paths = write_artifacts(cfg, f"{ns.group}-{ns.command}", report, res)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_ERROR
    except (ConfigError, CqlaxError, ValueError, OSError) as e:
        print(f"cqlax: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    ok = report["passed"]
    for name, c in report["checks"].items():
        status = _colour("PASS" if c["passed"] else "FAIL", c["passed"], sys.stdout)
        print(f"{status} {name} = {c['value']:.3e} (tol {c['tol']:.1e})")
    for p in paths:
        print(f"wrote {p}")
    print(f"wall time {wall:.3f} s")
    return EXIT_PASS if ok else EXIT_TOLERANCE


if __name__ == "__main__":
    sys.exit(main())
