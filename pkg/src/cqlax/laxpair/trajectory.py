"""Classical Newton trajectories for the catalog families and their potentials."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import DomainError, DomainExit, FamilyMismatch, TrajectoryBlowup, WindowError

FAMILY_ALIASES = {
    "ho": "ho", "ho_osc": "ho", "harmonic": "ho",
    "piv": "piv", "painleveiv": "piv", "painleve_iv": "piv",
    "pv": "pv", "painlevev": "pv", "painleve_v": "pv",
}
FAMILY_PARAMS = {"ho": ("omega", "l"), "piv": ("alpha", "beta"), "pv": ("sigma", "xi", "zeta")}


def canonical_family(name: str) -> str:
    key = name.lower().replace("-", "_")
    if key not in FAMILY_ALIASES:
        raise FamilyMismatch(f"unknown family {name!r}")
    return FAMILY_ALIASES[key]


def _check_params(family: str, params: dict) -> dict:
    want = FAMILY_PARAMS[family]
    extra = set(params) - set(want)
    missing = set(want) - set(params)
    if extra or missing:
        raise ValueError(f"{family} needs parameters {want}; extra={sorted(extra)} missing={sorted(missing)}")
    return {k: float(params[k]) for k in want}


# ------------------------------------------------------------ potentials
@dataclass(frozen=True)
class Potential:
    """V(q, t) for one family written through its shift-sensitive coefficients.

    ``coeffs`` holds the coefficients that the quantum correction moves:
    ``L`` (centrifugal l^2) for ho, ``beta`` for piv, ``A = 4 zeta^2`` and
    ``B = 4 (xi + sigma)^2`` for pv.
    """

    family: str
    params: dict
    coeffs: dict

    def __call__(self, q, t=0.0):
        q = np.asarray(q, float)
        t = np.asarray(t, float)
        p, c = self.params, self.coeffs
        if self.family == "ho":
            return 0.5 * p["omega"] ** 2 * q * q + c["L"] / (2 * q * q)
        if self.family == "piv":
            return -q ** 6 / 8 - t * q ** 4 / 2 - (t * t - p["alpha"]) * q * q / 2 + c["beta"] / (4 * q * q)
        s = p["sigma"]
        return (c["A"] / (2 * np.cosh(q) ** 2) - c["B"] / (2 * np.sinh(q) ** 2)
                - np.exp(4 * t) / 16 * np.cosh(4 * q) + (s - 0.5) * np.exp(2 * t) * np.cosh(2 * q))

    def dq(self, q, t=0.0):
        q = np.asarray(q, float)
        t = np.asarray(t, float)
        p, c = self.params, self.coeffs
        if self.family == "ho":
            return p["omega"] ** 2 * q - c["L"] / q ** 3
        if self.family == "piv":
            return -0.75 * q ** 5 - 2 * t * q ** 3 - (t * t - p["alpha"]) * q - c["beta"] / (2 * q ** 3)
        s = p["sigma"]
        return (-c["A"] * np.sinh(q) / np.cosh(q) ** 3 + c["B"] * np.cosh(q) / np.sinh(q) ** 3
                - np.exp(4 * t) / 4 * np.sinh(4 * q) + 2 * (s - 0.5) * np.exp(2 * t) * np.sinh(2 * q))

    @property
    def time_dependent(self) -> bool:
        return self.family != "ho"

    @property
    def centrifugal(self) -> bool:
        if self.family == "ho":
            return self.coeffs["L"] != 0
        if self.family == "piv":
            return self.coeffs["beta"] != 0
        return True


def _classical_coeffs(family: str, p: dict) -> dict:
    if family == "ho":
        return {"L": p["l"] ** 2}
    if family == "piv":
        return {"beta": p["beta"]}
    return {"A": 4 * p["zeta"] ** 2, "B": 4 * (p["xi"] + p["sigma"]) ** 2}


_SHIFTS = {
    "ho": {"L": -0.25},
    "piv": {"beta": 0.5},
    "pv": {"A": -0.25, "B": -0.25},
}


def classical_potential(family: str, params: dict) -> Potential:
    family = canonical_family(family)
    p = _check_params(family, params)
    return Potential(family, p, _classical_coeffs(family, p))


def quantum_shift(family: str) -> Callable[[dict], dict]:
    """Map from classical to quantum potential coefficients for ``family``."""
    shift = _SHIFTS[canonical_family(family)]
    return lambda coeffs: {k: v + shift.get(k, 0.0) for k, v in coeffs.items()}


def quantum_potential(family: str, params: dict) -> Potential:
    vc = classical_potential(family, params)
    return Potential(vc.family, vc.params, quantum_shift(vc.family)(vc.coeffs))


# ----------------------------------------------------------- trajectory
_Q = np.array([  # quintic Hermite basis, monomial coefficients s^0..s^5
    [1, 0, 0, -10, 15, -6],
    [0, 1, 0, -6, 8, -3],
    [0, 0, 0.5, -1.5, 1.5, -0.5],
    [0, 0, 0, 10, -15, 6],
    [0, 0, 0, -4, 7, -3],
    [0, 0, 0, 0.5, -1, 0.5],
])
_DQ = _Q[:, 1:] * np.arange(1, 6)


@dataclass
class Trajectory:
    """Samples (t_k, u_k, udot_k) of a Newton trajectory.

    ``convention`` is ``"explicit"`` when E is the conserved value of
    udot^2/2 + V_c and ``"absorbed"`` when the energy is folded into V_c
    (E = 0).  Between samples :meth:`state` uses quintic Hermite
    interpolation on (u, udot, uddot); ``exact`` replaces it when a closed
    form exists.
    """

    family: str
    params: dict
    t: np.ndarray
    u: np.ndarray
    udot: np.ndarray
    E: float
    convention: str = "explicit"
    accel: np.ndarray | None = None
    exact: Callable | None = field(default=None, repr=False)

    @property
    def window(self) -> tuple[float, float]:
        return float(self.t[0]), float(self.t[-1])

    def potential(self) -> Potential:
        return classical_potential(self.family, self.params)

    def state(self, t):
        t = np.asarray(t, float)
        lo, hi = self.window
        tol = 1e-12 * max(1.0, abs(hi))
        if np.any(t < lo - tol) or np.any(t > hi + tol):
            raise WindowError(f"requested times outside trajectory support [{lo}, {hi}]")
        if self.exact is not None:
            return self.exact(t)
        if self.accel is None:
            raise ValueError("interpolation needs sampled accelerations")
        k = np.clip(np.searchsorted(self.t, t, side="right") - 1, 0, len(self.t) - 2)
        h = self.t[k + 1] - self.t[k]
        s = (t - self.t[k]) / h
        powers = np.stack([s ** j for j in range(6)])
        dpowers = np.stack([s ** j for j in range(5)])
        basis = np.tensordot(_Q, powers, axes=(1, 0))
        dbasis = np.tensordot(_DQ, dpowers, axes=(1, 0)) / h
        nodes = [self.u[k], h * self.udot[k], h * h * self.accel[k],
                 self.u[k + 1], h * self.udot[k + 1], h * h * self.accel[k + 1]]
        u = sum(b * n for b, n in zip(basis, nodes))
        ud = sum(b * n for b, n in zip(dbasis, nodes))
        return u, ud

    def energy(self) -> np.ndarray:
        return 0.5 * self.udot ** 2 + self.potential()(self.u, self.t)

    def energy_drift(self) -> float:
        return float(np.max(np.abs(self.energy() - self.E)))

    def newton_residual(self) -> float:
        """max |uddot + dV_c/du| with uddot from the five-point second difference of the samples."""
        h = np.diff(self.t)
        if not np.allclose(h, h[0], rtol=1e-9):
            raise ValueError("newton_residual needs uniform samples")
        u = self.u
        udd = (-u[4:] + 16 * u[3:-1] - 30 * u[2:-2] + 16 * u[1:-3] - u[:-4]) / (12 * h[0] ** 2)
        return float(np.max(np.abs(udd + self.potential().dq(u[2:-2], self.t[2:-2]))))

    def scaled(self, factor: float) -> "Trajectory":
        """(u, udot) -> factor (u, udot); no longer a Newton solution unless factor = 1."""
        ex = None
        if self.exact is not None:
            base = self.exact
            ex = lambda t: tuple(factor * v for v in base(t))  # noqa: E731
        acc = None if self.accel is None else factor * self.accel
        return Trajectory(self.family, dict(self.params), self.t, factor * self.u, factor * self.udot,
                          self.E, self.convention, acc, ex)


def _rk4_leg(V: Potential, t0: float, u0: float, v0: float, t1: float, step: float, bound: float):
    n = max(1, int(math.ceil(abs(t1 - t0) / step - 1e-9)))
    h = (t1 - t0) / n
    ts = t0 + h * np.arange(n + 1)
    us = np.empty(n + 1)
    vs = np.empty(n + 1)
    us[0], vs[0] = u0, v0

    def f(t, u, v):
        return v, -float(V.dq(u, t))

    u, v = float(u0), float(v0)
    for i in range(n):
        t = ts[i]
        k1 = f(t, u, v)
        k2 = f(t + h / 2, u + h / 2 * k1[0], v + h / 2 * k1[1])
        k3 = f(t + h / 2, u + h / 2 * k2[0], v + h / 2 * k2[1])
        k4 = f(t + h, u + h * k3[0], v + h * k3[1])
        u += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        v += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        if not (math.isfinite(u) and math.isfinite(v)) or abs(u) > bound or abs(v) > bound:
            raise TrajectoryBlowup(f"trajectory left |u|,|udot| <= {bound} near t = {ts[i + 1]:.6g}")
        if V.centrifugal and u <= 0:
            raise DomainExit(f"u reached the singular point near t = {ts[i + 1]:.6g}")
        us[i + 1], vs[i + 1] = u, v
    return ts, us, vs


def integrate_newton(family: str, params: dict, u0: float, v0: float, t_span: tuple[float, float],
                     step: float, bound: float = 1e6, t_initial: float | None = None) -> Trajectory:
    """Fixed-step classic RK4 for uddot = -dV_c/du.

    The initial data sit at ``t_initial`` (default ``t_span[0]``); when it
    lies inside the span the integration runs both ways from there.  Each
    leg shrinks the step so that it divides the leg length.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    V = classical_potential(family, params)
    lo, hi = map(float, t_span)
    if hi <= lo:
        raise ValueError("t_span must be increasing")
    ti = lo if t_initial is None else float(t_initial)
    if not lo <= ti <= hi:
        raise ValueError("t_initial must lie inside t_span")
    if V.centrifugal and u0 <= 0:
        raise DomainExit("u0 must be positive for a centrifugal potential")
    parts_t, parts_u, parts_v = [], [], []
    if ti > lo:
        ts, us, vs = _rk4_leg(V, ti, u0, v0, lo, step, bound)
        parts_t.append(ts[::-1])
        parts_u.append(us[::-1])
        parts_v.append(vs[::-1])
    if ti < hi:
        ts, us, vs = _rk4_leg(V, ti, u0, v0, hi, step, bound)
        skip = 1 if parts_t else 0
        parts_t.append(ts[skip:])
        parts_u.append(us[skip:])
        parts_v.append(vs[skip:])
    ts, us, vs = (np.concatenate(p) for p in (parts_t, parts_u, parts_v))
    acc = -V.dq(us, ts)
    E = 0.5 * v0 ** 2 + float(V(u0, ti))
    return Trajectory(V.family, V.params, ts, us, vs, E, "explicit", acc)


def ho_trajectory_exact(E: float, l: float, omega: float, t_grid) -> Trajectory:
    """u(t) = sqrt(E/omega^2 - sqrt(E^2 - l^2 omega^2)/omega^2 sin 2 omega t)."""
    if omega <= 0:
        raise DomainError("omega must be positive")
    disc = E * E - l * l * omega * omega
    if E < l * omega or disc < 0:
        raise DomainError(f"need E >= l omega, got E={E}, l omega={l * omega}")
    root = math.sqrt(disc)

    def exact(t):
        t = np.asarray(t, float)
        u = np.sqrt(E / omega ** 2 - root / omega ** 2 * np.sin(2 * omega * t))
        with np.errstate(divide="ignore", invalid="ignore"):
            ud = np.where(root == 0.0, 0.0, -root / omega * np.cos(2 * omega * t) / u)
        return u, ud

    t = np.asarray(t_grid, float)
    u, ud = exact(t)
    params = {"omega": float(omega), "l": float(l)}
    acc = -classical_potential("ho", params).dq(u)
    return Trajectory("ho", params, t, u, ud, float(E), "explicit", acc, exact)
