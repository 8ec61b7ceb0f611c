"""Zero-curvature residual dU/dt - dV/dx + [U, V] on an (x, t) grid."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import WindowError
from .matrix import LaxPairBundle


@dataclass
class ZCCResult:
    t: np.ndarray
    x: np.ndarray
    norms: np.ndarray          # Frobenius norm, NaN where masked
    scale: np.ndarray          # max Frobenius norm of the three summands
    dt_fd: float
    extrapolated: bool

    @property
    def max_abs(self) -> float:
        return float(np.nanmax(self.norms))

    @property
    def max_rel(self) -> float:
        return float(np.nanmax(self.norms / np.maximum(self.scale, np.finfo(float).tiny)))

    def summary(self) -> dict:
        return {"residual_max": self.max_abs, "residual_rel": self.max_rel,
                "dt_fd": self.dt_fd, "extrapolated": self.extrapolated,
                "points": int(np.sum(np.isfinite(self.norms)))}


def _fro(M):
    return np.sqrt(np.sum(np.abs(M) ** 2, axis=(-2, -1)))


def zcc_matrix(pair: LaxPairBundle, x, t, dt_fd: float, richardson: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise ZCC matrix and the summand scale for broadcastable x, t."""
    U, V = pair.U, pair.V
    if richardson:
        Ut = U.dt(x, t, dt_fd)
    else:
        Ut = (U(x, t + dt_fd) - U(x, t - dt_fd)) / (2 * dt_fd)
    Vx = V.dx(x, t)
    Um, Vm = U(x, t), V(x, t)
    comm = Um @ Vm - Vm @ Um
    Z = Ut - Vx + comm
    scale = np.maximum(np.maximum(_fro(Ut), _fro(Vx)), _fro(comm))
    return Z, scale


def zcc_residual(pair: LaxPairBundle, x_grid, t_window, dt_fd: float = 1e-3, n_t: int = 21,
                 richardson: bool = True, locus_margin: float | None = None) -> ZCCResult:
    """Frobenius norm of the ZCC on x_grid x linspace(t_window, n_t).

    ``t_window`` may also be an explicit array of times.  When
    ``locus_margin`` is set, points with |U_12| below it are masked.
    """
    x = np.asarray(x_grid, float)
    tw = np.asarray(t_window, float)
    t = np.linspace(tw[0], tw[1], n_t) if tw.shape == (2,) else tw
    traj = pair.trajectory
    if traj is not None:
        lo, hi = traj.window
        if t.min() - dt_fd < lo or t.max() + dt_fd > hi:
            raise WindowError(f"t window [{t.min()}, {t.max()}] +- {dt_fd} exceeds trajectory support [{lo}, {hi}]")
    X, T = np.meshgrid(x, t)
    mask = np.ones(X.shape, bool)
    if locus_margin is not None:
        mask = pair.locus_mask(X, T, locus_margin)
    Xs, Ts = X[mask], T[mask]
    Z, scale = zcc_matrix(pair, Xs, Ts, dt_fd, richardson)
    norms = np.full(X.shape, np.nan)
    sc = np.full(X.shape, np.nan)
    norms[mask] = _fro(Z)
    sc[mask] = scale
    return ZCCResult(t, x, norms, sc, dt_fd, richardson)


def convergence_order(pair: LaxPairBundle, x_grid, t_window, dt_fd: float, n_t: int = 11,
                      locus_margin: float | None = None) -> dict:
    """Observed order of the raw centered-difference residual under dt_fd -> dt_fd/2."""
    r1 = zcc_residual(pair, x_grid, t_window, dt_fd, n_t, False, locus_margin).max_abs
    r2 = zcc_residual(pair, x_grid, t_window, dt_fd / 2, n_t, False, locus_margin).max_abs
    ex = zcc_residual(pair, x_grid, t_window, dt_fd, n_t, True, locus_margin).max_abs
    order = float(np.log2(r1 / r2)) if r2 > 0 else float("inf")
    return {"dt_fd": dt_fd, "raw": r1, "raw_half": r2, "order": order, "extrapolated": ex}
