"""2x2 matrix-valued fields of (x, t) and Lax-pair bundles."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..jets import Jet

# entries(X, t) -> [[e11, e12], [e21, e22]] with each e a Jet in x (or a plain array)
Entries = Callable[[Jet, np.ndarray], list]


def richardson_dt(fn: Callable[[np.ndarray], object], t, h: float):
    """(4 D(h/2) - D(h)) / 3 with D the centered difference; works on arrays or Jets."""
    def D(step):
        return (fn(t + step) - fn(t - step)) * (1.0 / (2 * step))
    return (D(h / 2) * 4.0 - D(h)) * (1.0 / 3.0)


class MatrixField:
    """A 2x2 complex matrix function of (x, t).

    Entries are produced as Jets in x, so the x-derivative is analytic.  The
    time dependence is opaque (trajectories, explicit t).
    """

    def __init__(self, entries: Entries, name: str = ""):
        self.entries = entries
        self.name = name

    def jets(self, x, t, order: int) -> list:
        x = np.asarray(x, float)
        t = np.broadcast_to(np.asarray(t, float), np.broadcast_shapes(np.shape(x), np.shape(t)))
        X = Jet.variable(np.broadcast_to(x, t.shape).copy(), order)
        rows = self.entries(X, t)
        return [[e if isinstance(e, Jet) else Jet.constant(np.asarray(e, complex), X) for e in row]
                for row in rows]

    def _stack(self, rows, k: int) -> np.ndarray:
        out = np.empty(rows[0][0].shape + (2, 2), complex)
        for i in range(2):
            for j in range(2):
                out[..., i, j] = rows[i][j].deriv(k)
        return out

    def __call__(self, x, t) -> np.ndarray:
        return self._stack(self.jets(x, t, 0), 0)

    def dx(self, x, t) -> np.ndarray:
        return self._stack(self.jets(x, t, 1), 1)

    def dt(self, x, t, h: float = 1e-3) -> np.ndarray:
        return richardson_dt(lambda s: self(x, s), np.asarray(t, float), h)

    @classmethod
    def constant(cls, M, name: str = "const") -> "MatrixField":
        M = np.asarray(M, complex)
        return cls(lambda X, t: [[M[0, 0] + 0 * X, M[0, 1] + 0 * X], [M[1, 0] + 0 * X, M[1, 1] + 0 * X]], name)


@dataclass
class LaxPairBundle:
    U: MatrixField
    V: MatrixField
    trajectory: object = None
    b: object = None
    tag: str = ""

    def locus_mask(self, x, t, margin: float = 0.1) -> np.ndarray:
        """True where |U_12| exceeds ``margin`` (the b = 0 locus is excluded)."""
        return np.abs(self.U(x, t)[..., 0, 1]) > margin
