"""Scalar fields of one real variable with analytic derivatives, and residual records."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import jets
from .errors import DomainError
from .jets import Jet


class ScalarField:
    """A real (or complex) function of one variable carried as a jet-valued map.

    ``fn`` receives the independent-variable jet ``X`` and returns the jet of
    the function at the same order.  ``domain`` is the open interval on which
    evaluation is permitted.
    """

    def __init__(self, fn: Callable[[Jet], Jet], domain=(-np.inf, np.inf), name: str = ""):
        self.fn = fn
        self.domain = (float(domain[0]), float(domain[1]))
        self.name = name

    def __repr__(self):
        return f"ScalarField({self.name or '?'}, domain={self.domain})"

    def check_domain(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise DomainError(f"{self.name or 'field'}: non-finite argument")
        lo, hi = self.domain
        if np.any(x <= lo) or np.any(x >= hi):
            raise DomainError(f"{self.name or 'field'}: argument outside open domain ({lo}, {hi})")
        return x

    def jet(self, x, order: int) -> Jet:
        x = self.check_domain(x)
        out = self.fn(Jet.variable(x, order))
        if not isinstance(out, Jet):
            out = Jet.constant(out, Jet.variable(x, order))
        return out

    def __call__(self, x) -> np.ndarray:
        return self.jet(x, 0).value

    def deriv(self, x, k: int = 1) -> np.ndarray:
        return self.jet(x, k).deriv(k)

    def derivs(self, x, order: int) -> np.ndarray:
        """Array of shape (order+1, *x.shape) holding f, f', ..., f^(order)."""
        return self.jet(x, order).derivs()

    # composition ----------------------------------------------------------
    def derivative(self) -> "ScalarField":
        f = self

        def fn(X: Jet) -> Jet:
            return f.fn(Jet.variable(X.value, X.order + 1)).derivative()

        return ScalarField(fn, self.domain, f"d({self.name})")

    def _lift(self, other) -> Callable[[Jet], Jet]:
        if isinstance(other, ScalarField):
            return other.fn
        return lambda X: Jet.constant(other, X)

    def _domain_with(self, other):
        if isinstance(other, ScalarField):
            return (max(self.domain[0], other.domain[0]), min(self.domain[1], other.domain[1]))
        return self.domain

    def _binary(self, other, op, sym):
        g = self._lift(other)
        f = self.fn
        oname = other.name if isinstance(other, ScalarField) else repr(other)
        return ScalarField(lambda X: op(f(X), g(X)), self._domain_with(other), f"({self.name}{sym}{oname})")

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b, "+")

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b, "-")

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a, "-")

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b, "*")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b, "/")

    def __neg__(self):
        f = self.fn
        return ScalarField(lambda X: -f(X), self.domain, f"-{self.name}")


def constant(value: float, domain=(-np.inf, np.inf)) -> ScalarField:
    return ScalarField(lambda X: Jet.constant(value, X), domain, repr(value))


def identity(domain=(-np.inf, np.inf)) -> ScalarField:
    return ScalarField(lambda X: X, domain, "x")


def exp_of(f: ScalarField) -> ScalarField:
    return ScalarField(lambda X: jets.exp(f.fn(X)), f.domain, f"exp({f.name})")


@dataclass
class Residual:
    """Pointwise residual samples together with the summands that produced them.

    ``max_rel`` divides each residual sample by the largest summand magnitude
    at the same point, so tolerances stay meaningful when individual terms
    grow by orders of magnitude across the grid.
    """

    grid: np.ndarray
    values: np.ndarray
    terms: Sequence[np.ndarray] = field(default_factory=list)

    @property
    def scale(self) -> np.ndarray:
        if not len(self.terms):
            return np.ones_like(np.abs(self.values))
        mags = np.max(np.abs(np.stack([np.broadcast_to(t, np.shape(self.values)) for t in self.terms])), axis=0)
        return np.maximum(mags, np.finfo(float).tiny)

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if np.size(self.values) else 0.0

    @property
    def max_rel(self) -> float:
        if not np.size(self.values):
            return 0.0
        return float(np.max(np.abs(self.values) / self.scale))

    def summary(self) -> dict:
        return {"residual_max": self.max_abs, "residual_rel": self.max_rel}
