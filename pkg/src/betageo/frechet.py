"""Frechet (Karcher) means on the beta manifold and on finite products of it.

The mean of points B_1..B_m with convex weights w_i minimises
F(B) = 1/2 sum_i w_i d(B, B_i)^2.  Its gradient at B is minus the weighted
sum of log_map(B, B_i), so the fixed-point flow

    B  <-  exp_B( tau * sum_i w_i log_map(B, B_i) )

descends F; tau starts at 1 and halves whenever the objective fails to
decrease.  Sectional curvature is negative, so the minimiser of this convex
objective is unique and the flow is a genuine gradient scheme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BoundaryEscapeError, ConvergenceError, DomainError
from .geodesy import TangentVector, exp_map, log_map
from .metric import BetaPoint, metric_tensor

__all__ = ["ProductPoint", "frechet_mean", "product_frechet_mean"]

_MAX_ITER = 200


@dataclass(frozen=True)
class ProductPoint:
    """A point of the n-fold product manifold: one BetaPoint per factor."""

    components: tuple[BetaPoint, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise DomainError("ProductPoint needs at least one component")
        if not all(isinstance(c, BetaPoint) for c in comps):
            raise DomainError("ProductPoint components must be BetaPoint instances")
        object.__setattr__(self, "components", comps)

    def __len__(self) -> int:
        return len(self.components)


def _check_weights(weights, m: int) -> np.ndarray:
    if weights is None:
        return np.full(m, 1.0 / m)
    w = np.asarray(weights, dtype=float)
    if w.shape != (m,):
        raise DomainError(f"expected {m} weights, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w < 0.0):
        raise DomainError("weights must be finite and nonnegative")
    if abs(w.sum() - 1.0) > 1e-9:
        raise DomainError(f"weights must sum to 1, got {w.sum()!r}")
    return w


def frechet_mean(points: Sequence[BetaPoint], weights=None, tol: float = 1e-9,
                 initial: BetaPoint | None = None) -> BetaPoint:
    """Weighted Frechet mean of points on the beta manifold.

    Parameters
    ----------
    points : sequence of BetaPoint
        Non-empty list of points to average.
    weights : sequence of float, optional
        Nonnegative weights summing to 1; uniform when omitted.
    tol : float
        Convergence threshold on the Fisher norm of the gradient
        sum_i w_i log_map(B, B_i); must lie in [1e-10, 1e-3].
    initial : BetaPoint, optional
        Starting point of the flow; defaults to the Euclidean parameter mean.

    Raises
    ------
    ConvergenceError
        If the flow has not met tol after its iteration budget.
    """
    pts = list(points)
    if not pts:
        raise DomainError("frechet_mean needs at least one point")
    if not (1e-10 <= tol <= 1e-3):
        raise DomainError(f"tol must lie in [1e-10, 1e-3], got {tol!r}")
    w = _check_weights(weights, len(pts))
    if len(pts) == 1:
        return pts[0]
    if initial is None:
        current = BetaPoint(
            float(np.dot(w, [p.alpha for p in pts])),
            float(np.dot(w, [p.beta for p in pts])))
    else:
        current = initial

    warm: list[TangentVector | None] = [None] * len(pts)

    def logs_and_objective(b: BetaPoint):
        g = metric_tensor(b)
        grad = np.zeros(2)
        obj = 0.0
        vs = []
        for i, target in enumerate(pts):
            v = log_map(b, target, warm[i])
            vs.append(v)
            grad += w[i] * np.array([v.d_alpha, v.d_beta])
            obj += 0.5 * w[i] * g.inner((v.d_alpha, v.d_beta), (v.d_alpha, v.d_beta))
        return vs, grad, obj, g

    vs, grad, obj, g = logs_and_objective(current)
    for i, v in enumerate(vs):
        warm[i] = v
    for _ in range(_MAX_ITER):
        gnorm = g.norm((grad[0], grad[1]))
        if gnorm <= tol:
            return current
        tau = 1.0
        moved = False
        for _ in range(30):
            try:
                step = TangentVector(current, tau * grad[0], tau * grad[1])
                candidate = exp_map(current, step, steps_hint=1).end
                vs_new, grad_new, obj_new, g_new = logs_and_objective(candidate)
            except (ConvergenceError, BoundaryEscapeError, DomainError):
                tau *= 0.5
                continue
            # Near the optimum the true decrease per step is of order
            # gnorm**2, which drops below the evaluation noise of the log
            # maps; a strict decrease test would stall there.
            slack = 1e-11 * (1.0 + abs(obj))
            if obj_new <= obj + slack or gnorm <= 10.0 * tol:
                current, vs, grad, obj, g = candidate, vs_new, grad_new, obj_new, g_new
                for i, v in enumerate(vs):
                    warm[i] = v
                moved = True
                break
            tau *= 0.5
        if not moved:
            raise ConvergenceError(
                f"Karcher flow stalled at ({current.alpha}, {current.beta}) "
                f"with gradient norm {gnorm:.3e}")
    raise ConvergenceError(
        f"Karcher flow did not reach tol={tol:g} within {_MAX_ITER} iterations")


def product_frechet_mean(points: Sequence[ProductPoint], tol: float = 1e-9,
                         weights=None) -> ProductPoint:
    """Frechet mean in the product manifold.

    The product metric is the sum of factor metrics, so the objective
    separates and the mean is the tuple of componentwise means; each factor
    is solved independently to tolerance tol.
    """
    pts = list(points)
    if not pts:
        raise DomainError("product_frechet_mean needs at least one point")
    n = len(pts[0])
    if any(len(pp) != n for pp in pts):
        raise DomainError("product points must share the same number of components")
    comps = []
    for k in range(n):
        comps.append(frechet_mean([pp.components[k] for pp in pts],
                                  weights=weights, tol=tol))
    return ProductPoint(tuple(comps))
