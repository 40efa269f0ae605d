"""Embedding of canonical moment sequences into a product of beta manifolds.

A mean value p in (0, 1) picks out the line beta = (1/p - 1) alpha of beta
laws with mean p.  Projecting fixed reference points B(m, m) onto the mean
lines of a canonical sequence (p_1, ..., p_n) gives a product-manifold point

    Phi(p_1, ..., p_n) = (proj(B(n, n); p_1), ..., proj(B(1, 1); p_n)),

and pulling the product distance back through Phi yields a dissimilarity
rho_n between moment sequences.  Centroids average the embedded points with
the product Frechet mean and read the mean parameters back off the lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .canonical import CanonicalSequence, MomentSequence, from_canonical, to_canonical
from .errors import ConvergenceError, DomainError
from .frechet import ProductPoint, product_frechet_mean
from .geodesy import log_map
from .metric import BetaPoint, metric_tensor

__all__ = [
    "MeanLine",
    "project_to_line",
    "phi_map",
    "rho_distance",
    "moment_centroid",
]


@dataclass(frozen=True)
class MeanLine:
    """The half-line of beta laws with fixed mean p: beta = (1/p - 1) alpha."""

    p: float

    def __post_init__(self):
        p = float(self.p)
        if not (math.isfinite(p) and 0.0 < p < 1.0):
            raise DomainError(f"mean must lie in (0, 1), got {self.p!r}")
        object.__setattr__(self, "p", p)

    @property
    def slope(self) -> float:
        return 1.0 / self.p - 1.0

    def point(self, log_alpha: float) -> BetaPoint:
        """Point of the line at alpha = exp(log_alpha)."""
        a = math.exp(log_alpha)
        return BetaPoint(a, self.slope * a)


def _line_residual(line: MeanLine, s: float, b: BetaPoint, warm: dict):
    """Normalised orthogonality defect h(s) at the line point x(s).

    h is the cosine between the line tangent and the geodesic direction from
    x(s) to b; the squared distance to b has derivative proportional to -h,
    so projections are roots of h.  Returns (h, distance, log vector).
    """
    x = line.point(s)
    v = log_map(x, b, warm.get("v"))
    warm["v"] = v
    g = metric_tensor(x)
    tangent = (x.alpha, x.beta)
    tnorm = g.norm(tangent)
    vnorm = g.norm((v.d_alpha, v.d_beta))
    # b within roundoff of x: the direction of v is noise (and exactly the
    # line direction when b sits on the line), but the distance minimum is
    # here, so report a clean zero crossing
    scale = 1.0 + max(abs(x.alpha), abs(x.beta))
    if max(abs(v.d_alpha), abs(v.d_beta)) <= 1e-11 * scale:
        return 0.0, vnorm, v
    h = g.inner(tangent, (v.d_alpha, v.d_beta)) / (tnorm * vnorm)
    return h, vnorm, v


def project_to_line(b: BetaPoint, line: MeanLine, tol: float = 1e-8) -> BetaPoint:
    """Closest point of the mean line to b in geodesic distance.

    Parameters
    ----------
    b : BetaPoint
        Point to project.
    line : MeanLine
        Target line.
    tol : float
        Bound on the final normalised orthogonality residual, in
        [1e-10, 1e-4].

    Notes
    -----
    The scalar search runs in s = ln(alpha) along the line.  Three
    overlapping windows are scanned for sign changes of the orthogonality
    defect, each root is polished with Brent's method, and the candidates
    must agree to 1e-6 in s; disagreement (several competing critical
    points) raises ConvergenceError rather than silently picking one.

    If b already lies on the line it is returned unchanged.
    """
    if not (1e-10 <= tol <= 1e-4):
        raise DomainError(f"tol must lie in [1e-10, 1e-4], got {tol!r}")
    if abs(b.beta - line.slope * b.alpha) <= 4e-16 * b.beta:
        return b
    warm: dict = {}
    s0 = math.log(line.p * (b.alpha + b.beta))

    def h_of(s: float) -> float:
        return _line_residual(line, s, b, warm)[0]

    roots = []
    for lo, hi in ((s0 - 2.5, s0 + 0.5), (s0 - 1.5, s0 + 1.5), (s0 - 0.5, s0 + 2.5)):
        roots.extend(_window_roots(h_of, lo, hi))
    if not roots:
        raise ConvergenceError(
            f"projection of ({b.alpha}, {b.beta}) onto the mean-{line.p} line "
            "found no critical point in the search range")
    if max(roots) - min(roots) > 1e-6:
        raise ConvergenceError(
            f"projection onto the mean-{line.p} line is ambiguous: candidate "
            f"points at s={sorted(roots)}")
    s_star = roots[len(roots) // 2]
    h, _, _ = _line_residual(line, s_star, b, warm)
    if abs(h) > tol:
        raise ConvergenceError(
            f"projection residual {abs(h):.3e} exceeds tol={tol:g}")
    return line.point(s_star)


def _window_roots(h_of, lo: float, hi: float, grid: int = 8, max_expand: int = 6):
    """Distance-minimising roots of h in [lo, hi], sliding the window while
    h is one-signed.

    h decreases through 0 at a local minimum of the distance (h > 0 means
    the foot lies at larger s), so only downward sign changes are polished
    with Brent; upward ones are local maxima.  Returns a list of roots,
    empty when no minimum shows up even after sliding.
    """
    for _ in range(max_expand):
        ss = [lo + (hi - lo) * i / grid for i in range(grid + 1)]
        hs = [h_of(s) for s in ss]
        roots = []
        for i in range(grid):
            if hs[i] == 0.0:
                roots.append(ss[i])
            elif hs[i] > 0.0 > hs[i + 1]:
                roots.append(brentq(h_of, ss[i], ss[i + 1], xtol=1e-12, rtol=8.9e-16))
        if roots:
            return roots
        # No minimum inside: slide the window toward where one must be.
        if hs[-1] > 0.0:
            lo, hi = hi, hi + (hi - lo)
        elif hs[0] < 0.0:
            lo, hi = lo - (hi - lo), lo
        else:
            return []
    return []


def phi_map(p: CanonicalSequence, tol: float = 1e-8) -> ProductPoint:
    """Embed a canonical sequence of length n into the n-fold product
    manifold: component k is the projection of B(n - k + 1, n - k + 1) onto
    the mean line of p_k.

    The all-halves sequence maps to the reference points themselves.
    """
    if not isinstance(p, CanonicalSequence):
        p = CanonicalSequence(tuple(p))
    n = len(p)
    if n == 0:
        raise DomainError("phi_map needs a non-empty canonical sequence")
    comps = []
    for k, pk in enumerate(p.values, start=1):
        m = float(n - k + 1)
        comps.append(project_to_line(BetaPoint(m, m), MeanLine(pk), tol=tol))
    return ProductPoint(tuple(comps))


def _product_distance(x: ProductPoint, y: ProductPoint) -> float:
    total = 0.0
    for a, b in zip(x.components, y.components):
        v = log_map(a, b)
        total += metric_tensor(a).inner((v.d_alpha, v.d_beta), (v.d_alpha, v.d_beta))
    return math.sqrt(total)


def rho_distance(c1: MomentSequence, c2: MomentSequence) -> float:
    """Dissimilarity between two moment sequences of equal length: the
    product geodesic distance between their embedded images."""
    if not isinstance(c1, MomentSequence):
        c1 = MomentSequence(tuple(c1))
    if not isinstance(c2, MomentSequence):
        c2 = MomentSequence(tuple(c2))
    if len(c1) != len(c2):
        raise DomainError(
            f"sequences must have equal length, got {len(c1)} and {len(c2)}")
    if len(c1) == 0:
        raise DomainError("rho_distance needs non-empty sequences")
    x = phi_map(to_canonical(c1))
    y = phi_map(to_canonical(c2))
    return _product_distance(x, y)


def moment_centroid(cs, tol: float = 1e-8) -> MomentSequence:
    """Centroid of several moment sequences through the embedding.

    Maps every sequence into the product manifold, takes the product Frechet
    mean there, reads the mean parameter of each averaged component back off
    its line, and expands those canonical coordinates into moments again.
    """
    seqs = [c if isinstance(c, MomentSequence) else MomentSequence(tuple(c))
            for c in cs]
    if not seqs:
        raise DomainError("moment_centroid needs at least one sequence")
    n = len(seqs[0])
    if n == 0 or any(len(c) != n for c in seqs):
        raise DomainError("sequences must be non-empty and of equal length")
    images = [phi_map(to_canonical(c)) for c in seqs]
    mean_tol = min(1e-3, max(1e-10, 0.1 * tol))
    center = product_frechet_mean(images, tol=mean_tol)
    p_bar = [comp.mean() for comp in center.components]
    return from_canonical(CanonicalSequence(tuple(p_bar)))
