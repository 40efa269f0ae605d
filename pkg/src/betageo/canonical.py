"""Canonical moment coordinates for measures on a bounded interval.

A moment sequence (c_1, ..., c_n) of a probability measure on [0, 1] lives in
the moment space M_n.  For interior sequences each c_k ranges over an open
interval (c_k^-, c_k^+) determined by the previous moments, and the canonical
coordinates p_k = (c_k - c_k^-) / (c_k^+ - c_k^-) map the interior of M_n
onto the open cube (0, 1)^n.  The range endpoints are roots of Hankel
determinants that are affine in the newest moment:

    c_k - c_k^- = H_lower(k) / H_lower(k-2),
    c_k^+ - c_k = H_upper(k) / H_upper(k-2).

Those determinants shrink geometrically with k and a floating LU factorisation
loses them to roundoff well before n = 8; since binary floats are exact
rationals, all determinants here are evaluated exactly over ``fractions``
and rounded once on output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, MomentBoundaryError

__all__ = [
    "MAX_MOMENTS",
    "MomentSequence",
    "CanonicalSequence",
    "HankelPair",
    "hankel",
    "moment_bounds",
    "to_canonical",
    "from_canonical",
    "jacobian_det_formula",
    "moments_from_samples",
]

# Cap on the number of moments handled; the affine map c -> p blows up
# conditioning roughly geometrically with the index, so longer sequences are
# numerically meaningless in double precision.
MAX_MOMENTS = 12

# An interval (c_k^-, c_k^+) at or below this width counts as the boundary
# of the moment space.
EPS_BOUNDARY = 1e-12

_ONE = Fraction(1)


def _det_fraction(rows: list[list[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free style Gaussian elimination with
    partial pivoting (pivoting only dodges exact zeros; there is no roundoff
    to manage)."""
    n = len(rows)
    if n == 0:
        return _ONE
    m = [row[:] for row in rows]
    det = _ONE
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if m[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]
            det = -det
        pivot = m[col][col]
        det *= pivot
        for r in range(col + 1, n):
            factor = m[r][col] / pivot
            if factor:
                for c in range(col + 1, n):
                    m[r][c] -= factor * m[col][c]
    return det


def _lower_det(cs: list[Fraction], k: int) -> Fraction:
    """H_lower(k) built from cs = [1, c_1, ..., c_k]."""
    if k < 0:
        return _ONE
    if k % 2 == 0:
        m = k // 2
        rows = [[cs[i + j] for j in range(m + 1)] for i in range(m + 1)]
    else:
        m = (k - 1) // 2
        rows = [[cs[i + j + 1] for j in range(m + 1)] for i in range(m + 1)]
    return _det_fraction(rows)


def _upper_det(cs: list[Fraction], k: int) -> Fraction:
    """H_upper(k) built from cs = [1, c_1, ..., c_k]."""
    if k < 0:
        return _ONE
    if k % 2 == 0:
        m = k // 2
        rows = [[cs[i + j + 1] - cs[i + j + 2] for j in range(m)]
                for i in range(m)]
    else:
        m = (k - 1) // 2
        rows = [[cs[i + j] - cs[i + j + 1] for j in range(m + 1)]
                for i in range(m + 1)]
    return _det_fraction(rows)


def _bounds_fraction(prefix: list[Fraction]) -> tuple[Fraction, Fraction]:
    """Exact open range of the next moment after the given prefix
    [1, c_1, ..., c_{n-1}].

    Both Hankel determinants of order n are affine in the corner entry c_n
    with slopes +H_lower(n-2) and -H_upper(n-2), so each endpoint is a ratio
    of determinants evaluated once at c_n = 0.
    """
    n = len(prefix)  # index of the moment being bounded
    cs0 = prefix + [Fraction(0)]
    lo_den = _lower_det(cs0, n - 2)
    up_den = _upper_det(cs0, n - 2)
    if lo_den <= 0 or up_den <= 0:
        raise MomentBoundaryError(
            f"degenerate prefix: order-{n - 2} Hankel determinants are not positive")
    lower = -_lower_det(cs0, n) / lo_den
    upper = _upper_det(cs0, n) / up_den
    return lower, upper


def _interior_walk(values: tuple[float, ...]):
    """Walk the sequence, producing exact bounds and canonical coordinates.

    Raises MomentBoundaryError if any moment leaves its open range or the
    range narrows to EPS_BOUNDARY.
    """
    cs: list[Fraction] = [_ONE]
    bounds: list[tuple[Fraction, Fraction]] = []
    canonical: list[Fraction] = []
    for k, c in enumerate(values, start=1):
        lower, upper = _bounds_fraction(cs)
        gap = upper - lower
        if float(gap) <= EPS_BOUNDARY:
            raise MomentBoundaryError(
                f"moment space collapsed at index {k}: range width {float(gap):.3e}")
        cf = Fraction(c)
        if not (lower < cf < upper):
            raise MomentBoundaryError(
                f"moment c_{k}={c!r} outside its open range "
                f"({float(lower):.17g}, {float(upper):.17g})")
        bounds.append((lower, upper))
        canonical.append((cf - lower) / gap)
        cs.append(cf)
    return cs, bounds, canonical


def _validate_values(values, name: str) -> tuple[float, ...]:
    vals = tuple(float(v) for v in values)
    if len(vals) > MAX_MOMENTS:
        raise DomainError(
            f"{name} supports at most {MAX_MOMENTS} entries, got {len(vals)}")
    for k, v in enumerate(vals, start=1):
        if not (math.isfinite(v) and 0.0 < v < 1.0):
            raise DomainError(f"{name} entry {k} must lie in (0, 1), got {v!r}")
    return vals


@dataclass(frozen=True)
class MomentSequence:
    """Power moments (c_1, ..., c_n) of a measure on [0, 1], strictly inside
    the moment space.  Construction validates interiority; an empty sequence
    is allowed and denotes the trivial prefix."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = _validate_values(self.values, "MomentSequence")
        object.__setattr__(self, "values", vals)
        cs, bounds, canonical = _interior_walk(vals)
        object.__setattr__(self, "_fractions", cs)
        object.__setattr__(self, "_bounds", bounds)
        object.__setattr__(self, "_canonical", canonical)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class CanonicalSequence:
    """Canonical coordinates (p_1, ..., p_n), each in the open unit interval."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = _validate_values(self.values, "CanonicalSequence")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class HankelPair:
    """The two Hankel determinants attached to index k of a sequence."""

    lower: float
    upper: float


def hankel(c: MomentSequence, k: int) -> HankelPair:
    """Hankel determinant pair of order k for the sequence c.

    For even k = 2m the lower determinant is det(c_{i+j}), i,j = 0..m, and
    the upper one det(c_{i+j+1} - c_{i+j+2}), i,j = 0..m-1; for odd k the
    patterns shift by one.  Index 0 gives (1, 1) by convention.

    Raises IndexError if k is negative or exceeds len(c).
    """
    if not isinstance(k, int) or isinstance(k, bool):
        raise DomainError(f"k must be an int, got {k!r}")
    if not isinstance(c, MomentSequence):
        c = MomentSequence(tuple(c))
    if k < 0 or k > len(c):
        raise IndexError(f"k must lie in [0, {len(c)}], got {k}")
    cs = c._fractions
    return HankelPair(lower=float(_lower_det(cs, k)), upper=float(_upper_det(cs, k)))


def moment_bounds(prefix: MomentSequence) -> tuple[float, float]:
    """Open range (c^-, c^+) available to the next moment after prefix.

    The empty prefix yields (0, 1).  Raises MomentBoundaryError if the range
    has collapsed below the boundary threshold.
    """
    lower, upper = _bounds_fraction(prefix._fractions)
    if float(upper - lower) <= EPS_BOUNDARY:
        raise MomentBoundaryError(
            f"next-moment range has width {float(upper - lower):.3e}; "
            "sequence is numerically on the moment space boundary")
    return float(lower), float(upper)


def to_canonical(c: MomentSequence) -> CanonicalSequence:
    """Canonical coordinates of a moment sequence.

    Interior validation already happens when c is constructed, so this is a
    read-off of the cached exact walk: p_k = (c_k - c_k^-) / (c_k^+ - c_k^-).
    """
    if not isinstance(c, MomentSequence):
        c = MomentSequence(tuple(c))
    return CanonicalSequence(tuple(float(p) for p in c._canonical))


def from_canonical(p: CanonicalSequence) -> MomentSequence:
    """Moment sequence with the given canonical coordinates.

    Builds moments recursively: each step computes the exact open range of
    the next moment from the prefix and places c_k = c_k^- + p_k (c_k^+ -
    c_k^-).
    """
    if not isinstance(p, CanonicalSequence):
        p = CanonicalSequence(tuple(p))
    cs: list[Fraction] = [_ONE]
    out: list[float] = []
    for k, pk in enumerate(p.values, start=1):
        lower, upper = _bounds_fraction(cs)
        gap = upper - lower
        if float(gap) <= EPS_BOUNDARY:
            raise MomentBoundaryError(
                f"moment space collapsed at index {k} while expanding "
                f"canonical coordinates")
        ck = lower + Fraction(pk) * gap
        cs.append(ck)
        out.append(float(ck))
    return MomentSequence(tuple(out))


def jacobian_det_formula(p: CanonicalSequence) -> float:
    """Jacobian determinant of the map p -> c in closed form:
    prod_{k=1}^{n-1} (p_k (1 - p_k))^(n-k).  A single coordinate gives 1."""
    if not isinstance(p, CanonicalSequence):
        p = CanonicalSequence(tuple(p))
    n = len(p)
    out = 1.0
    for k, pk in enumerate(p.values[:-1], start=1):
        out *= (pk * (1.0 - pk)) ** (n - k)
    return out


def moments_from_samples(samples, a: float, b: float, n: int) -> MomentSequence:
    """First n power moments of samples affinely rescaled from [a, b] to
    [0, 1].

    Raises DomainError for an invalid interval, sample outside it, or bad n;
    raises MomentBoundaryError when the empirical sequence is not strictly
    interior (for example when all samples coincide).
    """
    if not (isinstance(n, int) and not isinstance(n, bool)) or n < 1:
        raise DomainError(f"n must be a positive int, got {n!r}")
    if n > MAX_MOMENTS:
        raise DomainError(f"n must be <= {MAX_MOMENTS}, got {n}")
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise DomainError(f"interval must satisfy a < b, got [{a}, {b}]")
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise DomainError("samples must be non-empty")
    if not np.all(np.isfinite(x)):
        raise DomainError("samples must be finite")
    if np.any(x < a) or np.any(x > b):
        raise DomainError(f"samples must lie within [{a}, {b}]")
    y = (x - a) / (b - a)
    values = [float(np.mean(y ** k)) for k in range(1, n + 1)]
    for k, v in enumerate(values, start=1):
        if not (0.0 < v < 1.0):
            raise MomentBoundaryError(
                f"empirical moment c_{k}={v!r} is not interior; samples sit "
                "on the interval boundary")
    try:
        return MomentSequence(tuple(values))
    except MomentBoundaryError as exc:
        raise MomentBoundaryError(
            f"empirical moments are on the moment space boundary: {exc}") from exc
