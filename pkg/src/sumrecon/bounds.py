"""Rate-distortion bound curves and membership tests for two-terminal
modulo-two sum reconstruction of a doubly symmetric binary source.

Three bounds are computed on the equal-rate slice, each as rate
(bits/symbol) versus per-symbol Hamming distortion D on [0, p]:

* ``wz_outer`` - two parallel side-information (Wyner-Ziv) systems; the
  rate curve is the lower convex envelope of
  ``g(D) = H(p*D) - H(D)`` (``*`` binary convolution, ``H`` binary entropy).
* ``steinberg_inner`` - two common-reconstruction codes with test-channel
  parameter q, operating point ``(q*q, H(p*q) - H(q))``.
* ``lkm_inner`` - the dithered linear-code sum-computation scheme with
  quantizer parameter q, operating point ``(q*q, H(p*q*q) - H(q))``.

For each bound ``prehull`` is the single-scheme operating curve and
``hulled`` adds the zero-rate point (p, 0) and takes the lower convex
envelope, i.e. the time-sharing closure.  The full three-dimensional
rate-rate-distortion regions are exposed through :func:`membership`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import (
    PiecewiseLinearCurve,
    bconv,
    bconv_many,
    binary_entropy,
    binary_entropy_many,
    lower_convex_envelope,
)
from .errors import InvalidParameterError

__all__ = [
    "DEFAULT_GRID_SIZE",
    "BoundCurve",
    "Membership",
    "RegionTriple",
    "inverse_rate_cr",
    "lkm_inner_curve",
    "membership",
    "rate_cr",
    "rate_wz_curve",
    "steinberg_inner_curve",
    "wz_g",
    "wz_outer_curve",
]

DEFAULT_GRID_SIZE = 2001
_MAX_GRID_SIZE = 1_000_001
_MEMBERSHIP_TOL = 1e-9


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 0.5:
        raise InvalidParameterError(f"source crossover must lie in [0, 1/2], got {p!r}")


def _check_grid(grid_size: int) -> None:
    if not 3 <= grid_size <= _MAX_GRID_SIZE:
        raise InvalidParameterError(
            f"grid size must lie in [3, {_MAX_GRID_SIZE}], got {grid_size!r}"
        )


def _check_distortion(d: float) -> None:
    if not d >= 0.0:
        raise InvalidParameterError(f"distortion must be non-negative, got {d!r}")


def rate_cr(p: float, d: float) -> float:
    """Common-reconstruction rate H(p*d) - H(d) for d <= 1/2, else 0."""
    _check_p(p)
    _check_distortion(d)
    if d > 0.5:
        return 0.0
    return max(0.0, binary_entropy(bconv(p, d)) - binary_entropy(d))


def wz_g(p: float, d: float) -> float:
    """Pre-envelope side-information rate: H(p*d) - H(d) for d < p, else 0."""
    _check_p(p)
    _check_distortion(d)
    if d >= p:
        return 0.0
    return max(0.0, binary_entropy(bconv(p, d)) - binary_entropy(d))


def inverse_rate_cr(p: float, target: float) -> float:
    """Smallest d in [0, 1/2] with rate_cr(p, d) <= target.

    ``rate_cr(p, .)`` decreases from H(p) to 0 on [0, 1/2]; no closed-form
    inverse exists, so bisect (200 halvings, far below 1e-12).
    """
    _check_p(p)
    if not target >= 0.0:
        raise InvalidParameterError(f"rate must be non-negative, got {target!r}")
    if target >= rate_cr(p, 0.0):
        return 0.0
    if target <= 0.0:
        return 0.5
    lo, hi = 0.0, 0.5
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if rate_cr(p, mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class BoundCurve:
    """One bound on the equal-rate slice: operating curve and its hull."""

    bound_kind: str
    prehull: PiecewiseLinearCurve
    hulled: PiecewiseLinearCurve
    p: float


def _point_curve() -> PiecewiseLinearCurve:
    # Degenerate p = 0: zero rate suffices at zero distortion.
    return PiecewiseLinearCurve([(0.0, 0.0)])


def _hull_with_zero_rate_point(
    xs: np.ndarray, ys: np.ndarray, p: float
) -> PiecewiseLinearCurve:
    """Envelope of the operating points together with the zero-rate point
    (p, 0).  The curve's own node at D = p (if any) is dominated by (p, 0),
    so it is dropped to keep hull abscissae distinct."""
    keep = xs < p
    hx = np.append(xs[keep], p)
    hy = np.append(ys[keep], 0.0)
    return lower_convex_envelope(np.column_stack([hx, hy]))


def _distortion_grid(p: float, grid_size: int) -> np.ndarray:
    return p * (np.arange(grid_size) / (grid_size - 1))


def wz_outer_curve(p: float, grid_size: int = DEFAULT_GRID_SIZE) -> BoundCurve:
    """Outer bound from two parallel side-information systems."""
    _check_p(p)
    _check_grid(grid_size)
    if p == 0.0:
        pt = _point_curve()
        return BoundCurve("wz_outer", pt, pt, 0.0)
    d = _distortion_grid(p, grid_size)
    raw = binary_entropy_many(bconv_many(p, d)) - binary_entropy_many(d)
    ys = np.where(d < p, np.maximum(raw, 0.0), 0.0)
    prehull = PiecewiseLinearCurve.from_arrays(d, ys)
    hulled = lower_convex_envelope(np.column_stack([d, ys]))
    return BoundCurve("wz_outer", prehull, hulled, p)


def rate_wz_curve(p: float, grid_size: int = DEFAULT_GRID_SIZE) -> PiecewiseLinearCurve:
    """Side-information rate-distortion curve: lower convex envelope of
    ``wz_g`` sampled on a uniform grid over [0, p]."""
    return wz_outer_curve(p, grid_size).hulled


def _symmetric_q_max(p: float) -> float:
    # Solves q*q = 2q(1-q) = p on [0, 1/2].
    return 0.5 * (1.0 - math.sqrt(1.0 - 2.0 * p))


def _parametric_inner_curve(p: float, grid_size: int, kind: str) -> BoundCurve:
    _check_p(p)
    _check_grid(grid_size)
    if p == 0.0:
        pt = _point_curve()
        return BoundCurve(kind, pt, pt, 0.0)
    q = _symmetric_q_max(p) * (np.arange(grid_size) / (grid_size - 1))
    d = bconv_many(q, q)
    if kind == "steinberg_inner":
        raw = binary_entropy_many(bconv_many(p, q)) - binary_entropy_many(q)
    else:
        raw = binary_entropy_many(bconv_many(p, d)) - binary_entropy_many(q)
    ys = np.maximum(raw, 0.0)
    d = d.copy()
    d[-1] = p  # q_max maps to p exactly in exact arithmetic; pin the float
    if not np.all(np.diff(d) > 0.0):
        raise InvalidParameterError("grid too fine: distortion nodes collide for this p")
    prehull = PiecewiseLinearCurve.from_arrays(d, ys)
    hulled = _hull_with_zero_rate_point(d, ys, p)
    return BoundCurve(kind, prehull, hulled, p)


def steinberg_inner_curve(p: float, grid_size: int = DEFAULT_GRID_SIZE) -> BoundCurve:
    """Inner bound achieved with two common-reconstruction codes, mixed with
    the zero-rate point by time sharing."""
    return _parametric_inner_curve(p, grid_size, "steinberg_inner")


def lkm_inner_curve(p: float, grid_size: int = DEFAULT_GRID_SIZE) -> BoundCurve:
    """Inner bound achieved with the dithered linear-code sum scheme, mixed
    with the zero-rate point by time sharing."""
    return _parametric_inner_curve(p, grid_size, "lkm_inner")


@dataclass(frozen=True)
class RegionTriple:
    """A candidate operating point (rate 1, rate 2, distortion)."""

    r1: float
    r2: float
    d: float

    def validate(self) -> None:
        if not (self.r1 >= 0.0 and self.r2 >= 0.0):
            raise InvalidParameterError("rates must be non-negative")
        if not 0.0 <= self.d <= 0.5:
            raise InvalidParameterError("distortion must lie in [0, 1/2]")


@dataclass(frozen=True)
class Membership:
    """Which regions contain a given triple."""

    in_r_a: bool
    in_r_b: bool
    in_r_c: bool
    in_tse_outer: bool

    def to_dict(self) -> dict:
        return {
            "in_R_A": self.in_r_a,
            "in_R_B": self.in_r_b,
            "in_R_C": self.in_r_c,
            "in_TSE_outer": self.in_tse_outer,
        }


def membership(
    triple: RegionTriple, p: float, grid_size: int = DEFAULT_GRID_SIZE
) -> Membership:
    """Test a triple against the two inner regions, the zero-rate region,
    and the outer region.

    The region with two common-reconstruction links is decided through
    monotonicity: each rate pins the smallest achievable per-link distortion
    via :func:`inverse_rate_cr`, and the convolution of those two minima is
    the least reachable sum distortion.  The linear-scheme region scans its
    scalar parameter on a grid.  Comparisons carry a 1e-9 tolerance so that
    boundary points (the usual query) resolve stably.
    """
    _check_p(p)
    _check_grid(grid_size)
    triple.validate()
    tol = _MEMBERSHIP_TOL

    in_r_b = triple.d >= p

    d1 = inverse_rate_cr(p, triple.r1)
    d2 = inverse_rate_cr(p, triple.r2)
    in_r_a = triple.d >= bconv(d1, d2) - tol

    if triple.d >= 0.5:
        q_cap = 0.5
    else:
        q_cap = 0.5 * (1.0 - math.sqrt(1.0 - 2.0 * triple.d))
    q = q_cap * (np.arange(grid_size) / (grid_size - 1))
    rates = binary_entropy_many(bconv_many(p, bconv_many(q, q))) - binary_entropy_many(q)
    in_r_c = min(triple.r1, triple.r2) >= float(rates.min()) - tol

    if triple.d >= p:
        needed = 0.0
    else:
        needed = rate_wz_curve(p, grid_size)(triple.d)
    in_tse = triple.r1 >= needed - tol and triple.r2 >= needed - tol

    return Membership(in_r_a, in_r_b, in_r_c, in_tse)
