"""Scalar information measures and piecewise-linear convex envelopes.

Everything here is pure and immutable.  Curve building uses the vectorized
``*_many`` variants so that one bound curve is produced by one numeric code
path end to end.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import InvalidParameterError

__all__ = [
    "PiecewiseLinearCurve",
    "bconv",
    "bconv_many",
    "binary_entropy",
    "binary_entropy_many",
    "inverse_binary_entropy",
    "lower_convex_envelope",
]


def _check_unit(name: str, x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise InvalidParameterError(f"{name} must lie in [0, 1], got {x!r}")


def binary_entropy(x: float) -> float:
    """Entropy in bits of a Bernoulli(x) symbol, with 0*log 0 = 0."""
    _check_unit("x", x)
    if x == 0.0 or x == 1.0:
        return 0.0
    return -(x * math.log2(x)) - (1.0 - x) * math.log2(1.0 - x)


def binary_entropy_many(values: np.ndarray) -> np.ndarray:
    """Vectorized :func:`binary_entropy` on an array with entries in [0, 1]."""
    x = np.asarray(values, dtype=float)
    out = np.zeros_like(x)
    inner = (x > 0.0) & (x < 1.0)
    xi = x[inner]
    out[inner] = -(xi * np.log2(xi)) - (1.0 - xi) * np.log2(1.0 - xi)
    return out


def inverse_binary_entropy(y: float) -> float:
    """The unique x in [0, 1/2] with binary_entropy(x) = y.

    Bisection on [0, 1/2], where the entropy is strictly increasing; 200
    halvings leave an interval far below 1e-12.
    """
    _check_unit("y", y)
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bconv(a: float, b: float) -> float:
    """Binary convolution a(1-b) + (1-a)b: the crossover of two cascaded
    binary symmetric channels."""
    _check_unit("a", a)
    _check_unit("b", b)
    return a * (1.0 - b) + (1.0 - a) * b


def bconv_many(a, b) -> np.ndarray:
    """Vectorized :func:`bconv`; inputs must already lie in [0, 1]."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a * (1.0 - b) + (1.0 - a) * b


class PiecewiseLinearCurve:
    """Piecewise-linear function given by vertices with strictly increasing x.

    Evaluation interpolates linearly between vertices and rejects queries
    outside ``[x_first, x_last]``; the distortion domains in this package are
    bounded by construction, so extrapolation would only hide grid bugs.
    A single-vertex curve is allowed (degenerate domain ``[x, x]``).
    """

    __slots__ = ("_xs", "_ys")

    def __init__(self, points: Sequence[tuple[float, float]]):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
            raise InvalidParameterError("a curve needs a non-empty sequence of (x, y) pairs")
        self._init_arrays(pts[:, 0].copy(), pts[:, 1].copy())

    @classmethod
    def from_arrays(cls, xs: np.ndarray, ys: np.ndarray) -> "PiecewiseLinearCurve":
        c = cls.__new__(cls)
        c._init_arrays(np.asarray(xs, dtype=float).copy(), np.asarray(ys, dtype=float).copy())
        return c

    def _init_arrays(self, xs: np.ndarray, ys: np.ndarray) -> None:
        if xs.shape != ys.shape or xs.ndim != 1 or xs.size < 1:
            raise InvalidParameterError("curve arrays must be equal-length and 1-D")
        if xs.size > 1 and not np.all(np.diff(xs) > 0.0):
            raise InvalidParameterError("curve x values must be strictly increasing")
        xs.setflags(write=False)
        ys.setflags(write=False)
        self._xs = xs
        self._ys = ys

    @property
    def points(self) -> tuple[tuple[float, float], ...]:
        return tuple(zip(self._xs.tolist(), self._ys.tolist()))

    @property
    def xs(self) -> np.ndarray:
        return self._xs

    @property
    def ys(self) -> np.ndarray:
        return self._ys

    @property
    def domain(self) -> tuple[float, float]:
        return float(self._xs[0]), float(self._xs[-1])

    def __len__(self) -> int:
        return self._xs.shape[0]

    def _check_domain(self, lo: float, hi: float) -> None:
        if lo < self._xs[0] or hi > self._xs[-1]:
            raise InvalidParameterError(
                f"query outside curve domain [{self._xs[0]!r}, {self._xs[-1]!r}]"
            )

    def __call__(self, x: float) -> float:
        self._check_domain(x, x)
        return float(np.interp(x, self._xs, self._ys))

    def evaluate_many(self, xs) -> np.ndarray:
        q = np.asarray(xs, dtype=float)
        if q.size:
            self._check_domain(float(q.min()), float(q.max()))
        return np.interp(q, self._xs, self._ys)

    def __repr__(self) -> str:
        lo, hi = self.domain
        return f"PiecewiseLinearCurve({len(self)} vertices on [{lo!r}, {hi!r}])"


def _lower_hull_indices(xs: list[float], ys: list[float]) -> list[int]:
    kept: list[int] = []
    for i in range(len(xs)):
        xi = xs[i]
        yi = ys[i]
        while len(kept) >= 2:
            o = kept[-2]
            a = kept[-1]
            # Non-positive cross product: middle vertex at or above the chord.
            if (xs[a] - xs[o]) * (yi - ys[o]) - (ys[a] - ys[o]) * (xi - xs[o]) <= 0.0:
                kept.pop()
            else:
                break
        kept.append(i)
    return kept


def lower_convex_envelope(samples) -> PiecewiseLinearCurve:
    """Greatest convex function at or below the samples, on [min x, max x].

    Monotone-chain scan over the points sorted by x; the result's vertices
    are a subset of the input points.  Duplicate x values are rejected.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidParameterError("samples must be a sequence of (x, y) pairs")
    if arr.shape[0] < 2:
        raise InvalidParameterError("an envelope needs at least two samples")
    order = np.argsort(arr[:, 0], kind="stable")
    xs = arr[order, 0]
    ys = arr[order, 1]
    if np.any(np.diff(xs) <= 0.0):
        raise InvalidParameterError("sample x values must be distinct")
    idx = _lower_hull_indices(xs.tolist(), ys.tolist())
    return PiecewiseLinearCurve.from_arrays(xs[idx], ys[idx])
