"""Seeded binary sources and dither streams.

All randomness flows through one self-contained 64-bit generator so that
results are bit-exact across platforms, languages, and parallel schedules.

Generator contract (all arithmetic mod 2**64):

* stream word ``i`` (zero-based) for seed ``s`` is ``mix64(s + (i+1)*GOLDEN)``
  where ``GOLDEN = 0x9E3779B97F4A7C15`` and ``mix64`` is
  ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
  z *= 0x94D049BB133111EB; z ^= z >> 31``;
* bit ``j`` of a word is ``(word >> (63 - j)) & 1`` (most significant first),
  and ``bits(n)`` consumes ``ceil(n/64)`` whole words;
* a uniform double is ``(word >> 11) * 2**-53``;
* sub-streams come from ``derive_seed(master, *indices)``, which folds each
  index in turn via ``s = mix64(((s ^ index) + GOLDEN) mod 2**64)``.

Because streams are counter-based, the sample for trial ``k`` is a pure
function of ``(master_seed, k)`` no matter how trials are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .gf2 import BitVector

__all__ = [
    "GOLDEN",
    "DitherPair",
    "DsbsSample",
    "SplitMix64",
    "derive_seed",
    "mix64",
    "sample_dsbs",
    "sample_dither",
]

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX_K1 = 0xBF58476D1CE4E5B9
_MIX_K2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """64-bit finalizer scrambling a counter word into an output word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX_K1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_K2) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, *indices: int) -> int:
    """Fold non-negative indices into a master seed, one sub-stream per path.

    Used for per-trial seeds (``derive_seed(master, k)``), per-axis sweep
    lanes (``derive_seed(master, axis_index, k)``), and reserved design lanes.
    """
    s = master & MASK64
    for idx in indices:
        if idx < 0:
            raise InvalidParameterError("derivation indices must be non-negative")
        s = mix64(((s ^ (idx & MASK64)) + GOLDEN) & MASK64)
    return s


class SplitMix64:
    """Counter-based word stream; see the module docstring for the contract."""

    __slots__ = ("_seed", "_counter")

    def __init__(self, seed: int):
        self._seed = np.uint64(seed & MASK64)
        self._counter = 0

    def next_words(self, count: int) -> np.ndarray:
        if count < 0:
            raise InvalidParameterError("word count must be non-negative")
        idx = np.arange(self._counter + 1, self._counter + count + 1, dtype=np.uint64)
        self._counter += count
        z = self._seed + idx * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX_K1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX_K2)
        return z ^ (z >> np.uint64(31))

    def bits(self, count: int) -> np.ndarray:
        """``count`` uniform bits as a uint8 array, MSB-first per word."""
        if count < 0:
            raise InvalidParameterError("bit count must be non-negative")
        if count == 0:
            return np.zeros(0, dtype=np.uint8)
        words = self.next_words((count + 63) // 64)
        return np.unpackbits(words.astype(">u8").view(np.uint8))[:count]

    def uniforms(self, count: int) -> np.ndarray:
        """``count`` uniform doubles in [0, 1), one word each."""
        return (self.next_words(count) >> np.uint64(11)).astype(np.float64) * (2.0**-53)

    def bernoulli(self, p: float, count: int) -> np.ndarray:
        if not 0.0 <= p <= 1.0:
            raise InvalidParameterError(f"p must lie in [0, 1], got {p!r}")
        return (self.uniforms(count) < p).astype(np.uint8)


@dataclass(frozen=True)
class DsbsSample:
    """One block from a doubly symmetric binary source: y = x + noise."""

    x: BitVector
    y: BitVector


@dataclass(frozen=True)
class DitherPair:
    """Two independent uniform dither sequences shared with the decoder."""

    d_x: BitVector
    d_y: BitVector


def sample_dsbs(p: float, n: int, seed: int) -> DsbsSample:
    """Length-n block of a doubly symmetric binary source with crossover p.

    X is uniform; Y = X + N with N i.i.d. Bernoulli(p).  Draw order is fixed:
    the X bits first, then one uniform double per noise symbol.
    """
    if not 0.0 <= p <= 0.5:
        raise InvalidParameterError(f"crossover must lie in [0, 1/2], got {p!r}")
    if n < 1:
        raise InvalidParameterError("block length must be at least 1")
    rng = SplitMix64(seed)
    x = rng.bits(n)
    noise = rng.bernoulli(p, n)
    return DsbsSample(BitVector._wrap(x), BitVector._wrap(x ^ noise))


def sample_dither(n: int, seed: int) -> DitherPair:
    """Two independent uniform length-n dithers from distinct sub-seeds."""
    if n < 1:
        raise InvalidParameterError("block length must be at least 1")
    d_x = SplitMix64(derive_seed(seed, 0)).bits(n)
    d_y = SplitMix64(derive_seed(seed, 1)).bits(n)
    return DitherPair(BitVector._wrap(d_x), BitVector._wrap(d_y))
