"""Shared test helpers: small exhaustive oracles kept independent of the
library code paths they check."""

import warnings

import numpy as np

warnings.filterwarnings("ignore", message=".*starlette.testclient.*")


def all_vectors(n: int) -> np.ndarray:
    """All 2**n binary vectors, index 0 as the most significant symbol."""
    return ((np.arange(1 << n)[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.uint8)


def lex_values(vectors: np.ndarray) -> np.ndarray:
    """Numeric value of each row read as a binary string, index 0 first."""
    n = vectors.shape[1]
    return vectors @ (1 << np.arange(n - 1, -1, -1, dtype=np.int64))


def brute_force_codebook(parity: np.ndarray) -> np.ndarray:
    """Every vector annihilated by the parity check, by scanning all 2**n."""
    vectors = all_vectors(parity.shape[1])
    return vectors[((vectors @ parity.T) & 1).sum(axis=1) == 0]


def nearest_codeword_oracle(parity: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Closest codeword to x; ties resolved toward the lexicographically
    smallest error pattern (the quantizer's documented tie-break)."""
    codebook = brute_force_codebook(parity)
    err = x[None, :] ^ codebook
    key = err.sum(axis=1, dtype=np.int64) * (1 << 40) + lex_values(err)
    return codebook[int(np.argmin(key))]


def min_weight_oracle(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Minimum-weight solution of A z = b by scanning all 2**n vectors."""
    vectors = all_vectors(a.shape[1])
    sat = np.all(((vectors @ a.T) & 1) == b, axis=1)
    if not sat.any():
        return None
    candidates = vectors[sat]
    key = candidates.sum(axis=1, dtype=np.int64) * (1 << 40) + lex_values(candidates)
    return candidates[int(np.argmin(key))]


def mixing_envelope_oracle(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Lower convex envelope at each sample x, as the minimum over all
    chords between sample pairs bracketing it (O(N^2) per query)."""
    count = len(xs)
    out = np.empty(count)
    for k in range(count):
        xi, yi = xs[: k + 1], ys[: k + 1]
        xj, yj = xs[k:], ys[k:]
        dx = xj[None, :] - xi[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (xs[k] - xi[:, None]) / np.where(dx == 0, 1.0, dx)
            chord = yi[:, None] + t * (yj[None, :] - yi[:, None])
        chord = np.where(dx > 0, chord, np.inf)
        out[k] = min(ys[k], float(chord.min()))
    return out
