"""Linear quantizing codebooks over GF(2).

A code is the kernel of a parity-check matrix.  Building one enumerates its
complete coset-leader table: for every syndrome, the minimum-weight coset
member, ties broken toward the lexicographically smallest 0/1 string (index
0 most significant).  The table drives the nearest-codeword quantizer and
doubles as the quantizer's exact distortion profile.

Enumeration limits: 2**m syndromes with m <= 24, block length n <= 32.
These are desk-scale caps, not tuning knobs; larger requests raise
:class:`~sumrecon.errors.CapacityError`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import CapacityError, ConstructionError, InvalidParameterError
from .gf2 import AffineSolver, BitMatrix, BitVector
from .sources import SplitMix64

__all__ = [
    "DEFAULT_ENUMERATION_CAP",
    "MAX_BLOCKLENGTH",
    "MAX_SYNDROME_BITS",
    "CodeSpec",
    "LinearCode",
    "build_code",
    "code_info",
    "min_weight_in_affine",
    "min_weight_solve",
    "quantize",
]

DEFAULT_ENUMERATION_CAP = 1 << 16
MAX_SYNDROME_BITS = 24
MAX_BLOCKLENGTH = 32
_MAX_PATTERNS_PER_WEIGHT = 1 << 22
_HAMMING74_ROWS = ("0001111", "0110011", "1010101")

_KINDS = ("none", "repetition", "hamming74", "random")


@dataclass(frozen=True)
class CodeSpec:
    """Recipe for a parity-check matrix.

    ``n`` may be left unset and filled in later from an experiment's block
    length via :meth:`resolved`.  ``random`` draws i.i.d. uniform entries
    from the seeded stream (row-major) and redraws until full row rank.
    """

    kind: str
    n: int | None = None
    m: int | None = None
    seed: int | None = None

    def resolved(self, n: int | None = None) -> "CodeSpec":
        if self.kind not in _KINDS:
            raise InvalidParameterError(
                f"unknown code kind {self.kind!r}; expected one of {_KINDS}"
            )
        want_n = self.n if self.n is not None else n
        if self.kind == "hamming74":
            if want_n is None:
                want_n = 7
            if want_n != 7:
                raise InvalidParameterError("hamming74 is a length-7 code")
            return replace(self, n=7, m=3, seed=None)
        if want_n is None:
            raise InvalidParameterError(f"code kind {self.kind!r} needs a block length")
        if want_n < 1:
            raise InvalidParameterError("block length must be at least 1")
        if want_n > MAX_BLOCKLENGTH:
            raise CapacityError(
                f"block length {want_n} exceeds the exhaustive-search limit {MAX_BLOCKLENGTH}"
            )
        if self.kind == "none":
            return replace(self, n=want_n, m=0, seed=None)
        if self.kind == "repetition":
            if want_n < 2:
                raise InvalidParameterError("a repetition code needs length >= 2")
            return replace(self, n=want_n, m=want_n - 1)
        # random
        if self.m is None:
            raise InvalidParameterError("a random code needs the check count m")
        if not 1 <= self.m <= want_n:
            raise InvalidParameterError(f"need 1 <= m <= n, got m={self.m}, n={want_n}")
        return replace(self, n=want_n, seed=self.seed if self.seed is not None else 0)

    def describe(self) -> str:
        if self.kind == "repetition":
            return f"repetition({self.n})"
        if self.kind == "random":
            return f"random(m={self.m}, n={self.n}, seed={self.seed})"
        return self.kind


@dataclass(frozen=True)
class LinearCode:
    """Codebook ``{z : U z = 0}`` with its full coset-leader table.

    ``leaders[i]`` is the leader of the syndrome whose index is
    ``sum(s_j << j)``; ``generator`` rows span the codebook and are systematic
    on ``info_positions`` (the free columns of the reduced parity check), so
    codewords and information bits convert both ways by simple indexing.
    """

    spec: CodeSpec
    u: BitMatrix
    n: int
    m: int
    leaders: np.ndarray
    q_eff: float
    marginals: tuple[float, ...]
    covering_radius: int
    info_positions: tuple[int, ...]
    generator: np.ndarray
    _syndrome_places: np.ndarray

    def syndrome(self, x: BitVector) -> BitVector:
        return self.u @ x

    def syndrome_index(self, syndrome_bits: np.ndarray) -> int:
        return int(syndrome_bits @ self._syndrome_places)

    def coset_leader(self, syndrome: BitVector) -> BitVector:
        if len(syndrome) != self.m:
            raise InvalidParameterError(f"syndrome length must be {self.m}")
        return BitVector._wrap(self.leaders[self.syndrome_index(syndrome.array)].copy())

    def quantize(self, x: BitVector) -> BitVector:
        """Nearest codeword to x (leader tie-break), via one table lookup."""
        if len(x) != self.n:
            raise InvalidParameterError(f"input length must be {self.n}, got {len(x)}")
        s = (self.u.array @ x.array) & np.uint8(1)
        return BitVector._wrap(x.array ^ self.leaders[int(s @ self._syndrome_places)])

    def codeword_from_info(self, info: BitVector) -> BitVector:
        if len(info) != self.n - self.m:
            raise InvalidParameterError(f"information word length must be {self.n - self.m}")
        return BitVector._wrap((info.array @ self.generator) & np.uint8(1))

    def info_bits(self, codeword: BitVector) -> BitVector:
        if len(codeword) != self.n:
            raise InvalidParameterError(f"codeword length must be {self.n}")
        return BitVector._wrap(codeword.array[list(self.info_positions)].copy())


def quantize(code: LinearCode, x: BitVector) -> BitVector:
    """Minimum-distance quantization of x onto the codebook."""
    return code.quantize(x)


def _parity_check(spec: CodeSpec) -> BitMatrix:
    n, m = spec.n, spec.m
    if spec.kind == "none":
        return BitMatrix.zeros(0, n)
    if spec.kind == "hamming74":
        return BitMatrix.from01(_HAMMING74_ROWS)
    if spec.kind == "repetition":
        rows = np.zeros((m, n), dtype=np.uint8)
        rows[:, 0] = 1
        rows[np.arange(m), np.arange(1, n)] = 1
        return BitMatrix._wrap(rows)
    # random: redraw until full row rank
    rng = SplitMix64(spec.seed)
    for _ in range(256):
        candidate = BitMatrix._wrap(rng.bits(m * n).reshape(m, n))
        if AffineSolver(candidate).rank == m:
            return candidate
    raise ConstructionError(
        f"could not draw a full-rank {m}x{n} parity check from seed {spec.seed}"
    )


def _coset_leaders(u: np.ndarray) -> np.ndarray:
    """Minimum-weight representative per syndrome.

    Breadth-first by weight; within each weight class patterns are visited
    in lexicographic order of their 0/1 string, so the first pattern hitting
    a syndrome is that coset's canonical leader.  Stops as soon as every
    syndrome is covered, which is cheap for codes with small covering radius.
    """
    m, n = u.shape
    total = 1 << m
    leaders = np.zeros((total, n), dtype=np.uint8)
    assigned = np.zeros(total, dtype=bool)
    assigned[0] = True
    remaining = total - 1
    syn_places = 1 << np.arange(m, dtype=np.int64)
    lex_places = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    ut = u.T
    for w in range(1, n + 1):
        if remaining == 0:
            break
        n_patterns = math.comb(n, w)
        if n_patterns > _MAX_PATTERNS_PER_WEIGHT:
            raise CapacityError(
                f"coset search needs {n_patterns} weight-{w} patterns; "
                "the code's covering radius is too large for this block length"
            )
        positions = np.fromiter(
            itertools.chain.from_iterable(itertools.combinations(range(n), w)),
            dtype=np.intp,
            count=n_patterns * w,
        ).reshape(n_patterns, w)
        patterns = np.zeros((n_patterns, n), dtype=np.uint8)
        np.put_along_axis(patterns, positions, 1, axis=1)
        order = np.argsort(patterns @ lex_places, kind="stable")
        indices = (patterns @ ut & np.uint8(1)) @ syn_places
        for pos in order:
            i = int(indices[pos])
            if not assigned[i]:
                assigned[i] = True
                leaders[i] = patterns[pos]
                remaining -= 1
                if remaining == 0:
                    break
    if remaining:
        raise ConstructionError("parity check does not reach every syndrome")
    leaders.setflags(write=False)
    return leaders


def build_code(spec: CodeSpec) -> LinearCode:
    """Construct the code and its coset table; reports the exact quantizer
    statistics (per-symbol leader weight q_eff, marginals, covering radius)."""
    spec = spec.resolved()
    if spec.m > MAX_SYNDROME_BITS:
        raise CapacityError(
            f"m={spec.m} exceeds the coset-enumeration limit {MAX_SYNDROME_BITS}"
        )
    u = _parity_check(spec)
    solver = AffineSolver(u)
    if solver.rank != spec.m:
        raise ConstructionError(f"{spec.describe()} parity check is rank deficient")
    leaders = _coset_leaders(u.array)
    q_eff = float(leaders.mean()) if leaders.size else 0.0
    marginals = tuple(float(v) for v in leaders.mean(axis=0))
    covering_radius = int(leaders.sum(axis=1).max(initial=0))
    places = 1 << np.arange(spec.m, dtype=np.int64)
    places.setflags(write=False)
    return LinearCode(
        spec=spec,
        u=u,
        n=spec.n,
        m=spec.m,
        leaders=leaders,
        q_eff=q_eff,
        marginals=marginals,
        covering_radius=covering_radius,
        info_positions=solver.free_cols,
        generator=solver.nullspace,
        _syndrome_places=places,
    )


def code_info(code: LinearCode) -> dict:
    """Summary used by the ``code-info`` surface."""
    return {
        "kind": code.spec.describe(),
        "n": code.n,
        "m": code.m,
        "rate": code.m / code.n,
        "q_eff": code.q_eff,
        "per_symbol_marginals": list(code.marginals),
        "covering_radius": code.covering_radius,
    }


@lru_cache(maxsize=32)
def _coeff_table(dim: int) -> np.ndarray:
    rows = np.arange(1 << dim, dtype=np.int64)
    table = ((rows[:, None] >> np.arange(dim)) & 1).astype(np.uint8)
    table.setflags(write=False)
    return table


def _argmin_weight_lex(candidates: np.ndarray) -> int:
    weights = candidates.sum(axis=1, dtype=np.int64)
    best = np.flatnonzero(weights == weights.min())
    if best.size == 1:
        return int(best[0])
    sub = candidates[best]
    order = np.lexsort(sub[:, ::-1].T)  # primary key: leftmost symbol
    return int(best[order[0]])


def min_weight_in_affine(
    solver: AffineSolver, b: np.ndarray, enumeration_cap: int
) -> np.ndarray | None:
    """Minimum-weight solution of a pre-factored system, or None if infeasible."""
    dim = solver.nullspace.shape[0]
    if (1 << dim) > enumeration_cap:
        raise CapacityError(
            f"solution space has dimension {dim}; enumerating 2**{dim} points "
            f"exceeds the cap {enumeration_cap}"
        )
    particular = solver.particular_for(b)
    if particular is None:
        return None
    if dim == 0:
        return particular
    candidates = (_coeff_table(dim) @ solver.nullspace + particular) & np.uint8(1)
    return candidates[_argmin_weight_lex(candidates)]


def min_weight_solve(
    a: BitMatrix, b: BitVector, enumeration_cap: int = DEFAULT_ENUMERATION_CAP
) -> BitVector | None:
    """Minimum-weight z with A z = b, lexicographic tie-break; None if none exists."""
    if a.rows != len(b):
        raise InvalidParameterError(
            f"right-hand side length {len(b)} does not match {a.rows} rows"
        )
    result = min_weight_in_affine(AffineSolver(a), b.array, enumeration_cap)
    return None if result is None else BitVector._wrap(result.copy())
