"""Dense GF(2) linear algebra on explicit 0/1 arrays.

Vectors and matrices are immutable wrappers around ``uint8`` numpy arrays
holding one symbol per entry.  The external text form used by tests and the
CLI is a string of ``'0'``/``'1'`` characters with index 0 leftmost.

Row reduction always pivots on the leftmost available column and the topmost
unused row, so reduced forms (and everything derived from them, such as
nullspace bases and coset leaders) are bit-exact across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameterError

__all__ = [
    "AffineSolution",
    "AffineSolver",
    "BitMatrix",
    "BitVector",
    "add",
    "concat",
    "hamming_distance",
    "matvec",
    "rank",
    "solve_affine",
    "vstack",
    "weight",
]

_ONE = np.uint8(1)


def _to_bit_array(data, ndim: int) -> np.ndarray:
    if not isinstance(data, np.ndarray):
        data = list(data)
    try:
        arr = np.asarray(data, dtype=np.uint8)
    except (TypeError, ValueError) as exc:
        raise InvalidParameterError(f"cannot interpret {data!r} as 0/1 symbols") from exc
    if arr.ndim != ndim:
        raise InvalidParameterError(
            f"expected a {ndim}-dimensional bit array, got shape {arr.shape}"
        )
    if arr.size and int(arr.max()) > 1:
        raise InvalidParameterError("bit entries must be 0 or 1")
    return arr


class BitVector:
    """Immutable vector over GF(2)."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Iterable[int]):
        arr = _to_bit_array(bits, 1).copy()
        arr.setflags(write=False)
        self._bits = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "BitVector":
        # Internal fast path: arr must be a fresh 1-D uint8 array of 0/1.
        v = cls.__new__(cls)
        arr.setflags(write=False)
        v._bits = arr
        return v

    @classmethod
    def from01(cls, text: str) -> "BitVector":
        if not set(text) <= {"0", "1"}:
            raise InvalidParameterError("vector literals may contain only '0' and '1'")
        return cls._wrap(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))

    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        if n < 0:
            raise InvalidParameterError("length must be non-negative")
        return cls._wrap(np.zeros(n, dtype=np.uint8))

    @property
    def array(self) -> np.ndarray:
        """Read-only uint8 view of the symbols."""
        return self._bits

    def to01(self) -> str:
        return (self._bits + np.uint8(ord("0"))).tobytes().decode("ascii")

    def weight(self) -> int:
        return int(self._bits.sum())

    def __len__(self) -> int:
        return self._bits.shape[0]

    def __getitem__(self, index: int) -> int:
        return int(self._bits[index])

    def __iter__(self):
        return iter(int(b) for b in self._bits)

    def __xor__(self, other: "BitVector") -> "BitVector":
        if not isinstance(other, BitVector):
            return NotImplemented
        if self._bits.shape != other._bits.shape:
            raise InvalidParameterError(
                f"length mismatch: {len(self)} vs {len(other)}"
            )
        return BitVector._wrap(self._bits ^ other._bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self._bits.shape == other._bits.shape and bool(
            np.array_equal(self._bits, other._bits)
        )

    def __hash__(self) -> int:
        return hash((self._bits.shape[0], self._bits.tobytes()))

    def __repr__(self) -> str:
        return f"BitVector({self.to01()!r})"


class BitMatrix:
    """Immutable row-major matrix over GF(2)."""

    __slots__ = ("_a",)

    def __init__(self, rows: Sequence[Sequence[int]]):
        arr = _to_bit_array(rows, 2).copy()
        arr.setflags(write=False)
        self._a = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "BitMatrix":
        m = cls.__new__(cls)
        arr.setflags(write=False)
        m._a = arr
        return m

    @classmethod
    def from01(cls, rows: Sequence[str]) -> "BitMatrix":
        return cls([list(BitVector.from01(r).array) for r in rows])

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls._wrap(np.eye(n, dtype=np.uint8))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        if rows < 0 or cols < 0:
            raise InvalidParameterError("matrix dimensions must be non-negative")
        return cls._wrap(np.zeros((rows, cols), dtype=np.uint8))

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    def row(self, i: int) -> BitVector:
        return BitVector._wrap(self._a[i].copy())

    def __matmul__(self, other):
        if isinstance(other, BitVector):
            if self.cols != len(other):
                raise InvalidParameterError(
                    f"dimension mismatch: {self.rows}x{self.cols} matrix times "
                    f"length-{len(other)} vector"
                )
            return BitVector._wrap((self._a @ other.array) & _ONE)
        if isinstance(other, BitMatrix):
            if self.cols != other.rows:
                raise InvalidParameterError(
                    f"dimension mismatch: {self.shape} times {other.shape}"
                )
            return BitMatrix._wrap((self._a @ other._a) & _ONE)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self._a.shape == other._a.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        return hash((self._a.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        body = ",".join((row + np.uint8(ord("0"))).tobytes().decode("ascii") for row in self._a)
        return f"BitMatrix([{body}])"


def matvec(m: BitMatrix, v: BitVector) -> BitVector:
    """Matrix-vector product over GF(2)."""
    return m @ v


def add(a: BitVector, b: BitVector) -> BitVector:
    """Coordinatewise sum (XOR) of two equal-length vectors."""
    if not isinstance(a, BitVector) or not isinstance(b, BitVector):
        raise InvalidParameterError("add expects two BitVector operands")
    return a ^ b


def weight(v: BitVector) -> int:
    """Hamming weight."""
    return v.weight()


def hamming_distance(a: BitVector, b: BitVector) -> int:
    return add(a, b).weight()


def concat(a: BitVector, b: BitVector) -> BitVector:
    return BitVector._wrap(np.concatenate([a.array, b.array]))


def vstack(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.cols != b.cols:
        raise InvalidParameterError(f"column mismatch: {a.cols} vs {b.cols}")
    return BitMatrix._wrap(np.concatenate([a.array, b.array], axis=0))


class AffineSolver:
    """Row reduction of a fixed matrix, reusable across many right-hand sides.

    Solves ``A z = b`` over GF(2).  The reduction ``R = T A`` is computed once
    (``R`` in reduced row echelon form, ``T`` invertible); each
    :meth:`particular_for` call then costs one small matrix-vector product.
    ``nullspace`` rows are a basis of ``ker A``, one per free column in
    ascending column order, so the full solution set of a consistent system
    is ``particular + span(nullspace)``.
    """

    def __init__(self, a: BitMatrix):
        self.matrix = a
        m, n = a.rows, a.cols
        aug = np.concatenate([a.array.copy(), np.eye(m, dtype=np.uint8)], axis=1)
        pivots: list[int] = []
        r = 0
        for c in range(n):
            if r >= m:
                break
            hits = np.nonzero(aug[r:, c])[0]
            if hits.size == 0:
                continue
            p = r + int(hits[0])
            if p != r:
                aug[[r, p]] = aug[[p, r]]
            others = np.nonzero(aug[:, c])[0]
            others = others[others != r]
            if others.size:
                aug[others] ^= aug[r]
            pivots.append(c)
            r += 1
        self.rank = r
        self.pivot_cols = tuple(pivots)
        pivot_set = set(pivots)
        self.free_cols = tuple(c for c in range(n) if c not in pivot_set)
        self.reduced = aug[:, :n]
        self.transform = aug[:, n:]
        self._pivot_idx = np.array(pivots, dtype=np.intp)
        basis = np.zeros((len(self.free_cols), n), dtype=np.uint8)
        for t, f in enumerate(self.free_cols):
            basis[t, f] = 1
            if pivots:
                basis[t, self._pivot_idx] = self.reduced[: self.rank, f]
        for arr in (self.reduced, self.transform, basis):
            arr.setflags(write=False)
        self.nullspace = basis

    def particular_for(self, b: np.ndarray) -> np.ndarray | None:
        """Particular solution of ``A z = b`` with free variables zero, or
        ``None`` when ``b`` is outside the column space."""
        c = (self.transform @ b) & _ONE
        if c[self.rank :].any():
            return None
        x = np.zeros(self.matrix.cols, dtype=np.uint8)
        if self.rank:
            x[self._pivot_idx] = c[: self.rank]
        return x


@dataclass(frozen=True)
class AffineSolution:
    """Solution set of a consistent affine system: ``particular`` plus the
    span of ``nullspace_basis``."""

    particular: BitVector
    nullspace_basis: tuple[BitVector, ...]


def rank(m: BitMatrix) -> int:
    """Rank over GF(2) via row reduction."""
    return AffineSolver(m).rank


def solve_affine(a: BitMatrix, b: BitVector) -> AffineSolution | None:
    """Solve ``A z = b`` over GF(2).

    Returns ``None`` when the system is infeasible (``b`` outside the column
    space); that is a normal outcome, not an error.
    """
    if a.rows != len(b):
        raise InvalidParameterError(
            f"right-hand side length {len(b)} does not match {a.rows} rows"
        )
    solver = AffineSolver(a)
    part = solver.particular_for(b.array)
    if part is None:
        return None
    basis = tuple(BitVector._wrap(row.copy()) for row in solver.nullspace)
    return AffineSolution(BitVector._wrap(part), basis)
