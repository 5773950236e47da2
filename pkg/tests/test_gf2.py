import numpy as np
import pytest
from conftest import all_vectors, brute_force_codebook

from sumrecon.errors import InvalidParameterError
from sumrecon.gf2 import (
    BitMatrix,
    BitVector,
    add,
    concat,
    hamming_distance,
    matvec,
    rank,
    solve_affine,
    vstack,
    weight,
)

HAMMING74 = BitMatrix.from01(["0001111", "0110011", "1010101"])


def test_vector_round_trip_and_repr():
    v = BitVector.from01("01101")
    assert v.to01() == "01101"
    assert len(v) == 5
    assert v[1] == 1 and v[0] == 0
    assert repr(v) == "BitVector('01101')"


def test_vector_rejects_bad_input():
    with pytest.raises(InvalidParameterError):
        BitVector([0, 2, 1])
    with pytest.raises(InvalidParameterError):
        BitVector.from01("01x")
    with pytest.raises(InvalidParameterError):
        BitMatrix([[0, 1], [1]])


def test_vector_immutable():
    v = BitVector.from01("101")
    with pytest.raises(ValueError):
        v.array[0] = 0


def test_matvec_identity_is_identity():
    assert (BitMatrix.identity(3) @ BitVector.from01("101")).to01() == "101"


def test_matvec_zero_annihilates():
    assert (BitMatrix.zeros(2, 3) @ BitVector.from01("111")).to01() == "00"


def test_matvec_kills_every_hamming_codeword():
    codebook = brute_force_codebook(HAMMING74.array)
    assert codebook.shape == (16, 7)
    for word in codebook:
        assert matvec(HAMMING74, BitVector(word)).to01() == "000"


def test_matvec_dimension_mismatch():
    with pytest.raises(InvalidParameterError):
        matvec(BitMatrix.identity(3), BitVector.from01("1011"))


def test_add_self_inverse_and_weight():
    assert add(BitVector.from01("1010"), BitVector.from01("1010")).to01() == "0000"
    assert weight(BitVector.from01("0000")) == 0
    assert weight(add(BitVector.from01("1100"), BitVector.from01("0110"))) == 2
    with pytest.raises(InvalidParameterError):
        add(BitVector.from01("10"), BitVector.from01("101"))


def test_weight_of_sum_is_hamming_distance():
    rng = np.random.default_rng(1)
    for _ in range(50):
        n = int(rng.integers(1, 30))
        a = BitVector(rng.integers(0, 2, n))
        b = BitVector(rng.integers(0, 2, n))
        direct = int(np.sum(a.array != b.array))
        assert weight(add(a, b)) == direct == hamming_distance(a, b)


def test_rank_trivial():
    assert rank(BitMatrix.identity(4)) == 4
    assert rank(BitMatrix.zeros(3, 5)) == 0


def test_rank_hamming_by_row_span():
    # Independent oracle: the row span of the parity check has 2^rank members.
    rows = HAMMING74.array
    span = {tuple((coeffs @ rows) & 1) for coeffs in all_vectors(3)}
    assert len(span) == 8
    assert rank(HAMMING74) == 3


def test_matvec_linearity():
    rng = np.random.default_rng(2)
    for _ in range(40):
        r, c = int(rng.integers(1, 8)), int(rng.integers(1, 8))
        m = BitMatrix(rng.integers(0, 2, (r, c)))
        v = BitVector(rng.integers(0, 2, c))
        w = BitVector(rng.integers(0, 2, c))
        assert matvec(m, add(v, w)) == add(matvec(m, v), matvec(m, w))


def test_solve_affine_unique_solution():
    sol = solve_affine(BitMatrix.identity(3), BitVector.from01("011"))
    assert sol.particular.to01() == "011"
    assert sol.nullspace_basis == ()


def test_solve_affine_infeasible():
    assert solve_affine(BitMatrix.zeros(1, 2), BitVector([1])) is None


def test_solve_affine_length_mismatch():
    with pytest.raises(InvalidParameterError):
        solve_affine(BitMatrix.identity(3), BitVector.from01("01"))


def _affine_span(solution) -> set:
    base = solution.particular.array
    basis = [b.array for b in solution.nullspace_basis]
    out = set()
    for coeffs in all_vectors(len(basis)) if basis else np.zeros((1, 0), dtype=np.uint8):
        z = base.copy()
        for c, vec in zip(coeffs, basis):
            if c:
                z = z ^ vec
        out.add(tuple(z))
    return out


def test_solve_affine_two_point_solution_set():
    sol = solve_affine(BitMatrix([[1, 1]]), BitVector([1]))
    assert _affine_span(sol) == {(1, 0), (0, 1)}


def test_solve_affine_span_matches_exhaustive_scan():
    rng = np.random.default_rng(3)
    for _ in range(60):
        n = int(rng.integers(1, 13))
        r = int(rng.integers(1, n + 2))
        a = BitMatrix(rng.integers(0, 2, (r, n)))
        b = BitVector(rng.integers(0, 2, r))
        vectors = all_vectors(n)
        truth = {
            tuple(v) for v in vectors[np.all(((vectors @ a.array.T) & 1) == b.array, axis=1)]
        }
        sol = solve_affine(a, b)
        if not truth:
            assert sol is None
            continue
        span = _affine_span(sol)
        assert span == truth
        assert len(span) == 2 ** (n - rank(a))
        for z in span:
            assert matvec(a, BitVector(z)) == b


def test_concat_and_vstack():
    assert concat(BitVector.from01("10"), BitVector.from01("011")).to01() == "10011"
    stacked = vstack(BitMatrix.identity(2), BitMatrix.zeros(1, 2))
    assert stacked.shape == (3, 2)
    with pytest.raises(InvalidParameterError):
        vstack(BitMatrix.identity(2), BitMatrix.identity(3))
