"""Executable encoders and decoders.

Two families are implemented:

* the dithered linear-code sum scheme (``lkm_*``): both encoders quantize a
  dithered input onto the same linear codebook and send a linear image of
  the quantized word; the decoder recovers the sum of the quantized words by
  constrained minimum-weight search, using the dither syndrome as side
  information.  Running that decoder at both terminals yields a sum
  reconstruction that is identical at the two terminals by construction.
* common-reconstruction codes (``cr_*``): a rate-R link whose encoder can
  reproduce the decoder output locally (psi).  Two such links assemble into
  the two-code sum-reconstruction scheme ``csr_via_steinberg``.

Every quantizer input is dithered with a uniform sequence shared between the
link's encoder and decoder; independent dithers make the two links'
quantization errors independent, which is what the distortion accounting
needs.  A ``dither_seed`` of ``None`` disables dithering (all-zeros dither);
that mode exists for negative controls in tests only.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .codes import (
    DEFAULT_ENUMERATION_CAP,
    LinearCode,
    min_weight_in_affine,
)
from .errors import CapacityError, ConstructionError, InvalidParameterError
from .gf2 import AffineSolver, BitMatrix, BitVector, concat, vstack
from .sources import DitherPair, DsbsSample, SplitMix64

__all__ = [
    "CrCode",
    "CrDecodeResult",
    "CrEncoding",
    "LkmDecodeResult",
    "LkmDesign",
    "LkmEncoding",
    "SchemeOutput",
    "build_cr_code",
    "build_lkm_design",
    "cr_code_with_dither",
    "cr_decode",
    "cr_encode",
    "csr_via_lkm",
    "csr_via_steinberg",
    "lkm_encode",
    "lkm_decode",
]


@dataclass(frozen=True)
class SchemeOutput:
    """Per-block outcome of a two-terminal scheme."""

    z_hat_1: BitVector
    z_hat_2: BitVector
    decode_failed: bool
    psi_mismatch: bool


# ---------------------------------------------------------------------------
# Dithered linear-code sum scheme
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LkmDesign:
    """A (quantizer, message map) pair.

    ``quantizer`` supplies the m x n parity check U; ``v`` is the r x n
    message map, full row rank.  The decoder enumerates the affine set
    ``{z : U z = s, V z = t}``, whose dimension ``n - rank([U; V])`` must fit
    under ``enumeration_cap`` (checked at build time).
    """

    quantizer: LinearCode
    v: BitMatrix
    n: int
    m: int
    r: int
    enumeration_cap: int
    solver: AffineSolver
    solution_dim: int

    @property
    def rate_per_encoder(self) -> float:
        return self.r / self.n


def _invertible_matrix(n: int, seed: int) -> BitMatrix:
    rng = SplitMix64(seed)
    for _ in range(256):
        candidate = BitMatrix._wrap(rng.bits(n * n).reshape(n, n))
        if AffineSolver(candidate).rank == n:
            return candidate
    raise ConstructionError(f"could not draw an invertible {n}x{n} matrix from seed {seed}")


def build_lkm_design(
    quantizer: LinearCode,
    *,
    r: int | None = None,
    v: BitMatrix | None = None,
    design_seed: int = 0,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> LkmDesign:
    """Assemble a design around a built quantizer.

    When ``v`` is not supplied it is derived deterministically: the identity
    for r = n, otherwise the first r rows of a seeded invertible n x n
    matrix (so sweeps over r use nested message maps).
    """
    n = quantizer.n
    if v is None:
        if r is None:
            raise InvalidParameterError("either v or r must be given")
        if not 1 <= r <= n:
            raise InvalidParameterError(f"need 1 <= r <= n, got r={r}, n={n}")
        v = BitMatrix.identity(n) if r == n else BitMatrix._wrap(
            _invertible_matrix(n, design_seed).array[:r].copy()
        )
    else:
        if v.cols != n:
            raise InvalidParameterError(f"v must have {n} columns, got {v.cols}")
        if r is not None and r != v.rows:
            raise InvalidParameterError(f"r={r} contradicts v with {v.rows} rows")
        r = v.rows
        if AffineSolver(v).rank != r:
            raise ConstructionError("v must have full row rank")
    solver = AffineSolver(vstack(quantizer.u, v))
    dim = n - solver.rank
    if (1 << dim) > enumeration_cap:
        raise CapacityError(
            f"decoder solution space has dimension {dim}; raise r or the cap"
        )
    return LkmDesign(
        quantizer=quantizer,
        v=v,
        n=n,
        m=quantizer.m,
        r=r,
        enumeration_cap=enumeration_cap,
        solver=solver,
        solution_dim=dim,
    )


@dataclass(frozen=True)
class LkmEncoding:
    message: BitVector
    x_hat: BitVector


@dataclass(frozen=True)
class LkmDecodeResult:
    z_tilde: BitVector
    decode_failed: bool


def lkm_encode(design: LkmDesign, x: BitVector, dither: BitVector) -> LkmEncoding:
    """Quantize the dithered input and send its image under the message map."""
    if len(x) != design.n or len(dither) != design.n:
        raise InvalidParameterError(f"input and dither must have length {design.n}")
    x_hat = design.quantizer.quantize(x ^ dither)
    return LkmEncoding(message=design.v @ x_hat, x_hat=x_hat)


def lkm_decode(
    design: LkmDesign, msg_x: BitVector, msg_y: BitVector, dither: DitherPair
) -> LkmDecodeResult:
    """Reconstruct the sum of the two quantized inputs.

    The decoder knows both dithers, hence the syndrome of the target word,
    and picks the minimum-weight vector consistent with that syndrome and
    with the summed messages.  Infeasibility cannot occur for honestly
    generated messages; it is still reported via ``decode_failed`` rather
    than raised, so corrupt-message experiments stay runnable.
    """
    if len(msg_x) != design.r or len(msg_y) != design.r:
        raise InvalidParameterError(f"messages must have length {design.r}")
    dither_sum = dither.d_x ^ dither.d_y
    s = design.quantizer.u @ dither_sum
    target = msg_x ^ msg_y ^ (design.v @ dither_sum)
    b = concat(s, target)
    z = min_weight_in_affine(design.solver, b.array, design.enumeration_cap)
    if z is None:
        return LkmDecodeResult(BitVector.zeros(design.n), True)
    return LkmDecodeResult(BitVector._wrap(z.copy()), False)


def csr_via_lkm(
    design: LkmDesign, sample: DsbsSample, dither: DitherPair
) -> SchemeOutput:
    """Run the sum scheme at both terminals.

    Each terminal encodes its own source, the messages are exchanged, and
    both terminals run the identical decoder on the identical message pair,
    so the two reconstructions agree on every block, not just with high
    probability.
    """
    enc_x = lkm_encode(design, sample.x, dither.d_x)
    enc_y = lkm_encode(design, sample.y, dither.d_y)
    dec_1 = lkm_decode(design, enc_x.message, enc_y.message, dither)
    dec_2 = lkm_decode(design, enc_x.message, enc_y.message, dither)
    return SchemeOutput(
        z_hat_1=dec_1.z_tilde,
        z_hat_2=dec_2.z_tilde,
        decode_failed=dec_1.decode_failed or dec_2.decode_failed,
        psi_mismatch=False,
    )


# ---------------------------------------------------------------------------
# Common-reconstruction codes
# ---------------------------------------------------------------------------

_CR_VARIANTS = ("full_index", "syndrome_binned")


@dataclass(frozen=True)
class CrCode:
    """One common-reconstruction link.

    ``full_index`` sends the information bits of the quantized word
    ((n - m)/n bits per symbol); the decoder inverts them exactly and the
    side information is unused.  ``syndrome_binned`` sends only ``bin_matrix
    @ x_hat`` (k/n bits per symbol) and the decoder picks, within the bin,
    the codeword whose dithered shift is closest to its side information.
    psi is the encoder's local copy of the decoder output; for the binned
    variant the decoder may land elsewhere, which the harness observes as a
    psi mismatch.
    """

    variant: str
    quantizer: LinearCode
    dither_seed: int | None
    dither: BitVector
    bin_matrix: BitMatrix | None
    message_length: int
    enumeration_cap: int
    bin_solver: AffineSolver | None

    @property
    def n(self) -> int:
        return self.quantizer.n

    @property
    def rate(self) -> float:
        return self.message_length / self.quantizer.n


def _dither_vector(n: int, dither_seed: int | None) -> BitVector:
    if dither_seed is None:
        return BitVector.zeros(n)
    return BitVector._wrap(SplitMix64(dither_seed).bits(n))


def _default_bin_matrix(quantizer: LinearCode, k: int) -> BitMatrix:
    # Select the first k information positions: bins are nested in k and the
    # map is injective on the codebook at k = n - m by construction.
    rows = np.zeros((k, quantizer.n), dtype=np.uint8)
    for i in range(k):
        rows[i, quantizer.info_positions[i]] = 1
    return BitMatrix._wrap(rows)


def build_cr_code(
    quantizer: LinearCode,
    variant: str,
    *,
    dither_seed: int | None = None,
    k: int | None = None,
    bin_matrix: BitMatrix | None = None,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> CrCode:
    if variant not in _CR_VARIANTS:
        raise InvalidParameterError(
            f"unknown variant {variant!r}; expected one of {_CR_VARIANTS}"
        )
    n, m = quantizer.n, quantizer.m
    if variant == "full_index":
        if k is not None or bin_matrix is not None:
            raise InvalidParameterError("full_index takes neither k nor a bin matrix")
        return CrCode(
            variant=variant,
            quantizer=quantizer,
            dither_seed=dither_seed,
            dither=_dither_vector(n, dither_seed),
            bin_matrix=None,
            message_length=n - m,
            enumeration_cap=enumeration_cap,
            bin_solver=None,
        )
    if bin_matrix is None:
        if k is None:
            raise InvalidParameterError("syndrome_binned needs k or a bin matrix")
        if not 0 <= k <= n - m:
            raise InvalidParameterError(f"need 0 <= k <= n - m = {n - m}, got k={k}")
        bin_matrix = _default_bin_matrix(quantizer, k)
    else:
        if bin_matrix.cols != n:
            raise InvalidParameterError(f"bin matrix must have {n} columns")
        if k is not None and k != bin_matrix.rows:
            raise InvalidParameterError(f"k={k} contradicts bin matrix with {bin_matrix.rows} rows")
    solver = AffineSolver(vstack(quantizer.u, bin_matrix))
    dim = n - solver.rank
    if (1 << dim) > enumeration_cap:
        raise CapacityError(f"bins have dimension {dim}; raise k or the cap")
    return CrCode(
        variant=variant,
        quantizer=quantizer,
        dither_seed=dither_seed,
        dither=_dither_vector(n, dither_seed),
        bin_matrix=bin_matrix,
        message_length=bin_matrix.rows,
        enumeration_cap=enumeration_cap,
        bin_solver=solver,
    )


def cr_code_with_dither(code: CrCode, dither_seed: int | None) -> CrCode:
    """Same link, fresh dither stream (cheap: tables and solvers are shared)."""
    return replace(
        code, dither_seed=dither_seed, dither=_dither_vector(code.n, dither_seed)
    )


@dataclass(frozen=True)
class CrEncoding:
    message: BitVector
    psi: BitVector


@dataclass(frozen=True)
class CrDecodeResult:
    x_hat_reconstruction: BitVector
    decode_failed: bool


def cr_encode(code: CrCode, x: BitVector) -> CrEncoding:
    """Quantize the dithered source; psi is the encoder's reconstruction copy."""
    if len(x) != code.n:
        raise InvalidParameterError(f"input length must be {code.n}, got {len(x)}")
    x_hat = code.quantizer.quantize(x ^ code.dither)
    psi = x_hat ^ code.dither
    if code.variant == "full_index":
        message = code.quantizer.info_bits(x_hat)
    else:
        message = code.bin_matrix @ x_hat
    return CrEncoding(message=message, psi=psi)


def cr_decode(code: CrCode, message: BitVector, side_info: BitVector) -> CrDecodeResult:
    """Reconstruct the encoder's dithered-quantizer output.

    ``full_index`` inverts the information bits exactly.  ``syndrome_binned``
    searches the bin for the codeword whose dithered shift is nearest the
    side information (minimum-weight error, lexicographic tie-break) and can
    therefore disagree with psi; that event is observable only against psi,
    not in-protocol, so ``decode_failed`` is always False here.
    """
    if len(message) != code.message_length:
        raise InvalidParameterError(
            f"message length must be {code.message_length}, got {len(message)}"
        )
    if code.variant == "full_index":
        x_hat = code.quantizer.codeword_from_info(message)
        return CrDecodeResult(x_hat ^ code.dither, False)
    if len(side_info) != code.n:
        raise InvalidParameterError(f"side information length must be {code.n}")
    t = code.dither ^ side_info
    b = concat(code.quantizer.u @ t, (code.bin_matrix @ t) ^ message)
    w = min_weight_in_affine(code.bin_solver, b.array, code.enumeration_cap)
    if w is None:
        raise AssertionError("empty bin: message was not produced by this code")
    codeword = BitVector._wrap(w ^ t.array)
    return CrDecodeResult(codeword ^ code.dither, False)


def csr_via_steinberg(code1: CrCode, code2: CrCode, sample: DsbsSample) -> SchemeOutput:
    """Assemble two common-reconstruction links into a sum-reconstruction
    scheme.

    Terminal 1 adds its local psi to its decode of link 2 and vice versa;
    whenever both decodes match the corresponding psi the two outputs are
    identical by the algebra of the construction.  The links must not share
    a dither stream, otherwise their quantization errors are dependent.
    """
    if code1.n != code2.n:
        raise InvalidParameterError("both links must use the same block length")
    if (
        code1.dither_seed is not None
        and code2.dither_seed is not None
        and code1.dither_seed == code2.dither_seed
    ):
        raise InvalidParameterError("the two links need independent dither seeds")
    if len(sample.x) != code1.n:
        raise InvalidParameterError(f"sample length must be {code1.n}")
    enc1 = cr_encode(code1, sample.x)
    enc2 = cr_encode(code2, sample.y)
    dec_at_1 = cr_decode(code2, enc2.message, sample.x)
    dec_at_2 = cr_decode(code1, enc1.message, sample.y)
    z_hat_1 = enc1.psi ^ dec_at_1.x_hat_reconstruction
    z_hat_2 = dec_at_2.x_hat_reconstruction ^ enc2.psi
    psi_mismatch = (
        dec_at_1.x_hat_reconstruction != enc2.psi
        or dec_at_2.x_hat_reconstruction != enc1.psi
    )
    return SchemeOutput(
        z_hat_1=z_hat_1,
        z_hat_2=z_hat_2,
        decode_failed=dec_at_1.decode_failed or dec_at_2.decode_failed,
        psi_mismatch=psi_mismatch,
    )
