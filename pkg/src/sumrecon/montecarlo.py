"""Deterministic Monte Carlo harness.

Each trial is a pure function of ``(master_seed, trial_index)`` (plus an
axis index during sweeps), so reports are bit-identical no matter how many
workers execute the trials or in which order they finish: per-trial results
are gathered into trial order and folded sequentially.

Seed lanes, all built with :func:`sumrecon.sources.derive_seed`:

* trial ``k`` of a plain run: ``derive_seed(master_seed, k)``;
* trial ``k`` of sweep entry ``i``: ``derive_seed(master_seed, i, k)``;
* inside a trial: index 0 for the source block, 1 for the dither pair of
  the sum scheme or link 1's dither, 2 for link 2's dither;
* deterministic design material (random message maps) uses the reserved
  lane ``derive_seed(master_seed, 2**63)``, far above any trial index.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

from .codes import DEFAULT_ENUMERATION_CAP, CodeSpec, build_code
from .errors import InvalidParameterError
from .gf2 import BitVector
from .schemes import (
    CrCode,
    LkmDesign,
    build_cr_code,
    build_lkm_design,
    cr_code_with_dither,
    cr_decode,
    cr_encode,
    lkm_decode,
    lkm_encode,
)
from .sources import DitherPair, derive_seed, sample_dsbs, sample_dither

__all__ = [
    "DESIGN_SEED_LANE",
    "SCHEMES",
    "SWEEP_AXES",
    "ExperimentConfig",
    "TrialReport",
    "run_experiment",
    "sweep",
]

SCHEMES = ("lkm", "csr-lkm", "csr-steinberg")
SWEEP_AXES = ("r", "k", "p", "n", "trials")
DESIGN_SEED_LANE = 1 << 63


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one experiment; JSON-serializable.

    ``r`` is the message length of the sum schemes ("lkm", "csr-lkm");
    ``variant``/``k`` configure the common-reconstruction links of
    "csr-steinberg".  ``dither=False`` is a test-only control that zeroes
    every dither stream.
    """

    scheme: str
    p: float
    n: int
    code: CodeSpec
    trials: int
    master_seed: int
    r: int | None = None
    k: int | None = None
    variant: str | None = None
    dither: bool = True
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if self.scheme not in SCHEMES:
            raise InvalidParameterError(
                f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}"
            )
        if not 0.0 <= self.p <= 0.5:
            raise InvalidParameterError(f"p must lie in [0, 1/2], got {self.p!r}")
        if self.n < 1:
            raise InvalidParameterError("block length must be at least 1")
        if self.trials < 1:
            raise InvalidParameterError("at least one trial is required")
        if not 0 <= self.master_seed < (1 << 64):
            raise InvalidParameterError("master seed must be an unsigned 64-bit value")
        if self.scheme in ("lkm", "csr-lkm"):
            if self.r is None:
                raise InvalidParameterError(f"scheme {self.scheme!r} needs r")
            if self.k is not None or self.variant is not None:
                raise InvalidParameterError(
                    f"scheme {self.scheme!r} takes neither k nor variant"
                )
        else:
            if self.variant is None:
                raise InvalidParameterError("csr-steinberg needs a variant")
            if self.r is not None:
                raise InvalidParameterError("csr-steinberg does not take r")
            if self.variant == "syndrome_binned" and self.k is None:
                raise InvalidParameterError("syndrome_binned needs k")
            if self.variant == "full_index" and self.k is not None:
                raise InvalidParameterError("full_index does not take k")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        try:
            code = data["code"]
            config = cls(
                scheme=data["scheme"],
                p=float(data["p"]),
                n=int(data["n"]),
                code=CodeSpec(
                    kind=code["kind"],
                    n=code.get("n"),
                    m=code.get("m"),
                    seed=code.get("seed"),
                ),
                trials=int(data.get("trials", 1000)),
                master_seed=int(data["seed"]),
                r=None if data.get("r") is None else int(data["r"]),
                k=None if data.get("k") is None else int(data["k"]),
                variant=data.get("variant"),
                dither=bool(data.get("dither", True)),
                enumeration_cap=int(data.get("enumeration_cap", DEFAULT_ENUMERATION_CAP)),
            )
        except KeyError as exc:
            raise InvalidParameterError(f"experiment config is missing {exc.args[0]!r}") from exc
        config.validate()
        return config


_REPORT_FIELDS = (
    "distortion_z1",
    "distortion_z2",
    "distortion_z1_ci95",
    "distortion_z2_ci95",
    "mismatch_rate",
    "psi_mismatch_rate",
    "decode_failure_rate",
    "exact_recovery_rate",
    "rate1",
    "rate2",
    "trials",
    "master_seed",
)


@dataclass(frozen=True)
class TrialReport:
    """Aggregate of one experiment.

    Distortions are per-symbol means over trials; ci95 half-widths use the
    normal approximation 1.96 * sqrt(var / trials) with the sample variance
    of the per-trial per-symbol distortion.  ``mismatch_rate`` counts trials
    whose two terminal outputs differ; ``psi_mismatch_rate`` counts trials
    where some link's decode differs from that encoder's psi (always 0.0 for
    the sum schemes, which have no psi); ``exact_recovery_rate`` counts
    trials where every decoded word equals its noiseless reference.
    """

    distortion_z1: float
    distortion_z2: float
    distortion_z1_ci95: float
    distortion_z2_ci95: float
    mismatch_rate: float
    psi_mismatch_rate: float
    decode_failure_rate: float
    exact_recovery_rate: float
    rate1: float
    rate2: float
    trials: int
    master_seed: int

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in _REPORT_FIELDS}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @staticmethod
    def csv_header() -> str:
        return ",".join(_REPORT_FIELDS)

    def to_csv_row(self) -> str:
        return ",".join(repr(getattr(self, name)) for name in _REPORT_FIELDS)


@dataclass(frozen=True)
class _Materials:
    scheme: str
    p: float
    n: int
    dither: bool
    rate1: float
    rate2: float
    design: LkmDesign | None = None
    code1: CrCode | None = None
    code2: CrCode | None = None
    zero_dither: DitherPair | None = None


def _build_materials(config: ExperimentConfig) -> _Materials:
    config.validate()
    quantizer = build_code(config.code.resolved(config.n))
    if quantizer.n != config.n:
        raise InvalidParameterError(
            f"code length {quantizer.n} does not match block length {config.n}"
        )
    if config.scheme in ("lkm", "csr-lkm"):
        design = build_lkm_design(
            quantizer,
            r=config.r,
            design_seed=derive_seed(config.master_seed, DESIGN_SEED_LANE),
            enumeration_cap=config.enumeration_cap,
        )
        zeros = BitVector.zeros(config.n)
        return _Materials(
            scheme=config.scheme,
            p=config.p,
            n=config.n,
            dither=config.dither,
            rate1=design.rate_per_encoder,
            rate2=design.rate_per_encoder,
            design=design,
            zero_dither=DitherPair(zeros, zeros),
        )
    code1 = build_cr_code(
        quantizer,
        config.variant,
        k=config.k,
        enumeration_cap=config.enumeration_cap,
    )
    code2 = build_cr_code(
        quantizer,
        config.variant,
        k=config.k,
        enumeration_cap=config.enumeration_cap,
    )
    return _Materials(
        scheme=config.scheme,
        p=config.p,
        n=config.n,
        dither=config.dither,
        rate1=code1.rate,
        rate2=code2.rate,
        code1=code1,
        code2=code2,
    )


def _run_trial(mat: _Materials, trial_seed: int) -> tuple:
    """One independent block; returns
    (d1, d2, mismatch, psi_mismatch, decode_failed, exact_recovery)."""
    n = mat.n
    sample = sample_dsbs(mat.p, n, derive_seed(trial_seed, 0))
    z = sample.x ^ sample.y

    if mat.scheme in ("lkm", "csr-lkm"):
        design = mat.design
        dither = (
            sample_dither(n, derive_seed(trial_seed, 1)) if mat.dither else mat.zero_dither
        )
        enc_x = lkm_encode(design, sample.x, dither.d_x)
        enc_y = lkm_encode(design, sample.y, dither.d_y)
        reference = enc_x.x_hat ^ enc_y.x_hat ^ dither.d_x ^ dither.d_y
        dec_1 = lkm_decode(design, enc_x.message, enc_y.message, dither)
        if mat.scheme == "lkm":
            d1 = (z ^ dec_1.z_tilde).weight() / n
            return (
                d1,
                d1,
                False,
                False,
                dec_1.decode_failed,
                dec_1.z_tilde == reference,
            )
        dec_2 = lkm_decode(design, enc_x.message, enc_y.message, dither)
        return (
            (z ^ dec_1.z_tilde).weight() / n,
            (z ^ dec_2.z_tilde).weight() / n,
            dec_1.z_tilde != dec_2.z_tilde,
            False,
            dec_1.decode_failed or dec_2.decode_failed,
            dec_1.z_tilde == reference,
        )

    # csr-steinberg
    if mat.dither:
        code1 = cr_code_with_dither(mat.code1, derive_seed(trial_seed, 1))
        code2 = cr_code_with_dither(mat.code2, derive_seed(trial_seed, 2))
    else:
        code1, code2 = mat.code1, mat.code2
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
    return (
        (z ^ z_hat_1).weight() / n,
        (z ^ z_hat_2).weight() / n,
        z_hat_1 != z_hat_2,
        psi_mismatch,
        dec_at_1.decode_failed or dec_at_2.decode_failed,
        not psi_mismatch,
    )


def _mean_and_ci95(values: Sequence[float], trials: int) -> tuple[float, float]:
    mean = math.fsum(values) / trials
    if trials < 2:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (trials - 1)
    return mean, 1.96 * math.sqrt(var / trials)


def run_experiment(
    config: ExperimentConfig, workers: int = 1, _seed_prefix: tuple[int, ...] = ()
) -> TrialReport:
    """Run all trials and aggregate.

    Capacity and configuration problems surface before the first trial.
    ``workers`` only changes how trials are scheduled, never the report.
    """
    mat = _build_materials(config)
    seeds = [
        derive_seed(config.master_seed, *_seed_prefix, k) for k in range(config.trials)
    ]
    if workers <= 1:
        rows = [_run_trial(mat, s) for s in seeds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda s: _run_trial(mat, s), seeds))

    trials = config.trials
    d1, ci1 = _mean_and_ci95([r[0] for r in rows], trials)
    d2, ci2 = _mean_and_ci95([r[1] for r in rows], trials)
    return TrialReport(
        distortion_z1=d1,
        distortion_z2=d2,
        distortion_z1_ci95=ci1,
        distortion_z2_ci95=ci2,
        mismatch_rate=sum(r[2] for r in rows) / trials,
        psi_mismatch_rate=sum(r[3] for r in rows) / trials,
        decode_failure_rate=sum(r[4] for r in rows) / trials,
        exact_recovery_rate=sum(r[5] for r in rows) / trials,
        rate1=mat.rate1,
        rate2=mat.rate2,
        trials=trials,
        master_seed=config.master_seed,
    )


def sweep(
    config: ExperimentConfig, axis: str, values: Sequence, workers: int = 1
) -> list[TrialReport]:
    """One report per axis value; trial seeds are derived per
    (master_seed, axis index, trial) so entries are independent experiments."""
    if axis not in SWEEP_AXES:
        raise InvalidParameterError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
    if not values:
        raise InvalidParameterError("sweep needs at least one value")
    reports = []
    for i, value in enumerate(values):
        if axis == "p":
            entry = replace(config, p=float(value))
        else:
            if value != int(value):
                raise InvalidParameterError(f"axis {axis!r} takes integer values, got {value!r}")
            entry = replace(config, **{axis: int(value)})
        reports.append(run_experiment(entry, workers=workers, _seed_prefix=(i,)))
    return reports
