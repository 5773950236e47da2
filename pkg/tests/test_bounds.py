import numpy as np
import pytest
from conftest import mixing_envelope_oracle

from sumrecon.bounds import (
    RegionTriple,
    inverse_rate_cr,
    lkm_inner_curve,
    membership,
    rate_cr,
    rate_wz_curve,
    steinberg_inner_curve,
    wz_g,
    wz_outer_curve,
)
from sumrecon.entropy import bconv, bconv_many, binary_entropy, binary_entropy_many
from sumrecon.errors import InvalidParameterError
from sumrecon.gf2 import BitVector, add, hamming_distance

# Frozen from 40-digit evaluations of the closed forms.
H_02 = 0.7219280948873623
RATE_CR_02_005 = 0.4916143464305816  # H(0.23) - H(0.05)
WZ_G_04_01 = 0.5124583014443723  # H(0.42) - H(0.1)


def test_rate_cr_anchors():
    assert rate_cr(0.2, 0.0) == pytest.approx(H_02, abs=1e-12)
    assert rate_cr(0.3, 0.5) == 0.0
    assert rate_cr(0.3, 0.7) == 0.0
    assert rate_cr(0.2, 0.05) == pytest.approx(RATE_CR_02_005, abs=1e-12)
    with pytest.raises(InvalidParameterError):
        rate_cr(0.2, -0.01)


def test_rate_cr_non_negative_and_decreasing():
    ds = np.linspace(0.0, 0.5, 200)
    vals = [rate_cr(0.2, float(d)) for d in ds]
    assert min(vals) >= 0.0
    assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


def test_wz_g_anchors():
    assert wz_g(0.3, 0.3) == 0.0  # zero beyond the source crossover
    assert wz_g(0.3, 0.4) == 0.0
    assert wz_g(0.2, 0.0) == pytest.approx(H_02, abs=1e-12)
    assert wz_g(0.4, 0.1) == pytest.approx(WZ_G_04_01, abs=1e-12)


def test_inverse_rate_cr_round_trip():
    for p in (0.1, 0.2, 0.35):
        assert inverse_rate_cr(p, binary_entropy(p)) == 0.0
        assert inverse_rate_cr(p, 0.0) == 0.5
        for target in (0.05, 0.2, 0.5):
            if target < binary_entropy(p):
                d = inverse_rate_cr(p, target)
                assert rate_cr(p, d) == pytest.approx(target, abs=1e-10)


def test_wz_curve_endpoints_and_envelope_property():
    p = 0.2
    curve = rate_wz_curve(p, 501)
    assert curve(0.0) == pytest.approx(binary_entropy(p), abs=1e-9)
    assert curve(p) == pytest.approx(0.0, abs=1e-9)
    ds = p * np.arange(501) / 500
    vals = curve.evaluate_many(ds)
    gs = np.array([wz_g(p, float(d)) for d in ds])
    assert np.all(vals <= gs + 1e-12)
    assert np.all(np.diff(vals) <= 1e-12)  # non-increasing


def test_wz_curve_matches_mixing_oracle():
    p = 0.2
    grid = 401
    bc = wz_outer_curve(p, grid)
    xs, ys = bc.prehull.xs, bc.prehull.ys
    want = mixing_envelope_oracle(xs, ys)
    got = bc.hulled.evaluate_many(xs)
    assert np.abs(got - want).max() <= 1e-10


@pytest.mark.parametrize("make", [steinberg_inner_curve, lkm_inner_curve])
@pytest.mark.parametrize("p", [0.2, 0.4])
def test_inner_curve_endpoints(make, p):
    c = make(p, 1001)
    assert c.hulled(0.0) == pytest.approx(binary_entropy(p), abs=1e-9)
    assert c.hulled(p) == pytest.approx(0.0, abs=1e-9)
    assert c.prehull.domain == (0.0, p)


@pytest.mark.parametrize("make", [wz_outer_curve, steinberg_inner_curve, lkm_inner_curve])
def test_curves_convex_and_non_increasing(make):
    c = make(0.3, 801)
    xs, ys = c.hulled.xs, c.hulled.ys
    assert np.all(np.diff(ys) <= 1e-12)
    slopes = np.diff(ys) / np.diff(xs)
    assert np.all(np.diff(slopes) >= -1e-9)
    assert np.all(c.hulled.evaluate_many(xs) <= c.prehull.evaluate_many(xs) + 1e-12)


def test_lkm_rate_exceeds_steinberg_rate_by_entropy_gap():
    # Shared parametrization D = q*q: the rate gap is H(p*(q*q)) - H(p*q).
    p, grid = 0.2, 501
    st = steinberg_inner_curve(p, grid)
    lk = lkm_inner_curve(p, grid)
    q_max = 0.5 * (1.0 - np.sqrt(1.0 - 2.0 * p))
    q = q_max * np.arange(grid) / (grid - 1)
    d = bconv_many(q, q)
    gap = binary_entropy_many(bconv_many(p, d)) - binary_entropy_many(bconv_many(p, q))
    assert np.all(gap >= -1e-12)
    got = lk.prehull.ys - st.prehull.ys
    assert np.abs(got - gap).max() <= 1e-12


def test_bound_ordering_single_p():
    p, grid = 0.2, 2001
    ds = p * np.arange(grid) / (grid - 1)
    wz = rate_wz_curve(p, grid).evaluate_many(ds)
    st = steinberg_inner_curve(p, grid).hulled.evaluate_many(ds)
    lk = lkm_inner_curve(p, grid).hulled.evaluate_many(ds)
    assert np.all(wz <= st)
    assert np.all(st <= lk + 1e-9)


def test_membership_zero_rate_point():
    got = membership(RegionTriple(0.0, 0.0, 0.2), 0.2)
    assert got.in_r_b and got.in_tse_outer
    assert not got.in_r_a and not got.in_r_c


def test_membership_zero_distortion_endpoint():
    h = binary_entropy(0.2)
    got = membership(RegionTriple(h, h, 0.0), 0.2)
    assert got.in_r_a and got.in_r_c and got.in_tse_outer
    assert not got.in_r_b


def test_membership_nothing_for_free():
    got = membership(RegionTriple(0.0, 0.0, 0.0), 0.2)
    assert got.to_dict() == {
        "in_R_A": False,
        "in_R_B": False,
        "in_R_C": False,
        "in_TSE_outer": False,
    }


def test_membership_generous_rates():
    # Rates above H(p) reach zero distortion in every achievable region;
    # the zero-rate region still requires d >= p.
    got = membership(RegionTriple(1.0, 1.0, 0.0), 0.2)
    assert got.in_r_a and got.in_r_c and got.in_tse_outer
    assert not got.in_r_b


def test_membership_outer_excludes_starved_rates():
    got = membership(RegionTriple(0.1, 0.1, 0.01), 0.2)
    assert not got.in_tse_outer


def test_membership_validates_triple():
    with pytest.raises(InvalidParameterError):
        membership(RegionTriple(-0.1, 0.0, 0.1), 0.2)
    with pytest.raises(InvalidParameterError):
        membership(RegionTriple(0.1, 0.1, 0.7), 0.2)


def test_inner_membership_implies_outer():
    rng = np.random.default_rng(31)
    for _ in range(150):
        p = float(rng.uniform(0.05, 0.5))
        t = RegionTriple(float(rng.uniform(0, 1.2)), float(rng.uniform(0, 1.2)), float(rng.uniform(0, 0.5)))
        got = membership(t, p, 501)
        if got.in_r_a or got.in_r_b or got.in_r_c:
            assert got.in_tse_outer


def test_xor_distortion_identity():
    # d(b, a+c) == d(a+b, c): exhaustive over bit triples, then on vectors.
    for a in (0, 1):
        for b in (0, 1):
            for c in (0, 1):
                assert (b ^ (a ^ c)) == ((a ^ b) ^ c)
    rng = np.random.default_rng(32)
    for _ in range(50):
        n = int(rng.integers(1, 40))
        a = BitVector(rng.integers(0, 2, n))
        b = BitVector(rng.integers(0, 2, n))
        c = BitVector(rng.integers(0, 2, n))
        assert hamming_distance(b, add(a, c)) == hamming_distance(add(a, b), c)


def test_degenerate_p_zero():
    for make in (wz_outer_curve, steinberg_inner_curve, lkm_inner_curve):
        c = make(0.0, 101)
        assert c.hulled.domain == (0.0, 0.0)
        assert c.hulled(0.0) == 0.0
    got = membership(RegionTriple(0.0, 0.0, 0.0), 0.0)
    assert got.in_r_a and got.in_r_b and got.in_r_c and got.in_tse_outer


def test_bad_parameters():
    with pytest.raises(InvalidParameterError):
        steinberg_inner_curve(0.7)
    with pytest.raises(InvalidParameterError):
        rate_wz_curve(0.2, 2)
