import math

import numpy as np
import pytest

import tfimprod.constants as cn

# Regression anchor for the interpolated edge constant midway between the
# two endpoint constants, frozen from a 2001-point grid + golden refinement.
BETA_HALF = 0.8395430231535991
BETA_HALF_ARGMIN = 0.6345541011498838


def test_k_of_t_values():
    assert cn.k_of_t(1.0) == pytest.approx(1.0, abs=1e-15)
    assert cn.k_of_t(0.0) == 0.0
    assert cn.k_of_t(0.5) == pytest.approx(1 / 3, abs=1e-15)


def test_k_of_t_domain_error():
    with pytest.raises(ValueError):
        cn.k_of_t(1.0000001)


def test_k_of_t_shape_properties():
    ts = np.linspace(-1, 1, 801)
    ks = cn.k_of_t(ts)
    np.testing.assert_allclose(ks, -cn.k_of_t(-ts), atol=1e-15)  # odd
    assert np.all(np.diff(ks) > 0)  # increasing
    neg = ts[ts <= 0]
    assert np.all(cn.k_of_t(neg) >= neg - 1e-15)  # K(t) >= t on [-1, 0]


def test_edge_ratio_definition_consistency():
    ts = np.linspace(0, 1, 501)
    np.testing.assert_allclose(cn.r_a(ts) * (1 + ts) - 1, cn.k_of_t(ts), atol=1e-12)


def test_edge_ratio_endpoints():
    assert cn.r_a(0.0) == pytest.approx(1.0, abs=1e-15)
    assert cn.r_a(1.0) == pytest.approx(1.0, abs=1e-15)


def test_alpha_gw_value_and_argmin():
    value, argmin = cn.alpha_gw()
    assert value == pytest.approx(0.878567, abs=1e-5)
    # interior stationary point: centered finite difference changes sign
    eps = 1e-5
    left = (cn.r_a(argmin) - cn.r_a(argmin - eps)) / eps
    right = (cn.r_a(argmin + eps) - cn.r_a(argmin)) / eps
    assert left < 0 < right


def test_beta_endpoints():
    value0, _ = cn.beta_of_q(0.0)
    assert value0 == pytest.approx(cn.alpha_gw()[0], abs=1e-12)
    value1, argmin1 = cn.beta_of_q(1.0)
    assert value1 == pytest.approx(0.716775, abs=1e-5)
    assert argmin1 == pytest.approx(0.58, abs=0.01)


def test_beta_midpoint_anchor():
    value, argmin = cn.beta_of_q(0.5)
    assert value == pytest.approx(BETA_HALF, abs=1e-9)
    assert argmin == pytest.approx(BETA_HALF_ARGMIN, abs=1e-6)
    assert cn.beta_of_q(1.0)[0] < value < cn.beta_of_q(0.0)[0]


def test_beta_monotone_and_continuous_on_grid():
    qs = np.linspace(0, 1, 101)
    vals = np.array([cn.beta_of_q(float(q))[0] for q in qs])
    assert np.all(np.diff(vals) <= 1e-12)
    assert np.max(np.abs(np.diff(vals))) < 0.01


def test_beta_rejects_out_of_range_q():
    with pytest.raises(ValueError):
        cn.beta_of_q(1.5)


def test_q_star_and_its_ratio():
    qs = cn.q_star()
    assert qs == pytest.approx(0.6312, abs=1e-3)
    assert cn.beta_of_q(qs)[0] == pytest.approx(0.8156, abs=1e-3)
    # bracket endpoints really do straddle the root
    assert cn.beta_of_q(0.0)[0] - 0.5 > 0
    assert cn.beta_of_q(1.0)[0] - 1.0 < 0
    # at the root the two sides agree to bisection accuracy
    assert cn.beta_of_q(qs)[0] == pytest.approx((1 + qs) / 2, abs=1e-7)


def test_warmup_ratio():
    assert cn.warmup_ratio() == pytest.approx(0.7154457, abs=1e-5)
    assert cn.warmup_ratio(alpha=1.0) == pytest.approx(0.75, abs=1e-15)
    # the two warm-up candidate guarantees cross at t* = 1/(2 alpha)
    alpha = cn.alpha_gw()[0]
    t_star = 1 / (2 * alpha)
    rising = 0.5 + t_star * (alpha - 0.5)
    falling = 1 - t_star / 2
    assert rising == pytest.approx(falling, abs=1e-12)
    assert falling == pytest.approx(cn.warmup_ratio(), abs=1e-12)


def test_two_candidate_gamma():
    gamma = cn.two_candidate_gamma()
    assert gamma == pytest.approx(0.786016, abs=1e-5)
    alpha = cn.alpha_gw()[0]
    beta = cn.beta_of_q(1.0)[0]
    alt = 1 - (1 - beta) * cn.p_star(alpha, beta)
    assert gamma == pytest.approx(alt, abs=1e-12)
    # degenerating the second candidate to a coin flip recovers the warm-up
    assert cn.two_candidate_gamma(beta=0.5) == pytest.approx(cn.warmup_ratio(), abs=1e-12)


def test_curve_two_point_endpoints():
    lo, hi = cn.q_opt_curve(grid=2)
    assert (lo.p, lo.q_opt, lo.ratio) == (0.0, 1.0, pytest.approx(1.0, abs=1e-12))
    assert hi.p == 1.0
    # at p = 1 the best scaling is q = 0, recovering the hyperplane constant
    assert hi.ratio == pytest.approx(cn.alpha_gw()[0], abs=1e-9)
    assert hi.q_opt == pytest.approx(0.0, abs=1e-4)


def test_curve_structure():
    points = cn.q_opt_curve(grid=501)
    ps = np.array([pt.p for pt in points])
    qs = np.array([pt.q_opt for pt in points])
    ratios = np.array([pt.ratio for pt in points])

    # every emitted ratio is Q(p, q_opt)
    for pt in points[::50]:
        assert pt.ratio == pytest.approx(cn.q_value(pt.p, pt.q_opt), abs=1e-12)

    transition = ps[qs < 1.0 - 1e-4].min()
    assert transition == pytest.approx(0.602, abs=5e-3)

    q_star = cn.q_star()
    mask = qs < 1.0
    crossing = np.interp(-q_star, -qs[mask], ps[mask])
    assert crossing == pytest.approx(0.7094, abs=5e-3)

    assert ratios.min() == pytest.approx(cn.beta_of_q(q_star)[0], abs=1e-4)

    # q_opt(p) moves continuously at grid resolution
    assert np.max(np.abs(np.diff(qs))) < 0.02


def test_curve_rejects_tiny_grid():
    with pytest.raises(ValueError):
        cn.q_opt_curve(grid=1)


def test_constants_summary_keys():
    summary = cn.constants_summary()
    assert summary["alpha_gw"] == pytest.approx(0.878567, abs=1e-5)
    assert summary["beta"] == pytest.approx(0.716775, abs=1e-5)
    assert summary["q_star"] == pytest.approx(0.6312, abs=1e-3)
    assert summary["ratio_c"] == pytest.approx(0.8156, abs=1e-3)
    assert summary["gamma_warmup"] == pytest.approx(0.7154457, abs=1e-5)
    assert summary["gamma_two"] == pytest.approx(0.786016, abs=1e-5)
