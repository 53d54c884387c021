import math

import numpy as np
import pytest

from cvteleport import (
    ChannelParams,
    ConvergenceError,
    InputState,
    ResourceSpec,
    chi_input,
    deviations,
    gamma,
    input_moments,
    moments_numeric,
    output_moments,
    preset_resource,
    sigma,
)
from cvteleport.moments import moments_from_chi
from cvteleport.optimize import delta_opt_variance
from cvteleport.units import db_to_natural

IDEAL = ChannelParams.ideal()
SQ2 = 2 - math.sqrt(2)


def sigma_unit_gain(r, tau, delta, params):
    # reduced form at unit gain, (phi_res, theta) = (pi, 0)
    eh = math.exp(tau / 2)
    c, s = math.cos(2 * delta), math.sin(2 * delta)
    return (
        gamma(params)
        - 0.25 * math.exp(-2 * r - tau) * (1 + eh) ** 2 * (c + s - 2)
        - 0.25 * math.exp(2 * r - tau) * (1 - eh) ** 2 * (c - s - 2)
    )


def sigma_gaussian(r, tau, params):
    eh = math.exp(tau / 2)
    return gamma(params) + 0.25 * math.exp(-2 * r - tau) * (1 + eh) ** 2 + 0.25 * math.exp(2 * r - tau) * (1 - eh) ** 2


def test_input_examples():
    m = input_moments(InputState())
    assert (m.mean_x, m.mean_p, m.var_x, m.var_p, m.cov_xp) == (0.0, 0.0, 0.5, 0.5, 0.0)
    s = db_to_natural(5.0)
    m = input_moments(InputState(s=s))
    assert m.var_x == pytest.approx(0.5 * math.exp(-2 * s), abs=1e-15)
    assert m.var_p == pytest.approx(0.5 * math.exp(2 * s), abs=1e-15)
    assert (round(m.var_x, 4), round(m.var_p, 4)) == (0.1581, 1.5811)
    m = input_moments(InputState(s=0.4, varphi=math.pi / 2))
    assert m.cov_xp == pytest.approx(-math.sinh(0.8), abs=1e-15)
    assert m.var_x == pytest.approx(0.5 * math.cosh(0.8)) and m.var_p == pytest.approx(m.var_x)


def test_input_moments_from_chi():
    for state in (InputState(1.0, db_to_natural(5.0)), InputState(0.3 - 1.2j, 0.7, 2.1)):
        num = moments_from_chi(lambda a: chi_input(state, a))
        exact = input_moments(state)
        for name in ("mean_x", "mean_p", "var_x", "var_p", "cov_xp"):
            assert getattr(num, name) == pytest.approx(getattr(exact, name), abs=1e-8)


@pytest.mark.parametrize("r", [0.1, 0.6, 1.2])
def test_closed_resource_variances(r):
    e = math.exp(-2 * r)
    assert sigma(preset_resource("TwB", r), IDEAL) == pytest.approx(e, abs=1e-12)
    assert sigma(preset_resource("PAS", r), IDEAL) == pytest.approx(e * (1 + 2 * e * (1 + e) / (1 + e * e)), abs=1e-12)
    assert sigma(preset_resource("PSS", r), IDEAL) == pytest.approx(e * (1 - 2 * e * (1 - e) / (1 + e * e)), abs=1e-12)
    sb = ResourceSpec(r=r, delta=delta_opt_variance(r, 0.0))
    assert sigma(sb, IDEAL) == pytest.approx(SQ2 * e, abs=1e-12)


def test_twin_beam_output_variance():
    state = InputState(0.5j, 0.3, 0.9)
    r = 0.8
    out, inp = output_moments(state, preset_resource("TwB", r), IDEAL), input_moments(state)
    assert out.var_x == pytest.approx(inp.var_x + math.exp(-2 * r), abs=1e-14)
    assert out.var_p == pytest.approx(inp.var_p + math.exp(-2 * r), abs=1e-14)
    assert (out.mean_x, out.mean_p) == pytest.approx((inp.mean_x, inp.mean_p), abs=1e-15)


def test_reduction_chain():
    rng = np.random.default_rng(11)
    for _ in range(100):
        r, tau, delta = rng.uniform(0, 2), rng.uniform(0, 0.5), rng.uniform(-math.pi, math.pi)
        params = ChannelParams.from_loss(R2=rng.uniform(0, 0.1), tau=tau, n_th=rng.uniform(0, 0.5))
        general = sigma(ResourceSpec(r=r, delta=delta), params)
        assert general == pytest.approx(sigma_unit_gain(r, tau, delta, params), abs=1e-12 * max(1, general))
        gauss = sigma(ResourceSpec(r=r), params)
        assert gauss == pytest.approx(sigma_gaussian(r, tau, params), abs=1e-12 * max(1, gauss))


def test_resource_hierarchy():
    for r in np.linspace(0.1, 1.2, 23):
        values = [sigma(preset_resource(k, r), IDEAL) for k in ("PAS", "TwB", "PSS")]
        sb = SQ2 * math.exp(-2 * r)
        assert sb <= values[2] <= values[1] <= values[0]


def test_deviations_examples():
    state = InputState(1.0 - 0.4j, 0.5, 0.3)
    res = ResourceSpec(r=0.7, delta=0.2)
    d = deviations(state, res, ChannelParams.unity_gain(T=0.9, tau=0.1))
    assert (d.d_x, d.d_p, d.d_cov_xp) == pytest.approx((0, 0, 0), abs=1e-14)
    assert d.d_var_x == pytest.approx(sigma(res, ChannelParams.unity_gain(T=0.9, tau=0.1)), abs=1e-14)
    assert d.d_var_p == pytest.approx(d.d_var_x, abs=1e-14)
    d = deviations(InputState(1.0), res, ChannelParams(g=2.0))
    assert d.d_x == pytest.approx(math.sqrt(2), abs=1e-15)
    r = 0.9
    d = deviations(state, ResourceSpec(r=r, delta=delta_opt_variance(r, 0.0)), IDEAL)
    assert d.d_var_x == pytest.approx(SQ2 * math.exp(-2 * r), abs=1e-12)


def test_numeric_moments_match():
    rng = np.random.default_rng(5)
    for _ in range(25):
        state = InputState(complex(*rng.uniform(-2, 2, 2)), rng.uniform(0, 1.1), rng.uniform(0, 2 * math.pi))
        res = ResourceSpec(r=rng.uniform(0, 1.1), phi_res=rng.uniform(0, 2 * math.pi),
                           delta=rng.uniform(-math.pi, math.pi), theta=rng.uniform(0, 2 * math.pi))
        params = ChannelParams(T=rng.uniform(0.9, 1), tau=rng.uniform(0, 0.3), n_th=rng.uniform(0, 0.5), g=rng.uniform(0.7, 1.3))
        num, exact = moments_numeric(state, res, params), output_moments(state, res, params)
        for name in ("mean_x", "mean_p", "var_x", "var_p", "cov_xp"):
            assert getattr(num, name) == pytest.approx(getattr(exact, name), abs=1e-6)


def test_large_squeezing_vacuum():
    # the excess over the vacuum variance is e^{-2r}: 3.2e-3 at 25 dB, 1e-3 at 30 dB
    for r_db in (25.0, 32.0):
        r = db_to_natural(r_db)
        m = moments_numeric(InputState(), preset_resource("TwB", r), IDEAL)
        assert (m.mean_x, m.mean_p, m.cov_xp) == pytest.approx((0, 0, 0), abs=1e-8)
        assert m.var_x - 0.5 == pytest.approx(math.exp(-2 * r), abs=1e-8)
        assert m.var_p - 0.5 == pytest.approx(math.exp(-2 * r), abs=1e-8)
    assert m.var_x - 0.5 < 1e-3


def test_heisenberg_everywhere():
    rng = np.random.default_rng(9)
    for _ in range(300):
        state = InputState(0, rng.uniform(0, 1.5), rng.uniform(0, 2 * math.pi))
        res = ResourceSpec(r=rng.uniform(0, 2), phi_res=rng.uniform(0, 2 * math.pi),
                           delta=rng.uniform(-math.pi, math.pi), theta=rng.uniform(0, 2 * math.pi))
        params = ChannelParams(T=rng.uniform(0.8, 1), tau=rng.uniform(0, 0.5), n_th=rng.uniform(0, 1), g=rng.uniform(0.3, 2))
        assert output_moments(state, res, params).satisfies_heisenberg()
        assert input_moments(state).uncertainty_product() == pytest.approx(0.25, abs=1e-12)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_unstable_extrapolation_raises():
    with pytest.raises(ConvergenceError):
        moments_from_chi(lambda a: np.exp(-1e6 * abs(a) ** 2 + 1e3j * np.real(a) ** 3), step=0.1)
    with pytest.raises(ValueError):
        moments_from_chi(lambda a: 1.0, step=0.0)
