"""Oracle-equivalence checks shared by the ``verify`` command.

Each check draws a seeded random parameter grid, evaluates a closed form and
an independent numerical route, and reports the largest discrepancy.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams
from .fidelity import fidelity_beta_independent, fidelity_closed_form, fidelity_numeric
from .moments import moments_numeric, output_moments
from .optimize import argmin_sigma_bruteforce, delta_opt_fidelity, delta_opt_variance
from .states import InputState, ResourceSpec
from .units import db_to_natural

TEN_DB = db_to_natural(10.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    points: int
    max_error: float
    tolerance: float

    @property
    def passed(self):
        return self.max_error < self.tolerance


def _random_channel(rng, unity_gain):
    R2 = rng.uniform(0.0, 0.1)
    T = math.sqrt(1.0 - R2)
    g = 1.0 / T if unity_gain else rng.uniform(0.7, 1.3) / T
    return ChannelParams(T=T, tau=rng.uniform(0.0, 0.3), n_th=rng.uniform(0.0, 0.5), g=g)


def _random_beta(rng, radius=2.0):
    return radius * math.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))


def check_fidelity_oracle(points=200, tolerance=1e-8, seed=0):
    """Closed-form fidelity against phase-space quadrature at (phi_res, theta) = (pi, 0)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(points):
        state = InputState(beta=_random_beta(rng), s=rng.uniform(0.0, TEN_DB), varphi=0.0)
        delta = math.pi / 4 - rng.uniform(0.0, math.pi / 2)
        res = ResourceSpec(r=rng.uniform(0.0, TEN_DB), delta=delta)
        params = _random_channel(rng, unity_gain=bool(k % 2))
        worst = max(worst, abs(fidelity_numeric(state, res, params) - fidelity_closed_form(state, res, params)))
    return CheckResult("fidelity: quadrature vs closed form", points, worst, tolerance)


def check_moment_oracle(points=100, tolerance=1e-6, seed=1):
    """Finite-difference moments of chi_out against the closed-form moments."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(points):
        state = InputState(
            beta=_random_beta(rng), s=rng.uniform(0.0, TEN_DB), varphi=rng.uniform(0.0, 2.0 * math.pi)
        )
        res = ResourceSpec(
            r=rng.uniform(0.0, TEN_DB),
            phi_res=rng.uniform(0.0, 2.0 * math.pi),
            delta=rng.uniform(-math.pi / 2, math.pi / 2),
            theta=rng.uniform(0.0, 2.0 * math.pi),
        )
        params = _random_channel(rng, unity_gain=False)
        a = output_moments(state, res, params)
        b = moments_numeric(state, res, params)
        worst = max(
            worst,
            abs(a.mean_x - b.mean_x),
            abs(a.mean_p - b.mean_p),
            abs(a.var_x - b.var_x),
            abs(a.var_p - b.var_p),
            abs(a.cov_xp - b.cov_xp),
        )
    return CheckResult("moments: finite differences vs closed form", points, worst, tolerance)


def check_variance_optimum(points=50, tolerance=1e-6, seed=2):
    """Brute-force argmin of the excess variance against the arctan formula."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(points):
        r = rng.uniform(0.0, TEN_DB)
        params = _random_channel(rng, unity_gain=True)
        worst = max(worst, abs(argmin_sigma_bruteforce(r, params) - delta_opt_variance(r, params.tau)))
    return CheckResult("variance optimum: brute force vs closed form", points, worst, tolerance)


def check_fidelity_stationarity(points=50, tolerance=1e-6, seed=3, step=1e-4):
    """Central-difference slope of F_S at the closed-form fidelity optimum."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(points):
        s, r = rng.uniform(0.0, TEN_DB), rng.uniform(0.0, TEN_DB)
        params = _random_channel(rng, unity_gain=True)
        d = delta_opt_fidelity(s, r, params)

        def f(x):
            return fidelity_beta_independent(s, ResourceSpec(r=r, delta=x), params)

        slope = (f(d + step) - f(d - step)) / (2.0 * step)
        curvature = f(d + step) + f(d - step) - 2.0 * f(d)
        worst = max(worst, abs(slope), 0.0 if curvature < 0 else math.inf)
    return CheckResult("fidelity optimum: stationarity", points, worst, tolerance)


def run_all(tolerance=None):
    """Run every check; ``tolerance`` overrides each check's default."""
    checks = (check_fidelity_oracle, check_moment_oracle, check_variance_optimum, check_fidelity_stationarity)
    kwargs = {} if tolerance is None else {"tolerance": tolerance}
    return [check(**kwargs) for check in checks]
