r"""First and second quadrature moments of the input and teleported states.

Quadratures are :math:`X = (a + a^\dagger)/\sqrt{2}` and
:math:`P = i(a^\dagger - a)/\sqrt{2}`; ``cov_xp`` is the symmetrized
cross-variance :math:`\langle XP + PX\rangle - 2\langle X\rangle\langle P\rangle`.

Teleportation scales the means and the cross-variance by the effective gain
(squared for the latter) and adds the same excess noise :func:`sigma` to both
quadrature variances.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channel import chi_output, gamma
from .errors import ConvergenceError

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class QuadratureMoments:
    mean_x: float
    mean_p: float
    var_x: float
    var_p: float
    cov_xp: float

    def uncertainty_product(self):
        """Determinant of the covariance matrix; at least 1/4 for physical states."""
        return self.var_x * self.var_p - (0.5 * self.cov_xp) ** 2

    def satisfies_heisenberg(self, tol=1e-9):
        return self.uncertainty_product() >= 0.25 - tol


@dataclass(frozen=True)
class MomentDeviations:
    """Output minus input moments."""

    d_x: float
    d_p: float
    d_var_x: float
    d_var_p: float
    d_cov_xp: float


def input_moments(state):
    """Moments of the coherent squeezed input."""
    beta, s, phi = state.beta, state.s, state.varphi
    c2, s2 = math.cosh(2.0 * s), math.sinh(2.0 * s)
    return QuadratureMoments(
        mean_x=SQRT2 * beta.real,
        mean_p=SQRT2 * beta.imag,
        var_x=0.5 * (c2 - math.cos(phi) * s2),
        var_p=0.5 * (c2 + math.cos(phi) * s2),
        cov_xp=-math.sin(phi) * s2,
    )


def sigma(res, params):
    """Excess variance added to each output quadrature.

    General in the resource angles and phases and in the effective gain;
    the twin-beam, photon-added and photon-subtracted cases follow by
    substituting the corresponding preset angles.
    """
    g = params.g_eff
    r, tau = res.r, params.tau
    phi, theta, two_delta = res.phi_res, res.theta, 2.0 * res.delta
    eh, et = math.exp(0.5 * tau), math.exp(tau)
    c2d, s2d = math.cos(two_delta), math.sin(two_delta)
    mix = math.cos(theta - phi) * s2d
    return (
        gamma(params)
        + math.exp(-0.5 * tau) * g * math.sin(theta - phi) * math.sin(phi) * s2d
        - 0.25 * math.exp(-2.0 * r - tau) * (1.0 + et * g * g - 2.0 * eh * g * math.cos(phi)) * (c2d - mix - 2.0)
        - 0.25 * math.exp(2.0 * r - tau) * (1.0 + et * g * g + 2.0 * eh * g * math.cos(phi)) * (c2d + mix - 2.0)
    )


def output_moments(state, res, params):
    """Moments of the teleported state."""
    m = input_moments(state)
    g = params.g_eff
    extra = sigma(res, params)
    return QuadratureMoments(
        mean_x=g * m.mean_x,
        mean_p=g * m.mean_p,
        var_x=g * g * m.var_x + extra,
        var_p=g * g * m.var_p + extra,
        cov_xp=g * g * m.cov_xp,
    )


def deviations(state, res, params):
    m = input_moments(state)
    g = params.g_eff
    extra = sigma(res, params)
    return MomentDeviations(
        d_x=(g - 1.0) * m.mean_x,
        d_p=(g - 1.0) * m.mean_p,
        d_var_x=(g * g - 1.0) * m.var_x + extra,
        d_var_p=(g * g - 1.0) * m.var_p + extra,
        d_cov_xp=(g * g - 1.0) * m.cov_xp,
    )


def _direction(angle):
    # chi(u * dir) = <exp(i u (X cos(angle) + P sin(angle)))>
    return (-math.sin(angle) + 1j * math.cos(angle)) / SQRT2


def _richardson(estimate, h, order, levels=2):
    """Richardson table on step sequence h, h/2, h/4, ... for an O(h^order) estimator.

    Returns the most extrapolated value and its change from the previous one.
    """
    row = [estimate(h / 2 ** k) for k in range(levels + 1)]
    prev_best = row[-1]
    for level in range(1, levels + 1):
        factor = 2.0 ** (order * level)
        row = [(factor * row[k + 1] - row[k]) / (factor - 1.0) for k in range(len(row) - 1)]
        if level < levels:
            prev_best = row[-1]
    return row[-1], abs(row[-1] - prev_best)


def _cumulants(chi, angle, step, tol):
    """Mean and variance of the quadrature at ``angle`` from ``log chi``."""
    direction = _direction(angle)

    def log_chi(u):
        return np.log(chi(u * direction))

    def first(h):
        return (log_chi(h) - log_chi(-h)).imag / (2.0 * h)

    def second(h):
        return -(log_chi(h) + log_chi(-h) - 2.0 * log_chi(0.0)).real / (h * h)

    mean, err_mean = _richardson(first, step, 2)
    var, err_var = _richardson(second, step, 2)
    if not (err_mean <= tol and err_var <= tol) or not (math.isfinite(mean) and math.isfinite(var)):
        raise ConvergenceError(
            f"Richardson extrapolation unstable at angle {angle:.3f}: "
            f"mean change {err_mean:.2e}, variance change {err_var:.2e} (tol {tol:.1e})"
        )
    return mean, var


def moments_from_chi(chi, step=1e-3, tol=1e-6):
    """Quadrature moments of any single-mode characteristic function.

    Uses central differences of ``log chi`` along the X, P and (X+P)/sqrt(2)
    directions with two levels of Richardson extrapolation.

    Raises:
        ConvergenceError: if the last extrapolation level moves any estimate
            by more than ``tol``.
    """
    if not (0.0 < step <= 0.1):
        raise ValueError(f"finite-difference step must lie in (0, 0.1], got {step}")
    mean_x, var_x = _cumulants(chi, 0.0, step, tol)
    mean_p, var_p = _cumulants(chi, 0.5 * math.pi, step, tol)
    _, var_diag = _cumulants(chi, 0.25 * math.pi, step, tol)
    return QuadratureMoments(
        mean_x=mean_x,
        mean_p=mean_p,
        var_x=var_x,
        var_p=var_p,
        cov_xp=2.0 * var_diag - var_x - var_p,
    )


def moments_numeric(state, res, params, step=1e-3, tol=1e-6):
    """Output moments extracted numerically from :func:`chi_output`."""
    return moments_from_chi(lambda a: chi_output(state, res, params, a), step=step, tol=tol)
