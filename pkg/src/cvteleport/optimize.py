"""Optimal squeezed Bell mixing angles.

Two inequivalent criteria select the angle ``delta`` of a squeezed Bell
resource at ``(phi_res, theta) = (pi, 0)`` and unit effective gain:

* fidelity maximization, which depends on the (unknown) input squeezing
  ``s``; in practice ``s`` is replaced by a fixed representative value
  ``s_bar`` (5 dB by default), giving the sub-optimal angle;
* minimization of the excess quadrature variance, which depends only on
  ``r`` and ``tau``.

Both closed forms use the principal branch of arctan, so the angles lie in
``(-pi/4, pi/4)``.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize as _sciopt

from .channel import ChannelParams
from .errors import ConvergenceError
from .fidelity import derived_quantities, fidelity_beta_independent
from .moments import sigma
from .states import InputState, ResourceSpec
from .units import db_to_natural, natural_to_db

DEFAULT_S_BAR = db_to_natural(5.0)

__all__ = [
    "DEFAULT_S_BAR",
    "OptimizationResult",
    "Procedure",
    "argmin_sigma_bruteforce",
    "db_to_natural",
    "delta_opt_fidelity",
    "delta_opt_variance",
    "delta_subopt",
    "natural_to_db",
    "optimize_fidelity",
    "optimize_variance",
]


class Procedure(enum.Enum):
    FIDELITY_MAX = "FidelityMax"
    VARIANCE_MIN = "VarianceMin"


@dataclass(frozen=True)
class OptimizationResult:
    delta_star: float
    objective_value: float
    procedure: Procedure
    params: ChannelParams
    r: float


def _sb(r, delta=0.0):
    return ResourceSpec(r=r, phi_res=math.pi, delta=delta, theta=0.0)


def delta_opt_fidelity(input_s, r, params):
    """Angle maximizing the unit-gain fidelity for input squeezing ``input_s``.

    Only ``T``, ``tau`` and ``n_th`` of ``params`` are used; the gain is set
    to ``1/T``. For the ideal channel and ``input_s = 0`` this reduces to
    ``arctan(1 + exp(-2r)) / 2``.
    """
    params = params.with_unity_gain()
    q = derived_quantities(InputState(s=input_s), _sb(r), params)
    L1, L2 = q.lambda1, q.lambda2
    weight = math.exp(-2.0 * r - params.tau)
    num = 4.0 * q.delta2 * L1 * L2 * (L1 + L2)
    den = 4.0 * q.delta1 * L1 * L2 * (L1 + L2) - weight * q.delta2 ** 2 * (3.0 * L1 ** 2 + 2.0 * L1 * L2 + 3.0 * L2 ** 2)
    return 0.5 * math.atan(num / den)


def delta_subopt(r, params, s_bar=DEFAULT_S_BAR):
    """Fidelity-optimal angle evaluated at the representative squeezing ``s_bar``."""
    return delta_opt_fidelity(s_bar, r, params)


def delta_opt_variance(r, tau):
    """Angle minimizing the excess quadrature variance.

    Independent of the detector inefficiency and the bath temperature;
    equals ``pi/8`` for ``tau = 0``.
    """
    eh = math.exp(0.5 * tau)
    plus = (1.0 + eh) ** 2
    minus = math.exp(4.0 * r) * (1.0 - eh) ** 2
    return 0.5 * math.atan((plus - minus) / (plus + minus))


def argmin_sigma_bruteforce(r, params, grid_size=721, xtol=1e-10):
    """Minimize the unit-gain excess variance over ``delta`` numerically.

    Scans ``delta`` over ``(-pi/2, pi/2]`` on a uniform grid and refines the
    best cell by golden-section search. Used as an independent check of
    :func:`delta_opt_variance`.

    Raises:
        ConvergenceError: if the refined point does not improve on the grid
            or leaves its bracketing cell.
    """
    if grid_size < 8:
        raise ValueError(f"grid_size must be >= 8, got {grid_size}")
    params = params.with_unity_gain()

    def objective(delta):
        return sigma(_sb(r, delta), params)

    grid = np.linspace(-0.5 * math.pi, 0.5 * math.pi, grid_size + 1)[1:]
    values = np.array([objective(d) for d in grid])
    i = int(np.argmin(values))
    h = grid[1] - grid[0]
    lo, mid, hi = grid[i] - h, grid[i], grid[i] + h
    res = _sciopt.minimize_scalar(
        objective, bracket=(lo, mid, hi), method="golden", options={"xtol": xtol}
    )
    if not res.success or not (lo <= res.x <= hi) or res.fun > values[i] + 1e-15:
        raise ConvergenceError(f"golden-section refinement failed near delta={mid:.6f}: {res.message}")
    # the objective has period pi; fold back onto (-pi/2, pi/2]
    return 0.5 * math.pi - (0.5 * math.pi - float(res.x)) % math.pi


def optimize_fidelity(input_s, r, params, s_bar=None):
    """Fidelity-maximizing (or, with ``s_bar``, sub-optimal) squeezed Bell angle."""
    params = params.with_unity_gain()
    delta = delta_opt_fidelity(input_s if s_bar is None else s_bar, r, params)
    value = fidelity_beta_independent(input_s, _sb(r, delta), params)
    return OptimizationResult(delta, value, Procedure.FIDELITY_MAX, params, r)


def optimize_variance(r, params, verify=False, tol=1e-6):
    """Variance-minimizing squeezed Bell angle.

    With ``verify=True`` the closed form is cross-checked against
    :func:`argmin_sigma_bruteforce`; a mismatch (including one caused by
    landing on a different arctan branch) raises instead of being corrected.
    """
    params = params.with_unity_gain()
    delta = delta_opt_variance(r, params.tau)
    if verify:
        brute = argmin_sigma_bruteforce(r, params)
        if abs(brute - delta) > tol:
            raise ConvergenceError(
                f"closed-form variance optimum {delta:.9f} disagrees with brute force {brute:.9f}"
            )
    return OptimizationResult(delta, sigma(_sb(r, delta), params), Procedure.VARIANCE_MIN, params, r)
