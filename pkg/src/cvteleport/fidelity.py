r"""Teleportation fidelity.

Two independent routes are provided:

* :func:`fidelity_closed_form` / :func:`fidelity_beta_independent` evaluate the
  analytic expressions for squeezed Bell resources at the optimal resource
  phases ``(phi_res, theta) = (pi, 0)``;
* :func:`fidelity_numeric` integrates
  :math:`F = \frac{1}{\pi}\int d^2\alpha\,\chi_{in}(\alpha)\chi_{out}(-\alpha)`
  by tensor-product Gauss-Legendre quadrature and accepts arbitrary phases.

Sign behaviour of the displacement terms: ``omega1_sq`` equals
``(1 - g_eff)^2 (beta - conj(beta))^2 = -4 (1 - g_eff)^2 Im(beta)^2`` and is
therefore never positive, while ``omega2_sq = 4 (1 - g_eff)^2 Re(beta)^2`` is
never negative. The prefactor ``exp(omega1_sq/Lambda1 - omega2_sq/Lambda2)``
is thus at most one, and equals one at unit effective gain.

The closed form is exact for input squeezing phase ``varphi = 0``. It stays
exact for any ``varphi`` when ``g_eff = 1`` or ``beta = 0``; away from those
cases the true fidelity does depend on ``varphi`` (the squeezing axis is then
seen relative to the residual displacement ``(1 - g_eff) beta``), so the
closed form refuses such inputs instead of returning a wrong number.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .channel import chi_output, gamma, resource_arguments
from .errors import ConvergenceError, DomainError, PhaseConventionError
from .states import InputState, chi_input, squeezed_argument, xi_pair

_PHASE_TOL = 1e-12
_RANGE_SLACK = 1e-9


@dataclass(frozen=True)
class DerivedQuantities:
    """The auxiliary bundle entering the closed-form fidelity."""

    delta1: float
    delta2: float
    lambda1: float
    lambda2: float
    omega1_sq: float
    omega2_sq: float


@dataclass(frozen=True)
class QuadratureRule:
    """Tensor-product Gauss-Legendre rule in whitened phase-space coordinates.

    ``half_width`` is measured in units of the Gaussian envelope's standard
    deviation along each principal axis; the default of 10 leaves a tail
    mass far below 1e-12 even after multiplication by the quartic prefactor.
    """

    order: int = 96
    half_width: float = 10.0
    tol: float = 1e-9

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 8:
            raise ValueError(f"quadrature order must be an integer >= 8, got {self.order}")
        if not self.half_width > 0:
            raise ValueError(f"half_width must be > 0, got {self.half_width}")
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")


def derived_quantities(state, res, params):
    """Evaluate Delta_1,2, Lambda_1,2 and omega_1,2^2 for the given setup."""
    g = params.g_eff
    r, s, tau = res.r, state.s, params.tau
    e4r = math.exp(4.0 * r)
    eh = math.exp(0.5 * tau)
    noise = 4.0 * gamma(params)
    # factored to avoid cancellation between the e^{4r} terms at large r
    plus, minus = (1.0 + eh * g) ** 2, e4r * (1.0 - eh * g) ** 2
    delta1 = plus + minus
    delta2 = plus - minus
    resource_noise = math.exp(-2.0 * r - tau) * delta1
    lambda1 = resource_noise + 2.0 * math.exp(2.0 * s) * (1.0 + g * g) + noise
    lambda2 = resource_noise + 2.0 * math.exp(-2.0 * s) * (1.0 + g * g) + noise
    beta = state.beta
    residual = (1.0 - g) ** 2
    omega1_sq = residual * ((beta - beta.conjugate()) ** 2).real
    omega2_sq = residual * ((beta + beta.conjugate()) ** 2).real
    return DerivedQuantities(delta1, delta2, lambda1, lambda2, omega1_sq, omega2_sq)


def _check_optimal_phases(res):
    d_phi = (res.phi_res - math.pi) % (2.0 * math.pi)
    d_theta = res.theta % (2.0 * math.pi)
    if min(d_phi, 2.0 * math.pi - d_phi) > _PHASE_TOL or min(d_theta, 2.0 * math.pi - d_theta) > _PHASE_TOL:
        raise PhaseConventionError(
            "closed-form fidelity holds only at phi_res = pi, theta = 0 "
            f"(got phi_res={res.phi_res!r}, theta={res.theta!r}); use fidelity_numeric"
        )


def _check_range(value):
    if not (-_RANGE_SLACK <= value <= 1.0 + _RANGE_SLACK) or not math.isfinite(value):
        raise DomainError(f"fidelity {value!r} outside [0, 1]")
    return value


def fidelity_closed_form(state, res, params):
    """Analytic one-shot fidelity for a coherent squeezed input.

    Raises:
        PhaseConventionError: for resource phases other than ``(pi, 0)``, or
            for ``varphi != 0`` combined with ``g_eff != 1`` and ``beta != 0``.
        DomainError: if the result leaves ``[0, 1]``.
    """
    _check_optimal_phases(res)
    varphi_is_zero = min(state.varphi, 2.0 * math.pi - state.varphi) <= _PHASE_TOL
    if not varphi_is_zero and abs(params.g_eff - 1.0) > 1e-14 and state.beta != 0:
        raise PhaseConventionError(
            "closed-form fidelity assumes varphi = 0 when g_eff != 1 and beta != 0; "
            "use fidelity_numeric"
        )
    q = derived_quantities(state, res, params)
    L1, L2 = q.lambda1, q.lambda2
    w1, w2 = q.omega1_sq, q.omega2_sq
    E = math.exp(-(2.0 * res.r + params.tau))
    sd, cd = math.sin(res.delta), math.cos(res.delta)

    first = (
        E * sd * (q.delta2 * cd - q.delta1 * sd)
        * ((1.0 + 2.0 * w1 / L1) / L1 + (1.0 - 2.0 * w2 / L2) / L2)
    )
    second = (
        0.25 * E * E * q.delta2 ** 2 * sd * sd
        * (
            (3.0 + 12.0 * w1 / L1 + 4.0 * w1 * w1 / L1 ** 2) / L1 ** 2
            + (3.0 - 12.0 * w2 / L2 + 4.0 * w2 * w2 / L2 ** 2) / L2 ** 2
            + 2.0 / (L1 * L2) * (1.0 + 2.0 * w1 / L1 - 2.0 * w2 / L2 - 4.0 * w1 * w2 / (L1 * L2))
        )
    )
    value = 4.0 / math.sqrt(L1 * L2) * math.exp(w1 / L1 - w2 / L2) * (1.0 + first + second)
    return _check_range(value)


def fidelity_beta_independent(input_s, res, params):
    """Unit-effective-gain fidelity ``F_S``, independent of the displacement.

    ``params`` supplies ``T``, ``tau`` and ``n_th``; its gain is replaced by
    ``1/T``.
    """
    _check_optimal_phases(res)
    params = params.with_unity_gain()
    q = derived_quantities(InputState(s=input_s), res, params)
    L1, L2 = q.lambda1, q.lambda2
    E = math.exp(-(2.0 * res.r + params.tau))
    sd, cd = math.sin(res.delta), math.cos(res.delta)
    value = 4.0 / math.sqrt(L1 * L2) * (
        0.25 * E * E * q.delta2 ** 2 * sd * sd * (3.0 / L1 ** 2 + 3.0 / L2 ** 2 + 2.0 / (L1 * L2))
        + E * sd * (q.delta2 * cd - q.delta1 * sd) * (1.0 / L1 + 1.0 / L2)
        + 1.0
    )
    return _check_range(value)


def _real_matrix(linear_map):
    # columns: images of 1 and i under a real-linear map C -> C
    z1 = complex(linear_map(1.0 + 0j))
    zi = complex(linear_map(1j))
    return np.array([[z1.real, zi.real], [z1.imag, zi.imag]])


def _envelope_curvature(state, res, params):
    """Real 2x2 matrix A with |integrand| ~ poly * exp(-v.A.v / 2), v = (Re a, Im a)."""
    m_in = _real_matrix(lambda a: squeezed_argument(state, a))
    m_xi1 = _real_matrix(lambda a: xi_pair(res, *resource_arguments(params, a))[0])
    m_xi2 = _real_matrix(lambda a: xi_pair(res, *resource_arguments(params, a))[1])
    g = params.g_eff
    return (
        (1.0 + g * g) * m_in.T @ m_in
        + m_xi1.T @ m_xi1
        + m_xi2.T @ m_xi2
        + 2.0 * gamma(params) * np.eye(2)
    )


def _integrate(state, res, params, order, half_width, basis, jacobian):
    nodes, weights = leggauss(order)
    nodes = nodes * half_width
    weights = weights * half_width
    y1, y2 = np.meshgrid(nodes, nodes, indexing="ij")
    w = np.outer(weights, weights)
    v1 = basis[0, 0] * y1 + basis[0, 1] * y2
    v2 = basis[1, 0] * y1 + basis[1, 1] * y2
    alpha = v1 + 1j * v2
    integrand = chi_input(state, alpha) * chi_output(state, res, params, -alpha)
    return complex(np.sum(w * integrand)) * jacobian / math.pi


def fidelity_numeric(state, res, params, rule=None):
    """Fidelity by direct phase-space quadrature.

    The integration box is aligned with the principal axes of the integrand's
    Gaussian envelope and scaled by its widths. The result is accepted only
    if doubling the order changes it by less than ``rule.tol``.

    Raises:
        ConvergenceError: if the order-doubling check fails.
    """
    rule = rule or QuadratureRule()
    curvature = _envelope_curvature(state, res, params)
    eigvals, eigvecs = np.linalg.eigh(curvature)
    if eigvals[0] <= 0:
        raise ConvergenceError(f"integrand envelope is not decaying (eigenvalues {eigvals})")
    basis = eigvecs / np.sqrt(eigvals)
    jacobian = abs(np.linalg.det(basis))
    coarse = _integrate(state, res, params, rule.order, rule.half_width, basis, jacobian)
    fine = _integrate(state, res, params, 2 * rule.order, rule.half_width, basis, jacobian)
    if abs(fine - coarse) > rule.tol:
        raise ConvergenceError(
            f"quadrature not converged: order {rule.order} -> {2 * rule.order} "
            f"changed the fidelity by {abs(fine - coarse):.3e} (tol {rule.tol:.1e})"
        )
    return fine.real
