"""Output characteristic function of the VBK protocol with losses.

The imperfect protocol is parametrized by the homodyne-detector amplitude
transmissivity ``T`` (inefficiency ``R = sqrt(1 - T**2)``), the scaled fiber
time ``tau``, the fiber bath occupation ``n_th`` and the gain ``g``. The output
characteristic function factorizes as

    chi_out(a) = exp(-Gamma |a|^2) chi_in(g T a) chi_res(g T conj(a), exp(-tau/2) a)

with ``Gamma = (1 - exp(-tau)) (1/2 + n_th) + g^2 R^2``.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .states import chi_input, chi_resource


@dataclass(frozen=True)
class ChannelParams:
    """Parameters of the (possibly imperfect) teleportation channel."""

    T: float = 1.0
    tau: float = 0.0
    n_th: float = 0.0
    g: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.T <= 1.0):
            raise ValueError(f"transmissivity T must lie in (0, 1], got {self.T}")
        if not math.isfinite(self.tau) or self.tau < 0:
            raise ValueError(f"tau must be finite and >= 0, got {self.tau}")
        if not math.isfinite(self.n_th) or self.n_th < 0:
            raise ValueError(f"n_th must be finite and >= 0, got {self.n_th}")
        if not math.isfinite(self.g) or self.g <= 0:
            raise ValueError(f"gain g must be finite and > 0, got {self.g}")

    @classmethod
    def ideal(cls):
        return cls()

    @classmethod
    def unity_gain(cls, T=1.0, tau=0.0, n_th=0.0):
        """Channel with ``g = 1/T`` so that the effective gain is exactly one."""
        return cls(T=T, tau=tau, n_th=n_th, g=1.0 / T)

    @classmethod
    def from_loss(cls, R2=0.0, tau=0.0, n_th=0.0, g=None):
        """Build from the detector reflectivity ``R**2``; ``g=None`` means ``1/T``."""
        if not (0.0 <= R2 < 1.0):
            raise ValueError(f"R^2 must lie in [0, 1), got {R2}")
        T = math.sqrt(1.0 - R2)
        return cls(T=T, tau=tau, n_th=n_th, g=1.0 / T if g is None else g)

    @property
    def R2(self):
        return 1.0 - self.T * self.T

    @property
    def R(self):
        return math.sqrt(self.R2)

    @property
    def g_eff(self):
        return self.g * self.T

    @property
    def is_unity_gain(self):
        return abs(self.g_eff - 1.0) <= 1e-14

    def with_unity_gain(self):
        return replace(self, g=1.0 / self.T)


def gamma(params):
    """Gaussian excess-noise exponent ``Gamma_{tau,R}``."""
    return (1.0 - math.exp(-params.tau)) * (0.5 + params.n_th) + params.g ** 2 * params.R2


def resource_arguments(params, alpha):
    """Map the output point ``alpha`` onto the two resource arguments.

    Mode 1 (Alice's, measured together with the input) receives
    ``g T conj(alpha)``; mode 2 (sent to Bob through the fiber) receives
    ``exp(-tau/2) alpha``.
    """
    alpha = np.asarray(alpha, dtype=complex)
    return params.g_eff * np.conj(alpha), math.exp(-0.5 * params.tau) * alpha


def chi_output(state, res, params, alpha):
    """Characteristic function of the teleported state at ``alpha``."""
    alpha = np.asarray(alpha, dtype=complex)
    a1, a2 = resource_arguments(params, alpha)
    out = (
        np.exp(-gamma(params) * np.abs(alpha) ** 2)
        * chi_input(state, params.g_eff * alpha)
        * chi_resource(res, a1, a2)
    )
    return out[()] if np.ndim(out) == 0 else out
