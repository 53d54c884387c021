r"""Characteristic functions of the input state and the entangled resources.

Conventions used throughout the package:

* displacement operator :math:`D(\alpha) = \exp(\alpha a^\dagger - \alpha^* a)`,
  so that :math:`\chi(i u/\sqrt{2}) = \langle e^{iuX}\rangle` and
  :math:`\chi(-u/\sqrt{2}) = \langle e^{iuP}\rangle`;
* single-mode squeezing :math:`S(\varepsilon) = \exp(-\tfrac12\varepsilon a^{\dagger 2}
  + \tfrac12\varepsilon^* a^2)` with :math:`\varepsilon = s e^{i\varphi}`;
* two-mode squeezing :math:`S_{12}(\zeta) = \exp(-\zeta a_1^\dagger a_2^\dagger
  + \zeta^* a_1 a_2)` with :math:`\zeta = r e^{i\phi}`.

The input characteristic function is
:math:`\chi_{in}(\alpha) = e^{\alpha\beta^* - \alpha^*\beta}
e^{-|\alpha\cosh s + \alpha^* e^{i\varphi}\sinh s|^2/2}`, which is normalized
(:math:`\chi_{in}(0) = 1`). A frequently reproduced variant places
:math:`\beta` inside the squeezed modulus; that form is not normalized and is
not used here.

For the squeezed Bell state
:math:`S_{12}(\zeta)(\cos\delta|0,0\rangle + e^{i\theta}\sin\delta|1,1\rangle)`
the mixed term of the characteristic function is
:math:`\sin\delta\cos\delta(e^{-i\theta}\xi_1\xi_2 + e^{i\theta}\xi_1^*\xi_2^*)`,
obtained by evaluating :math:`\langle m,m|D_1(\xi_1)D_2(\xi_2)|n,n\rangle` in
the Fock basis. Writing the phase the other way round changes nothing at
:math:`\theta = 0` but breaks agreement with the general excess-noise formula
in :mod:`cvteleport.moments` for other mixing phases.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .units import db_to_natural, natural_to_db

TWO_PI = 2.0 * math.pi
_PRESET_TOL = 1e-12


class ResourceKind(enum.Enum):
    """Named members of the squeezed Bell family."""

    TWB = "TwB"
    PAS = "PAS"
    PSS = "PSS"
    SB = "SB"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        for kind in cls:
            if str(value).lower() == kind.value.lower():
                return kind
        raise ValueError(f"unknown resource kind {value!r}")


@dataclass(frozen=True)
class InputState:
    """Coherent squeezed input :math:`D(\\beta)S(s e^{i\\varphi})|0\\rangle`.

    Args:
        beta (complex): coherent amplitude
        s (float): squeezing magnitude in natural units, ``s >= 0``
        varphi (float): squeezing phase; stored reduced to ``[0, 2 pi)``
    """

    beta: complex = 0j
    s: float = 0.0
    varphi: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.s) or self.s < 0:
            raise ValueError(f"squeezing s must be finite and >= 0, got {self.s}")
        beta = complex(self.beta)
        if not (math.isfinite(beta.real) and math.isfinite(beta.imag)):
            raise ValueError(f"beta must be finite, got {self.beta}")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "varphi", float(self.varphi) % TWO_PI)

    @classmethod
    def from_db(cls, beta=0j, s_db=0.0, varphi=0.0):
        return cls(beta=beta, s=db_to_natural(s_db), varphi=varphi)

    @property
    def s_db(self):
        return natural_to_db(self.s)


@dataclass(frozen=True)
class ResourceSpec:
    """Two-mode squeezed Bell resource.

    ``kind`` records which member of the family the angles describe. For the
    named presets the angles are pinned to functions of ``r`` and
    ``phi_res``; for ``ResourceKind.SB`` they are free parameters. Build
    presets with :func:`preset_resource` rather than by hand.
    """

    r: float
    phi_res: float = math.pi
    delta: float = 0.0
    theta: float = 0.0
    kind: ResourceKind = ResourceKind.SB

    def __post_init__(self):
        if not math.isfinite(self.r) or self.r < 0:
            raise ValueError(f"resource squeezing r must be finite and >= 0, got {self.r}")
        kind = ResourceKind.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is ResourceKind.SB:
            return
        delta, theta = _preset_angles(kind, self.r, self.phi_res)
        if abs(self.delta - delta) > _PRESET_TOL or not _same_angle(self.theta, theta):
            raise ValueError(
                f"{kind.value} requires delta={delta!r}, theta={theta!r}; "
                f"got delta={self.delta!r}, theta={self.theta!r}"
            )

    @property
    def r_db(self):
        return natural_to_db(self.r)

    def with_delta(self, delta, theta=None):
        """Free squeezed Bell resource with the same squeezing and new angles."""
        return ResourceSpec(
            r=self.r,
            phi_res=self.phi_res,
            delta=float(delta),
            theta=self.theta if theta is None else float(theta),
            kind=ResourceKind.SB,
        )


def _same_angle(a, b):
    d = (a - b) % TWO_PI
    return min(d, TWO_PI - d) <= _PRESET_TOL


def _preset_angles(kind, r, phi_res):
    if kind is ResourceKind.TWB:
        return 0.0, 0.0
    norm = 1.0 / math.sqrt(math.cosh(2.0 * r))
    if kind is ResourceKind.PAS:
        delta = math.acos(norm * math.sinh(r))
    elif kind is ResourceKind.PSS:
        # At r = 0 this is arccos(1) = 0, i.e. the vacuum, although
        # a1 a2 |0,0> itself vanishes there.
        delta = math.acos(min(1.0, norm * math.cosh(r)))
    else:
        return 0.0, 0.0
    return delta, phi_res - math.pi


def preset_resource(kind, r, phi_res=math.pi):
    """Build a resource of the given kind.

    TwB has ``delta = 0``; the photon-added and photon-subtracted states sit
    at ``delta = arccos(sinh r / sqrt(cosh 2r))`` and
    ``delta = arccos(cosh r / sqrt(cosh 2r))`` respectively, both with
    ``theta = phi_res - pi``. A free SB resource starts at ``delta = theta = 0``.

    Raises:
        ValueError: if ``r < 0``.
    """
    kind = ResourceKind.parse(kind)
    if r < 0:
        raise ValueError(f"resource squeezing r must be >= 0, got {r}")
    delta, theta = _preset_angles(kind, r, phi_res)
    return ResourceSpec(r=float(r), phi_res=float(phi_res), delta=delta, theta=theta, kind=kind)


def squeezed_argument(state, alpha):
    """Return ``alpha cosh s + conj(alpha) e^{i varphi} sinh s``."""
    alpha = np.asarray(alpha, dtype=complex)
    return alpha * math.cosh(state.s) + np.conj(alpha) * np.exp(1j * state.varphi) * math.sinh(state.s)


def chi_input(state, alpha):
    """Characteristic function of the coherent squeezed input.

    Args:
        state (InputState): input state
        alpha (complex or array_like): phase-space point(s)

    Returns:
        complex or ndarray: :math:`\\chi_{in}(\\alpha)`, same shape as ``alpha``
    """
    alpha = np.asarray(alpha, dtype=complex)
    beta = state.beta
    z = squeezed_argument(state, alpha)
    out = np.exp(alpha * np.conj(beta) - np.conj(alpha) * beta - 0.5 * np.abs(z) ** 2)
    return out[()] if out.ndim == 0 else out


def xi_pair(res, alpha1, alpha2):
    """The two-mode-squeezed arguments (xi_1, xi_2) of the resource."""
    alpha1 = np.asarray(alpha1, dtype=complex)
    alpha2 = np.asarray(alpha2, dtype=complex)
    c, sh = math.cosh(res.r), math.sinh(res.r)
    rot = np.exp(1j * res.phi_res)
    xi1 = alpha1 * c + np.conj(alpha2) * rot * sh
    xi2 = alpha2 * c + np.conj(alpha1) * rot * sh
    return xi1, xi2


def chi_resource(res, alpha1, alpha2):
    """Two-mode characteristic function :math:`\\chi_{SB}(\\alpha_1, \\alpha_2)`.

    Reduces to the twin-beam Gaussian :math:`e^{-(|\\xi_1|^2+|\\xi_2|^2)/2}`
    when ``delta = 0``.
    """
    xi1, xi2 = xi_pair(res, alpha1, alpha2)
    q1 = np.abs(xi1) ** 2
    q2 = np.abs(xi2) ** 2
    sd, cd = math.sin(res.delta), math.cos(res.delta)
    pair = xi1 * xi2
    mixed = sd * cd * (np.exp(-1j * res.theta) * pair + np.exp(1j * res.theta) * np.conj(pair))
    poly = 1.0 + mixed + sd * sd * (q1 * q2 - q1 - q2)
    out = np.exp(-0.5 * (q1 + q2)) * poly
    return out[()] if np.ndim(out) == 0 else out
