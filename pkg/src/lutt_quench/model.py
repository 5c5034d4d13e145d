"""Model parameters and the mode dispersion of the box-potential Luttinger model.

Units: v_F = 1 throughout. The box potential equals ``v0`` for ``p <= p_cut`` and
vanishes above, so every mode-dependent quantity is piecewise constant in ``p``.

Two parameterizations of the Bogoliubov angle are supported:

* ``Convention.THEOREM`` (default): ``tanh 2phi = -g`` with ``g = lam*v/(2 pi)``,
  ``omega = sqrt(1 - g**2)`` and ``gamma = lam*v/(4 pi)``.
* ``Convention.ANGLE``: ``tanh phi = -g``, ``sigma = sech 2phi - 1`` and
  ``gamma = 2 sinh(phi) cosh(phi) (sinh(phi) + cosh(phi))**2`` taken literally.

In both cases ``omega = sigma + 1``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import StabilityError

TWO_PI = 2.0 * math.pi


class Convention(str, enum.Enum):
    THEOREM = "theorem"
    ANGLE = "angle"


@dataclass(frozen=True)
class ModelParams:
    """Scalar parameters of the model.

    ``lam`` is the dimensionless coupling, ``v0`` the box height, ``p_cut`` the
    box edge and ``p_F`` the Fermi momentum (it only enters through cosine phases).
    """

    lam: float
    v0: float
    p_cut: float = 1.0
    p_F: float = 0.0
    convention: Convention = Convention.THEOREM
    v_F: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "convention", Convention(self.convention))
        if self.v_F != 1.0:
            raise ValueError("v_F is fixed to 1")
        if not self.p_cut > 0:
            raise ValueError(f"p_cut must be positive, got {self.p_cut}")
        for name in ("lam", "v0", "p_F"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        check_stability(self)

    @property
    def coupling_ratio(self) -> float:
        """g0 = lam * v0 / (2 pi) on the box support."""
        return self.lam * self.v0 / TWO_PI

    @property
    def omega0(self) -> float:
        return float(dispersion(self, 0.0).omega)

    @property
    def gamma0(self) -> float:
        return float(dispersion(self, 0.0).gamma)

    def with_convention(self, convention) -> "ModelParams":
        return ModelParams(self.lam, self.v0, self.p_cut, self.p_F, Convention(convention))

    def as_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "v0": self.v0,
            "p_cut": self.p_cut,
            "p_F": self.p_F,
            "v_F": self.v_F,
            "convention": self.convention.value,
        }


@dataclass(frozen=True)
class DispersionData:
    phi: np.ndarray | float
    sigma: np.ndarray | float
    omega: np.ndarray | float
    gamma: np.ndarray | float


def check_stability(params: ModelParams) -> None:
    """Raise StabilityError unless |lam * v0| < 2 pi (the boundary is unstable)."""
    if not abs(params.lam * params.v0) < TWO_PI:
        raise StabilityError(
            f"|lambda*v0| = {abs(params.lam * params.v0):.17g} >= 2*pi; model unstable"
        )


def potential(params: ModelParams, p):
    """Box potential: v0 for p <= p_cut (inclusive), 0 above."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValueError("potential is defined for p >= 0")
    out = np.where(p <= params.p_cut, params.v0, 0.0)
    return float(out) if out.ndim == 0 else out


def dispersion(params: ModelParams, p) -> DispersionData:
    """phi, sigma, omega and gamma at momentum ``p`` (scalar or array)."""
    p_arr = np.asarray(p, dtype=float)
    g = params.lam * np.asarray(potential(params, np.abs(p_arr)), dtype=float) / TWO_PI
    if np.any(np.abs(g) >= 1.0):
        raise StabilityError("|lambda*v(p)| >= 2*pi")
    if params.convention is Convention.THEOREM:
        phi = 0.5 * np.arctanh(-g)
        omega = np.sqrt(1.0 - g * g)
        gamma = 0.5 * g
        sigma = omega - 1.0
    else:
        phi = np.arctanh(-g)
        sigma = 1.0 / np.cosh(2.0 * phi) - 1.0
        omega = sigma + 1.0
        sh, ch = np.sinh(phi), np.cosh(phi)
        gamma = 2.0 * sh * ch * (sh + ch) ** 2
    if p_arr.ndim == 0:
        return DispersionData(float(phi), float(sigma), float(omega), float(gamma))
    return DispersionData(phi, sigma, omega, gamma)


def derived_landau_coefficient(params: ModelParams, p):
    """Coefficient of (cos 2 p omega t - 1) obtained by contracting the vertex operators.

    This is 2 sinh(phi) cosh(phi) (sinh(phi) + cosh(phi))**2 = sinh(2 phi) e^{2 phi}
    at the active angle. Under ``THEOREM`` it reduces to ``-g / (1 + g)`` with
    g = lam v / (2 pi); under ``ANGLE`` it coincides with ``dispersion(...).gamma``.
    """
    phi = np.asarray(dispersion(params, p).phi)
    coeff = np.sinh(2.0 * phi) * np.exp(2.0 * phi)
    return float(coeff) if coeff.ndim == 0 else coeff


def convention_discrepancy(params: ModelParams) -> dict:
    """Differences between the two conventions on the box support.

    Also reports the reading ``gamma0 = v0/2`` next to ``lam*v0/(4 pi)``.
    """
    th = dispersion(params.with_convention(Convention.THEOREM), 0.0)
    an = dispersion(params.with_convention(Convention.ANGLE), 0.0)
    return {
        "omega_theorem": th.omega,
        "omega_angle": an.omega,
        "omega_difference": an.omega - th.omega,
        "gamma_theorem": th.gamma,
        "gamma_angle": an.gamma,
        "gamma_difference": an.gamma - th.gamma,
        "phi_theorem": th.phi,
        "phi_angle": an.phi,
        "gamma0_v0_over_2": params.v0 / 2.0,
        "gamma_derived": float(derived_landau_coefficient(params, 0.0)),
    }


DEFAULT_CONE_WINDOW = 1e-9


def check_light_cones(separation: float, t: float, velocities, window: float = DEFAULT_CONE_WINDOW):
    """Raise LightConeSingularity if ``| |separation| - v |t| | < window`` for any velocity."""
    from .errors import LightConeSingularity

    for v in velocities:
        if abs(abs(separation) - v * abs(t)) < window:
            raise LightConeSingularity(
                f"x-z={separation:.17g} within {window:g} of the cone |x-z| = {v:.17g}*|t|"
            )
