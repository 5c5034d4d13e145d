"""Finite-volume mode sums on the grid p_n = 2 pi n / L, n = 1..n_max.

Every sum runs in ascending p through ``math.fsum`` so results do not depend on
how a batch of evaluation points is partitioned across workers. Two-vertex
exponents carry the regulator exp(-2 delta p).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .model import (
    DEFAULT_CONE_WINDOW,
    ModelParams,
    derived_landau_coefficient,
    check_light_cones,
    dispersion,
)
from .numerics import compensated_sum, compensated_sum_complex

BRANCH_SIGN = {1: 1, 2: -1}


@dataclass(frozen=True)
class ModeGrid:
    L: float
    n_max: int
    delta: float

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("L must be positive")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError("n_max must be a positive integer")
        object.__setattr__(self, "n_max", int(self.n_max))
        if not self.delta > 0:
            raise ValueError("delta must be positive")

    @property
    def indices(self) -> np.ndarray:
        return np.arange(1, self.n_max + 1, dtype=float)

    @property
    def momenta(self) -> np.ndarray:
        return 2.0 * math.pi * self.indices / self.L

    @property
    def p_max(self) -> float:
        return 2.0 * math.pi * self.n_max / self.L

    def covers(self, p_cut: float) -> bool:
        return self.p_max >= p_cut

    def as_dict(self) -> dict:
        return {"L": self.L, "n_max": self.n_max, "delta": self.delta}

    @classmethod
    def covering(cls, L: float, delta: float, p_cut: float = 1.0, tail: float = 0.0) -> "ModeGrid":
        """Smallest grid reaching ``max(p_cut, tail/delta)``."""
        p_need = max(p_cut, tail / delta)
        return cls(L, max(1, math.ceil(p_need * L / (2.0 * math.pi))), delta)


def require_cover(grid: ModeGrid, params: ModelParams) -> None:
    if not grid.covers(params.p_cut):
        raise ValueError(
            f"grid reaches p = {grid.p_max:.6g} < p_cut = {params.p_cut}; increase n_max"
        )


@dataclass(frozen=True)
class ExponentBreakdown:
    z_term: complex
    q_plus: complex
    q_minus: complex
    free_reference: complex

    @property
    def total(self) -> complex:
        return self.z_term + self.q_plus + self.q_minus


def _weights(grid: ModeGrid) -> tuple[np.ndarray, np.ndarray]:
    p = grid.momenta
    # 2 pi / (L p) = 1/n
    return p, np.exp(-2.0 * grid.delta * p) / grid.indices


def exponent_main1(
    params: ModelParams,
    separation: float,
    t: float,
    grid: ModeGrid,
    gamma_source: Literal["convention", "derived"] = "convention",
    gamma_shift: float = 0.0,
) -> ExponentBreakdown:
    """Exponent multiplying the free mixed two-point product, split into its groups.

    ``separation`` is x - z. ``gamma_source="derived"`` replaces the Landau
    coefficient by the value produced by contracting the vertex operators
    (see ``model.derived_landau_coefficient``). ``gamma_shift`` adds a constant to gamma on the box
    support (fault injection for the verification harness).
    """
    require_cover(grid, params)
    p, weight = _weights(grid)
    d = dispersion(params, p)
    w = d.omega
    if gamma_source == "convention":
        gamma = np.asarray(d.gamma, dtype=float)
    elif gamma_source == "derived":
        gamma = np.asarray(derived_landau_coefficient(params, p), dtype=float)
    else:
        raise ValueError(f"unknown gamma_source {gamma_source!r}")
    if gamma_shift:
        gamma = gamma + np.where(p <= params.p_cut, gamma_shift, 0.0)
    space = np.exp(1j * p * separation)
    q_plus = weight * space * (np.exp(1j * p * w * t) - np.exp(1j * p * t))
    q_minus = weight * space * (np.exp(-1j * p * w * t) - np.exp(-1j * p * t))
    z = weight * gamma * (np.cos(2.0 * p * w * t) - 1.0)
    free = weight * space * (np.exp(1j * p * t) + np.exp(-1j * p * t))
    return ExponentBreakdown(
        z_term=complex(compensated_sum(z)),
        q_plus=compensated_sum_complex(q_plus),
        q_minus=compensated_sum_complex(q_minus),
        free_reference=compensated_sum_complex(free),
    )


def z_sum(params: ModelParams, t: float, grid: ModeGrid) -> float:
    """Finite-L Landau exponent sum_p (2 pi/(L p)) e^{-2 delta p} gamma (cos 2 p omega t - 1)."""
    require_cover(grid, params)
    p, weight = _weights(grid)
    d = dispersion(params, p)
    return compensated_sum(weight * d.gamma * (np.cos(2.0 * p * d.omega * t) - 1.0))


def _one_minus_exp(a: complex) -> complex:
    """1 - exp(-a) without cancellation for small |a|."""
    x, y = -a.real, -a.imag
    em1 = math.expm1(x)
    real = -(em1 * math.cos(y) - 2.0 * math.sin(0.5 * y) ** 2)
    imag = -math.exp(x) * math.sin(y)
    return complex(real, imag)


def n_delta_squared(grid: ModeGrid) -> float:
    """N_delta**2 = 1 / (L (1 - exp(-4 pi delta / L)))."""
    return 1.0 / (grid.L * -math.expm1(-4.0 * math.pi * grid.delta / grid.L))


def poisson_log_sum(grid: ModeGrid) -> float:
    """sum_{p>0} (2 pi/(L p)) e^{-2 delta p} over the grid, i.e. sum_n e^{-4 pi n delta/L}/n."""
    _, weight = _weights(grid)
    return compensated_sum(weight)


def free_propagator_finite(
    separation: float,
    t: float,
    grid: ModeGrid,
    branch: int,
    cone_window: float = DEFAULT_CONE_WINDOW,
) -> complex:
    """Normalized free two-point factor of one branch at finite L.

    Returns ``1 / (L (1 - exp(-(2 pi/L)(2 delta + i eps x + i t))))`` with
    ``eps = +1`` for branch 1 and ``-1`` for branch 2. This equals
    ``N_delta**2 * exp(sum_p (2 pi/(L p)) e^{-2 delta p} (e^{-i p (eps x + t)} - 1))``
    with the sum extended over all n >= 1.
    """
    check_light_cones(separation, t, (1.0,), cone_window)
    eps = BRANCH_SIGN[branch]
    arg = (2.0 * math.pi / grid.L) * complex(2.0 * grid.delta, eps * separation + t)
    return 1.0 / (grid.L * _one_minus_exp(arg))


def free_propagator_mode_sum(separation: float, t: float, grid: ModeGrid, branch: int) -> complex:
    """Same quantity as ``free_propagator_finite`` built from the truncated grid sum."""
    eps = BRANCH_SIGN[branch]
    p, weight = _weights(grid)
    s = compensated_sum_complex(weight * (np.exp(-1j * p * (eps * separation + t)) - 1.0))
    return n_delta_squared(grid) * cmath.exp(s)


def _log_series(shift: float, grid: ModeGrid) -> complex:
    # sum_{n>=1} q**n / n = -log(1 - q),  q = exp(-(2 pi/L)(2 delta - i shift))
    arg = (2.0 * math.pi / grid.L) * complex(2.0 * grid.delta, -shift)
    return -cmath.log(_one_minus_exp(arg))


def q_uniform(params: ModelParams, separation: float, t: float, grid: ModeGrid) -> complex:
    """Q sum with the renormalized velocity omega0 on every mode, summed to n = infinity."""
    w0 = params.omega0
    r = separation
    return (
        _log_series(r + w0 * t, grid)
        + _log_series(r - w0 * t, grid)
        - _log_series(r + t, grid)
        - _log_series(r - t, grid)
    )


def q_box(params: ModelParams, separation: float, t: float, grid: ModeGrid) -> complex:
    """Q sum with the box dispersion (modes above p_cut contribute nothing)."""
    b = exponent_main1(params, separation, t, grid)
    return b.q_plus + b.q_minus


@dataclass(frozen=True)
class FiniteDensity:
    smooth: float
    oscillating: float

    @property
    def total(self) -> float:
        return self.smooth + self.oscillating


def density_finite_parts(
    params: ModelParams,
    x: float,
    z: float,
    t: float,
    grid: ModeGrid,
    q_dispersion: Literal["uniform", "box"] = "uniform",
    cone_window: float = DEFAULT_CONE_WINDOW,
) -> FiniteDensity:
    """Finite-L density split into the same-branch and mixed-branch parts.

    smooth = |F_1|**2 + |F_2|**2 and
    oscillating = 2 Re[F_1 F_2 exp(Z_L + Q_L) exp(2 i p_F (x - z))].
    """
    r = x - z
    check_light_cones(r, t, (1.0, params.omega0), cone_window)
    f1 = free_propagator_finite(r, t, grid, 1, cone_window=0.0)
    f2 = free_propagator_finite(r, t, grid, 2, cone_window=0.0)
    smooth = abs(f1) ** 2 + abs(f2) ** 2
    if q_dispersion == "uniform":
        q = q_uniform(params, r, t, grid)
    elif q_dispersion == "box":
        q = q_box(params, r, t, grid)
    else:
        raise ValueError(f"unknown q_dispersion {q_dispersion!r}")
    zl = z_sum(params, abs(t), grid)
    mixed = f1 * f2 * cmath.exp(zl + q + 2j * params.p_F * r)
    return FiniteDensity(smooth, 2.0 * mixed.real)


def density_finite(params: ModelParams, x: float, z: float, t: float, grid: ModeGrid, **kwargs) -> float:
    return density_finite_parts(params, x, z, t, grid, **kwargs).total
