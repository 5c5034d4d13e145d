"""Exponentials of linear forms in the chiral density modes rho_w(+-p).

A ``BosonExponent`` stands for the normal-ordered element

    exp(log_prefactor) * :exp(sum_{w,s,n} c[w, s, n] rho_w(s p_n)):

with branch index w in {0, 1} (branches 1 and 2) and sign index s in {0, 1}
(+p and -p). For p > 0 the annihilators are rho_1(-p) and rho_2(p), the
creators rho_1(p) and rho_2(-p), and [rho_1(-p), rho_1(p)] = [rho_2(p), rho_2(-p)]
= p L / 2 pi, which on the grid p_n = 2 pi n / L is just n. Since every
commutator of linear forms is central, products of such elements have exact
vacuum expectations.

Unitary conjugations that mix creators with annihilators (the Bogoliubov
rotation) change the normal-ordering constant; ``conjugate_bogoliubov`` tracks
it in ``log_prefactor`` so that the representation stays exact.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import GridMismatch
from .finite_volume import BRANCH_SIGN, ModeGrid, n_delta_squared
from .model import ModelParams, dispersion
from .numerics import compensated_sum_complex

PLUS, MINUS = 0, 1
B1, B2 = 0, 1


@dataclass(frozen=True)
class BosonExponent:
    coeffs: np.ndarray  # complex, shape (2, 2, n_max)
    log_prefactor: complex
    grid: ModeGrid

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (2, 2, self.grid.n_max):
            raise GridMismatch(f"coefficient shape {c.shape} does not match grid with {self.grid.n_max} modes")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "log_prefactor", complex(self.log_prefactor))

    @classmethod
    def zero(cls, grid: ModeGrid, log_prefactor: complex = 0.0) -> "BosonExponent":
        return cls(np.zeros((2, 2, grid.n_max), dtype=complex), log_prefactor, grid)

    @classmethod
    def from_terms(cls, grid: ModeGrid, terms: dict, log_prefactor: complex = 0.0) -> "BosonExponent":
        """Build from ``{(branch, sign): coefficient array}`` with branch in {1, 2}, sign in {+1, -1}."""
        c = np.zeros((2, 2, grid.n_max), dtype=complex)
        for (branch, sign), values in terms.items():
            c[branch - 1, PLUS if sign > 0 else MINUS] += np.broadcast_to(values, grid.n_max)
        return cls(c, log_prefactor, grid)

    @classmethod
    def from_raw(cls, grid: ModeGrid, terms: dict, log_prefactor: complex = 0.0) -> "BosonExponent":
        """exp(log_prefactor) * exp(sum c rho) without normal ordering, rewritten as :exp: times exp(1/2 [D, C])."""
        e = cls.from_terms(grid, terms, log_prefactor)
        return replace(e, log_prefactor=e.log_prefactor + 0.5 * contraction(e, e))

    def annihilation(self) -> tuple[np.ndarray, np.ndarray]:
        return self.coeffs[B1, MINUS], self.coeffs[B2, PLUS]

    def creation(self) -> tuple[np.ndarray, np.ndarray]:
        return self.coeffs[B1, PLUS], self.coeffs[B2, MINUS]

    def __mul__(self, other: "BosonExponent") -> "BosonExponent":
        """Merge two elements into one normal-ordered element (product up to the ordering constant).

        :A: :B: = :A + B: exp([D_A, C_B]).
        """
        if other.grid != self.grid:
            raise GridMismatch("cannot multiply elements on different grids")
        return BosonExponent(self.coeffs + other.coeffs,
                             self.log_prefactor + other.log_prefactor + contraction(self, other),
                             self.grid)

    def extend(self, grid: ModeGrid) -> "BosonExponent":
        """Embed into a finer grid with the same L and delta (new modes get zero coefficients)."""
        if grid.L != self.grid.L or grid.delta != self.grid.delta or grid.n_max < self.grid.n_max:
            raise GridMismatch("extend needs the same L, delta and at least as many modes")
        c = np.zeros((2, 2, grid.n_max), dtype=complex)
        c[:, :, : self.grid.n_max] = self.coeffs
        return BosonExponent(c, self.log_prefactor, grid)


@dataclass(frozen=True)
class VacuumRules:
    grid: ModeGrid

    @property
    def commutator_scale(self) -> np.ndarray:
        """p L / 2 pi for each grid mode."""
        return self.grid.indices


def contraction(left: BosonExponent, right: BosonExponent) -> complex:
    """[D_left, C_right]: annihilation part of ``left`` against creation part of ``right``."""
    d1, d2 = left.annihilation()
    c1, c2 = right.creation()
    return compensated_sum_complex(left.grid.indices * (d1 * c1 + d2 * c2))


def log_vacuum_expectation(factors: Sequence[BosonExponent], rules: VacuumRules) -> complex:
    for f in factors:
        if f.grid != rules.grid:
            raise GridMismatch(f"factor grid {f.grid} differs from {rules.grid}")
    terms = [f.log_prefactor for f in factors]
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            terms.append(contraction(factors[i], factors[j]))
    return compensated_sum_complex(terms)


def vacuum_expectation(factors: Sequence[BosonExponent], rules: VacuumRules) -> complex:
    """<0| F_1 F_2 ... F_k |0> for normal-ordered exponentials F_i."""
    return cmath.exp(log_vacuum_expectation(factors, rules))


def vertex_factor(branch: int, sign: int, x: float, grid: ModeGrid, t: float = 0.0,
                  delta: float | None = None) -> BosonExponent:
    """Bosonized fermion field psi^sign_branch(x) evolved freely for time ``t``.

    psi^{+-}_w(x) = N_delta exp(-+eps_w sum_p (2 pi/(L p)) [rho_w(p) e^{-i p x - delta p}
    - rho_w(-p) e^{i p x - delta p}]), eps_1 = +1, eps_2 = -1. Free evolution shifts
    x to x - eps_w t. Zero modes and Klein factors contribute the scalar 1.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 (psi^+) or -1 (psi^-)")
    delta = grid.delta if delta is None else delta
    if not delta > 0:
        raise ValueError("delta must be positive")
    eps = BRANCH_SIGN[branch]
    p = grid.momenta
    amp = -sign * eps * np.exp(-delta * p) / grid.indices
    shifted = x - eps * t
    terms = {
        (branch, +1): amp * np.exp(-1j * p * shifted),
        (branch, -1): -amp * np.exp(1j * p * shifted),
    }
    # raw exponential = normal-ordered one times exp(-1/2 sum_p (2 pi/(L p)) e^{-2 delta p})
    sub = math.fsum(np.exp(-2.0 * delta * p) / grid.indices)
    nd2 = 1.0 / (grid.L * -math.expm1(-4.0 * math.pi * delta / grid.L))
    return BosonExponent.from_terms(grid, terms, 0.5 * math.log(nd2) - 0.5 * sub)


def conjugate_bogoliubov(e: BosonExponent, params: ModelParams, direction: float = 1.0) -> BosonExponent:
    """Apply rho_{1,2}(+-p) -> rho_{1,2}(+-p) cosh(a) + rho_{2,1}(+-p) sinh(a), a = direction * phi(p).

    ``direction`` -1 is the inverse map; fractional values interpolate.
    """
    phi = direction * np.asarray(dispersion(params, e.grid.momenta).phi)
    ch, sh = np.cosh(phi), np.sinh(phi)
    c = e.coeffs
    new = np.empty_like(c)
    new[B1] = ch * c[B1] + sh * c[B2]
    new[B2] = ch * c[B2] + sh * c[B1]
    out = BosonExponent(new, 0.0, e.grid)
    shift = 0.5 * (contraction(out, out) - contraction(e, e))
    return replace(out, log_prefactor=e.log_prefactor + shift)


def conjugate_evolution(e: BosonExponent, params: ModelParams, t: float, renormalized: bool = True) -> BosonExponent:
    """Heisenberg evolution: rho_w(+-p) gains exp(+-eps_w i omega(p) p t) (omega = 1 if not renormalized)."""
    p = e.grid.momenta
    w = np.asarray(dispersion(params, p).omega) if renormalized else np.ones_like(p)
    phase = np.exp(1j * w * p * t)
    c = e.coeffs.copy()
    c[B1, PLUS] *= phase
    c[B1, MINUS] /= phase
    c[B2, PLUS] /= phase
    c[B2, MINUS] *= phase
    return BosonExponent(c, e.log_prefactor, e.grid)


def heisenberg(e: BosonExponent, params: ModelParams, t: float, eps: float = 1.0) -> BosonExponent:
    """e^{-i eps S} e^{i(H0+D)t} e^{iS} (.) e^{-iS} e^{-i(H0+D)t} e^{i eps S}; eps = 1 gives e^{iHt} (.) e^{-iHt}."""
    out = conjugate_bogoliubov(e, params, 1.0)
    out = conjugate_evolution(out, params, t, renormalized=True)
    return conjugate_bogoliubov(out, params, -eps)


def _free_params(params: ModelParams) -> ModelParams:
    return ModelParams(0.0, params.v0, params.p_cut, params.p_F, params.convention)


def derive_main1_exponent(params: ModelParams, x: float, z: float, t: float, grid: ModeGrid,
                          delta: float | None = None) -> complex:
    """Exponent of <psi^-_1(x) e^{iHt} psi^+_1(z) psi^-_2(z) e^{-iHt} psi^+_2(x)> relative to the free product.

    Built only from vertex factors, Bogoliubov and evolution conjugations and the
    vacuum contraction rule; the free two-point factors <psi_1 psi_1^+(t)> and
    <psi_2(t) psi_2^+> (lambda = 0) are divided out.
    """
    if delta is not None and delta != grid.delta:
        grid = ModeGrid(grid.L, grid.n_max, delta)
    rules = VacuumRules(grid)
    v1 = vertex_factor(1, -1, x, grid)
    v2 = vertex_factor(1, +1, z, grid)
    v3 = vertex_factor(2, -1, z, grid)
    v4 = vertex_factor(2, +1, x, grid)
    full = log_vacuum_expectation([v1, heisenberg(v2, params, t), heisenberg(v3, params, t), v4], rules)
    free = _free_params(params)
    ref = (log_vacuum_expectation([v1, heisenberg(v2, free, t)], rules)
           + log_vacuum_expectation([heisenberg(v3, free, t), v4], rules))
    return full - ref


def appendix_factors(params: ModelParams, x: float, z: float, t: float, s: float | None = None,
                     eps: float = 1.0, grid: ModeGrid | None = None) -> dict:
    """Closed-form coefficient tables for the factor decomposition of the conjugated fields.

    Branch-1 side factors use time ``t``; branch-2 side factors (``z_b``, ``B*``,
    ``*_2``) use ``s`` (default ``t``). No regulator is attached.
    """
    if grid is None:
        raise ValueError("grid is required")
    s = t if s is None else s
    p = grid.momenta
    cn = 1.0 / grid.indices
    d = dispersion(params, p)
    ch, sh = np.cosh(d.phi), np.sinh(d.phi)
    che, she = np.cosh(eps * d.phi), np.sinh(eps * d.phi)
    sig, w = d.sigma, d.omega
    ex = np.exp
    j = 1j

    def mk(terms, log_prefactor=0.0):
        return BosonExponent.from_terms(grid, {k: cn * v for k, v in terms.items()}, log_prefactor)

    out = {}
    out["z_a"] = BosonExponent.zero(grid, compensated_sum_complex(cn * (ex(-j * p * sig * t) - 1.0)))
    out["z_b"] = BosonExponent.zero(grid, compensated_sum_complex(cn * (1.0 - ex(-j * p * sig * s))))
    out["A1+"] = mk({(1, +1): che * (-ex(-j * p * x + j * p * t) + ex(-j * p * x + j * p * t * w))})
    out["A1-"] = mk({(1, -1): che * (ex(j * p * x - j * p * t) - ex(j * p * x - j * p * t * w))})
    out["A2+"] = mk({(2, +1): she * (ex(-j * p * x + j * p * t) - ex(-j * p * x + j * p * t * w))})
    out["A2-"] = mk({(2, -1): -she * (ex(j * p * x - j * p * t) - ex(j * p * x - j * p * t * w))})
    out["B1+"] = mk({(1, +1): -she * (-ex(-j * p * z - j * p * s) + ex(-j * p * z - j * p * s * w))})
    out["B1-"] = mk({(1, -1): she * (ex(j * p * z + j * p * s) - ex(j * p * z + j * p * s * w))})
    out["B2+"] = mk({(2, +1): che * (ex(-j * p * z - j * p * s * w) - ex(-j * p * z - j * p * s))})
    out["B2-"] = mk({(2, -1): che * (-ex(j * p * z + j * p * s * w) + ex(j * p * z + j * p * s))})
    out["W_tilde_1_inv"] = mk({(1, +1): (che - 1) * ex(-j * p * z + j * p * t),
                               (1, -1): -(che - 1) * ex(j * p * z - j * p * t)})
    out["R_tilde_1_inv"] = mk({(2, +1): -she * ex(-j * p * z + j * p * t),
                               (2, -1): she * ex(j * p * z - j * p * t)})
    out["W_bar_1_inv"] = mk({(1, +1): (ch - 1) * che * ex(-j * p * z + j * p * w * t),
                             (1, -1): -(ch - 1) * che * ex(j * p * z - j * p * w * t)})
    out["R_bar_1_inv"] = mk({(2, +1): -(ch - 1) * she * ex(-j * p * z + j * p * w * t),
                             (2, -1): (ch - 1) * she * ex(j * p * z - j * p * w * t)})
    out["W_hat_1_inv"] = mk({(1, +1): -sh * she * ex(-j * p * x - j * p * t * w),
                             (1, -1): sh * she * ex(j * p * x + j * p * t * w)})
    out["R_hat_1_inv"] = mk({(2, -1): -sh * che * ex(j * p * x + j * p * t * w),
                             (2, +1): sh * che * ex(-j * p * x - j * p * t * w)})
    out["W_tilde_2"] = mk({(1, +1): -she * ex(-j * p * z - j * p * s),
                           (1, -1): she * ex(j * p * z + j * p * s)})
    out["R_tilde_2"] = mk({(2, +1): (che - 1) * ex(-j * p * z - j * p * s),
                           (2, -1): -(che - 1) * ex(j * p * z + j * p * s)})
    out["W_bar_2"] = mk({(1, +1): sh * che * ex(-j * p * z + j * p * w * s),
                         (1, -1): -sh * che * ex(j * p * z - j * p * w * s)})
    out["W_hat_2"] = mk({(1, +1): -(ch - 1) * she * ex(-j * p * z - j * p * s * w),
                         (1, -1): (ch - 1) * she * ex(j * p * z + j * p * s * w)})
    out["R_bar_2"] = mk({(2, +1): -sh * she * ex(-j * p * z + j * p * s * w),
                         (2, -1): sh * she * ex(j * p * z - j * p * s * w)})
    out["R_hat_2"] = mk({(2, +1): (ch - 1) * che * ex(-j * p * z - j * p * s * w),
                         (2, -1): -(ch - 1) * che * ex(j * p * z + j * p * s * w)})
    return out


BRANCH1_GROUP = ("A1+", "A1-", "A2+", "A2-", "W_tilde_1_inv", "R_tilde_1_inv", "W_bar_1_inv",
                 "R_bar_1_inv", "W_hat_1_inv", "R_hat_1_inv")
BRANCH2_GROUP = ("W_bar_2", "R_bar_2", "W_hat_2", "R_hat_2", "W_tilde_2", "R_tilde_2",
                 "B1-", "B1+", "B2-", "B2+")


def appendix_composition_residual(params: ModelParams, x: float, z: float, t: float, grid: ModeGrid,
                                  eps: float = 1.0) -> dict:
    """Largest coefficient mismatch between the tabulated factors and the composed conjugations.

    For each conjugated field the linear form obtained from
    ``heisenberg(vertex, eps)`` minus the freely evolved vertex is compared with
    the sum of the tabulated factors' linear forms. Regulators are switched off
    (delta -> 0 in the coefficients).
    """
    tiny = ModeGrid(grid.L, grid.n_max, 1e-300)
    factors = appendix_factors(params, x, z, t, t, eps, tiny)

    def linear(e):
        return e.coeffs

    out = {}
    for name, (branch, sign, group) in {
        "psi1_plus": (1, +1, BRANCH1_GROUP),
        "psi2_minus": (2, -1, BRANCH2_GROUP),
    }.items():
        composed = heisenberg(vertex_factor(branch, sign, z, tiny), params, t, eps)
        free = vertex_factor(branch, sign, z, tiny, t=t)
        target = linear(composed) - linear(free)
        tab = sum(linear(factors[k]) for k in group)
        out[name] = float(np.max(np.abs(target - tab)))
    out["scalar_product_z_a_z_b"] = abs(factors["z_a"].log_prefactor + factors["z_b"].log_prefactor)
    return out
