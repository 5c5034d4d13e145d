"""Closed-form L -> infinity density, Landau exponent Z(t) and light-cone tracking."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, LightConeSingularity, WindowTooCoarse
from .model import DEFAULT_CONE_WINDOW, ModelParams, check_light_cones
from .numerics import EULER_GAMMA, QuadratureSpec, cin, integrate

INV_4PI2 = 1.0 / (4.0 * math.pi ** 2)
INV_2PI2 = 1.0 / (2.0 * math.pi ** 2)


def smooth_part(separation, t):
    """(1/4 pi^2) [1/(r - t)^2 + 1/(r + t)^2]; vectorized over ``separation``."""
    r = np.asarray(separation, dtype=float)
    return INV_4PI2 * (1.0 / (r - t) ** 2 + 1.0 / (r + t) ** 2)


def oscillating_part(params: ModelParams, separation, t, z_value: float | None = None):
    """(1/2 pi^2) cos(2 p_F r) e^{Z(t)} / (r^2 - (omega0 t)^2); vectorized over ``separation``."""
    r = np.asarray(separation, dtype=float)
    if z_value is None:
        z_value = z_of_t(params, t)
    w0t = params.omega0 * t
    return INV_2PI2 * np.cos(2.0 * params.p_F * r) * math.exp(z_value) / (r * r - w0t * w0t)


def density_free(x: float, z: float, t: float, p_F: float = 0.0, cone_window: float = DEFAULT_CONE_WINDOW) -> float:
    r = x - z
    check_light_cones(r, t, (1.0,), cone_window)
    osc = INV_2PI2 * math.cos(2.0 * p_F * r) / (r * r - t * t)
    return float(osc + smooth_part(r, t))


def z_of_t(params: ModelParams, t: float) -> float:
    """Z(t) = gamma0 int_0^1 (dp/p)(cos 2 omega0 p t - 1) = -gamma0 Cin(2 omega0 |t|).

    The upper limit is the box edge ``p_cut``.
    """
    return -params.gamma0 * cin(2.0 * params.omega0 * params.p_cut * abs(t))


def z_of_t_quadrature(params: ModelParams, t: float, spec: QuadratureSpec | None = None) -> float:
    """Direct adaptive quadrature of the Z(t) integral (independent of ``cin``)."""
    k = 2.0 * params.omega0 * abs(t)
    if k == 0.0 or params.gamma0 == 0.0:
        return 0.0
    if spec is None:
        spec = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-13, max_subdivisions=20000,
                              oscillation_period=2.0 * math.pi / k)

    def integrand(p):
        p = np.asarray(p, dtype=float)
        # (cos kp - 1)/p = -2 sin^2(kp/2)/p, finite at p = 0
        safe = np.where(p == 0.0, 1.0, p)
        return np.where(p == 0.0, 0.0, -2.0 * np.sin(0.5 * k * p) ** 2 / safe)

    return params.gamma0 * integrate(integrand, 0.0, params.p_cut, spec)


def z_of_t_large_time(params: ModelParams, t: float) -> float:
    """Leading large-t form -gamma0 (ln 2 omega0 t + C)."""
    return -params.gamma0 * (math.log(2.0 * params.omega0 * params.p_cut * t) + EULER_GAMMA)


def dz_dt(params: ModelParams, t: float) -> float:
    """Analytic derivative -gamma0 (1 - cos 2 omega0 t)/t."""
    if t == 0:
        return 0.0
    k = 2.0 * params.omega0 * params.p_cut
    return -params.gamma0 * (1.0 - math.cos(k * t)) / t


def q_closed_form(params: ModelParams, separation: float, t: float, cone_window: float = DEFAULT_CONE_WINDOW) -> float:
    """ln(((x-z)^2 - t^2) / ((x-z)^2 - omega0^2 t^2)).

    Raises DomainError between the two cones, where the argument is negative.
    """
    r = separation
    check_light_cones(r, t, (1.0, params.omega0), cone_window)
    num = r * r - t * t
    den = r * r - (params.omega0 * t) ** 2
    arg = num / den
    if not arg > 0:
        raise DomainError(f"log argument {arg:.6g} <= 0 between the light cones")
    return math.log(arg)


def q_regularized_quadrature(params: ModelParams, separation: float, t: float, delta: float,
                             tail: float = 40.0) -> complex:
    """Continuum Q sum with regulator exp(-2 delta p), by adaptive quadrature.

    Integrates (1/p) e^{-2 delta p} e^{i p r} [(e^{i p omega t} - e^{i p t}) + (e^{-i p omega t} - e^{-i p t})]
    over p in (0, tail/delta], with the renormalized velocity on every mode.
    """
    r = separation
    w0 = params.omega0
    freqs = [abs(r + w0 * t), abs(r - w0 * t), abs(r + t), abs(r - t)]
    kmax = max(max(freqs), 1e-12)
    spec = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-12, max_subdivisions=200000,
                          oscillation_period=2.0 * math.pi / kmax)
    upper = tail / delta

    def kernel(p, fn):
        p = np.asarray(p, dtype=float)
        safe = np.where(p == 0.0, 1.0, p)
        damp = np.exp(-2.0 * delta * p)
        # (e^{ipa} + e^{ipb} - e^{ipc} - e^{ipd}) / p, a = r + w0 t, ...
        val = (fn(p * (r + w0 * t)) + fn(p * (r - w0 * t)) - fn(p * (r + t)) - fn(p * (r - t)))
        lim = {np.cos: 0.0, np.sin: (r + w0 * t) + (r - w0 * t) - (r + t) - (r - t)}[fn]
        return np.where(p == 0.0, lim, damp * val / safe)

    re = integrate(lambda p: kernel(p, np.cos), 0.0, upper, spec)
    im = integrate(lambda p: kernel(p, np.sin), 0.0, upper, spec)
    return complex(re, im)


def q_extrapolated_quadrature(params: ModelParams, separation: float, t: float,
                              deltas=(0.1, 0.05, 0.025)) -> float:
    """delta -> 0 Richardson extrapolation (in delta^2) of the real part of the regularized Q."""
    vals = [q_regularized_quadrature(params, separation, t, d).real for d in deltas]
    # Neville table in h = delta^2
    hs = [d * d for d in deltas]
    table = list(vals)
    for level in range(1, len(table)):
        for i in range(len(table) - 1, level - 1, -1):
            table[i] = (hs[i - level] * table[i] - hs[i] * table[i - 1]) / (hs[i - level] - hs[i])
    return table[-1]


def density_interacting(params: ModelParams, x: float, z: float, t: float,
                        cone_window: float = DEFAULT_CONE_WINDOW) -> float:
    r = x - z
    check_light_cones(r, t, (1.0, params.omega0), cone_window)
    return float(smooth_part(r, t) + oscillating_part(params, r, t))


def density_interacting_via_q(params: ModelParams, x: float, z: float, t: float,
                              cone_window: float = DEFAULT_CONE_WINDOW) -> float:
    """Same density assembled as smooth + cos(2 p_F r) e^{Z} e^{Q} / (2 pi^2 (r^2 - t^2))."""
    r = x - z
    q = q_closed_form(params, r, t, cone_window)
    mixed = INV_2PI2 * math.cos(2.0 * params.p_F * r) * math.exp(z_of_t(params, t)) * math.exp(q) / (r * r - t * t)
    return float(smooth_part(r, t) + mixed)


@dataclass(frozen=True)
class DensityProfile:
    z_grid: np.ndarray
    smooth: np.ndarray
    oscillating: np.ndarray
    total: np.ndarray
    t: float
    x: float
    params: ModelParams
    excluded: np.ndarray
    between_cones: np.ndarray = field(default=None)

    def cone_positions(self) -> dict:
        w0 = self.params.omega0
        return {
            "smooth": [self.x - self.t, self.x + self.t],
            "oscillating": [self.x - w0 * self.t, self.x + w0 * self.t],
        }


def cone_mask(separation: np.ndarray, t: float, velocities, window: float) -> np.ndarray:
    r = np.abs(np.asarray(separation, dtype=float))
    mask = np.zeros(r.shape, dtype=bool)
    for v in velocities:
        mask |= np.abs(r - v * abs(t)) < window
    return mask


def density_profile(params: ModelParams, x: float, z_grid, t: float, window: float | None = None) -> DensityProfile:
    """Density on ``z_grid`` at time ``t``; points within ``window`` of a cone are excluded (NaN).

    The default window is 10 grid steps.
    """
    z_grid = np.asarray(z_grid, dtype=float)
    if z_grid.size < 2:
        raise ValueError("z_grid needs at least two points")
    if window is None:
        window = 10.0 * float(np.min(np.abs(np.diff(z_grid))))
    r = x - z_grid
    excluded = cone_mask(r, t, (1.0, params.omega0), window)
    smooth = np.full(r.shape, np.nan)
    osc = np.full(r.shape, np.nan)
    keep = ~excluded
    zt = z_of_t(params, t)
    smooth[keep] = smooth_part(r[keep], t)
    osc[keep] = oscillating_part(params, r[keep], t, zt)
    absr = np.abs(r)
    between = (absr > params.omega0 * abs(t)) & (absr < abs(t))
    return DensityProfile(z_grid, smooth, osc, smooth + osc, t, x, params,
                          np.flatnonzero(excluded), np.flatnonzero(between & keep))


@dataclass(frozen=True)
class PeakTrack:
    times: np.ndarray
    smooth_peaks: np.ndarray  # shape (n_t, 2): left and right peak positions
    oscillating_peaks: np.ndarray
    smooth_velocity: float
    oscillating_velocity: float


def _slope(t: np.ndarray, y: np.ndarray) -> float:
    tm = t.mean()
    return float(np.sum((t - tm) * (y - y.mean())) / np.sum((t - tm) ** 2))


def track_peaks(params: ModelParams, x: float, t_grid, z_window) -> PeakTrack:
    """Follow the left/right maxima of |smooth| and |oscillating| over ``t_grid``.

    Peak positions are argmax over ``z_window`` (only grid points that sit
    exactly on a cone are skipped). Each velocity is the regression slope of
    half the left-right peak separation.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    z_window = np.asarray(z_window, dtype=float)
    if t_grid.size < 2:
        raise WindowTooCoarse("need at least two times to estimate a velocity")
    step = float(np.min(np.abs(np.diff(z_window))))
    slowest = min(1.0, params.omega0)
    if np.min(np.diff(np.sort(t_grid))) * slowest < 3.0 * step:
        raise WindowTooCoarse("cones move fewer than 3 samples per time step")
    r = x - z_window
    tiny = 1e-9 * max(step, 1e-300)
    zt_cache = {}
    sm_peaks, osc_peaks = [], []
    for t in t_grid:
        zt_cache[t] = z_of_t(params, t)
        with np.errstate(divide="ignore", invalid="ignore"):
            sm = np.abs(smooth_part(r, t))
            osc = np.abs(oscillating_part(params, r, t, zt_cache[t]))
        sm[cone_mask(r, t, (1.0,), tiny) | ~np.isfinite(sm)] = -np.inf
        osc[cone_mask(r, t, (params.omega0,), tiny) | ~np.isfinite(osc)] = -np.inf
        left = z_window < x
        right = z_window > x
        pair = []
        for arr in (sm, osc):
            lv = np.where(left, arr, -np.inf)
            rv = np.where(right, arr, -np.inf)
            pair.append((z_window[int(np.argmax(lv))], z_window[int(np.argmax(rv))]))
        sm_peaks.append(pair[0])
        osc_peaks.append(pair[1])
    sm_peaks = np.array(sm_peaks)
    osc_peaks = np.array(osc_peaks)
    v_sm = _slope(t_grid, 0.5 * (sm_peaks[:, 1] - sm_peaks[:, 0]))
    v_osc = _slope(t_grid, 0.5 * (osc_peaks[:, 1] - osc_peaks[:, 0]))
    return PeakTrack(t_grid, sm_peaks, osc_peaks, v_sm, v_osc)
