"""Oracle checks shared by ``lutt-quench verify``.

Each check returns a plain dict (name, status, max_deviation, tolerance, detail).
Random inputs come from fixed seeds, so reports are reproducible.
"""
from __future__ import annotations

import math
import time
from typing import Callable

import numpy as np

from .boson_algebra import BosonExponent, VacuumRules, derive_main1_exponent, vacuum_expectation
from .errors import StabilityError
from .finite_volume import (ModeGrid, density_finite_parts, exponent_main1, free_propagator_finite,
                            n_delta_squared, poisson_log_sum)
from .infinite_volume import (density_free, density_interacting, q_closed_form, q_extrapolated_quadrature,
                              track_peaks, z_of_t, z_of_t_quadrature)
from .model import ModelParams
from .numerics import fit_power_law
from .oracles import single_mode_expectation

REFERENCE = ModelParams(1.0, math.pi)
SEED = 20240611


def _result(name, deviation, tol, detail=None, status=None):
    if status is None:
        status = "pass" if deviation < tol else "fail"
    return {"name": name, "status": status, "max_deviation": float(deviation), "tolerance": tol,
            "detail": detail or {}}


def dual_path_points(n: int = 10, seed: int = SEED) -> list[tuple[float, float]]:
    rng = np.random.default_rng(seed)
    return [(float(rng.uniform(-6.0, 6.0)), float(rng.uniform(0.0, 4.0))) for _ in range(n)]


def dual_path_deviation(gamma_source: str, perturb_gamma: float = 0.0) -> tuple[float, dict]:
    worst, per_grid = 0.0, {}
    for n_max in (16, 256):
        grid = ModeGrid(2.0 * math.pi * n_max / 1.0, n_max, 0.1)
        dev = 0.0
        for r, t in dual_path_points():
            mech = derive_main1_exponent(REFERENCE, r, 0.0, t, grid)
            hand = exponent_main1(REFERENCE, r, t, grid, gamma_source=gamma_source,
                                  gamma_shift=perturb_gamma).total
            dev = max(dev, abs(mech - hand))
        per_grid[str(n_max)] = dev
        worst = max(worst, dev)
    return worst, per_grid


def check_dual_path(perturb_gamma: float = 0.0):
    dev, per = dual_path_deviation("derived", perturb_gamma)
    return _result("dual_path", dev, 1e-12, {"per_grid": per, "gamma_source": "derived",
                                             "perturb_gamma": perturb_gamma})


def check_dual_path_convention(perturb_gamma: float = 0.0):
    dev, per = dual_path_deviation("convention")
    return _result("dual_path_convention_gamma", dev, 1e-12,
                   {"per_grid": per, "note": "Landau coefficient gamma(p) of the active convention"}, status="info")


def check_fock_oracle(perturb_gamma: float = 0.0):
    rng = np.random.default_rng(SEED + 1)
    grid = ModeGrid(2.0 * math.pi, 1, 1.0)
    rules = VacuumRules(grid)
    worst = 0.0
    for _ in range(50):
        a, b = (rng.uniform(0, 1) * np.exp(2j * math.pi * rng.uniform()) for _ in range(2))
        f_ann = BosonExponent.from_terms(grid, {(1, -1): a})
        f_cre = BosonExponent.from_terms(grid, {(1, +1): b})
        mech = vacuum_expectation([f_ann, f_cre], rules)
        mat = single_mode_expectation([(a, 0.0), (0.0, b)])
        worst = max(worst, abs(mech - mat))
    return _result("fock_oracle", worst, 1e-10, {"pairs": 50, "cutoff": 64})


def check_z_cin(perturb_gamma: float = 0.0):
    dev = max(abs(z_of_t(REFERENCE, t) - z_of_t_quadrature(REFERENCE, t)) for t in (0.1, 1.0, 10.0, 100.0))
    return _result("z_quadrature_vs_cin", dev, 1e-10)


def check_z_small_time(perturb_gamma: float = 0.0):
    p = REFERENCE
    t = 1e-2 / (2.0 * p.omega0)
    zt = z_of_t(p, t)
    approx = -p.gamma0 * (2.0 * p.omega0 * t) ** 2 / 4.0
    return _result("z_small_time", abs(zt + p.gamma0 * (2 * p.omega0 * t) ** 2 / 4.0) / abs(zt), 1e-4,
                   {"Z": zt, "quadratic": approx})


def check_z_tail(perturb_gamma: float = 0.0):
    ts = np.geomspace(10.0, 1000.0, 64)
    rep = fit_power_law([(float(t), math.exp(z_of_t(REFERENCE, float(t)))) for t in ts], (10.0, 1000.0))
    return _result("z_tail_exponent", abs(rep.exponent - REFERENCE.gamma0) / REFERENCE.gamma0, 1e-2,
                   {"exponent": rep.exponent})


Q_POINTS = ((3.0, 1.0), (5.0, 2.0), (10.0, 2.0), (4.0, 1.0), (0.5, 3.0))


def check_q(perturb_gamma: float = 0.0):
    dev = max(abs(q_extrapolated_quadrature(REFERENCE, r, t) - q_closed_form(REFERENCE, r, t)) for r, t in Q_POINTS)
    return _result("q_closed_form", dev, 1e-6)


def check_convergence(perturb_gamma: float = 0.0):
    sizes = (500.0, 1000.0, 2000.0, 4000.0)
    exact = density_interacting(REFERENCE, 5.0, 0.0, 2.0)
    errs = [abs(density_finite_parts(REFERENCE, 5.0, 0.0, 2.0, ModeGrid.covering(L, 10.0 / L)).total - exact)
            for L in sizes]
    rate = -float(np.polyfit(np.log(sizes), np.log(errs), 1)[0])
    rel = errs[-1] / abs(exact)
    ok = 0.8 <= rate <= 1.2 and rel < 1e-3 and all(np.diff(errs) < 0)
    return _result("finite_volume_convergence", rel, 1e-3, {"rate": rate, "errors": errs},
                   status="pass" if ok else "fail")


def check_identities(perturb_gamma: float = 0.0):
    g = ModeGrid(1000.0, 20000, 0.5)
    poisson = abs(math.exp(poisson_log_sum(g)) - g.L * n_delta_squared(g)) / (g.L * n_delta_squared(g))
    delta = 1e-3
    nd = abs(n_delta_squared(ModeGrid(1e8 * delta, 1, delta)) * 4 * math.pi * delta - 1.0)
    big = ModeGrid(1e8, 1, 1e-7)
    prod = free_propagator_finite(3.0, 1.0, big, 1) * free_propagator_finite(3.0, 1.0, big, 2)
    target = 1.0 / (4 * math.pi ** 2 * 8.0)
    prop = abs(prod - target) / target
    dev = max(poisson, nd, prop)
    ok = poisson < 1e-12 and nd < 1e-6 and prop < 1e-6
    return _result("propagator_identities", dev, 1e-6,
                   {"poisson": poisson, "n_delta": nd, "propagator_product": prop},
                   status="pass" if ok else "fail")


def check_free_reduction(perturb_gamma: float = 0.0):
    z = np.linspace(-5.0, 5.0, 201)
    step = z[1] - z[0]
    worst = 0.0
    for p_F in (0.0, 1.0):
        p = ModelParams(0.0, math.pi, p_F=p_F)
        for t in (0.0, 1.0, 3.0):
            for zi in z:
                r = abs(0.0 - zi)
                if abs(r - t) < 10 * step or r < 10 * step:
                    continue
                worst = max(worst, abs(density_interacting(p, 0.0, zi, t) - density_free(0.0, zi, t, p_F)))
    return _result("free_reduction", worst, 1e-14)


def check_peaks(perturb_gamma: float = 0.0):
    z = np.round(np.arange(-6.0, 6.0 + 1e-9, 0.01), 10)
    tr = track_peaks(REFERENCE, 0.0, np.linspace(1.0, 5.0, 9), z)
    dev = max(abs(tr.smooth_velocity - 1.0), abs(tr.oscillating_velocity - REFERENCE.omega0))
    return _result("light_cone_velocities", dev, 0.01,
                   {"smooth": tr.smooth_velocity, "oscillating": tr.oscillating_velocity})


def check_stability(perturb_gamma: float = 0.0):
    bad = 0
    for lam, v0 in ((1.0, 2 * math.pi), (-1.0, 2 * math.pi), (2.0, 4.0), (1.0, 7.0)):
        try:
            ModelParams(lam, v0)
            bad += 1
        except StabilityError:
            pass
    return _result("stability_gate", float(bad), 0.5)


CHECKS: dict[str, Callable] = {
    "free_reduction": check_free_reduction,
    "dual_path": check_dual_path,
    "dual_path_convention_gamma": check_dual_path_convention,
    "fock_oracle": check_fock_oracle,
    "z_quadrature_vs_cin": check_z_cin,
    "z_small_time": check_z_small_time,
    "z_tail_exponent": check_z_tail,
    "q_closed_form": check_q,
    "finite_volume_convergence": check_convergence,
    "propagator_identities": check_identities,
    "light_cone_velocities": check_peaks,
    "stability_gate": check_stability,
}


def run_checks(names, perturb_gamma: float = 0.0, timings: bool = False, mapper=None) -> list[dict]:
    mapper = mapper or (lambda fn, xs: [fn(x) for x in xs])

    def one(name):
        start = time.perf_counter()
        res = CHECKS[name](perturb_gamma=perturb_gamma)
        if timings:
            res["runtime_s"] = time.perf_counter() - start
        return res

    return mapper(one, names)
