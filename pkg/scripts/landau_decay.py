"""Landau quasi-particle weight e^Z(t): short-time, crossover and power-law tail."""
from __future__ import annotations

import argparse
import math
from dataclasses import dataclass

import numpy as np

from lutt_quench import ModelParams, fit_power_law, z_of_t
from lutt_quench.infinite_volume import z_of_t_large_time


@dataclass(frozen=True)
class DecayConfig:
    lam: float = 1.0
    v0: float = math.pi
    t_min: float = 1e-3
    t_max: float = 1e4
    samples: int = 25
    fit_window: tuple = (10.0, 1000.0)


def run(cfg: DecayConfig) -> None:
    p = ModelParams(cfg.lam, cfg.v0)
    print(f"# lambda={p.lam} v0={p.v0} omega0={p.omega0:.10f} gamma0={p.gamma0:.10f}")
    print(f"{'t':>12} {'Z(t)':>16} {'exp Z':>14} {'tail form':>16}")
    for t in np.geomspace(cfg.t_min, cfg.t_max, cfg.samples):
        print(f"{t:12.5g} {z_of_t(p, t):16.9g} {math.exp(z_of_t(p, t)):14.9f} {z_of_t_large_time(p, t):16.9g}")
    ts = np.geomspace(*cfg.fit_window, 64)
    rep = fit_power_law([(float(t), math.exp(z_of_t(p, float(t)))) for t in ts], cfg.fit_window)
    print(f"# fitted exponent {rep.exponent:.6f} (gamma0 {p.gamma0:.6f}), "
          f"amplitude {rep.amplitude:.6f}, residual rms {rep.residual_rms:.3g}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambda", dest="lam", type=float, default=1.0)
    ap.add_argument("--v0", type=float, default=math.pi)
    args = ap.parse_args()
    run(DecayConfig(lam=args.lam, v0=args.v0))


if __name__ == "__main__":
    main()
