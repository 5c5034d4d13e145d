"""Density profiles at several times and the tracked peak velocities."""
from __future__ import annotations

import argparse
import math
from pathlib import Path

import numpy as np

from lutt_quench import ModelParams, density_profile, track_peaks


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambda", dest="lam", type=float, default=1.0)
    ap.add_argument("--v0", type=float, default=math.pi)
    ap.add_argument("--step", type=float, default=0.01)
    ap.add_argument("--out", type=Path, default=None, help="directory for per-time CSV profiles")
    args = ap.parse_args()
    p = ModelParams(args.lam, args.v0)
    z = np.round(np.arange(-6.0, 6.0 + 1e-9, args.step), 10)
    times = np.linspace(1.0, 5.0, 9)
    tr = track_peaks(p, 0.0, times, z)
    print(f"omega0 = {p.omega0:.6f}")
    print(f"smooth velocity      {tr.smooth_velocity:.6f}")
    print(f"oscillating velocity {tr.oscillating_velocity:.6f}")
    for t, sm, osc in zip(times, tr.smooth_peaks, tr.oscillating_peaks):
        print(f"t={t:4.1f}  smooth peaks {sm[0]:+.2f} {sm[1]:+.2f}   oscillating peaks {osc[0]:+.3f} {osc[1]:+.3f}")
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        for t in times:
            prof = density_profile(p, 0.0, z, t)
            data = np.column_stack([prof.z_grid, prof.smooth, prof.oscillating, prof.total])
            np.savetxt(args.out / f"profile_t{t:.1f}.csv", data, delimiter=",",
                       header="z,smooth,oscillating,total", comments="", fmt="%.17g")


if __name__ == "__main__":
    main()
