"""Batch front-end: ``lutt-quench <command> [--config FILE] [flags]``.

Exit codes: 0 ok, 2 bad configuration, 3 unstable parameters, 4 I/O failure,
5 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .errors import LuttQuenchError, StabilityError
from .finite_volume import ModeGrid, density_finite_parts, z_sum
from .infinite_volume import density_profile, z_of_t
from .model import Convention, ModelParams
from .numerics import fit_power_law

COMMANDS = ("density", "zfactor", "scan", "convergence", "fit-exponent", "verify")
FORMATS = ("csv", "json")
EXIT_OK, EXIT_CONFIG, EXIT_STABILITY, EXIT_IO, EXIT_VERIFY = 0, 2, 3, 4, 5
# e^Z ripples as cos(2 w0 t)/t, so [10, 1000] at lam = 1 already has rms 3.7e-3
RESIDUAL_FLAG = 1e-2
ASYMPTOTIC_START = 1.0


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    lam: float = 1.0
    v0: float = math.pi
    p_cut: float = 1.0
    p_F: float = 0.0
    convention: str = "theorem"
    x: float = 0.0
    z_min: float = -6.0
    z_max: float = 6.0
    z_steps: int = 1201
    t: tuple = (1.0,)
    L: float | None = None
    n_max: int | None = None
    delta: float | None = None
    out: str | None = None
    format: str = "csv"
    window: tuple = (10.0, 1000.0)
    samples: int = 64
    lambdas: tuple = (0.0, 1.0, 11)
    sizes: tuple = (500.0, 1000.0, 2000.0, 4000.0)
    separation: float = 5.0
    checks: tuple | None = None
    perturb_gamma: float = 0.0
    timings: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        if int(self.z_steps) != self.z_steps or self.z_steps < 2:
            raise ConfigError(f"z_steps must be an integer >= 2, got {self.z_steps}")
        if not self.z_max > self.z_min:
            raise ConfigError("z range must have z_max > z_min")
        if len(self.t) == 0 or any(not (v >= 0) for v in self.t):
            raise ConfigError("t values must be a non-empty list of numbers >= 0")
        if self.convention not in {c.value for c in Convention}:
            raise ConfigError(f"unknown convention {self.convention!r}")
        if len(self.window) != 2 or not 0 < self.window[0] < self.window[1]:
            raise ConfigError("window must be two increasing positive numbers")
        if self.checks is not None and len(self.checks) == 0:
            raise ConfigError("check list is empty")
        for name in ("L", "delta"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ConfigError(f"{name} must be positive")

    def params(self) -> ModelParams:
        return ModelParams(self.lam, self.v0, self.p_cut, self.p_F, Convention(self.convention))

    def z_grid(self) -> np.ndarray:
        return np.linspace(self.z_min, self.z_max, int(self.z_steps))

    def grid(self) -> ModeGrid | None:
        if self.L is None:
            return None
        delta = self.delta if self.delta is not None else 10.0 / self.L
        if self.n_max is not None:
            return ModeGrid(self.L, self.n_max, delta)
        return ModeGrid.covering(self.L, delta, self.p_cut)


# ---------------------------------------------------------------- config I/O

_CONFIG_KEYS = {
    # json key -> RunConfig field
    "lambda": "lam", "lam": "lam", "v0": "v0", "p_cut": "p_cut", "p_F": "p_F", "pF": "p_F",
    "convention": "convention", "x": "x", "z_min": "z_min", "z_max": "z_max", "z_steps": "z_steps",
    "t": "t", "L": "L", "n_max": "n_max", "delta": "delta", "path": "out", "out": "out",
    "format": "format", "window": "window", "samples": "samples", "lambdas": "lambdas",
    "sizes": "sizes", "separation": "separation", "checks": "checks",
}


def _flatten(raw: dict) -> dict:
    flat = {}
    for key, value in raw.items():
        if isinstance(value, dict) and key in ("params", "grids", "finite_volume", "output", "fit", "verify"):
            flat.update(_flatten(value))
        elif key == "command":
            flat["command"] = value
        elif key in _CONFIG_KEYS:
            flat[_CONFIG_KEYS[key]] = value
        else:
            raise ConfigError(f"unknown config key {key!r}")
    return flat


def _floats(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lutt-quench", description="Quench dynamics of the non-local Luttinger model.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON run configuration")
    ap.add_argument("--lambda", dest="lam", type=float)
    ap.add_argument("--v0", type=float)
    ap.add_argument("--p-cut", dest="p_cut", type=float)
    ap.add_argument("--pF", dest="p_F", type=float)
    ap.add_argument("--convention", choices=[c.value for c in Convention])
    ap.add_argument("--x", type=float)
    ap.add_argument("--t", help="comma-separated times")
    ap.add_argument("--z-range", dest="z_range", help="z_min,z_max,z_steps")
    ap.add_argument("--L", type=float)
    ap.add_argument("--n-max", dest="n_max", type=int)
    ap.add_argument("--delta", type=float)
    ap.add_argument("--out")
    ap.add_argument("--format", choices=FORMATS)
    ap.add_argument("--window", help="fit window tmin,tmax")
    ap.add_argument("--samples", type=int)
    ap.add_argument("--lambdas", help="scan range lmin,lmax,count")
    ap.add_argument("--sizes", help="system sizes for convergence")
    ap.add_argument("--separation", type=float, help="x - z for convergence")
    ap.add_argument("--checks", help="comma-separated verify checks")
    ap.add_argument("--perturb-gamma", dest="perturb_gamma", type=float,
                    help="test hook: shift the Landau coefficient in the dual-path check")
    ap.add_argument("--timings", action="store_true", help="include runtimes in the verify report")
    return ap


_NEGATIVE_VALUE = re.compile(r"^-[0-9.]")


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--opt -1,2`` into ``--opt=-1,2`` so argparse does not read the value as a flag."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NEGATIVE_VALUE.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def load_config(argv: list[str]) -> RunConfig:
    ns = build_parser().parse_args(_attach_negative_values(argv))
    values: dict = {}
    if ns.config:
        text = Path(ns.config).read_text()
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        values.update(_flatten(raw))
    values["command"] = ns.command
    for name in ("lam", "v0", "p_cut", "p_F", "convention", "x", "L", "n_max", "delta", "out",
                 "format", "samples", "separation", "perturb_gamma"):
        v = getattr(ns, name)
        if v is not None:
            values[name] = v
    if ns.timings:
        values["timings"] = True
    if ns.t is not None:
        values["t"] = _floats(ns.t)
    if ns.z_range is not None:
        parts = _floats(ns.z_range)
        if len(parts) != 3:
            raise ConfigError("--z-range needs z_min,z_max,z_steps")
        values["z_min"], values["z_max"], values["z_steps"] = parts[0], parts[1], parts[2]
    if ns.window is not None:
        values["window"] = _floats(ns.window)
    if ns.lambdas is not None:
        values["lambdas"] = _floats(ns.lambdas)
    if ns.sizes is not None:
        values["sizes"] = _floats(ns.sizes)
    if ns.checks is not None:
        values["checks"] = tuple(c.strip() for c in ns.checks.split(",") if c.strip())
    for key in ("t", "window", "lambdas", "sizes", "checks"):
        if key in values and values[key] is not None:
            v = values[key]
            values[key] = tuple(v) if isinstance(v, (list, tuple)) else (v,)
    if "z_steps" in values:
        zs = values["z_steps"]
        if isinstance(zs, float) and zs.is_integer():
            values["z_steps"] = int(zs)
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------- helpers

def thread_count() -> int:
    raw = os.environ.get("LUTT_QUENCH_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"LUTT_QUENCH_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise ConfigError("LUTT_QUENCH_THREADS must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


def ordered_map(fn: Callable, items) -> list:
    """Evaluate ``fn`` over ``items`` in parallel; results keep the input order."""
    items = list(items)
    workers = min(thread_count(), max(1, len(items)))
    if workers == 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def fmt17(v) -> str:
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return ""
    return f"{float(v) + 0.0:.17g}"


def metadata(cfg: RunConfig, **extra) -> dict:
    p = cfg.params()
    grid = cfg.grid()
    meta = {
        "tool": "lutt-quench",
        "version": __version__,
        "command": cfg.command,
        "params": p.as_dict(),
        "convention": p.convention.value,
        "omega0": p.omega0,
        "gamma0": p.gamma0,
        "grid": grid.as_dict() if grid else None,
    }
    meta.update(extra)
    return meta


def render_csv(meta: dict, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    for line in json.dumps(meta, sort_keys=True, indent=1).splitlines():
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([c if isinstance(c, str) else fmt17(c) for c in row])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, float):
        return v + 0.0 if math.isfinite(v) else None
    if isinstance(v, (np.floating,)):
        return _jsonable(float(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def render_json(payload: dict) -> str:
    return json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"


def emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text)


def _path_for(cfg: RunConfig, index: int, count: int) -> str | None:
    if cfg.out is None:
        return None
    if count == 1:
        return cfg.out
    base = Path(cfg.out)
    return str(base.with_name(f"{base.stem}_t{index:03d}{base.suffix or '.' + cfg.format}"))


def _table(cfg: RunConfig, meta: dict, header: list[str], rows: list[list]) -> str:
    if cfg.format == "csv":
        return render_csv(meta, header, rows)
    return render_json({"metadata": meta, "columns": header, "rows": rows})


# ---------------------------------------------------------------- commands

def run_density(cfg: RunConfig) -> int:
    params = cfg.params()
    z = cfg.z_grid()
    grid = cfg.grid()

    def one(t):
        prof = density_profile(params, cfg.x, z, t)
        smooth, osc = prof.smooth.copy(), prof.oscillating.copy()
        if grid is not None:
            for i in np.flatnonzero(~np.isin(np.arange(z.size), prof.excluded)):
                part = density_finite_parts(params, cfg.x, z[i], t, grid, cone_window=0.0)
                smooth[i], osc[i] = part.smooth, part.oscillating
        return prof, smooth, osc

    results = ordered_map(one, cfg.t)
    for k, (t, (prof, smooth, osc)) in enumerate(zip(cfg.t, results)):
        excluded = np.zeros(z.size, dtype=int)
        excluded[prof.excluded] = 1
        between = np.zeros(z.size, dtype=int)
        between[prof.between_cones] = 1
        rows = []
        for i in range(z.size):
            if excluded[i]:
                rows.append([z[i], None, None, None, 1, 0])
            else:
                rows.append([z[i], smooth[i], osc[i], smooth[i] + osc[i], 0, int(between[i])])
        meta = metadata(cfg, t=t, x=cfg.x, volume="finite" if grid else "infinite",
                        light_cones=prof.cone_positions(),
                        exclusion_window=10.0 * (z[1] - z[0]),
                        between_cones_note="rows with between_cones=1 lie between the two cones")
        text = _table(cfg, meta, ["z", "smooth", "oscillating", "total", "excluded_flag", "between_cones"], rows)
        emit(text, _path_for(cfg, k, len(cfg.t)))
    return EXIT_OK


def run_zfactor(cfg: RunConfig) -> int:
    params = cfg.params()
    grid = cfg.grid()
    rows = []
    for t in cfg.t:
        zt = z_of_t(params, t)
        row = [t, zt, math.exp(zt)]
        if grid is not None:
            row.append(z_sum(params, t, grid))
        rows.append(row)
    header = ["t", "Z", "expZ"] + (["Z_finite"] if grid else [])
    emit(_table(cfg, metadata(cfg), header, rows), cfg.out)
    return EXIT_OK


def run_scan(cfg: RunConfig) -> int:
    """omega0 and gamma0 under both conventions over a coupling range."""
    if len(cfg.lambdas) != 3 or cfg.lambdas[2] < 1 or not float(cfg.lambdas[2]).is_integer():
        raise ConfigError("lambdas must be lmin,lmax,count")
    rows = []
    for lam in np.linspace(cfg.lambdas[0], cfg.lambdas[1], int(cfg.lambdas[2])):
        th = replace_params(cfg, lam, Convention.THEOREM)
        an = replace_params(cfg, lam, Convention.ANGLE)
        rows.append([lam, th.omega0, th.gamma0, an.omega0, an.gamma0])
    emit(_table(cfg, metadata(cfg), ["lambda", "omega0_theorem", "gamma0_theorem", "omega0_angle", "gamma0_angle"], rows), cfg.out)
    return EXIT_OK


def replace_params(cfg: RunConfig, lam: float, convention: Convention) -> ModelParams:
    return ModelParams(float(lam), cfg.v0, cfg.p_cut, cfg.p_F, convention)


def convergence_table(params: ModelParams, separation: float, t: float, sizes) -> dict:
    from .infinite_volume import density_interacting

    exact = density_interacting(params, separation, 0.0, t)
    rows = []

    def one(L):
        grid = ModeGrid.covering(L, 10.0 / L, params.p_cut)
        return density_finite_parts(params, separation, 0.0, t, grid).total

    values = ordered_map(one, sizes)
    errs = [abs(v - exact) for v in values]
    for L, v, e in zip(sizes, values, errs):
        rows.append([L, 10.0 / L, v, e])
    slope = -np.polyfit(np.log(sizes), np.log(errs), 1)[0]
    return {"exact": exact, "rows": rows, "rate": float(slope), "final_relative": errs[-1] / abs(exact)}


def run_convergence(cfg: RunConfig) -> int:
    params = cfg.params()
    t = cfg.t[0]
    res = convergence_table(params, cfg.separation, t, cfg.sizes)
    meta = metadata(cfg, separation=cfg.separation, t=t, infinite_volume=res["exact"],
                    fitted_rate=res["rate"], final_relative_error=res["final_relative"])
    emit(_table(cfg, meta, ["L", "delta", "density_finite", "abs_error"], res["rows"]), cfg.out)
    return EXIT_OK


def run_fit_exponent(cfg: RunConfig) -> int:
    params = cfg.params()
    ts = np.geomspace(cfg.window[0], cfg.window[1], cfg.samples)
    samples = [(float(t), math.exp(z_of_t(params, float(t)))) for t in ts]
    rep = fit_power_law(samples, tuple(cfg.window))
    report = rep.as_dict()
    report["gamma0"] = params.gamma0
    report["exponent_error"] = abs(rep.exponent - params.gamma0)
    reasons = []
    if cfg.window[0] < ASYMPTOTIC_START:
        reasons.append(f"window starts below t = {ASYMPTOTIC_START:g}")
    if rep.residual_rms > RESIDUAL_FLAG:
        reasons.append(f"residual_rms above {RESIDUAL_FLAG:g}")
    report["outside_asymptotic_regime"] = bool(reasons)
    report["flag_reasons"] = reasons
    meta = metadata(cfg, fit=report)
    if cfg.format == "json":
        emit(render_json({"metadata": meta, "samples": samples}), cfg.out)
    else:
        emit(render_csv(meta, ["t", "expZ"], [list(s) for s in samples]), cfg.out)
        if cfg.out is not None:
            emit(render_json({"metadata": meta}), str(Path(cfg.out).with_suffix(".json")))
    return EXIT_OK


def run_verify(cfg: RunConfig) -> int:
    from .verification import CHECKS, run_checks

    names = cfg.checks if cfg.checks is not None else tuple(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ConfigError(f"unknown checks: {', '.join(unknown)}")
    results = run_checks(names, perturb_gamma=cfg.perturb_gamma, timings=cfg.timings, mapper=ordered_map)
    ok = all(r["status"] in ("pass", "info") for r in results)
    report = {"tool": "lutt-quench", "version": __version__, "all_passed": ok, "checks": results}
    emit(render_json(report), cfg.out)
    return EXIT_OK if ok else EXIT_VERIFY


DISPATCH = {
    "density": run_density,
    "zfactor": run_zfactor,
    "scan": run_scan,
    "convergence": run_convergence,
    "fit-exponent": run_fit_exponent,
    "verify": run_verify,
}


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = load_config(argv)
        cfg.params()
        return DISPATCH[cfg.command](cfg)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_CONFIG if exc.code else EXIT_OK
    except StabilityError as exc:
        print(f"lutt-quench: unstable parameters: {exc}", file=sys.stderr)
        return EXIT_STABILITY
    except ConfigError as exc:
        print(f"lutt-quench: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"lutt-quench: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (LuttQuenchError, ValueError) as exc:
        print(f"lutt-quench: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
