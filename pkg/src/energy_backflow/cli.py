"""Command-line interface: trajectories, kernels and parameter maps as data files.

Subcommands ``trace``, ``kernels``, ``backflow-map``, ``blp-map`` and
``resonance-map``. Values are taken from command-line flags, then from a flat
JSON file given with ``--config``, then from built-in defaults.

Exit status is 0 on success, 2 for invalid input and 3 for numerical
failures; diagnostics go to standard error.
"""
import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bath import (BathParams, dissipation_kernel, noise_kernel,
                   resonance_curve)
from .energetics import energy_flow
from .errors import (ConvergenceError, DomainError, InputError, NumericsError,
                     PreconditionError)
from .nonmarkov import StatePair, distance_series
from .sweep import (GridSpec, default_jobs, sweep_backflow, sweep_blp,
                    sweep_resonance_deviation)
from .tcl2 import (SystemParams, TimeGrid, accumulate_coefficients,
                   born_markov_population, propagate)

log = logging.getLogger("energy_backflow")

GENERATED_BY = f"energy_backflow {__version__}"

EXIT_OK, EXIT_INPUT, EXIT_NUMERICS = 0, 2, 3

# built-in defaults (qubit splitting units)
DEFAULTS = {
    "lambda": 0.1,
    "cutoff": 0.4,
    "bath_temp": 1.0,
    "sys_temp": 5.0,
    "t_max": 100.0,
    "dt": 0.01,
    "omega0": 1.0,
    "format": "csv",
    "out": None,
    "jobs": None,
    "grid": "50x50",
    "omega_range": "0.2:5",
    "temp_range": "0.2:5",
    "resonance_overlay": False,
    "blp": False,
    "no_precession": False,
}
# kernels decay within a few 1/cutoff
SUBCOMMAND_DEFAULTS = {"kernels": {"t_max": 20.0}}

MAP_KINDS = {"backflow-map": "backflow", "blp-map": "blp",
             "resonance-map": "resonance_deviation"}


class UsageError(Exception):
    pass


# --- configuration ------------------------------------------------------------

def _common(p):
    g = p.add_argument_group("model and output")
    g.add_argument("--lambda", dest="lambda", type=float,
                   help="coupling strength (default 0.1)")
    g.add_argument("--cutoff", type=float, help="bath cutoff (default 0.4)")
    g.add_argument("--bath-temp", dest="bath_temp", type=float,
                   help="bath temperature T_E (default 1)")
    g.add_argument("--sys-temp", dest="sys_temp", type=float,
                   help="temperature of the initial Gibbs state (default 5)")
    g.add_argument("--t-max", dest="t_max", type=float,
                   help="integration time (default 100; 20 for kernels)")
    g.add_argument("--dt", type=float, help="time step (default 0.01)")
    g.add_argument("--omega0", type=float,
                   help="qubit splitting used to rescale the output units")
    g.add_argument("--out", help="output path, '-' for stdout")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--config", help="flat JSON file with default values")
    g.add_argument("--jobs", type=int, help="worker processes for maps")
    g.add_argument("-v", "--verbose", action="store_true")


def _map_flags(p):
    g = p.add_argument_group("grid")
    g.add_argument("--grid", help="cells as N_OMEGAxN_TEMP (default 50x50)")
    g.add_argument("--omega-range", dest="omega_range",
                   help="cutoff range a:b (default 0.2:5)")
    g.add_argument("--temp-range", dest="temp_range",
                   help="bath temperature range a:b (default 0.2:5)")
    g.add_argument("--resonance-overlay", dest="resonance_overlay",
                   action="store_true", default=None,
                   help="also write the flat-J_eff curve as T_E,omega_res")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="energy-backflow",
        description="Energy and information backflow of a qubit in an "
                    "Ohmic bath.")
    parser.add_argument("--version", action="version", version=GENERATED_BY)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trace", help="time traces of populations and flows")
    _common(p)
    p.add_argument("--blp", action="store_true", default=None,
                   help="add the trace distance of the canonical pair")
    p.add_argument("--no-precession", dest="no_precession",
                   action="store_true", default=None,
                   help="drop the free precession of the coherences")

    p = sub.add_parser("kernels", help="noise and dissipation kernels")
    _common(p)

    for name, text in (("backflow-map", "energy-backflow map"),
                       ("blp-map", "BLP non-Markovianity map"),
                       ("resonance-map", "|dJ_eff/domega| at omega0")):
        p = sub.add_parser(name, help=text)
        _common(p)
        _map_flags(p)
        if name == "blp-map":
            p.add_argument("--no-precession", dest="no_precession",
                           action="store_true", default=None,
                           help="drop the free precession of the coherences")
    return parser


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config file must hold a flat JSON object")
    out = {}
    for key, val in data.items():
        name = key.replace("-", "_")
        if name not in DEFAULTS:
            raise UsageError(f"unknown config key {key!r}")
        if isinstance(val, (dict, list)):
            raise UsageError(f"config key {key!r} must be a scalar")
        out[name] = val
    return out


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags over the config file over the defaults."""
    cfg = dict(DEFAULTS)
    cfg.update(SUBCOMMAND_DEFAULTS.get(args.command, {}))
    if args.config:
        cfg.update(load_config(args.config))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    cfg["command"] = args.command
    return cfg


def _pair(text, what, sep=":", kind=float):
    parts = str(text).lower().split(sep)
    if len(parts) != 2:
        raise UsageError(f"{what} must look like a{sep}b, got {text!r}")
    try:
        return kind(parts[0]), kind(parts[1])
    except ValueError as exc:
        raise UsageError(f"bad {what} {text!r}") from exc


def _float(cfg, key):
    try:
        val = float(cfg[key])
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{key} must be a number") from exc
    if not math.isfinite(val):
        raise UsageError(f"{key} must be finite")
    return val


class RunConfig:
    """Validated parameters of one invocation."""

    def __init__(self, cfg: dict):
        self.command = cfg["command"]
        self.raw = cfg
        self.scale = _float(cfg, "omega0")
        if self.scale <= 0:
            raise UsageError("omega0 must be positive")
        self.fmt = cfg["format"]
        if self.fmt not in ("csv", "json"):
            raise UsageError("format must be csv or json")
        self.bath = BathParams(_float(cfg, "lambda"), _float(cfg, "cutoff"),
                               _float(cfg, "bath_temp"))
        self.system = SystemParams(1.0, _float(cfg, "sys_temp"))
        self.grid = TimeGrid(_float(cfg, "t_max"), _float(cfg, "dt"))
        self.jobs = default_jobs() if cfg["jobs"] is None else int(cfg["jobs"])
        if self.jobs < 1:
            raise UsageError("jobs must be at least 1")
        self.blp = bool(cfg["blp"])
        self.free_evolution = not bool(cfg["no_precession"])
        self.overlay = bool(cfg["resonance_overlay"])
        self.spec = None
        if self.command in MAP_KINDS:
            n_om, n_t = _pair(cfg["grid"], "grid", "x", int)
            self.spec = GridSpec(_pair(cfg["omega_range"], "omega-range"),
                                 _pair(cfg["temp_range"], "temp-range"),
                                 n_om, n_t)
        out = cfg["out"]
        if out is None:
            out = f"{self.command}.{self.fmt}"
        self.out = out


# --- output -------------------------------------------------------------------

def _fmt(x) -> str:
    # + 0.0 folds negative zero
    return repr(float(x) + 0.0)


def _write_text(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _csv(header, columns) -> str:
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def _json(obj) -> str:
    return json.dumps(obj, indent=1, allow_nan=True) + "\n"


def _columns_out(rc: RunConfig, header, columns, meta):
    if rc.fmt == "csv":
        _write_text(rc.out, _csv(header, columns))
    else:
        body = {"generated_by": GENERATED_BY, "meta": meta,
                "columns": {h: [float(x) for x in c]
                            for h, c in zip(header, columns)}}
        _write_text(rc.out, _json(body))


def _meta(rc: RunConfig, **extra):
    meta = {"lambda": rc.bath.coupling, "cutoff": rc.bath.cutoff * rc.scale,
            "bath_temp": rc.bath.temp * rc.scale, "omega0": rc.scale}
    meta.update(extra)
    return meta


# --- subcommands ----------------------------------------------------------------

def cmd_trace(rc: RunConfig):
    traj = propagate(rc.bath, rc.system, grid=rc.grid)
    flow = energy_flow(traj)
    rho_bm = born_markov_population(traj.times, rc.bath, rc.system,
                                    traj.rho00[0])
    W = rc.scale
    header = ["t", "rho00", "theta", "theta_alt", "dq", "f", "rho00_markov",
              "theta_markov", "a_zz", "b_z"]
    columns = [traj.times / W, traj.rho00, flow.theta * W * W,
               flow.theta_alt * W * W, flow.dq * W, flow.f_term * W * W,
               rho_bm, flow.markov_theta * W * W, traj.coeffs.a_zz * W,
               traj.coeffs.b_z * W]
    if rc.blp:
        pair = StatePair.canonical()
        table = accumulate_coefficients(rc.bath, rc.system, rc.grid)
        t1, t2 = (propagate(rc.bath, rc.system, s, rc.grid, table=table,
                            free_evolution=rc.free_evolution)
                  for s in (pair.s1, pair.s2))
        header.append("D_trace")
        columns.append(distance_series(t1, t2))
    meta = _meta(rc, sys_temp=rc.system.T_S * W, t_max=rc.grid.t_max / W,
                 dt=rc.grid.dt / W, free_evolution=rc.free_evolution)
    _columns_out(rc, header, columns, meta)


def cmd_kernels(rc: RunConfig):
    t = rc.grid.times
    d1 = noise_kernel(t, rc.bath)
    d2 = dissipation_kernel(t, rc.bath)
    W = rc.scale
    meta = _meta(rc, t_max=rc.grid.t_max / W, dt=rc.grid.dt / W)
    _columns_out(rc, ["t", "D1", "D1_normalized", "D2"],
                 [t / W, d1 * W * W, d1 / d1[0] if d1[0] else d1, d2 * W * W],
                 meta)


def _sidecar_path(out):
    p = Path(out)
    return p.with_name(p.stem + ".json") if p.suffix != ".json" \
        else p.with_name(p.stem + ".meta.json")


def cmd_map(rc: RunConfig):
    kind = MAP_KINDS[rc.command]
    lam = rc.bath.coupling
    if kind == "backflow":
        hm = sweep_backflow(rc.spec, lam, rc.grid, jobs=rc.jobs)
    elif kind == "blp":
        hm = sweep_blp(rc.spec, lam, rc.grid, jobs=rc.jobs,
                       free_evolution=rc.free_evolution)
    else:
        hm = sweep_resonance_deviation(rc.spec, lam, jobs=1)
    W = rc.scale
    # backflow is an energy; BLP and dJ_eff/domega are dimensionless
    vscale = W if kind == "backflow" else 1.0
    om = hm.spec.omegas * W
    te = hm.spec.temps * W
    meta = {"measure": kind, "lambda": lam, "omega0": W,
            "grid": {"n_omega": hm.spec.n_omega, "n_temp": hm.spec.n_temp,
                     "omega_range": [x * W for x in hm.spec.omega_range],
                     "temp_range": [x * W for x in hm.spec.temp_range]},
            "order": "row-major, T_E outer, omega_c inner"}
    if kind != "resonance_deviation":
        meta.update(t_max=rc.grid.t_max / W, dt=rc.grid.dt / W)
    if kind == "blp":
        meta["free_evolution"] = rc.free_evolution
    failed = [dict(c, omega_c=c["omega_c"] * W, T_E=c["T_E"] * W)
              for c in hm.failed_cells]

    rows = [(om[j], te[i], hm.values[i, j] * vscale)
            for i in range(hm.spec.n_temp) for j in range(hm.spec.n_omega)]
    if rc.fmt == "csv":
        _write_text(rc.out, _csv(["omega_c", "T_E", "value"], zip(*rows)))
        if rc.out != "-":
            side = {"generated_by": GENERATED_BY, "meta": meta,
                    "failed_cells": failed}
            _write_text(_sidecar_path(rc.out), _json(side))
    else:
        body = {"generated_by": GENERATED_BY, "meta": meta,
                "failed_cells": failed, "omega_c": om.tolist(),
                "T_E": te.tolist(),
                "values": (hm.values * vscale).tolist()}
        _write_text(rc.out, _json(body))

    if rc.overlay:
        temps, curve = resonance_overlay(hm.spec)
        text = _csv(["T_E", "omega_res"], [temps * W, curve * W])
        if rc.out == "-":
            sys.stdout.write(text)
        else:
            p = Path(rc.out)
            _write_text(p.with_name(p.stem + "_resonance.csv"), text)
    for c in failed:
        print(f"warning: cell omega_c={c['omega_c']:.6g} T_E={c['T_E']:.6g} "
              f"failed: {c['error']}", file=sys.stderr)


def resonance_overlay(spec: GridSpec, step=0.01):
    """Points of the flat-``J_eff`` curve over the temperature range.

    Sampled every ``step`` from the lower end of the range, merged with the
    cell-centre temperatures of ``spec``.
    """
    lo, hi = spec.temp_range
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    fine = np.round(lo + step * np.arange(n), 12)
    temps = np.unique(np.concatenate([fine, spec.temps]))
    return temps, np.asarray(resonance_curve(temps), dtype=float)


COMMANDS = {"trace": cmd_trace, "kernels": cmd_kernels,
            "backflow-map": cmd_map, "blp-map": cmd_map,
            "resonance-map": cmd_map}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        rc = RunConfig(resolve(args))
        COMMANDS[rc.command](rc)
    except (UsageError, DomainError, InputError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericsError, ConvergenceError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
