"""Command-line interface.

Subcommands
-----------
verify    run one or all verification suites, write a JSON report
evalq     evaluate Q(f1, f2) at points with either representation, write CSV
solve     linear solve with frozen g, write trajectory (.bin + .json sidecar)
iterate   Picard iteration with monitors, write JSON + trajectory
report    render a verification JSON or trajectory sidecar to PNG + text

Exit codes: 0 success, 1 verification/contraction failure, 2 usage error.
Main JSON outputs are deterministic for a fixed seed; wall-clock timings go
to a separate ``<out>.meta.json`` sidecar so reruns are bit-identical.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, fields

import numpy as np


@dataclass
class RunConfig:
    gamma: float = -1.0
    s: float = 0.5
    seed: int = 20260826
    grid_n: int = 16
    grid_length: float = 4.0
    lab_grid_n: int = 24
    lab_grid_length: float = 6.0
    T: float = 0.25
    fast: bool = False
    refine: bool = True
    threads: int = 0

    @classmethod
    def from_ini(cls, path: str) -> "RunConfig":
        parser = configparser.ConfigParser()
        read = parser.read(path)
        if not read:
            raise FileNotFoundError(path)
        cfg = cls()
        for section in parser.sections():
            for key, value in parser.items(section):
                if not hasattr(cfg, key):
                    raise KeyError(f"unknown config key '{key}'")
                current = getattr(cfg, key)
                if isinstance(current, bool):
                    setattr(cfg, key, parser.getboolean(section, key))
                elif isinstance(current, int):
                    setattr(cfg, key, parser.getint(section, key))
                elif isinstance(current, float):
                    setattr(cfg, key, parser.getfloat(section, key))
                else:
                    setattr(cfg, key, value)
        return cfg

    def apply_overrides(self, args: argparse.Namespace) -> None:
        for f in fields(self):
            val = getattr(args, f.name, None)
            if val is not None:
                setattr(self, f.name, val)


def _write_json(path: str, payload, wall_time: float) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")
    with open(path + ".meta.json", "w") as fh:
        json.dump({"wall_time_seconds": wall_time,
                   "written_by": "boltzlab-cli"}, fh, indent=1)
        fh.write("\n")


def _default_pair(cfg: RunConfig):
    from .grid import Gaussian
    f1 = Gaussian(1.0, 1.0, center=np.array([0.6, 0.0, 0.0]))
    f2 = Gaussian(0.8, 1.3, center=np.array([-0.4, 0.3, 0.0]))
    return f1, f2


def cmd_verify(cfg: RunConfig, args: argparse.Namespace) -> int:
    from .lab import SUITES, LabConfig, verify
    lab_cfg = LabConfig(gamma=cfg.gamma, s=cfg.s, seed=cfg.seed,
                        grid_n=cfg.lab_grid_n,
                        grid_length=cfg.lab_grid_length,
                        refine=cfg.refine, fast=cfg.fast)
    names = sorted(SUITES) if args.suite in (None, "all") else [args.suite]
    if any(n not in SUITES for n in names):
        print(f"error: unknown suite '{args.suite}'", file=sys.stderr)
        return 2
    t0 = time.time()
    reports = []
    ok = True
    for name in names:
        rep = verify(name, lab_cfg)
        reports.append(rep.to_dict())
        ok = ok and rep.passed
        print(f"{name:22s} {'PASS' if rep.passed else 'FAIL'}")
    payload = reports[0] if len(reports) == 1 else reports
    if args.out:
        _write_json(args.out, payload, time.time() - t0)
    return 0 if ok else 1


def cmd_evalq(cfg: RunConfig, args: argparse.Namespace) -> int:
    from .carleman import eval_Q
    from .kernel import KernelParams
    from .sigma import eval_Q_sigma
    params = KernelParams(gamma=cfg.gamma, s=cfg.s)
    f1, f2 = _default_pair(cfg)
    if args.point:
        pts = [np.array([float(x) for x in args.point.split(",")])]
    else:
        rng = np.random.default_rng(cfg.seed)
        pts = [rng.normal(0.0, 1.2, 3) for _ in range(args.n_points)]
    rows = []
    for v in pts:
        row = {"vx": v[0], "vy": v[1], "vz": v[2]}
        if args.method in ("sigma", "both"):
            row["Q_sigma"] = eval_Q_sigma(f1, f2, v, params)
        if args.method in ("carleman", "both"):
            row["Q_carleman"] = eval_Q(f1, f2, v, params)
        rows.append(row)
        print(" ".join(f"{k}={row[k]:.6e}" for k in row))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
    return 0


def _initial_data(cfg: RunConfig):
    from .grid import (Distribution, LinearCombination, PolyDecay,
                       VelocityGrid, maxwellian)
    grid = VelocityGrid(cfg.grid_n, cfg.grid_length)
    f_fun = LinearCombination([(1.0, maxwellian(1.0)),
                               (0.01, PolyDecay(8.0))])
    return grid, Distribution.from_function(grid, f_fun)


def cmd_solve(cfg: RunConfig, args: argparse.Namespace) -> int:
    from .kernel import KernelParams
    from .norms import NormSpec, m_default
    from .solver import RegularizationParams, monitor, solve_linear
    params = KernelParams(gamma=cfg.gamma, s=cfg.s)
    grid, f_in = _initial_data(cfg)
    spec = NormSpec(k=1.0, n=2.0, m=m_default(1.0, 2.0, cfg.gamma, cfg.s))
    t0 = time.time()
    traj = solve_linear(f_in, f_in, cfg.T, RegularizationParams(), params,
                        spec)
    traj.monitors["hydro_summary"] = monitor(traj, "hydro")
    out = args.out or "trajectory"
    traj.save(out, meta=None)
    with open(out + ".meta.json", "w") as fh:
        json.dump({"wall_time_seconds": time.time() - t0}, fh, indent=1)
    print(f"wrote {out}.bin and {out}.json "
          f"({len(traj.times)} slices, T={cfg.T})")
    return 0


def cmd_iterate(cfg: RunConfig, args: argparse.Namespace) -> int:
    from .kernel import KernelParams
    from .norms import NormSpec, m_default
    from .solver import iterate, monitor
    params = KernelParams(gamma=cfg.gamma, s=cfg.s)
    grid, f_in = _initial_data(cfg)
    spec = NormSpec(k=1.0, n=2.0, m=m_default(1.0, 2.0, cfg.gamma, cfg.s))
    t0 = time.time()
    try:
        f_end, state, trajs = iterate(f_in, cfg.T, params, spec)
    except RuntimeError as exc:
        print(f"iteration failed: {exc}", file=sys.stderr)
        return 1
    hydro = monitor(trajs[-1], "hydro")
    payload = {
        "T": cfg.T,
        "T1": state.T1,
        "T2": state.T2,
        "fitted_C": state.fitted_C,
        "n_iterates": state.index,
        "w_norms": state.w_norms,
        "contraction_ratios": state.ratios,
        "positivity": state.positivity,
        "mass_drift_per_unit_time": hydro["mass_drift_per_unit_time"],
    }
    for k, v in list(payload.items()):
        if isinstance(v, np.floating):
            payload[k] = float(v)
    print(json.dumps(payload, indent=1, sort_keys=True))
    if args.out:
        _write_json(args.out, payload, time.time() - t0)
        trajs[-1].save(args.out + ".trajectory")
    contracting = all(r < 1.0 for r in state.ratios[1:])
    return 0 if contracting else 1


def cmd_report(cfg: RunConfig, args: argparse.Namespace) -> int:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    if not args.input or not os.path.exists(args.input):
        print("error: report needs --input pointing at a JSON file",
              file=sys.stderr)
        return 2
    with open(args.input) as fh:
        data = json.load(fh)
    out = args.out or (os.path.splitext(args.input)[0] + ".png")
    fig, ax = plt.subplots(figsize=(7, 4))
    if isinstance(data, list) and data and "suite" in data[0]:
        names = [d["suite"] for d in data]
        vals = [d["metrics"].get("max_ratio", np.nan) for d in data]
        colors = ["tab:green" if d["passed"] else "tab:red" for d in data]
        ax.barh(names, vals, color=colors)
        ax.set_xlabel("worst ratio LHS/RHS")
        ax.set_title("verification suites")
        ax.set_xscale("log")
    elif "contraction_ratios" in data:
        ax.plot(data["contraction_ratios"], "o-")
        ax.axhline(0.9, color="tab:red", ls="--", label="0.9 ceiling")
        ax.set_xlabel("iterate")
        ax.set_ylabel("contraction ratio")
        ax.legend()
    elif "times" in data:
        hyd = np.array(data["monitors"]["hydro"])
        ax.plot(data["times"], hyd[:, 0], label="mass")
        ax.plot(data["times"], hyd[:, 1], label="energy")
        ax.set_xlabel("t")
        ax.legend()
    else:
        print("error: unrecognized report input", file=sys.stderr)
        return 2
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boltzlab",
        description="numerical laboratory for the non-cutoff Boltzmann "
                    "collision operator")
    parser.add_argument("--config", help="INI config file")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--gamma", type=float, default=None)
    parser.add_argument("--s", type=float, default=None, dest="s")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--out")
    p.add_argument("--fast", action="store_true", default=None)

    p = sub.add_parser("evalq", help="evaluate Q at points")
    p.add_argument("--method", choices=("sigma", "carleman", "both"),
                   default="both")
    p.add_argument("--point", help="comma-separated vx,vy,vz")
    p.add_argument("--n-points", type=int, default=5)
    p.add_argument("--out")

    p = sub.add_parser("solve", help="linear solve with frozen g")
    p.add_argument("--T", type=float, default=None, dest="T")
    p.add_argument("--out")

    p = sub.add_parser("iterate", help="Picard iteration")
    p.add_argument("--T", type=float, default=None, dest="T")
    p.add_argument("--out")

    p = sub.add_parser("report", help="render a JSON report to PNG")
    p.add_argument("--input")
    p.add_argument("--out")
    return parser


def run(command: str, config: RunConfig,
        args: argparse.Namespace | None = None) -> int:
    """Programmatic entry point mirroring the CLI subcommands."""
    handlers = {"verify": cmd_verify, "evalq": cmd_evalq,
                "solve": cmd_solve, "iterate": cmd_iterate,
                "report": cmd_report}
    if command not in handlers:
        raise KeyError(f"unknown command '{command}'")
    if args is None:
        args = argparse.Namespace(suite="all", out=None, method="both",
                                  point=None, n_points=5, input=None,
                                  fast=None)
    return handlers[command](config, args)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    try:
        cfg = RunConfig.from_ini(args.config) if args.config else RunConfig()
    except (FileNotFoundError, KeyError, configparser.Error) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return 2
    cfg.apply_overrides(args)
    if getattr(args, "fast", None):
        cfg.fast = True
    if cfg.threads and cfg.threads > 0:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ[var] = str(cfg.threads)
    try:
        return run(args.command, cfg, args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
