"""Command-line front end.

Subcommands compute on a Gaussian packet (or the localization family)
and write delimited output plus rendered figures into a target
directory.  Configuration precedence is: built-in defaults, then a JSON
config file, then explicit flags.  The effective configuration is
echoed into a .meta.json sidecar next to each CSV, with no timestamps,
so identical inputs produce byte-identical output trees.

Exit codes: 0 success; 2 bad usage or parameters; 3 resolution or
convergence failure; 4 verification property failure.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from ._pool import map_ordered
from .currents import (born_density_current, chi, compute_current,
                       kg_zero_component)
from .dynamics import converge_time_of_flight
from .errors import ConvergenceError, ResolutionError, UnsupportedInputError
from .grid import SpectralGrid
from .oracle import delta_sequence
from .plotting import chi_figure, delta_figure, density_figure, tof_figure
from .reporting import write_csv, write_json, write_meta
from .state import gaussian_state
from .verify import run_suite

DEFAULTS = {
    "density": {"sigma_p": 1.0, "pbar": 0.0, "grid_n": None, "p_max": None},
    "chi-sweep": {"sigma_list": "0.01,0.0316,0.1,0.316,1,3.16,10,31.6,100,316,1000"},
    "tof": {"sigma_p": 2.0, "pbar": 0.0, "t_budget": 1e8,
            "grid_n": None, "p_max": None},
    "delta": {"n_list": "1,2,4,8,16", "a": 0.0},
    "verify": {},
}


def _next_pow2(x: float) -> int:
    return 1 << max(4, int(np.ceil(np.log2(max(x, 16.0)))))


def default_grid(sigma_p: float, pbar: float) -> SpectralGrid:
    """Band wide enough for the packet, box long enough for its envelope,
    node count clamped to a practical range."""
    p_max = 8.0 * max(sigma_p, abs(pbar), 1.0)
    box = max(40.0 * np.sqrt(2.0) / sigma_p, 48.0)
    n = min(max(_next_pow2(box * p_max / np.pi), 1024), 8192)
    return SpectralGrid(n, p_max)


def tof_grid(sigma_p: float, pbar: float) -> SpectralGrid:
    p_max = 8.0 * (sigma_p + abs(pbar))
    return SpectralGrid(8192 if sigma_p <= 0.1 else 4096, p_max)


def _floats(text) -> list:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(tok) for tok in str(text).split(",") if tok.strip()]


def _grid_from(cfg, fallback: SpectralGrid) -> SpectralGrid:
    n = cfg.get("grid_n") or fallback.n
    p_max = cfg.get("p_max") or fallback.p_max
    return SpectralGrid(int(n), float(p_max))


def cmd_density(cfg: dict, out: Path) -> int:
    g = _grid_from(cfg, default_grid(cfg["sigma_p"], cfg["pbar"]))
    st = gaussian_state(g, pbar=cfg["pbar"], sigma_p=cfg["sigma_p"])
    cur = compute_current(st)
    born = born_density_current(st, method="spectral")
    j0 = kg_zero_component(st)
    csv = write_csv(out / "density.csv", ["x", "rho", "rho_born", "j0_kg"],
                    [g.x, cur.rho, born.rho, j0])
    write_meta(csv, {"command": "density", **cfg,
                     "grid": {"n": g.n, "p_max": g.p_max},
                     "chi": chi(st)})
    window = min(10.0 / cfg["sigma_p"], g.length / 2.0)
    density_figure(g.x, cur.rho, born.rho, j0, out / "density.png",
                   window=window)
    return 0


def cmd_chi_sweep(cfg: dict, out: Path) -> int:
    sigmas = _floats(cfg["sigma_list"])
    if any(s <= 0 for s in sigmas):
        raise UnsupportedInputError("sigma values must be positive")

    def one(sig):
        return chi(gaussian_state(default_grid(sig, 0.0), 0.0, sig))

    chis = map_ordered(one, sigmas)
    csv = write_csv(out / "chi_sweep.csv", ["sigma_p", "chi"], [sigmas, chis])
    write_meta(csv, {"command": "chi-sweep", **cfg,
                     "grids": [{"n": default_grid(s, 0.0).n,
                                "p_max": default_grid(s, 0.0).p_max}
                               for s in sigmas]})
    chi_figure(sigmas, chis, out / "chi_sweep.png")
    return 0


def cmd_tof(cfg: dict, out: Path) -> int:
    g = _grid_from(cfg, tof_grid(cfg["sigma_p"], cfg["pbar"]))
    st = gaussian_state(g, pbar=cfg["pbar"], sigma_p=cfg["sigma_p"])
    res = converge_time_of_flight(st, t_budget=cfg["t_budget"])
    csv = write_csv(out / "tof.csv", ["p", "g", "born_g"],
                    [res.p_nodes, res.g, res.born_g])
    write_meta(csv, {"command": "tof", **cfg,
                     "grid": {"n": g.n, "p_max": g.p_max},
                     "t_final": res.t_final,
                     "convergence_gap": res.convergence_gap,
                     **res.meta})
    tof_figure(res.p_nodes, res.g, res.born_g, out / "tof.png")
    if not res.meta.get("converged", False):
        print(f"tof: not converged within budget (gap "
              f"{res.convergence_gap:.3e} at t {res.t_final:.3e})",
              file=sys.stderr)
        return 3
    return 0


def cmd_delta(cfg: dict, out: Path) -> int:
    ns = _floats(cfg["n_list"])
    results = map_ordered(lambda n: delta_sequence(n, a=cfg["a"]), ns)
    summary = []
    for n, r in zip(ns, results):
        tag = f"{n:g}".replace(".", "_")
        csv = write_csv(out / f"delta_rho_n{tag}.csv", ["x", "rho_n"],
                        [r.x, r.rho])
        write_csv(out / f"delta_res_n{tag}.csv", ["p", "R_n"],
                  [r.p_probe, r.r_n])
        write_meta(csv, {"command": "delta", "n": n, "a": cfg["a"],
                         "integral": r.integral, "width": r.width, **r.meta})
        summary.append({"n": n, "integral": r.integral, "width": r.width})
    write_json(out / "delta_summary.json",
               {"command": "delta", **cfg, "members": summary})
    delta_figure(results, out / "delta.png")
    return 0


def cmd_verify(cfg: dict, out: Path, seed: int) -> int:
    report = run_suite(seed=seed)
    write_json(out / "verify_report.json", report)
    for name, prop in report["properties"].items():
        status = "PASS" if prop["passed"] else "FAIL"
        print(f"{status} {name}: value={prop['value']:.6g} "
              f"tolerance={prop['tolerance']}")
    if not report["all_passed"]:
        return 4
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kgcur",
        description="Positive, conserved, causal probability current for a "
                    "free relativistic particle on a line")
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--config", help="JSON file with flag defaults")
    ap.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("density", help="density/current profile of a packet")
    d.add_argument("--sigma-p", type=float)
    d.add_argument("--pbar", type=float)
    d.add_argument("--grid-n", type=int)
    d.add_argument("--p-max", type=float)

    c = sub.add_parser("chi-sweep", help="Born deviation across spreads")
    c.add_argument("--sigma-list")

    t = sub.add_parser("tof", help="time-of-flight momentum readout")
    t.add_argument("--sigma-p", type=float)
    t.add_argument("--pbar", type=float)
    t.add_argument("--t-budget", type=float)
    t.add_argument("--grid-n", type=int)
    t.add_argument("--p-max", type=float)

    dl = sub.add_parser("delta", help="localization sequence diagnostics")
    dl.add_argument("--n-list")
    dl.add_argument("--a", type=float)

    sub.add_parser("verify", help="run the property suite")
    return ap


def _merge_config(command: str, args: argparse.Namespace,
                  config_path) -> dict:
    cfg = dict(DEFAULTS[command])
    if config_path:
        with open(config_path) as fh:
            loaded = json.load(fh)
        for key, val in loaded.items():
            if key in cfg:
                cfg[key] = val
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        cfg = _merge_config(args.command, args, args.config)
        if args.command == "density":
            return cmd_density(cfg, out)
        if args.command == "chi-sweep":
            return cmd_chi_sweep(cfg, out)
        if args.command == "tof":
            return cmd_tof(cfg, out)
        if args.command == "delta":
            return cmd_delta(cfg, out)
        return cmd_verify(cfg, out, args.seed)
    except (ResolutionError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (UnsupportedInputError, ValueError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
