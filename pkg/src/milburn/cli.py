"""Command-line entry point: ``milburn <command> [flags]``.

Exit codes: 0 success, 1 validation failure, 2 configuration error.
"""

import argparse
import os
import sys

from .errors import ConfigInvalid, MilburnError
from .model import ModelParams, resonance_fields
from .sweep import (SweepConfig, field_scan, flatten_config, load_config, parse_values,
                    spectrum_scan, time_series, werner_table, write_csv)
from .validation import validate

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG = 0, 1, 2

BZ_SCAN = {"start": -4.0, "stop": 4.0, "step": 0.01}
MIRRORED = ((0.8, -0.4), (-0.8, 0.4))

PRESETS = {
    "fig1": {},
    "fig2": {"bz": [0.0], "gamma": [0.0, 0.03, 0.3], "t_end": 20.0, "n_points": 401},
    "fig3": {"bz": [0.0, 1.0, 1.8, 4.0], "gamma": [0.03], "t_end": 20.0, "n_points": 401},
    "fig5": {"bz": BZ_SCAN, "gamma": [0.03]},
    "fig6": {"bz": BZ_SCAN},
}


def _common(p: argparse.ArgumentParser):
    p.add_argument("--j", type=float, help="Heisenberg coupling J")
    p.add_argument("--k", type=float, help="biquadratic coupling K")
    p.add_argument("--bz", help="field: value, list 'a,b,c' or range 'start:stop:step'")
    p.add_argument("--gamma", help="decoherence rate(s): value or list 'a,b'")
    p.add_argument("--p", type=float, help="isotropic-state weight p in [0, 1]")
    p.add_argument("--t-end", type=float, dest="t_end")
    p.add_argument("--points", type=int, dest="n_points", help="number of time samples")
    p.add_argument("--out", default="results", help="output directory (default: results)")
    p.add_argument("--config", help="JSON file with SweepConfig fields")
    p.add_argument("--deg-tol", type=float, dest="deg_tol")
    p.add_argument("--rescale-negativity", action="store_true", default=None,
                   dest="rescale_negativity", help="report twice the negativity")
    p.add_argument("--by-evolution", type=float, dest="by_evolution", metavar="T",
                   help="steady values by evolving to time T instead of projecting")
    p.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="milburn",
        description="Intrinsic decoherence of two spin-1 particles in a magnetic field.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "evolve": "time series of negativity, coherence, linear entropy",
        "scan-field": "steady-state quantities versus Bz",
        "spectrum": "energy levels versus Bz",
        "resonances": "list the level-crossing fields",
        "validate": "run every cross-check and print a report",
        "fig1": "isotropic-state negativity and linear entropy versus p",
        "fig2": "time series for gamma in {0, 0.03, 0.3} at Bz = 0",
        "fig3": "time series for Bz in {0, 1, 1.8, 4} at gamma = 0.03",
        "fig5": "steady-state field scans for both coupling signs",
        "fig6": "energy levels versus Bz for both coupling signs",
    }
    for name, text in helps.items():
        _common(sub.add_parser(name, help=text, description=text))
    return parser


def make_config(args, preset: dict | None = None) -> SweepConfig:
    """Defaults, then preset, then config file, then flags."""
    data = flatten_config(preset or {})
    if args.config:
        data.update(flatten_config(load_config(args.config)))
    cfg = SweepConfig.from_dict(data)
    flags = {
        "J": args.j, "K": args.k, "p": args.p, "t_end": args.t_end, "n_points": args.n_points,
        "deg_tol": args.deg_tol, "rescale_negativity": args.rescale_negativity,
        "by_evolution": args.by_evolution, "seed": args.seed,
        "bz": parse_values(args.bz) if args.bz is not None else None,
        "gamma": parse_values(args.gamma) if args.gamma is not None else None,
    }
    return cfg.updated(**flags).validate()


def _emit(table, path) -> None:
    write_csv(table, path)
    print(path)


def run_time_series(cfg: SweepConfig, out: str, prefix: str) -> None:
    for table in time_series(cfg):
        _emit(table, os.path.join(out, f"{prefix}_{table.name}.csv"))


def run_field_scans(cfg: SweepConfig, out: str, prefix: str, couplings) -> None:
    for J, K in couplings:
        table = field_scan(cfg.updated(J=J, K=K))
        _emit(table, os.path.join(out, f"{prefix}_{table.name}.csv"))


def run_spectra(cfg: SweepConfig, out: str, prefix: str, couplings) -> None:
    for J, K in couplings:
        table = spectrum_scan(cfg.updated(J=J, K=K))
        _emit(table, os.path.join(out, f"{prefix}_{table.name}.csv"))


def _couplings(args, cfg: SweepConfig):
    if args.j is None and args.k is None and not args.config:
        return MIRRORED
    return ((cfg.J, cfg.K),)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cmd = args.command
    try:
        cfg = make_config(args, PRESETS.get(cmd))
        if cmd == "validate":
            report = validate(cfg.seed)
            text = report.text()
            sys.stdout.write(text)
            if args.out:
                os.makedirs(args.out, exist_ok=True)
                with open(os.path.join(args.out, f"validation_seed{cfg.seed}.txt"), "w", newline="\n") as fh:
                    fh.write(text)
            return report.exit_code
        if cmd == "resonances":
            res = resonance_fields(ModelParams(cfg.J, cfg.K))
            print("crossings: " + ", ".join(f"{b:.12g}" for b in res.crossings))
            for bz, i, j in res.pairs:
                print(f"  E{i} = E{j} at Bz = {bz:.12g}")
            if res.permanent:
                print("permanent degeneracies: "
                      + ", ".join(f"E{i}=E{j}" for i, j in res.permanent))
            return EXIT_OK
        if cmd == "evolve":
            run_time_series(cfg, args.out, "evolve")
        elif cmd == "scan-field":
            run_field_scans(cfg, args.out, "scan", ((cfg.J, cfg.K),))
        elif cmd == "spectrum":
            run_spectra(cfg, args.out, "spectrum", ((cfg.J, cfg.K),))
        elif cmd == "fig1":
            _emit(werner_table(101), os.path.join(args.out, "fig1.csv"))
        elif cmd in ("fig2", "fig3"):
            run_time_series(cfg, args.out, cmd)
        elif cmd == "fig5":
            run_field_scans(cfg, args.out, cmd, _couplings(args, cfg))
        elif cmd == "fig6":
            run_spectra(cfg, args.out, cmd, _couplings(args, cfg))
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MilburnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
