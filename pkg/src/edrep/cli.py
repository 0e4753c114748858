"""Command-line front end.

Each subcommand writes an optional CSV table and a JSON summary; the summary
goes to stdout unless ``--json`` names a file.  Failures print one line,
``error: <Kind>: <message>``, to stderr and exit non-zero.
"""

from __future__ import annotations

import argparse
import sys

from . import report
from .config import resolve_config
from .errors import ComputationError, ConfigError, EdrepError, IoError
from .io import csv_text, dumps_json, write_atomic

EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_COMPUTATION = 4

_CONFIG_FLAGS = {
    "alpha": "alpha",
    "profile": "profile",
    "width": "width",
    "profile_file": "profile_path",
    "k_min": "k_min",
    "k_max": "k_max",
    "count": "count",
    "spacing": "spacing",
    "smooth_rel": "smooth_rel",
    "osc_rel": "oscillatory_rel",
    "csv": "csv_path",
    "json": "json_path",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON config file (default: $EDREP_CONFIG)")
    p.add_argument("--alpha", type=float, help="fine-structure constant")
    p.add_argument("--profile", choices=("hydrogen", "gaussian", "file"))
    p.add_argument("--width", type=float, help="gaussian width in Bohr radii")
    p.add_argument("--profile-file", help="CSV with header r,density")
    p.add_argument("--k-min", type=float)
    p.add_argument("--k-max", type=float)
    p.add_argument("--count", type=int, help="number of k nodes")
    p.add_argument("--spacing", choices=("log", "linear"))
    p.add_argument("--smooth-rel", type=float, help="relative tolerance for smooth integrals")
    p.add_argument("--osc-rel", type=float, help="relative tolerance for oscillatory integrals")
    p.add_argument("--csv", help="write the table here")
    p.add_argument("--json", help="write the summary here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="edrep", description="Optimal cutoff function and derived observables.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cutoff", help="closed-form vs grid-minimised cutoff")
    _common(p)

    p = sub.add_parser("energy", help="energy shift and free-electron width scan")
    _common(p)
    p.add_argument("--scan", type=float, nargs=3, metavar=("LO", "HI", "N"), default=(10.0, 1000.0, 9),
                   help="width range in Compton lengths and point count")
    p.add_argument("--profile-csv", help="also dump the density profile as r,density")

    p = sub.add_parser("potential", help="induced potential V''(r)")
    _common(p)
    p.add_argument("--r-min", type=float, default=0.1)
    p.add_argument("--r-max", type=float, default=1e4)
    p.add_argument("--r-count", type=int, default=41)

    p = sub.add_parser("photons", help="dressed photon spectrum")
    _common(p)
    p.add_argument("--number-density", type=float, default=1e23, help="atoms per cm^3")

    p = sub.add_parser("gamma", help="modified dipole-dipole tensor")
    _common(p)
    p.add_argument("--r-min", type=float, default=50.0)
    p.add_argument("--r-max", type=float, default=500.0)
    p.add_argument("--r-count", type=int, default=11)

    p = sub.add_parser("vdw", help="standard and modified van der Waals potentials")
    _common(p)
    p.add_argument("--spectrum-a", help="CSV with header excitation_energy,dz_squared")
    p.add_argument("--spectrum-b", help="second atom (default: same as the first)")
    p.add_argument("--spectrum-csv", help="echo the first spectrum table here")
    p.add_argument("--r-min", type=float, default=10.0)
    p.add_argument("--r-max", type=float, default=1e4)
    p.add_argument("--r-count", type=int, default=31)

    p = sub.add_parser("verify-appendix", help="closed-form integrals vs quadrature")
    _common(p)
    p.add_argument("--cases", type=int, default=50, help="random (A, B) pairs")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("report", help="every reproduced quantity in one JSON document")
    _common(p)
    return parser


def _dispatch(args, cfg):
    cmd = args.command
    if cmd == "energy":
        if args.profile_csv:
            write_atomic(args.profile_csv, cfg.density_profile().to_csv())
        return report.run_energy(cfg, scan=tuple(args.scan))
    if cmd == "potential":
        return report.run_potential(cfg, args.r_min, args.r_max, args.r_count)
    if cmd == "photons":
        return report.run_photons(cfg, args.number_density)
    if cmd == "gamma":
        return report.run_gamma(cfg, args.r_min, args.r_max, args.r_count)
    if cmd == "vdw":
        out = report.run_vdw(cfg, args.spectrum_a, args.spectrum_b, args.r_min, args.r_max, args.r_count)
        if args.spectrum_csv:
            from .interactions import read_spectrum_csv

            table = read_spectrum_csv(args.spectrum_a or report.default_spectrum_path())
            write_atomic(args.spectrum_csv, table.to_csv())
        return out
    if cmd == "verify-appendix":
        return report.run_verify_closed_forms(cfg, args.cases, args.seed)
    return report.RUNNERS[cmd](cfg)


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        overrides = {dst: getattr(args, src) for src, dst in _CONFIG_FLAGS.items()}
        cfg = resolve_config(args.config, overrides)
        table, summary = _dispatch(args, cfg)
        summary = {"command": {"value": args.command, "units": "", "reference": "invocation"}, **summary}
        if table is not None and cfg.csv_path:
            write_atomic(cfg.csv_path, csv_text(*table))
        text = dumps_json(summary)
        if cfg.json_path:
            write_atomic(cfg.json_path, text)
        else:
            stdout.write(text)
        return 0
    except ConfigError as exc:
        return _fail(exc, EXIT_CONFIG)
    except IoError as exc:
        return _fail(exc, EXIT_IO)
    except (ComputationError, EdrepError, ValueError, ArithmeticError) as exc:
        return _fail(exc, EXIT_COMPUTATION)


def _fail(exc, code):
    msg = " ".join(str(exc).split())
    print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
