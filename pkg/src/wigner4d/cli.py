"""Command-line interface.

Subcommands:
    run <config> --out DIR [--desk] [--threads N]   integrate a scenario
    describe <config> [--desk]                       grid report, no run
    builtin <name> [--emit PATH] [--desk]            dump a shipped scenario
    validate <config>                                schema check only

Exit codes: 0 success, 1 usage error, 2 validation/config error, 3 runtime
failure.  The FFT worker count defaults to the WIGNER4D_THREADS environment
variable (all cores if unset); --threads overrides it.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="wigner4d",
                     description="4D phase-space solver for two-level systems")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate a scenario config")
    p_run.add_argument("config", help="path to a scenario JSON file")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--desk", action="store_true",
                       help="apply the desk-scale override block")
    p_run.add_argument("--threads", type=int, default=None,
                       help="FFT worker threads (overrides WIGNER4D_THREADS)")

    p_desc = sub.add_parser("describe",
                            help="print grid, consistency ratios, memory")
    p_desc.add_argument("config")
    p_desc.add_argument("--desk", action="store_true")

    p_builtin = sub.add_parser("builtin", help="emit a shipped scenario")
    p_builtin.add_argument("name")
    p_builtin.add_argument("--emit", default=None, help="write to this path")
    p_builtin.add_argument("--desk", action="store_true")

    p_val = sub.add_parser("validate", help="check a config file")
    p_val.add_argument("config")
    return parser


def _load_config(path: str, desk: bool):
    from .scenario import ConfigError, desk_variant, load
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    config = load(p.read_text())
    return desk_variant(config) if desk else config


def _memory_estimate(config: dict) -> dict:
    nodes = 1
    for key in ("n_x", "n_y", "n_px", "n_py"):
        nodes *= int(config["grid"][key])
    mode = config["mode"]
    scalar = mode in ("classical_scalar", "meanfield_pair") or \
        config.get("initial_state", {}).get("spin") == "scalar" or \
        config.get("initial_state", {}).get("kind") == "gaussian_pair"
    state_bytes = nodes * (8 if scalar else 64)
    if mode == "meanfield_pair":
        state_bytes *= 2
    # one complex phase per substep kernel, plus two 2x2 unitary fields when
    # the relevant symbol has a spin part
    kernel_bytes = 2 * nodes * 16
    if not scalar and mode == "quantum":
        kernel_bytes += 2 * nodes * 64
    return {"nodes": nodes, "state_bytes": state_bytes,
            "kernel_bytes_estimate": kernel_bytes}


def _cmd_run(args) -> int:
    from .scenario import run
    config = _load_config(args.config, args.desk)
    result = run(config, out_dir=args.out, threads=args.threads)
    print(json.dumps(result.summary, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_describe(args) -> int:
    from .grid import build_grid, frensley_report
    from .scenario import _grid_spec
    config = _load_config(args.config, args.desk)
    grid = build_grid(_grid_spec(config))
    report = frensley_report(grid)
    info = {
        "name": config.get("name", ""),
        "mode": config["mode"],
        "shape": list(grid.shape),
        "steps_nm": [grid.dx, grid.dy],
        "steps_p": [grid.dpx, grid.dpy],
        "n_eta": [report.n_eta_x, report.n_eta_y],
        "n_mu": [report.n_mu_x, report.n_mu_y],
        "frensley_warn": report.warn,
        "memory": _memory_estimate(config),
        "valid": True,
    }
    print(json.dumps(info, indent=2, sort_keys=True))
    if report.warn:
        print("warning: grid consistency ratio outside [1/4, 4]; the full "
              "quantum kernels may lose accuracy", file=sys.stderr)
    return EXIT_OK


def _cmd_builtin(args) -> int:
    from .scenario import builtin, save
    config = builtin(args.name, desk=args.desk)
    text = save(config, args.emit)
    if args.emit is None:
        print(text)
    else:
        print(f"wrote {args.emit}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    _load_config(args.config, desk=False)
    print("ok")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    from .scenario import ConfigError
    handler = {"run": _cmd_run, "describe": _cmd_describe,
               "builtin": _cmd_builtin, "validate": _cmd_validate}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # runtime failures map to exit 3
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())
