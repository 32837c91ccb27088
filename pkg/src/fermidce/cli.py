"""Command-line front end.

Subcommands map one-to-one onto the library surface::

    simulate      one drive -> moment report (json)
    chi           characteristic function on a u grid (csv)
    distribution  exact work or number distribution (csv)
    sweep-l       moments over a cutoff grid (csv)
    sweep-alpha   fitted scaling coefficients over a speed grid (csv)
    fit           scaling fit of an existing sweep csv (json)
    oracle-check  Gaussian pipeline vs brute-force Fock oracle (json)

Exit codes: 0 success, 1 failed oracle check, 2 invalid input,
3 numerical failure.  Every output embeds the resolved configuration and
the package version.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from .bogoliubov import diagonalize, evolve
from .errors import NumericalFailure
from .fock import build_fock_operators, oracle_char
from .harness import (
    ENERGY_UNIT,
    SweepTable,
    fit_scaling,
    run_point,
    sweep_cutoff,
    sweep_speed,
)
from .model import ModelConfig, build_quadratic_form
from .statistics import (
    char_grid,
    mean_work_analytic,
    number_distribution,
    pairing_matrix,
    work_distribution,
)

ORACLE_U_GRID = (0.1, 0.4, 0.9, 1.4, 2.0, 2.6, 3.1)
ORACLE_TOL = 1e-8

CONFIG_KEYS = ("alpha_over_v", "delta_l", "l_ratio", "cutoff", "theta0", "l_ref", "v_ref")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha-over-v", type=float, default=None,
                        help="wall speed over mode speed (may be negative for compression)")
    parser.add_argument("--delta-l", type=float, default=None,
                        help="log expansion ratio ln(l_final/l_initial)")
    parser.add_argument("--l-ratio", type=float, default=None,
                        help="expansion ratio l_final/l_initial (alternative to --delta-l)")
    parser.add_argument("--cutoff", type=int, default=None,
                        help="mode cutoff L (keeps 2L modes)")
    parser.add_argument("--theta0", type=float, default=None, help="boundary phase")
    parser.add_argument("--l-ref", type=float, default=None, help="final box length")
    parser.add_argument("--v-ref", type=float, default=None, help="mode speed")
    parser.add_argument("--config", default=None,
                        help="json file with the keys above; explicit flags take precedence")
    parser.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")


def _resolve_config(args: argparse.Namespace) -> ModelConfig:
    if args.delta_l is not None and args.l_ratio is not None:
        raise ValueError("give either --delta-l or --l-ratio, not both")
    values: dict = {"theta0": 0.0, "l_ref": 1.0, "v_ref": 1.0}
    if args.config:
        with open(args.config) as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - set(CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown keys in config file: {sorted(unknown)}")
        values.update(loaded)
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    # an explicit flag displaces the other spelling of the same quantity
    if args.delta_l is not None:
        values.pop("l_ratio", None)
    if args.l_ratio is not None:
        values.pop("delta_l", None)
    if values.get("delta_l") is not None and values.get("l_ratio") is not None:
        raise ValueError("give either delta_l or l_ratio, not both (check the config file)")
    if values.get("l_ratio") is not None:
        ratio = values.pop("l_ratio")
        if ratio <= 0:
            raise ValueError(f"l_ratio must be positive, got {ratio}")
        values["delta_l"] = float(np.log(ratio))
    for required in ("alpha_over_v", "delta_l", "cutoff"):
        if values.get(required) is None:
            raise ValueError(f"missing required parameter {required.replace('_', '-')}")
    return ModelConfig(
        speed_ratio=values["alpha_over_v"],
        delta_l=values["delta_l"],
        cutoff=values["cutoff"],
        theta0=values["theta0"],
        l_ref=values["l_ref"],
        v_ref=values["v_ref"],
    )


def _emit(text: str, output: str) -> None:
    if output == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(output, "w") as fh:
            fh.write(text)


def _json_payload(config: ModelConfig, body: dict) -> str:
    payload = {"version": __version__, "config": asdict(config)}
    payload.update(body)
    return json.dumps(payload, indent=2, sort_keys=True)


def _csv_header(config: ModelConfig, columns) -> str:
    meta = json.dumps(asdict(config), sort_keys=True)
    return f"# fermidce {__version__}\n# meta: {meta}\n" + ",".join(columns) + "\n"


def _pipeline_state(config: ModelConfig):
    t = evolve(diagonalize(build_quadratic_form(config)), config.delta_l)
    return t, pairing_matrix(t, config)


def _parse_grid(text: str) -> list:
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise ValueError(f"range grids are start:stop:step, got {text!r}")
        start, stop, step = parts
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + k * step, 12) for k in range(count)]
    return [float(p) for p in text.split(",") if p.strip()]


def _cmd_simulate(args) -> int:
    config = _resolve_config(args)
    report = run_point(config, fd_step=args.fd_step)
    body = report.to_dict()
    del body["config"]
    _emit(_json_payload(config, {"report": body}), args.output)
    return 0


def _cmd_chi(args) -> int:
    config = _resolve_config(args)
    if args.u_max <= 0 or args.u_points < 2:
        raise ValueError("chi grid needs u-max > 0 and at least 2 points")
    _, state = _pipeline_state(config)
    us = np.linspace(0.0, args.u_max, args.u_points)
    chi = char_grid(state, us, args.observable)
    lines = [_csv_header(config, ("u", "re_chi", "im_chi"))]
    for u, c in zip(us, chi):
        lines.append(f"{u:.12g},{c.real:.12g},{c.imag:.12g}\n")
    _emit("".join(lines), args.output)
    return 0


def _cmd_distribution(args) -> int:
    config = _resolve_config(args)
    t, state = _pipeline_state(config)
    if args.observable == "number":
        probs = number_distribution(state)
        support = 2 * np.arange(len(probs))
        columns = ("n", "probability")
    else:
        probs = work_distribution(
            state,
            allow_large=args.allow_large,
            mean_reference=mean_work_analytic(t, state),
        )
        support = np.arange(len(probs))
        columns = (f"w[{ENERGY_UNIT}]", "probability")
    lines = [_csv_header(config, columns)]
    for x, p in zip(support, probs):
        lines.append(f"{int(x)},{p:.12g}\n")
    _emit("".join(lines), args.output)
    return 0


def _cmd_sweep_l(args) -> int:
    config = _resolve_config(args)
    l_values = [int(v) for v in _parse_grid(args.l_values)]
    table = sweep_cutoff(config, l_values)
    _emit(table.to_csv(), args.output)
    return 0


def _cmd_sweep_alpha(args) -> int:
    config = _resolve_config(args)
    speeds = _parse_grid(args.speeds)
    l_values = [int(v) for v in _parse_grid(args.l_values)]
    table = sweep_speed(config, speeds, l_values)
    for speed, message in table.failures:
        print(f"warning: speed {speed} failed: {message}", file=sys.stderr)
    _emit(table.to_csv(), args.output)
    return 0


def _cmd_fit(args) -> int:
    with open(args.input) as fh:
        table = SweepTable.from_csv(fh.read())
    result = fit_scaling(table, args.target, min_cutoff=args.min_cutoff)
    payload = {
        "version": __version__,
        "input": args.input,
        "meta": table.meta,
        "fit": result.to_dict(),
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True), args.output)
    return 0


def _cmd_oracle_check(args) -> int:
    config = _resolve_config(args)
    ops = build_fock_operators(config, allow_large=args.oracle_large)
    _, state = _pipeline_state(config)
    report = {}
    worst = 0.0
    for which in ("work", "number"):
        grid = char_grid(state, ORACLE_U_GRID, which)
        diffs = [
            float(abs(g - oracle_char(ops, config.delta_l, u, which)))
            for u, g in zip(ORACLE_U_GRID, grid)
        ]
        report[which] = {"u_grid": list(ORACLE_U_GRID), "max_abs_diff": max(diffs)}
        worst = max(worst, max(diffs))
    passed = worst <= ORACLE_TOL
    body = {"tolerance": ORACLE_TOL, "max_abs_diff": worst, "passed": passed,
            "observables": report}
    _emit(_json_payload(config, body), args.output)
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fermidce",
        description="Vacuum work and particle statistics of a driven fermionic box",
    )
    parser.add_argument("--version", action="version", version=f"fermidce {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="moments of one drive")
    _add_config_flags(p)
    p.add_argument("--fd-step", type=float, default=None,
                   help="compute second moments by finite differences with this step "
                        "instead of the exact Wick sums")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("chi", help="characteristic function on a u grid")
    _add_config_flags(p)
    p.add_argument("--observable", choices=("work", "number"), default="work")
    p.add_argument("--u-max", type=float, default=float(2 * np.pi))
    p.add_argument("--u-points", type=int, default=121)
    p.set_defaults(func=_cmd_chi)

    p = sub.add_parser("distribution", help="full work or number distribution")
    _add_config_flags(p)
    p.add_argument("--observable", choices=("work", "number"), default="number")
    p.add_argument("--allow-large", action="store_true",
                   help="lift the L <= 64 guard on the work-distribution DFT")
    p.set_defaults(func=_cmd_distribution)

    p = sub.add_parser("sweep-l", help="moments over a cutoff grid")
    _add_config_flags(p)
    p.add_argument("--l-values", default="8,16,32,64,128,256,512")
    p.set_defaults(func=_cmd_sweep_l)

    p = sub.add_parser("sweep-alpha", help="scaling coefficients over a speed grid")
    _add_config_flags(p)
    p.add_argument("--speeds", default="0.1:3.0:0.1",
                   help="comma list or start:stop:step range")
    p.add_argument("--l-values", default="8,16,32,64,128,256,512")
    p.set_defaults(func=_cmd_sweep_alpha)

    p = sub.add_parser("fit", help="scaling fit of a sweep csv")
    p.add_argument("--input", required=True)
    p.add_argument("--target", choices=("work", "number"), required=True)
    p.add_argument("--min-cutoff", type=int, default=16)
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("oracle-check", help="validate the pipeline against the Fock oracle")
    _add_config_flags(p)
    p.add_argument("--oracle-large", action="store_true", help="raise the oracle guard to L=6")
    p.set_defaults(func=_cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
