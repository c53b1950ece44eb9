"""Command-line front end.

Subcommands::

    simulate        population time series as CSV or JSON
    compare         deviation between two backends over a time grid
    scan            one observable swept over one parameter
    transfer-times  candidate transfer times and their phase conditions
    classify        regime label for a parameter set

Frequencies are in units of ``--g`` and times in units of ``1/g``. With the
default ``--g 1`` the numbers are used as given; any other value rescales
frequency inputs by ``g`` and time inputs by ``1/g``.

Exit status is 0 on success, 2 for usage errors and 3 when the parameters
are outside the chosen model's domain.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import analysis
from .core import LocalAmplitudes, QubitState, SingularityError, SystemParams, beat_frequency
from .dynamics import BACKENDS, TimeSeries, format_number, make_evolver, population, run
from .effective import ValidityWarning
from .transfer import (
    DEFAULT_THRESHOLD,
    DEFAULT_TOLERANCE,
    classify_regime,
    dispersive_transfer_times,
    resonant_transfer_times,
)

log = logging.getLogger("twocavity")

EXIT_DOMAIN = 3

NAMED_STATES = {
    "atom1": LocalAmplitudes(c=1),
    "atom2": LocalAmplitudes(d=1),
    "cav1": LocalAmplitudes(a=1),
    "cav2": LocalAmplitudes(b=1),
}
AMPLITUDE_NAMES = ("a", "b", "c", "d")
SCAN_PARAMS = {"hopping": "A", "detuning": "delta", "g": "g"}
OBSERVABLES = ("max-transfer-prob", "first-transfer-time", "beat-frequency")


class UsageError(Exception):
    pass


def parse_init(text: str):
    text = text.strip()
    if text in NAMED_STATES:
        return NAMED_STATES[text]
    try:
        theta, phi = (float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--init must be one of {', '.join(NAMED_STATES)} or 'theta,phi', got {text!r}")
    try:
        return QubitState(theta, phi)
    except ValueError as err:
        raise UsageError(str(err))


def _add_system_args(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="JSON output of an earlier run to reuse as defaults")
    p.add_argument("--g", type=float, default=1.0, help="atom-cavity coupling (default 1)")
    p.add_argument("--hopping", type=float, default=10.0, help="intercavity hopping A")
    p.add_argument("--detuning", type=float, default=0.1, help="atom-cavity detuning")
    p.add_argument("--omega-f", type=float, default=1000.0, help="bare cavity frequency")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", type=Path, help="write here instead of stdout")


def _add_run_args(p: argparse.ArgumentParser, t_max: float = 40.0, samples: int = 2001):
    p.add_argument("--model", choices=BACKENDS, default="oracle")
    p.add_argument("--t-max", type=float, default=t_max)
    p.add_argument("--samples", type=int, default=samples)
    p.add_argument("--init", default="atom1", help="atom1, atom2, cav1, cav2 or 'theta,phi'")
    p.add_argument("--n-max", type=int, default=1, help="photon cutoff per cavity for the oracle")
    p.add_argument(
        "--mirrored",
        action="store_true",
        help="near-resonant models: atoms near the antisymmetric mode (delta ~ -A)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twocavity", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    parser.subcommands = sub.choices

    p = sub.add_parser("simulate", help="population time series")
    _add_system_args(p)
    _add_run_args(p)

    p = sub.add_parser("compare", help="deviation between two backends")
    _add_system_args(p)
    _add_run_args(p)
    p.add_argument("--against", choices=BACKENDS, default="oracle", help="reference backend")

    p = sub.add_parser("scan", help="sweep one parameter")
    _add_system_args(p)
    _add_run_args(p, t_max=100.0, samples=20001)
    p.add_argument("--param", choices=tuple(SCAN_PARAMS), required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--observable", choices=OBSERVABLES, default="first-transfer-time")

    p = sub.add_parser("transfer-times", help="transfer times and phase conditions")
    _add_system_args(p)
    p.add_argument("--regime", choices=("dispersive", "resonant"), default="dispersive")
    p.add_argument("--n-max", type=int, default=2, help="largest transfer index n")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)

    p = sub.add_parser("classify", help="regime label")
    _add_system_args(p)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    return parser


def _config(args) -> dict:
    skip = {"config", "output", "format", "verbose"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _params(args) -> SystemParams:
    p = SystemParams(g=1.0, A=args.hopping, delta=args.detuning, omega_f=args.omega_f)
    return p.scaled(args.g)


def _time_grid(args):
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    if not args.t_max >= 0:
        raise UsageError("--t-max must be non-negative")
    # dimensionless times, then physical ones
    grid = np.linspace(0.0, args.t_max, args.samples)
    return grid, grid / args.g


def _local(init) -> LocalAmplitudes:
    return init.initial_amplitudes() if isinstance(init, QubitState) else init


def _emit(text: str, args):
    if args.output:
        args.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _table(columns, rows, args, extra: dict | None = None) -> str:
    if args.format == "json":
        doc = {"config": _config(args), "columns": list(columns), "rows": rows}
        doc.update(extra or {})
        return json.dumps(doc, indent=1) + "\n"
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_cell(x) for x in row))
    return "\n".join(lines) + "\n"


def _cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format_number(x)


def cmd_simulate(args) -> str:
    params = _params(args)
    init = parse_init(args.init)
    _, t = _time_grid(args)
    traj = run(args.model, params, init, t, n_max=args.n_max, mirrored=args.mirrored)
    series = TimeSeries.from_trajectory(traj, time_scale=args.g)
    if args.format == "json":
        return series.to_json(_config(args))
    return series.to_csv()


def cmd_compare(args) -> str:
    params = _params(args)
    init = _local(parse_init(args.init))
    _, t = _time_grid(args)
    x = make_evolver(args.model, params, args.n_max, args.mirrored)(init, t)
    ref = make_evolver(args.against, params, args.n_max, args.mirrored)(init, t)
    dev = np.abs(x - ref)
    field = np.abs(x[:, 0]) ** 2 + np.abs(x[:, 1]) ** 2
    field_ref = np.abs(ref[:, 0]) ** 2 + np.abs(ref[:, 1]) ** 2
    report = {
        "config": _config(args),
        "models": [args.model, args.against],
        "grid": {"t_min": 0.0, "t_max": float(args.t_max), "samples": int(t.size)},
        "max_dev": float(dev.max()),
        "rms_dev": float(np.sqrt(np.mean(dev**2))),
        "per_amplitude": {
            name: {"max_dev": float(dev[:, i].max()), "rms_dev": float(np.sqrt(np.mean(dev[:, i] ** 2)))}
            for i, name in enumerate(AMPLITUDE_NAMES)
        },
        "max_field_population_dev": float(np.max(np.abs(field - field_ref))),
    }
    if params.delta1 != 0:
        report["validity_indicator"] = float(t[-1] * params.g**2 / abs(params.delta1))
        report["field_population_scale"] = float((params.g / params.delta1) ** 2)
    return json.dumps(report, indent=1) + "\n"


def _scan_point(args, params: SystemParams, init, t) -> float:
    if args.observable == "beat-frequency":
        try:
            return beat_frequency(params) / args.g
        except SingularityError:
            return math.nan
    f = population(args.model, params, init, which=3, n_max=args.n_max, mirrored=args.mirrored)
    if args.observable == "max-transfer-prob":
        y = f(t)
        i = int(np.argmax(y))
        if 0 < i < t.size - 1:
            return analysis.refine_maximum(f, t[i - 1], t[i], t[i + 1])[1]
        return float(y[i])
    peak = analysis.first_transfer_peak(f, t)
    return math.nan if peak is None else peak[0] * args.g


def cmd_scan(args) -> str:
    if args.points < 1:
        raise UsageError("--points must be at least 1")
    if args.points == 1 and args.start != args.stop:
        raise UsageError("a single-point scan needs --from equal to --to")
    base = _params(args)
    init = _local(parse_init(args.init))
    _, t = _time_grid(args)
    field = SCAN_PARAMS[args.param]
    rows = []
    for value in np.linspace(args.start, args.stop, args.points):
        fields = base.to_dict()
        fields[field] = float(value) if field == "g" else float(value) * args.g
        params = SystemParams(**fields)
        log.debug("scan %s=%g", args.param, value)
        rows.append([float(value), float(_scan_point(args, params, init, t))])
    return _table((args.param, args.observable), rows, args)


def cmd_transfer_times(args) -> str:
    params = _params(args)
    if args.n_max < 0:
        raise UsageError("--n-max must be non-negative")
    solver = dispersive_transfer_times if args.regime == "dispersive" else resonant_transfer_times
    times = solver(params, args.n_max, tolerance=args.tolerance)
    integer = "m" if args.regime == "dispersive" else "l"
    columns = ("n", "tau", "condition_ok", integer, "residual")
    rows = [[tt.n, tt.tau * args.g, tt.condition_ok, tt.integer, tt.residual] for tt in times]
    return _table(columns, rows, args)


def cmd_classify(args) -> str:
    result = classify_regime(_params(args), threshold=args.threshold)
    names = sorted(result.ratios)
    columns = ("label",) + tuple(names)
    row = [result.label.value] + [result.ratios[k] for k in names]
    if args.format == "json":
        return _table(columns, [row], args)
    return ",".join(columns) + "\n" + ",".join([row[0]] + [format_number(x) for x in row[1:]]) + "\n"


COMMANDS = {
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "scan": cmd_scan,
    "transfer-times": cmd_transfer_times,
    "classify": cmd_classify,
}


def _apply_config(parser: argparse.ArgumentParser, argv) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if getattr(args, "config", None) is None:
        return args
    try:
        doc = json.loads(args.config.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as err:
        parser.error(f"cannot read --config {args.config}: {err}")
    saved = doc.get("config", doc)
    if saved.get("command", args.command) != args.command:
        parser.error(f"--config was written by '{saved['command']}', not '{args.command}'")
    # saved values become defaults; flags given explicitly still win
    sub = parser.subcommands[args.command]
    known = {a.dest for a in sub._actions}
    sub.set_defaults(**{k: v for k, v in saved.items() if k in known and k != "config"})
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    args = _apply_config(parser, argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    logging.captureWarnings(True)
    warnings.simplefilter("once", ValidityWarning)
    try:
        text = COMMANDS[args.command](args)
    except UsageError as err:
        parser.error(str(err))
    except ValueError as err:
        # SingularityError and RegimeMismatchError land here too
        print(f"twocavity: error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    _emit(text, args)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
