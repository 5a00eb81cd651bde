"""Command-line front end: ``unruhcorr sweep`` and ``unruhcorr plot``."""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError
from .field_modes import QuadratureConfig
from .plot import emit_plot_script
from .sweep import KINDS, SweepRequest, run

_QUAD_KEYS = {
    "rel_tol": "rel_tol",
    "abs_tol": "abs_tol",
    "tail_halfwidth": "gaussian_tail_halfwidth",
    "panel_fraction": "max_panel_fraction_of_oscillation",
    "outer_tail_cutoff": "outer_tail_relative_cutoff",
    "max_subdivisions": "max_subdivisions",
}


class _Parser(argparse.ArgumentParser):
    # Invalid configuration exits with status 1, not argparse's 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_bool(text):
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="unruhcorr", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    sw = sub.add_parser("sweep", help="run a local, Unruh or sudden-death computation")
    S = argparse.SUPPRESS
    sw.add_argument("--config", help="key=value file; command-line flags take precedence")
    sw.add_argument("--kind", choices=KINDS, default=S)
    sw.add_argument("--s", type=float, default=S, help="squeezing parameter")
    sw.add_argument("--mode-n", type=float, default=S, help="carrier frequency N of Bob's packet")
    sw.add_argument("--lambda-l", type=float, default=S, help="infrared cutoff Lambda*L")
    sw.add_argument("--omega0", type=float, default=S, help="fixed Unruh frequency (sweeps aL instead of z)")
    sw.add_argument("--a-min", type=float, default=S)
    sw.add_argument("--a-max", type=float, default=S)
    sw.add_argument("--z-min", type=float, default=S)
    sw.add_argument("--z-max", type=float, default=S)
    sw.add_argument("--count", type=int, default=S)
    sw.add_argument("--spacing", choices=("linear", "log"), default=S)
    sw.add_argument("--bracket", type=float, nargs=2, metavar=("LOW", "HIGH"), default=S)
    sw.add_argument("--output", "-o", default=S, help="CSV path")
    sw.add_argument("--jobs", type=int, default=S, help="worker processes")
    sw.add_argument("--allow-small-a", action="store_const", const=True, default=S)
    for flag in _QUAD_KEYS:
        kind = int if flag == "max_subdivisions" else float
        sw.add_argument("--" + flag.replace("_", "-"), type=kind, default=S)

    parser.sweep_parser = sw

    pl = sub.add_parser("plot", help="write a gnuplot script for a sweep CSV")
    pl.add_argument("csv")
    pl.add_argument("--output", "-o", help="script path (default: CSV with .gp suffix)")
    pl.add_argument("--kind", choices=("acceleration", "unruh-z"))
    return parser


def _read_config(path, parser):
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    actions = {a.dest: a for a in parser.sweep_parser._actions if a.dest not in ("help", "config")}
    values = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("config", f"{path}:{lineno}: expected key=value")
        key, text = (part.strip() for part in line.split("=", 1))
        dest = key.replace("-", "_")
        if dest not in actions:
            raise ConfigError(key, f"unknown key in {path}:{lineno}")
        action = actions[dest]
        try:
            if action.const is True:
                value = _parse_bool(text)
            elif action.nargs == 2:
                value = [action.type(v) for v in text.replace(",", " ").split()]
                if len(value) != 2:
                    raise ValueError("expected two values")
            else:
                value = action.type(text) if action.type else text
        except (TypeError, ValueError) as exc:
            raise ConfigError(key, f"bad value {text!r} ({exc})") from None
        if action.choices and value not in action.choices:
            raise ConfigError(key, f"must be one of {', '.join(action.choices)}")
        values[dest] = value
    return values


def request_from_options(opts: dict) -> SweepRequest:
    quad_kwargs = {field: opts[key] for key, field in _QUAD_KEYS.items() if key in opts}
    try:
        quad = QuadratureConfig(**quad_kwargs)
    except ValueError as exc:
        raise ConfigError("quadrature", str(exc)) from None
    kind = opts.get("kind", "local")
    sweeps_z = kind == "unruh" and opts.get("omega0") is None
    lo_key, hi_key = ("z_min", "z_max") if sweeps_z else ("a_min", "a_max")
    for unused in ("a_min", "a_max", "z_min", "z_max"):
        if unused in opts and unused not in (lo_key, hi_key) and kind != "sudden-death":
            raise ConfigError(unused.replace("_", "-"), "not used by this sweep kind")
    req = SweepRequest(
        kind=kind,
        s=opts.get("s", 1.0),
        mode_n=opts.get("mode_n", 6.0),
        lambda_l=opts.get("lambda_l", 1.0 / 3.0),
        omega0=opts.get("omega0"),
        grid_min=opts.get(lo_key),
        grid_max=opts.get(hi_key),
        count=opts.get("count", 60),
        spacing=opts.get("spacing", "linear"),
        bracket=tuple(opts.get("bracket", (0.5, 70.0))),
        quad=quad,
        output=opts.get("output"),
        jobs=opts.get("jobs", 1),
        allow_small_a=bool(opts.get("allow_small_a", False)),
    )
    return req


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "plot":
        try:
            script = emit_plot_script(args.csv, args.output, args.kind)
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(f"plot script {script}")
        return 0

    opts = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        if args.config:
            merged = _read_config(args.config, parser)
            merged.update(opts)
            opts = merged
        request = request_from_options(opts)
    except ConfigError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 1
    return run(request)


if __name__ == "__main__":
    sys.exit(main())
