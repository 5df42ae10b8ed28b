"""Command-line interface: constants, sweeps, solvers, verification suites and plots.

Every command writes CSV (default), JSON or, for ``plot``, SVG to ``--out``
or stdout.  Output is deterministic: the same flags give byte-identical
files.  Exit status is 1 for an invalid configuration and 2 when a
verification command finds a violation.

CSV columns by command:

  constants    n, omega_n, omega_nm1, a_n, b_n, C_n, k_mv[, sigma, rho, c_med]
  sweep-mv     n, grid_resolution, max_value, argmax_theta, argmax_varphi,
               closed_form, gap, near_max_cells
  lemma-check  n, check, worst_violation, location_t, location_s, tolerance, passed
  solve-med    sigma, rho, theta_sigma, varphi_sigma, k_med, residual_sys,
               residual_nec, n
  verify-bv    n, check, samples, worst_ratio, tolerance, passed
  oracle       kind, params, volume, boundary_share, relative_perimeter,
               quotient_mv, quotient_med, margin
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass

from . import bvcheck, med, mv
from .geometry import HalfMoonParams, removed_ball
from .special import constants

__all__ = ["RunConfig", "main", "render_svg", "run"]

SCHEMA_VERSION = 1
COMMANDS = ("constants", "sweep-mv", "lemma-check", "solve-med", "verify-bv", "oracle", "plot")
FORMATS = ("csv", "json", "svg")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VIOLATION = 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int = 2
    sigma: float | None = None
    resolution: int = 512
    seed: int = 0
    out_format: str = "csv"
    out_path: str | None = None
    count: int = 1000

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.n < 2:
            raise ConfigError(f"--n must be >= 2, got {self.n}")
        if self.resolution < 16:
            raise ConfigError(f"--resolution must be >= 16, got {self.resolution}")
        if self.sigma is not None and not 0.0 < self.sigma < 1.0:
            raise ConfigError(f"--sigma must lie in (0, 1), got {self.sigma}")
        if self.command == "solve-med" and self.sigma is None:
            raise ConfigError("solve-med needs --sigma")
        if self.count < 1:
            raise ConfigError(f"--count must be >= 1, got {self.count}")
        if self.out_format not in FORMATS:
            raise ConfigError(f"unknown format {self.out_format!r}")
        if (self.out_format == "svg") != (self.command == "plot"):
            raise ConfigError("svg output is produced by plot, and plot only produces svg")
        if self.command == "oracle" and self.n != 2:
            raise ConfigError("the oracle samples sets in the disk; use --n 2")


# -- serialisation -----------------------------------------------------------


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _csv(command, header, rows):
    buf = io.StringIO()
    buf.write(f"# trace-sharp {command} schema v{SCHEMA_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def _json(command, payload):
    doc = {"command": command, "schema_version": SCHEMA_VERSION, "result": payload}
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _emit(cfg, header, rows, payload):
    if cfg.out_format == "json":
        return _json(cfg.command, payload)
    return _csv(cfg.command, header, rows)


# -- commands ----------------------------------------------------------------


def _cmd_constants(cfg):
    c = constants(cfg.n)
    rec = {
        "n": c.n,
        "omega_n": c.omega_n,
        "omega_nm1": c.omega_nm1,
        "a_n": c.a_n,
        "b_n": c.b_n,
        "C_n": c.C_n,
        "k_mv": c.k_mv,
    }
    if cfg.sigma is not None:
        rho = max(cfg.sigma, 1.0 - cfg.sigma)
        rec.update(sigma=cfg.sigma, rho=rho, c_med=med.solve(rho, cfg.n).k_med)
    return _emit(cfg, list(rec), [list(rec.values())], rec), EXIT_OK


def _cmd_sweep(cfg):
    r = mv.kmv_sweep(cfg.n, cfg.resolution)
    rec = {
        "n": r.n,
        "grid_resolution": r.grid_resolution,
        "max_value": r.max_value,
        "argmax_theta": r.argmax[0],
        "argmax_varphi": r.argmax[1],
        "closed_form": r.closed_form,
        "gap": r.gap,
        "near_max_cells": len(r.near_max_cells),
    }
    payload = asdict(r)
    payload["argmax"] = list(r.argmax)
    payload["near_max_cells"] = [list(c) for c in r.near_max_cells]
    return _emit(cfg, list(rec), [list(rec.values())], payload), EXIT_OK


def _cmd_lemma(cfg):
    rep = mv.lemma_suite(cfg.n, cfg.resolution)
    header = ["n", "check", "worst_violation", "location_t", "location_s", "tolerance", "passed"]
    rows = []
    checks = []
    for c in rep.checks:
        loc = tuple(c.location) + (None, None)
        rows.append([rep.n, c.name, c.worst_violation, loc[0], loc[1], c.tolerance, c.passed])
        checks.append(
            {
                "name": c.name,
                "worst_violation": c.worst_violation,
                "location": list(c.location),
                "tolerance": c.tolerance,
                "passed": c.passed,
            }
        )
    payload = {"n": rep.n, "passed": rep.passed, "checks": checks}
    return _emit(cfg, header, rows, payload), (EXIT_OK if rep.passed else EXIT_VIOLATION)


def _cmd_solve(cfg):
    s = med.solve(cfg.sigma, cfg.n)
    rec = asdict(s)
    return _emit(cfg, list(rec), [list(rec.values())], rec), EXIT_OK


def _cmd_verify(cfg):
    sigmas = (cfg.sigma,) if cfg.sigma is not None else (0.3, 0.5, 0.7)
    checks = bvcheck.verify_suite(cfg.n, cfg.count, cfg.seed, sigmas)
    header = ["n", "check", "samples", "worst_ratio", "tolerance", "passed"]
    rows = [[cfg.n, c.name, c.samples, c.worst_ratio, c.tolerance, c.passed] for c in checks]
    payload = {
        "n": cfg.n,
        "seed": cfg.seed,
        "checks": [dict(asdict(c), passed=c.passed) for c in checks],
    }
    ok = all(c.passed for c in checks)
    return _emit(cfg, header, rows, payload), (EXIT_OK if ok else EXIT_VIOLATION)


def _cmd_oracle(cfg):
    rep = bvcheck.oracle_sample(cfg.seed, cfg.count, cfg.sigma)
    header = [
        "kind",
        "params",
        "volume",
        "boundary_share",
        "relative_perimeter",
        "quotient_mv",
        "quotient_med",
        "margin",
    ]
    rows = [list(asdict(r).values()) for r in rep.rows]
    payload = {k: v for k, v in asdict(rep).items() if k != "rows"}
    payload.update(
        margin_mv=rep.margin_mv,
        margin_med=rep.margin_med,
        violations=len(rep.violations()),
        rows=[asdict(r) for r in rep.rows],
    )
    ok = not rep.violations()
    return _emit(cfg, header, rows, payload), (EXIT_OK if ok else EXIT_VIOLATION)


# -- svg ---------------------------------------------------------------------

SVG_SIZE = 800
VIEW = 1.25


def _f(x):
    # fixed precision keeps the output stable across platforms
    v = round(float(x), 9)
    return repr(0.0 if v == 0 else v)


def render_svg(theta, varphi, n, title, lines):
    """800x800 drawing of the disk with ``E(theta, varphi)`` shaded.

    Shapes live in a group flipped to y-up, so path coordinates are the
    mathematical ones; text sits outside the flip.
    """
    ct, st = math.cos(theta), math.sin(theta)
    large_outer = 1 if theta > 0.5 * math.pi else 0
    start = f"M {_f(ct)} {_f(-st)} A 1 1 0 {large_outer} 1 {_f(ct)} {_f(st)}"
    extra = []
    if varphi > 0:
        cx, r = removed_ball(HalfMoonParams(theta, varphi, n))
        large_inner = 1 if varphi > 0.5 * math.pi else 0
        path = f"{start} A {_f(r)} {_f(r)} 0 {large_inner} 0 {_f(ct)} {_f(-st)} Z"
        extra.append(
            f'<circle id="removed-ball" cx="{_f(cx)}" cy="0" r="{_f(r)}" fill="none" '
            f'stroke="#888888" stroke-width="0.004" stroke-dasharray="0.02 0.02"/>'
        )
        extra.append(f'<circle id="removed-center" cx="{_f(cx)}" cy="0" r="0.012" fill="#444444"/>')
    else:
        path = f"{start} Z"
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="{-VIEW} {-VIEW} {2 * VIEW} {2 * VIEW}">',
        f"<title>{title}</title>",
        f'<rect x="{-VIEW}" y="{-VIEW}" width="{2 * VIEW}" height="{2 * VIEW}" fill="white"/>',
        '<g transform="scale(1,-1)">',
        '<circle id="ball" cx="0" cy="0" r="1" fill="#f2f2f2" stroke="black" stroke-width="0.006"/>',
        f'<path id="extremal-set" d="{path}" fill="#4a7ab8" fill-opacity="0.75" '
        f'stroke="#1d3d66" stroke-width="0.006"/>',
        *extra,
        f'<circle id="meet-point" cx="{_f(ct)}" cy="{_f(st)}" r="0.012" fill="#b83a3a"/>',
        '<line x1="-1.1" y1="0" x2="1.1" y2="0" stroke="#999999" stroke-width="0.003"/>',
        "</g>",
    ]
    for i, text in enumerate([title, *lines]):
        y = -VIEW + 0.09 + 0.075 * i
        out.append(f'<text x="{-VIEW + 0.05}" y="{_f(y)}" font-family="monospace" '
                   f'font-size="0.06">{text}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _cmd_plot(cfg):
    if cfg.sigma is None:
        c = constants(cfg.n)
        svg = render_svg(
            0.5 * math.pi,
            0.0,
            cfg.n,
            f"Half-ball, n={cfg.n}",
            [f"K_mv = {c.k_mv:.12g}", "theta = pi/2, varphi = 0"],
        )
        return svg, EXIT_OK
    s = med.solve(cfg.sigma, cfg.n)
    lines = [
        f"sigma = {cfg.sigma:g}",
        f"K_med = {s.k_med:.12g}",
        f"theta = {s.theta_sigma:.12g}",
        f"varphi = {s.varphi_sigma:.12g}",
    ]
    cx, r = removed_ball(HalfMoonParams(s.theta_sigma, s.varphi_sigma, cfg.n))
    lines.append(f"removed ball: centre x1 = {cx:.9g}, radius = {r:.9g}")
    svg = render_svg(s.theta_sigma, s.varphi_sigma, cfg.n, f"Half-moon, n={cfg.n}", lines)
    return svg, EXIT_OK


_DISPATCH = {
    "constants": _cmd_constants,
    "sweep-mv": _cmd_sweep,
    "lemma-check": _cmd_lemma,
    "solve-med": _cmd_solve,
    "verify-bv": _cmd_verify,
    "oracle": _cmd_oracle,
    "plot": _cmd_plot,
}


def run(cfg):
    """Execute ``cfg``; returns ``(text, exit_status)`` without writing anything."""
    cfg.validate()
    return _DISPATCH[cfg.command](cfg)


# -- argument parsing ----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="dimension (default 2)")
    common.add_argument("--sigma", type=float, default=None, help="volume fraction in (0, 1)")
    common.add_argument("--resolution", type=int, default=512, help="grid size (default 512)")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--count", type=int, default=1000, help="samples for verify-bv and oracle")
    common.add_argument("--format", choices=FORMATS, default=None, dest="out_format",
                        help="csv (default), json, or svg for plot")
    common.add_argument("--out", default=None, dest="out_path", help="output file (default stdout)")

    parser = _Parser(
        prog="trace-sharp",
        description="Sharp constants and extremal sets of trace inequalities on the unit ball.",
        epilog=__doc__.split("CSV columns by command:")[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "constants": "dimensional constants and K_mv (with --sigma, also the median trace constant)",
        "sweep-mv": "grid maximisation of the mean-value quotient",
        "lemma-check": "grid certification of the auxiliary inequalities",
        "solve-med": "extremal half-moon for the median quotient",
        "verify-bv": "trace inequalities on random layer-cake functions",
        "oracle": "random candidate sets in the disk against the constants",
        "plot": "SVG of the extremal set (half-ball, or half-moon with --sigma)",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    fmt = args.out_format or ("svg" if args.command == "plot" else "csv")
    cfg = RunConfig(
        command=args.command,
        n=args.n,
        sigma=args.sigma,
        resolution=args.resolution,
        seed=args.seed,
        out_format=fmt,
        out_path=args.out_path,
        count=args.count,
    )
    try:
        text, status = run(cfg)
    except ConfigError as exc:
        print(f"trace-sharp: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.out_path:
        try:
            with open(cfg.out_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"trace-sharp: error: cannot write {cfg.out_path}: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    else:
        sys.stdout.write(text)
    if status == EXIT_VIOLATION:
        print("trace-sharp: verification reported a violation", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
