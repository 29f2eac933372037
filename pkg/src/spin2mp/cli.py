"""Command-line interface.

Subcommands: point (one parameter point), sweep (a-grid to CSV/JSON with
optional SVG), figures (the four standard figure files), oracle-check
(finite-ring cross-validation table). Exit codes: 0 ok, 1 failed checks,
2 usage problems, 3 numerical failures.
"""
import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import (CorrelatorVanishes, DegenerateDominant, InvalidInput,
                     NoPlateau, NumericalError, Spin2MPError)
from .measures import (MeasurePoint, entropy_at, fidelity_per_site,
                       magnetization_and_fluctuation, numerical_derivative,
                       reduced_fidelity, rfs)
from .mpstate import L_MAX, ModelParams, build_g
from .transfer import correlation_lengths, dominant_data, string_order
from . import oracle
from .svgplot import render_line_svg

MEASURES = ("entropy", "dde", "rf", "rfs", "fps", "xi", "string", "fluct")
COLUMNS = ("a", "S", "dS_da", "d2S_da2", "F_R", "RFS_fd", "RFS_d2", "fps",
           "xi_long", "xi_trans", "string_order", "fluct_zz", "lambda1",
           "limit_flag")
PRESETS = {"acritical": (-3.0, -2.0), "critical": (0.0, 1.0)}
LIMIT_A = 1e-6
STRING_R = 60


class UsageError(Spin2MPError):
    pass


@dataclass
class SweepConfig:
    x: float
    gamma: float
    a_min: float = 0.0
    a_max: float = 4.0
    a_steps: int = 81
    delta: float = 1e-3
    h: float = 1e-4
    theta: float = math.pi / 2
    measures: tuple = MEASURES
    out_dir: str = "out"
    format: str = "csv"
    svg: bool = False
    threads: int = 1


def evaluate_point(params, measures, delta=1e-3, h=1e-4,
                   theta=math.pi / 2):
    """All requested measures at one parameter point.

    A degenerate dominant transfer eigenvalue (the a=0 point of the
    critical slice) is resolved by evaluating at a=1e-6 and flagging the
    row; correlation lengths that underflow there are reported as inf,
    which is their a->0 limit.
    """
    a_nominal = params.a
    limit = False
    try:
        lam = dominant_data(build_g(params)).value
    except DegenerateDominant:
        limit = True
        params = dataclasses.replace(
            params, a=LIMIT_A if params.a >= 0 else -LIMIT_A)
        lam = dominant_data(build_g(params)).value
    G = build_g(params)
    point = MeasurePoint(a=a_nominal, lambda1=float(lam), limit_flag=limit)

    a = params.a
    h_eff = min(h, a / 4) if a > 0 else h

    if "entropy" in measures:
        point.S = entropy_at(params)
    if "dde" in measures:
        def S_of(aa):
            return entropy_at(dataclasses.replace(params, a=aa))
        point.dS_da = numerical_derivative(S_of, a, order=1, h=h_eff).value
        point.d2S_da2 = numerical_derivative(S_of, a, order=2, h=h_eff).value
    if "rf" in measures:
        point.F_R = reduced_fidelity(params, delta)
    if "rfs" in measures:
        est = rfs(params, delta=delta, h=h_eff)
        point.RFS_fixed_delta = est.fixed_delta
        point.RFS_second_derivative = est.second_derivative
    if "fps" in measures:
        point.fidelity_per_site = fidelity_per_site(
            params, dataclasses.replace(params, a=a + delta))
    if "xi" in measures:
        try:
            point.xi_long, point.xi_trans = correlation_lengths(G)
        except CorrelatorVanishes:
            if not limit:
                raise
            point.xi_long = point.xi_trans = float('inf')
    if "string" in measures:
        try:
            val = string_order(G, theta, STRING_R)
            if abs(val.imag) > 1e-9:
                raise NumericalError("string order has imaginary part %.3e"
                                     % val.imag)
            point.string_order = val.real
        except NoPlateau:
            point.string_order = None
    if "fluct" in measures:
        point.fluct_zz = magnetization_and_fluctuation(G)[3]
    return point


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.12g" % v
    return str(v)


def _row_values(point):
    return (point.a, point.S, point.dS_da, point.d2S_da2, point.F_R,
            point.RFS_fixed_delta, point.RFS_second_derivative,
            point.fidelity_per_site, point.xi_long, point.xi_trans,
            point.string_order, point.fluct_zz, point.lambda1,
            point.limit_flag)


def _meta_lines(x, gamma, delta, h, theta):
    return [
        "# spin2mp %s" % __version__,
        "# x=%s gamma=%s delta=%s h=%s theta=%s"
        % (_fmt(float(x)), _fmt(float(gamma)), _fmt(float(delta)),
           _fmt(float(h)), _fmt(float(theta))),
        "# tolerances: hermitian=1e-10 dominant_gap=1e-13 plateau=1e-6",
    ]


def rows_to_csv(points, x, gamma, delta, h, theta):
    lines = _meta_lines(x, gamma, delta, h, theta)
    lines.append(",".join(COLUMNS))
    for p in points:
        lines.append(",".join(_fmt(v) for v in _row_values(p)))
    return "\n".join(lines) + "\n"


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return "%.12g" % v
    return v


def rows_to_json(points, x, gamma, delta, h, theta):
    doc = {
        "version": __version__,
        "params": {"x": float(x), "gamma": float(gamma),
                   "delta": float(delta), "h": float(h),
                   "theta": float(theta)},
        "tolerances": {"hermitian": 1e-10, "dominant_gap": 1e-13,
                       "plateau": 1e-6},
        "rows": [dict(zip(COLUMNS, (_json_value(v) for v in _row_values(p))))
                 for p in points],
    }
    return json.dumps(doc, indent=2) + "\n"


def _evaluate_grid(grid, measures, delta, h, theta, x, gamma, threads):
    def work(a):
        return evaluate_point(ModelParams(float(a), x, gamma), measures,
                              delta=delta, h=h, theta=theta)
    if threads and threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(work, grid))
    return [work(a) for a in grid]


def _sweep_curves(points, measures):
    xs = np.array([p.a for p in points])
    curves = []
    wanted = (("entropy", "S", "S"),
              ("dde", "d2S_da2", "d2S/da2"),
              ("rf", "F_R", "F_R"),
              ("rfs", "RFS_fixed_delta", "RFS"))
    for meas, attr, label in wanted:
        if meas in measures:
            ys = np.array([getattr(p, attr) if getattr(p, attr) is not None
                           else np.nan for p in points], dtype=float)
            curves.append((label, xs, ys))
    return curves


def rows_to_text(points):
    width = max(len(c) for c in COLUMNS) + 1
    lines = []
    for p in points:
        for col, val in zip(COLUMNS, _row_values(p)):
            lines.append("%-*s %s" % (width, col + ":", _fmt(val)))
    return "\n".join(lines) + "\n"


def run_point(cfg):
    point = evaluate_point(ModelParams(cfg["a"], cfg["x"], cfg["gamma"]),
                           cfg["measures"], delta=cfg["delta"], h=cfg["h"],
                           theta=cfg["theta"])
    args = (cfg["x"], cfg["gamma"], cfg["delta"], cfg["h"], cfg["theta"])
    if cfg["format"] == "json":
        text = rows_to_json([point], *args)
    elif cfg["format"] == "csv":
        text = rows_to_csv([point], *args)
    else:
        text = rows_to_text([point])
    if cfg.get("out"):
        with open(cfg["out"], "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def run_sweep(cfg):
    sw = SweepConfig(x=cfg["x"], gamma=cfg["gamma"], a_min=cfg["a_min"],
                     a_max=cfg["a_max"], a_steps=cfg["a_steps"],
                     delta=cfg["delta"], h=cfg["h"], theta=cfg["theta"],
                     measures=cfg["measures"], out_dir=cfg["out_dir"],
                     format=cfg["format"], svg=cfg["svg"],
                     threads=cfg["threads"])
    if sw.a_steps < 2:
        raise UsageError("a sweep needs at least 2 grid points")
    if not sw.a_min < sw.a_max:
        raise UsageError("need a_min < a_max")
    grid = np.linspace(sw.a_min, sw.a_max, sw.a_steps)
    points = _evaluate_grid(grid, sw.measures, sw.delta, sw.h, sw.theta,
                            sw.x, sw.gamma, sw.threads)
    # render everything up front so a failure never leaves partial files
    args = (sw.x, sw.gamma, sw.delta, sw.h, sw.theta)
    text = (rows_to_csv(points, *args) if sw.format == "csv"
            else rows_to_json(points, *args))
    svg_text = None
    if sw.svg:
        curves = _sweep_curves(points, sw.measures)
        if curves:
            svg_text = render_line_svg(
                curves[:1], "sweep x=%s gamma=%s" % (_fmt(sw.x), _fmt(sw.gamma)),
                "a", "value",
                inset=curves[1] if len(curves) > 1 else None)
    os.makedirs(sw.out_dir, exist_ok=True)
    path = os.path.join(sw.out_dir, "sweep." + sw.format)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    written = [path]
    if svg_text is not None:
        svg_path = os.path.join(sw.out_dir, "sweep.svg")
        with open(svg_path, "w", newline="") as fh:
            fh.write(svg_text)
        written.append(svg_path)
    for p in written:
        print(p)
    return 0


# the four standard figures: (name, slice, measures, main attr, inset attr)
_FIGURES = (
    ("fig1", "acritical", ("entropy", "dde"), "S", "d2S_da2",
     "entropy, x=-3 gamma=-2"),
    ("fig2", "critical", ("entropy", "dde"), "S", "d2S_da2",
     "entropy, x=0 gamma=1"),
    ("fig3", "acritical", ("rf", "rfs"), "RFS_fixed_delta", "F_R",
     "reduced fidelity susceptibility, x=-3 gamma=-2"),
    ("fig4", "critical", ("rf", "rfs"), "RFS_fixed_delta", "F_R",
     "reduced fidelity susceptibility, x=0 gamma=1"),
)
_FIG_STEPS = 401
_CURVE_LABEL = {"S": "S", "d2S_da2": "d2S/da2", "RFS_fixed_delta": "RFS",
                "F_R": "F_R"}


def _curve(points, attr):
    xs = np.array([p.a for p in points])
    ys = np.array([getattr(p, attr) if getattr(p, attr) is not None
                   else np.nan for p in points], dtype=float)
    return _CURVE_LABEL[attr], xs, ys


def run_figures(cfg):
    out_dir = cfg["out_dir"]
    delta, h, theta = cfg["delta"], cfg["h"], cfg["theta"]
    rendered = []
    for name, preset, measures, main_attr, inset_attr, title in _FIGURES:
        x, gamma = PRESETS[preset]
        grid = np.linspace(0.0, 4.0, _FIG_STEPS)
        points = _evaluate_grid(grid, measures, delta, h, theta, x, gamma,
                                cfg["threads"])
        csv_text = rows_to_csv(points, x, gamma, delta, h, theta)
        svg_text = render_line_svg([_curve(points, main_attr)], title, "a",
                                   _CURVE_LABEL[main_attr],
                                   inset=_curve(points, inset_attr))
        rendered.append((name, csv_text, svg_text))
    os.makedirs(out_dir, exist_ok=True)
    for name, csv_text, svg_text in rendered:
        for ext, text in (("csv", csv_text), ("svg", svg_text)):
            path = os.path.join(out_dir, "%s.%s" % (name, ext))
            with open(path, "w", newline="") as fh:
                fh.write(text)
            print(path)
    return 0


def run_oracle_check(cfg):
    l_max = cfg["l_max"]
    if l_max > L_MAX and not cfg["allow_big"]:
        raise UsageError("l-max %d exceeds %d; pass --allow-big to accept "
                         "the exponential cost" % (l_max, L_MAX))
    if l_max > 12:
        raise UsageError("l-max %d is beyond the amplitude builder cap" % l_max)
    rows = oracle.standard_checks(l_max=l_max)
    n_pass = 0
    for name, ok, detail in rows:
        n_pass += bool(ok)
        print("%s %-42s %s" % ("PASS" if ok else "FAIL", name, detail))
    print("%d checks, %d passed" % (len(rows), n_pass))
    return 0 if n_pass == len(rows) else 1


def load_config_file(path):
    out = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError("%s:%d: expected key=value"
                                     % (path, lineno))
                key, val = line.split("=", 1)
                out[key.strip().replace("-", "_")] = val.strip()
    except OSError as exc:
        raise UsageError("cannot read config file: %s" % exc)
    return out


_FLOAT_KEYS = ("x", "gamma", "a", "a_min", "a_max", "delta", "h", "theta")
_INT_KEYS = ("a_steps", "threads", "l_max")
_BOOL_KEYS = ("svg", "allow_big")


def _coerce(key, val):
    try:
        if key in _FLOAT_KEYS:
            return float(val)
        if key in _INT_KEYS:
            return int(val)
        if key in _BOOL_KEYS:
            if str(val).lower() in ("1", "true", "yes", "on"):
                return True
            if str(val).lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(val)
        if key == "measures":
            items = tuple(s.strip() for s in str(val).split(",") if s.strip())
            return items
        return val
    except ValueError:
        raise UsageError("bad value for %s: %r" % (key, val))


def _merge(defaults, args):
    """Effective settings: defaults, then config file, then explicit flags."""
    cfg = dict(defaults)
    file_vals = load_config_file(args.config) if getattr(args, "config", None) \
        else {}
    for key, val in file_vals.items():
        if key not in defaults:
            raise UsageError("unknown config key: %s" % key)
        cfg[key] = _coerce(key, val)
    for key in defaults:
        flag = getattr(args, key, None)
        if flag is not None:
            cfg[key] = _coerce(key, flag) if isinstance(flag, str) else flag
    preset = cfg.get("preset")
    if preset:
        if preset not in PRESETS:
            raise UsageError("unknown preset: %s" % preset)
        px, pgamma = PRESETS[preset]
        if cfg.get("x") is None:
            cfg["x"] = px
        if cfg.get("gamma") is None:
            cfg["gamma"] = pgamma
    return cfg


def _validate_common(cfg, need, allowed_formats=("csv", "json")):
    for key in need:
        if cfg.get(key) is None:
            raise UsageError("missing required setting: %s "
                             "(flag --%s or config file)"
                             % (key, key.replace("_", "-")))
    bad = set(cfg["measures"]) - set(MEASURES)
    if bad:
        raise UsageError("unknown measures: %s" % ", ".join(sorted(bad)))
    if cfg["format"] not in allowed_formats:
        raise UsageError("format must be one of %s" % "/".join(allowed_formats))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spin2mp",
        description="Transfer-matrix observables of the spin-2 "
                    "matrix-product ground-state family.")
    parser.add_argument("--version", action="version",
                        version="spin2mp %s" % __version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_a_grid):
        p.add_argument("--x", type=float)
        p.add_argument("--gamma", type=float)
        p.add_argument("--preset", choices=sorted(PRESETS))
        p.add_argument("--delta", type=float)
        p.add_argument("--h", type=float)
        p.add_argument("--theta", type=float)
        p.add_argument("--measures", type=str)
        p.add_argument("--format", choices=("text", "csv", "json"))
        p.add_argument("--threads", type=int)
        p.add_argument("--config", type=str)
        if with_a_grid:
            p.add_argument("--a-min", dest="a_min", type=float)
            p.add_argument("--a-max", dest="a_max", type=float)
            p.add_argument("--a-steps", dest="a_steps", type=int)

    p_point = sub.add_parser("point", help="evaluate one parameter point")
    common(p_point, with_a_grid=False)
    p_point.add_argument("--a", type=float)
    p_point.add_argument("--out", type=str)

    p_sweep = sub.add_parser("sweep", help="evaluate an a-grid")
    common(p_sweep, with_a_grid=True)
    p_sweep.add_argument("--out-dir", dest="out_dir", type=str)
    p_sweep.add_argument("--svg", action="store_true", default=None)

    p_fig = sub.add_parser("figures", help="write the four standard figures")
    p_fig.add_argument("--out-dir", dest="out_dir", type=str)
    p_fig.add_argument("--threads", type=int)
    p_fig.add_argument("--delta", type=float)
    p_fig.add_argument("--h", type=float)
    p_fig.add_argument("--theta", type=float)
    p_fig.add_argument("--config", type=str)

    p_or = sub.add_parser("oracle-check",
                          help="run the finite-ring cross-validation table")
    p_or.add_argument("--l-max", dest="l_max", type=int)
    p_or.add_argument("--allow-big", dest="allow_big", action="store_true",
                      default=None)
    p_or.add_argument("--config", type=str)
    return parser


_BASE_DEFAULTS = {
    "x": None, "gamma": None, "preset": None, "delta": 1e-3, "h": 1e-4,
    "theta": math.pi / 2, "measures": MEASURES, "format": "csv",
    "threads": 1,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0

    try:
        if args.command == "point":
            defaults = dict(_BASE_DEFAULTS, a=None, out=None, format="text")
            cfg = _merge(defaults, args)
            _validate_common(cfg, ("x", "gamma", "a"),
                             allowed_formats=("text", "csv", "json"))
            return run_point(cfg)
        if args.command == "sweep":
            defaults = dict(_BASE_DEFAULTS, a_min=0.0, a_max=4.0, a_steps=81,
                            out_dir="out", svg=False)
            cfg = _merge(defaults, args)
            _validate_common(cfg, ("x", "gamma"))
            return run_sweep(cfg)
        if args.command == "figures":
            defaults = {"out_dir": "figures", "threads": 1, "delta": 1e-3,
                        "h": 1e-4, "theta": math.pi / 2}
            cfg = _merge(defaults, args)
            return run_figures(cfg)
        if args.command == "oracle-check":
            defaults = {"l_max": L_MAX, "allow_big": False}
            cfg = _merge(defaults, args)
            return run_oracle_check(cfg)
        raise UsageError("unknown command")
    except (UsageError, InvalidInput) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except NumericalError as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
