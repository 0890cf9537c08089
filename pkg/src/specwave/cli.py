"""Command-line front end.

Subcommands: ``spectrum`` (modified-wavenumber tables), ``gvpmap``
(group-velocity band maps), ``simulate`` (advection and coupled runs),
``measure`` (velocity measurements), ``reproduce`` (reference bundles).

Every option can also come from a plain ``key = value`` config file
(``--config``); unknown keys are rejected and explicit flags win.  All
CSV/JSON/SVG output is a pure function of the flags, so reruns are
byte-identical.  Exit codes: 0 success, 1 usage, 2 numerical refusal,
3 reference-tolerance failure.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from .adr import (
    AdrConfig,
    adr_modified_wavenumber,
    adr_nt_table,
    analytic_table,
    write_table_csv,
)
from .errors import MeasurementError, ReproductionError, StabilityError
from .qldrp import GVP_BAND, default_axis, gvp_map, map_summary, write_map_csv, write_map_svg
from .reproduce import TARGETS, render_text, run_all, run_target
from .schemes import SchemeSpec
from .timeint import TimeSpec
from .waves import (
    AdvectionProblem,
    CombinationWaveSpec,
    CoupledProblem,
    measure_group_velocity_dft,
    measure_group_velocity_envelope,
    measure_phase_velocity_peak,
    read_history,
    solve_advection,
    solve_coupled,
    write_history,
)
from .dft import hilbert_envelope

SCHEME_CHOICES = ("upw5", "weno5js", "weno5m")
TIME_CHOICES = ("euler", "rk3", "rk4")
METHOD_CHOICES = ("analytic", "adr", "adr-nt")
PROBE_CHOICES = ("complex", "real")

LINE_COLORS = ("#1b6ca8", "#d7301f", "#1a9850", "#757575")


class UsageError(Exception):
    """Bad flags, bad config keys, or inconsistent parameter combinations."""


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # values like "-1,1" (negative lower domain bound) are data, not flags
        self._negative_number_matcher = re.compile(r"^-\d[\d.,eE+-]*$")

    def error(self, message):  # argparse would exit(2); route to exit code 1
        raise UsageError(message)


#: per-subcommand map of config-file keys to (converter, allowed choices)
_REGISTRY: dict[str, dict[str, tuple]] = {}


def _opt(sp: argparse.ArgumentParser, registry: dict, name: str, **kw) -> None:
    conv = kw.get("type", str)
    choices = kw.get("choices")
    sp.add_argument(name, **kw)
    dest = name.lstrip("-").replace("-", "_")
    registry[dest] = (conv, tuple(choices) if choices else None)


def _common(sp: argparse.ArgumentParser, registry: dict) -> None:
    sp.add_argument("--config", default=None, help="key = value file; flags override it")
    _opt(sp, registry, "--seed", type=int, default=0, help="seed for randomized probe phases")


def _scheme_opts(sp, registry, default_scheme="weno5js"):
    _opt(sp, registry, "--scheme", choices=SCHEME_CHOICES, default=default_scheme)
    _opt(sp, registry, "--epsilon", type=float, default=1e-6, help="WENO regularization")


def build_parser() -> tuple[_Parser, dict[str, argparse.ArgumentParser]]:
    parser = _Parser(prog="specwave", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="subcommand", required=True)
    by_name: dict[str, argparse.ArgumentParser] = {}

    sp = subs.add_parser("spectrum", help="write a modified-wavenumber table CSV")
    reg = _REGISTRY.setdefault("spectrum", {})
    _common(sp, reg)
    _scheme_opts(sp, reg)
    _opt(sp, reg, "--method", choices=METHOD_CHOICES, default="adr")
    _opt(sp, reg, "--nx", type=int, default=None, help="grid size (required)")
    _opt(sp, reg, "--tau", type=float, default=None, help="probe evolution time (default: dt)")
    _opt(sp, reg, "--dt", type=float, default=None, help="probe time step (default 1e-8)")
    _opt(sp, reg, "--time", choices=TIME_CHOICES, default="rk4")
    _opt(sp, reg, "--phases", type=int, default=1, help="probe phases to average (adr only)")
    _opt(sp, reg, "--probe", choices=PROBE_CHOICES, default="complex")
    _opt(sp, reg, "--out", default="spectrum.csv")
    sp.set_defaults(func=cmd_spectrum)
    by_name["spectrum"] = sp

    sp = subs.add_parser("gvpmap", help="write a group-velocity band map")
    reg = _REGISTRY.setdefault("gvpmap", {})
    _common(sp, reg)
    _scheme_opts(sp, reg, default_scheme="upw5")
    _opt(sp, reg, "--time", choices=TIME_CHOICES, default="rk4")
    _opt(sp, reg, "--sigma", type=float, default=None, help="CFL number (required)")
    _opt(sp, reg, "--resolution", type=int, default=256, help="cells per map axis")
    _opt(sp, reg, "--kprime", choices=METHOD_CHOICES, default="analytic", help="table source")
    _opt(sp, reg, "--table-nx", type=int, default=422, help="grid size behind the table")
    _opt(sp, reg, "--tau", type=float, default=None)
    _opt(sp, reg, "--dt", type=float, default=None)
    _opt(sp, reg, "--probe", choices=PROBE_CHOICES, default="complex")
    _opt(sp, reg, "--out-csv", default="gvpmap.csv")
    _opt(sp, reg, "--out-svg", default=None, help="optional band plot")
    sp.set_defaults(func=cmd_gvpmap)
    by_name["gvpmap"] = sp

    sp = subs.add_parser("simulate", help="run an advection or coupled problem")
    reg = _REGISTRY.setdefault("simulate", {})
    _common(sp, reg)
    _scheme_opts(sp, reg)
    _opt(sp, reg, "--problem", choices=("advection", "coupled"), default="advection")
    _opt(sp, reg, "--time", choices=TIME_CHOICES, default="rk4")
    _opt(sp, reg, "--c", type=float, default=1.0, help="advection speed")
    _opt(sp, reg, "--a", type=float, default=None, help="companion-field speed (coupled)")
    _opt(sp, reg, "--k1", type=float, default=None, help="first component wavenumber")
    _opt(sp, reg, "--w1", type=float, default=None, help="first component frequency (coupled)")
    _opt(sp, reg, "--k2", type=float, default=None, help="second component wavenumber")
    _opt(sp, reg, "--w2", type=float, default=None, help="second component frequency (coupled)")
    _opt(sp, reg, "--nx", type=int, default=None, help="grid size (required)")
    _opt(sp, reg, "--dt", type=float, default=None, help="time step (required)")
    _opt(sp, reg, "--T", type=float, default=None, help="final time (required)")
    _opt(sp, reg, "--domain", default="-1,1", help="lo,hi")
    _opt(sp, reg, "--snapshots", type=int, default=50)
    _opt(sp, reg, "--out", default="specwave-run")
    _opt(sp, reg, "--out-svg", default=None, help="final-snapshot line plot")
    sp.set_defaults(func=cmd_simulate)
    by_name["simulate"] = sp

    sp = subs.add_parser("measure", help="measure a propagation velocity")
    reg = _REGISTRY.setdefault("measure", {})
    _common(sp, reg)
    _scheme_opts(sp, reg)
    _opt(sp, reg, "--method", choices=("dft", "envelope", "peak"), default=None)
    _opt(sp, reg, "--time", choices=TIME_CHOICES, default="rk4")
    _opt(sp, reg, "--nx", type=int, default=None, help="grid size (dft)")
    _opt(sp, reg, "--dt", type=float, default=None, help="time step (dft; default 1e-8)")
    _opt(sp, reg, "--tau", type=float, default=None, help="evolution time (dft; default dt)")
    _opt(sp, reg, "--kappa", type=float, default=None, help="target wavenumber in (0, pi) (dft)")
    _opt(sp, reg, "--probe", choices=PROBE_CHOICES, default="real")
    _opt(sp, reg, "--run", default=None, help="prior simulate output directory")
    _opt(sp, reg, "--t-a", type=float, default=None, help="window start (default: first frame)")
    _opt(sp, reg, "--t-b", type=float, default=None, help="window end (default: last frame)")
    _opt(sp, reg, "--out", default=None, help="also write the JSON report here")
    sp.set_defaults(func=cmd_measure)
    by_name["measure"] = sp

    sp = subs.add_parser("reproduce", help="recompute reference values and compare")
    reg = _REGISTRY.setdefault("reproduce", {})
    _common(sp, reg)
    _opt(sp, reg, "--target", choices=TARGETS, default=None)
    _opt(sp, reg, "--out", default="specwave-reproduce")
    sp.set_defaults(func=cmd_reproduce)
    by_name["reproduce"] = sp

    return parser, by_name


def _load_config(path: str) -> dict[str, str]:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"config file {path!r} not found")
    out: dict[str, str] = {}
    for raw in p.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {raw!r} is not key = value")
        key, val = line.split("=", 1)
        out[key.strip().replace("-", "_")] = val.strip()
    return out


def _merge_config(parser, by_name, args, argv):
    if not getattr(args, "config", None):
        return args
    registry = _REGISTRY[args.subcommand]
    defaults = {}
    for key, val in _load_config(args.config).items():
        if key == "config":
            raise UsageError("a config file cannot set 'config'")
        if key not in registry:
            raise UsageError(f"unknown config key {key!r} for {args.subcommand}")
        conv, choices = registry[key]
        try:
            value = conv(val)
        except ValueError:
            raise UsageError(f"config key {key!r}: cannot parse {val!r}") from None
        if choices and value not in choices:
            raise UsageError(f"config key {key!r}: {value!r} not one of {choices}")
        defaults[key] = value
    by_name[args.subcommand].set_defaults(**defaults)
    return parser.parse_args(argv)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join(f"--{n}" for n in missing))


def _scheme(args) -> SchemeSpec:
    return SchemeSpec(args.scheme, epsilon=args.epsilon)


def _params(args, sub: str) -> dict:
    out = {k: getattr(args, k) for k in sorted(_REGISTRY[sub])}
    out["subcommand"] = sub
    return out


def _write_manifest(path: Path, sub: str, args) -> None:
    path.write_text(json.dumps(_params(args, sub), indent=2, sort_keys=True) + "\n")


def _emit(obj: dict) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _parse_domain(text: str) -> tuple[float, float]:
    parts = text.split(",")
    try:
        lo, hi = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"domain must be lo,hi with numeric bounds, got {text!r}") from None
    if not lo < hi:
        raise UsageError(f"domain lower bound must be below the upper, got {text!r}")
    return lo, hi


def cmd_spectrum(args) -> int:
    _require(args, "nx")
    scheme = _scheme(args)
    dt = 1e-8 if args.dt is None else args.dt
    tau = dt if args.tau is None else args.tau
    if args.method == "analytic":
        if not scheme.is_linear:
            raise UsageError(f"analytic tables require a linear scheme, not {scheme.kind!r}")
        table = analytic_table(scheme, args.nx)
    elif args.method == "adr":
        cfg = AdrConfig(
            n_x=args.nx, tau=tau, dt=dt, phase_count=args.phases, probe=args.probe, seed=args.seed
        )
        table = adr_modified_wavenumber(scheme, TimeSpec(args.time, dt), cfg)
    else:
        table = adr_nt_table(scheme, args.nx, probe=args.probe)
    write_table_csv(table, args.out)
    out = Path(args.out)
    _write_manifest(out.with_suffix(out.suffix + ".manifest.json"), "spectrum", args)
    _emit(
        {
            "out": str(args.out),
            "method": args.method,
            "scheme": scheme.kind,
            "n_x": args.nx,
            "modes": int(table.kappas.size),
        }
    )
    return 0


def cmd_gvpmap(args) -> int:
    _require(args, "sigma")
    scheme = _scheme(args)
    dt = 1e-8 if args.dt is None else args.dt
    tau = dt if args.tau is None else args.tau
    axis = default_axis(args.resolution)
    cfg = None
    if args.kprime == "adr":
        cfg = AdrConfig(n_x=args.table_nx, tau=tau, dt=dt, probe=args.probe, seed=args.seed)
    vmap = gvp_map(
        scheme,
        args.time,
        args.sigma,
        kappa_axis=axis,
        omega_dt_axis=axis,
        source=args.kprime,
        table_n_x=args.table_nx,
        adr_config=cfg,
    )
    write_map_csv(vmap, args.out_csv)
    if args.out_svg:
        write_map_svg(vmap, args.out_svg)
    out = Path(args.out_csv)
    _write_manifest(out.with_suffix(out.suffix + ".manifest.json"), "gvpmap", args)
    _emit({**map_summary(vmap), "out_csv": str(args.out_csv), "out_svg": args.out_svg})
    return 0


def cmd_simulate(args) -> int:
    _require(args, "nx", "dt", "T")
    lo, hi = _parse_domain(args.domain)
    scheme = _scheme(args)
    time = TimeSpec(args.time, args.dt)
    if args.problem == "advection":
        if args.w1 is not None or args.w2 is not None:
            raise UsageError("--w1/--w2 apply to the coupled problem only")
        k1 = 6.0 * np.pi if args.k1 is None else args.k1
        k2 = 8.0 * np.pi if args.k2 is None else args.k2
        prob = AdvectionProblem(
            c=args.c,
            x_lo=lo,
            x_hi=hi,
            n_x=args.nx,
            dt=args.dt,
            t_final=args.T,
            u0=lambda x: np.cos(k1 * x) + np.cos(k2 * x),
        )
        hist = solve_advection(prob, scheme, time, n_snapshots=args.snapshots)
        hist.meta.update(
            problem="advection",
            k1=k1,
            k2=k2,
            exact_solution=True,
            v_group_exact=args.c,
            v_phase_exact=args.c,
        )
    else:
        k1 = 6.0 if args.k1 is None else args.k1
        w1 = 6.0 if args.w1 is None else args.w1
        k2 = 8.0 if args.k2 is None else args.k2
        w2 = 12.0 if args.w2 is None else args.w2
        wave = CombinationWaveSpec(k1, w1, k2, w2)
        a = wave.advection_speed if args.a is None else args.a
        prob = CoupledProblem(
            a=a,
            x_lo=lo,
            x_hi=hi,
            n_x=args.nx,
            dt=args.dt,
            t_final=args.T,
            u0=lambda x: wave.u_exact(x, 0.0),
            p0=lambda x: wave.p_exact(x, 0.0),
        )
        hist = solve_coupled(prob, scheme, time, n_snapshots=args.snapshots)
        exact = abs(a - wave.advection_speed) <= 1e-12
        hist.meta.update(problem="coupled", k1=k1, w1=w1, k2=k2, w2=w2, exact_solution=exact)
        if exact:
            hist.meta.update(v_group_exact=wave.v_group, v_phase_exact=wave.v_phase)
    hist.meta["parameters"] = _params(args, "simulate")
    write_history(hist, args.out)
    if args.out_svg:
        series = [("u(x, T)", hist.u[-1], LINE_COLORS[0]),
                  ("envelope", hilbert_envelope(hist.u[-1]), LINE_COLORS[1])]
        _line_plot_svg(args.out_svg, hist.x, series, f"{scheme.kind}, t = {hist.times[-1]:g}", "x", "u")
    _emit(
        {
            "out": str(args.out),
            "out_svg": args.out_svg,
            "snapshots": len(hist.times),
            "sigma": hist.meta["sigma"],
            "exact_solution": hist.meta["exact_solution"],
        }
    )
    return 0


def cmd_measure(args) -> int:
    _require(args, "method")
    if args.method == "dft":
        _require(args, "nx", "kappa")
        dt = 1e-8 if args.dt is None else args.dt
        tau = dt if args.tau is None else args.tau
        measured = measure_group_velocity_dft(
            _scheme(args), TimeSpec(args.time, dt), args.nx, dt, tau, args.kappa, probe=args.probe
        )
        report = {"method": "dft", "measured": measured, "exact": 1.0, "ratio": measured}
    else:
        _require(args, "run")
        hist = read_history(args.run)
        t_a = float(hist.times[0]) if args.t_a is None else args.t_a
        t_b = float(hist.times[-1]) if args.t_b is None else args.t_b
        if args.method == "envelope":
            measured = measure_group_velocity_envelope(hist, t_a, t_b)
            exact = hist.meta.get("v_group_exact")
        else:
            measured = measure_phase_velocity_peak(hist, t_a, t_b)
            exact = hist.meta.get("v_phase_exact")
        report = {
            "method": args.method,
            "run": str(args.run),
            "t_a": t_a,
            "t_b": t_b,
            "measured": measured,
            "exact": exact,
            "ratio": measured / exact if exact else None,
        }
    if report["ratio"] is not None:
        band_lo, band_hi = GVP_BAND
        report["in_band"] = bool(band_lo <= report["ratio"] <= band_hi)
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    _emit(report)
    return 0


def cmd_reproduce(args) -> int:
    _require(args, "target")
    reports = run_all() if args.target == "all" else [run_target(args.target)]
    payload = {
        "target": args.target,
        "passed": all(r.passed for r in reports),
        "reports": [r.as_dict() for r in reports],
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    (out / "report.txt").write_text(render_text(reports))
    _write_manifest(out / "manifest.json", "reproduce", args)
    _emit(payload)
    return 0 if payload["passed"] else 3


def _line_plot_svg(path, x, series, title, x_label, y_label, width=720, height=420) -> None:
    """Polyline plot of one or more series over a shared x grid."""
    ml, mr, mt, mb = 66.0, 16.0, 40.0, 48.0
    pw, ph = width - ml - mr, height - mt - mb
    x = np.asarray(x, dtype=float)
    ys = np.concatenate([np.asarray(v, dtype=float) for _, v, _ in series])
    y_lo, y_hi = float(ys.min()), float(ys.max())
    pad = 0.05 * (y_hi - y_lo) if y_hi > y_lo else 1.0
    y_lo, y_hi = y_lo - pad, y_hi + pad
    x_lo, x_hi = float(x.min()), float(x.max())

    def px(v):
        return ml + pw * (v - x_lo) / (x_hi - x_lo)

    def py(v):
        return mt + ph * (1.0 - (v - y_lo) / (y_hi - y_lo))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for label, v, color in series:
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, np.asarray(v, dtype=float)))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
    for frac in (0.0, 0.5, 1.0):
        xv = x_lo + frac * (x_hi - x_lo)
        yv = y_lo + frac * (y_hi - y_lo)
        parts.append(
            f'<text x="{px(xv):.2f}" y="{mt + ph + 18:.2f}" font-size="12" text-anchor="middle">{xv:.4g}</text>'
        )
        parts.append(
            f'<text x="{ml - 8:.2f}" y="{py(yv) + 4:.2f}" font-size="12" text-anchor="end">{yv:.4g}</text>'
        )
    lx = ml
    for label, _, color in series:
        parts.append(f'<rect x="{lx:.2f}" y="{mt - 16:.2f}" width="12" height="4" fill="{color}"/>')
        parts.append(f'<text x="{lx + 17:.2f}" y="{mt - 10:.2f}" font-size="12">{label}</text>')
        lx += 140
    parts.append(f'<text x="{ml}" y="18" font-size="14">{title}</text>')
    parts.append(
        f'<text x="{ml + pw / 2:.2f}" y="{height - 10:.2f}" font-size="13" text-anchor="middle">{x_label}</text>'
    )
    parts.append(
        f'<text x="16" y="{mt + ph / 2:.2f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {mt + ph / 2:.2f})">{y_label}</text>'
    )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser, by_name = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _merge_config(parser, by_name, args, argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (StabilityError, MeasurementError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ReproductionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
