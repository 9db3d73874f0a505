"""Command-line entry point: ``confgeo <command> [--scenario ...]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import area as AR
from . import geodesic as GD
from . import surface as SF
from . import tractor as TR
from .metric import GeometryError
from .scenarios import ConfigError, get_scenario, scenario_names
from .suites import run_suites, suite_names

COMMANDS = ("geodesic", "surface", "area", "tractor", "verify", "all")


def _scenarios(args, default):
    name = args.scenario or default
    names = scenario_names() if name == "all" else [name]
    out = []
    for n in names:
        over = {}
        if args.seed is not None:
            over["seed"] = args.seed
        if args.resolution is not None:
            over["resolution"] = args.resolution
        out.append(get_scenario(n, **over))
    return out


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def cmd_geodesic(sc, out: Path):
    if not sc.integrate or sc.exact_surface is not None:
        print(f"{sc.name}: no integration configured")
        return 0
    m = sc.build_metric()
    tr = GD.integrate(m, sc.initial_state(m), sc.ds, int(round(sc.s_span / sc.ds)))
    path = tr.to_csv(out / f"{sc.name}__trajectory.csv", stride=10)
    print(f"{sc.name}: {len(tr)} samples -> {path.name}")
    if not tr.ok:
        print(f"{sc.name}: integration stopped: {tr.error}", file=sys.stderr)
        return 1
    return 0


def cmd_surface(sc, out: Path):
    surf = sc.build_surface()
    if sc.exact_surface is not None:
        s_vals = np.linspace(0.0, 2 * np.pi, 8, endpoint=False)
        t_vals = np.linspace(0.05, 0.5, 10)
    else:
        a, b = surf.s_range
        s_vals = a + (b - a) * (np.arange(8) + 0.5) / 8
        t_vals = sc.t_values
    path = SF.export_surface_csv(surf, s_vals, t_vals, out / f"{sc.name}__surface.csv")
    print(f"{sc.name}: surface samples -> {path.name}")
    return 0


def cmd_area(sc, out: Path):
    exact = sc.exact_surface is not None
    rep = AR.renormalized_area(sc.build_surface(), sc.eps_values, sc.cap,
                               (16, 24) if exact else (64, 24), check=exact)
    rep.to_json(out / f"{sc.name}__area.json")
    print(f"{sc.name}: renormalized area {rep.renormalized:.10g} (c_-1 = {rep.c_minus1:.10g},"
          f" T = {rep.T:g}{', capped' if rep.capped else ''})")
    return 0


def cmd_tractor(sc, out: Path):
    if sc.exact_surface is not None:
        print(f"{sc.name}: no boundary curve")
        return 0
    m, c = sc.build_metric(), sc.build_curve()
    a, b = c.s_range
    s_vals = a + (b - a) * (np.arange(16) + 0.5) / 16
    path = TR.export_tractor_csv(m, c, s_vals, out / f"{sc.name}__tractor_trace.csv")
    print(f"{sc.name}: tractor trace -> {path.name}")
    return 0


def cmd_verify(sc, out: Path, suites):
    rep = run_suites(sc, suites, out)
    _write(out / f"{sc.name}__report.json", rep.to_json())
    for c in rep.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {sc.name:24s} {c.name:44s} "
              f"{c.value:.4g}  ({c.bound})")
    if rep.skipped:
        print(f"      {sc.name:24s} skipped: {', '.join(rep.skipped)}")
    return 0 if rep.ok else 1


def build_parser():
    p = argparse.ArgumentParser(prog="confgeo",
                                description="Conformal geodesics, asymptotic minimal surfaces "
                                            "and tractor checks.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("target", nargs="?", help="scenario shorthand, e.g. 'verify all'")
    p.add_argument("--scenario", help=f"bundled name ({', '.join(scenario_names())}), 'all', "
                                      "or a scenario .ini file")
    p.add_argument("--suite", action="append", default=None,
                   help=f"verification suite, repeatable ({', '.join(suite_names())}, all)")
    p.add_argument("--out-dir", default="confgeo-out")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--resolution", type=int, default=None, help="samples along the curve")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.target is not None:
        if args.scenario is not None and args.scenario != args.target:
            print("config error: scenario given twice", file=sys.stderr)
            return 2
        args.scenario = args.target
    out = Path(args.out_dir)
    try:
        scs = _scenarios(args, "all" if args.command == "all" else "flat-circle")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    status = 0
    summary = {}
    for sc in scs:
        try:
            if args.command == "verify":
                rc = cmd_verify(sc, out, args.suite)
            elif args.command == "all":
                rc = 0
                for fn in (cmd_geodesic, cmd_surface, cmd_area, cmd_tractor):
                    rc |= fn(sc, out)
                rc |= cmd_verify(sc, out, args.suite)
            else:
                rc = {"geodesic": cmd_geodesic, "surface": cmd_surface, "area": cmd_area,
                      "tractor": cmd_tractor}[args.command](sc, out)
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
        except GeometryError as exc:
            print(f"{sc.name}: {type(exc).__name__}: {exc}", file=sys.stderr)
            rc = 1
        summary[sc.name] = "pass" if rc == 0 else "fail"
        status |= rc
    if args.command in ("verify", "all") and len(scs) > 1:
        _write(out / "summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return 1 if status else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
