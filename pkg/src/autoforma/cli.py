"""Command line front end: ``autoforma <subcommand> --config cfg.json [--out DIR]``.

Exit codes: 0 ok, 2 parse/validation error, 3 integrality violated,
4 numerical failure, 5 residual over tolerance, 6 map not equivariant.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import verify as V
from .automorphy import check_integrality
from .config import ConfigError, load_config
from .errors import (IntegralityViolated, NonPositiveWeight, NotEquivariant, NumericallyVanishing,
                     QuadratureUnconverged, SeriesTruncationError)
from .phi import phi_affine

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INTEGRALITY = 3
EXIT_NUMERICAL = 4
EXIT_RESIDUAL = 5
EXIT_NOT_EQUIVARIANT = 6

COMMANDS = ("validate", "weight", "phi", "character", "build", "verify", "sample")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, allow_nan=False) + "\n")


def write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(header)
        for row in rows:
            out.writerow([_fmt(v) for v in row])


def _grid_rows(points, values):
    z = np.asarray(points).ravel()
    for zz, vv in zip(z, np.asarray(values).ravel()):
        yield zz.real, zz.imag, vv


def _checks_dict(ctx):
    return {name: {"value": value, "tolerance": tol, "ok": ok} for name, value, tol, ok in ctx.checks}


def _exit_for(ctx, integrality_ok=True) -> int:
    if not integrality_ok:
        return EXIT_INTEGRALITY
    return EXIT_RESIDUAL if ctx.failed else EXIT_OK


def cmd_validate(ctx, out: Path) -> int:
    res = V.stage_validate(ctx)
    res["checks"] = _checks_dict(ctx)
    write_json(out / "validate.json", res)
    print(f"equivariance residual {res['equivariance_residual']:.3e}; "
          f"integrality {'ok' if res['integrality']['ok'] else 'VIOLATED'}: {res['integrality']['table']}")
    return _exit_for(ctx, res["integrality"]["ok"])


def cmd_weight(ctx, out: Path) -> int:
    res = V.stage_weight(ctx)
    res["checks"] = _checks_dict(ctx)
    write_json(out / "weight.json", res)
    print(f"B = {res['B']!r}; constancy certificate {res['constancy_certificate']:.3e}")
    return _exit_for(ctx)


def cmd_phi(ctx, out: Path) -> int:
    res = V.stage_phi(ctx)
    res["checks"] = _checks_dict(ctx)
    phi = phi_affine(ctx.tau, ctx.weights)
    pts = ctx.lattice.cell_grid(ctx.cfg.nx, ctx.cfg.ny)
    write_csv(out / "phi_grid.csv", ["x", "y", "phi"], _grid_rows(pts, phi(pts)))
    write_json(out / "phi.json", res)
    print(f"phi path-independence residual {res['path_independence']:.3e}")
    return _exit_for(ctx)


def cmd_character(ctx, out: Path) -> int:
    res = V.stage_character(ctx)
    ok, table = check_integrality(ctx.tau, ctx.weights, ctx.lattice)
    res["integrality"] = {"ok": ok, "table": table.tolist()}
    res["checks"] = _checks_dict(ctx)
    write_json(out / "character.json", res)
    print(f"chi on generators {res['chi_tau']}; pseudo-character residual "
          f"{res['pseudo_character_residual']:.3e}")
    return _exit_for(ctx, ok)


def _require_integrality(ctx):
    ok, table = check_integrality(ctx.tau, ctx.weights, ctx.lattice)
    if not ok:
        raise IntegralityViolated(f"phase/pi on generator pairs is not integral: {table.tolist()}")


def cmd_build(ctx, out: Path) -> int:
    _require_integrality(ctx)
    summary, *_ = V.stage_forms(ctx)
    summary["checks"] = _checks_dict(ctx)
    write_json(out / "forms.json", summary)
    print(f"landau residual {summary['landau_residual']:.3e}; mixed residual {summary['mixed_residual']:.3e}; "
          f"max|F| on cell {summary['nontriviality_max_abs']:.3e}")
    return _exit_for(ctx)


def cmd_sample(ctx, out: Path, form: str = "landau") -> int:
    _require_integrality(ctx)
    _, landau, mixed, _ = V.stage_forms(ctx)
    F = landau if form == "landau" else mixed
    pts = ctx.lattice.cell_grid(ctx.cfg.nx, ctx.cfg.ny).ravel()
    vals = F(pts)
    rows = ((z.real, z.imag, v.real, v.imag, abs(v)) for z, v in zip(pts, vals))
    write_csv(out / f"sample_{form}.csv", ["x", "y", "re_F", "im_F", "abs_F"], rows)
    print(f"wrote {pts.size} samples of the {form} form")
    return _exit_for(ctx)


def run_verification(ctx):
    """All stages; returns ``(report, timings, exit_code)``."""
    report = {"config": ctx.cfg.to_dict(), "B": ctx.weights.B}
    timings = {}

    def timed(name, fn):
        t0 = time.perf_counter()
        res = fn(ctx)
        timings[name] = time.perf_counter() - t0
        return res

    validate = timed("validate", V.stage_validate)
    report["integrality"] = validate["integrality"]
    report["equivariance_residual"] = validate["equivariance_residual"]
    weight = timed("weight", V.stage_weight)
    report["weight_constancy_certificate"] = weight["constancy_certificate"]
    report["chain_rule_residual"] = timed("chain_rule", V.stage_chain_rule)["chain_rule_residual"]
    phi = timed("phi", V.stage_phi)
    report["phi_closed_vs_quadrature"] = phi["closed_vs_quadrature"]
    report["phi_path_independence"] = phi["path_independence"]
    report["phi_pde_residual"] = phi["pde_residual"]
    report["psi_reduction_residual"] = phi["psi_reduction_residual"]
    char = timed("character", V.stage_character)
    report["chi_tau"] = char["chi_tau"]
    report["chi_hat_spread"] = char["chi_hat_spread"]
    report["pseudo_character_residual"] = char["pseudo_character_residual"]
    integral = validate["integrality"]["ok"]
    if integral:
        forms = timed("forms", lambda c: V.stage_forms(c)[0])
        report["landau_residual"] = forms["landau_residual"]
        report["mixed_residual"] = forms["mixed_residual"]
        report["nontriviality_max_abs"] = forms["nontriviality_max_abs"]
    else:
        report["landau_residual"] = report["mixed_residual"] = report["nontriviality_max_abs"] = None
    report["checks"] = _checks_dict(ctx)
    report["passed"] = integral and not ctx.failed
    return report, timings, _exit_for(ctx, integral)


def cmd_verify(ctx, out: Path) -> int:
    report, timings, code = run_verification(ctx)
    write_json(out / "report.json", report)
    write_json(out / "timings.json", timings)
    for name, chk in report["checks"].items():
        print(f"{'PASS' if chk['ok'] else 'FAIL'}  {name:<26} {chk['value']:.3e}  (tol {chk['tolerance']:.0e})")
    if not report["integrality"]["ok"]:
        print(f"FAIL  integrality table {report['integrality']['table']}")
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="autoforma", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="experiment configuration (JSON)")
    p.add_argument("--out", default=".", help="output directory (default: current)")
    p.add_argument("--tol", type=float, default=None, help="override series.tol")
    p.add_argument("--seed", type=int, default=None, help="override probes.rng_seed")
    p.add_argument("--form", choices=("landau", "mixed"), default="landau",
                   help="form written by 'sample'")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        changes = {}
        if args.tol is not None:
            changes["tol"] = args.tol
        if args.seed is not None:
            changes["rng_seed"] = args.seed
        if changes:
            cfg = cfg.replace(**changes)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ctx = V.Context(cfg)
    try:
        if args.command == "sample":
            return cmd_sample(ctx, out, args.form)
        return globals()[f"cmd_{args.command}"](ctx, out)
    except IntegralityViolated as exc:
        print(f"integrality violated: {exc}", file=sys.stderr)
        return EXIT_INTEGRALITY
    except (NumericallyVanishing, QuadratureUnconverged, SeriesTruncationError, NonPositiveWeight) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except NotEquivariant as exc:
        print(f"not equivariant: {exc}", file=sys.stderr)
        return EXIT_NOT_EQUIVARIANT


if __name__ == "__main__":
    sys.exit(main())
