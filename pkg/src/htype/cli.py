"""Command-line entry point: ``htype <command> ...``.

Exit codes: 0 pass, 1 verification failure, 2 usage or configuration error.
Tables are written as CSV, reports as JSON and plots as SVG under the output
directory (``--out-dir``, the config file, or $HTYPE_OUTPUT_DIR, in that order
of precedence).  Outputs carry no timestamps, so a fixed config reproduces
them byte for byte.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .biradial import named_profile, read_profile_csv
from .gelfand import gelfand_transform, parse_grid
from .group import DomainPoint, GroupElement, StructuralError, group_from_descriptor, validate_htype
from .harmonic import (
    ExtensionField,
    bump_datum,
    halfplane_oracle,
    indicator_datum,
    lb_residual_study,
    tangential_demo,
)
from .poisson import PoissonKernel, erratum_report, poisson_hat, poisson_hat_oracle
from .quadrature import MIN_PANELS, set_panel_budget
from .verify import run_suite

OUTPUT_ENV = "HTYPE_OUTPUT_DIR"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Settings shared by every command.

    max_panels is the adaptive-quadrature panel budget (minimum 64);
    resolution is the per-axis node count of the fixed H_1 rules used by the
    harmonic commands (minimum 8).
    """

    group: str | dict = "heisenberg:1"
    transform_tol: float = 1e-10
    quad_tol: float = 1e-11
    max_panels: int = 4000
    resolution: int = 24
    out_dir: str = "htype-out"
    seed: int = 0
    samples: int = 100

    def __post_init__(self):
        if not (self.transform_tol > 0 and self.quad_tol > 0):
            raise UsageError("tolerances must be positive")
        if self.max_panels < MIN_PANELS:
            raise UsageError(f"max_panels must be at least {MIN_PANELS}")
        if self.resolution < 8:
            raise UsageError("resolution must be at least 8")
        if self.samples < 1:
            raise UsageError("samples must be positive")

    @classmethod
    def from_sources(cls, path: str | None, overrides: dict, env=os.environ) -> RunConfig:
        data = {}
        if path:
            try:
                data = json.loads(Path(path).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError(f"cannot read config {path}: {exc}") from exc
            unknown = set(data) - {f.name for f in fields(cls)}
            if unknown:
                raise UsageError(f"unknown config keys: {sorted(unknown)}")
        if env.get(OUTPUT_ENV):
            data["out_dir"] = env[OUTPUT_ENV]
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)

    def build_group(self):
        try:
            return group_from_descriptor(self.group)
        except (KeyError, ValueError, TypeError, json.JSONDecodeError) as exc:
            raise UsageError(f"bad group descriptor {self.group!r}: {exc}") from exc


# -- output helpers ------------------------------------------------------------------

def _clean(obj):
    """Make a report JSON-safe: NaN/inf become None, numpy scalars become Python."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _out_path(cfg: RunConfig, name: str, explicit: str | None) -> Path:
    path = Path(explicit) if explicit else Path(cfg.out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_json(cfg: RunConfig, name: str, report: dict, explicit: str | None = None) -> Path:
    body = {"config": asdict(cfg), **report}
    text = json.dumps(_clean(body), indent=2) + "\n"
    path = _out_path(cfg, name, explicit)
    path.write_text(text)
    sys.stdout.write(text)
    return path


def write_csv(cfg: RunConfig, name: str, header: list[str], rows: list[list],
              explicit: str | None = None) -> Path:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    path = _out_path(cfg, name, explicit)
    path.write_text(buf.getvalue())
    print(f"wrote {path}", file=sys.stderr)
    return path


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc


def _profile(args, group):
    if args.profile_csv:
        return read_profile_csv(args.profile_csv, group, interp=args.interp)
    name, _, rest = args.profile.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, _, val = item.partition("=")
        params[key.strip()] = float(val)
    try:
        return named_profile(name, group, **params)
    except TypeError as exc:
        raise UsageError(f"bad profile parameters {rest!r}: {exc}") from exc


def _grid(text: str):
    try:
        return parse_grid(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# -- commands ----------------------------------------------------------------------

def cmd_group_validate(cfg: RunConfig, args) -> int:
    group = cfg.build_group()
    rep = validate_htype(group, samples=cfg.samples, seed=cfg.seed)
    write_json(cfg, "group_validate.json", rep.to_dict(), args.output)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_transform(cfg: RunConfig, args) -> int:
    group = cfg.build_group()
    f = _profile(args, group)
    rows = []
    for p in _grid(args.grid):
        res = gelfand_transform(f, p, tol=cfg.transform_tol)
        l = p.l if p.branch == "laguerre" else ""
        rows.append([p.branch, p.parameter, l, res.value, res.error])
    write_csv(cfg, "transform.csv", ["branch", "nu_or_mu", "l", "value", "err_estimate"], rows,
              args.output)
    return EXIT_OK


def cmd_poisson_hat(cfg: RunConfig, args) -> int:
    group = cfg.build_group()
    kernel = PoissonKernel.build(group, args.a)
    variants = ["corrected", "paper"] if args.variant == "both" else [args.variant]
    rows = []
    for p in _grid(args.grid):
        if args.no_oracle:
            oracle, err = float("nan"), float("nan")
        else:
            res = poisson_hat_oracle(kernel, p, tol=cfg.quad_tol)
            oracle, err = res.value, res.error
        l = p.l if p.branch == "laguerre" else ""
        for variant in (variants if p.branch == "laguerre" else ["closed"]):
            closed = poisson_hat(kernel, p, variant="corrected" if variant == "closed" else variant)
            rel = abs(closed - oracle) / abs(oracle)
            rows.append([p.branch, p.parameter, l, closed, oracle, rel, variant, err])
    header = ["branch", "nu_or_mu", "l", "closed_form", "oracle", "rel_err", "variant",
              "err_estimate"]
    write_csv(cfg, "poisson_hat.csv", header, rows, args.output)
    return EXIT_OK


def cmd_poisson_verify(cfg: RunConfig, args) -> int:
    group = cfg.build_group()
    rep = run_suite(group, samples=cfg.samples, seed=cfg.seed, quad_tol=cfg.quad_tol)
    axioms = rep["checks"][0]
    rep["failed_axioms"] = axioms["failed_axioms"]
    write_json(cfg, "poisson_verify.json", rep, args.output)
    return EXIT_OK if rep["passed"] else EXIT_FAIL


def _demo_table(cfg: RunConfig, group, alpha, radius, heights, radii):
    datum = bump_datum(group, alpha, radius=radius)
    return tangential_demo(datum, heights, radii, resolution=cfg.resolution)


def _demo_svg(table, path: Path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "htype"
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for i, a in enumerate(table.heights):
        ax.loglog(table.radii, table.sup_dev[i], marker="o", label=f"a = {a:g}")
    ax.set_xlabel("R")
    ax.set_ylabel("sup |u - alpha| over R <= |n| <= 2R")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def cmd_harmonic_demo(cfg: RunConfig, args) -> int:
    group = cfg.build_group()
    heights, radii = _floats(args.heights), _floats(args.radii)
    table = _demo_table(cfg, group, args.alpha, args.bump_radius, heights, radii)
    rows = [[r["a"], r["R"], r["sup_abs_u_minus_alpha"], r["err_estimate"]]
            for r in table.to_rows()]
    path = write_csv(cfg, "harmonic_demo.csv", ["a", "R", "sup_abs_u_minus_alpha", "err_estimate"],
                     rows, args.output)
    if args.svg:
        svg = path.with_suffix(".svg")
        _demo_svg(table, svg)
        print(f"wrote {svg}", file=sys.stderr)
    ok = all(table.decreasing()) and table.heights_agree()
    return EXIT_OK if ok else EXIT_FAIL


def cmd_harmonic_residual(cfg: RunConfig, args) -> int:
    group = cfg.build_group()
    pt = _floats(args.point)
    if len(pt) != group.dim + 1:
        raise UsageError(f"--point needs {group.dim + 1} numbers (X, Z, a)")
    p = DomainPoint(GroupElement(pt[:group.dim_v], pt[group.dim_v:group.dim]), pt[-1])
    fld = ExtensionField(group, bump_datum(group, args.alpha, radius=args.bump_radius),
                         resolution=cfg.resolution)
    study = lb_residual_study(fld, p, _floats(args.hs))
    rows = [[r["h"], r["residual"], r["ratio"], r["noise_floor"], int(r["resolved"])]
            for r in study.to_rows()]
    write_csv(cfg, "harmonic_residual.csv", ["h", "residual", "ratio", "err_estimate", "resolved"],
              rows, args.output)
    return EXIT_OK


def cmd_report(cfg: RunConfig, args) -> int:
    group = cfg.build_group()
    suite = run_suite(group, samples=cfg.samples, seed=cfg.seed, quad_tol=cfg.quad_tol)
    report = {"suite": suite}
    if suite["passed"]:
        err = erratum_report(PoissonKernel.build(group, 1.0), oracle_tol=cfg.quad_tol)
        report.update({k: err[k] for k in ("paper_variant_sign_pattern",
                                           "corrected_variant_min_abs", "oracle_max_rel_err")})
        report["erratum"] = err
        if group.dim == 3:
            table = _demo_table(cfg, group, 0.3, 1.0, [0.5, 1.0, 2.0], [4.0, 8.0, 16.0])
            report["tangential"] = {
                "rows": table.to_rows(), "decreasing": table.decreasing(),
                "limits": table.limit.tolist(), "limit_errors": table.limit_err.tolist(),
                "heights_agree": table.heights_agree(),
            }
        hp = halfplane_oracle(indicator_datum(), [0.5, 2.0], [0.0, 5.0, 50.0])
        report["halfplane"] = {"rows": hp,
                               "max_closed_form_err": max(r["closed_form_err"] for r in hp)}
    report["passed"] = suite["passed"]
    write_json(cfg, "report.json", report, args.output)
    return EXIT_OK if suite["passed"] else EXIT_FAIL


# -- argument parsing ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--group", help="heisenberg:R, quaternionic:N or a JSON descriptor")
    common.add_argument("--out-dir", dest="out_dir")
    common.add_argument("--seed", type=int)
    common.add_argument("--samples", type=int, help="random samples for axiom checks")
    common.add_argument("--transform-tol", dest="transform_tol", type=float)
    common.add_argument("--quad-tol", dest="quad_tol", type=float)
    common.add_argument("--max-panels", dest="max_panels", type=int)
    common.add_argument("--resolution", type=int)
    common.add_argument("-o", "--output", help="explicit output file")

    parser = argparse.ArgumentParser(prog="htype", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    grp = sub.add_parser("group").add_subparsers(dest="action", required=True)
    grp.add_parser("validate", parents=[common]).set_defaults(func=cmd_group_validate)

    tr = sub.add_parser("transform", parents=[common])
    tr.add_argument("--profile", default="gaussian", help="name[:key=val,...]")
    tr.add_argument("--profile-csv", help="tabulated profile with header r,rho,value")
    tr.add_argument("--interp", choices=["linear", "cubic"], default="linear")
    tr.add_argument("--grid", default="nu=0.5,1,2;l=0..2;mu=0.5,1,2")
    tr.set_defaults(func=cmd_transform)

    po = sub.add_parser("poisson").add_subparsers(dest="action", required=True)
    hat = po.add_parser("hat", parents=[common])
    hat.add_argument("--a", type=float, default=1.0)
    hat.add_argument("--grid", default="nu=0.5,1,2;l=0..5;mu=0.5,1,2")
    hat.add_argument("--variant", choices=["corrected", "paper", "both"],
                     default="corrected")
    hat.add_argument("--no-oracle", action="store_true")
    hat.set_defaults(func=cmd_poisson_hat)
    po.add_parser("verify", parents=[common]).set_defaults(func=cmd_poisson_verify)

    ha = sub.add_parser("harmonic").add_subparsers(dest="action", required=True)
    demo = ha.add_parser("demo", parents=[common])
    demo.add_argument("--alpha", type=float, default=0.3)
    demo.add_argument("--bump-radius", dest="bump_radius", type=float, default=1.0)
    demo.add_argument("--heights", default="0.5,1,2")
    demo.add_argument("--radii", default="4,8,16")
    demo.add_argument("--svg", action="store_true", help="also write a log-log plot")
    demo.set_defaults(func=cmd_harmonic_demo)
    resid = ha.add_parser("residual", parents=[common])
    resid.add_argument("--alpha", type=float, default=0.3)
    resid.add_argument("--bump-radius", dest="bump_radius", type=float, default=1.0)
    resid.add_argument("--point", default="0,0,0,1", help="X..., Z..., a")
    resid.add_argument("--hs", default="0.2,0.1,0.05")
    resid.set_defaults(func=cmd_harmonic_residual)

    sub.add_parser("report", parents=[common]).set_defaults(func=cmd_report)
    return parser


CONFIG_FLAGS = ("group", "out_dir", "seed", "samples", "transform_tol", "quad_tol", "max_panels",
                "resolution")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig.from_sources(args.config, {k: getattr(args, k) for k in CONFIG_FLAGS})
        old = set_panel_budget(cfg.max_panels)
        try:
            return args.func(cfg, args)
        finally:
            set_panel_budget(old)
    except (UsageError, StructuralError, ValueError) as exc:
        json.dump({"error": str(exc), "kind": type(exc).__name__}, sys.stderr)
        sys.stderr.write("\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
