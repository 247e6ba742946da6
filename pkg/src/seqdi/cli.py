"""Command-line entry point: ``seqdi {report,sweep,verify,presets}``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input or
unwritable output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import bell, checks, correlations, entropy, security
from .protocol import InvalidParameters, Preset, ProtocolParams

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INVALID = 0, 1, 2
SWEEP_COLUMNS = ("theta", "delta", "h_min", "h_vn", "security_valid", "saturation_residual")


class UsageError(Exception):
    pass


def fmt_float(v: float) -> str:
    return f"{v:.12g}"


def _json_float(v: float):
    return None if not math.isfinite(v) else float(fmt_float(v))


def add_param_args(ap: argparse.ArgumentParser, theta_default: float | None = math.pi / 8) -> None:
    g = ap.add_argument_group("protocol (radians)")
    g.add_argument("--preset", choices=("chsh", "wooltorton"))
    g.add_argument("--omega", type=float, default=math.pi / 6, help="wooltorton family angle in (0, pi/6]")
    g.add_argument("--alpha0", type=float)
    g.add_argument("--alpha1", type=float)
    g.add_argument("--beta1", type=float)
    g.add_argument("--delta", type=float)
    if theta_default is not None:
        g.add_argument("--theta", type=float, default=theta_default, help="strength parameter in [0, pi/4]")


def resolve(args, theta: float | None = None) -> tuple[ProtocolParams, Preset | None]:
    theta = args.theta if theta is None else theta
    explicit = {k: getattr(args, k) for k in ("alpha0", "alpha1", "beta1", "delta")
                if getattr(args, k) is not None}
    if args.preset is None:
        missing = sorted({"alpha0", "alpha1", "beta1", "delta"} - set(explicit))
        if missing:
            raise UsageError(f"without --preset, pass --{' --'.join(missing)}")
        return ProtocolParams(theta=theta, **explicit), None
    preset = Preset("chsh") if args.preset == "chsh" else Preset("wooltorton", args.omega)
    return preset.expand(theta, **explicit), preset


def build_report(p: ProtocolParams, preset: Preset | None) -> dict:
    out: dict = {"preset": preset.name if preset else None,
                 "omega": preset.omega if preset else None,
                 "params": p.as_dict(),
                 "security_valid": p.security_valid}
    try:
        c = bell.coefficients(p.theta, p.delta)
        out["coefficients"] = dict(zip(("c1", "c2", "c3", "c4"), c.as_tuple()))
        out["saturation_residual"] = bell.saturation_residual(p)
        out["boundary_residual"] = bell.boundary_residual(p)
        out["sdag_s_residual"] = bell.sdag_s_residual(p)
    except bell.DegenerateCoefficients as exc:
        out["coefficients"] = None
        out["bell_note"] = str(exc)
    out["ledger"] = security.uniqueness_check(p).as_dict()
    if not math.isfinite(out["ledger"]["max_abs_gap"]):
        out["ledger"]["max_abs_gap"] = None
    out["entropies"] = [entropy.entropies(p, x).as_dict() for x in (0, 1)]
    table = correlations.joint_dilated(p)
    if preset is not None and preset.name == "wooltorton":
        out["i_omega"] = bell.i_omega(table, preset.omega)
        out["tsirelson_bound_omega"] = bell.tsirelson_bound_omega(preset.omega)
    if preset is not None and preset.name == "chsh":
        out["chsh_best"] = bell.best_chsh(table)
        out["endpoint_annotation"] = entropy.CHSH_ENDPOINT_ANNOTATION
    return out


@dataclass(frozen=True)
class SweepSpec:
    x_star: int
    theta_min: float
    theta_max: float
    steps: int
    output_format: str
    output_path: str
    optimize_delta: bool = False

    def __post_init__(self):
        if self.steps < 2:
            raise UsageError("--steps must be at least 2")
        if not (0.0 <= self.theta_min <= self.theta_max <= math.pi / 4 + 1e-12):
            raise UsageError("theta range must satisfy 0 <= theta-min <= theta-max <= pi/4")
        if self.x_star not in (0, 1):
            raise UsageError("--x-star must be 0 or 1")
        if self.output_format not in ("csv", "json"):
            raise UsageError("--format must be csv or json")

    def thetas(self) -> np.ndarray:
        return np.linspace(self.theta_min, self.theta_max, self.steps)


def sweep_rows(base: ProtocolParams, spec: SweepSpec) -> tuple[list[dict], list[dict]]:
    rows = []
    table_gap = 0.0
    for t in spec.thetas():
        p = base.with_(theta=min(float(t), math.pi / 4))
        if spec.optimize_delta:
            p = p.with_(delta=entropy.optimize_delta(p, spec.x_star))
        rep = entropy.entropies(p, spec.x_star)
        from_table = entropy.entropies_from_table(correlations.joint_povm(p), spec.x_star, p)
        table_gap = max(table_gap, abs(rep.h_min - from_table.h_min), abs(rep.h_vn - from_table.h_vn))
        try:
            sat = bell.saturation_residual(p)
        except bell.DegenerateCoefficients:
            sat = math.nan
        rows.append({"theta": p.theta, "delta": p.delta, "h_min": rep.h_min, "h_vn": rep.h_vn,
                     "security_valid": rep.security_valid, "saturation_residual": sat})
    sats = [r["saturation_residual"] for r in rows if math.isfinite(r["saturation_residual"])]
    max_sat = max(sats) if sats else math.nan
    summary = [
        checks.below("entropy_formula_vs_table", table_gap, 1e-10).as_dict(),
        checks.below("saturation", max_sat, 1e-10).as_dict(),
    ]
    return rows, summary


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([
            ("true" if r[k] else "false") if isinstance(r[k], bool) else fmt_float(r[k])
            for k in SWEEP_COLUMNS
        ])
    return buf.getvalue()


def render_json(spec_info: dict, rows: list[dict], summary: list[dict]) -> str:
    json_rows = [
        {k: (r[k] if isinstance(r[k], bool) else _json_float(r[k])) for k in SWEEP_COLUMNS}
        for r in rows
    ]
    doc = {"spec": spec_info, "rows": json_rows, "checks": summary}
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def write_output(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def cmd_report(args) -> int:
    p, preset = resolve(args)
    write_output(json.dumps(build_report(p, preset), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = SweepSpec(args.x_star, args.theta_min, args.theta_max, args.steps,
                     args.format, args.out, args.optimize_delta)
    base, preset = resolve(args, theta=spec.theta_min)
    rows, summary = sweep_rows(base, spec)
    if spec.output_format == "csv":
        text = render_csv(rows)
    else:
        spec_info = {
            "preset": preset.name if preset else None,
            "omega": preset.omega if preset else None,
            "params": {k: v for k, v in base.as_dict().items() if k != "theta"},
            "x_star": spec.x_star,
            "theta_min": spec.theta_min,
            "theta_max": spec.theta_max,
            "steps": spec.steps,
            "optimize_delta": spec.optimize_delta,
        }
        if preset is not None and preset.name == "chsh":
            spec_info["endpoint_annotation"] = entropy.CHSH_ENDPOINT_ANNOTATION
        text = render_json(spec_info, rows, summary)
    write_output(text, spec.output_path)
    return EXIT_OK


def cmd_verify(args) -> int:
    p, preset = resolve(args)
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    results = checks.run_checks(p, preset, grid=args.grid)
    ok = all(c.ok for c in results)
    doc = {"params": p.as_dict(), "preset": preset.name if preset else None,
           "passed": ok, "checks": [c.as_dict() for c in results]}
    write_output(json.dumps(doc, indent=2) + "\n", args.out)
    for c in results:
        if not c.ok:
            print(f"FAILED {c.name}: residual={c.residual!r} tolerance={c.tolerance!r} {c.detail}",
                  file=sys.stderr)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_presets(args) -> int:
    out = {
        "chsh": Preset("chsh").angles(),
        "wooltorton": {"omega": args.omega, **Preset("wooltorton", args.omega).angles()},
    }
    write_output(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="seqdi", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    rp = sub.add_parser("report", help="coefficients, residuals, ledger and entropies at one point")
    add_param_args(rp)
    rp.add_argument("--out", default="-")
    rp.set_defaults(func=cmd_report)

    sp = sub.add_parser("sweep", help="entropy curves over a theta grid")
    add_param_args(sp, theta_default=None)
    sp.add_argument("--x-star", type=int, default=0)
    sp.add_argument("--theta-min", type=float, default=0.0)
    sp.add_argument("--theta-max", type=float, default=math.pi / 4)
    sp.add_argument("--steps", type=int, default=101)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--optimize-delta", action="store_true",
                    help="replace delta by the entropy-maximizing value at each theta")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_sweep)

    vp = sub.add_parser("verify", help="run every invariant suite; exit 1 on any failure")
    add_param_args(vp)
    vp.add_argument("--grid", type=int, default=5, help="points per axis of the (theta, delta, beta1) grid")
    vp.add_argument("--out", default="-")
    vp.set_defaults(func=cmd_verify)

    pp = sub.add_parser("presets", help="list preset angle expansions")
    pp.add_argument("--omega", type=float, default=math.pi / 6)
    pp.add_argument("--out", default="-")
    pp.set_defaults(func=cmd_presets)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidParameters, UsageError) as exc:
        print(f"seqdi: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
