"""Command-line entry point: ``loewner-range {boundary,unrestricted,verify,figure}``.

Numeric results go to stdout as ``key=value`` lines. Exit codes: 0 on
success, 1 when an audit or internal consistency check fails, 2 for
invalid parameters.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .curves import (N_PER_CURVE, assemble_boundary, oval_residual, theorem1_point,
                     unrestricted_boundary)
from .dynamics import check_horizon
from .errors import DomainError, LoewnerError
from .export import curve_rows, fmt, write_csv, write_svg
from .roots import RegimeParams
from .verify import (BAND, bang_bang_escape, containment_audit, extremal_sharpness,
                     pontryagin_spot_check)

OUT_ENV = "LOEWNER_RANGE_OUT"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SHARPNESS_MAX = 1e-6
DEFECT_MIN = -1e-6

FIGURES = {
    "fig1a": ("unrestricted", 0.245, None),
    "fig1b_reject": ("reject", 0.3, None),
    "fig2a": ("boundary", 0.245, 1.0),
    "fig2b": ("boundary", 0.245, 0.1),
    "fig3": ("boundary", 0.247, 0.05),
}


@dataclass
class RunConfig:
    T: float
    c: Optional[float] = None
    n_points: int = N_PER_CURVE
    n_samples: int = 10_000
    seed: int = 42
    tol: float = 1e-10
    band: float = BAND
    output_format: str = "both"
    output_path: Optional[str] = None

    def validate(self, need_c: bool):
        check_horizon(self.T)
        if need_c:
            if self.c is None:
                raise DomainError("--c is required")
            rp = RegimeParams(self.T, self.c)
            if not rp.saturated:
                raise DomainError(
                    f"c^2={self.c ** 2:.6g} < T - (1 - e^-4)/4 = {rp.threshold:.6g}: "
                    "outside the regime the boundary construction covers")
        if self.n_points < 2 or self.n_samples < 0 or self.tol <= 0 or self.band < 0:
            raise DomainError("invalid --points/--samples/--tol/--band")

    def stem(self, kind: str) -> Path:
        if self.output_path:
            return Path(self.output_path)
        name = f"{kind}_T{self.T:g}" + (f"_c{self.c:g}" if self.c is not None else "")
        return Path(os.environ.get(OUT_ENV, ".")) / name


def _emit(lines: List[str]):
    sys.stdout.write("".join(line + "\n" for line in lines))


def _with_ext(stem: Path, ext: str) -> Path:
    # with_suffix would eat the ".245_c1" part of a default stem
    return stem.parent / (stem.name + ext)


def _write(cfg: RunConfig, kind: str, curves, title: str, legend: Sequence[str]) -> List[str]:
    stem = cfg.stem(kind)
    stem.parent.mkdir(parents=True, exist_ok=True)
    written = []
    if cfg.output_format in ("csv", "both"):
        path = _with_ext(stem, ".csv")
        path.write_text(write_csv(curve_rows(curves)))
        written.append(f"csv={path}")
    if cfg.output_format in ("svg", "both"):
        path = _with_ext(stem, ".svg")
        path.write_text(write_svg(curves, title, legend))
        written.append(f"svg={path}")
    return written


def cmd_boundary(cfg: RunConfig) -> int:
    cfg.validate(need_c=True)
    b = assemble_boundary(cfg.T, cfg.c, n_per_curve=cfg.n_points)
    lines = [f"case={b.case_tag}", f"T={fmt(cfg.T)}", f"c={fmt(cfg.c)}",
             f"Y0={fmt(b.Y0)}", f"p0={fmt(b.p0)}"]
    if b.p1 is not None:
        lines += [f"p1={fmt(b.p1)}", f"p2={fmt(b.p2)}"]
    for k, r in enumerate(b.meta["switch_roots"]):
        lines.append(f"switch_root{k}={fmt(r)}")
    lines += [f"curves={'/'.join(cv.id for cv in b.curves)}",
              f"n_vertices={len(b.polygon)}", f"max_gap={fmt(b.meta['max_gap'])}"]
    legend = [f"case {b.case_tag}: " + " ".join(cv.id for cv in b.curves)]
    lines += _write(cfg, "boundary", b.curves, f"D_c(T), T={cfg.T:g}, c={cfg.c:g}", legend)
    _emit(lines)
    return EXIT_OK


def angle_max_residual(T: float, n: int = 100) -> float:
    phis = np.linspace(-math.pi / 2, math.pi / 2, n + 2)[1:-1]
    res = [abs(float(oval_residual(pt.X, pt.Y, T)))
           for pt in (theorem1_point(float(phi), T) for phi in phis)]
    return max(res)


def cmd_unrestricted(cfg: RunConfig, thm1_check: bool = False) -> int:
    cfg.validate(need_c=False)
    right = unrestricted_boundary(cfg.T, n=cfg.n_points)
    curves = [right, right.mirror()]
    lines = [f"T={fmt(cfg.T)}", f"n_vertices={len(right) * 2 - 2}",
             f"y_bottom={fmt(right.Y[0])}", f"y_top={fmt(right.Y[-1])}"]
    if thm1_check:
        lines.append(f"thm1_residual={fmt(angle_max_residual(cfg.T))}")
    lines += _write(cfg, "unrestricted", curves, f"D(T), T={cfg.T:g}", ["unrestricted driver"])
    _emit(lines)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    cfg.validate(need_c=True)
    b = assemble_boundary(cfg.T, cfg.c, n_per_curve=cfg.n_points)
    if cfg.n_samples == 0:
        print("warning: --samples 0, containment audit is vacuous", file=sys.stderr)
    rep = containment_audit(cfg.T, cfg.c, cfg.n_samples, cfg.seed, band=cfg.band, boundary=b)
    sharp = extremal_sharpness(cfg.T, cfg.c, m=64, tol=min(cfg.tol, 1e-11), boundary=b)
    ps = [cfg.c + (b.p0 - cfg.c) * f for f in (0.25, 0.5, 0.75)]
    defect = min(pontryagin_spot_check(cfg.T, cfg.c, p) for p in ps)
    escape, tau = bang_bang_escape(cfg.T, cfg.c, boundary=b)
    ok = rep.n_outside == 0 and sharp < SHARPNESS_MAX and defect >= DEFECT_MIN
    lines = [
        f"T={fmt(cfg.T)}", f"c={fmt(cfg.c)}", f"seed={rep.seed}", f"band={fmt(cfg.band)}",
        f"case={b.case_tag}",
        f"n_samples={rep.n_samples}", f"n_inside={rep.n_inside}",
        f"n_on_boundary={rep.n_on_boundary}", f"n_outside={rep.n_outside}",
        f"max_violation={fmt(rep.max_violation)}",
        f"sharpness={fmt(sharp)}", f"spot_check_defect={fmt(defect)}",
        f"bang_bang_escape={fmt(escape)}", f"bang_bang_switch_time={fmt(tau)}",
        f"passed={'true' if ok else 'false'}",
    ]
    stem = cfg.stem("verify")
    stem.parent.mkdir(parents=True, exist_ok=True)
    report = _with_ext(stem, ".txt")
    report.write_text("".join(line + "\n" for line in lines))
    _emit(lines + [f"report={report}"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_figure(preset: str, base: RunConfig) -> int:
    if preset not in FIGURES:
        raise DomainError(f"unknown preset {preset!r}; choose from {', '.join(FIGURES)}")
    kind, T, c = FIGURES[preset]
    if kind == "reject":
        _emit([f"preset={preset}", f"T={fmt(T)}",
               "status=out_of_scope",
               "reason=T > 1/4 makes the value range unbounded; only 0 < T < 1/4 is supported"])
        return EXIT_OK
    cfg = RunConfig(T=T, c=c, n_points=base.n_points, output_format=base.output_format,
                    output_path=base.output_path or str(
                        Path(os.environ.get(OUT_ENV, ".")) / preset))
    return cmd_unrestricted(cfg) if kind == "unrestricted" else cmd_boundary(cfg)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--points", type=int, default=N_PER_CURVE,
                        help="initial samples per curve (default %(default)s)")
    common.add_argument("--out", default=None,
                        help=f"output file stem (default: ${OUT_ENV} or cwd)")
    common.add_argument("--format", choices=("csv", "svg", "both"), default="both")

    tc = argparse.ArgumentParser(add_help=False)
    tc.add_argument("--T", type=float, required=True, help="horizon, 0 < T < 1/4")

    p = argparse.ArgumentParser(prog="loewner-range",
                                description="Value range of the chordal Loewner flow at i.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("boundary", parents=[common, tc], help="boundary of D_c(T)")
    sp.add_argument("--c", type=float, required=True)

    sp = sub.add_parser("unrestricted", parents=[common, tc], help="boundary of D(T)")
    sp.add_argument("--thm1-check", action="store_true",
                    help="print the max residual of the angle parametrisation")

    sp = sub.add_parser("verify", parents=[common, tc], help="audit an assembled boundary")
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--band", type=float, default=BAND)

    sp = sub.add_parser("figure", parents=[common], help="reproduce a figure scenario")
    sp.add_argument("preset", choices=sorted(FIGURES))
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    base = dict(n_points=args.points, output_format=args.format, output_path=args.out)
    try:
        if args.command == "figure":
            return cmd_figure(args.preset, RunConfig(T=0.1, **base))
        cfg = RunConfig(T=args.T, c=getattr(args, "c", None), **base)
        if args.command == "boundary":
            return cmd_boundary(cfg)
        if args.command == "unrestricted":
            return cmd_unrestricted(cfg, args.thm1_check)
        cfg.n_samples, cfg.seed, cfg.tol, cfg.band = args.samples, args.seed, args.tol, args.band
        return cmd_verify(cfg)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LoewnerError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
