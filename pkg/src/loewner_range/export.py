"""CSV and SVG writers for boundary curves.

CSV rows are ``curve_id,param,x,y`` with floats in shortest round-trip
form (``repr``), so parsing and re-emitting a file reproduces it byte for
byte.
"""

from __future__ import annotations

import io
from typing import Iterable, List, Sequence, Tuple
from xml.sax.saxutils import escape

from .curves import BoundaryCurve

CSV_HEADER = "curve_id,param,x,y"

STROKES = {
    "L1": "#1f77b4", "L2": "#d62728", "L3": "#2ca02c", "L4": "#2ca02c",
    "L5": "#9467bd", "L6": "#9467bd", "L7": "#ff7f0e", "L8": "#ff7f0e",
    "L9": "#8c564b", "L10": "#8c564b", "UNRESTRICTED": "#333333",
}

Row = Tuple[str, float, float, float]


def fmt(v: float) -> str:
    v = float(v)
    return "0.0" if v == 0.0 else repr(v)


def curve_rows(curves: Iterable[BoundaryCurve]) -> List[Row]:
    rows = []
    for cv in curves:
        for q, x, y in zip(cv.params, cv.X, cv.Y):
            rows.append((cv.id, float(q), float(x), float(y)))
    return rows


def write_csv(rows: Sequence[Row]) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for cid, q, x, y in rows:
        buf.write(f"{cid},{fmt(q)},{fmt(x)},{fmt(y)}\n")
    return buf.getvalue()


def read_csv(text: str) -> List[Row]:
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"expected header {CSV_HEADER!r}")
    rows = []
    for ln in lines[1:]:
        cid, q, x, y = ln.split(",")
        rows.append((cid, float(q), float(x), float(y)))
    return rows


def write_svg(curves: Sequence[BoundaryCurve], title: str, legend: Sequence[str] = (),
              width: int = 640) -> str:
    """One polyline per curve on equal-aspect axes, y pointing up."""
    xs = [float(v) for cv in curves for v in cv.X]
    ys = [float(v) for cv in curves for v in cv.Y]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-12)
    m = 0.05 * span
    vb = (x0 - m, -(y1 + m), (x1 - x0) + 2 * m, (y1 - y0) + 2 * m)
    height = max(1, round(width * vb[3] / vb[2]))
    sw = span / 400
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{vb[0]:.9g} {vb[1]:.9g} {vb[2]:.9g} {vb[3]:.9g}" '
        'preserveAspectRatio="xMidYMid meet">',
        f"<title>{escape(title)}</title>",
    ]
    if x0 - m < 0 < x1 + m:
        out.append(f'<line x1="0" y1="{-(y1 + m):.9g}" x2="0" y2="{-(y0 - m):.9g}" '
                   f'stroke="#bbbbbb" stroke-width="{sw / 2:.6g}" stroke-dasharray="{4 * sw:.6g}"/>')
    for cv in curves:
        pts = " ".join(f"{x:.9g},{-y:.9g}" for x, y in zip(cv.X, cv.Y))
        colour = STROKES.get(cv.id, "#000000")
        out.append(f'<polyline data-curve="{cv.id}" fill="none" stroke="{colour}" '
                   f'stroke-width="{sw:.6g}" points="{pts}"/>')
    fs = span / 30
    for k, line in enumerate([title, *legend]):
        out.append(f'<text x="{x0 - m + fs / 2:.9g}" y="{-(y1 + m) + fs * (k + 1.2):.9g}" '
                   f'font-size="{fs:.6g}" font-family="sans-serif">{escape(line)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
