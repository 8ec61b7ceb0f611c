"""Deterministic artifacts: JSON reports, CSV tables and quick-look SVG plots."""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def normalize(obj):
    """Convert numpy/complex/tuple values into plain JSON-compatible containers."""
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return normalize(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj, indent: int, level: int, out: list):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, k in enumerate(sorted(obj)):
            out.append(f"{pad}{json.dumps(k)}: ")
            _emit(obj[k], indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        if all(not isinstance(v, (dict, list)) for v in obj):
            out.append("[" + ", ".join(_scalar(v) for v in obj) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    else:
        out.append(_scalar(obj))


def _scalar(v) -> str:
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return json.dumps(v)
    return _fmt_float(v)


def dumps(obj, indent: int = 2) -> str:
    """JSON with sorted keys and 17-significant-digit floats; complex as [re, im]."""
    out: list[str] = []
    _emit(normalize(obj), indent, 0, out)
    return "".join(out) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj), encoding="utf-8")
    return path


def write_csv(path, columns: dict, meta: dict | None = None) -> Path:
    """Columns of equal length; ``meta`` becomes one leading ``# k=v, ...`` line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    cols = [np.asarray(columns[k]).ravel() for k in names]
    if len({len(c) for c in cols}) > 1:
        raise ValueError("CSV columns differ in length")
    buf = io.StringIO()
    if meta:
        buf.write("# " + ", ".join(f"{k}={_meta_value(v)}" for k, v in sorted(meta.items())) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for row in zip(*cols):
        w.writerow([format(float(v), ".17g") for v in row])
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path


def _meta_value(v):
    return format(v, ".17g") if isinstance(v, float) else str(v)


def read_csv(path) -> tuple[dict, dict]:
    """Inverse of :func:`write_csv`: (metadata, columns)."""
    meta: dict = {}
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            for item in line[1:].split(","):
                if "=" in item:
                    k, v = item.split("=", 1)
                    meta[k.strip()] = v.strip()
        elif line.strip():
            body.append(line)
    rows = list(csv.reader(body))
    header, data = rows[0], rows[1:]
    cols = {h: np.array([float(r[i]) for r in data]) for i, h in enumerate(header)}
    return meta, cols


def write_svg(path, x, series: dict, title: str = "", width: int = 640, height: int = 400) -> Path:
    """Minimal polyline plot, one colour per series, finite samples only."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    x = np.asarray(x, float)
    ys = {k: np.asarray(v, float) for k, v in series.items()}
    allv = np.concatenate([v[np.isfinite(v)] for v in ys.values()]) if ys else np.zeros(1)
    y0, y1 = (float(allv.min()), float(allv.max())) if allv.size else (0.0, 1.0)
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    x0, x1 = float(x.min()), float(x.max())
    if x1 == x0:
        x1 = x0 + 1
    m = 40
    sx = lambda v: m + (v - x0) / (x1 - x0) * (width - 2 * m)  # noqa: E731
    sy = lambda v: height - m - (v - y0) / (y1 - y0) * (height - 2 * m)  # noqa: E731
    colours = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'viewBox="0 0 {width} {height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<rect x="{m}" y="{m}" width="{width - 2 * m}" height="{height - 2 * m}" fill="none" stroke="#888"/>']
    if title:
        parts.append(f'<text x="{width / 2:.1f}" y="{m / 2 + 5:.1f}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="14">{_esc(title)}</text>')
    parts.append(f'<text x="{m}" y="{height - 10}" font-family="sans-serif" font-size="11">{x0:.4g}</text>')
    parts.append(f'<text x="{width - m}" y="{height - 10}" text-anchor="end" font-family="sans-serif" '
                 f'font-size="11">{x1:.4g}</text>')
    parts.append(f'<text x="4" y="{m + 4}" font-family="sans-serif" font-size="11">{y1:.4g}</text>')
    parts.append(f'<text x="4" y="{height - m}" font-family="sans-serif" font-size="11">{y0:.4g}</text>')
    for i, (name, y) in enumerate(ys.items()):
        ok = np.isfinite(y)
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x[ok], y[ok]))
        c = colours[i % len(colours)]
        parts.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{pts}"/>')
        parts.append(f'<text x="{width - m - 4}" y="{m + 16 + 14 * i}" text-anchor="end" fill="{c}" '
                     f'font-family="sans-serif" font-size="12">{_esc(name)}</text>')
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n", encoding="utf-8")
    return path


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
