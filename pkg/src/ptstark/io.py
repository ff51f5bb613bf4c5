"""CSV and SVG output for g scans."""

import math
import sys

import numpy as np

from .scan import GAP, GScan

__all__ = ["CSV_COLUMNS", "format_float", "export_csv", "read_csv", "write_report_csv", "export_svg"]

CSV_COLUMNS = ("g", "trajectory_id", "re_e", "im_e", "flags")


def format_float(x):
    """Scientific notation with 12 significant digits; -0 is written as 0."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if x == 0.0:
        x = 0.0
    return f"{x:.11e}"


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def _metadata_lines(metadata):
    return [f"# {key}={metadata[key]}" for key in sorted(metadata)]


def scan_to_text(gscan, metadata=None, comments=()):
    lines = _metadata_lines(metadata or {})
    if gscan.labels is not None:
        lines += [f"# trajectory {i}: {lab}" for i, lab in enumerate(gscan.labels)]
    lines += [f"# {c}" for c in comments]
    lines.append(",".join(CSV_COLUMNS))
    for j, g in enumerate(gscan.g_grid):
        for i in range(gscan.n_trajectories):
            e = gscan.values[i, j]
            lines.append(
                ",".join(
                    (format_float(g), str(i), format_float(e.real), format_float(e.imag),
                     str(gscan.flags[i, j]))
                )
            )
    return "\n".join(lines) + "\n"


def export_csv(gscan, path, metadata=None, comments=()):
    """Write rows sorted by (g, trajectory_id) after ``#`` comment lines."""
    _write(path, scan_to_text(gscan, metadata, comments))


def read_csv(path):
    """Parse a file written by :func:`export_csv` back into (GScan, metadata)."""
    metadata, rows = {}, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body and not body.startswith(("trajectory ", "ep ")):
                    key, _, value = body.partition("=")
                    metadata[key] = value
                continue
            if line == ",".join(CSV_COLUMNS) or not line:
                continue
            g, tid, re_e, im_e, flag = line.split(",")
            rows.append((float(g), int(tid), complex(float(re_e), float(im_e)), flag))
    grid = np.array(sorted({r[0] for r in rows}))
    n_traj = max((r[1] for r in rows), default=-1) + 1
    values = np.full((n_traj, len(grid)), np.nan + 0j)
    flags = np.full((n_traj, len(grid)), GAP, dtype=object)
    col = {g: j for j, g in enumerate(grid)}
    for g, tid, e, flag in rows:
        values[tid, col[g]] = e
        flags[tid, col[g]] = flag
    return GScan(g_grid=grid, values=values, flags=flags, source=metadata), metadata


def write_report_csv(reports, path, metadata=None):
    """First-order perturbation reports, one row per correction."""
    lines = _metadata_lines(metadata or {})
    lines.append("group,e0,first_order,verdict")
    for k, rep in enumerate(reports):
        for w in rep.first_order:
            lines.append(
                f"{k},{format_float(rep.unperturbed_energy)},{format_float(w)},{rep.verdict}"
            )
    _write(path, "\n".join(lines) + "\n")


def _polyline(xs, ys, box, color):
    x0, y0, w, h, xr, yr = box
    pts = []
    for x, y in zip(xs, ys):
        if not (np.isfinite(x) and np.isfinite(y)):
            continue
        px = x0 + (x - xr[0]) / (xr[1] - xr[0] or 1.0) * w
        py = y0 + h - (y - yr[0]) / (yr[1] - yr[0] or 1.0) * h
        pts.append(f"{px:.2f},{py:.2f}")
    return f'<polyline fill="none" stroke="{color}" stroke-width="1" points="{" ".join(pts)}"/>'


def export_svg(gscan, path, title=""):
    """Side-by-side Re E and Im E against g as plain polylines."""
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
              "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]
    g = gscan.g_grid
    xr = (float(g.min()), float(g.max())) if len(g) else (0.0, 1.0)
    parts = ['<svg xmlns="http://www.w3.org/2000/svg" width="840" height="340">',
             f'<text x="20" y="20" font-size="14">{title}</text>']
    for panel, part in enumerate((np.real, np.imag)):
        data = part(gscan.values)
        finite = data[np.isfinite(data)]
        yr = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
        box = (40 + panel * 410, 40, 360, 260, xr, yr)
        parts.append(f'<rect x="{box[0]}" y="40" width="360" height="260" '
                     'fill="none" stroke="black"/>')
        parts.append(f'<text x="{box[0]}" y="320" font-size="12">'
                     f'{"Re" if panel == 0 else "Im"} E vs g; range [{yr[0]:.4g}, {yr[1]:.4g}]</text>')
        for i in range(gscan.n_trajectories):
            parts.append(_polyline(g, data[i], box, colors[i % len(colors)]))
    parts.append("</svg>")
    _write(path, "\n".join(parts) + "\n")
