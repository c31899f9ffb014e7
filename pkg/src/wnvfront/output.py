"""Result serialization: CSV tables and self-contained SVG charts.

Floats are written with repr (shortest round-trip form) and LF line
endings, so identical runs produce bitwise-identical files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .solver import Trajectory


def _f(x: float) -> str:
    return repr(float(x))


def write_csv(path: Path, header: Sequence[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_f(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_csv(path) -> Dict[str, np.ndarray]:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.split("\n") if ln]
    header = lines[0].split(",")
    data = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
    arr = np.array(data) if data else np.zeros((0, len(header)))
    return {name: arr[:, i] for i, name in enumerate(header)}


def write_trajectory_csv(traj: Trajectory, outdir) -> List[Path]:
    """boundaries.csv plus one snapshot_<t>.csv per stored snapshot."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    bpath = outdir / "boundaries.csv"
    write_csv(
        bpath,
        ["t", "g", "h", "gdot", "hdot", "supU", "supV"],
        zip(traj.t, traj.g, traj.h, traj.gdot, traj.hdot, traj.sup_m, traj.sup_n),
    )
    written.append(bpath)
    for st in traj.snapshots:
        x = st.geom.to_x(st.y)
        spath = outdir / f"snapshot_{st.t:g}.csv"
        write_csv(spath, ["x", "y", "U", "V"], zip(x, st.y, st.m, st.n))
        written.append(spath)
    return written


# ---------------------------------------------------------------------------
# SVG emission (dependency-free, deterministic)

_W, _H = 640, 480
_ML, _MR, _MT, _MB = 60, 20, 30, 45


def _scale(vals, lo, hi, out_lo, out_hi):
    vals = np.asarray(vals, dtype=float)
    if hi - lo <= 0:
        hi = lo + 1.0
    return out_lo + (vals - lo) / (hi - lo) * (out_hi - out_lo)


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def svg_line_chart(
    series: Sequence[Tuple[str, np.ndarray, np.ndarray]],
    path,
    title: str = "",
    log_y: bool = False,
) -> Path:
    """Write a line chart; series is a list of (label, xs, ys)."""
    if not series or any(len(xs) == 0 for _, xs, _ in series):
        raise ValueError("cannot plot empty series")
    processed = []
    for label, xs, ys in series:
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if log_y:
            keep = ys > 0
            xs, ys = xs[keep], np.log10(ys[keep])
        processed.append((label, xs, ys))
    x_lo = min(float(np.min(xs)) for _, xs, _ in processed if len(xs))
    x_hi = max(float(np.max(xs)) for _, xs, _ in processed if len(xs))
    y_lo = min(float(np.min(ys)) for _, _, ys in processed if len(ys))
    y_hi = max(float(np.max(ys)) for _, _, ys in processed if len(ys))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W // 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" y2="{_H - _MB}" stroke="black"/>',
        f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" stroke="black"/>',
        f'<text x="{_ML}" y="{_H - 8}" font-size="11">{x_lo:.4g}</text>',
        f'<text x="{_W - _MR - 40}" y="{_H - 8}" font-size="11">{x_hi:.4g}</text>',
        f'<text x="4" y="{_H - _MB}" font-size="11">{y_lo:.4g}</text>',
        f'<text x="4" y="{_MT + 10}" font-size="11">{y_hi:.4g}</text>',
    ]
    for i, (label, xs, ys) in enumerate(processed):
        if len(xs) == 0:
            continue
        px = _scale(xs, x_lo, x_hi, _ML, _W - _MR)
        py = _scale(ys, y_lo, y_hi, _H - _MB, _MT)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        color = _PALETTE[i % len(_PALETTE)]
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(
            f'<text x="{_W - _MR - 100}" y="{_MT + 14 * (i + 1)}" font-size="11" '
            f'fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    path = Path(path)
    path.write_text("\n".join(parts) + "\n", encoding="utf-8", newline="\n")
    return path


def _downsample(M: np.ndarray, max_cells: int = 300) -> np.ndarray:
    """Block-average rows/columns down to at most max_cells each."""
    for axis in (0, 1):
        n = M.shape[axis]
        if n > max_cells:
            factor = int(np.ceil(n / max_cells))
            trim = (n // factor) * factor
            M = np.take(M, range(trim), axis=axis)
            shape = list(M.shape)
            shape[axis] = trim // factor
            shape.insert(axis + 1, factor)
            M = M.reshape(shape).mean(axis=axis + 1)
    return M


def svg_heatmap(M: np.ndarray, path, title: str = "") -> Path:
    """Rect-raster heatmap of a (rows=t, cols=x) matrix; grayscale by value."""
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        raise ValueError("cannot plot empty matrix")
    M = _downsample(M)
    lo, hi = float(np.nanmin(M)), float(np.nanmax(M))
    if hi - lo <= 0:
        hi = lo + 1.0
    rows, cols = M.shape
    cw = (_W - _ML - _MR) / cols
    ch = (_H - _MT - _MB) / rows
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W // 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
    ]
    for i in range(rows):
        for j in range(cols):
            v = M[i, j]
            if not np.isfinite(v):
                continue
            shade = int(round(255 * (1.0 - (v - lo) / (hi - lo))))
            color = f"rgb({shade},{shade},255)"
            x = _ML + j * cw
            yy = _MT + i * ch
            parts.append(
                f'<rect x="{x:.2f}" y="{yy:.2f}" width="{cw + 0.5:.2f}" '
                f'height="{ch + 0.5:.2f}" fill="{color}"/>'
            )
    parts.append("</svg>")
    path = Path(path)
    path.write_text("\n".join(parts) + "\n", encoding="utf-8", newline="\n")
    return path


def trajectory_heatmap_matrix(traj: Trajectory, n_x: int = 300):
    """Space-time raster of U from the snapshots, on a common x grid."""
    if not traj.snapshots:
        raise ValueError("trajectory has no snapshots")
    g_min = min(st.geom.g for st in traj.snapshots)
    h_max = max(st.geom.h for st in traj.snapshots)
    xg = np.linspace(g_min, h_max, n_x)
    rows = []
    for st in traj.snapshots:
        x = st.geom.to_x(st.y)
        row = np.interp(xg, x, st.m, left=0.0, right=0.0)
        rows.append(row)
    return np.array(rows), xg


def write_plots(traj: Trajectory, outdir) -> List[Path]:
    """Front-position, sup-norm, and space-time charts for one trajectory."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = [
        svg_line_chart(
            [("h", traj.t, traj.h), ("g", traj.t, traj.g)],
            outdir / "fronts.svg",
            title="front positions",
        ),
        svg_line_chart(
            [("sup U", traj.t, traj.sup_m), ("sup V", traj.t, traj.sup_n)],
            outdir / "norms.svg",
            title="sup norms",
        ),
    ]
    if traj.snapshots:
        M, _ = trajectory_heatmap_matrix(traj)
        written.append(svg_heatmap(M, outdir / "heatmap_U.svg", title="U(x,t)"))
    return written


def write_sweep_plot(entries, path) -> Path:
    """lambda vs L chart for a sweep result."""
    if not entries:
        raise ValueError("empty sweep")
    Ls = np.array([L for L, _ in entries])
    lams = np.array([e.lam for _, e in entries])
    return svg_line_chart([("lambda", Ls, lams)], path, title="principal exponent vs half-width")
