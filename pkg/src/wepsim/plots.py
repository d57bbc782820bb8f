"""Static SVG charts: lifetime curves, region lengths vs alpha, energy split.

Every chart is a self-contained SVG with a 1000x600 viewBox. Coordinates are
printed with two decimals so reruns produce identical files. Series colours
are fixed per protocol (see ``COLORS``). Bars carry ``data-*`` attributes
holding the plotted value.
"""

from __future__ import annotations

import math
from collections import defaultdict
from html import escape
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from wepsim.metrics import RunSummary, summarize

WIDTH, HEIGHT = 1000, 600
COLORS = {
    "WEP": "#d62728",
    "SEP": "#1f77b4",
    "LEACH": "#2ca02c",
    "PEGASIS": "#9467bd",
    "DIRECT": "#7f7f7f",
}
FALLBACK_COLORS = ("#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#bcbd22")
MAX_POINTS = 2000


def color_for(label: str, index: int = 0) -> str:
    return COLORS.get(label.upper(), FALLBACK_COLORS[index % len(FALLBACK_COLORS)])


def _f(x: float) -> str:
    return f"{x:.2f}"


def nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.floor(lo / step) * step
    ticks = []
    t = start
    while t <= hi + step * 1e-9:
        ticks.append(round(t, 10))
        t += step
    return ticks


class _Panel:
    def __init__(self, x0, y0, x1, y1, xmax, ymax, xmin=0.0, ymin=0.0):
        self.x0, self.y0, self.x1, self.y1 = x0, y0, x1, y1
        self.xmin, self.xmax = xmin, xmax if xmax > xmin else xmin + 1
        ymax = ymax if ymax > ymin else ymin + 1
        ticks = nice_ticks(ymin, ymax)
        step = ticks[1] - ticks[0]
        self.ymin, self.ymax = ymin, ticks[-1] if ticks[-1] >= ymax else ticks[-1] + step

    def px(self, x):
        return self.x0 + (x - self.xmin) / (self.xmax - self.xmin) * (self.x1 - self.x0)

    def py(self, y):
        return self.y1 - (y - self.ymin) / (self.ymax - self.ymin) * (self.y1 - self.y0)

    def axes(self, xlabel, ylabel, xticks=True) -> list[str]:
        out = [
            f'<line x1="{_f(self.x0)}" y1="{_f(self.y1)}" x2="{_f(self.x1)}" y2="{_f(self.y1)}" stroke="#000"/>',
            f'<line x1="{_f(self.x0)}" y1="{_f(self.y0)}" x2="{_f(self.x0)}" y2="{_f(self.y1)}" stroke="#000"/>',
        ]
        for t in nice_ticks(self.ymin, self.ymax):
            if t > self.ymax:
                break
            y = self.py(t)
            out.append(f'<line x1="{_f(self.x0 - 5)}" y1="{_f(y)}" x2="{_f(self.x0)}" y2="{_f(y)}" stroke="#000"/>')
            out.append(f'<text x="{_f(self.x0 - 8)}" y="{_f(y + 4)}" text-anchor="end">{t:g}</text>')
        if xticks:
            for t in nice_ticks(self.xmin, self.xmax):
                if t > self.xmax:
                    break
                x = self.px(t)
                out.append(f'<line x1="{_f(x)}" y1="{_f(self.y1)}" x2="{_f(x)}" y2="{_f(self.y1 + 5)}" stroke="#000"/>')
                out.append(f'<text x="{_f(x)}" y="{_f(self.y1 + 20)}" text-anchor="middle">{t:g}</text>')
        cx = (self.x0 + self.x1) / 2
        cy = (self.y0 + self.y1) / 2
        out.append(f'<text x="{_f(cx)}" y="{_f(self.y1 + 45)}" text-anchor="middle">{escape(xlabel)}</text>')
        out.append(
            f'<text x="{_f(self.x0 - 55)}" y="{_f(cy)}" text-anchor="middle" '
            f'transform="rotate(-90 {_f(self.x0 - 55)} {_f(cy)})">{escape(ylabel)}</text>'
        )
        return out


def _document(title: str, body: list[str]) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">\n'
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#fff"/>\n'
        f'<text x="{WIDTH / 2:.2f}" y="28" text-anchor="middle" font-size="16">{escape(title)}</text>\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def _legend(labels: Sequence[str], x: float, y: float) -> list[str]:
    out = ['<g class="legend">']
    for i, label in enumerate(labels):
        yy = y + 20 * i
        out.append(f'<rect x="{_f(x)}" y="{_f(yy - 9)}" width="14" height="10" fill="{color_for(label, i)}"/>')
        out.append(f'<text x="{_f(x + 20)}" y="{_f(yy)}">{escape(label)}</text>')
    out.append("</g>")
    return out


def mean_alive_curve(runs: Sequence) -> np.ndarray:
    """Mean alive count per round across runs, starting at round 0 (= n).

    Runs that stopped earlier are padded with their last value.
    """
    length = max(r.final_round for r in runs)
    rows = []
    for r in runs:
        series = np.concatenate(([r.n], np.asarray(r.alive[: r.final_round], dtype=float)))
        pad = length + 1 - series.size
        rows.append(np.pad(series, (0, pad), mode="edge") if pad else series)
    return np.mean(rows, axis=0)


def lifetime_svg(groups: Mapping[str, Sequence], title: str = "Alive nodes per round") -> str:
    curves = {label: mean_alive_curve(runs) for label, runs in groups.items()}
    xmax = max(c.size - 1 for c in curves.values())
    ymax = max(float(c.max()) for c in curves.values())
    panel = _Panel(90, 60, 820, 520, xmax, ymax)
    body = panel.axes("Round", "Alive nodes")
    for i, (label, curve) in enumerate(curves.items()):
        idx = np.arange(curve.size)
        if curve.size > MAX_POINTS:
            idx = np.unique(np.concatenate((np.linspace(0, curve.size - 1, MAX_POINTS).astype(int), [curve.size - 1])))
        pts = " ".join(f"{_f(panel.px(j))},{_f(panel.py(curve[j]))}" for j in idx)
        body.append(
            f'<polyline class="series" data-label="{escape(label)}" fill="none" '
            f'stroke="{color_for(label, i)}" stroke-width="2" points="{pts}"/>'
        )
    body += _legend(list(curves), 840, 80)
    return _document(title, body)


def regions_svg(rows: Sequence[Mapping], title: str = "Stable and unstable region length") -> str:
    """Grouped bars; each row has ``alpha``, ``protocol``, ``stable_len`` and
    ``unstable_len`` (means over seeds, ``None`` when undefined)."""
    alphas = sorted({float(r["alpha"]) for r in rows})
    protocols = list(dict.fromkeys(r["protocol"] for r in rows))
    table = {(float(r["alpha"]), r["protocol"]): r for r in rows}
    body = []
    for key, label, x0 in (
        ("stable_len", "Stable region (rounds)", 90), ("unstable_len", "Unstable region (rounds)", 500)
    ):
        vals = [r[key] for r in rows if r[key] is not None]
        panel = _Panel(x0, 60, x0 + 330, 520, len(alphas), max(vals, default=1.0))
        body += panel.axes("alpha", label, xticks=False)
        slot = (panel.x1 - panel.x0) / len(alphas)
        bar_w = slot * 0.8 / max(1, len(protocols))
        for gi, a in enumerate(alphas):
            gx = panel.x0 + gi * slot + slot * 0.1
            body.append(f'<text x="{_f(panel.x0 + (gi + 0.5) * slot)}" y="{_f(panel.y1 + 20)}" text-anchor="middle">{a:g}</text>')
            for pi, proto in enumerate(protocols):
                row = table.get((a, proto))
                if row is None or row[key] is None:
                    continue
                v = float(row[key])
                y = panel.py(v)
                body.append(
                    f'<rect class="bar" data-region="{key}" data-protocol="{escape(proto)}" data-alpha="{a:g}" '
                    f'data-value="{v!r}" x="{_f(gx + pi * bar_w)}" y="{_f(y)}" width="{_f(bar_w)}" '
                    f'height="{_f(panel.y1 - y)}" fill="{color_for(proto, pi)}"/>'
                )
    body += _legend(protocols, 870, 80)
    return _document(title, body)


def energy_rows(groups: Mapping[str, Sequence[RunSummary]]) -> list[dict]:
    rows = []
    for label, summaries in groups.items():
        stable = float(np.mean([s.stable_energy for s in summaries]))
        unstable = float(np.mean([s.unstable_energy for s in summaries]))
        rows.append({"protocol": label, "stable_energy_j": stable, "unstable_energy_j": unstable})
    return rows


def energy_svg(groups: Mapping[str, Sequence[RunSummary]], title: str = "Energy consumed per region") -> str:
    rows = energy_rows(groups)
    ymax = max(r["stable_energy_j"] + r["unstable_energy_j"] for r in rows)
    panel = _Panel(90, 60, 820, 520, len(rows), ymax)
    body = panel.axes("Protocol", "Energy consumed (J)", xticks=False)
    slot = (panel.x1 - panel.x0) / len(rows)
    for i, r in enumerate(rows):
        x = panel.x0 + i * slot + slot * 0.2
        w = slot * 0.6
        base = 0.0
        for region, opacity in (("stable", "1"), ("unstable", "0.45")):
            v = r[f"{region}_energy_j"]
            y_top, y_bot = panel.py(base + v), panel.py(base)
            body.append(
                f'<rect class="bar" data-region="{region}" data-protocol="{escape(r["protocol"])}" '
                f'data-value="{v!r}" x="{_f(x)}" y="{_f(y_top)}" width="{_f(w)}" '
                f'height="{_f(y_bot - y_top)}" fill="{color_for(r["protocol"], i)}" fill-opacity="{opacity}"/>'
            )
            base += v
        body.append(f'<text x="{_f(x + w / 2)}" y="{_f(panel.y1 + 20)}" text-anchor="middle">{escape(r["protocol"])}</text>')
    body.append(f'<rect x="840" y="71" width="14" height="10" fill="#555"/><text x="860" y="80">stable region</text>')
    body.append(f'<rect x="840" y="91" width="14" height="10" fill="#555" fill-opacity="0.45"/><text x="860" y="100">unstable region</text>')
    return _document(title, body)


def region_rows(summaries_by_point: Mapping[tuple, Sequence[RunSummary]]) -> list[dict]:
    """``summaries_by_point`` maps ``(protocol, alpha, m)`` to the seed summaries."""
    rows = []
    for (proto, alpha, m), summaries in summaries_by_point.items():
        def mean(name):
            vals = [getattr(s, name) for s in summaries if getattr(s, name) is not None]
            return float(np.mean(vals)) if vals else None

        rows.append({
            "protocol": proto,
            "alpha": alpha,
            "m": m,
            "seeds": len(summaries),
            "fnd": mean("fnd"),
            "hnd": mean("hnd"),
            "lnd": mean("lnd"),
            "stable_len": mean("stable_len"),
            "unstable_len": mean("unstable_len"),
            "stable_energy_fraction": mean("stable_energy_fraction"),
        })
    return rows


def emit_plots(batch, path) -> list[Path]:
    """Write lifetime.svg, regions.svg and energy.svg into directory ``path``.

    ``batch`` is a list of RunResults or a mapping label -> list of runs.
    Runs are grouped by protocol when given as a flat list.
    """
    if isinstance(batch, Mapping):
        groups = {label: list(runs) for label, runs in batch.items() if runs}
    else:
        groups = defaultdict(list)
        for run in batch:
            groups[run.protocol].append(run)
        groups = dict(groups)
    if not groups:
        raise ValueError("emit_plots needs at least one run")

    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    summaries = {label: [summarize(r) for r in runs] for label, runs in groups.items()}
    points = {
        (label, runs[0].config.hetero.alpha, runs[0].config.hetero.m): summaries[label]
        for label, runs in groups.items()
    }
    files = {
        "lifetime.svg": lifetime_svg(groups),
        "regions.svg": regions_svg(region_rows(points)),
        "energy.svg": energy_svg(summaries),
    }
    written = []
    for name, text in files.items():
        p = out / name
        p.write_text(text, encoding="utf-8")
        written.append(p)
    return written
