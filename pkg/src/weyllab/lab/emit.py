"""CSV tables, plot specifications and rendered figures from stored records."""
from __future__ import annotations

import csv
import json
import math
from collections import defaultdict
from pathlib import Path

import numpy as np

from .commands import REGISTRY, max_lp_exponent
from .store import ExperimentRecord


def format_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    if isinstance(v, (list, tuple)):
        return " ".join(format_cell(u) for u in v)
    return str(v)


def write_csv(path, command: str, records: list[ExperimentRecord], columns=None) -> Path:
    columns = columns or REGISTRY[command].columns
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(columns)
        for rec in records:
            w.writerow([format_cell(rec.results.get(c)) for c in columns])
    return path


def plot_spec(command: str, records: list[ExperimentRecord]) -> dict | None:
    rule = REGISTRY[command].plot
    if rule is None:
        return None
    groups: dict[tuple, list] = defaultdict(list)
    for rec in records:
        key = tuple(rec.results.get(g) for g in rule.group)
        y = rec.results.get(rule.y)
        if isinstance(y, (int, float)) and y > 0:
            groups[key].append((rec.results[rule.x], y))
    series = []
    for key, pts in sorted(groups.items(), key=lambda kv: str(kv[0])):
        pts.sort()
        meta = dict(zip(rule.group, key))
        s = {"name": ", ".join(f"{k}={format_cell(v)}" for k, v in meta.items()),
             "x": [p[0] for p in pts], "y": [p[1] for p in pts]}
        if rule.reference is not None and pts:
            slope, label = rule.reference(meta)
            x0, y0 = pts[0]
            s["reference"] = {"slope": slope, "label": label, "anchor": [x0, y0]}
        series.append(s)
    return {"command": command, "title": REGISTRY[command].help,
            "x": {"label": rule.xlabel, "log": rule.loglog},
            "y": {"label": rule.ylabel, "log": rule.loglog},
            "series": series}


def render_png(spec: dict, path) -> Path:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    for k, s in enumerate(spec["series"]):
        color = f"C{k % 10}"
        ax.plot(s["x"], s["y"], "o-", color=color, label=s["name"], ms=4)
        ref = s.get("reference")
        if ref and len(s["x"]) > 1:
            x0, y0 = ref["anchor"]
            xs = np.array([min(s["x"]), max(s["x"])], float)
            ax.plot(xs, y0 * (xs / x0) ** ref["slope"], "--", color=color, lw=1,
                    label=f"slope {ref['slope']:.3g}")
    if spec["x"]["log"]:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(spec["x"]["label"])
    ax.set_ylabel(spec["y"]["label"])
    if spec["series"]:
        ax.legend(fontsize=7, frameon=False)
    for side in ("top", "right"):
        ax.spines[side].set_visible(False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_field_png(npz_path, out_path) -> Path:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    data = np.load(npz_path)
    v = data["value"]
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    if v.ndim == 1:
        x = (np.arange(len(v)) + 0.5) / len(v)
        ax.plot(x, v, lw=0.6)
        ax.set_xlabel("x")
        ax.set_ylabel("sup_t |w_N(x,t)|")
    else:
        im = ax.imshow(v.T, origin="lower", extent=(0, 1, 0, 1), cmap="magma")
        fig.colorbar(im, ax=ax)
        ax.set_xlabel("x1")
        ax.set_ylabel("x2")
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return Path(out_path)


def emit_outputs(out_dir, command: str, records: list[ExperimentRecord], figures: bool = True) -> list[Path]:
    """<command>.csv always; <command>.plot.json and .png where a plot rule exists."""
    out_dir = Path(out_dir)
    written = [write_csv(out_dir / f"{command}.csv", command, records)]
    spec = plot_spec(command, records)
    if spec is not None:
        p = out_dir / f"{command}.plot.json"
        p.write_text(json.dumps(spec, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        written.append(p)
        if figures and spec["series"]:
            written.append(render_png(spec, out_dir / f"{command}.png"))
    if command == "field" and figures:
        for rec in records:
            npz = out_dir / rec.results["file"]
            if npz.exists():
                written.append(render_field_png(npz, npz.with_suffix(".png")))
    return written
