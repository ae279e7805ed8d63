"""Render run reports: figures and a summary table derived from a trace."""
from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # file output only, no display server
import matplotlib.pyplot as plt

from .trace import EventKind, Trace

_SNAPSHOT_COLUMNS = (
    "tick",
    "x",
    "y",
    "heading",
    "motion",
    "light",
    "horn",
    "avoidance",
    "last_distance",
    "separation",
)


def snapshot_rows(trace: Trace) -> list[dict]:
    rows = []
    for event in trace.events:
        if event.kind is not EventKind.SNAPSHOT:
            continue
        p = event.payload
        rows.append(
            {
                "tick": p["tick"],
                "x": p["pose"]["x"],
                "y": p["pose"]["y"],
                "heading": p["pose"]["heading"],
                "motion": p["motion"],
                "light": p["light"],
                "horn": p["horn"],
                "avoidance": p["avoidance"],
                "last_distance": p["last_distance"],
                "separation": p["separation"],
            }
        )
    return rows


def write_summary_csv(trace: Trace, path: Path) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=_SNAPSHOT_COLUMNS)
        writer.writeheader()
        for row in snapshot_rows(trace):
            writer.writerow(row)


def _draw_arena(ax, arena: dict) -> None:
    xmin, ymin, xmax, ymax = arena["bounds"]
    ax.plot(
        [xmin, xmax, xmax, xmin, xmin],
        [ymin, ymin, ymax, ymax, ymin],
        color="black",
        linewidth=1.2,
    )
    for (ax_, ay_), (bx_, by_) in arena["obstacles"]:
        ax.plot([ax_, bx_], [ay_, by_], color="firebrick", linewidth=2.5)
    cx, cy = arena["controller"]
    ax.plot(cx, cy, marker="^", color="tab:blue", markersize=8, linestyle="none", label="controller")


def trajectory_figure(trace: Trace, rows: list[dict], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 6))
    _draw_arena(ax, trace.header["arena"])
    if rows:
        xs = [r["x"] for r in rows]
        ys = [r["y"] for r in rows]
        ax.plot(xs, ys, color="tab:green", linewidth=1.5, label="path")
        ax.plot(xs[0], ys[0], marker="o", color="tab:green", linestyle="none", label="start")
        last = rows[-1]
        ax.annotate(
            "",
            xy=(
                last["x"] + 0.2 * math.cos(last["heading"]),
                last["y"] + 0.2 * math.sin(last["heading"]),
            ),
            xytext=(last["x"], last["y"]),
            arrowprops={"arrowstyle": "->", "color": "tab:green"},
        )
    ax.set_aspect("equal")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_title(f"trajectory: {trace.header.get('name', 'run')}")
    ax.legend(loc="upper right", fontsize=8)
    fig.savefig(path, dpi=120)
    plt.close(fig)


def distance_figure(trace: Trace, rows: list[dict], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(7, 3.5))
    if rows:
        ax.plot(
            [r["tick"] for r in rows],
            [r["last_distance"] for r in rows],
            color="tab:purple",
            linewidth=1.2,
            label="measured distance",
        )
    safety = trace.header.get("safety_distance")
    if safety is not None:
        ax.axhline(safety, color="firebrick", linestyle="--", linewidth=1.0, label="safety threshold")
    ax.set_xlabel("tick")
    ax.set_ylabel("distance (cm)")
    ax.set_title("ultrasonic range")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


_MOTION_LEVELS = {"Idle": 0, "Forward": 1, "Backward": 2, "Left": 3, "Right": 4}


def actuator_figure(trace: Trace, rows: list[dict], path: Path) -> None:
    fig, axes = plt.subplots(3, 1, figsize=(7, 5), sharex=True)
    if rows:
        ticks = [r["tick"] for r in rows]
        axes[0].step(
            ticks,
            [_MOTION_LEVELS.get(r["motion"], 0) for r in rows],
            where="post",
            color="tab:green",
        )
        axes[1].step(ticks, [int(r["light"]) for r in rows], where="post", color="tab:orange")
        axes[2].step(ticks, [int(r["horn"]) for r in rows], where="post", color="tab:blue")
    axes[0].set_yticks(list(_MOTION_LEVELS.values()), list(_MOTION_LEVELS.keys()))
    axes[0].set_ylabel("motion")
    axes[1].set_yticks([0, 1], ["off", "on"])
    axes[1].set_ylabel("light")
    axes[2].set_yticks([0, 1], ["off", "on"])
    axes[2].set_ylabel("horn")
    axes[2].set_xlabel("tick")
    axes[0].set_title("actuator timeline")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_report(trace: Trace, out_dir: Path) -> list[Path]:
    """Write all figures and the summary table; returns the created paths."""
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = snapshot_rows(trace)
    outputs = []
    for name, renderer in (
        ("trajectory.png", trajectory_figure),
        ("distance.png", distance_figure),
        ("actuators.png", actuator_figure),
    ):
        target = out_dir / name
        renderer(trace, rows, target)
        outputs.append(target)
    summary = out_dir / "summary.csv"
    write_summary_csv(trace, summary)
    outputs.append(summary)
    return outputs
