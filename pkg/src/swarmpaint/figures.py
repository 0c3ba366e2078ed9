"""Matplotlib renderings of traces: trajectory and coverage figures.

Figures are written as SVG with a fixed hash salt and no embedded date, so
rendering the same trace twice produces byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "swarmpaint"

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .engine import PAINT_DONE, PAINT_START, Trace  # noqa: E402
from .geometry import WorldRect  # noqa: E402
from .verify import CoverageRaster, paint_segments  # noqa: E402


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def _world_axes(ax, world: WorldRect, n: int):
    ax.add_patch(
        plt.Rectangle(
            (world.x_min, world.y_min),
            world.length,
            world.breadth,
            fill=False,
            edgecolor="black",
            linewidth=1.2,
        )
    )
    h = world.breadth / n
    for k in range(1, n):
        ax.axhline(world.y_min + k * h, color="0.75", linewidth=0.6, linestyle="--")
    ax.set_xlim(world.x_min - 2, world.x_max + 2)
    ax.set_ylim(world.y_min - 2, world.y_max + 2)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")


def save_trajectory_figure(trace: Trace, path: str | Path) -> Path:
    """One polyline per robot: solid while moving into place, faint while
    painting, with start markers and strip boundaries shaded in."""
    world = WorldRect(**trace.config["world"])
    n = trace.n_robots
    fig, ax = plt.subplots(figsize=(7, 5.5))
    _world_axes(ax, world, n)
    cmap = plt.get_cmap("tab10")
    for i in range(n):
        color = cmap(i % 10)
        pts = np.asarray(trace.paths[i])
        starts = trace.events_of(PAINT_START, i)
        t_paint = starts[0].time if starts else np.inf
        pre = pts[pts[:, 0] <= t_paint]
        post = pts[pts[:, 0] >= t_paint]
        ax.plot(pre[:, 1], pre[:, 2], color=color, linewidth=1.6, label=f"robot {i}")
        if len(post) > 1:
            ax.plot(post[:, 1], post[:, 2], color=color, linewidth=0.7, alpha=0.45)
        ax.plot(pts[0, 1], pts[0, 2], "o", color=color, markersize=5)
        ax.annotate(str(i), (pts[0, 1], pts[0, 2]), textcoords="offset points", xytext=(4, 4), fontsize=8)
    ax.legend(loc="upper right", fontsize=7, framealpha=0.9)
    ax.set_title(f"{trace.config['name']}: trajectories")
    return _save(fig, path)


def save_coverage_figure(trace: Trace, path: str | Path) -> Path:
    """Painted-cell counts over the world grid (0 = unpainted)."""
    world = WorldRect(**trace.config["world"])
    eta = trace.config["params"]["eta"]
    n = trace.n_robots
    raster = CoverageRaster.build(world, n, eta)
    for i in range(n):
        mask = np.zeros_like(raster.counts, dtype=bool)
        for a, b in paint_segments(trace, i):
            raster.mark_brush(world, mask, a, b, eta)
        raster.counts += mask
    fig, ax = plt.subplots(figsize=(7, 5.5))
    im = ax.imshow(
        raster.counts,
        origin="lower",
        extent=(world.x_min, world.x_max, world.y_min, world.y_max),
        cmap="viridis",
        vmin=0,
        vmax=max(2, int(raster.counts.max())),
        interpolation="nearest",
    )
    h = world.breadth / n
    for k in range(1, n):
        ax.axhline(world.y_min + k * h, color="white", linewidth=0.5, linestyle="--")
    fig.colorbar(im, ax=ax, label="robots painting cell")
    done = len(trace.events_of(PAINT_DONE))
    ax.set_title(f"{trace.config['name']}: coverage ({done}/{n} strips painted)")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    return _save(fig, path)
