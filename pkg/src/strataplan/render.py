"""Figure rendering for planned trajectories and partition histograms.

Figures are diagnostic output written straight to files; the format follows
the file extension (``.svg`` gives vector output).  Rendering only consumes
already-sampled data, so it can never change what the planner produced.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.collections import LineCollection


def _trajectories(samples: list[dict]) -> np.ndarray:
    """Array (n_samples, n_points, 2) from exported path samples."""
    return np.array([s["points"] for s in samples], dtype=float)


def _split_ranges(xs: np.ndarray) -> list[tuple[int, int]]:
    """Index ranges of a polyline between wraps of the angular coordinate."""
    jumps = np.nonzero(np.abs(np.diff(xs)) > 0.5)[0]
    ranges = []
    start = 0
    for j in jumps:
        ranges.append((start, j + 1))
        start = j + 1
    ranges.append((start, len(xs)))
    return [(a, b) for a, b in ranges if b - a >= 2]


def _time_colored(ax, xs, ys, ts, cmap):
    pts = np.stack([xs, ys], axis=-1).reshape(-1, 1, 2)
    segs = np.concatenate([pts[:-1], pts[1:]], axis=1)
    lc = LineCollection(segs, cmap=cmap, array=ts[:-1], linewidths=1.6)
    ax.add_collection(lc)


def render_plan(export: dict, outfile: str) -> None:
    """Draw each point's trajectory with a time-gradient colour.

    The annulus is drawn as the flat rectangle [0, 1) x heights with wrapped
    polylines split at the seam; the disc view adds the unit circle.
    """
    samples = export["samples"]
    surface = export["surface"]
    traj = _trajectories(samples)
    ts = np.array([s["t"] for s in samples])
    cmaps = ["viridis", "plasma", "cividis", "magma", "inferno", "cool"]
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for j in range(traj.shape[1]):
        cmap = cmaps[j % len(cmaps)]
        xs, ys = traj[:, j, 0], traj[:, j, 1]
        if surface == "annulus":
            for a, b in _split_ranges(xs):
                _time_colored(ax, xs[a:b], ys[a:b], ts[a:b], cmap)
        else:
            _time_colored(ax, xs, ys, ts, cmap)
        ax.plot([xs[0]], [ys[0]], marker="o", color="black", markersize=4)
        ax.plot([xs[-1]], [ys[-1]], marker="x", color="red", markersize=6)
    if surface == "annulus":
        ax.set_xlim(-0.02, 1.02)
        ax.axvline(0.0, color="grey", linewidth=0.6, linestyle=":")
        ax.axvline(1.0, color="grey", linewidth=0.6, linestyle=":")
        ax.set_xlabel("angle (turns)")
        ax.set_ylabel("height")
    else:
        angles = np.linspace(0.0, 2.0 * np.pi, 256)
        ax.plot(np.cos(angles), np.sin(angles), color="grey", linewidth=0.6, linestyle=":")
        ax.set_aspect("equal")
        ax.set_xlabel("re")
        ax.set_ylabel("im")
    ax.relim()
    ax.autoscale_view()
    ax.set_title(f"{surface} plan, stratum {export.get('stratum', '?')}")
    fig.tight_layout()
    fig.savefig(outfile)
    plt.close(fig)


def render_partition(histogram: dict[str, int], surface: str, outfile: str) -> None:
    labels = sorted(histogram)
    counts = [histogram[k] for k in labels]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.bar(range(len(labels)), counts, color="steelblue")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=45, ha="right")
    ax.set_ylabel("pairs")
    ax.set_title(f"stratum histogram ({surface})")
    fig.tight_layout()
    fig.savefig(outfile)
    plt.close(fig)
