"""Symbolic piecewise paths of configurations.

A path is a chain of primitive moves, each of which can be re-evaluated
exactly at any local time in [0, 1].  Chaining is exact by construction:
every move stores its start and end point tuples, evaluation snaps to them at
the endpoints, and consecutive moves share the same configuration (the
planners thread the identical float values through).  Sampling happens only
in validation.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from .errors import TimeOutOfRange
from .geometry import (
    Configuration,
    Tolerances,
    DEFAULT_TOLERANCES,
    config_from_pairs,
)

TrackedPoints = tuple[tuple[float, float], ...]


class Move(ABC):
    """One primitive move: a continuous motion of all points over local time [0, 1].

    ``start_points`` / ``end_points`` are in tracked order: slot ``j`` is the
    same moving point at both ends.  Evaluation at 0 and 1 returns exactly the
    stored tuples.
    """

    kind: str
    surface: str
    start_points: TrackedPoints
    end_points: TrackedPoints

    @property
    def n(self) -> int:
        return len(self.start_points)

    def at(self, s: float) -> TrackedPoints:
        if s == 0.0:
            return self.start_points
        if s == 1.0:
            return self.end_points
        return self._interp(s)

    def at_many(self, s: np.ndarray) -> np.ndarray:
        """Vectorised evaluation; returns an array of shape (len(s), n, 2)."""
        out = self._interp_many(np.asarray(s, dtype=float))
        sel0 = s == 0.0
        sel1 = s == 1.0
        if np.any(sel0):
            out[sel0] = np.array(self.start_points)
        if np.any(sel1):
            out[sel1] = np.array(self.end_points)
        return out

    @abstractmethod
    def _interp(self, s: float) -> TrackedPoints:
        ...

    @abstractmethod
    def _interp_many(self, s: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def max_speed(self) -> float:
        """Upper bound for point speed per unit of local time."""

    def reverse(self) -> "Move":
        return ReverseMove(self)

    def describe(self) -> dict:
        return {"kind": self.kind, "surface": self.surface, "n": self.n}

    @property
    def start_config(self) -> Configuration:
        return config_from_pairs(self.surface, self.start_points)

    @property
    def end_config(self) -> Configuration:
        return config_from_pairs(self.surface, self.end_points)


class ReverseMove(Move):
    """Time-reversal of another move."""

    kind = "reverse-of"

    def __init__(self, base: Move):
        self.base = base
        self.surface = base.surface
        self.start_points = base.end_points
        self.end_points = base.start_points

    def _interp(self, s: float) -> TrackedPoints:
        return self.base.at(1.0 - s)

    def _interp_many(self, s: np.ndarray) -> np.ndarray:
        return self.base.at_many(1.0 - s)

    def max_speed(self) -> float:
        return self.base.max_speed()

    def reverse(self) -> Move:
        return self.base

    def describe(self) -> dict:
        d = self.base.describe()
        d["reversed"] = True
        return d


def _lerp(a: float, b: float, s: float) -> float:
    if a == b:
        return a
    return a * (1.0 - s) + b * s


@dataclass(frozen=True)
class PathPlan:
    """A chain of moves with per-move time weights summing to one.

    ``at(t)`` evaluates the whole path at global time ``t``: the move holding
    ``t`` is found through the cumulative weights and evaluated at the local
    time.  Endpoints and seams are exact because moves snap to their stored
    endpoint tuples.
    """

    segments: tuple[Move, ...]
    weights: tuple[float, ...] = ()
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        segs = tuple(self.segments)
        if not segs:
            raise ValueError("a path needs at least one segment")
        weights = tuple(self.weights) if self.weights else tuple([1.0] * len(segs))
        if len(weights) != len(segs):
            raise ValueError("one weight per segment required")
        if any(w <= 0 for w in weights):
            raise ValueError("segment weights must be positive")
        total = sum(weights)
        weights = tuple(w / total for w in weights)
        for prev, nxt in zip(segs, segs[1:]):
            if prev.end_config != nxt.start_config:
                raise ValueError("segments do not chain exactly")
        bounds = np.concatenate([[0.0], np.cumsum(weights)])
        bounds[-1] = 1.0
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "_bounds", bounds)

    @property
    def start(self) -> Configuration:
        return self.segments[0].start_config

    @property
    def goal(self) -> Configuration:
        return self.segments[-1].end_config

    @property
    def surface(self) -> str:
        return self.segments[0].surface

    @property
    def n(self) -> int:
        return self.segments[0].n

    def segment_and_local(self, t: float) -> tuple[int, float]:
        if not 0.0 <= t <= 1.0 or math.isnan(t):
            raise TimeOutOfRange(f"time {t} outside [0, 1]")
        bounds = self._bounds  # type: ignore[attr-defined]
        if t == 0.0:
            return 0, 0.0
        if t == 1.0:
            return len(self.segments) - 1, 1.0
        i = int(np.searchsorted(bounds, t, side="left")) - 1
        i = max(0, min(i, len(self.segments) - 1))
        width = bounds[i + 1] - bounds[i]
        s = (t - bounds[i]) / width
        return i, min(max(s, 0.0), 1.0)

    def at(self, t: float) -> Configuration:
        i, s = self.segment_and_local(t)
        return config_from_pairs(self.surface, self.segments[i].at(s))

    def reverse(self) -> "PathPlan":
        segs = tuple(seg.reverse() for seg in reversed(self.segments))
        return PathPlan(segs, tuple(reversed(self.weights)))

    def describe_segments(self) -> list[dict]:
        out = []
        for seg, w in zip(self.segments, self.weights):
            d = seg.describe()
            d["weight"] = w
            out.append(d)
        return out


def concat_plans(*plans: PathPlan, meta: dict | None = None) -> PathPlan:
    """Concatenate paths, preserving the relative duration of each part."""
    segments: list[Move] = []
    weights: list[float] = []
    share = 1.0 / len(plans)
    for plan in plans:
        segments.extend(plan.segments)
        weights.extend(w * share for w in plan.weights)
    return PathPlan(tuple(segments), tuple(weights), meta=dict(meta or {}))


def constant_plan(c: Configuration, meta: dict | None = None) -> PathPlan:
    from .moves import constant_move  # local import to avoid a cycle

    return PathPlan((constant_move(c),), meta=dict(meta or {}))


def evaluate_path(plan: PathPlan, t: float) -> Configuration:
    """Configuration at global time ``t`` under the segment time weights."""
    return plan.at(t)


@dataclass(frozen=True)
class ValidationReport:
    """Sampled health check of a path.

    ``min_separation`` is the smallest pairwise point distance seen over all
    samples, ``max_step_displacement`` the largest tracked point move between
    adjacent samples of one segment.
    """

    endpoints_ok: bool
    min_separation: float
    max_step_displacement: float
    n_samples: int

    @property
    def ok(self) -> bool:
        return self.endpoints_ok and self.min_separation > 0.0


def _pair_separations(points: np.ndarray, surface: str) -> np.ndarray:
    """Min pairwise distance per sample; ``points`` has shape (m, n, 2)."""
    m, n, _ = points.shape
    if n == 1:
        return np.full(m, np.inf)
    best = np.full(m, np.inf)
    for i in range(n):
        for j in range(i + 1, n):
            if surface == "annulus":
                d0 = np.abs(points[:, i, 0] - points[:, j, 0]) % 1.0
                d0 = np.minimum(d0, 1.0 - d0)
            else:
                d0 = points[:, i, 0] - points[:, j, 0]
            d1 = points[:, i, 1] - points[:, j, 1]
            best = np.minimum(best, np.hypot(d0, d1))
    return best


def _step_displacements(points: np.ndarray, surface: str) -> float:
    if points.shape[0] < 2:
        return 0.0
    d1 = np.diff(points[:, :, 1], axis=0)
    d0 = np.diff(points[:, :, 0], axis=0)
    if surface == "annulus":
        d0 = (d0 + 0.5) % 1.0 - 0.5
    return float(np.max(np.hypot(d0, d1)))


def validate_path(
    plan: PathPlan,
    tol: Tolerances = DEFAULT_TOLERANCES,
    start: Configuration | None = None,
    goal: Configuration | None = None,
) -> ValidationReport:
    """Sample the path on a uniform grid and report endpoint fidelity,
    worst-case separation and worst-case step displacement.

    Each segment is additionally sampled at its own endpoints so seams are
    always inspected.  Endpoint checks are exact configuration equality.
    """
    ts = np.linspace(0.0, 1.0, tol.n_time_samples)
    bounds = plan._bounds  # type: ignore[attr-defined]
    surface = plan.surface
    min_sep = np.inf
    max_step = 0.0
    total = 0
    for i, seg in enumerate(plan.segments):
        lo, hi = bounds[i], bounds[i + 1]
        inside = ts[(ts > lo) & (ts < hi)]
        local = (inside - lo) / (hi - lo)
        local = np.concatenate([[0.0], np.clip(local, 0.0, 1.0), [1.0]])
        pts = seg.at_many(local)
        total += len(local)
        min_sep = min(min_sep, float(np.min(_pair_separations(pts, surface))))
        max_step = max(max_step, _step_displacements(pts, surface))
    want_start = start if start is not None else plan.start
    want_goal = goal if goal is not None else plan.goal
    endpoints_ok = plan.at(0.0) == want_start and plan.at(1.0) == want_goal
    return ValidationReport(
        endpoints_ok=endpoints_ok,
        min_separation=min_sep,
        max_step_displacement=max_step,
        n_samples=total,
    )
