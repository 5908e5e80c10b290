"""Collision-free planner for n unordered points on the annulus.

The pair space is stratified by the number of distinct circle angles the two
configurations occupy together (the degree, between 1 and 2n), refined by the
per-fibre count surplus vector taken up to cyclic rotation.  Planning first
redistributes surplus points fibre by fibre in the positive circle direction
until every fibre holds equally many start and goal points, then finishes
with rank-matched linear interpolation inside the fibres.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    AmbiguousGrouping,
    IterationCapExceeded,
    PreconditionViolated,
    SeparationTooSmall,
    SizeMismatch,
)
from .geometry import (
    Configuration,
    DEFAULT_TOLERANCES,
    MIN_INPUT_SEPARATION,
    Tolerances,
    canonicalize,
    circle_gap,
    min_separation,
    signed_arc,
    AnnulusPoint,
)
from .moves import AnnulusMove
from .paths import PathPlan


def _circular_groups(vals: Sequence[float], tau: float) -> tuple[list[list[int]], list[float]]:
    """Cluster angles whose consecutive circular gaps are at most ``tau``.

    Returns groups of indices into ``vals`` plus one representative angle per
    group (its smallest member), both ordered by representative.  A chain
    spanning more than ``10 * tau`` means the merge is not transitive enough
    to be meaningful and raises :class:`AmbiguousGrouping`.
    """
    k = len(vals)
    if k == 0:
        return [], []
    order = sorted(range(k), key=lambda i: vals[i])
    if k == 1:
        return [[order[0]]], [vals[order[0]]]
    svals = [vals[i] for i in order]
    fgap = [svals[j + 1] - svals[j] for j in range(k - 1)]
    fgap.append(svals[0] + 1.0 - svals[-1])
    cuts = [j for j in range(k) if fgap[j] > tau]
    if not cuts:
        raise AmbiguousGrouping("angles chain all the way around the circle")
    groups: list[list[int]] = []
    run: list[int] = []
    idx = (cuts[-1] + 1) % k
    for _ in range(k):
        run.append(order[idx])
        if fgap[idx] > tau:
            groups.append(run)
            run = []
        idx = (idx + 1) % k
    reps: list[float] = []
    for g in groups:
        gv = [vals[i] for i in g]
        span = (max(gv) - min(gv)) % 1.0
        span = min(span, 1.0 - span) if len(gv) > 1 else 0.0
        if span > 10.0 * tau:
            raise AmbiguousGrouping(
                f"near-coincident angles span {span:.3e} > 10 * tau_angle"
            )
        reps.append(min(gv))
    pairs = sorted(zip(reps, groups))
    return [g for _, g in pairs], [r for r, _ in pairs]


def _require_annulus(c: Configuration) -> None:
    if c.kind != "annulus":
        raise TypeError("annulus configuration required")


def angular_support(c: Configuration, tol: Tolerances = DEFAULT_TOLERANCES) -> tuple[float, ...]:
    """Distinct circle angles occupied by ``c``, merged within ``tau_angle``."""
    _require_annulus(c)
    _, reps = _circular_groups([p.theta for p in c.points], tol.tau_angle)
    return tuple(reps)


@dataclass(frozen=True)
class FiberDecomposition:
    """Shared fibre angles of a pair with per-fibre point counts.

    ``imbalance[i]`` is the surplus of start points over goal points on fibre
    ``i``; the entries always sum to zero.
    """

    angles: tuple[float, ...]
    x_counts: tuple[int, ...]
    y_counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if not (len(self.angles) == len(self.x_counts) == len(self.y_counts)):
            raise ValueError("fibre arrays of different lengths")
        if sum(self.x_counts) != sum(self.y_counts):
            raise ValueError("fibre counts disagree on total size")

    @property
    def degree(self) -> int:
        return len(self.angles)

    @property
    def imbalance(self) -> tuple[int, ...]:
        return tuple(a - b for a, b in zip(self.x_counts, self.y_counts))


@dataclass(frozen=True)
class AnnulusStratum:
    """Planner rule label: the degree plus the cyclic class of the surplus vector."""

    degree: int
    imbalance_class: tuple[int, ...]

    @property
    def label(self) -> str:
        body = ",".join(str(v) for v in self.imbalance_class)
        return f"L{self.degree}[{body}]"


def _pair_fibers(
    x: Configuration, y: Configuration, tol: Tolerances
) -> tuple[list[float], list[list[int]], list[list[int]]]:
    """Joint fibre representatives plus per-fibre point indices of each side."""
    vals = [p.theta for p in x.points] + [p.theta for p in y.points]
    groups, reps = _circular_groups(vals, tol.tau_angle)
    nx = x.n
    x_groups: list[list[int]] = [[] for _ in reps]
    y_groups: list[list[int]] = [[] for _ in reps]
    for fi, g in enumerate(groups):
        for i in g:
            if i < nx:
                x_groups[fi].append(i)
            else:
                y_groups[fi].append(i - nx)
    return reps, x_groups, y_groups


def _check_pair(x: Configuration, y: Configuration) -> None:
    _require_annulus(x)
    _require_annulus(y)
    if x.n != y.n:
        raise SizeMismatch(f"configurations of size {x.n} and {y.n}")


def degree(x: Configuration, y: Configuration, tol: Tolerances = DEFAULT_TOLERANCES) -> int:
    """Number of distinct circle angles occupied by the pair together."""
    _check_pair(x, y)
    reps, _, _ = _pair_fibers(x, y, tol)
    return len(reps)


def fiber_decomposition(
    x: Configuration, y: Configuration, tol: Tolerances = DEFAULT_TOLERANCES
) -> FiberDecomposition:
    _check_pair(x, y)
    reps, xg, yg = _pair_fibers(x, y, tol)
    return FiberDecomposition(
        angles=tuple(reps),
        x_counts=tuple(len(g) for g in xg),
        y_counts=tuple(len(g) for g in yg),
    )


def _lex_min_rotation(v: tuple[int, ...]) -> tuple[int, ...]:
    return min(tuple(v[i:] + v[:i]) for i in range(len(v)))


def imbalance_class(fd: FiberDecomposition) -> AnnulusStratum:
    """Canonical cyclic representative of the surplus vector."""
    return AnnulusStratum(fd.degree, _lex_min_rotation(fd.imbalance))


def stratum_of(
    x: Configuration, y: Configuration, tol: Tolerances = DEFAULT_TOLERANCES
) -> AnnulusStratum:
    return imbalance_class(fiber_decomposition(x, y, tol))


def interpolate_fiberwise(
    x: Configuration,
    y: Configuration,
    fd: FiberDecomposition,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> PathPlan:
    """Move each point of ``x`` to a goal point on its own fibre, matching by
    height rank; the order-preserving matching keeps the motion collision-free.
    """
    if any(d != 0 for d in fd.imbalance):
        raise PreconditionViolated("fibrewise interpolation needs zero surplus everywhere")
    _check_pair(x, y)
    reps, xg, yg = _pair_fibers(x, y, tol)
    start = x.coordinate_pairs()
    end: list[tuple[float, float]] = [None] * x.n  # type: ignore[list-item]
    dtheta = [0.0] * x.n
    for fi in range(len(reps)):
        xs = sorted(xg[fi], key=lambda i: x.points[i].height)
        ys = sorted(yg[fi], key=lambda i: y.points[i].height)
        if len(xs) != len(ys):
            raise PreconditionViolated("fibre counts disagree with the given decomposition")
        for slot, yi in zip(xs, ys):
            target = y.points[yi]
            end[slot] = (target.theta, target.height)
            dtheta[slot] = signed_arc(x.points[slot].theta, target.theta)
    move = AnnulusMove("fiberwise-linear", start, tuple(end), dtheta)
    return PathPlan((move,))


def redistribution_step(
    x: Configuration,
    fd: FiberDecomposition,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> tuple[PathPlan, Configuration]:
    """One simultaneous surplus transport step.

    On every fibre with positive surplus the topmost surplus points slide in
    the positive circle direction to the next fibre, landing as a block one
    unit above everything already there, keeping their order and mutual
    height gaps.  Everything else stays put.
    """
    if all(d == 0 for d in fd.imbalance):
        raise PreconditionViolated("no surplus left to redistribute")
    _require_annulus(x)
    reps = fd.angles
    k = len(reps)
    guard = 10.0 * tol.tau_angle
    fibre_slots: list[list[int]] = [[] for _ in range(k)]
    for slot, p in enumerate(x.points):
        fi = min(range(k), key=lambda i: circle_gap(p.theta, reps[i]))
        if circle_gap(p.theta, reps[fi]) > guard:
            raise PreconditionViolated("point does not lie on any fibre of the decomposition")
        fibre_slots[fi].append(slot)
    for fi in range(k):
        fibre_slots[fi].sort(key=lambda i: x.points[i].height)
        if len(fibre_slots[fi]) != fd.x_counts[fi]:
            raise PreconditionViolated("fibre occupancy disagrees with the decomposition")
    tops = [
        (x.points[slots[-1]].height if slots else None) for slots in fibre_slots
    ]
    start = x.coordinate_pairs()
    end = list(start)
    dtheta = [0.0] * x.n
    for fi, surplus in enumerate(fd.imbalance):
        if surplus <= 0:
            continue
        movers = fibre_slots[fi][-surplus:]
        target = (fi + 1) % k
        target_angle = reps[target]
        top = tops[target]
        anchor = 1.0 + max(0.0, top) if top is not None else 1.0
        base = x.points[movers[0]].height
        for slot in movers:
            end[slot] = (target_angle, anchor + (x.points[slot].height - base))
            dtheta[slot] = (target_angle - x.points[slot].theta) % 1.0
    move = AnnulusMove("arc-slide", start, tuple(end), dtheta)
    x_next = canonicalize(AnnulusPoint(a, b) for a, b in end)
    return PathPlan((move,)), x_next


def plan(
    x: Configuration, y: Configuration, tol: Tolerances = DEFAULT_TOLERANCES
) -> PathPlan:
    """Collision-free path from ``x`` to ``y``.

    Surplus redistribution steps run until every fibre is balanced (the
    degree never increases along the way), then one fibrewise interpolation
    finishes the job.  The plan's ``meta`` records the stratum label and the
    full iteration trace.
    """
    _check_pair(x, y)
    for c in (x, y):
        if min_separation(c) < MIN_INPUT_SEPARATION:
            raise SeparationTooSmall(
                f"minimum separation below {MIN_INPUT_SEPARATION}"
            )
    fd = fiber_decomposition(x, y, tol)
    strat = imbalance_class(fd)
    segments = []
    current = x
    degrees = [fd.degree]
    imbalances = [fd.imbalance]
    iterations = 0
    cap = 4 * (x.n + 2 * x.n)
    while any(d != 0 for d in fd.imbalance):
        iterations += 1
        if iterations > cap:
            raise IterationCapExceeded(
                f"redistribution did not settle within {cap} steps"
            )
        step_plan, current = redistribution_step(current, fd, tol)
        segments.append(step_plan.segments[0])
        fd_next = fiber_decomposition(current, y, tol)
        if fd_next.degree > fd.degree:
            raise RuntimeError("degree increased across a redistribution step")
        fd = fd_next
        degrees.append(fd.degree)
        imbalances.append(fd.imbalance)
    tail = interpolate_fiberwise(current, y, fd, tol)
    segments.append(tail.segments[0])
    meta = {
        "surface": "annulus",
        "stratum": strat.label,
        "degree": strat.degree,
        "imbalance_class": list(strat.imbalance_class),
        "iterations": iterations,
        "degrees": degrees,
        "imbalances": [list(v) for v in imbalances],
    }
    result = PathPlan(tuple(segments), meta=meta)
    if result.goal != y or result.start != x:
        raise RuntimeError("planned path endpoints drifted from the inputs")
    return result
