"""Random instance generation, batch property drivers and path export.

Everything here is deterministic given a seed.  Random geometry uses the
stdlib Mersenne Twister (``random.Random``) point by point; the bulk degree
census uses numpy's PCG64 for vectorised sampling.  Structured pair samplers
deliberately produce the measure-zero coincidences (shared fibres, collinear
triples, matched orientations) that uniform sampling would never hit, so
every planner rule actually occurs.
"""

from __future__ import annotations

import cmath
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import annulus as annulus_planner
from . import disc as disc_planner
from .braids import BraidWord
from .errors import DuplicatePoint, StratumEscape
from .geometry import (
    AnnulusPoint,
    Configuration,
    DEFAULT_TOLERANCES,
    PlanePoint,
    Tolerances,
    canonicalize,
    matched_distance,
    min_separation,
)
from .paths import PathPlan, ValidationReport, validate_path

#: Random instances are resampled until they clear this pairwise separation.
SEPARATION_FLOOR = 1e-3


# ---------------------------------------------------------------------------
# Random configurations and pairs.


def _annulus_points(rng: random.Random, n: int) -> list[AnnulusPoint]:
    return [AnnulusPoint(rng.random(), rng.uniform(-10.0, 10.0)) for _ in range(n)]


def _disc_points(rng: random.Random, n: int) -> list[PlanePoint]:
    pts = []
    while len(pts) < n:
        re = rng.uniform(-10.0, 10.0)
        im = rng.uniform(-10.0, 10.0)
        if re * re + im * im <= 100.0:
            pts.append(PlanePoint(re, im))
    return pts


def _well_separated(points, floor: float = SEPARATION_FLOOR) -> Configuration | None:
    try:
        c = canonicalize(points)
    except DuplicatePoint:
        return None
    if min_separation(c) < floor:
        return None
    return c


def random_configuration(surface: str, n: int, seed) -> Configuration:
    """Deterministic random configuration with separation at least 1e-3;
    annulus heights lie in [-10, 10], disc points in the radius-10 disc."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(seed)
    draw = _annulus_points if surface == "annulus" else _disc_points
    if surface not in ("annulus", "disc"):
        raise ValueError(f"unknown surface {surface!r}")
    while True:
        c = _well_separated(draw(rng, n))
        if c is not None:
            return c


def random_pair(surface: str, n: int, seed) -> tuple[Configuration, Configuration]:
    return (
        random_configuration(surface, n, f"{seed}:x"),
        random_configuration(surface, n, f"{seed}:y"),
    )


def structured_annulus_pair(
    n: int, rng: random.Random
) -> tuple[Configuration, Configuration]:
    """Pair with angle coincidences: both sides draw their angles from a small
    shared pool, so low degrees and stacked fibres actually occur."""
    while True:
        k = rng.randint(1, 2 * n)
        pool = [rng.random() for _ in range(k)]
        x = _well_separated(
            [AnnulusPoint(rng.choice(pool), rng.uniform(-10.0, 10.0)) for _ in range(n)]
        )
        y = _well_separated(
            [AnnulusPoint(rng.choice(pool), rng.uniform(-10.0, 10.0)) for _ in range(n)]
        )
        if x is not None and y is not None:
            return x, y


def line_configuration(rng: random.Random) -> Configuration:
    """Three well-separated points on a random line inside the radius-10 disc."""
    while True:
        base = complex(rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0))
        direction = cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        pts = [base + rng.uniform(-5.0, 5.0) * direction for _ in range(3)]
        c = _well_separated([PlanePoint.from_complex(z) for z in pts])
        if c is not None and max(abs(z) for z in pts) <= 10.0:
            return c


def triangle_configuration(
    rng: random.Random, tol: Tolerances = DEFAULT_TOLERANCES
) -> Configuration:
    """A random non-collinear 3-point configuration."""
    while True:
        c = _well_separated(_disc_points(rng, 3))
        if c is not None and not disc_planner.is_collinear(c, tol):
            return c


def structured_disc_pair(
    rng: random.Random, tol: Tolerances = DEFAULT_TOLERANCES
) -> tuple[Configuration, Configuration]:
    """Pair hitting all four disc rules: each side is a random line or
    triangle, and half the time the goal is rotated into exact coorientation."""
    x = line_configuration(rng) if rng.random() < 0.5 else triangle_configuration(rng, tol)
    y = line_configuration(rng) if rng.random() < 0.5 else triangle_configuration(rng, tol)
    if rng.random() < 0.5:
        gap = cmath.phase(
            disc_planner.orientation(x).value / disc_planner.orientation(y).value
        )
        y = disc_planner.rotate_configuration(y, gap / 6.0)
    return x, y


# ---------------------------------------------------------------------------
# Planner dispatch and run records.


def plan_for(
    surface: str,
    x: Configuration,
    y: Configuration,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> PathPlan:
    if surface == "annulus":
        return annulus_planner.plan(x, y, tol)
    if surface in ("disc", "disc3"):
        return disc_planner.plan(x, y, tol)
    raise ValueError(f"unknown surface {surface!r}")


@dataclass
class PlannerRun:
    """One planning invocation with its validation evidence."""

    surface: str
    n: int
    start: Configuration
    goal: Configuration
    stratum: str
    path: PathPlan
    report: ValidationReport
    trace: dict = field(default_factory=dict)


def run_planner(
    surface: str,
    x: Configuration,
    y: Configuration,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> PlannerRun:
    path = plan_for(surface, x, y, tol)
    report = validate_path(path, tol, start=x, goal=y)
    return PlannerRun(
        surface="annulus" if surface == "annulus" else "disc",
        n=x.n,
        start=x,
        goal=y,
        stratum=str(path.meta.get("stratum", "")),
        path=path,
        report=report,
        trace={k: v for k, v in path.meta.items()},
    )


# ---------------------------------------------------------------------------
# Partition census.


@dataclass(frozen=True)
class PartitionReport:
    surface: str
    n: int
    trials: int
    histogram: dict[str, int]

    @property
    def labels(self) -> set[str]:
        return set(self.histogram)


def partition_check(
    surface: str,
    n: int,
    trials: int,
    seed,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> PartitionReport:
    """Label ``trials`` structured pairs and report the histogram; every pair
    receives exactly one label."""
    rng = random.Random(seed)
    hist: Counter[str] = Counter()
    if surface == "annulus":
        for _ in range(trials):
            x, y = structured_annulus_pair(n, rng)
            hist[f"L{annulus_planner.degree(x, y, tol)}"] += 1
    elif surface in ("disc", "disc3"):
        for _ in range(trials):
            x, y = structured_disc_pair(rng, tol)
            hist[disc_planner.stratum(x, y, tol).index] += 1
    else:
        raise ValueError(f"unknown surface {surface!r}")
    assert sum(hist.values()) == trials
    return PartitionReport(surface=surface, n=n, trials=trials, histogram=dict(hist))


def degrees_from_angles(tx: np.ndarray, ty: np.ndarray, tau: float) -> np.ndarray:
    """Vectorised pair degree: the number of tau-separated angle clusters in
    each row of the combined angle arrays.  Matches the scalar grouping rule."""
    allv = np.sort(np.concatenate([tx, ty], axis=1), axis=1)
    inner = np.diff(allv, axis=1)
    wrap = (allv[:, 0] + 1.0 - allv[:, -1])[:, None]
    gaps = np.concatenate([inner, wrap], axis=1)
    return (gaps > tau).sum(axis=1)


def degree_census_angles(
    n: int, trials: int, seed
) -> tuple[np.ndarray, np.ndarray]:
    """Angle arrays for a degree census: half the rows are generic (all angles
    fresh), half draw from a small per-row pool so low degrees occur."""
    rng = np.random.default_rng(seed)
    tx = rng.random((trials, n))
    ty = rng.random((trials, n))
    pooled = rng.random(trials) < 0.5
    k = rng.integers(1, 2 * n + 1, size=trials)
    pool = rng.random((trials, 2 * n))
    rows = np.arange(trials)[:, None]
    xi = np.floor(rng.random((trials, n)) * k[:, None]).astype(int)
    yi = np.floor(rng.random((trials, n)) * k[:, None]).astype(int)
    tx = np.where(pooled[:, None], pool[rows, xi], tx)
    ty = np.where(pooled[:, None], pool[rows, yi], ty)
    return tx, ty


# ---------------------------------------------------------------------------
# Continuity probe.


@dataclass(frozen=True)
class ProbeResult:
    deviations: tuple[float, ...]
    escapes: int

    @property
    def max_deviation(self) -> float:
        return max(self.deviations) if self.deviations else 0.0


def _perturbed(c: Configuration, h: float, rng: random.Random) -> Configuration:
    pts = []
    for p in c.points:
        r = h * rng.random()
        a = rng.uniform(0.0, 2.0 * math.pi)
        if isinstance(p, AnnulusPoint):
            pts.append(AnnulusPoint(p.theta + r * math.cos(a), p.height + r * math.sin(a)))
        else:
            pts.append(PlanePoint(p.re + r * math.cos(a), p.im + r * math.sin(a)))
    return canonicalize(pts)


def _stratum_key(surface: str, x: Configuration, y: Configuration, tol: Tolerances):
    if surface == "annulus":
        return annulus_planner.stratum_of(x, y, tol)
    return disc_planner.stratum(x, y, tol)


def continuity_probe(
    surface: str,
    pair: tuple[Configuration, Configuration],
    h: float,
    trials: int = 1,
    tol: Tolerances = DEFAULT_TOLERANCES,
    seed=0,
    n_samples: int = 257,
) -> ProbeResult:
    """Replan perturbed copies of the pair and measure the worst sampled path
    deviation; perturbations that leave the stratum are counted, not compared.
    """
    x, y = pair
    base = plan_for(surface, x, y, tol)
    key = _stratum_key(surface, x, y, tol)
    ts = np.linspace(0.0, 1.0, n_samples)
    rng = random.Random(seed)
    deviations: list[float] = []
    escapes = 0
    for _ in range(trials):
        try:
            xp = _perturbed(x, h, rng)
            yp = _perturbed(y, h, rng)
            if _stratum_key(surface, xp, yp, tol) != key:
                raise StratumEscape("perturbed pair changed stratum")
        except StratumEscape:
            escapes += 1
            continue
        other = plan_for(surface, xp, yp, tol)
        dev = 0.0
        for t in ts:
            dev = max(dev, matched_distance(base.at(float(t)), other.at(float(t))))
        deviations.append(dev)
    return ProbeResult(tuple(deviations), escapes)


# ---------------------------------------------------------------------------
# Path export (shared JSON schema).


def sample_path(plan: PathPlan, count: int) -> list[dict]:
    ts = np.linspace(0.0, 1.0, count)
    out = []
    for t in ts:
        c = plan.at(float(t))
        out.append({"t": float(t), "points": [list(p) for p in c.coordinate_pairs()]})
    return out


def path_export(plan: PathPlan, count: int = 129) -> dict:
    return {
        "surface": plan.surface,
        "n": plan.n,
        "stratum": str(plan.meta.get("stratum", "")),
        "samples": sample_path(plan, count),
        "segments": plan.describe_segments(),
    }


# ---------------------------------------------------------------------------
# Round-trip loops on the annulus with two points, read inside the plane.
#
# The annulus embeds in the punctured plane by z = exp(height) * exp(2*pi*i*
# theta).  A closed loop of 2-point configurations then induces a braid on two
# strands in the plane; for pure loops its linking number equals the winding
# number of the difference vector z1 - z2 around zero.


def _slot_match(
    pairs_from: Sequence[tuple[float, float]], pairs_to: Sequence[tuple[float, float]]
) -> list[int]:
    mapping = []
    for p in pairs_from:
        hits = [j for j, q in enumerate(pairs_to) if q == p]
        if len(hits) != 1:
            raise RuntimeError("tracked points do not match across the seam")
        mapping.append(hits[0])
    return mapping


@dataclass(frozen=True)
class LoopProfile:
    """Tracked strand coordinates of a 2-point round trip.

    Each piece covers one segment with local time [0, 1] and stores, per
    strand, the lifted angle (universal-cover turns), its slope, the height
    and its slope: ``((th0, dth, h0, dh), (th0, dth, h0, dh))``.
    ``permutation`` maps the strand starting at canonical slot j to its final
    canonical slot; the loop is a pure braid exactly when it is the identity.
    """

    pieces: tuple[tuple[tuple[float, float, float, float], ...], ...]
    permutation: tuple[int, int]

    @property
    def is_pure(self) -> bool:
        return self.permutation == (0, 1)


def loop_profile(plan_xy: PathPlan, plan_yx: PathPlan) -> LoopProfile:
    if plan_xy.n != 2 or plan_yx.n != 2:
        raise ValueError("loop profiles are defined for two points")
    if plan_xy.goal != plan_yx.start or plan_yx.goal != plan_xy.start:
        raise ValueError("the two plans do not form a closed loop")
    x = plan_xy.start
    segments = list(plan_xy.segments) + list(plan_yx.segments)
    cur_slot = [0, 1]
    lift = [x.points[0].theta, x.points[1].theta]
    pieces = []
    prev_end: Sequence[tuple[float, float]] | None = None
    for seg in segments:
        if prev_end is not None:
            m = _slot_match(prev_end, seg.start_points)
            cur_slot = [m[c] for c in cur_slot]
        piece = []
        for s in (0, 1):
            c = cur_slot[s]
            th0 = seg.start_points[c][0]
            if abs((lift[s] - th0 + 0.5) % 1.0 - 0.5) > 1e-9:
                raise RuntimeError("lifted angle lost track of the strand")
            dth = seg.dtheta[c]  # type: ignore[attr-defined]
            h0 = seg.start_points[c][1]
            dh = seg.end_points[c][1] - h0
            piece.append((lift[s], dth, h0, dh))
            lift[s] = lift[s] + dth
        pieces.append(tuple(piece))
        prev_end = seg.end_points
    final = _slot_match(prev_end, x.coordinate_pairs())
    perm = (final[cur_slot[0]], final[cur_slot[1]])
    return LoopProfile(tuple(pieces), perm)


def _piece_difference(piece, taus: np.ndarray) -> np.ndarray:
    """Embedded difference vector z1 - z2 at the given local times."""
    out = None
    for sign, (th0, dth, h0, dh) in zip((1.0, -1.0), piece):
        z = np.exp(h0 + dh * taus) * np.exp(2j * math.pi * (th0 + dth * taus))
        out = sign * z if out is None else out + sign * z
    return out


def winding_turns(profile: LoopProfile, samples_per_piece: int = 4096) -> float:
    """Winding number of the embedded difference vector around zero, in turns,
    by dense sampling and principal-angle accumulation."""
    for attempt in range(3):
        m = samples_per_piece * (8**attempt)
        total = 0.0
        coarse = False
        for piece in profile.pieces:
            taus = np.linspace(0.0, 1.0, m + 1)
            d = _piece_difference(piece, taus)
            steps = np.angle(d[1:] / d[:-1])
            if float(np.max(np.abs(steps))) >= math.pi / 2.0:
                coarse = True
                break
            total += float(np.sum(steps))
        if not coarse:
            return total / (2.0 * math.pi)
    raise RuntimeError("winding sampling too coarse even after refinement")


def _bisect_crossing(piece, lo: float, hi: float, f_lo: float) -> float:
    """Height coordinate of the vertical-axis crossing inside (lo, hi)."""
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        fmid = float(_piece_difference(piece, np.array([mid]))[0].real)
        if fmid == 0.0:
            lo = hi = mid
            break
        if (fmid > 0) == (f_lo > 0):
            lo, f_lo = mid, fmid
        else:
            hi = mid
    return float(_piece_difference(piece, np.array([0.5 * (lo + hi)]))[0].imag)


def crossing_word(profile: LoopProfile, samples_per_piece: int = 4096) -> BraidWord:
    """Braid word read off the embedded loop: one letter whenever the
    difference vector crosses the vertical axis, signed by its rotation sense.
    For pure loops the linking number of this word equals the winding number.
    """
    us: list[float] = []
    vs: list[float] = []
    locs: list[tuple[int, float]] = []
    for pi, piece in enumerate(profile.pieces):
        taus = np.linspace(0.0, 1.0, samples_per_piece + 1)
        d = _piece_difference(piece, taus)
        us.extend(d.real.tolist())
        vs.extend(d.imag.tolist())
        locs.extend((pi, float(t)) for t in taus)
    letters: list[int] = []
    last = None  # index of the last sample with nonzero real part
    for i, u in enumerate(us):
        if u == 0.0:
            continue
        if last is not None and (us[last] > 0) != (u > 0):
            if i == last + 1 and locs[i][0] == locs[last][0]:
                piece = profile.pieces[locs[i][0]]
                v_cross = _bisect_crossing(piece, locs[last][1], locs[i][1], us[last])
            else:
                # the flip spans explicit zero samples; the height is constant
                # in sign there, read it off the first one
                v_cross = vs[last + 1]
            sense = (-1 if u > 0 else 1) * (1 if v_cross > 0 else -1)
            letters.append(sense)
        last = i
    return BraidWord(2, tuple(letters))
