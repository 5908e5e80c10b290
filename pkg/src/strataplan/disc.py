"""Collision-free planner for 3 unordered points in the plane.

Pairs of configurations are split into four planner rules by two dichotomies:
whether the squared-difference-product orientation values of the two
configurations agree, and whether each configuration is collinear or a true
triangle.  Each rule deforms both sides onto a common canonical circle orbit
(a centred unit line segment pair or an inscribed equilateral triangle) while
keeping the orientation value constant, then closes the gap with a rotation
or a vertex-collapse move.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    LiftUnwrapFailure,
    MidpointMismatch,
    NoParallelSide,
    PreconditionViolated,
    SeparationTooSmall,
    SizeMismatch,
)
from .geometry import (
    Configuration,
    DEFAULT_TOLERANCES,
    MIN_INPUT_SEPARATION,
    Tolerances,
    complexes,
    min_separation,
)
from .moves import (
    ArcMove,
    CompensatedMove,
    DiscMove,
    PlaneMove,
    RotationMove,
    constant_move,
    unit_discriminant,
)
from .paths import PathPlan, concat_plans

TWO_PI = 2.0 * math.pi
THIRD_TURN = TWO_PI / 3.0


def _require_three(c: Configuration) -> None:
    if c.kind != "disc":
        raise TypeError("plane configuration required")
    if c.n != 3:
        raise SizeMismatch(f"3 points required, got {c.n}")


def discriminant(c: Configuration) -> complex:
    """Product of the squared pairwise differences; never zero and
    independent of point order."""
    _require_three(c)
    z1, z2, z3 = complexes(c)
    return complex(((z1 - z2) * (z2 - z3) * (z3 - z1)) ** 2)


@dataclass(frozen=True)
class Orientation:
    """Unit-modulus orientation value of a 3-point configuration."""

    value: complex

    def __post_init__(self) -> None:
        if abs(abs(self.value) - 1.0) > 1e-12:
            raise ValueError("orientation value must have unit modulus")


def orientation(c: Configuration) -> Orientation:
    """Normalised discriminant; rotating the configuration by an angle
    multiplies it by the sixth power of the rotation."""
    d = discriminant(c)
    return Orientation(d / abs(d))


def is_collinear(c: Configuration, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Whether the three points lie on one line, via the normalised area test
    ``|Im((z2-z1) * conj(z3-z1))| / diameter^2 < tau_geom``."""
    _require_three(c)
    z1, z2, z3 = complexes(c)
    area2 = abs(((z2 - z1) * (z3 - z1).conjugate()).imag)
    diam = max(abs(z1 - z2), abs(z2 - z3), abs(z3 - z1))
    return area2 / diam**2 < tol.tau_geom


@dataclass(frozen=True)
class DiscStratum:
    """Planner rule label: E0..E3 plus the collinearity pattern of the pair
    (first letter: start side, second: goal side) and the coorientation flag."""

    index: str
    component: str
    oriented: bool

    def __post_init__(self) -> None:
        if self.index not in ("E0", "E1", "E2", "E3"):
            raise ValueError(f"unknown stratum index {self.index}")
        if self.component not in ("LL", "TL", "LT", "TT"):
            raise ValueError(f"unknown component {self.component}")

    @property
    def label(self) -> str:
        return f"{self.index}({'P' if self.oriented else 'N'},{self.component})"


@dataclass(frozen=True)
class CanonicalForm:
    """Retraction target: ``LR`` is one point at the origin plus two antipodal
    unit points, ``TR`` an equilateral triangle inscribed in the unit circle.
    ``phase`` is a representative angle of the form (mod pi for lines)."""

    kind: str
    phase: float

    def __post_init__(self) -> None:
        if self.kind not in ("LR", "TR"):
            raise ValueError(f"unknown canonical form {self.kind}")


def rotate_configuration(c: Configuration, angle: float) -> Configuration:
    """The configuration rotated about the origin by ``angle`` radians."""
    _require_three(c)
    rot = cmath.exp(1j * angle)
    from .geometry import PlanePoint, canonicalize

    return canonicalize(PlanePoint.from_complex(z * rot) for z in complexes(c))


def stratum(
    x: Configuration, y: Configuration, tol: Tolerances = DEFAULT_TOLERANCES
) -> DiscStratum:
    """The unique planner rule responsible for the pair."""
    _require_three(x)
    _require_three(y)
    oriented = abs(orientation(x).value - orientation(y).value) < tol.tau_geom
    component = ("L" if is_collinear(x, tol) else "T") + (
        "L" if is_collinear(y, tol) else "T"
    )
    if component == "LL":
        index = "E0" if oriented else "E1"
    elif component in ("TL", "LT"):
        index = "E1" if oriented else "E2"
    else:
        index = "E2" if oriented else "E3"
    return DiscStratum(index, component, oriented)


# ---------------------------------------------------------------------------
# Retractions onto the canonical circle orbits.


def _middle_index(zs: tuple[complex, ...]) -> int:
    """Index of the point with the other two on opposite sides."""
    dots = []
    for i in range(3):
        a, b = (j for j in range(3) if j != i)
        dots.append(((zs[a] - zs[i]) * (zs[b] - zs[i]).conjugate()).real)
    return min(range(3), key=lambda i: dots[i])


def retract_line(
    c: Configuration, tol: Tolerances = DEFAULT_TOLERANCES
) -> tuple[PathPlan, CanonicalForm]:
    """Deform a collinear configuration onto the centred unit form: translate
    the middle point to the origin, then slide the outer points to distance 1.
    The orientation value stays constant along the way."""
    if not is_collinear(c, tol):
        raise PreconditionViolated("line retraction needs a collinear configuration")
    zs = tuple(complexes(c))
    mid = _middle_index(zs)
    center = zs[mid]
    z1 = tuple(z - center for z in zs)
    seg1 = PlaneMove("plane-linear", zs, z1)
    z2 = tuple(0j if i == mid else z / abs(z) for i, z in enumerate(z1))
    seg2 = PlaneMove("radial-slide", seg1.end_z, z2)
    outer = next(i for i in range(3) if i != mid)
    phase = cmath.phase(z2[outer]) % math.pi
    return PathPlan((seg1, seg2)), CanonicalForm("LR", phase)


def _sorted_arcs(angles: np.ndarray) -> np.ndarray:
    """Counterclockwise arcs between consecutive sorted angles; sums to 2*pi."""
    return np.array(
        [
            angles[1] - angles[0],
            angles[2] - angles[1],
            TWO_PI - (angles[2] - angles[0]),
        ]
    )


def _build_lift(
    segments: list[DiscMove], ref: complex, total_steps: int
) -> list[np.ndarray]:
    """Continuous lift of the orientation argument along a chain of moves,
    sampled on a per-segment grid.  Raises when adjacent samples are too far
    apart to unwrap reliably."""
    per_seg = max(16, total_steps // len(segments))
    lifts: list[np.ndarray] = []
    running = 0.0
    for seg in segments:
        ts = np.linspace(0.0, 1.0, per_seg + 1)
        zs = seg.complex_at_many(ts)
        raw = np.angle(unit_discriminant(zs) / ref)
        diffs = np.diff(raw)
        wrapped = (diffs + math.pi) % TWO_PI - math.pi
        if wrapped.size and float(np.max(np.abs(wrapped))) >= math.pi / 2.0:
            raise LiftUnwrapFailure(
                "orientation argument moved too fast between lift samples"
            )
        vals = running + np.concatenate([[0.0], np.cumsum(wrapped)])
        lifts.append(vals)
        running = float(vals[-1])
    return lifts


def _compensated_chain(
    segments: list[DiscMove], ref: complex, lifts: list[np.ndarray]
) -> list[CompensatedMove]:
    comp: list[CompensatedMove] = []
    cur_start = segments[0].start_z
    for seg, vals in zip(segments, lifts):
        rot_end = cmath.exp(-1j * float(vals[-1]) / 6.0)
        cur_end = tuple(z * rot_end for z in seg.end_z)
        comp.append(CompensatedMove(seg, ref, vals, cur_start, cur_end))
        cur_start = cur_end
    return comp


def retract_triangle(
    c: Configuration, tol: Tolerances = DEFAULT_TOLERANCES
) -> tuple[PathPlan, CanonicalForm]:
    """Deform a non-collinear configuration onto an inscribed equilateral
    triangle: centre the centroid, project radially onto the unit circle,
    equalise the arcs in two slides, and counter-rotate throughout so the
    orientation value never changes."""
    if is_collinear(c, tol):
        raise PreconditionViolated("triangle retraction needs a non-collinear configuration")
    zs = tuple(complexes(c))
    ref = complex(unit_discriminant(np.array(zs)[None, :])[0])

    centroid = (zs[0] + zs[1] + zs[2]) / 3.0
    z1 = tuple(z - centroid for z in zs)
    base: list[DiscMove] = [PlaneMove("plane-linear", zs, z1)]
    radii = [abs(z) for z in z1]
    if min(radii) == 0.0:
        raise PreconditionViolated("a vertex sits at the centroid")
    z2 = tuple(z / r for z, r in zip(z1, radii))
    base.append(PlaneMove("radial-slide", base[-1].end_z, z2))

    phi = np.array([cmath.phase(z) for z in z2])
    order = np.argsort(phi, kind="stable")
    a = phi[order]
    arcs = _sorted_arcs(a)
    if float(np.min(arcs)) <= 0.0:
        raise PreconditionViolated("two vertices project to the same direction")

    # First slide: if exactly one arc is minimal, widen it until it ties.
    m = float(np.min(arcs))
    if int(np.sum(arcs == m)) == 1:
        jm = int(np.argmin(arcs))
        others = [(jm + 1) % 3, (jm + 2) % 3]
        s_star = min((float(arcs[o]) - m) / 3.0 for o in others)
        d_sorted = np.zeros(3)
        d_sorted[jm] -= s_star
        d_sorted[(jm + 1) % 3] += s_star
        d_slots = np.zeros(3)
        d_slots[order] = d_sorted
        base.append(ArcMove(base[-1].end_z, tuple(d_slots)))
        a = a + d_sorted
        arcs = _sorted_arcs(a)

    # Second slide: shrink the longest arc until all arcs are equal; the end
    # is snapped to an exact equilateral anchored at the fixed vertex.
    jM = int(np.argmax(arcs))
    u_star = (float(arcs[jM]) - THIRD_TURN) / 2.0
    d_sorted = np.zeros(3)
    d_sorted[jM] += u_star
    d_sorted[(jM + 1) % 3] -= u_star
    fixed = (jM + 2) % 3
    end_sorted = np.zeros(3)
    end_sorted[fixed] = a[fixed]
    end_sorted[(fixed + 1) % 3] = a[fixed] + THIRD_TURN
    end_sorted[(fixed + 2) % 3] = a[fixed] + 2.0 * THIRD_TURN
    drift = np.abs(np.angle(np.exp(1j * ((a + d_sorted) - end_sorted))))
    if float(np.max(drift)) > 1e-6:
        raise RuntimeError("arc equalisation drifted from the equilateral target")
    d_slots = np.zeros(3)
    d_slots[order] = d_sorted
    end_slots = np.empty(3, dtype=complex)
    end_slots[order] = np.exp(1j * end_sorted)
    base.append(ArcMove(base[-1].end_z, tuple(d_slots), end_z=tuple(end_slots)))

    attempts = 5
    lifts = None
    for attempt in range(attempts):
        try:
            lifts = _build_lift(base, ref, tol.lift_steps * (8**attempt))
            break
        except LiftUnwrapFailure:
            if attempt == attempts - 1:
                raise
    assert lifts is not None
    comp = _compensated_chain(base, ref, lifts)
    plan = PathPlan(tuple(comp))
    phase = cmath.phase(comp[-1].end_z[0]) % TWO_PI
    return plan, CanonicalForm("TR", phase)


# ---------------------------------------------------------------------------
# Coorientation and terminal alignment.


def coorient(
    x: Configuration, y: Configuration, tol: Tolerances = DEFAULT_TOLERANCES
) -> PathPlan:
    """Rotate ``x`` clockwise about the origin until its orientation value
    matches that of ``y``; the rotation angle is one sixth of the clockwise
    orientation gap."""
    _require_three(x)
    _require_three(y)
    ox = orientation(x).value
    oy = orientation(y).value
    alpha = (-cmath.phase(oy / ox)) % TWO_PI
    if alpha == 0.0:
        raise PreconditionViolated("the pair is already cooriented")
    move = RotationMove(tuple(complexes(x)), -alpha / 6.0)
    return PathPlan((move,), meta={"coorient_gap": alpha})


def _line_data(zs: tuple[complex, ...]) -> tuple[int, list[int], float]:
    """Origin slot, outer slots and direction angle (mod pi) of a centred line."""
    origin = min(range(3), key=lambda i: abs(zs[i]))
    if abs(zs[origin]) > 1e-6:
        raise PreconditionViolated("configuration is not in the centred line form")
    outs = [i for i in range(3) if i != origin]
    return origin, outs, cmath.phase(zs[outs[0]]) % math.pi


def _mod_gap(a: float, modulus: float) -> float:
    d = a % modulus
    return min(d, modulus - d)


def _snap_to_classes(raw: float, classes: tuple[float, ...], modulus: float) -> float:
    best = min(classes, key=lambda c: _mod_gap(raw - c, modulus))
    if _mod_gap(raw - best, modulus) > 1e-6:
        raise PreconditionViolated(
            f"relative angle {raw:.3e} is not on a canonical circle orbit"
        )
    return best % modulus


def _matched_rotation(
    zs: tuple[complex, ...], angle: float, targets: tuple[complex, ...]
) -> tuple[complex, ...]:
    """End snap for a rotation: each rotated point adopts its nearest target."""
    rot = cmath.exp(1j * angle)
    end: list[complex] = []
    used: set[int] = set()
    for z in zs:
        w = z * rot
        j = min(
            (j for j in range(3) if j not in used),
            key=lambda j: abs(w - targets[j]),
        )
        if abs(w - targets[j]) > 1e-6:
            raise PreconditionViolated("rotation does not land on the goal orbit")
        used.add(j)
        end.append(targets[j])
    return tuple(end)


def _triangle_onto_line(
    tri: tuple[complex, ...], line: tuple[complex, ...], tol: Tolerances
) -> PlaneMove:
    """Collapse an inscribed equilateral triangle onto a centred unit line:
    the vertex opposite the side parallel to the line goes to the origin and
    the side's endpoints go to the line's outer points."""
    origin_slot, outs, line_dir = _line_data(line)
    sides = [(0, 1), (1, 2), (2, 0)]
    gaps = [
        _mod_gap(cmath.phase(tri[j] - tri[i]) - line_dir, math.pi) for i, j in sides
    ]
    best = min(range(3), key=lambda s: gaps[s])
    if gaps[best] > max(tol.tau_geom, 1e-9):
        raise NoParallelSide(
            f"no triangle side parallel to the line within tolerance ({gaps[best]:.3e})"
        )
    i, j = sides[best]
    opposite = next(k for k in range(3) if k not in (i, j))
    axis = line[outs[0]]
    end: list[complex] = [0j, 0j, 0j]
    end[opposite] = line[origin_slot]
    pi_, pj_ = (tri[i] * axis.conjugate()).real, (tri[j] * axis.conjugate()).real
    if pi_ == 0.0 or pj_ == 0.0 or (pi_ > 0) == (pj_ > 0):
        raise NoParallelSide("parallel side endpoints do not straddle the origin")
    end[i] = line[outs[0]] if pi_ > 0 else line[outs[1]]
    end[j] = line[outs[0]] if pj_ > 0 else line[outs[1]]
    return PlaneMove("plane-linear", tri, tuple(end))


def align_terminal(
    x_hat: Configuration,
    y_hat: Configuration,
    strat: DiscStratum,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> tuple[PathPlan, PathPlan]:
    """Close a cooriented canonical pair onto the diagonal.

    Matching forms rotate the first configuration clockwise by the orbit
    angle (0, pi/3 or 2*pi/3 for lines; 0 or pi/3 for triangles); a mixed
    pair collapses the triangle side onto the line.  Returns the two final
    deformations, which end at the same configuration exactly.
    """
    zx = tuple(complexes(x_hat))
    zy = tuple(complexes(y_hat))
    comp = strat.component
    if comp == "LL":
        _, _, phx = _line_data(zx)
        _, _, phy = _line_data(zy)
        gamma = _snap_to_classes(
            (phx - phy) % math.pi, (0.0, math.pi / 3.0, 2.0 * math.pi / 3.0, math.pi), math.pi
        )
        hx = PathPlan((RotationMove(zx, -gamma, end_z=_matched_rotation(zx, -gamma, zy)),))
        hy = PathPlan((PlaneMove("plane-linear", zy, zy),))
    elif comp == "TT":
        raw = (cmath.phase(zx[0]) - cmath.phase(zy[0])) % THIRD_TURN
        gamma = _snap_to_classes(raw, (0.0, math.pi / 3.0, THIRD_TURN), THIRD_TURN)
        hx = PathPlan((RotationMove(zx, -gamma, end_z=_matched_rotation(zx, -gamma, zy)),))
        hy = PathPlan((PlaneMove("plane-linear", zy, zy),))
    elif comp == "TL":
        hx = PathPlan((_triangle_onto_line(zx, zy, tol),))
        hy = PathPlan((PlaneMove("plane-linear", zy, zy),))
    elif comp == "LT":
        hx = PathPlan((PlaneMove("plane-linear", zx, zx),))
        hy = PathPlan((_triangle_onto_line(zy, zx, tol),))
    else:  # pragma: no cover
        raise ValueError(f"unknown component {comp}")
    return hx, hy


def pair_deformation_to_path(hx: PathPlan, hy: PathPlan) -> PathPlan:
    """Turn two deformations with a common end into one path: run the first
    forward over [0, 1/2] and the second backward over [1/2, 1]."""
    if hx.goal != hy.goal:
        raise MidpointMismatch("the two deformations end at different configurations")
    rev = hy.reverse()
    segments = hx.segments + rev.segments
    weights = tuple(w * 0.5 for w in hx.weights) + tuple(w * 0.5 for w in rev.weights)
    return PathPlan(segments, weights)


def plan(
    x: Configuration, y: Configuration, tol: Tolerances = DEFAULT_TOLERANCES
) -> PathPlan:
    """Collision-free path between two 3-point plane configurations.

    Non-cooriented pairs first rotate the start side into coorientation, then
    both sides retract onto their canonical orbit, the remaining gap closes by
    rotation or triangle collapse, and the two halves are concatenated.
    """
    _require_three(x)
    _require_three(y)
    for c in (x, y):
        if min_separation(c) < MIN_INPUT_SEPARATION:
            raise SeparationTooSmall(f"minimum separation below {MIN_INPUT_SEPARATION}")
    strat = stratum(x, y, tol)
    base_meta = {
        "surface": "disc",
        "stratum": strat.label,
        "index": strat.index,
        "component": strat.component,
        "oriented": strat.oriented,
    }
    if x == y:
        p = PathPlan((constant_move(x),), meta=dict(base_meta, constant=True))
        return p

    parts_x: list[PathPlan] = []
    cx = x
    if not strat.oriented:
        turn = coorient(x, y, tol)
        parts_x.append(turn)
        cx = turn.goal
    if strat.component[0] == "L":
        rx, x_form = retract_line(cx, tol)
    else:
        rx, x_form = retract_triangle(cx, tol)
    parts_x.append(rx)
    if strat.component[1] == "L":
        ry, y_form = retract_line(y, tol)
    else:
        ry, y_form = retract_triangle(y, tol)
    ax, ay = align_terminal(rx.goal, ry.goal, strat, tol)
    hx = concat_plans(*parts_x, ax)
    hy = concat_plans(ry, ay)
    path = pair_deformation_to_path(hx, hy)
    path.meta.update(base_meta)
    path.meta.update(
        {
            "x_form": (x_form.kind, x_form.phase),
            "y_form": (y_form.kind, y_form.phase),
            "first_half_segments": len(hx.segments),
        }
    )
    if path.start != x or path.goal != y:
        raise RuntimeError("planned path endpoints drifted from the inputs")
    return path
