"""Core geometric types: points, unordered configurations and tolerances.

Two surfaces are supported.  The annulus is modelled as S^1 x R with the
circle coordinate ``theta`` measured in turns (circumference 1, values in
[0, 1)) and the fibre coordinate ``height`` a plain real.  The disc is
modelled as the complex plane.  An unordered configuration is stored in
canonical lexicographic order, so equality of unordered configurations is
plain tuple equality.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DuplicatePoint, SizeMismatch

#: Planner inputs below this minimum pairwise separation are rejected; it keeps
#: floating-point stratum assignment meaningful near stratum boundaries.
MIN_INPUT_SEPARATION = 1e-7


def wrap_unit(t: float) -> float:
    """Reduce an angle in turns to [0, 1)."""
    t = t % 1.0
    if t >= 1.0:  # t % 1.0 can round up to 1.0 for tiny negative inputs
        t = 0.0
    return t


def circle_gap(a: float, b: float) -> float:
    """Shortest circular distance between two angles, in turns."""
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


def signed_arc(a: float, b: float) -> float:
    """Signed shortest arc from ``a`` to ``b``, in (-1/2, 1/2] turns."""
    return ((b - a + 0.5) % 1.0) - 0.5


@dataclass(frozen=True, order=True)
class AnnulusPoint:
    """A point of the annulus S^1 x R: angle in turns, real height."""

    theta: float
    height: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and math.isfinite(self.height)):
            raise ValueError(f"non-finite annulus point ({self.theta}, {self.height})")
        object.__setattr__(self, "theta", wrap_unit(float(self.theta)))
        object.__setattr__(self, "height", float(self.height))

    def distance(self, other: "AnnulusPoint") -> float:
        return math.hypot(circle_gap(self.theta, other.theta), self.height - other.height)


@dataclass(frozen=True, order=True)
class PlanePoint:
    """A point of the plane (the disc up to homotopy), as two real coordinates."""

    re: float
    im: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError(f"non-finite plane point ({self.re}, {self.im})")
        object.__setattr__(self, "re", float(self.re))
        object.__setattr__(self, "im", float(self.im))

    @classmethod
    def from_complex(cls, z: complex) -> "PlanePoint":
        return cls(z.real, z.imag)

    @property
    def as_complex(self) -> complex:
        return complex(self.re, self.im)

    def distance(self, other: "PlanePoint") -> float:
        return math.hypot(self.re - other.re, self.im - other.im)


Point = Union[AnnulusPoint, PlanePoint]


@dataclass(frozen=True)
class Configuration:
    """An unordered set of pairwise-distinct points in canonical sorted order.

    The constructor sorts the points, so two configurations describing the
    same unordered point set always compare equal.  Exactly coincident points
    are rejected; near-coincidences are legal here and only restricted at
    planner entry (see :data:`MIN_INPUT_SEPARATION`).
    """

    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        pts = tuple(self.points)
        if not pts:
            raise ValueError("empty configuration")
        first = type(pts[0])
        if first not in (AnnulusPoint, PlanePoint):
            raise TypeError(f"unsupported point type {first!r}")
        if any(type(p) is not first for p in pts):
            raise TypeError("mixed point types in one configuration")
        pts = tuple(sorted(pts))
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise DuplicatePoint(f"coincident points {a}")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def kind(self) -> str:
        """Surface tag: ``"annulus"`` or ``"disc"``."""
        return "annulus" if type(self.points[0]) is AnnulusPoint else "disc"

    def coordinate_pairs(self) -> tuple[tuple[float, float], ...]:
        if self.kind == "annulus":
            return tuple((p.theta, p.height) for p in self.points)
        return tuple((p.re, p.im) for p in self.points)


def canonicalize(points: Iterable[Point]) -> Configuration:
    """Sort points into the canonical order; raises on exact duplicates."""
    return Configuration(tuple(points))


def annulus_config(pairs: Iterable[Sequence[float]]) -> Configuration:
    return Configuration(tuple(AnnulusPoint(a, b) for a, b in pairs))


def disc_config(values: Iterable[Union[complex, Sequence[float]]]) -> Configuration:
    pts = []
    for v in values:
        if isinstance(v, (int, float, complex)):
            pts.append(PlanePoint.from_complex(complex(v)))
        else:
            a, b = v
            pts.append(PlanePoint(a, b))
    return Configuration(tuple(pts))


def config_from_pairs(surface: str, pairs: Iterable[Sequence[float]]) -> Configuration:
    if surface == "annulus":
        return annulus_config(pairs)
    if surface == "disc":
        return disc_config(pairs)
    raise ValueError(f"unknown surface {surface!r}")


def min_separation(c: Configuration) -> float:
    """Minimum pairwise distance; ``inf`` for a single point."""
    pts = c.points
    best = math.inf
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = pts[i].distance(pts[j])
            if d < best:
                best = d
    return best


def config_distance(a: Configuration, b: Configuration) -> float:
    """Max point distance after matching by canonical order.

    Valid as a metric between nearby configurations (displacements well below
    half the minimum separation); used for endpoint and step checks.
    """
    if a.n != b.n or a.kind != b.kind:
        raise SizeMismatch("configurations of different size or surface")
    return max(p.distance(q) for p, q in zip(a.points, b.points))


def matched_distance(a: Configuration, b: Configuration) -> float:
    """Max over points of ``a`` of the distance to the nearest point of ``b``.

    Robust against canonical-order swaps (e.g. across the angle wrap), which
    makes it the right notion for continuity probes of nearby configurations.
    """
    if a.n != b.n or a.kind != b.kind:
        raise SizeMismatch("configurations of different size or surface")
    return max(min(p.distance(q) for q in b.points) for p in a.points)


def thetas(c: Configuration) -> np.ndarray:
    return np.array([p.theta for p in c.points], dtype=float)


def heights(c: Configuration) -> np.ndarray:
    return np.array([p.height for p in c.points], dtype=float)


def complexes(c: Configuration) -> np.ndarray:
    return np.array([p.as_complex for p in c.points], dtype=complex)


@dataclass(frozen=True)
class Tolerances:
    """Numeric knobs shared by both planners.

    tau_angle
        Circular tolerance for grouping annulus angles into fibres.
    tau_geom
        Collinearity / coorientation tolerance on the disc.
    n_time_samples
        Uniform time samples used by path validation.
    lift_steps
        Sample count for unwrapping the orientation argument along a
        triangle retraction.
    """

    tau_angle: float = 1e-9
    tau_geom: float = 1e-9
    n_time_samples: int = 1024
    lift_steps: int = 4096

    def __post_init__(self) -> None:
        if self.tau_angle <= 0 or self.tau_geom <= 0:
            raise ValueError("tolerances must be strictly positive")
        if self.n_time_samples <= 0 or self.lift_steps <= 0:
            raise ValueError("sample counts must be strictly positive")


DEFAULT_TOLERANCES = Tolerances()


# ---------------------------------------------------------------------------
# Structured-text (JSON) configuration format shared by the CLI and the tests.


def configuration_to_dict(c: Configuration) -> dict:
    return {
        "surface": c.kind,
        "n": c.n,
        "points": [list(p) for p in c.coordinate_pairs()],
    }


def configuration_from_dict(doc: dict) -> Configuration:
    try:
        surface = doc["surface"]
        n = int(doc["n"])
        points = doc["points"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed configuration document: {exc}") from exc
    if surface not in ("annulus", "disc"):
        raise ValueError(f"unknown surface {surface!r}")
    if len(points) != n:
        raise ValueError(f"declared n={n} but {len(points)} points given")
    pairs = []
    for entry in points:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise ValueError(f"point entries must be [a, b] pairs, got {entry!r}")
        pairs.append((float(entry[0]), float(entry[1])))
    return config_from_pairs(surface, pairs)


def load_configuration(path: str) -> Configuration:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return configuration_from_dict(doc)


def save_configuration(c: Configuration, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(configuration_to_dict(c), fh, indent=2)
        fh.write("\n")
