"""Concrete primitive moves.

Annulus moves interpolate angles linearly along a stored signed arc and
heights linearly.  Disc moves work on complex coordinates: straight-line
motion, rotation about the origin, sliding along the unit circle, and a
compensated wrapper that counter-rotates a move so the configuration keeps a
constant orientation value.
"""

from __future__ import annotations

import cmath
import math
from typing import Sequence

import numpy as np

from .geometry import Configuration, circle_gap, complexes, wrap_unit
from .paths import Move, TrackedPoints, _lerp


def _pairs_from_complex(zs: Sequence[complex]) -> TrackedPoints:
    return tuple((z.real, z.imag) for z in zs)


def unit_discriminant(zs: np.ndarray) -> np.ndarray:
    """Normalised squared-difference product of a 3-point array (..., 3)."""
    d = ((zs[..., 0] - zs[..., 1]) * (zs[..., 1] - zs[..., 2]) * (zs[..., 2] - zs[..., 0])) ** 2
    return d / np.abs(d)


class AnnulusMove(Move):
    """Per-point linear motion on the annulus.

    Each tracked slot carries a signed arc ``dtheta`` (in turns, evaluated in
    the universal cover and wrapped on output) and linearly interpolated
    heights.  ``kind`` is ``fiberwise-linear`` when no slot changes fibre and
    ``arc-slide`` for redistribution moves.
    """

    surface = "annulus"

    def __init__(
        self,
        kind: str,
        start: TrackedPoints,
        end: TrackedPoints,
        dtheta: Sequence[float],
    ):
        self.kind = kind
        self.start_points = tuple(start)
        self.end_points = tuple(end)
        self.dtheta = tuple(float(d) for d in dtheta)
        if not (len(self.start_points) == len(self.end_points) == len(self.dtheta)):
            raise ValueError("per-point parameter lengths disagree")
        for (t0, _), (t1, _), d in zip(self.start_points, self.end_points, self.dtheta):
            if circle_gap(wrap_unit(t0 + d), t1) > 1e-9:
                raise ValueError("declared end angle inconsistent with arc")
        self._t0 = np.array([p[0] for p in self.start_points])
        self._d = np.array(self.dtheta)
        self._h0 = np.array([p[1] for p in self.start_points])
        self._h1 = np.array([p[1] for p in self.end_points])

    def _interp(self, s: float) -> TrackedPoints:
        out = []
        for (t0, h0), (_, h1), d in zip(self.start_points, self.end_points, self.dtheta):
            out.append((wrap_unit(t0 + s * d), _lerp(h0, h1, s)))
        return tuple(out)

    def _interp_many(self, s: np.ndarray) -> np.ndarray:
        th = self._t0[None, :] + s[:, None] * self._d[None, :]
        th %= 1.0
        th[th >= 1.0] = 0.0
        hh = self._h0[None, :] * (1.0 - s[:, None]) + self._h1[None, :] * s[:, None]
        same = self._h0 == self._h1
        if np.any(same):
            hh[:, same] = self._h0[same]
        return np.stack([th, hh], axis=-1)

    def max_speed(self) -> float:
        return float(np.max(np.hypot(self._d, self._h1 - self._h0)))

    def describe(self) -> dict:
        d = super().describe()
        d["moving"] = int(np.count_nonzero((self._d != 0) | (self._h0 != self._h1)))
        return d


class DiscMove(Move):
    """Base for disc moves: tracked complex coordinates with snapped seams."""

    surface = "disc"
    start_z: tuple[complex, ...]
    end_z: tuple[complex, ...]

    def _finish_init(self, start_z: Sequence[complex], end_z: Sequence[complex]) -> None:
        self.start_z = tuple(complex(z) for z in start_z)
        self.end_z = tuple(complex(z) for z in end_z)
        self.start_points = _pairs_from_complex(self.start_z)
        self.end_points = _pairs_from_complex(self.end_z)

    def complex_at(self, s: float) -> tuple[complex, ...]:
        if s == 0.0:
            return self.start_z
        if s == 1.0:
            return self.end_z
        return self._complex_at(s)

    def complex_at_many(self, s: np.ndarray) -> np.ndarray:
        out = self._complex_at_many(np.asarray(s, dtype=float))
        sel0 = s == 0.0
        sel1 = s == 1.0
        if np.any(sel0):
            out[sel0] = np.array(self.start_z)
        if np.any(sel1):
            out[sel1] = np.array(self.end_z)
        return out

    def _interp(self, s: float) -> TrackedPoints:
        return _pairs_from_complex(self._complex_at(s))

    def _interp_many(self, s: np.ndarray) -> np.ndarray:
        zs = self._complex_at_many(s)
        return np.stack([zs.real, zs.imag], axis=-1)

    def _complex_at(self, s: float) -> tuple[complex, ...]:
        raise NotImplementedError

    def _complex_at_many(self, s: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class PlaneMove(DiscMove):
    """Straight-line motion of each point; ``kind`` distinguishes plain
    translations/slides (``plane-linear``) from slides along rays through the
    origin (``radial-slide``)."""

    def __init__(self, kind: str, start_z: Sequence[complex], end_z: Sequence[complex]):
        self.kind = kind
        self._finish_init(start_z, end_z)

    def _complex_at(self, s: float) -> tuple[complex, ...]:
        return tuple(
            z0 if z0 == z1 else z0 * (1.0 - s) + z1 * s
            for z0, z1 in zip(self.start_z, self.end_z)
        )

    def _complex_at_many(self, s: np.ndarray) -> np.ndarray:
        z0 = np.array(self.start_z)
        z1 = np.array(self.end_z)
        out = z0[None, :] * (1.0 - s[:, None]) + z1[None, :] * s[:, None]
        same = z0 == z1
        if np.any(same):
            out[:, same] = z0[same]
        return out

    def max_speed(self) -> float:
        return max(abs(z1 - z0) for z0, z1 in zip(self.start_z, self.end_z))


class RotationMove(DiscMove):
    """Rigid rotation of all points about the origin by ``angle`` radians."""

    kind = "rotation-about-origin"

    def __init__(
        self,
        start_z: Sequence[complex],
        angle: float,
        end_z: Sequence[complex] | None = None,
    ):
        self.angle = float(angle)
        if end_z is None:
            rot = cmath.exp(1j * self.angle)
            end_z = tuple(z * rot for z in start_z)
        self._finish_init(start_z, end_z)

    def _complex_at(self, s: float) -> tuple[complex, ...]:
        rot = cmath.exp(1j * self.angle * s)
        return tuple(z * rot for z in self.start_z)

    def _complex_at_many(self, s: np.ndarray) -> np.ndarray:
        rot = np.exp(1j * self.angle * s)
        return np.array(self.start_z)[None, :] * rot[:, None]

    def max_speed(self) -> float:
        return abs(self.angle) * max(abs(z) for z in self.start_z)

    def describe(self) -> dict:
        d = super().describe()
        d["angle"] = self.angle
        return d


class ArcMove(DiscMove):
    """Per-point slide along the unit circle by a signed angle ``dphi``."""

    kind = "arc-equalize"

    def __init__(
        self,
        start_z: Sequence[complex],
        dphi: Sequence[float],
        end_z: Sequence[complex] | None = None,
    ):
        self.dphi = tuple(float(d) for d in dphi)
        phi0 = tuple(cmath.phase(z) for z in start_z)
        self._phi0 = np.array(phi0)
        self._dphi_arr = np.array(self.dphi)
        if end_z is None:
            end_z = tuple(cmath.exp(1j * (p + d)) for p, d in zip(phi0, self.dphi))
        self._finish_init(start_z, end_z)

    def _complex_at(self, s: float) -> tuple[complex, ...]:
        return tuple(
            z if d == 0.0 else cmath.exp(1j * (p + s * d))
            for z, p, d in zip(self.start_z, self._phi0, self.dphi)
        )

    def _complex_at_many(self, s: np.ndarray) -> np.ndarray:
        ph = self._phi0[None, :] + s[:, None] * self._dphi_arr[None, :]
        out = np.exp(1j * ph)
        frozen = self._dphi_arr == 0.0
        if np.any(frozen):
            out[:, frozen] = np.array(self.start_z)[frozen]
        return out

    def max_speed(self) -> float:
        return float(np.max(np.abs(self._dphi_arr)))


class CompensatedMove(DiscMove):
    """A disc move post-composed with the rotation that keeps the orientation
    value of the configuration constant.

    ``lift`` holds the continuous lift of the orientation argument relative to
    ``ref_delta`` on a uniform grid of local times; evaluation recomputes the
    argument exactly and uses the nearest grid value only to pick the branch.
    The applied rotation at local time ``s`` is ``exp(-i * lift(s) / 6)``.
    """

    def __init__(
        self,
        base: DiscMove,
        ref_delta: complex,
        lift: np.ndarray,
        start_z: Sequence[complex],
        end_z: Sequence[complex],
        speed_bound: float | None = None,
    ):
        self.base = base
        self.kind = base.kind
        self.compensated = True
        self.ref_delta = complex(ref_delta)
        self.lift = np.asarray(lift, dtype=float)
        if self.lift.ndim != 1 or len(self.lift) < 2:
            raise ValueError("lift table needs at least two samples")
        self._speed_bound = speed_bound
        self._finish_init(start_z, end_z)

    def lift_value(self, s: float) -> float:
        zs = np.array(self.base.complex_at(s))
        a = float(np.angle(unit_discriminant(zs[None, :])[0] / self.ref_delta))
        m = len(self.lift) - 1
        j = min(max(int(round(s * m)), 0), m)
        k = round((self.lift[j] - a) / (2.0 * math.pi))
        return a + 2.0 * math.pi * k

    def _lift_values(self, s: np.ndarray, zs: np.ndarray) -> np.ndarray:
        a = np.angle(unit_discriminant(zs) / self.ref_delta)
        m = len(self.lift) - 1
        j = np.clip(np.rint(s * m).astype(int), 0, m)
        k = np.rint((self.lift[j] - a) / (2.0 * math.pi))
        return a + 2.0 * math.pi * k

    def _complex_at(self, s: float) -> tuple[complex, ...]:
        rot = cmath.exp(-1j * self.lift_value(s) / 6.0)
        return tuple(z * rot for z in self.base.complex_at(s))

    def _complex_at_many(self, s: np.ndarray) -> np.ndarray:
        zs = self.base.complex_at_many(s)
        rot = np.exp(-1j * self._lift_values(s, zs) / 6.0)
        return zs * rot[:, None]

    def max_speed(self) -> float:
        if self._speed_bound is not None:
            return self._speed_bound
        m = len(self.lift) - 1
        rate = float(np.max(np.abs(np.diff(self.lift)))) * m / 6.0
        radius = max(max(abs(z) for z in self.start_z), max(abs(z) for z in self.end_z))
        return self.base.max_speed() + rate * radius

    def describe(self) -> dict:
        d = super().describe()
        d["compensated"] = True
        return d


def constant_move(c: Configuration) -> Move:
    if c.kind == "annulus":
        pairs = c.coordinate_pairs()
        return AnnulusMove("fiberwise-linear", pairs, pairs, [0.0] * c.n)
    zs = tuple(complexes(c))
    return PlaneMove("plane-linear", zs, zs)
