"""Small 3D vector / pose / box helpers used across the simulator.

All lengths are meters, all angles radians. The world is 2.5D: objects
have yaw-only orientation and axis-aligned footprints, so boxes reduce
to (center x, center y, bottom z, size) tuples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


def normalize_yaw(yaw: float) -> float:
    """Wrap an angle into [-pi, pi)."""
    twopi = 2.0 * math.pi
    yaw = math.fmod(yaw, twopi)
    if yaw >= math.pi:
        yaw -= twopi
    elif yaw < -math.pi:
        yaw += twopi
    return yaw


@dataclass(frozen=True)
class Vec3:
    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for v in (self.x, self.y, self.z):
            if not math.isfinite(v):
                raise ValueError(f"non-finite vector component: {self!r}")

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scaled(self, k: float) -> "Vec3":
        return Vec3(self.x * k, self.y * k, self.z * k)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def dist(self, other: "Vec3") -> float:
        return (self - other).norm()

    def xy_dist(self, other: "Vec3") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def with_z(self, z: float) -> "Vec3":
        return Vec3(self.x, self.y, z)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class Pose:
    """Position plus heading. `position.z` is the bottom of whatever the pose anchors."""

    position: Vec3
    yaw: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "yaw", normalize_yaw(self.yaw))

    def moved_to(self, position: Vec3) -> "Pose":
        return Pose(position, self.yaw)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box: footprint center (cx, cy), bottom z, full extents."""

    cx: float
    cy: float
    z0: float
    sx: float
    sy: float
    sz: float

    @property
    def z1(self) -> float:
        return self.z0 + self.sz

    @property
    def x0(self) -> float:
        return self.cx - self.sx / 2.0

    @property
    def x1(self) -> float:
        return self.cx + self.sx / 2.0

    @property
    def y0(self) -> float:
        return self.cy - self.sy / 2.0

    @property
    def y1(self) -> float:
        return self.cy + self.sy / 2.0

    def center(self) -> Vec3:
        return Vec3(self.cx, self.cy, self.z0 + self.sz / 2.0)

    def contains_xy(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def contains_point_strict(self, p: Vec3) -> bool:
        """True iff p is strictly inside the box volume."""
        return (
            self.x0 < p.x < self.x1
            and self.y0 < p.y < self.y1
            and self.z0 < p.z < self.z1
        )

    def overlaps(self, other: "Box") -> bool:
        """Positive-volume intersection; face-touching boxes do not overlap."""
        return (
            self.x0 < other.x1
            and other.x0 < self.x1
            and self.y0 < other.y1
            and other.y0 < self.y1
            and self.z0 < other.z1
            and other.z0 < self.z1
        )

    def overlaps_xy(self, other: "Box") -> bool:
        return (
            self.x0 < other.x1
            and other.x0 < self.x1
            and self.y0 < other.y1
            and other.y0 < self.y1
        )

    def expanded_xy(self, margin: float) -> "Box":
        return Box(self.cx, self.cy, self.z0, self.sx + 2 * margin, self.sy + 2 * margin, self.sz)

    def distance_to_point(self, p: Vec3) -> float:
        """Euclidean distance from p to the closed box (0 if inside)."""
        dx = max(self.x0 - p.x, 0.0, p.x - self.x1)
        dy = max(self.y0 - p.y, 0.0, p.y - self.y1)
        dz = max(self.z0 - p.z, 0.0, p.z - self.z1)
        return math.sqrt(dx * dx + dy * dy + dz * dz)


def heading_vec(yaw: float) -> tuple[float, float]:
    return (math.cos(yaw), math.sin(yaw))


def snap_axis(yaw: float) -> tuple[int, int]:
    """Snap a yaw to the nearest of the four grid axes, returned as a unit (dx, dy)."""
    c, s = heading_vec(yaw)
    if abs(c) >= abs(s):
        return (1 if c >= 0 else -1, 0)
    return (0, 1 if s >= 0 else -1)
