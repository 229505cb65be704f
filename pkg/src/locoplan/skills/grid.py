"""Occupancy-grid navigation at a fixed support level.

Cells are 0.05 m. A cell is walkable when the support height under its
center matches the robot's current level; obstacles are implicitly
everything that changes the support height. Clearance is enforced by
eroding the free mask with a disk of the robot's half body diagonal.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import ndimage

from ..world import GROUND_Z, ObjectKind, Scene, WALK_LEVEL_TOL

CELL = 0.05
AVOID_MARGIN = 0.2
START_ESCAPE_RADIUS = 0.45


@dataclass
class Grid:
    free: np.ndarray  # bool, [ny, nx]
    xmin: float
    ymin: float

    def to_cell(self, x: float, y: float) -> tuple[int, int]:
        j = int((x - self.xmin) / CELL)
        i = int((y - self.ymin) / CELL)
        ny, nx = self.free.shape
        return (min(max(i, 0), ny - 1), min(max(j, 0), nx - 1))

    def to_xy(self, i: int, j: int) -> tuple[float, float]:
        return (self.xmin + (j + 0.5) * CELL, self.ymin + (i + 0.5) * CELL)


def _disk(radius_m: float) -> np.ndarray:
    r = max(int(math.ceil(radius_m / CELL)), 1)
    yy, xx = np.mgrid[-r : r + 1, -r : r + 1]
    return (xx * xx + yy * yy) * CELL * CELL <= radius_m * radius_m


def height_map(scene: Scene, excluding: Optional[str] = None) -> tuple[np.ndarray, float, float]:
    """Vectorized support heights over the bounds at cell resolution."""
    xmin, ymin, xmax, ymax = scene.bounds
    nx = max(int(round((xmax - xmin) / CELL)), 1)
    ny = max(int(round((ymax - ymin) / CELL)), 1)
    xs = xmin + (np.arange(nx) + 0.5) * CELL
    ys = ymin + (np.arange(ny) + 0.5) * CELL
    heights = np.full((ny, nx), GROUND_Z)
    pit = np.full((ny, nx), np.inf)

    for obj in scene.objects.values():
        if obj.id == excluding:
            continue
        b = obj.box
        j0 = np.searchsorted(xs, b.x0, side="left")
        j1 = np.searchsorted(xs, b.x1, side="right")
        i0 = np.searchsorted(ys, b.y0, side="left")
        i1 = np.searchsorted(ys, b.y1, side="right")
        if j0 >= j1 or i0 >= i1:
            continue
        if obj.kind is ObjectKind.GAP:
            pit[i0:i1, j0:j1] = np.minimum(pit[i0:i1, j0:j1], obj.pose.position.z - obj.size.z)
            continue
        if not obj.solid:
            continue
        if obj.kind is ObjectKind.STAIRS:
            # rasterize tread by tread along the ascent axis
            from ..geometry import snap_axis

            dx, dy = snap_axis(obj.pose.yaw)
            tops = obj.tread_tops()
            depth = obj.step_depth or 0.25
            for k, top in enumerate(tops):
                u0, u1 = k * depth, (k + 1) * depth
                if k == len(tops) - 1:
                    u1 = max(u1, b.sx if dx != 0 else b.sy)
                if dx > 0:
                    tj0 = np.searchsorted(xs, b.x0 + u0, side="left")
                    tj1 = np.searchsorted(xs, min(b.x0 + u1, b.x1), side="right")
                    sl = (slice(i0, i1), slice(tj0, tj1))
                elif dx < 0:
                    tj0 = np.searchsorted(xs, max(b.x1 - u1, b.x0), side="left")
                    tj1 = np.searchsorted(xs, b.x1 - u0, side="right")
                    sl = (slice(i0, i1), slice(tj0, tj1))
                elif dy > 0:
                    ti0 = np.searchsorted(ys, b.y0 + u0, side="left")
                    ti1 = np.searchsorted(ys, min(b.y0 + u1, b.y1), side="right")
                    sl = (slice(ti0, ti1), slice(j0, j1))
                else:
                    ti0 = np.searchsorted(ys, max(b.y1 - u1, b.y0), side="left")
                    ti1 = np.searchsorted(ys, b.y1 - u0, side="right")
                    sl = (slice(ti0, ti1), slice(j0, j1))
                heights[sl] = np.maximum(heights[sl], top)
        else:
            heights[i0:i1, j0:j1] = np.maximum(heights[i0:i1, j0:j1], b.z1)

    ground = heights == GROUND_Z
    pit_cells = np.isfinite(pit) & ground
    heights[pit_cells] = pit[pit_cells]
    return heights, xmin, ymin


def occupancy(scene: Scene, level: float, avoid: Optional[str] = None) -> Grid:
    heights, xmin, ymin = height_map(scene)
    free = np.abs(heights - level) <= WALK_LEVEL_TOL

    radius = scene.limits.body_radius
    free = ndimage.binary_erosion(free, structure=_disk(radius), border_value=0)

    if avoid is not None and avoid in scene.objects:
        b = scene.objects[avoid].box.expanded_xy(radius + AVOID_MARGIN)
        ny, nx = free.shape
        xs = xmin + (np.arange(nx) + 0.5) * CELL
        ys = ymin + (np.arange(ny) + 0.5) * CELL
        j0 = np.searchsorted(xs, b.x0, "left")
        j1 = np.searchsorted(xs, b.x1, "right")
        i0 = np.searchsorted(ys, b.y0, "left")
        i1 = np.searchsorted(ys, b.y1, "right")
        free[i0:i1, j0:j1] = False

    return Grid(free=free, xmin=xmin, ymin=ymin)


def _segment_free(grid: Grid, x0: float, y0: float, x1: float, y1: float) -> bool:
    length = math.hypot(x1 - x0, y1 - y0)
    n = max(int(length / (CELL / 2.0)) + 1, 2)
    ts = np.linspace(0.0, 1.0, n)
    xs = x0 + (x1 - x0) * ts
    ys = y0 + (y1 - y0) * ts
    ny, nx = grid.free.shape
    js = np.clip(((xs - grid.xmin) / CELL).astype(int), 0, nx - 1)
    is_ = np.clip(((ys - grid.ymin) / CELL).astype(int), 0, ny - 1)
    return bool(grid.free[is_, js].all())


_DIRS = [
    (0, 1, 1.0),
    (0, -1, 1.0),
    (1, 0, 1.0),
    (-1, 0, 1.0),
    (1, 1, math.sqrt(2)),
    (1, -1, math.sqrt(2)),
    (-1, 1, math.sqrt(2)),
    (-1, -1, math.sqrt(2)),
]


def plan_path(
    grid: Grid,
    start: tuple[float, float],
    goal: tuple[float, float],
) -> Optional[float]:
    """Shortest-path length in meters from start to goal, or None when blocked.

    The start cell is exempted from clearance within a small escape radius so
    that a robot parked flush against an object it just pushed can leave.
    """
    si, sj = grid.to_cell(*start)
    gi, gj = grid.to_cell(*goal)

    free = grid.free
    if not free[gi, gj]:
        return None

    if free[si, sj] and _segment_free(grid, *start, *goal):
        return math.hypot(goal[0] - start[0], goal[1] - start[1])

    if not free[si, sj]:
        r = int(START_ESCAPE_RADIUS / CELL)
        free = free.copy()
        ny, nx = free.shape
        i0, i1 = max(si - r, 0), min(si + r + 1, ny)
        j0, j1 = max(sj - r, 0), min(sj + r + 1, nx)
        yy, xx = np.mgrid[i0:i1, j0:j1]
        free[i0:i1, j0:j1] |= ((yy - si) ** 2 + (xx - sj) ** 2) <= r * r

    ny, nx = free.shape
    best = np.full((ny, nx), np.inf)
    best[si, sj] = 0.0
    frontier: list[tuple[float, float, int, int]] = []
    h0 = _octile(si, sj, gi, gj)
    heapq.heappush(frontier, (h0, 0.0, si, sj))
    while frontier:
        f, g, i, j = heapq.heappop(frontier)
        if (i, j) == (gi, gj):
            return g * CELL
        if g > best[i, j] + 1e-12:
            continue
        for di, dj, w in _DIRS:
            ni, nj = i + di, j + dj
            if not (0 <= ni < ny and 0 <= nj < nx) or not free[ni, nj]:
                continue
            if di != 0 and dj != 0 and not (free[i, nj] and free[ni, j]):
                continue  # no corner cutting
            ng = g + w
            if ng < best[ni, nj] - 1e-12:
                best[ni, nj] = ng
                heapq.heappush(frontier, (ng + _octile(ni, nj, gi, gj), ng, ni, nj))
    return None


def _octile(i: int, j: int, gi: int, gj: int) -> float:
    di, dj = abs(i - gi), abs(j - gj)
    return max(di, dj) + (math.sqrt(2) - 1.0) * min(di, dj)
