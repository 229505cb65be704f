"""Parameterized robot skills as kinematic procedures over a Scene.

Each skill is an atomic transaction: it validates its preconditions,
moves the world forward by its duration (processing any scheduled
events), and reports a SkillOutcome. Feasibility rules are separate
from noise: noise can only cause slips and scatter, never change a
feasibility verdict.
"""
from __future__ import annotations

import math
from typing import Optional

from ..geometry import Pose, Vec3
from ..world import (
    ObjectKind,
    Scene,
    Stance,
    UnknownEvent,
    base_height_for,
    fire_event,
    settle_object,
    support_height_at,
)
from . import grid
from .outcomes import FailReason, NoiseRegime, SkillOutcome, failure, success

PROFILE_RESOLUTION = 0.01
TOUCHABLE_KINDS = (ObjectKind.BUTTON, ObjectKind.BELL, ObjectKind.ELEVATOR_CALL)
STAND_UP_DURATION = 3.0
SIT_DOWN_DURATION = 2.0
RECOVER_DURATION = 4.0
TOUCH_DURATION = 2.0
PUSH_CLEARANCE = 0.05
TARGET_SURFACE_TOL = 0.05


def _quad_state(scene: Scene, x: float, y: float, yaw: float, support: float) -> None:
    r = scene.robot
    r.stance = Stance.QUADRUPEDAL
    r.support_height = support
    r.base = Pose(Vec3(x, y, support + base_height_for(Stance.QUADRUPEDAL, scene.limits)), yaw)
    r.toe = None


def _truncated_normal(scene: Scene, sigma: float) -> float:
    if sigma <= 0:
        return 0.0
    while True:
        v = float(scene.rng.normal(0.0, sigma))
        if abs(v) <= 2.0 * sigma:
            return v


def walk_to_position(
    scene: Scene, target: Pose, avoid: Optional[str] = None, noise: NoiseRegime = NoiseRegime()
) -> SkillOutcome:
    r = scene.robot
    if r.stance is not Stance.QUADRUPEDAL:
        return failure(FailReason.BAD_STANCE, 0.0, r)
    tp = target.position
    if not scene.in_bounds(tp.x, tp.y):
        return failure(FailReason.NO_PATH, 0.0, r, detail={"why": "target outside bounds"})
    if abs(tp.z - r.support_height) > 0.0101:
        return failure(
            FailReason.NO_PATH,
            0.0,
            r,
            detail={"why": "target not on current support level", "target_z": tp.z},
        )
    start = (r.base.position.x, r.base.position.y)
    occ = grid.occupancy(scene, r.support_height, avoid=avoid)
    length = grid.plan_path(occ, start, (tp.x, tp.y))
    if length is None:
        return failure(FailReason.NO_PATH, 0.0, r)
    duration = length / scene.limits.walk_speed
    scene.advance_clock(duration)
    _quad_state(scene, tp.x, tp.y, target.yaw, r.support_height)
    return success(duration, r, path_length=length)


def _sweep_stop(scene: Scene, obj_id: str, start: Vec3, end: Vec3) -> float:
    """Largest fraction of the push segment the object covers before flush
    contact with a static solid; 1.0 when nothing is hit."""
    obj = scene.objects[obj_id]
    b = obj.box
    dx, dy = end.x - start.x, end.y - start.y
    t_stop = 1.0
    for other in scene.objects.values():
        if other.id == obj_id or not other.solid or other.movable:
            continue
        ob = other.box
        if not (b.z0 < ob.z1 and ob.z0 < b.z1):
            continue
        # per-axis interval of overlap along t
        tx = _axis_overlap_window(b.x0, b.x1, dx, ob.x0, ob.x1)
        ty = _axis_overlap_window(b.y0, b.y1, dy, ob.y0, ob.y1)
        if tx is None or ty is None:
            continue
        t_enter = max(tx[0], ty[0])
        t_exit = min(tx[1], ty[1])
        if t_enter < t_exit and t_enter < t_stop and t_exit > 0.0:
            t_stop = min(t_stop, max(t_enter, 0.0))
    return t_stop


def _axis_overlap_window(
    lo: float, hi: float, d: float, olo: float, ohi: float
) -> Optional[tuple[float, float]]:
    """t-interval during which [lo+td, hi+td] positively overlaps [olo, ohi]."""
    eps = 1e-9
    if abs(d) < eps:
        return (-math.inf, math.inf) if (hi > olo + eps and lo < ohi - eps) else None
    t0 = (olo - hi) / d
    t1 = (ohi - lo) / d
    if t0 > t1:
        t0, t1 = t1, t0
    return (t0, t1)


def push_to_position(
    scene: Scene, object_id: str, target: Pose, noise: NoiseRegime = NoiseRegime()
) -> SkillOutcome:
    r = scene.robot
    if r.stance is not Stance.QUADRUPEDAL:
        return failure(FailReason.BAD_STANCE, 0.0, r)
    obj = scene.objects.get(object_id)
    if obj is None:
        return failure(FailReason.BAD_TARGET, 0.0, r, detail={"why": f"no object {object_id!r}"})
    if not obj.movable or obj.mass > scene.limits.push_mass_limit:
        return failure(FailReason.UNPUSHABLE, 0.0, r, detail={"object": object_id})
    if abs(obj.pose.position.z - r.support_height) > 0.0101:
        return failure(
            FailReason.UNPUSHABLE,
            0.0,
            r,
            detail={"why": "object not on the robot's support level"},
        )

    start = obj.pose.position
    goal = Vec3(
        target.position.x + _truncated_normal(scene, noise.push_terminal_sigma),
        target.position.y + _truncated_normal(scene, noise.push_terminal_sigma),
        start.z,
    )
    push_dist = start.xy_dist(goal)
    if push_dist > 1e-9:
        ux, uy = (goal.x - start.x) / push_dist, (goal.y - start.y) / push_dist
    else:
        # degenerate push: approach only, keep the robot's current bearing
        ux, uy = math.cos(r.base.yaw), math.sin(r.base.yaw)

    half_along = _half_extent_along(obj.size, ux, uy)
    stand_off = half_along + scene.limits.quad_body.x / 2.0 + PUSH_CLEARANCE
    approach = Vec3(start.x - ux * stand_off, start.y - uy * stand_off, r.support_height)
    if not scene.in_bounds(approach.x, approach.y) or abs(
        support_height_at(scene, approach.x, approach.y) - r.support_height
    ) > 0.0101:
        return failure(FailReason.NO_PATH, 0.0, r, detail={"why": "no approach footing"})
    approach_dist = r.base.position.xy_dist(approach)

    blocked = False
    t_stop = 1.0
    if push_dist > 1e-9:
        t_stop = _sweep_stop(scene, object_id, start, goal)
        if t_stop < 1.0 - 1e-9:
            blocked = True
    final = Vec3(
        start.x + (goal.x - start.x) * t_stop,
        start.y + (goal.y - start.y) * t_stop,
        start.z,
    )
    moved = start.xy_dist(final)
    duration = (approach_dist + moved) / scene.limits.push_speed
    scene.advance_clock(duration)

    obj.pose = Pose(final, target.yaw)
    settle_object(scene, object_id)

    # robot ends flush behind the object, backed off to solid footing
    rb = Vec3(final.x - ux * stand_off, final.y - uy * stand_off, 0.0)
    rb = _back_to_footing(scene, rb, (-ux, -uy), r.support_height)
    _quad_state(scene, rb.x, rb.y, math.atan2(uy, ux), r.support_height)

    if blocked:
        return failure(
            FailReason.BLOCKED, duration, r, detail={"moved": moved, "object": object_id}
        )
    return success(duration, r, object=object_id, moved=moved)


def _half_extent_along(size: Vec3, ux: float, uy: float) -> float:
    return abs(ux) * size.x / 2.0 + abs(uy) * size.y / 2.0


def _back_to_footing(scene: Scene, point: Vec3, back: tuple[float, float], level: float) -> Vec3:
    x, y = point.x, point.y
    for _ in range(200):
        if scene.in_bounds(x, y) and abs(support_height_at(scene, x, y) - level) <= 0.0101:
            return Vec3(x, y, level)
        x += back[0] * PROFILE_RESOLUTION
        y += back[1] * PROFILE_RESOLUTION
    return Vec3(point.x, point.y, level)


def climb_profile(
    scene: Scene, start: tuple[float, float], target: tuple[float, float]
) -> list[tuple[float, float]]:
    """Support plateaus (height, length) along the straight footprint path,
    with spans shorter than the bridgeable gap merged away."""
    x0, y0 = start
    x1, y1 = target
    length = math.hypot(x1 - x0, y1 - y0)
    n = max(int(length / PROFILE_RESOLUTION), 1)
    plateaus: list[tuple[float, float]] = []
    for k in range(n + 1):
        t = k / n
        h = support_height_at(scene, x0 + (x1 - x0) * t, y0 + (y1 - y0) * t)
        if plateaus and abs(plateaus[-1][0] - h) < 1e-9:
            plateaus[-1] = (plateaus[-1][0], plateaus[-1][1] + length / n)
        else:
            plateaus.append((h, 0.0))
    if len(plateaus) <= 2:
        return plateaus
    # interior spans shorter than a bridgeable gap are stepped over
    kept = [plateaus[0]]
    for p in plateaus[1:-1]:
        if p[1] + PROFILE_RESOLUTION / 2 >= scene.limits.max_bridge_gap:
            kept.append(p)
    kept.append(plateaus[-1])
    merged: list[tuple[float, float]] = []
    for p in kept:
        if merged and abs(merged[-1][0] - p[0]) < 1e-9:
            merged[-1] = (merged[-1][0], merged[-1][1] + p[1])
        else:
            merged.append(p)
    return merged


def climb_feasibility(
    scene: Scene, start: tuple[float, float], target: tuple[float, float]
) -> tuple[Optional[FailReason], float, list[tuple[float, float]]]:
    """Noise-independent verdict: (None, 0, profile) when climbable, else
    the failing reason and the offending rise/depth."""
    profile = climb_profile(scene, start, target)
    limit = scene.limits.max_step_height
    for (h0, _), (h1, _) in zip(profile, profile[1:]):
        rise = abs(h1 - h0)
        if rise > limit + 1e-9:
            return FailReason.STEP_TOO_HIGH, rise, profile
    for h, depth in profile[1:-1]:
        if depth + PROFILE_RESOLUTION < scene.limits.step_depth_min:
            return FailReason.TREAD_TOO_SHALLOW, depth, profile
    return None, 0.0, profile


def climb_to_position(
    scene: Scene, target: Vec3, noise: NoiseRegime = NoiseRegime()
) -> SkillOutcome:
    r = scene.robot
    if r.stance is not Stance.QUADRUPEDAL:
        return failure(FailReason.BAD_STANCE, 0.0, r)
    if not scene.in_bounds(target.x, target.y):
        return failure(FailReason.BAD_TARGET, 0.0, r, detail={"why": "target outside bounds"})

    start_xy = (r.base.position.x, r.base.position.y)
    reason, value, profile = climb_feasibility(scene, start_xy, (target.x, target.y))
    if reason is FailReason.STEP_TOO_HIGH:
        return failure(reason, 0.0, r, detail={"rise": value})
    if reason is FailReason.TREAD_TOO_SHALLOW:
        return failure(reason, 0.0, r, detail={"depth": value})

    final_support = profile[-1][0]
    if abs(target.z - final_support) > TARGET_SURFACE_TOL:
        return failure(
            FailReason.BAD_TARGET,
            0.0,
            r,
            detail={"why": "target z is not the support surface", "surface_z": final_support},
        )

    total = sum(d for _, d in profile)
    yaw = math.atan2(target.y - start_xy[1], target.x - start_xy[0]) if total > 1e-9 else r.base.yaw

    # each rise may slip; a slip strands the robot on the last stable plateau
    covered = profile[0][1]
    for idx in range(1, len(profile)):
        if noise.climb_slip_prob > 0 and float(scene.rng.random()) < noise.climb_slip_prob:
            frac = covered / total if total > 1e-9 else 1.0
            sx = start_xy[0] + (target.x - start_xy[0]) * frac
            sy = start_xy[1] + (target.y - start_xy[1]) * frac
            sx, sy = _settle_point_on(scene, sx, sy, profile[idx - 1][0], start_xy)
            duration = covered / scene.limits.climb_speed
            scene.advance_clock(duration)
            stable = profile[idx - 1][0]
            if noise.hard_fall:
                r.stance = Stance.FALLEN
                r.support_height = stable
                r.base = Pose(
                    Vec3(sx, sy, stable + base_height_for(Stance.FALLEN, scene.limits)), yaw
                )
                r.toe = None
            else:
                _quad_state(scene, sx, sy, yaw, stable)
            return failure(FailReason.SLIP, duration, r, detail={"at_step": idx})
        covered += profile[idx][1]

    duration = total / scene.limits.climb_speed
    scene.advance_clock(duration)
    _quad_state(scene, target.x, target.y, yaw, final_support)
    return success(duration, r, rises=len(profile) - 1)


def _settle_point_on(
    scene: Scene,
    x: float,
    y: float,
    height: float,
    origin: tuple[float, float],
) -> tuple[float, float]:
    """Walk back toward the origin until (x, y) sits on the given support height."""
    dx, dy = origin[0] - x, origin[1] - y
    d = math.hypot(dx, dy)
    if d < 1e-9:
        return x, y
    ux, uy = dx / d, dy / d
    for _ in range(int(d / PROFILE_RESOLUTION) + 1):
        if abs(support_height_at(scene, x, y) - height) < 1e-6:
            return x, y
        x += ux * PROFILE_RESOLUTION
        y += uy * PROFILE_RESOLUTION
    return origin


def stand_up(scene: Scene, noise: NoiseRegime = NoiseRegime()) -> SkillOutcome:
    r = scene.robot
    if r.stance is not Stance.QUADRUPEDAL:
        return failure(FailReason.BAD_STANCE, 0.0, r)
    bx, by = r.base.position.x, r.base.position.y
    s = r.support_height
    top = s + scene.limits.bipedal_body_height
    for obj in scene.objects.values():
        if not obj.solid or not obj.box.contains_xy(bx, by):
            continue
        if obj.box.z0 < top and obj.box.z1 > s + 0.05:
            return failure(FailReason.NO_CLEARANCE, 0.0, r, detail={"under": obj.id})
    scene.advance_clock(STAND_UP_DURATION)
    r.stance = Stance.BIPEDAL
    r.base = Pose(Vec3(bx, by, s + scene.limits.bipedal_base_height), r.base.yaw)
    r.toe = Vec3(
        bx + math.cos(r.base.yaw) * 0.25,
        by + math.sin(r.base.yaw) * 0.25,
        s + scene.limits.bipedal_base_height,
    )
    return success(STAND_UP_DURATION, r)


def reach_envelope_distance(scene: Scene, target: Vec3) -> float:
    """Distance from target to the closed bipedal reach envelope (0 if inside)."""
    r = scene.robot
    h = math.hypot(target.x - r.base.position.x, target.y - r.base.position.y)
    d_out = max(0.0, h - scene.limits.reach_radius)
    z_out = max(0.0, (target.z - r.support_height) - scene.limits.bipedal_reach_height)
    return math.hypot(d_out, z_out)


def hand_touch_position(
    scene: Scene, target: Vec3, noise: NoiseRegime = NoiseRegime()
) -> SkillOutcome:
    r = scene.robot
    if r.stance is not Stance.BIPEDAL:
        return failure(FailReason.BAD_STANCE, 0.0, r)
    scene.advance_clock(TOUCH_DURATION)

    envelope_gap = reach_envelope_distance(scene, target)
    if envelope_gap > 1e-12:
        reached = _closest_envelope_point(scene, target)
        r.toe = reached
        return failure(
            FailReason.OUT_OF_REACH,
            TOUCH_DURATION,
            r,
            min_distance=envelope_gap,
            detail={"target": target.as_tuple()},
        )

    toe = Vec3(
        target.x + _truncated_normal(scene, noise.touch_jitter_sigma),
        target.y + _truncated_normal(scene, noise.touch_jitter_sigma),
        target.z + _truncated_normal(scene, noise.touch_jitter_sigma),
    )
    r.toe = toe
    _fire_touched(scene, toe)
    dist = toe.dist(target)
    if dist > scene.limits.touch_epsilon:
        return failure(FailReason.OUT_OF_REACH, TOUCH_DURATION, r, min_distance=dist)
    return SkillOutcome("success", TOUCH_DURATION, r, min_distance=dist)


def _closest_envelope_point(scene: Scene, target: Vec3) -> Vec3:
    r = scene.robot
    bx, by = r.base.position.x, r.base.position.y
    dx, dy = target.x - bx, target.y - by
    h = math.hypot(dx, dy)
    if h > scene.limits.reach_radius and h > 1e-9:
        scale = scene.limits.reach_radius / h
        dx, dy = dx * scale, dy * scale
    z = min(target.z, r.support_height + scene.limits.bipedal_reach_height)
    return Vec3(bx + dx, by + dy, z)


def _fire_touched(scene: Scene, point: Vec3) -> None:
    for obj in scene.objects.values():
        if obj.kind in TOUCHABLE_KINDS and obj.event:
            if obj.box.center().dist(point) <= scene.limits.touch_epsilon:
                fire_event(scene, obj.event)


def sit_down(scene: Scene, noise: NoiseRegime = NoiseRegime()) -> SkillOutcome:
    r = scene.robot
    if r.stance is not Stance.BIPEDAL:
        return failure(FailReason.BAD_STANCE, 0.0, r)
    scene.advance_clock(SIT_DOWN_DURATION)
    _quad_state(scene, r.base.position.x, r.base.position.y, r.base.yaw, r.support_height)
    return success(SIT_DOWN_DURATION, r)


def recover(scene: Scene, noise: NoiseRegime = NoiseRegime()) -> SkillOutcome:
    r = scene.robot
    scene.advance_clock(RECOVER_DURATION)
    support = support_height_at(scene, r.base.position.x, r.base.position.y)
    _quad_state(scene, r.base.position.x, r.base.position.y, r.base.yaw, support)
    return success(RECOVER_DURATION, r)


def wait_for_event(
    scene: Scene, event: str, timeout: float, noise: NoiseRegime = NoiseRegime()
) -> SkillOutcome:
    if timeout <= 0:
        raise ValueError("timeout must be > 0")
    if event not in scene.declared_events():
        raise UnknownEvent(event)
    r = scene.robot
    if event in scene.events_fired:
        return success(0.0, r, event=event)
    at = scene.next_scheduled(event)
    if at is not None and at <= scene.clock + timeout + 1e-9:
        dt = max(at - scene.clock, 0.0)
        scene.advance_clock(dt)
        return success(dt, r, event=event)
    scene.advance_clock(timeout)
    return failure(FailReason.TIMEOUT, timeout, r, detail={"event": event})
