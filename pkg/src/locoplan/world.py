"""2.5D world model: axis-aligned objects, support/stacking queries, scripted events.

Geometry convention: an object's pose position is the (x, y) center of its
footprint and the *bottom* z of its volume. Support queries return top
surfaces; a movable object at rest has pose.position.z equal to the support
height beneath it.
"""
from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Optional

import numpy as np

from .geometry import Box, Pose, Vec3, snap_axis

GROUND_Z = 0.0
WALK_LEVEL_TOL = 0.011


class WorldError(Exception):
    pass


class OutOfBounds(WorldError):
    pass


class UnknownEvent(WorldError):
    pass


class SceneFormatError(WorldError):
    pass


class ObjectKind(Enum):
    BOX = "box"
    STAIRS = "stairs"
    BUTTON = "button"
    BELL = "bell"
    DOOR = "door"
    PLATFORM = "platform"
    PACKAGE = "package"
    GAP = "gap"
    WALL = "wall"
    ELEVATOR_CALL = "elevator_call"
    ELEVATOR_PANEL = "elevator_panel"


# Kinds that occupy volume: they support weight, block walking and block pushes.
# Buttons, bells, call buttons and panels are thin wall-mounted fixtures; gaps
# are pits. Doors block only while closed.
SOLID_KINDS = frozenset(
    {
        ObjectKind.BOX,
        ObjectKind.STAIRS,
        ObjectKind.DOOR,
        ObjectKind.PLATFORM,
        ObjectKind.PACKAGE,
        ObjectKind.WALL,
    }
)

MOVABLE_KINDS = frozenset({ObjectKind.BOX, ObjectKind.PACKAGE})


@dataclass
class ObjectSpec:
    id: str
    kind: ObjectKind
    pose: Pose
    size: Vec3
    movable: bool = False
    mass: float = 1.0
    # kind-specific payload
    step_heights: Optional[list[float]] = None  # stairs
    step_depth: Optional[float] = None  # stairs
    event: Optional[str] = None  # button / bell / elevator_call
    open: Optional[bool] = None  # door
    direction: Optional[str] = None  # elevator_call: "up" | "down"
    floors: Optional[list[int]] = None  # elevator_panel
    attached_to: Optional[str] = None  # rides along when the named object moves

    def __post_init__(self) -> None:
        if min(self.size.x, self.size.y, self.size.z) <= 0:
            raise WorldError(f"object {self.id}: size components must be > 0")
        if self.movable and self.kind not in MOVABLE_KINDS:
            raise WorldError(f"object {self.id}: kind {self.kind.value} cannot be movable")
        if self.kind is ObjectKind.STAIRS:
            if not self.step_heights or any(h < 0 for h in self.step_heights):
                raise WorldError(f"stairs {self.id}: step_heights must be non-negative")
            if not self.step_depth or self.step_depth <= 0:
                raise WorldError(f"stairs {self.id}: step_depth must be > 0")

    @property
    def box(self) -> Box:
        p = self.pose.position
        return Box(p.x, p.y, p.z, self.size.x, self.size.y, self.size.z)

    @property
    def solid(self) -> bool:
        if self.kind is ObjectKind.DOOR:
            return not bool(self.open)
        return self.kind in SOLID_KINDS

    def top_at(self, x: float, y: float) -> float:
        """Top z of this object's surface at (x, y); footprint containment assumed."""
        if self.kind is not ObjectKind.STAIRS:
            return self.box.z1
        # Stairs ascend along the axis given by yaw (snapped to a grid axis),
        # starting from the low edge of the footprint.
        dx, dy = snap_axis(self.pose.yaw)
        b = self.box
        if dx != 0:
            u = (x - b.x0) if dx > 0 else (b.x1 - x)
        else:
            u = (y - b.y0) if dy > 0 else (b.y1 - y)
        step = min(int(u / self.step_depth), len(self.step_heights) - 1)
        step = max(step, 0)
        return self.pose.position.z + sum(self.step_heights[: step + 1])

    def tread_tops(self) -> list[float]:
        """Absolute top z of each tread, low edge first (stairs only)."""
        if self.kind is not ObjectKind.STAIRS:
            return [self.box.z1]
        z = self.pose.position.z
        tops = []
        for h in self.step_heights:
            z += h
            tops.append(z)
        return tops


@dataclass
class RobotLimits:
    max_step_height: float = 0.35
    bipedal_reach_height: float = 0.85
    quad_body: Vec3 = field(default_factory=lambda: Vec3(0.6, 0.3, 0.35))
    push_mass_limit: float = 10.0
    reach_radius: float = 0.35
    walk_speed: float = 0.5
    push_speed: float = 0.2
    climb_speed: float = 0.25
    step_depth_min: float = 0.25
    touch_epsilon: float = 0.05
    bipedal_body_height: float = 0.8
    bipedal_base_height: float = 0.55
    max_bridge_gap: float = 0.2

    def __post_init__(self) -> None:
        for name in (
            "max_step_height",
            "bipedal_reach_height",
            "push_mass_limit",
            "reach_radius",
            "walk_speed",
            "push_speed",
            "climb_speed",
            "step_depth_min",
            "touch_epsilon",
            "bipedal_body_height",
            "bipedal_base_height",
            "max_bridge_gap",
        ):
            if getattr(self, name) <= 0:
                raise WorldError(f"robot limit {name} must be positive")

    @property
    def body_radius(self) -> float:
        """Half body diagonal in the plane; used to inflate obstacles."""
        return math.hypot(self.quad_body.x, self.quad_body.y) / 2.0


class Stance(Enum):
    QUADRUPEDAL = "quadrupedal"
    BIPEDAL = "bipedal"
    FALLEN = "fallen"


@dataclass
class RobotState:
    base: Pose
    stance: Stance = Stance.QUADRUPEDAL
    support_height: float = 0.0
    toe: Optional[Vec3] = None  # defined only while bipedal

    def __post_init__(self) -> None:
        if (self.toe is not None) != (self.stance is Stance.BIPEDAL):
            raise WorldError("toe must be present iff stance is bipedal")


def base_height_for(stance: Stance, limits: RobotLimits) -> float:
    if stance is Stance.BIPEDAL:
        return limits.bipedal_base_height
    if stance is Stance.FALLEN:
        return limits.quad_body.y / 2.0
    return limits.quad_body.z


@dataclass
class EventScript:
    """Scripted consequences of scene events (who answers the bell, elevator timing)."""

    human_response_prob: float = 1.0
    human_response_delay: float = 5.0
    door_id: Optional[str] = None
    elevator_car_id: Optional[str] = None
    floor_heights: dict[int, float] = field(default_factory=dict)
    elevator_answer_direction: Optional[str] = None  # "up" | "down"
    elevator_arrive_delay: float = 4.0
    elevator_ride_delay: float = 6.0


@dataclass
class ScheduledEvent:
    at: float
    event: str
    action: Optional[dict[str, Any]] = None


@dataclass
class Scene:
    objects: dict[str, ObjectSpec]
    robot: RobotState
    limits: RobotLimits
    bounds: tuple[float, float, float, float]  # (xmin, ymin, xmax, ymax)
    seed: int = 0
    clock: float = 0.0
    events_fired: set[str] = field(default_factory=set)
    scheduled: list[ScheduledEvent] = field(default_factory=list)
    script: EventScript = field(default_factory=EventScript)
    rng: np.random.Generator = field(default_factory=lambda: np.random.default_rng(0))

    def __post_init__(self) -> None:
        xmin, ymin, xmax, ymax = self.bounds
        if xmax <= xmin or ymax <= ymin:
            raise WorldError("bounds rectangle must have positive area")

    def in_bounds(self, x: float, y: float) -> bool:
        xmin, ymin, xmax, ymax = self.bounds
        return xmin <= x <= xmax and ymin <= y <= ymax

    def declared_events(self) -> set[str]:
        out = set()
        for obj in self.objects.values():
            if obj.event:
                out.add(obj.event)
        # consequence events reachable from declared triggers
        if self.script.door_id:
            out.add("door_opened")
        if self.script.elevator_car_id:
            out.add("elevator_arrived")
            for k in self.script.floor_heights:
                out.add(f"elevator_at_floor_{k}")
        return out

    def snapshot(self) -> "Scene":
        """Deep immutable-by-convention copy, safe to hand to observers."""
        return copy.deepcopy(self)

    def advance_clock(self, dt: float) -> None:
        if dt < 0:
            raise WorldError("clock must be monotonic")
        self.clock += dt
        self._process_due()

    def _process_due(self) -> None:
        due = [s for s in self.scheduled if s.at <= self.clock + 1e-9]
        if not due:
            return
        self.scheduled = [s for s in self.scheduled if s.at > self.clock + 1e-9]
        for item in sorted(due, key=lambda s: s.at):
            self.events_fired.add(item.event)
            if item.action:
                self._apply_action(item.action)

    def next_scheduled(self, event: str) -> Optional[float]:
        times = [s.at for s in self.scheduled if s.event == event]
        return min(times) if times else None

    def _apply_action(self, action: dict[str, Any]) -> None:
        kind = action["kind"]
        if kind == "open_door":
            door = self.objects.get(action["door_id"])
            if door is not None:
                door.open = True
        elif kind == "move_elevator":
            self._move_elevator(action["car_id"], action["target_z"])
        else:
            raise WorldError(f"unknown scripted action {kind!r}")

    def _move_elevator(self, car_id: str, target_z: float) -> None:
        car = self.objects.get(car_id)
        if car is None:
            return
        dz = target_z - car.pose.position.z
        if abs(dz) < 1e-12:
            return
        car_top = car.box.z1
        riders = []
        for obj in self.objects.values():
            if obj.id == car_id:
                continue
            if obj.attached_to == car_id:
                riders.append(obj)
            elif (
                obj.movable
                and abs(obj.pose.position.z - car_top) < 1e-6
                and car.box.contains_xy(obj.pose.position.x, obj.pose.position.y)
            ):
                riders.append(obj)
        robot_rides = (
            abs(self.robot.support_height - car_top) < 1e-6
            and car.box.contains_xy(self.robot.base.position.x, self.robot.base.position.y)
        )
        for obj in (car, *riders):
            p = obj.pose.position
            obj.pose = Pose(Vec3(p.x, p.y, p.z + dz), obj.pose.yaw)
        if robot_rides:
            r = self.robot
            bp = r.base.position
            r.base = Pose(Vec3(bp.x, bp.y, bp.z + dz), r.base.yaw)
            r.support_height += dz
            if r.toe is not None:
                r.toe = Vec3(r.toe.x, r.toe.y, r.toe.z + dz)


def support_height_at(scene: Scene, x: float, y: float, excluding: Optional[str] = None) -> float:
    """Top z of the highest surface under (x, y): ground, object tops, or a pit floor."""
    if not scene.in_bounds(x, y):
        raise OutOfBounds(f"({x:.3f}, {y:.3f}) outside scene bounds {scene.bounds}")
    best = GROUND_Z
    in_pit = False
    pit_floor = GROUND_Z
    for obj in scene.objects.values():
        if obj.id == excluding:
            continue
        if not obj.box.contains_xy(x, y):
            continue
        if obj.kind is ObjectKind.GAP:
            in_pit = True
            pit_floor = min(pit_floor, obj.pose.position.z - obj.size.z)
            continue
        if obj.solid:
            best = max(best, obj.top_at(x, y))
    if in_pit and best == GROUND_Z:
        return pit_floor
    return best


def aabb_overlap(a: ObjectSpec, b: ObjectSpec) -> bool:
    """Positive-volume AABB intersection; exact face contact does not count."""
    return a.box.overlaps(b.box)


def settle_object(scene: Scene, obj_id: str) -> None:
    """Drop a movable object onto the support beneath its footprint center."""
    obj = scene.objects[obj_id]
    p = obj.pose.position
    support = support_height_at(scene, p.x, p.y, excluding=obj_id)
    if abs(support - p.z) > 1e-12:
        obj.pose = Pose(Vec3(p.x, p.y, support), obj.pose.yaw)


def fire_event(scene: Scene, event: str) -> None:
    """Fire a scene event and apply its scripted consequence.

    Immediate events join the fired set now; consequences that model a human
    or a machine responding are scheduled and take effect when the clock
    reaches them.
    """
    if event not in scene.declared_events():
        raise UnknownEvent(event)
    script = scene.script

    if event == "door_opened" and script.door_id:
        # A ring requesting the door: the human behind it may or may not answer.
        if float(scene.rng.random()) < script.human_response_prob:
            scene.scheduled.append(
                ScheduledEvent(
                    at=scene.clock + script.human_response_delay,
                    event="door_opened",
                    action={"kind": "open_door", "door_id": script.door_id},
                )
            )
        return

    if event == "door_switch_pressed" and script.door_id:
        scene.events_fired.add(event)
        scene.scheduled.append(
            ScheduledEvent(
                at=scene.clock,
                event="door_opened",
                action={"kind": "open_door", "door_id": script.door_id},
            )
        )
        scene._process_due()
        return

    if event.startswith("elevator_called_") and script.elevator_car_id:
        scene.events_fired.add(event)
        direction = event.rsplit("_", 1)[-1]
        if direction == script.elevator_answer_direction:
            target_z = _caller_floor_z(scene)
            scene.scheduled.append(
                ScheduledEvent(
                    at=scene.clock + script.elevator_arrive_delay,
                    event="elevator_arrived",
                    action={
                        "kind": "move_elevator",
                        "car_id": script.elevator_car_id,
                        "target_z": target_z,
                    },
                )
            )
        return

    if event.startswith("floor_selected_") and script.elevator_car_id:
        scene.events_fired.add(event)
        floor = int(event.rsplit("_", 1)[-1])
        if floor in script.floor_heights:
            car = scene.objects[script.elevator_car_id]
            target_z = script.floor_heights[floor] - car.size.z
            scene.scheduled.append(
                ScheduledEvent(
                    at=scene.clock + script.elevator_ride_delay,
                    event=f"elevator_at_floor_{floor}",
                    action={
                        "kind": "move_elevator",
                        "car_id": script.elevator_car_id,
                        "target_z": target_z,
                    },
                )
            )
        return

    scene.events_fired.add(event)


def _caller_floor_z(scene: Scene) -> float:
    """Car floor z that puts the car top flush with the robot's current floor."""
    car = scene.objects[scene.script.elevator_car_id]
    support = scene.robot.support_height
    floors = scene.script.floor_heights
    nearest = min(floors.values(), key=lambda z: abs(z - support)) if floors else support
    return nearest - car.size.z


def validate_scene(scene: Scene) -> None:
    """Construction invariants: in-bounds, no static interpenetration, objects at rest."""
    for obj in scene.objects.values():
        p = obj.pose.position
        if not scene.in_bounds(p.x, p.y):
            raise WorldError(f"object {obj.id} outside bounds")
    statics = [o for o in scene.objects.values() if o.solid and not o.movable]
    for i, a in enumerate(statics):
        for b in statics[i + 1 :]:
            if aabb_overlap(a, b):
                raise WorldError(f"static objects {a.id} and {b.id} interpenetrate")
    for obj in scene.objects.values():
        if not obj.movable:
            continue
        p = obj.pose.position
        support = support_height_at(scene, p.x, p.y, excluding=obj.id)
        if abs(p.z - support) > 1e-6:
            raise WorldError(
                f"movable object {obj.id} floats: bottom z {p.z:.4f} vs support {support:.4f}"
            )


# ---------------------------------------------------------------------------
# Scene file format (JSON). Top-level keys: objects, robot, limits, bounds,
# seed, plus optional script. Unknown keys are rejected.
# ---------------------------------------------------------------------------

_TOP_KEYS = {"objects", "robot", "limits", "bounds", "seed", "script"}
_OBJECT_KEYS = {
    "id",
    "kind",
    "pose",
    "size",
    "movable",
    "mass",
    "step_heights",
    "step_depth",
    "event",
    "open",
    "direction",
    "floors",
    "attached_to",
}
_ROBOT_KEYS = {"base", "stance", "support_height", "toe"}
_SCRIPT_KEYS = {
    "human_response_prob",
    "human_response_delay",
    "door_id",
    "elevator_car_id",
    "floor_heights",
    "elevator_answer_direction",
    "elevator_arrive_delay",
    "elevator_ride_delay",
}


def _check_keys(record: dict, allowed: set[str], where: str) -> None:
    unknown = set(record) - allowed
    if unknown:
        raise SceneFormatError(f"unknown keys in {where}: {sorted(unknown)}")


def _vec(v: Any, where: str) -> Vec3:
    if not (isinstance(v, (list, tuple)) and len(v) == 3):
        raise SceneFormatError(f"{where}: expected [x, y, z]")
    return Vec3(float(v[0]), float(v[1]), float(v[2]))


def _pose(v: Any, where: str) -> Pose:
    if not isinstance(v, dict) or set(v) - {"position", "yaw"}:
        raise SceneFormatError(f"{where}: expected {{position, yaw}}")
    return Pose(_vec(v["position"], where), float(v.get("yaw", 0.0)))


def scene_to_dict(scene: Scene) -> dict[str, Any]:
    objs = []
    for obj in scene.objects.values():
        rec: dict[str, Any] = {
            "id": obj.id,
            "kind": obj.kind.value,
            "pose": {"position": list(obj.pose.position.as_tuple()), "yaw": obj.pose.yaw},
            "size": list(obj.size.as_tuple()),
            "movable": obj.movable,
            "mass": obj.mass,
        }
        for name in ("step_heights", "step_depth", "event", "open", "direction", "floors", "attached_to"):
            val = getattr(obj, name)
            if val is not None:
                rec[name] = val
        objs.append(rec)
    robot: dict[str, Any] = {
        "base": {"position": list(scene.robot.base.position.as_tuple()), "yaw": scene.robot.base.yaw},
        "stance": scene.robot.stance.value,
        "support_height": scene.robot.support_height,
    }
    if scene.robot.toe is not None:
        robot["toe"] = list(scene.robot.toe.as_tuple())
    limits = {
        "max_step_height": scene.limits.max_step_height,
        "bipedal_reach_height": scene.limits.bipedal_reach_height,
        "quad_body": list(scene.limits.quad_body.as_tuple()),
        "push_mass_limit": scene.limits.push_mass_limit,
        "reach_radius": scene.limits.reach_radius,
        "walk_speed": scene.limits.walk_speed,
        "push_speed": scene.limits.push_speed,
        "climb_speed": scene.limits.climb_speed,
        "step_depth_min": scene.limits.step_depth_min,
        "touch_epsilon": scene.limits.touch_epsilon,
        "bipedal_body_height": scene.limits.bipedal_body_height,
        "bipedal_base_height": scene.limits.bipedal_base_height,
        "max_bridge_gap": scene.limits.max_bridge_gap,
    }
    script = {
        "human_response_prob": scene.script.human_response_prob,
        "human_response_delay": scene.script.human_response_delay,
        "door_id": scene.script.door_id,
        "elevator_car_id": scene.script.elevator_car_id,
        "floor_heights": {str(k): v for k, v in scene.script.floor_heights.items()},
        "elevator_answer_direction": scene.script.elevator_answer_direction,
        "elevator_arrive_delay": scene.script.elevator_arrive_delay,
        "elevator_ride_delay": scene.script.elevator_ride_delay,
    }
    return {
        "objects": objs,
        "robot": robot,
        "limits": limits,
        "bounds": list(scene.bounds),
        "seed": scene.seed,
        "script": script,
    }


def scene_from_dict(data: dict[str, Any]) -> Scene:
    if not isinstance(data, dict):
        raise SceneFormatError("scene file must be a JSON object")
    _check_keys(data, _TOP_KEYS, "scene")
    for key in ("objects", "robot", "limits", "bounds", "seed"):
        if key not in data:
            raise SceneFormatError(f"scene missing required key {key!r}")

    objects: dict[str, ObjectSpec] = {}
    for rec in data["objects"]:
        _check_keys(rec, _OBJECT_KEYS, f"object {rec.get('id', '?')}")
        try:
            kind = ObjectKind(rec["kind"])
        except ValueError as exc:
            raise SceneFormatError(f"unknown object kind {rec.get('kind')!r}") from exc
        obj = ObjectSpec(
            id=str(rec["id"]),
            kind=kind,
            pose=_pose(rec["pose"], f"object {rec['id']}"),
            size=_vec(rec["size"], f"object {rec['id']}"),
            movable=bool(rec.get("movable", False)),
            mass=float(rec.get("mass", 1.0)),
            step_heights=rec.get("step_heights"),
            step_depth=rec.get("step_depth"),
            event=rec.get("event"),
            open=rec.get("open"),
            direction=rec.get("direction"),
            floors=rec.get("floors"),
            attached_to=rec.get("attached_to"),
        )
        if obj.id in objects:
            raise SceneFormatError(f"duplicate object id {obj.id!r}")
        objects[obj.id] = obj

    rrec = data["robot"]
    _check_keys(rrec, _ROBOT_KEYS, "robot")
    robot = RobotState(
        base=_pose(rrec["base"], "robot"),
        stance=Stance(rrec.get("stance", "quadrupedal")),
        support_height=float(rrec.get("support_height", 0.0)),
        toe=_vec(rrec["toe"], "robot.toe") if rrec.get("toe") is not None else None,
    )

    lrec = dict(data["limits"])
    if "quad_body" in lrec:
        lrec["quad_body"] = _vec(lrec["quad_body"], "limits.quad_body")
    limits = RobotLimits(**lrec)

    bounds = tuple(float(v) for v in data["bounds"])
    if len(bounds) != 4:
        raise SceneFormatError("bounds must be [xmin, ymin, xmax, ymax]")

    script = EventScript()
    if "script" in data:
        srec = data["script"]
        _check_keys(srec, _SCRIPT_KEYS, "script")
        script = EventScript(
            human_response_prob=float(srec.get("human_response_prob", 1.0)),
            human_response_delay=float(srec.get("human_response_delay", 5.0)),
            door_id=srec.get("door_id"),
            elevator_car_id=srec.get("elevator_car_id"),
            floor_heights={int(k): float(v) for k, v in srec.get("floor_heights", {}).items()},
            elevator_answer_direction=srec.get("elevator_answer_direction"),
            elevator_arrive_delay=float(srec.get("elevator_arrive_delay", 4.0)),
            elevator_ride_delay=float(srec.get("elevator_ride_delay", 6.0)),
        )

    seed = int(data["seed"])
    scene = Scene(
        objects=objects,
        robot=robot,
        limits=limits,
        bounds=bounds,  # type: ignore[arg-type]
        seed=seed,
        script=script,
        rng=np.random.default_rng(seed),
    )
    validate_scene(scene)
    return scene


def load_scene(path: str) -> Scene:
    with open(path, "r", encoding="utf-8") as fh:
        return scene_from_dict(json.load(fh))


def save_scene(scene: Scene, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scene_to_dict(scene), fh, indent=2, sort_keys=True)
        fh.write("\n")
