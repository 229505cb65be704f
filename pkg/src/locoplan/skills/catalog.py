"""The skill API surface exposed to the plan language and to the agents.

Documentation strings here are the single source used for prompt
assembly and the docs build; the validator also reads the structured
constraint fields (stance, level rules) from the same entries.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass(frozen=True)
class Param:
    name: str
    type: str  # "vec3" | "number" | "string"
    default: Optional[Any] = None

    @property
    def optional(self) -> bool:
        return self.default is not None


@dataclass(frozen=True)
class SkillSignature:
    name: str
    params: tuple[Param, ...]
    doc: str
    constraints: tuple[str, ...] = ()
    stance_pre: Optional[str] = None  # required stance before the call
    stance_post: Optional[str] = None  # stance after a successful call

    def signature_text(self) -> str:
        parts = []
        for p in self.params:
            if p.optional:
                parts.append(f"{p.name}: {p.type} = {json.dumps(p.default)}")
            else:
                parts.append(f"{p.name}: {p.type}")
        return f"{self.name}({', '.join(parts)})"


@dataclass
class SkillCatalog:
    entries: dict[str, SkillSignature] = field(default_factory=dict)

    def add(self, sig: SkillSignature) -> None:
        self.entries[sig.name] = sig

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def get(self, name: str) -> Optional[SkillSignature]:
        return self.entries.get(name)

    def to_document(self) -> dict[str, Any]:
        return {
            "skills": [
                {
                    "name": s.name,
                    "signature": s.signature_text(),
                    "doc": s.doc,
                    "constraints": list(s.constraints),
                    "stance_pre": s.stance_pre,
                    "stance_post": s.stance_post,
                }
                for s in self.entries.values()
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_document(), indent=2)

    def render_for_prompt(self) -> str:
        lines = []
        for s in self.entries.values():
            lines.append(f"- {s.signature_text()}")
            lines.append(f"    {s.doc}")
            for c in s.constraints:
                lines.append(f"    constraint: {c}")
        return "\n".join(lines)


def default_catalog() -> SkillCatalog:
    cat = SkillCatalog()
    cat.add(
        SkillSignature(
            name="walk_to_position",
            params=(
                Param("target", "vec3"),
                Param("yaw", "number", 0.0),
                Param("avoid", "string", ""),
            ),
            doc=(
                "Walk on four legs to the target point, planning around obstacles. "
                "The target z must equal the surface height the robot currently stands on. "
                "When avoid names an object id, the path keeps extra clearance from it."
            ),
            constraints=(
                "requires quadrupedal stance",
                "target must lie on the current support surface (same z)",
                "fails with no_path when the target is blocked or on another level",
            ),
            stance_pre="quadrupedal",
            stance_post="quadrupedal",
        )
    )
    cat.add(
        SkillSignature(
            name="push_to_position",
            params=(
                Param("object_id", "string"),
                Param("target", "vec3"),
                Param("yaw", "number", 0.0),
            ),
            doc=(
                "Walk behind the named movable object and push it along a straight line "
                "until its footprint center reaches the target x, y. Pushing stops flush "
                "if a fixed object is in the way."
            ),
            constraints=(
                "requires quadrupedal stance",
                "object must be movable and lighter than the push mass limit",
                "object and robot must be on the same support level",
                "the target must leave clearance from fixed objects or the push is blocked",
            ),
            stance_pre="quadrupedal",
            stance_post="quadrupedal",
        )
    )
    cat.add(
        SkillSignature(
            name="climb_to_position",
            params=(Param("target", "vec3"),),
            doc=(
                "Climb along the straight line from the current position to the target, "
                "stepping between support surfaces. The target z must be the top surface "
                "height at the target x, y (object top, not object center)."
            ),
            constraints=(
                "requires quadrupedal stance",
                "every rise between consecutive surfaces must be at most max_step_height",
                "every intermediate tread must be at least step_depth_min deep",
                "target z must equal the support surface height at the target point",
            ),
            stance_pre="quadrupedal",
            stance_post="quadrupedal",
        )
    )
    cat.add(
        SkillSignature(
            name="stand_up",
            params=(),
            doc="Pitch up onto the hind legs. Requires overhead clearance at the current spot.",
            constraints=("requires quadrupedal stance",),
            stance_pre="quadrupedal",
            stance_post="bipedal",
        )
    )
    cat.add(
        SkillSignature(
            name="hand_touch_position",
            params=(Param("target", "vec3"),),
            doc=(
                "While standing on the hind legs, reach the target point with a front toe. "
                "Reachable targets lie within reach_radius horizontally of the base and at "
                "most bipedal_reach_height above the surface the robot stands on. Touching "
                "within touch_epsilon of a button or bell presses it."
            ),
            constraints=(
                "requires bipedal stance",
                "target must be inside the reach envelope (reach_radius, bipedal_reach_height)",
                "account for the height of whatever the robot stands on",
            ),
            stance_pre="bipedal",
            stance_post="bipedal",
        )
    )
    cat.add(
        SkillSignature(
            name="sit_down",
            params=(),
            doc="Return from the bipedal stance to standing on four legs.",
            constraints=("requires bipedal stance",),
            stance_pre="bipedal",
            stance_post="quadrupedal",
        )
    )
    cat.add(
        SkillSignature(
            name="recover",
            params=(),
            doc="Restore a stable four-legged stance from any state, including after a fall.",
            constraints=(),
            stance_pre=None,
            stance_post="quadrupedal",
        )
    )
    cat.add(
        SkillSignature(
            name="wait_for_event",
            params=(Param("event", "string"), Param("timeout", "number")),
            doc=(
                "Wait until the named scene event fires (for example a door opening after "
                "the bell was rung), or give up after timeout seconds."
            ),
            constraints=("timeout must be positive",),
            stance_pre=None,
            stance_post=None,
        )
    )
    return cat
