"""Skill call results and the configurable execution-noise regimes."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from ..world import RobotState


class FailReason(Enum):
    NO_PATH = "no_path"
    BAD_STANCE = "bad_stance"
    UNPUSHABLE = "unpushable"
    BLOCKED = "blocked"
    STEP_TOO_HIGH = "step_too_high"
    TREAD_TOO_SHALLOW = "tread_too_shallow"
    SLIP = "slip"
    NO_CLEARANCE = "no_clearance"
    OUT_OF_REACH = "out_of_reach"
    TIMEOUT = "timeout"
    BAD_TARGET = "bad_target"
    UNKNOWN_EVENT = "unknown_event"


@dataclass
class SkillOutcome:
    status: str  # "success" | "failure"
    duration: float
    terminal: RobotState
    reason: Optional[FailReason] = None
    min_distance: Optional[float] = None
    detail: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.duration < 0:
            raise ValueError("duration must be >= 0")
        if self.min_distance is not None and self.min_distance < 0:
            raise ValueError("min_distance must be >= 0")
        if self.status == "failure" and self.reason is None:
            raise ValueError("failures carry a reason")

    @property
    def ok(self) -> bool:
        return self.status == "success"


def success(duration: float, terminal: RobotState, **detail: Any) -> SkillOutcome:
    return SkillOutcome("success", duration, terminal, detail=detail)


def failure(
    reason: FailReason,
    duration: float,
    terminal: RobotState,
    min_distance: Optional[float] = None,
    **detail: Any,
) -> SkillOutcome:
    return SkillOutcome(
        "failure", duration, terminal, reason=reason, min_distance=min_distance, detail=detail
    )


@dataclass(frozen=True)
class NoiseRegime:
    """Terminal-state scatter of chained skills, as a tunable stand-in for
    how well consecutive policies hand off to each other."""

    push_terminal_sigma: float = 0.0
    climb_slip_prob: float = 0.0
    touch_jitter_sigma: float = 0.0
    hard_fall: bool = False  # slips end fallen instead of on the last stable surface

    def __post_init__(self) -> None:
        if min(self.push_terminal_sigma, self.climb_slip_prob, self.touch_jitter_sigma) < 0:
            raise ValueError("noise parameters must be >= 0")


# The chained-finetuned preset halves push scatter and slip probability
# relative to raw skill chaining; "default" is the chained behavior.
NOISE_PRESETS: dict[str, NoiseRegime] = {
    "zero": NoiseRegime(),
    "raw": NoiseRegime(push_terminal_sigma=0.06, climb_slip_prob=0.10, touch_jitter_sigma=0.02),
    "chained-finetuned": NoiseRegime(
        push_terminal_sigma=0.03, climb_slip_prob=0.05, touch_jitter_sigma=0.01
    ),
}
NOISE_PRESETS["default"] = NOISE_PRESETS["chained-finetuned"]
