"""Robot skill layer: catalog, kinematic skill procedures, outcomes, noise."""
from .catalog import Param, SkillCatalog, SkillSignature, default_catalog
from .kinematics import (
    climb_feasibility,
    climb_profile,
    climb_to_position,
    hand_touch_position,
    push_to_position,
    recover,
    reach_envelope_distance,
    sit_down,
    stand_up,
    walk_to_position,
    wait_for_event,
)
from .outcomes import NOISE_PRESETS, FailReason, NoiseRegime, SkillOutcome

__all__ = [
    "Param",
    "SkillCatalog",
    "SkillSignature",
    "default_catalog",
    "climb_feasibility",
    "climb_profile",
    "climb_to_position",
    "hand_touch_position",
    "push_to_position",
    "recover",
    "reach_envelope_distance",
    "sit_down",
    "stand_up",
    "walk_to_position",
    "wait_for_event",
    "NOISE_PRESETS",
    "FailReason",
    "NoiseRegime",
    "SkillOutcome",
]
