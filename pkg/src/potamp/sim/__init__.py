from .dataset import AnnotationEntry, PlacementDataset, aggregate_annotations, score_annotation
from .robot import (
    ActionOutcome,
    RobotState,
    SimState,
    VisionConfig,
    execute_detect,
    execute_move,
    execute_pick,
    execute_place,
    sense,
    surface_visible_fraction,
    visible_particles,
)
from .sampler import sample_environment
from .svg import render_environment, save_svg

__all__ = [
    "ActionOutcome",
    "AnnotationEntry",
    "PlacementDataset",
    "RobotState",
    "SimState",
    "VisionConfig",
    "aggregate_annotations",
    "execute_detect",
    "execute_move",
    "execute_pick",
    "execute_place",
    "render_environment",
    "sample_environment",
    "save_svg",
    "score_annotation",
    "sense",
    "surface_visible_fraction",
    "visible_particles",
]
