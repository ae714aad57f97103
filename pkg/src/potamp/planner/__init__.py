from .executor import UpdatePolicy, apply_event, execute_and_replan, make_lgbu_callback
from .model import ActionInstance, IterationRecord, PlanTrace, SymbolicState
from .search import DetectBinding, PlannerConfig, Task, enumerate_detect_bindings, plan, plan_cost
from .streams import (
    StreamExhausted,
    Viewpoint,
    detect_cost,
    inverse_visibility,
    nearest_reach_node,
    sample_pose_b,
)

__all__ = [
    "ActionInstance",
    "DetectBinding",
    "IterationRecord",
    "PlanTrace",
    "PlannerConfig",
    "StreamExhausted",
    "SymbolicState",
    "Task",
    "UpdatePolicy",
    "Viewpoint",
    "apply_event",
    "detect_cost",
    "enumerate_detect_bindings",
    "execute_and_replan",
    "inverse_visibility",
    "make_lgbu_callback",
    "nearest_reach_node",
    "plan",
    "plan_cost",
    "sample_pose_b",
]
