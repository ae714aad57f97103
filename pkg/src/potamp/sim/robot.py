"""Robot state, visibility, the noisy detector, and action execution.

The simulator owns the ground truth (true object poses, all occluders); the
estimator only ever sees DetectionResults. Detection frequencies are kept
calibrated with the estimator's observation model: a visible object is
reported with probability 1 - p_fn, and a false positive fires per surface
with probability p_fp scaled by the surface's visible area fraction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..belief import Detection, HierarchicalBelief, NoiseParams, ObservationEvent, compute_visibility
from ..errors import ContractViolation
from ..geometry import visible_mask
from ..world import EnvironmentSpec


@dataclass(frozen=True)
class VisionConfig:
    """View cone parameters; these are workbench constants, not measured ones."""

    half_angle: float = math.pi / 4
    max_range: float = 3.5
    sweep_offsets: tuple[float, ...] = (-math.pi / 8, 0.0, math.pi / 8)
    area_grid: int = 16


@dataclass(frozen=True)
class RobotState:
    node_id: int
    heading: float = 0.0
    holding: int | None = None  # object id


@dataclass
class SimState:
    """Mutable ground truth for one run."""

    env: EnvironmentSpec
    object_pose: dict[int, tuple[float, float, float]]
    object_surface: dict[int, int]
    robot: RobotState
    sim_time: float = 0.0
    fn_coins: list[bool] = field(default_factory=list)  # pre-drawn, consumed FIFO

    @classmethod
    def from_env(cls, env: EnvironmentSpec, fn_coins=()) -> "SimState":
        return cls(
            env=env,
            object_pose={o.id: o.pose for o in env.objects},
            object_surface={o.id: o.surface_id for o in env.objects},
            robot=RobotState(env.start_node),
            fn_coins=list(fn_coins),
        )

    def draw_fn_coin(self, rng: np.random.Generator, p_fn: float) -> bool:
        """True means the look false-negatives. Scripted coins take priority."""
        if self.fn_coins:
            return self.fn_coins.pop(0)
        return bool(rng.random() < p_fn)


# execution-time cost model (seconds); declared, not measured
NAV_SPEED = 0.25  # m/s
HEAD_WAYPOINT_TIME = 2.0
MANIPULATION_TIME = 5.0
REACH_RADIUS = 0.8


def visible_particles(
    env: EnvironmentSpec,
    origin: np.ndarray,
    headings,
    points: np.ndarray,
    occluders=None,
    vision: VisionConfig = VisionConfig(),
) -> np.ndarray:
    """Union over head waypoints of cone-and-unblocked visibility."""
    if occluders is None:
        occluders = [o.rect for o in env.occluders]
    pts = np.atleast_2d(points)
    mask = np.zeros(len(pts), dtype=bool)
    for heading in np.atleast_1d(headings):
        mask |= visible_mask(origin, float(heading), vision.half_angle,
                             vision.max_range, pts, occluders, env.walls)
    return mask


def surface_visible_fraction(
    env: EnvironmentSpec,
    origin: np.ndarray,
    headings,
    surface_id: int,
    occluders=None,
    vision: VisionConfig = VisionConfig(),
) -> float:
    """Fraction of the surface's area grid inside the unoccluded view."""
    grid = env.surfaces[surface_id].rect.grid_points(vision.area_grid)
    mask = visible_particles(env, origin, headings, grid, occluders, vision)
    return float(mask.mean())


def sense(
    state: SimState,
    belief: HierarchicalBelief,
    headings,
    noise: NoiseParams,
    rng: np.random.Generator,
    vision: VisionConfig = VisionConfig(),
) -> ObservationEvent:
    """One merged look from the robot's current node across head waypoints."""
    env = state.env
    origin = env.node(state.robot.node_id).xy
    positions = belief.flat_positions()
    mask = visible_particles(env, origin, headings, positions, vision=vision)
    seen_mask = mask.reshape(belief.num_surfaces, belief.particles_per_surface)
    report = compute_visibility(belief, seen_mask)

    detections: dict[int, Detection] = {}
    for obj in env.objects:
        if state.robot.holding == obj.id:
            continue
        pose = state.object_pose[obj.id]
        pt = np.array([[pose[0], pose[1]]])
        if not visible_particles(env, origin, headings, pt, vision=vision)[0]:
            continue
        if state.draw_fn_coin(rng, noise.p_fn):
            continue
        obs = np.array(pose[:2]) + rng.normal(0.0, noise.sigma, size=2)
        surf = env.surfaces[state.object_surface[obj.id]]
        obs[0] = min(max(obs[0], surf.rect.x0), surf.rect.x1)
        obs[1] = min(max(obs[1], surf.rect.y0), surf.rect.y1)
        detections.setdefault(obj.id, Detection(obj.id, obs, surf.id))

    observed = {d.surface_id for d in detections.values()}
    if noise.p_fp > 0.0:
        for surf in env.surfaces:
            frac = surface_visible_fraction(env, origin, headings, surf.id,
                                            vision=vision)
            if frac <= 0.0:
                continue
            observed.add(surf.id)
            if rng.random() < noise.p_fp * frac:
                ghost = env.objects[int(rng.integers(0, len(env.objects)))]
                pos = surf.rect.sample(rng, 1)[0]
                detections.setdefault(ghost.id, Detection(ghost.id, pos, surf.id))

    return ObservationEvent(
        target_id=belief.object_id,
        visibility=report,
        seen_mask=seen_mask,
        detections=tuple(detections.values()),
        observed_surfaces=tuple(sorted(observed)),
    )


@dataclass(frozen=True)
class ActionOutcome:
    success: bool
    reason: str = ""
    event: ObservationEvent | None = None
    duration: float = 0.0


def execute_move(state: SimState, to_node: int) -> ActionOutcome:
    dist = state.env.nav_distance(state.robot.node_id, to_node)
    if not math.isfinite(dist):
        return ActionOutcome(False, "unreachable node")
    state.robot = replace(state.robot, node_id=to_node)
    duration = dist / NAV_SPEED
    state.sim_time += duration
    return ActionOutcome(True, duration=duration)


def execute_detect(
    state: SimState,
    belief: HierarchicalBelief,
    aim: np.ndarray,
    noise: NoiseParams,
    rng: np.random.Generator,
    vision: VisionConfig = VisionConfig(),
) -> ActionOutcome:
    """Sweep the head across the aim point and merge the waypoint looks."""
    origin = state.env.node(state.robot.node_id).xy
    bearing = math.atan2(aim[1] - origin[1], aim[0] - origin[0])
    headings = [bearing + off for off in vision.sweep_offsets]
    state.robot = replace(state.robot, heading=bearing)
    event = sense(state, belief, headings, noise, rng, vision)
    duration = HEAD_WAYPOINT_TIME * len(vision.sweep_offsets)
    state.sim_time += duration
    found = event.target_detection is not None
    return ActionOutcome(found, "" if found else "target not detected",
                         event=event, duration=duration)


def execute_pick(state: SimState, object_id: int, confirmed_pose) -> ActionOutcome:
    """Pick succeeds when the object was pose-confirmed by a detect and its
    true pose is within arm's reach of the base."""
    duration = MANIPULATION_TIME
    state.sim_time += duration
    if state.robot.holding is not None:
        return ActionOutcome(False, "hand not empty", duration=duration)
    if confirmed_pose is None:
        return ActionOutcome(False, "pose never confirmed by detect", duration=duration)
    true_pose = state.object_pose[object_id]
    base = state.env.node(state.robot.node_id).xy
    dist = math.hypot(true_pose[0] - base[0], true_pose[1] - base[1])
    if dist > REACH_RADIUS:
        return ActionOutcome(False, f"object {dist:.2f} m away, beyond reach",
                             duration=duration)
    state.robot = replace(state.robot, holding=object_id)
    return ActionOutcome(True, duration=duration)


def execute_place(state: SimState, surface_id: int, rng: np.random.Generator) -> ActionOutcome:
    duration = MANIPULATION_TIME
    state.sim_time += duration
    held = state.robot.holding
    if held is None:
        return ActionOutcome(False, "nothing held", duration=duration)
    surf = state.env.surfaces[surface_id]
    base = state.env.node(state.robot.node_id).xy
    center = surf.rect.center
    if math.hypot(center[0] - base[0], center[1] - base[1]) > REACH_RADIUS + 1.2:
        return ActionOutcome(False, "surface out of reach", duration=duration)
    margin = 0.1
    x = float(rng.uniform(surf.rect.x0 + margin, surf.rect.x1 - margin))
    y = float(rng.uniform(surf.rect.y0 + margin, surf.rect.y1 - margin))
    state.object_pose[held] = (x, y, 0.0)
    state.object_surface[held] = surface_id
    state.robot = replace(state.robot, holding=None)
    return ActionOutcome(True, duration=duration)


def assert_valid_robot(state: SimState) -> None:
    node = state.env.node(state.robot.node_id)
    if state.env.room_of_point(node.x, node.y) is None:
        raise ContractViolation("robot base outside every room")
