"""Stream-style samplers that ground continuous bindings for the planner.

The pose sampler draws from the belief's particle set; the viewpoint sampler
returns a reachable base node whose swept view covers as much of the
surface's current particle weight as possible, judged against walls and the
occluders the robot knows about.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..belief import HierarchicalBelief
from ..errors import PotampError
from ..geometry import Rect, visible_mask
from ..sim.robot import VisionConfig
from ..world import EnvironmentSpec

DETECT_BASE_COST = 1.0
MASS_FLOOR = 1e-4


class StreamExhausted(PotampError):
    """The sampler could not produce a binding; the planner tries others."""


def sample_pose_b(belief: HierarchicalBelief, object_id: int, surface: int,
                  rng: np.random.Generator) -> np.ndarray:
    """Draw a pose for the object from the surface's weighted particles."""
    weights = belief.weights[surface]
    total = weights.sum()
    if len(weights) == 0 or total <= 0:
        raise StreamExhausted(f"no particle mass on surface {surface}")
    idx = int(rng.choice(len(weights), p=weights / total))
    return belief.particles[surface][idx, :2].copy()


@dataclass(frozen=True)
class Viewpoint:
    node_id: int
    bearing: float
    headings: tuple[float, ...]
    coverage: float  # particle weight fraction the sweep is expected to see
    pose_clear: bool  # line of sight to the aimed pose, occluders included


def inverse_visibility(
    env: EnvironmentSpec,
    belief: HierarchicalBelief,
    surface: int,
    pose: np.ndarray,
    known_occluders: list[Rect],
    vision: VisionConfig,
    from_node: int | None = None,
) -> Viewpoint:
    """Best approach node for seeing `pose` on `surface`.

    Candidates must have wall-free line of sight to the pose and be within
    sensing range; candidates blocked only by known occluders stay eligible
    but rank behind clear ones. Ties prefer higher particle coverage, then
    shorter travel, then lower node id.
    """
    candidates = env.surface_approach.get(surface, [])
    if not candidates:
        raise StreamExhausted(f"surface {surface} has no approach nodes")
    particles = belief.particles[surface][:, :2]
    weights = belief.weights[surface]
    scored = []
    for node_id in candidates:
        origin = env.node(node_id).xy
        dist = float(np.hypot(*(pose - origin)))
        if dist > vision.max_range:
            continue
        # wall check alone first: a full-circle "cone" isolates ray blocking
        walls_clear = visible_mask(origin, 0.0, math.pi, np.inf,
                                   pose[None, :], [], env.walls)[0]
        if not walls_clear:
            continue
        bearing = math.atan2(pose[1] - origin[1], pose[0] - origin[0])
        headings = tuple(bearing + off for off in vision.sweep_offsets)
        clear = visible_mask(origin, bearing, vision.half_angle, vision.max_range,
                             pose[None, :], known_occluders, env.walls)[0]
        mask = np.zeros(len(particles), dtype=bool)
        for heading in headings:
            mask |= visible_mask(origin, heading, vision.half_angle,
                                 vision.max_range, particles, known_occluders,
                                 env.walls)
        coverage = float(weights[mask].sum())
        travel = env.nav_distance(from_node, node_id) if from_node is not None else 0.0
        scored.append((not clear, -coverage, travel, node_id,
                       Viewpoint(node_id, bearing, headings, coverage, bool(clear))))
    if not scored:
        raise StreamExhausted(f"no reachable viewpoint for surface {surface}")
    scored.sort(key=lambda item: item[:4])
    return scored[0][4]


def detect_cost(belief: HierarchicalBelief, object_id: int, room: int,
                surface: int, coverage: float) -> float:
    """Reciprocal of the joint belief mass the look is expected to cover."""
    mass = belief.room_probs[room] * belief.surface_cond[surface] * coverage
    return DETECT_BASE_COST / max(mass, MASS_FLOOR)


def nearest_reach_node(env: EnvironmentSpec, surface: int, pose: np.ndarray,
                       reach: float) -> int | None:
    """Closest approach node from which the pose is within arm's reach."""
    best = None
    for node_id in env.surface_approach.get(surface, []):
        origin = env.node(node_id).xy
        dist = float(np.hypot(*(pose - origin)))
        if dist <= reach and (best is None or dist < best[0]):
            best = (dist, node_id)
    return best[1] if best else None
