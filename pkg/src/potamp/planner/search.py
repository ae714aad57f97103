"""Uniform-cost search over the grounded action space.

Stream bindings (sampled poses, viewpoints, reach nodes) are generated once
per planning call for the most promising surfaces, then the search finds the
least-cost action sequence that symbolically reaches the goal. Ties break on
fewer actions, then on the lexicographic key of the action bindings, so
plans are reproducible.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from ..belief import HierarchicalBelief
from ..errors import ConfigurationError
from ..geometry import Rect
from ..sim.robot import REACH_RADIUS, VisionConfig
from ..world import EnvironmentSpec
from .model import ActionInstance, SymbolicState
from .streams import (
    StreamExhausted,
    Viewpoint,
    detect_cost,
    inverse_visibility,
    nearest_reach_node,
    sample_pose_b,
)


@dataclass(frozen=True)
class Task:
    """What the episode is about: find the target, optionally deliver it."""

    target_label: str
    goal_surface_label: str | None = None  # None: detection-only goal

    def to_json(self) -> dict:
        return {"target": self.target_label, "goal_surface": self.goal_surface_label}

    @classmethod
    def from_json(cls, doc: dict) -> "Task":
        return cls(doc["target"], doc.get("goal_surface"))


@dataclass
class PlannerConfig:
    move_cost_per_m: float = 0.15
    pick_cost: float = 1.0
    place_cost: float = 1.0
    top_b: int = 5
    node_budget: int = 50_000
    vision: VisionConfig = field(default_factory=VisionConfig)


@dataclass(frozen=True)
class DetectBinding:
    surface: int
    room: int
    pose: tuple[float, float]
    viewpoint: Viewpoint
    cost: float


def enumerate_detect_bindings(
    env: EnvironmentSpec,
    belief: HierarchicalBelief,
    target_id: int,
    known_occluders: list[Rect],
    cfg: PlannerConfig,
    rng: np.random.Generator,
    from_node: int,
) -> list[DetectBinding]:
    marginals = belief.surface_marginals()
    order = np.argsort(-marginals, kind="stable")[: cfg.top_b]
    bindings = []
    for surface in order:
        surface = int(surface)
        try:
            pose = sample_pose_b(belief, target_id, surface, rng)
            view = inverse_visibility(env, belief, surface, pose,
                                      known_occluders, cfg.vision, from_node)
        except StreamExhausted:
            continue
        room = env.room_of_surface(surface)
        cost = detect_cost(belief, target_id, room, surface, view.coverage)
        bindings.append(DetectBinding(surface, room, (float(pose[0]), float(pose[1])),
                                      view, cost))
    return bindings


def _detect_action(b: DetectBinding) -> ActionInstance:
    return ActionInstance(
        kind="detect",
        bindings=(
            ("o", "target"), ("s", b.surface), ("r", b.room), ("pb", b.pose),
            ("bq", b.viewpoint.node_id), ("hq", round(b.viewpoint.bearing, 6)),
            ("ht", tuple(round(h, 6) for h in b.viewpoint.headings)),
        ),
        cost=b.cost,
    )


def plan(
    env: EnvironmentSpec,
    belief: HierarchicalBelief,
    state: SymbolicState,
    task: Task,
    known_occluders: list[Rect],
    cfg: PlannerConfig,
    rng: np.random.Generator,
) -> list[ActionInstance] | None:
    """Least-cost action sequence that symbolically achieves the task goal.

    Returns None when no plan exists within the node budget. An already
    satisfied goal yields the empty plan.
    """
    target_id = belief.object_id
    goal_surface = (env.surface_by_label(task.goal_surface_label).id
                    if task.goal_surface_label else None)

    def at_goal(s: SymbolicState) -> bool:
        if goal_surface is None:
            return s.confirmed_pose is not None
        return s.placed_on == goal_surface

    if at_goal(state):
        return []

    detects = [] if state.confirmed_pose is not None else enumerate_detect_bindings(
        env, belief, target_id, known_occluders, cfg, rng, state.node)
    if state.confirmed_pose is None and not detects:
        return None

    # nodes the search may move to: viewpoints, reach nodes for every sampled
    # pose, and the goal surface approach
    move_targets: set[int] = set()
    pick_nodes: dict[tuple[float, float], int | None] = {}
    for b in detects:
        move_targets.add(b.viewpoint.node_id)
        pick_nodes[b.pose] = nearest_reach_node(env, b.surface,
                                                np.array(b.pose), REACH_RADIUS)
        if pick_nodes[b.pose] is not None:
            move_targets.add(pick_nodes[b.pose])
    if state.confirmed_pose is not None:
        pose = state.confirmed_pose
        pick_nodes[pose] = nearest_reach_node(env, state.confirmed_surface,
                                              np.array(pose), REACH_RADIUS)
        if pick_nodes[pose] is not None:
            move_targets.add(pick_nodes[pose])
    place_node = None
    if goal_surface is not None:
        center = env.surfaces[goal_surface].rect.center
        place_node = nearest_reach_node(env, goal_surface, center,
                                        REACH_RADIUS + 1.2)
        if place_node is None:
            raise ConfigurationError("goal surface has no reachable approach")
        move_targets.add(place_node)

    detect_by_view: dict[int, list[DetectBinding]] = {}
    for b in detects:
        detect_by_view.setdefault(b.viewpoint.node_id, []).append(b)

    def successors(s: SymbolicState):
        for node in sorted(move_targets):
            if node == s.node:
                continue
            dist = env.nav_distance(s.node, node)
            if not np.isfinite(dist) or dist <= 0:
                continue
            yield (ActionInstance("move", (("to", node),),
                                  max(dist * cfg.move_cost_per_m, 1e-6)),
                   SymbolicState(node, s.holding, s.confirmed_pose,
                                 s.confirmed_surface, s.placed_on))
        if s.confirmed_pose is None:
            for b in detect_by_view.get(s.node, ()):
                yield (_detect_action(b),
                       SymbolicState(s.node, s.holding, b.pose, b.surface,
                                     s.placed_on))
        if (s.confirmed_pose is not None and s.holding is None
                and s.placed_on is None):
            node = pick_nodes.get(s.confirmed_pose)
            if node is not None and node == s.node:
                yield (ActionInstance("pick", (("o", "target"),
                                               ("pb", s.confirmed_pose)),
                                      cfg.pick_cost),
                       SymbolicState(s.node, target_id, s.confirmed_pose,
                                     s.confirmed_surface, s.placed_on))
        if s.holding == target_id and place_node is not None and s.node == place_node:
            yield (ActionInstance("place", (("o", "target"), ("s", goal_surface)),
                                  cfg.place_cost),
                   SymbolicState(s.node, None, None, None, goal_surface))

    def action_key(action: ActionInstance):
        return (action.kind, tuple(action.bindings))

    counter = 0
    frontier = [(0.0, 0, (), 0, state, [])]
    best: dict[SymbolicState, float] = {state: 0.0}
    expansions = 0
    while frontier:
        cost, length, _, _, current, path = heapq.heappop(frontier)
        if cost > best.get(current, np.inf):
            continue
        if at_goal(current):
            return path
        expansions += 1
        if expansions > cfg.node_budget:
            return None
        for action, nxt in successors(current):
            ncost = cost + action.cost
            if ncost < best.get(nxt, np.inf) - 1e-12:
                best[nxt] = ncost
                tiebreak = tuple(action_key(a) for a in path) + (action_key(action),)
                counter += 1
                heapq.heappush(frontier, (ncost, length + 1, tiebreak, counter,
                                          nxt, path + [action]))
    return None


def plan_cost(actions: list[ActionInstance]) -> float:
    return sum(a.cost for a in actions)
