"""Interleaved planning and execution with belief updates and replanning.

Each iteration plans from the current symbolic state, executes until an
action fails, folds every detect outcome into the belief (Bayes update plus
particle filter, or a model-predicted replacement for the replacement-update
variants), and replans on failure. A detect that finds only other objects
still counts as a failure for the target, which is exactly when co-location
evidence pays off.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..belief import (
    HierarchicalBelief,
    NoiseParams,
    ObservationEvent,
    SimilarityMatrix,
    particle_filter_step,
    update_semantic_belief,
)
from ..geometry import Rect
from ..sim.robot import (
    REACH_RADIUS,
    SimState,
    execute_detect,
    execute_move,
    execute_pick,
    execute_place,
    visible_particles,
)
from ..world import EnvironmentSpec, surface_option_label
from .model import ActionInstance, IterationRecord, PlanTrace, SymbolicState
from .search import PlannerConfig, Task, plan
from .streams import nearest_reach_node

# an observed occluder corner admits the box into the planner's map
_DISCOVERY_EPS = 0.03


@dataclass
class UpdatePolicy:
    """How detect outcomes change the belief.

    mode "bayes" multiplies the visibility-aware likelihoods; "comodel" adds
    cross-object factors and co-location particle weighting; "replace" asks
    the provider for a fresh categorical after every look (the particle
    filter still runs, without co-location factors).
    """

    mode: str = "bayes"  # bayes | comodel | replace
    sims: SimilarityMatrix | None = None
    lgbu_fn: object | None = None  # callable(belief, event) -> (rooms, surfaces)

    def __post_init__(self):
        if self.mode not in ("bayes", "comodel", "replace"):
            raise ValueError(f"unknown update mode {self.mode}")
        if self.mode == "comodel" and self.sims is None:
            raise ValueError("comodel updates need a similarity matrix")
        if self.mode == "replace" and self.lgbu_fn is None:
            raise ValueError("replace updates need an lgbu callback")


def apply_event(
    belief: HierarchicalBelief,
    event: ObservationEvent,
    policy: UpdatePolicy,
    noise: NoiseParams,
    rng: np.random.Generator,
) -> HierarchicalBelief:
    sims = policy.sims if policy.mode == "comodel" else None
    if policy.mode == "replace":
        if event.informative():
            rooms, surfaces = policy.lgbu_fn(belief, event)
            belief = belief.copy()
            belief.room_probs = rooms
            belief.surface_cond = surfaces
            belief.check_normalized()
    else:
        belief = update_semantic_belief(belief, event, sims, noise)
    return particle_filter_step(belief, event, sims, noise, rng)


def discover_occluders(state: SimState, discovered: set[int], event: ObservationEvent,
                       vision, rng_origin) -> None:
    """Mark occluders whose outline fell inside the merged view."""
    env = state.env
    origin = env.node(state.robot.node_id).xy
    for idx, occ in enumerate(env.occluders):
        if idx in discovered or occ.known:
            continue
        r = occ.rect
        probes = np.array([
            [r.x0, r.y0], [r.x1, r.y0], [r.x0, r.y1], [r.x1, r.y1], r.center,
        ])
        # pull probes slightly toward the robot so the box does not hide its
        # own faces
        probes = probes + _DISCOVERY_EPS * (origin - probes)
        others = [o.rect for j, o in enumerate(env.occluders) if j != idx]
        heading = state.robot.heading
        headings = [heading + off for off in vision.sweep_offsets]
        if visible_particles(env, origin, headings, probes, occluders=others,
                             vision=vision).any():
            discovered.add(idx)


@dataclass
class ExecutorHooks:
    """Optional probes for tests and the benchmark harness."""

    on_detect: object | None = None  # callable(event, outcome)


def _fetch_tail(env: EnvironmentSpec, state: SymbolicState, observed_pose,
                surface: int, task: Task, cfg: PlannerConfig):
    """Deterministic pick-and-deliver refinement after a confirmed pose."""
    actions: list[ActionInstance] = []
    if task.goal_surface_label is None:
        return actions
    pick_node = nearest_reach_node(env, surface, observed_pose, REACH_RADIUS)
    if pick_node is None:
        return None
    node = state.node
    if pick_node != node:
        dist = env.nav_distance(node, pick_node)
        actions.append(ActionInstance("move", (("to", pick_node),),
                                      max(dist * cfg.move_cost_per_m, 1e-6)))
        node = pick_node
    actions.append(ActionInstance(
        "pick", (("o", "target"), ("pb", tuple(np.round(observed_pose, 6)))),
        cfg.pick_cost))
    goal_surface = env.surface_by_label(task.goal_surface_label).id
    center = env.surfaces[goal_surface].rect.center
    place_node = nearest_reach_node(env, goal_surface, center, REACH_RADIUS + 1.2)
    if place_node is None:
        return None
    if place_node != node:
        dist = env.nav_distance(node, place_node)
        actions.append(ActionInstance("move", (("to", place_node),),
                                      max(dist * cfg.move_cost_per_m, 1e-6)))
    actions.append(ActionInstance("place", (("o", "target"), ("s", goal_surface)),
                                  cfg.place_cost))
    return actions


def execute_and_replan(
    sim: SimState,
    belief: HierarchicalBelief,
    task: Task,
    policy: UpdatePolicy,
    noise_est: NoiseParams,
    noise_gen: NoiseParams,
    rng: np.random.Generator,
    cfg: PlannerConfig | None = None,
    replan_cap: int = 100,
    hooks: ExecutorHooks | None = None,
    snapshot_beliefs: bool = False,
) -> tuple[PlanTrace, HierarchicalBelief]:
    """Plan, execute, observe, update, and replan until the goal or the cap.

    Returns the trace and the final belief. The trace is marked unsolved when
    the replan cap is reached or planning fails outright.
    """
    if replan_cap < 1:
        raise ValueError("replan_cap must be at least 1")
    cfg = cfg or PlannerConfig()
    hooks = hooks or ExecutorHooks()
    env = sim.env
    target = env.object_by_label(task.target_label)
    goal_surface = (env.surface_by_label(task.goal_surface_label).id
                    if task.goal_surface_label else None)
    trace = PlanTrace()
    discovered: set[int] = set()
    # objects are static, so re-sighting one on the same surface is perfectly
    # correlated with the first sighting; folding it in again would let a
    # similar neighbor re-inflate a surface after every miss and trap the
    # planner there, so cross-object evidence enters the Bayes update once
    folded_codetections: set[tuple[int, int]] = set()
    sym = SymbolicState(node=sim.robot.node_id)

    def goal_reached() -> bool:
        if goal_surface is None:
            return sym.confirmed_pose is not None
        return (sim.object_surface[target.id] == goal_surface
                and sim.robot.holding is None
                and sym.placed_on == goal_surface)

    while True:
        known = [occ.rect for i, occ in enumerate(env.occluders)
                 if occ.known or i in discovered]
        t0 = time.perf_counter()
        actions = plan(env, belief, sym, task, known, cfg, rng)
        plan_seconds = time.perf_counter() - t0
        record = IterationRecord(plan=list(actions or []), plan_seconds=plan_seconds)
        if snapshot_beliefs:
            record.belief_snapshot = belief.to_json()
        trace.iterations.append(record)
        if actions is None:
            record.failure = "planning failure"
            trace.notes = "no plan within budget"
            break

        failure = None
        queue = list(actions)
        idx = 0
        while idx < len(queue):
            action = queue[idx]
            idx += 1
            if action.kind == "move":
                outcome = execute_move(sim, action.get("to"))
                if outcome.success:
                    sym = SymbolicState(action.get("to"), sym.holding,
                                        sym.confirmed_pose, sym.confirmed_surface,
                                        sym.placed_on)
            elif action.kind == "detect":
                aim = np.asarray(action.get("pb"))
                outcome = execute_detect(sim, belief, aim, noise_gen, rng,
                                         cfg.vision)
                event = outcome.event
                discover_occluders(sim, discovered, event, cfg.vision, None)
                update_event = event
                if policy.mode == "comodel":
                    fresh = tuple(
                        d for d in event.detections
                        if d.object_id == target.id
                        or (d.object_id, d.surface_id) not in folded_codetections)
                    for d in event.co_detections():
                        folded_codetections.add((d.object_id, d.surface_id))
                    if len(fresh) != len(event.detections):
                        update_event = ObservationEvent(
                            event.target_id, event.visibility, event.seen_mask,
                            fresh, event.observed_surfaces)
                belief = apply_event(belief, update_event, policy, noise_est, rng)
                surf_label = env.surfaces[action.get("s")].label
                room_label = env.rooms[action.get("r")].label
                trace.detect_history.append(
                    (task.target_label, surf_label, room_label))
                if hooks.on_detect:
                    hooks.on_detect(event, outcome)
                if outcome.success:
                    det = event.target_detection
                    sym = SymbolicState(sym.node, sym.holding,
                                        (float(det.pos[0]), float(det.pos[1])),
                                        det.surface_id, sym.placed_on)
                    tail = _fetch_tail(env, sym, det.pos, det.surface_id, task, cfg)
                    if tail is None:
                        outcome = type(outcome)(False, "confirmed pose unreachable",
                                                event=event,
                                                duration=outcome.duration)
                    else:
                        queue = queue[:idx] + tail
                else:
                    # the target was not found; a co-detection alone still
                    # fails the detect for the target
                    assert event.informative(), \
                        "replanning after a zero-information detect"
            elif action.kind == "pick":
                outcome = execute_pick(sim, target.id, sym.confirmed_pose)
                if outcome.success:
                    sym = SymbolicState(sym.node, target.id, sym.confirmed_pose,
                                        sym.confirmed_surface, sym.placed_on)
                else:
                    # the confirmed pose was evidently wrong (e.g. a
                    # hallucinated detection); drop it so the next plan
                    # re-detects instead of retrying the same grasp
                    sym = SymbolicState(sym.node, sym.holding, None, None,
                                        sym.placed_on)
            elif action.kind == "place":
                outcome = execute_place(sim, action.get("s"), rng)
                if outcome.success:
                    sym = SymbolicState(sym.node, None, None, None, action.get("s"))
            record.exec_seconds += outcome.duration
            record.executed += 1
            if not outcome.success:
                failure = f"{action.kind}: {outcome.reason}"
                break

        if failure is None and goal_reached():
            trace.solved = True
            break
        if failure is None:
            record.failure = "plan exhausted without reaching the goal"
            trace.notes = record.failure
            break
        record.failure = failure
        if trace.replan_count + 1 > replan_cap:
            trace.notes = f"replan cap {replan_cap} reached"
            break
        # loop continues: next iteration replans from the current state

    return trace, belief


def make_lgbu_callback(env: EnvironmentSpec, task: Task, provider,
                       label_of_detection) -> object:
    """Build the replacement-update callback used by the LGBU variants."""
    from ..priors.service import lgbu_update

    room_labels = [r.label for r in env.rooms]
    surface_labels = [surface_option_label(env, s.id) for s in env.surfaces]
    rooms_of = np.array([s.room_id for s in env.surfaces])

    def callback(belief: HierarchicalBelief, event: ObservationEvent):
        report = event.visibility
        observed = set(event.observed_surfaces) | set(report.observed_region.tolist())
        if observed:
            obs_surface = max(observed, key=lambda s: report.v_s[s])
        else:
            obs_surface = int(np.argmax(report.v_s))
        obs_label = surface_option_label(env, obs_surface)
        visibility = float(report.v_s[obs_surface])
        found = event.target_detection is not None
        co = [label_of_detection(d) for d in event.co_detections()]
        co_text = ", ".join(co) if co else "none"
        top = np.argsort(-belief.room_probs)[:3]
        belief_text = ", ".join(
            f"{room_labels[r]} ({belief.room_probs[r]:.2f})" for r in top)
        result = "found" if found else "not found"

        rooms = lgbu_update(task.target_label, belief_text, obs_label,
                            visibility, result, co_text, room_labels, provider,
                            level="room")
        flat = lgbu_update(task.target_label, belief_text, obs_label,
                           visibility, result, co_text, surface_labels, provider,
                           level="surface")
        cond = np.asarray(flat, dtype=float)
        for r in range(len(room_labels)):
            sel = rooms_of == r
            mass = cond[sel].sum()
            cond[sel] = (cond[sel] / mass) if mass > 0 else 1.0 / sel.sum()
        return np.asarray(rooms, dtype=float), cond

    return callback
