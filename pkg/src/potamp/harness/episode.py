"""One planning-and-execution episode for a given variant."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..belief import HierarchicalBelief, NoiseParams, init_uniform_belief
from ..planner import (
    PlannerConfig,
    PlanTrace,
    Task,
    UpdatePolicy,
    execute_and_replan,
    make_lgbu_callback,
)
from ..priors import BaseProvider, build_similarity_matrix, generate_room_prior, generate_surface_prior
from ..sim import SimState
from ..world import EnvironmentSpec, surface_option_label
from .variants import VariantConfig


@dataclass
class EpisodeResult:
    variant: str
    env_seed: int
    trace: PlanTrace
    error: str | None = None

    @property
    def solved(self) -> bool:
        return self.trace.solved and self.error is None

    def row(self) -> dict:
        return {
            "variant": self.variant,
            "env_seed": self.env_seed,
            "replans": self.trace.replan_count,
            "detects": len(self.trace.detect_history),
            "plan_time_s": round(self.trace.planning_seconds, 6),
            "exec_time_s": round(self.trace.execution_seconds, 3),
            "cumulative_s": round(self.trace.cumulative_seconds, 3),
            "solved": int(self.solved),
            "error": self.error or "",
        }


def apply_mcqa_priors(belief: HierarchicalBelief, env: EnvironmentSpec,
                      target_label: str, provider: BaseProvider) -> HierarchicalBelief:
    """Replace the uniform initial categoricals with model-derived priors."""
    room_labels = [r.label for r in env.rooms]
    room_rec = generate_room_prior(target_label, room_labels, provider)
    surf_labels = [surface_option_label(env, s.id) for s in env.surfaces]
    surf_rec = generate_surface_prior(target_label, surf_labels, provider)

    out = belief.copy()
    out.room_probs = np.asarray(room_rec.prior, dtype=float)
    cond = np.asarray(surf_rec.prior, dtype=float).copy()
    rooms_of = out.room_of_surface()
    for r in range(out.num_rooms):
        sel = rooms_of == r
        mass = cond[sel].sum()
        cond[sel] = cond[sel] / mass if mass > 0 else 1.0 / sel.sum()
    out.surface_cond = cond
    out.check_normalized()
    return out


def run_episode(
    variant: VariantConfig,
    env: EnvironmentSpec,
    task: Task,
    provider: BaseProvider | None,
    seed: int,
    noise_est: NoiseParams | None = None,
    noise_gen: NoiseParams | None = None,
    planner_cfg: PlannerConfig | None = None,
    replan_cap: int = 100,
    particles_per_surface: int = 60,
    fn_coins: tuple[bool, ...] = (),
    snapshot_beliefs: bool = False,
) -> EpisodeResult:
    """Build beliefs for the variant, then run the plan-execute loop."""
    if variant.uses_provider and provider is None:
        raise ValueError(f"variant {variant.name} needs a provider")
    noise_est = noise_est or NoiseParams()
    noise_gen = noise_gen or NoiseParams()
    planner_cfg = planner_cfg or PlannerConfig()

    rng = np.random.default_rng(seed)
    target = env.object_by_label(task.target_label)
    belief = init_uniform_belief(env, target.id, particles_per_surface, rng,
                                 seed=seed)
    if variant.prior_source == "mcqa":
        belief = apply_mcqa_priors(belief, env, task.target_label, provider)

    if variant.uses_comodel:
        sims = build_similarity_matrix([o.label for o in env.objects], provider)
        policy = UpdatePolicy("comodel", sims=sims)
    elif variant.update_mode == "lgbu":
        lgbu = make_lgbu_callback(env, task, provider,
                                  lambda det: env.objects[det.object_id].label)
        policy = UpdatePolicy("replace", lgbu_fn=lgbu)
    else:
        policy = UpdatePolicy("bayes")

    sim = SimState.from_env(env, fn_coins=fn_coins)
    trace, _ = execute_and_replan(
        sim, belief, task, policy, noise_est, noise_gen, rng, planner_cfg,
        replan_cap=replan_cap, snapshot_beliefs=snapshot_beliefs)
    trace.seed = seed
    return EpisodeResult(variant.name, seed, trace)
