"""Benchmark orchestration: paired environments, variant sweeps, metrics.

Every variant sees the same sampled environments (same seeds), episode
failures are recorded as unsolved instead of aborting the sweep, and the
summary reports normal-approximation 95% confidence intervals plus paired
differences against the best-performing variant.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..belief import NoiseParams
from ..planner import PlannerConfig, Task
from ..priors import BaseProvider
from ..sim import PlacementDataset, sample_environment
from .episode import EpisodeResult, run_episode
from .variants import VariantConfig

LAYOUTS = ((4, 8), (4, 16), (6, 12), (6, 24), (8, 16), (8, 32))


@dataclass
class BenchmarkConfig:
    layout: tuple[int, int] = (6, 12)
    num_envs: int = 50
    seed: int = 0
    adversarial: bool = False
    replan_cap: int = 100
    objects_per_surface: int = 2
    particles_per_surface: int = 60
    target_label: str = "apple"
    goal_room: str = "kitchen"
    goal_surface: str = "table"
    deliver: bool = True

    def __post_init__(self):
        if tuple(self.layout) not in LAYOUTS:
            raise ValueError(f"layout {self.layout} not in {LAYOUTS}")

    def task(self) -> Task:
        return Task(self.target_label,
                    self.goal_surface if self.deliver else None)


def ci95(values: np.ndarray) -> float:
    if len(values) < 2:
        return 0.0
    return 1.96 * float(np.std(values, ddof=1)) / math.sqrt(len(values))


@dataclass
class MetricsTable:
    variants: list[str]
    replans: dict[str, np.ndarray]
    times: dict[str, np.ndarray]
    unsolved: dict[str, int]
    rows: list[dict] = field(default_factory=list)

    def summary(self) -> dict:
        per_variant = {}
        for name in self.variants:
            r, t = self.replans[name], self.times[name]
            per_variant[name] = {
                "episodes": int(len(r)),
                "mean_replans": float(np.mean(r)),
                "ci95_replans": ci95(r),
                "mean_time_s": float(np.mean(t)),
                "ci95_time_s": ci95(t),
                "unsolved": self.unsolved[name],
            }
        return {
            "variants": per_variant,
            "pairwise_vs_best_replans": pairwise_vs_best(self.replans),
            "pairwise_vs_best_time": pairwise_vs_best(self.times),
        }


def pairwise_vs_best(vectors: dict[str, np.ndarray]) -> dict:
    """Paired mean difference of each variant against the lowest-mean one."""
    means = {name: float(np.mean(v)) for name, v in vectors.items()}
    best = min(means, key=lambda name: (means[name], name))
    rows = {}
    for name, vec in vectors.items():
        if name == best:
            rows[name] = {"delta": 0.0, "ci95": 0.0, "best": True}
            continue
        diffs = np.asarray(vec, dtype=float) - np.asarray(vectors[best], dtype=float)
        rows[name] = {
            "delta": float(np.mean(diffs)),
            "ci95": ci95(diffs),
            "best": False,
        }
    return rows


def run_benchmark(
    config: BenchmarkConfig,
    variants: list[VariantConfig],
    dataset: PlacementDataset,
    provider: BaseProvider | None,
    noise_est: NoiseParams | None = None,
    noise_gen: NoiseParams | None = None,
    planner_cfg: PlannerConfig | None = None,
    out_dir: str | Path | None = None,
    progress=None,
) -> MetricsTable:
    task = config.task()
    results: list[EpisodeResult] = []
    for i in range(config.num_envs):
        env_seed = config.seed + i
        env = sample_environment(
            dataset, tuple(config.layout), config.objects_per_surface,
            np.random.default_rng(env_seed),
            adversarial=config.adversarial,
            ensure_objects=(config.target_label,),
            ensure_room_surface=((config.goal_room, config.goal_surface)
                                 if config.deliver else None),
        )
        for var in variants:
            try:
                res = run_episode(
                    var, env, task, provider, env_seed,
                    noise_est=noise_est, noise_gen=noise_gen,
                    planner_cfg=planner_cfg, replan_cap=config.replan_cap,
                    particles_per_surface=config.particles_per_surface,
                )
            except Exception as exc:  # noqa: BLE001 - crash isolation
                from ..planner import PlanTrace
                res = EpisodeResult(var.name, env_seed, PlanTrace(),
                                    error=f"{type(exc).__name__}: {exc}")
            results.append(res)
            if progress:
                progress(res)

    table = collect_metrics(results, [v.name for v in variants],
                            replan_cap=config.replan_cap)
    if out_dir is not None:
        write_outputs(Path(out_dir), table)
    return table


def collect_metrics(results: list[EpisodeResult], variant_names: list[str],
                    replan_cap: int) -> MetricsTable:
    replans: dict[str, list] = {name: [] for name in variant_names}
    times: dict[str, list] = {name: [] for name in variant_names}
    unsolved = {name: 0 for name in variant_names}
    rows = []
    for res in results:
        rows.append(res.row())
        # unsolved episodes count at the cap so they stay comparable
        replans[res.variant].append(
            res.trace.replan_count if res.solved else replan_cap)
        times[res.variant].append(res.trace.cumulative_seconds)
        if not res.solved:
            unsolved[res.variant] += 1
    return MetricsTable(
        variants=variant_names,
        replans={k: np.array(v, dtype=float) for k, v in replans.items()},
        times={k: np.array(v, dtype=float) for k, v in times.items()},
        unsolved=unsolved,
        rows=rows,
    )


def write_outputs(out_dir: Path, table: MetricsTable) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    fields = ["variant", "env_seed", "replans", "detects", "plan_time_s",
              "exec_time_s", "cumulative_s", "solved", "error"]
    with open(out_dir / "episodes.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(table.rows)
    with open(out_dir / "summary.json", "w") as fh:
        json.dump(table.summary(), fh, indent=2)
