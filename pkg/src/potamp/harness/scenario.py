"""Scripted scenario runner: a fully pinned environment, mock answers, and
noise coins, with expected detect sequences to regress against."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..belief import NoiseParams
from ..planner import PlannerConfig, PlanTrace
from ..planner.search import Task
from ..priors import MockBehavior, MockProvider, ProviderConfig
from ..sim.robot import VisionConfig
from ..world import EnvironmentSpec
from .episode import EpisodeResult, run_episode
from .variants import variant


@dataclass
class ScenarioReport:
    variant: str
    passed: bool
    expected_replans: int | None
    actual_replans: int
    expected_sequence: list[tuple[str, str]] | None
    actual_sequence: list[tuple[str, str]]
    divergence: str = ""

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "passed": self.passed,
            "expected_replans": self.expected_replans,
            "actual_replans": self.actual_replans,
            "expected_sequence": self.expected_sequence,
            "actual_sequence": [list(x) for x in self.actual_sequence],
            "divergence": self.divergence,
        }


@dataclass
class Scenario:
    env: EnvironmentSpec
    task: Task
    seed: int
    noise_est: NoiseParams
    noise_gen: NoiseParams
    planner_cfg: PlannerConfig
    particles_per_surface: int
    fn_coins: tuple[bool, ...]
    mock: MockBehavior
    expected: dict = field(default_factory=dict)
    replan_cap: int = 100

    @classmethod
    def from_json(cls, doc: dict) -> "Scenario":
        def noise(key, default):
            params = doc.get(key, {})
            return NoiseParams(
                p_fn=params.get("p_fn", default.p_fn),
                p_fp=params.get("p_fp", default.p_fp),
                sigma=params.get("sigma", default.sigma),
                lam=params.get("lam", default.lam),
            )

        planner_doc = doc.get("planner", {})
        vision_doc = doc.get("vision", {})
        vision = VisionConfig(
            half_angle=vision_doc.get("half_angle", VisionConfig.half_angle),
            max_range=vision_doc.get("max_range", VisionConfig.max_range),
            sweep_offsets=tuple(vision_doc.get(
                "sweep_offsets", VisionConfig.sweep_offsets)),
        )
        planner_cfg = PlannerConfig(
            move_cost_per_m=planner_doc.get("move_cost_per_m", 0.15),
            pick_cost=planner_doc.get("pick_cost", 1.0),
            place_cost=planner_doc.get("place_cost", 1.0),
            top_b=planner_doc.get("top_b", 5),
            vision=vision,
        )
        mock_doc = doc.get("mock", {})
        mcqa_weights = {}
        for level in ("room", "surface"):
            for obj, weights in mock_doc.get("mcqa", {}).get(level, {}).items():
                mcqa_weights[(level, obj)] = dict(weights)
        mock = MockBehavior(
            mcqa_weights=mcqa_weights,
            descriptions=dict(mock_doc.get("descriptions", {})),
            embeddings=dict(mock_doc.get("embeddings", {})),
            distributed_objects=set(mock_doc.get("distributed_objects", [])),
            lgbu_mode=mock_doc.get("lgbu_mode", "mcqa"),
            lgbu_weights=dict(mock_doc.get("lgbu_weights", {})),
        )
        return cls(
            env=EnvironmentSpec.from_json(doc["env"]),
            task=Task.from_json(doc["task"]),
            seed=doc.get("seed", 0),
            noise_est=noise("noise_est", NoiseParams()),
            noise_gen=noise("noise_gen", NoiseParams(p_fn=0.0, p_fp=0.0, sigma=0.02)),
            planner_cfg=planner_cfg,
            particles_per_surface=doc.get("particles_per_surface", 300),
            fn_coins=tuple(doc.get("fn_coins", [])),
            mock=mock,
            expected=doc.get("expected", {}),
            replan_cap=doc.get("replan_cap", 100),
        )

    @classmethod
    def load(cls, path: str | Path) -> "Scenario":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def run_scenario(scenario: Scenario, variant_name: str) -> tuple[EpisodeResult, ScenarioReport]:
    var = variant(variant_name)
    provider = MockProvider(ProviderConfig(mode="mock"), scenario.mock)
    result = run_episode(
        var, scenario.env, scenario.task, provider, scenario.seed,
        noise_est=scenario.noise_est, noise_gen=scenario.noise_gen,
        planner_cfg=scenario.planner_cfg, replan_cap=scenario.replan_cap,
        particles_per_surface=scenario.particles_per_surface,
        fn_coins=scenario.fn_coins,
    )
    actual_seq = [(surf, room) for (_, surf, room) in result.trace.detect_history]
    expected = scenario.expected.get(variant_name)
    report = ScenarioReport(
        variant=variant_name,
        passed=True,
        expected_replans=None,
        actual_replans=result.trace.replan_count,
        expected_sequence=None,
        actual_sequence=actual_seq,
    )
    if expected:
        report.expected_replans = expected.get("replans")
        seq = expected.get("detect_sequence")
        report.expected_sequence = [tuple(x) for x in seq] if seq else None
        if report.expected_replans is not None and \
                result.trace.replan_count != report.expected_replans:
            report.passed = False
            report.divergence = (
                f"replans: expected {report.expected_replans}, "
                f"got {result.trace.replan_count}")
        if report.passed and report.expected_sequence is not None:
            for i, (want, got) in enumerate(
                    zip(report.expected_sequence, actual_seq)):
                if tuple(want) != got:
                    report.passed = False
                    report.divergence = (
                        f"detect #{i + 1}: expected {want}, got {got}")
                    break
            else:
                if len(report.expected_sequence) != len(actual_seq):
                    report.passed = False
                    report.divergence = (
                        f"sequence length: expected "
                        f"{len(report.expected_sequence)}, got {len(actual_seq)}")
    return result, report


def trace_to_file(trace: PlanTrace, path: str | Path) -> None:
    with open(path, "w") as fh:
        fh.write(trace.dumps())
