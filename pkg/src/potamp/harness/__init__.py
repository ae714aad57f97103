from .benchmark import (
    LAYOUTS,
    BenchmarkConfig,
    MetricsTable,
    ci95,
    collect_metrics,
    pairwise_vs_best,
    run_benchmark,
    write_outputs,
)
from .episode import EpisodeResult, apply_mcqa_priors, run_episode
from .mocks import dataset_mock_behavior
from .scenario import Scenario, ScenarioReport, run_scenario, trace_to_file
from .variants import ALL_VARIANTS, BAYES_VARIANTS, VariantConfig, variant

__all__ = [
    "ALL_VARIANTS",
    "BAYES_VARIANTS",
    "BenchmarkConfig",
    "EpisodeResult",
    "LAYOUTS",
    "MetricsTable",
    "Scenario",
    "ScenarioReport",
    "VariantConfig",
    "apply_mcqa_priors",
    "ci95",
    "collect_metrics",
    "dataset_mock_behavior",
    "pairwise_vs_best",
    "run_benchmark",
    "run_episode",
    "run_scenario",
    "trace_to_file",
    "variant",
    "write_outputs",
]
