"""Environment sampling: determinism, structure, placement fidelity."""
from importlib import resources

import numpy as np
import pytest
from scipy import stats

from potamp.sim import PlacementDataset, sample_environment


@pytest.fixture(scope="module")
def dataset():
    path = resources.files("potamp.data") / "annotations.jsonl"
    return PlacementDataset.load(str(path))


def test_layout_counts_and_determinism(dataset):
    env1 = sample_environment(dataset, (4, 8), 1, np.random.default_rng(5),
                              ensure_objects=("apple",))
    env2 = sample_environment(dataset, (4, 8), 1, np.random.default_rng(5),
                              ensure_objects=("apple",))
    assert len(env1.rooms) == 4
    assert len(env1.surfaces) == 8
    assert env1.to_json() == env2.to_json()
    labels = [o.label for o in env1.objects]
    assert "apple" in labels


def test_all_declared_layouts_sample(dataset):
    for layout in [(4, 8), (4, 16), (6, 12), (6, 24), (8, 16), (8, 32)]:
        env = sample_environment(dataset, layout, 1, np.random.default_rng(11))
        assert (len(env.rooms), len(env.surfaces)) == layout
        for surf_id, nodes in env.surface_approach.items():
            assert nodes, f"surface {surf_id} has no approach nodes"


def test_occluder_sits_on_target_surface(dataset):
    env = sample_environment(dataset, (4, 8), 1, np.random.default_rng(3),
                             ensure_objects=("apple",))
    assert len(env.occluders) == 1
    target = env.object_by_label("apple")
    surf = env.surfaces[target.surface_id]
    assert surf.rect.overlaps(env.occluders[0].rect)


def test_adversarial_placement_is_uniform(dataset):
    # the target lands off its common-sense surfaces often enough under
    # adversarial sampling; under normal sampling almost never
    normal_hits, adv_hits = 0, 0
    for seed in range(60):
        env_n = sample_environment(dataset, (4, 8), 1, np.random.default_rng(seed),
                                   ensure_objects=("apple",))
        env_a = sample_environment(dataset, (4, 8), 1,
                                   np.random.default_rng(1000 + seed),
                                   adversarial=True, ensure_objects=("apple",))
        kitchen_surfs_n = {s.id for s in env_n.surfaces
                           if env_n.rooms[s.room_id].label in ("kitchen", "pantry")}
        kitchen_surfs_a = {s.id for s in env_a.surfaces
                           if env_a.rooms[s.room_id].label in ("kitchen", "pantry")}
        if env_n.object_by_label("apple").surface_id in kitchen_surfs_n:
            normal_hits += 1
        if env_a.object_by_label("apple").surface_id in kitchen_surfs_a:
            adv_hits += 1
    assert normal_hits > adv_hits


def test_placement_frequencies_match_aggregation(dataset):
    """Chi-square of sampled object placements against the aggregated probs."""
    rng = np.random.default_rng(42)
    counts = {}
    trials = 1000
    for _ in range(trials):
        env = sample_environment(dataset, (2, 4), 1, rng,
                                 ensure_objects=("apple",))
        target = env.object_by_label("apple")
        surf = env.surfaces[target.surface_id]
        room = env.rooms[surf.room_id].label
        counts[(room, surf.label)] = counts.get((room, surf.label), 0) + 1

    # expected distribution: for each sampled env the target surface follows
    # the aggregated probabilities restricted to the sampled surfaces; rather
    # than recompute per-env sets, restrict to envs that drew the kitchen and
    # compare within-kitchen placement shares
    kitchen = {k: v for k, v in counts.items() if k[0] == "kitchen"}
    if sum(kitchen.values()) > 120:
        probs = dataset.placement_probs("apple", "kitchen")
        labels = [label for (_, label) in kitchen]
        expected_raw = np.array([probs.get(label, 1e-9) for label in labels])
        expected = expected_raw / expected_raw.sum() * sum(kitchen.values())
        observed = np.array([kitchen[k] for k in kitchen])
        _, p = stats.chisquare(observed, expected)
        assert p > 0.01
