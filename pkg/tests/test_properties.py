"""Property tests for the belief invariants."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from potamp.belief import (
    Detection,
    NoiseParams,
    ObservationEvent,
    SimilarityMatrix,
    colocation_prob,
    compute_visibility,
    init_uniform_belief,
    joint_belief_mass,
    particle_filter_step,
    update_semantic_belief,
)

from conftest import make_env

NOISE = NoiseParams()


@given(
    sim=st.floats(min_value=-1.0, max_value=1.0),
    count=st.integers(min_value=2, max_value=32),
)
@settings(max_examples=500, deadline=None)
def test_colocation_rows_sum_to_one(sim, count):
    total = colocation_prob(sim, True, count) + (count - 1) * colocation_prob(
        sim, False, count)
    assert abs(total - 1.0) < 1e-12


def test_colocation_rows_sum_bulk_draws():
    rng = np.random.default_rng(99)
    for _ in range(10_000):
        sim = float(rng.uniform(-1, 1))
        count = int(rng.integers(2, 33))
        total = colocation_prob(sim, True, count) + (count - 1) * colocation_prob(
            sim, False, count)
        assert abs(total - 1.0) < 1e-12


@pytest.mark.parametrize("count", range(2, 33))
def test_colocation_boundary_collapses_exact(count):
    assert colocation_prob(1.0, True, count) == 1.0
    assert colocation_prob(1.0, False, count) == 0.0
    assert colocation_prob(0.0, True, count) == 1.0 / count
    assert colocation_prob(0.0, False, count) == 1.0 / count
    assert colocation_prob(-1.0, True, count) == 0.0
    assert colocation_prob(-1.0, False, count) == 1.0 / (count - 1)


@given(seed=st.integers(min_value=0, max_value=10_000))
@settings(max_examples=60, deadline=None)
def test_updates_stay_normalized(seed):
    rng = np.random.default_rng(seed)
    env = make_env([2, 1, 2])
    bel = init_uniform_belief(env, 0, 30, rng)
    sims = SimilarityMatrix(
        np.array([[1.0, 0.4], [0.4, 1.0]]), np.array([True, True]))
    for _ in range(3):
        mask = rng.random((5, 30)) < rng.uniform(0, 0.8)
        report = compute_visibility(bel, mask)
        dets = []
        observed = report.observed_region
        if len(observed) and rng.random() < 0.5:
            surf = int(rng.choice(observed))
            dets.append(Detection(1, env.surfaces[surf].rect.center, surf))
        ev = ObservationEvent(0, report, mask, tuple(dets))
        bel = update_semantic_belief(bel, ev, sims, NOISE)
        bel = particle_filter_step(bel, ev, sims, NOISE, rng)
        bel.check_normalized()


def test_zero_visibility_event_bitwise_noop(rng):
    env = make_env([2, 2])
    bel = init_uniform_belief(env, 0, 25, rng)
    mask = np.zeros((4, 25), dtype=bool)
    report = compute_visibility(bel, mask)
    ev = ObservationEvent(0, report, mask, ())
    after_sem = update_semantic_belief(bel, ev, None, NOISE)
    after_pf = particle_filter_step(after_sem, ev, None, NOISE, rng)
    assert after_pf is bel
    assert np.array_equal(after_pf.particles, bel.particles)


@given(
    v=st.floats(min_value=0.01, max_value=1.0),
    seed=st.integers(min_value=0, max_value=999),
)
@settings(max_examples=60, deadline=None)
def test_miss_never_raises_seen_room(v, seed):
    rng = np.random.default_rng(seed)
    env = make_env([1, 1, 1])
    bel = init_uniform_belief(env, 0, 100, rng)
    probs = rng.random(3) + 0.05
    bel.room_probs = probs / probs.sum()
    before = bel.room_probs.copy()
    mask = np.zeros((3, 100), dtype=bool)
    mask[1, : int(round(v * 100))] = True
    report = compute_visibility(bel, mask)
    ev = ObservationEvent(0, report, mask, ())
    out = update_semantic_belief(bel, ev, None, NOISE)
    assert out.room_probs[1] <= before[1] + 1e-12


def test_detect_cost_monotone_in_mass(rng):
    env = make_env([2, 2])
    bel = init_uniform_belief(env, 0, 50, rng)
    masses = []
    for p in (0.1, 0.4, 0.9):
        bel.room_probs = np.array([p, 1 - p])
        masses.append(joint_belief_mass(bel, 0, 0, None))
    assert masses[0] < masses[1] < masses[2]
    costs = [1.0 / max(m, 1e-4) for m in masses]
    assert costs[0] > costs[1] > costs[2]
