"""Occlusion-aware particle filter: weight rules, resampling, golden trace."""
import numpy as np
import pytest

from potamp.belief import (
    Detection,
    NoiseParams,
    ObservationEvent,
    SimilarityMatrix,
    compute_visibility,
    init_uniform_belief,
    particle_filter_step,
    particle_weight_colocated,
    particle_weight_detected,
    particle_weight_missed,
)
from potamp.errors import ContractViolation

from conftest import make_env

NOISE = NoiseParams(sigma=0.1, lam=1.0)


def event_from_mask(belief, mask, detections=()):
    report = compute_visibility(belief, mask)
    return ObservationEvent(
        target_id=belief.object_id,
        visibility=report,
        seen_mask=mask,
        detections=tuple(detections),
    )


# ------------------------------------------------------------- weight rules

def test_detected_weight_at_zero_distance():
    w = particle_weight_detected(np.array([[1.0, 1.0]]), np.array([1.0, 1.0]), 0.1)
    assert w[0] == pytest.approx(1.0)


def test_detected_weight_at_one_sigma():
    w = particle_weight_detected(np.array([[1.1, 1.0]]), np.array([1.0, 1.0]), 0.1)
    assert w[0] == pytest.approx(np.exp(-0.5))


def test_detected_weight_monotone_in_distance():
    pts = np.column_stack([np.linspace(0, 2, 20), np.zeros(20)])
    w = particle_weight_detected(pts, np.array([0.0, 0.0]), 0.3)
    assert np.all(np.diff(w) < 0)


def test_missed_weight_zeroes_visible():
    w = particle_weight_missed(np.array([True, False]), np.array([0.5, 0.02]))
    assert w[0] == 0.0
    assert w[1] == pytest.approx(0.02)


def test_missed_weight_rejects_negative_prior():
    with pytest.raises(ContractViolation):
        particle_weight_missed(np.array([False]), np.array([-0.1]))


def test_colocated_weight_boundaries():
    assert particle_weight_colocated(np.array([0.0]), 1.0, 1.0)[0] == pytest.approx(1.0)
    assert particle_weight_colocated(np.array([0.0]), -1.0, 1.0)[0] == pytest.approx(0.0)
    assert particle_weight_colocated(np.array([50.0]), -1.0, 1.0)[0] == pytest.approx(1.0, abs=1e-9)
    d = np.linspace(0, 5, 7)
    assert np.allclose(particle_weight_colocated(d, 0.0, 1.0), 0.5)


# ------------------------------------------------------------- filter steps

def test_detection_concentrates_particles(rng):
    env = make_env([1])
    bel = init_uniform_belief(env, 0, 200, rng)
    target_pos = np.array([1.0, 0.9])
    mask = np.ones((1, 200), dtype=bool)
    ev = event_from_mask(bel, mask, [Detection(0, target_pos, 0)])
    tight = NoiseParams(sigma=1e-4)
    out = particle_filter_step(bel, ev, None, tight, rng)
    # delta limit of the Gaussian: everything collapses onto the single
    # pre-update particle closest to the observed pose
    d_prior = np.hypot(bel.particles[0, :, 0] - target_pos[0],
                       bel.particles[0, :, 1] - target_pos[1])
    closest = bel.particles[0][np.argmin(d_prior)]
    assert np.array_equal(out.particles[0], np.tile(closest, (200, 1)))
    assert out.particles.shape == bel.particles.shape


def test_full_visibility_miss_reseeds_surface(rng):
    env = make_env([2])
    bel = init_uniform_belief(env, 0, 100, rng)
    mask = np.zeros((2, 100), dtype=bool)
    mask[0, :] = True  # every particle on surface 0 visible, nothing found
    ev = event_from_mask(bel, mask)
    out = particle_filter_step(bel, ev, None, NOISE, rng)
    # all prior particles on surface 0 were ruled out; the survivors are a
    # fresh uniform re-seed, not resampled copies of the old set
    assert out.reseeded_surfaces == (0,)
    old = {tuple(p) for p in np.round(bel.particles[0], 9).tolist()}
    new = {tuple(p) for p in np.round(out.particles[0], 9).tolist()}
    assert not old & new
    # the untouched surface resamples from its own set only
    kept = {tuple(p) for p in np.round(out.particles[1], 9).tolist()}
    assert kept <= {tuple(p) for p in np.round(bel.particles[1], 9).tolist()}


def test_partial_miss_moves_mass_to_hidden_region(rng):
    env = make_env([1])
    bel = init_uniform_belief(env, 0, 500, rng)
    rect = env.surfaces[0].rect
    mid = rect.center[0]
    mask = (bel.particles[:, :, 0] < mid)  # west half visible
    ev = event_from_mask(bel, mask)
    out = particle_filter_step(bel, ev, None, NOISE, rng)
    assert np.all(out.particles[0, :, 0] >= mid)


def test_zero_information_event_is_noop(rng):
    env = make_env([2])
    bel = init_uniform_belief(env, 0, 50, rng)
    ev = event_from_mask(bel, np.zeros((2, 50), dtype=bool))
    out = particle_filter_step(bel, ev, None, NOISE, rng)
    assert out is bel


def test_codetection_pulls_particles_when_similar(rng):
    env = make_env([1], objects=[("target", 0, (1.0, 0.9, 0.0)),
                                 ("friend", 0, (0.6, 0.6, 0.0))])
    bel = init_uniform_belief(env, 0, 400, rng)
    sims = SimilarityMatrix(np.array([[1.0, 0.95], [0.95, 1.0]]),
                            np.array([True, True]))
    friend_pos = np.array([0.6, 0.6])
    mask = np.zeros((1, 400), dtype=bool)
    mask[0, :10] = True  # a sliver visible so the event is informative
    ev = event_from_mask(bel, mask, [Detection(1, friend_pos, 0)])
    out = particle_filter_step(bel, ev, sims, NoiseParams(lam=0.3), rng)
    d_before = np.hypot(bel.particles[0, :, 0] - friend_pos[0],
                        bel.particles[0, :, 1] - friend_pos[1]).mean()
    d_after = np.hypot(out.particles[0, :, 0] - friend_pos[0],
                       out.particles[0, :, 1] - friend_pos[1]).mean()
    assert d_after < d_before


def test_particle_containment_over_steps(rng):
    env = make_env([2, 1])
    bel = init_uniform_belief(env, 0, 100, rng)
    for step in range(5):
        mask = rng.random((3, 100)) < 0.4
        ev = event_from_mask(bel, mask)
        bel = particle_filter_step(bel, ev, None, NOISE, rng)
        for s in env.surfaces:
            assert s.rect.contains(bel.particles[s.id][:, :2]).all()


# ------------------------------------------------------------- golden trace

def reference_filter_step(particles, weights, seen, detection, codets, sims_row,
                          noise, rng, rect):
    """Independent re-implementation of the per-surface filter step.

    Plain-python loops; same uniform-draw resampling protocol (n uniforms,
    CDF inversion).
    """
    n = len(weights)
    neww = []
    for i in range(n):
        x, y, _ = particles[i]
        if detection is not None:
            d2 = (x - detection[0]) ** 2 + (y - detection[1]) ** 2
            w = np.exp(-d2 / (2 * noise.sigma**2))
        else:
            w = 0.0 if seen[i] else weights[i]
            for (cx, cy), sim in zip(codets, sims_row):
                if w == 0.0:
                    break
                d = np.hypot(x - cx, y - cy)
                e = np.exp(-d / noise.lam)
                w *= (1 + sim) / 2 * e + (1 - sim) / 2 * (1 - e)
        neww.append(w)
    total = sum(neww)
    if total <= 0:
        xy = rect.sample(rng, n)
        yaw = rng.uniform(-np.pi, np.pi, size=n)
        return np.column_stack([xy, yaw]), np.full(n, 1.0 / n)
    probs = np.array(neww) / total
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    u = rng.random(n)
    idx = np.minimum(np.searchsorted(cdf, u, side="left"), n - 1)
    return particles[idx], np.full(n, 1.0 / n)


def test_scripted_trace_matches_reference(rng):
    env = make_env([1], objects=[("target", 0, (1.0, 0.9, 0.0)),
                                 ("buddy", 0, (0.7, 0.7, 0.0))])
    noise = NoiseParams(sigma=0.2, lam=0.8)
    sims = SimilarityMatrix(np.array([[1.0, 0.6], [0.6, 1.0]]),
                            np.array([True, True]))

    bel = init_uniform_belief(env, 0, 10, np.random.default_rng(123))
    ref_particles = bel.particles[0].copy()
    ref_weights = bel.weights[0].copy()

    # scripted events: partial miss, co-detection, target detection
    masks = [
        np.array([[1, 1, 1, 0, 0, 0, 0, 0, 0, 0]], dtype=bool),
        np.array([[0, 0, 0, 0, 0, 1, 1, 0, 0, 0]], dtype=bool),
        np.array([[1, 1, 1, 1, 1, 1, 1, 1, 1, 1]], dtype=bool),
    ]
    detections = [
        (),
        (Detection(1, np.array([0.7, 0.7]), 0),),
        (Detection(0, np.array([1.0, 0.9]), 0),),
    ]

    main_rng = np.random.default_rng(2024)
    ref_rng = np.random.default_rng(2024)
    for mask, dets in zip(masks, detections):
        ev = event_from_mask(bel, mask, dets)
        bel = particle_filter_step(bel, ev, sims, noise, main_rng)

        det = None
        codets, simrow = [], []
        for d in dets:
            if d.object_id == 0:
                det = d.pos
            else:
                codets.append(d.pos)
                simrow.append(sims.sim[d.object_id, 0])
        ref_particles, ref_weights = reference_filter_step(
            ref_particles, ref_weights, mask[0], det, codets, simrow,
            noise, ref_rng, env.surfaces[0].rect)

        assert np.array_equal(bel.particles[0], ref_particles)
        assert np.allclose(bel.weights[0], ref_weights)
