"""Hierarchical belief over an object's room, surface, and planar pose.

The belief factors into a categorical distribution over rooms, a categorical
distribution over surfaces conditioned on the room, and a weighted particle
set per surface for the pose. Updates combine a visibility-aware likelihood
for the tracked object with co-location evidence from detections of other
objects, then refresh the particle sets with an occlusion-aware filter.

Visibility is measured as the fraction of a surface's initial particles that
fell inside the robot's unoccluded field of view, so a miss on a barely-seen
surface carries almost no evidence while a miss on a fully-seen one nearly
rules it out.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ContractViolation, DegenerateUpdateError
from .geometry import Rect
from .world import EnvironmentSpec

# Detection likelihoods scale every hypothesis by the visibility of the
# observed location, which cancels after normalization; the floor keeps the
# update defined when none of the belief particles were inside the view.
_VIS_FLOOR = 1e-6


@dataclass(frozen=True)
class NoiseParams:
    """Sensor model parameters shared by the estimator and the simulator."""

    p_fn: float = 0.01
    p_fp: float = 0.01
    sigma: float = 0.05  # pose measurement std, meters
    lam: float = 1.0  # co-location distance decay length, meters

    def __post_init__(self):
        if not (0.0 <= self.p_fn <= 1.0 and 0.0 <= self.p_fp <= 1.0):
            raise ConfigurationError("false-positive/negative rates must be in [0,1]")
        if self.sigma <= 0 or self.lam <= 0:
            raise ConfigurationError("sigma and lam must be positive")


@dataclass(frozen=True)
class SimilarityMatrix:
    """Pairwise object similarity in [-1, 1] plus per-object co-location gates.

    toggle[k] = False disables co-location evidence from detections of k.
    """

    sim: np.ndarray  # (K, K)
    toggle: np.ndarray  # (K,) bool

    def __post_init__(self):
        sim = self.sim
        if sim.ndim != 2 or sim.shape[0] != sim.shape[1]:
            raise ConfigurationError("similarity matrix must be square")
        if not np.allclose(sim, sim.T, atol=1e-9):
            raise ConfigurationError("similarity matrix must be symmetric")
        if not np.allclose(np.diag(sim), 1.0, atol=1e-9):
            raise ConfigurationError("similarity diagonal must be 1")
        if np.any(sim < -1 - 1e-9) or np.any(sim > 1 + 1e-9):
            raise ConfigurationError("similarity entries must lie in [-1, 1]")
        if self.toggle.shape != (sim.shape[0],):
            raise ConfigurationError("toggle length must match matrix size")


@dataclass(frozen=True)
class VisibilityReport:
    """Per-surface seen particle counts and the visibility ratios they induce."""

    seen_counts: np.ndarray  # (S,) int
    initial_counts: np.ndarray  # (S,) int
    v_s: np.ndarray  # (S,)
    v_r: np.ndarray  # (R,)

    @property
    def observed_region(self) -> np.ndarray:
        """Surface ids with nonzero visibility."""
        return np.flatnonzero(self.v_s > 0)

    def any_visibility(self) -> bool:
        return bool(np.any(self.seen_counts > 0))


@dataclass(frozen=True)
class Detection:
    """One reported object sighting: who, where, and on which surface."""

    object_id: int
    pos: np.ndarray  # (2,)
    surface_id: int


@dataclass(frozen=True)
class ObservationEvent:
    """Outcome of one detect action against a single object's belief.

    observed_surfaces lists surfaces the view geometrically covered; it can
    be wider than the particle-based observed region when the look landed
    where no belief particles currently sit.
    """

    target_id: int
    visibility: VisibilityReport
    seen_mask: np.ndarray  # (S, n) bool over the target's particles
    detections: tuple[Detection, ...]
    observed_surfaces: tuple[int, ...] = ()

    def __post_init__(self):
        ids = [d.object_id for d in self.detections]
        if len(ids) != len(set(ids)):
            raise ContractViolation("at most one detection per object")
        observed = set(self.visibility.observed_region.tolist())
        observed.update(self.observed_surfaces)
        for det in self.detections:
            if det.surface_id not in observed:
                raise ContractViolation(
                    f"detection of object {det.object_id} on unobserved surface")

    @property
    def target_detection(self) -> Detection | None:
        for det in self.detections:
            if det.object_id == self.target_id:
                return det
        return None

    def co_detections(self) -> tuple[Detection, ...]:
        return tuple(d for d in self.detections if d.object_id != self.target_id)

    def informative(self) -> bool:
        return self.visibility.any_visibility() or bool(self.detections)


class HierarchicalBelief:
    """Room categorical x per-room surface categorical x per-surface particles."""

    def __init__(
        self,
        env: EnvironmentSpec,
        object_id: int,
        room_probs: np.ndarray,
        surface_cond: np.ndarray,
        particles: np.ndarray,
        weights: np.ndarray,
        initial_counts: np.ndarray,
        seed: int | None = None,
    ):
        self.env = env
        self.object_id = object_id
        self.room_probs = np.asarray(room_probs, dtype=float)
        self.surface_cond = np.asarray(surface_cond, dtype=float)
        self.particles = np.asarray(particles, dtype=float)  # (S, n, 3)
        self.weights = np.asarray(weights, dtype=float)  # (S, n)
        self.initial_counts = np.asarray(initial_counts, dtype=int)
        self.seed = seed
        self.reseeded_surfaces: tuple[int, ...] = ()
        self.check_normalized()

    # ------------------------------------------------------------- structure
    @property
    def num_rooms(self) -> int:
        return len(self.env.rooms)

    @property
    def num_surfaces(self) -> int:
        return len(self.env.surfaces)

    @property
    def particles_per_surface(self) -> int:
        return self.particles.shape[1]

    def room_of_surface(self) -> np.ndarray:
        return np.array([s.room_id for s in self.env.surfaces])

    def check_normalized(self, tol: float = 1e-9) -> None:
        if abs(self.room_probs.sum() - 1.0) > tol:
            raise ContractViolation("room belief not normalized")
        rooms = self.room_of_surface()
        for r in range(self.num_rooms):
            total = self.surface_cond[rooms == r].sum()
            if abs(total - 1.0) > tol:
                raise ContractViolation(f"surface belief for room {r} not normalized")
        if np.any(self.weights < -tol):
            raise ContractViolation("negative particle weight")
        sums = self.weights.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > tol):
            raise ContractViolation("per-surface particle weights not normalized")

    def copy(self) -> "HierarchicalBelief":
        out = HierarchicalBelief(
            self.env,
            self.object_id,
            self.room_probs.copy(),
            self.surface_cond.copy(),
            self.particles.copy(),
            self.weights.copy(),
            self.initial_counts.copy(),
            seed=self.seed,
        )
        out.reseeded_surfaces = self.reseeded_surfaces
        return out

    def surface_marginals(self) -> np.ndarray:
        """P(surface) = P(room) * P(surface | room), shape (S,)."""
        rooms = self.room_of_surface()
        return self.room_probs[rooms] * self.surface_cond

    def flat_positions(self) -> np.ndarray:
        """All particle xy positions, shape (S*n, 2)."""
        return self.particles[:, :, :2].reshape(-1, 2)

    # ---------------------------------------------------------------- io
    def to_json(self) -> dict:
        rooms = self.room_of_surface()
        surface_belief = {
            str(r): [
                float(self.surface_cond[s.id])
                for s in self.env.surfaces
                if s.room_id == r
            ]
            for r in range(self.num_rooms)
        }
        particles = {
            str(s): np.column_stack(
                [self.particles[s], self.weights[s][:, None]]
            ).tolist()
            for s in range(self.num_surfaces)
        }
        _ = rooms
        return {
            "object": self.object_id,
            "seed": self.seed,
            "room_belief": [float(p) for p in self.room_probs],
            "surface_belief": surface_belief,
            "particles": particles,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


# ---------------------------------------------------------------------------
# construction and visibility
# ---------------------------------------------------------------------------

def sample_surface_poses(env: EnvironmentSpec, surface_id: int, n: int,
                         rng: np.random.Generator) -> np.ndarray:
    """n (x, y, yaw) poses uniform over the surface, avoiding occluder boxes.

    A pose under a solid box is not a place an object can be, and no ray can
    ever confirm or refute it; letting particles sit there would sink belief
    mass into an unobservable hole. Falls back to plain sampling if boxes
    cover nearly the whole footprint.
    """
    rect = env.surfaces[surface_id].rect
    boxes = [o.rect for o in env.occluders if o.rect.overlaps(rect)]
    xy = rect.sample(rng, n)
    for _ in range(50):
        if not boxes:
            break
        bad = np.zeros(len(xy), dtype=bool)
        for box in boxes:
            bad |= box.contains(xy, eps=-1e-9)
        if not bad.any():
            break
        xy[bad] = rect.sample(rng, int(bad.sum()))
    yaw = rng.uniform(-np.pi, np.pi, size=n)
    return np.column_stack([xy, yaw])


def init_uniform_belief(
    env: EnvironmentSpec,
    object_id: int,
    particles_per_surface: int,
    rng: np.random.Generator,
    seed: int | None = None,
) -> HierarchicalBelief:
    """Uniform over rooms, uniform over surfaces within each room, particles
    drawn uniformly inside every surface footprint with equal weights."""
    if particles_per_surface < 1:
        raise ConfigurationError("need at least one particle per surface")
    if not env.rooms or not env.surfaces:
        raise ConfigurationError("environment has empty room or surface tables")
    for room in env.rooms:
        if not env.surfaces_in_room(room.id):
            raise ConfigurationError(f"room {room.label} has no surfaces")

    num_rooms = len(env.rooms)
    num_surfaces = len(env.surfaces)
    room_probs = np.full(num_rooms, 1.0 / num_rooms)
    surface_cond = np.zeros(num_surfaces)
    for room in env.rooms:
        surfs = env.surfaces_in_room(room.id)
        for s in surfs:
            surface_cond[s.id] = 1.0 / len(surfs)

    n = particles_per_surface
    particles = np.zeros((num_surfaces, n, 3))
    for s in env.surfaces:
        particles[s.id] = sample_surface_poses(env, s.id, n, rng)
    weights = np.full((num_surfaces, n), 1.0 / n)
    counts = np.full(num_surfaces, n)
    return HierarchicalBelief(
        env, object_id, room_probs, surface_cond, particles, weights, counts,
        seed=seed,
    )


def compute_visibility(belief: HierarchicalBelief, seen_mask: np.ndarray) -> VisibilityReport:
    """Per-surface and per-room visibility ratios from a per-particle seen mask."""
    mask = np.asarray(seen_mask, dtype=bool)
    num_s = belief.num_surfaces
    n = belief.particles_per_surface
    if mask.size != num_s * n:
        raise ContractViolation(
            f"seen mask has {mask.size} entries, expected {num_s * n}")
    mask = mask.reshape(num_s, n)
    seen = mask.sum(axis=1)
    init = belief.initial_counts
    v_s = seen / init
    rooms = belief.room_of_surface()
    v_r = np.zeros(belief.num_rooms)
    for r in range(belief.num_rooms):
        sel = rooms == r
        v_r[r] = seen[sel].sum() / init[sel].sum()
    return VisibilityReport(seen, init.copy(), v_s, v_r)


# ---------------------------------------------------------------------------
# categorical observation likelihoods
# ---------------------------------------------------------------------------

def _obs_likelihood(detected: bool, matches: bool, v: float, noise: NoiseParams) -> float:
    if not (-1e-12 <= v <= 1 + 1e-12):
        raise ContractViolation(f"visibility {v} outside [0, 1]")
    v = min(max(v, 0.0), 1.0)
    if matches:
        return (1.0 - noise.p_fn) * v if detected else (1.0 - v) + v * noise.p_fn
    return noise.p_fp * v if detected else 1.0 - v * noise.p_fp


def room_obs_likelihood(detected: bool, obs_room_matches_state: bool, v_r: float,
                        noise: NoiseParams) -> float:
    """P(room observation | hypothesis room), scaled by room visibility."""
    return _obs_likelihood(detected, obs_room_matches_state, v_r, noise)


def surface_obs_likelihood(detected: bool, obs_surface_matches_state: bool, v_s: float,
                           noise: NoiseParams) -> float:
    """P(surface observation | hypothesis surface), scaled by surface visibility."""
    return _obs_likelihood(detected, obs_surface_matches_state, v_s, noise)


def colocation_prob(sim: float, same_location: bool, num_locations: int) -> float:
    """P(object j at location | object k at reference location).

    Interpolates between a Kronecker delta (sim=1), the uniform distribution
    (sim=0), and the normalized complement of the delta (sim=-1). For any
    fixed sim and location count the values sum to one over locations.
    """
    if num_locations < 2:
        raise ConfigurationError("co-location needs at least two locations")
    if not -1.0 - 1e-12 <= sim <= 1.0 + 1e-12:
        raise ContractViolation(f"similarity {sim} outside [-1, 1]")
    sim = min(max(sim, -1.0), 1.0)
    delta = 1.0 if same_location else 0.0
    u = 1.0 / num_locations
    if sim >= 0:
        return sim * delta + (1.0 - sim) * u
    comp = (1.0 - delta) / (num_locations - 1)
    return abs(sim) * comp + (1.0 + sim) * u


@dataclass(frozen=True)
class CategoricalObs:
    """Detection-or-miss observation of one object at the room/surface level."""

    detected: bool
    location: int | None = None  # room or surface id when detected

    def __post_init__(self):
        if self.detected and self.location is None:
            raise ContractViolation("detected observation needs a location")


def _per_location_detection_likelihood(location: int, num_locations: int, v_obs: float,
                                       noise: NoiseParams) -> np.ndarray:
    """P(detected at `location` | object at each candidate location)."""
    v = max(v_obs, _VIS_FLOOR)
    out = np.full(num_locations, noise.p_fp * v)
    out[location] = (1.0 - noise.p_fn) * v
    return out


def _per_location_miss_likelihood(v: np.ndarray, noise: NoiseParams) -> np.ndarray:
    """P(not detected | object at each candidate location), own visibility."""
    return (1.0 - v) + v * noise.p_fn


def cross_object_room_likelihood(
    obs_j: CategoricalObs,
    x_k_room: int,
    sim_jk: float,
    v: VisibilityReport,
    noise: NoiseParams,
) -> float:
    """P(observation of object j | object k in room x_k_room).

    Total-probability sum over j's candidate rooms, weighting each by the
    co-location model conditioned on k's hypothesized room.
    """
    num_rooms = len(v.v_r)
    if obs_j.detected:
        per_room = _per_location_detection_likelihood(obs_j.location, num_rooms,
                                                      v.v_r[obs_j.location], noise)
    else:
        per_room = _per_location_miss_likelihood(v.v_r, noise)
    total = 0.0
    for room_j in range(num_rooms):
        total += per_room[room_j] * colocation_prob(sim_jk, room_j == x_k_room, num_rooms)
    return total


def _coloc_pair(sim: float, count: int) -> tuple[float, float]:
    """(same-location, other-location) co-location weights; a single candidate
    location is a point mass."""
    if count == 1:
        return 1.0, 0.0
    return colocation_prob(sim, True, count), colocation_prob(sim, False, count)


def _cross_room_factor(detection_room: int, v_obs: float, sim: float,
                       num_rooms: int, noise: NoiseParams) -> np.ndarray:
    """Vectorized cross-object room likelihood for a detection, over hypotheses."""
    per_room = _per_location_detection_likelihood(detection_room, num_rooms, v_obs, noise)
    c_same, c_diff = _coloc_pair(sim, num_rooms)
    total = per_room.sum()
    return per_room * c_same + (total - per_room) * c_diff


def _cross_surface_factor(
    env: EnvironmentSpec,
    detection_surface: int,
    v_obs: float,
    sim: float,
    noise: NoiseParams,
) -> np.ndarray:
    """Cross-object surface likelihood for every hypothesis surface.

    The joint co-location distribution over (room, surface) factors into the
    room-level model times a within-room surface model anchored at the
    hypothesis surface; rooms other than the hypothesis room spread their
    mass uniformly over their own surfaces so each conditional stays proper.
    """
    num_rooms = len(env.rooms)
    num_surfaces = len(env.surfaces)
    rooms = np.array([s.room_id for s in env.surfaces])
    per_surface = _per_location_detection_likelihood(detection_surface, num_surfaces,
                                                     v_obs, noise)
    c1_same, c1_diff = _coloc_pair(sim, num_rooms)

    room_sum = np.zeros(num_rooms)
    room_count = np.zeros(num_rooms)
    for r in range(num_rooms):
        sel = rooms == r
        room_sum[r] = per_surface[sel].sum()
        room_count[r] = sel.sum()
    room_mean = room_sum / room_count
    total_mean = room_mean.sum()

    out = np.zeros(num_surfaces)
    for s in range(num_surfaces):
        r = rooms[s]
        count_r = int(room_count[r])
        if count_r == 1:
            within = per_surface[s]
        else:
            c2_same, c2_diff = _coloc_pair(sim, count_r)
            within = c2_same * per_surface[s] + c2_diff * (room_sum[r] - per_surface[s])
        out[s] = c1_same * within + c1_diff * (total_mean - room_mean[r])
    return out


# ---------------------------------------------------------------------------
# semantic (room + surface) update
# ---------------------------------------------------------------------------

def update_semantic_belief(
    belief: HierarchicalBelief,
    event: ObservationEvent,
    sims: SimilarityMatrix | None,
    noise: NoiseParams,
) -> HierarchicalBelief:
    """Bayes update of the room and per-room surface categoricals.

    The tracked object always contributes its visibility-aware factor; every
    co-detected object whose co-location gate is enabled contributes a
    cross-object factor at both levels. Passing sims=None disables the
    co-location model entirely.
    """
    if not event.informative():
        return belief

    v = event.visibility
    num_rooms = belief.num_rooms
    rooms = belief.room_of_surface()

    target_det = event.target_detection
    if target_det is not None:
        det_room = belief.env.room_of_surface(target_det.surface_id)
        room_like = _per_location_detection_likelihood(det_room, num_rooms,
                                                       v.v_r[det_room], noise)
        surf_like = _per_location_detection_likelihood(
            target_det.surface_id, belief.num_surfaces,
            v.v_s[target_det.surface_id], noise)
    else:
        room_like = _per_location_miss_likelihood(v.v_r, noise)
        surf_like = _per_location_miss_likelihood(v.v_s, noise)

    if sims is not None:
        for det in event.co_detections():
            if not sims.toggle[det.object_id]:
                continue
            sim = float(sims.sim[det.object_id, belief.object_id])
            det_room = belief.env.room_of_surface(det.surface_id)
            room_like = room_like * _cross_room_factor(
                det_room, v.v_r[det_room], sim, num_rooms, noise)
            surf_like = surf_like * _cross_surface_factor(
                belief.env, det.surface_id, v.v_s[det.surface_id], sim, noise)

    new_rooms = belief.room_probs * room_like
    total = new_rooms.sum()
    if total <= 0.0:
        raise DegenerateUpdateError("room update produced zero total mass")
    new_rooms = new_rooms / total

    new_surfaces = belief.surface_cond * surf_like
    for r in range(num_rooms):
        sel = rooms == r
        mass = new_surfaces[sel].sum()
        if mass <= 0.0:
            raise DegenerateUpdateError(f"surface update for room {r} lost all mass")
        new_surfaces[sel] = new_surfaces[sel] / mass

    out = belief.copy()
    out.room_probs = new_rooms
    out.surface_cond = new_surfaces
    out.check_normalized()
    return out


# ---------------------------------------------------------------------------
# particle filter
# ---------------------------------------------------------------------------

def particle_weight_detected(particle_pos: np.ndarray, observed_pos: np.ndarray,
                             sigma: float) -> np.ndarray:
    """Unnormalized Gaussian pose weight exp(-d^2 / 2 sigma^2)."""
    if sigma <= 0:
        raise ContractViolation("sigma must be positive")
    pts = np.atleast_2d(particle_pos)[:, :2]
    d2 = ((pts - np.asarray(observed_pos)[:2]) ** 2).sum(axis=1)
    return np.exp(-d2 / (2.0 * sigma * sigma))


def particle_weight_missed(particle_visible: np.ndarray, prior_weight: np.ndarray) -> np.ndarray:
    """Zero out visible particles; occluded ones keep their prior weight."""
    visible = np.asarray(particle_visible, dtype=bool)
    prior = np.asarray(prior_weight, dtype=float)
    if np.any(prior < 0):
        raise ContractViolation("prior weights must be nonnegative")
    return np.where(visible, 0.0, prior)


def particle_weight_colocated(distance: np.ndarray, sim: float, lam: float) -> np.ndarray:
    """Similarity-modulated distance weight in [0, 1].

    Similar objects pull weight toward the detection, dissimilar push it away;
    lam sets how quickly the effect decays with distance.
    """
    if lam <= 0:
        raise ContractViolation("lam must be positive")
    if not -1.0 - 1e-12 <= sim <= 1.0 + 1e-12:
        raise ContractViolation(f"similarity {sim} outside [-1, 1]")
    d = np.asarray(distance, dtype=float)
    if np.any(d < 0):
        raise ContractViolation("distances must be nonnegative")
    decay = np.exp(-d / lam)
    return (1.0 + sim) / 2.0 * decay + (1.0 - sim) / 2.0 * (1.0 - decay)


def _resample_indices(weights: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Multinomial resampling: n iid draws proportional to the weights.

    Pinned protocol: consume n uniforms from the generator and invert the
    cumulative weight function with searchsorted.
    """
    n = len(weights)
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    u = rng.random(n)
    return np.minimum(np.searchsorted(cdf, u, side="left"), n - 1)


def particle_filter_step(
    belief: HierarchicalBelief,
    event: ObservationEvent,
    sims: SimilarityMatrix | None,
    noise: NoiseParams,
    rng: np.random.Generator,
) -> HierarchicalBelief:
    """One occlusion-aware filter step over every surface's particle set.

    Stationary objects: poses are copied. Weights come from the Gaussian pose
    model when the tracked object was detected, otherwise from the occlusion
    rule (visible particles die, occluded ones persist) optionally modulated
    by co-location distance weights for each gated co-detection. Per-surface
    multinomial resampling keeps the particle count fixed; a surface whose
    weights all vanish is re-seeded uniformly over its footprint. Events that
    carry no information leave the belief untouched (no resampling noise).
    """
    if not event.informative():
        return belief

    num_s = belief.num_surfaces
    n = belief.particles_per_surface
    mask = np.asarray(event.seen_mask, dtype=bool).reshape(num_s, n)

    target_det = event.target_detection
    new_weights = np.zeros_like(belief.weights)
    if target_det is not None:
        for s in range(num_s):
            # Max-subtracted log weights: same resampling distribution as the
            # raw Gaussian but survives sigma -> 0 without underflowing.
            pts = belief.particles[s][:, :2]
            d2 = ((pts - target_det.pos[:2]) ** 2).sum(axis=1)
            logw = -d2 / (2.0 * noise.sigma**2)
            new_weights[s] = np.exp(logw - logw.max())
    else:
        for s in range(num_s):
            w = particle_weight_missed(mask[s], belief.weights[s])
            if sims is not None:
                for det in event.co_detections():
                    if not sims.toggle[det.object_id]:
                        continue
                    sim = float(sims.sim[det.object_id, belief.object_id])
                    d = np.hypot(
                        belief.particles[s, :, 0] - det.pos[0],
                        belief.particles[s, :, 1] - det.pos[1],
                    )
                    w = w * particle_weight_colocated(d, sim, noise.lam)
            new_weights[s] = w

    out = belief.copy()
    reseeded = []
    for s in range(num_s):
        total = new_weights[s].sum()
        if total <= 0.0:
            # Degenerate surface: every particle ruled out; fall back to a
            # fresh uniform draw over the footprint.
            out.particles[s] = sample_surface_poses(belief.env, s, n, rng)
            out.weights[s] = np.full(n, 1.0 / n)
            reseeded.append(s)
            continue
        probs = new_weights[s] / total
        idx = _resample_indices(probs, rng)
        out.particles[s] = belief.particles[s][idx]
        out.weights[s] = np.full(n, 1.0 / n)
    out.reseeded_surfaces = tuple(reseeded)
    out.check_normalized()
    return out


# ---------------------------------------------------------------------------
# joint mass
# ---------------------------------------------------------------------------

def joint_belief_mass(
    belief: HierarchicalBelief,
    room: int,
    surface: int,
    pose_region,
) -> float:
    """P(room) * P(surface | room) * particle weight fraction inside the region.

    pose_region may be a Rect (must lie inside the surface footprint), a
    boolean mask over that surface's particles, or None for the whole surface.
    """
    surf = belief.env.surfaces[surface]
    if surf.room_id != room:
        raise ContractViolation("surface does not belong to the given room")
    if pose_region is None:
        frac = 1.0
    elif isinstance(pose_region, Rect):
        if not surf.rect.contains_rect(pose_region):
            raise ContractViolation("pose region outside surface footprint")
        inside = pose_region.contains(belief.particles[surface][:, :2])
        frac = float(belief.weights[surface][inside].sum())
    else:
        mask = np.asarray(pose_region, dtype=bool)
        if mask.shape != (belief.particles_per_surface,):
            raise ContractViolation("pose mask length mismatch")
        frac = float(belief.weights[surface][mask].sum())
    return float(belief.room_probs[room] * belief.surface_cond[surface] * frac)
