"""Brute-force reference posterior for the hierarchical semantic filter.

Computes room and surface posteriors by batch enumeration: plain python
loops over every candidate location and every co-location assignment of the
co-detected objects, with no shared code with the filter implementation.
"""
import numpy as np


def _coloc(sim, same, count):
    if count == 1:
        return 1.0 if same else 0.0
    delta = 1.0 if same else 0.0
    u = 1.0 / count
    if sim >= 0:
        return sim * delta + (1 - sim) * u
    return abs(sim) * (1 - delta) / (count - 1) + (1 + sim) * u


def _detection_like(candidate, observed, v_obs, p_fn, p_fp, floor=1e-6):
    v = max(v_obs, floor)
    return (1 - p_fn) * v if candidate == observed else p_fp * v


def _miss_like(v_candidate, p_fn):
    return (1 - v_candidate) + v_candidate * p_fn


def enumerate_posteriors(env, room_prior, surf_prior, events, sims, noise):
    """events: list of dicts with keys v_s (array), v_r (array),
    target_detection (surface id or None), co_detections (list of
    (object_id, surface_id)). sims: (matrix, toggle) or None.

    Returns (room_posterior, surface_conditional) arrays.
    """
    num_rooms = len(env.rooms)
    num_surfaces = len(env.surfaces)
    rooms_of = [s.room_id for s in env.surfaces]
    surfaces_of = {
        r: [s.id for s in env.surfaces if s.room_id == r] for r in range(num_rooms)
    }

    room_post = [float(room_prior[r]) for r in range(num_rooms)]
    surf_post = [float(surf_prior[s]) for s in range(num_surfaces)]

    for ev in events:
        v_s, v_r = ev["v_s"], ev["v_r"]
        informative = any(x > 0 for x in v_s) or ev["target_detection"] is not None \
            or ev["co_detections"]
        if not informative:
            continue

        # --- room level
        for r in range(num_rooms):
            if ev["target_detection"] is not None:
                obs_room = rooms_of[ev["target_detection"]]
                like = _detection_like(r, obs_room, v_r[obs_room], noise.p_fn, noise.p_fp)
            else:
                like = _miss_like(v_r[r], noise.p_fn)
            if sims is not None:
                matrix, toggle = sims
                for obj_id, det_surf in ev["co_detections"]:
                    if not toggle[obj_id]:
                        continue
                    sim = matrix[obj_id][0] if isinstance(matrix, list) else matrix[obj_id, 0]
                    obs_room = rooms_of[det_surf]
                    cross = 0.0
                    for rj in range(num_rooms):
                        p_obs = _detection_like(rj, obs_room, v_r[obs_room],
                                                noise.p_fn, noise.p_fp)
                        cross += p_obs * _coloc(sim, rj == r, num_rooms)
                    like *= cross
            room_post[r] *= like
        total = sum(room_post)
        room_post = [p / total for p in room_post]

        # --- surface level
        for s in range(num_surfaces):
            r = rooms_of[s]
            if ev["target_detection"] is not None:
                obs_surf = ev["target_detection"]
                like = _detection_like(s, obs_surf, v_s[obs_surf], noise.p_fn, noise.p_fp)
            else:
                like = _miss_like(v_s[s], noise.p_fn)
            if sims is not None:
                matrix, toggle = sims
                for obj_id, det_surf in ev["co_detections"]:
                    if not toggle[obj_id]:
                        continue
                    sim = matrix[obj_id][0] if isinstance(matrix, list) else matrix[obj_id, 0]
                    cross = 0.0
                    # enumerate the co-location joint over (room_j, surface_j)
                    for rj in range(num_rooms):
                        surfs_j = surfaces_of[rj]
                        p_room = _coloc(sim, rj == r, num_rooms)
                        for sj in surfs_j:
                            if rj == r:
                                if len(surfs_j) == 1:
                                    p_surf = 1.0 if sj == s else 0.0
                                else:
                                    p_surf = _coloc(sim, sj == s, len(surfs_j))
                            else:
                                p_surf = 1.0 / len(surfs_j)
                            p_obs = _detection_like(sj, det_surf, v_s[det_surf],
                                                    noise.p_fn, noise.p_fp)
                            cross += p_obs * p_room * p_surf
                    like *= cross
            surf_post[s] *= like
        for r in range(num_rooms):
            ids = surfaces_of[r]
            total = sum(surf_post[s] for s in ids)
            for s in ids:
                surf_post[s] /= total

    return np.array(room_post), np.array(surf_post)
