"""Household environment sampling from a placement dataset.

Rooms sit on a grid (two rows when there are four or more), surfaces line
the north and south walls, doorways connect neighboring rooms, and objects
are drawn per surface from the dataset's aggregated placement probabilities.
"""
from __future__ import annotations

import math

import numpy as np

from ..errors import GenerationError
from ..geometry import Rect
from ..world import EnvironmentSpec, NavNode, ObjectSpec, Occluder, Room, Surface
from .dataset import PlacementDataset

ROOM_W = 6.0
ROOM_H = 5.0
SURF_W = 1.2
SURF_D = 0.5
VIEW_OFFSET = 0.9  # viewpoint distance from the surface edge
PICK_OFFSET = 0.25  # pick-spot distance; keeps every pose within arm reach
SIDE_OFFSET = 0.45

# x-offsets of surface slots along a wall and of the vertical doorway; the
# doorway x sits inside the gap between the first two slots
_SLOT_X = (0.5, 2.3, 4.1)
_VDOOR_X = 2.0


def _weighted_draw_without_replacement(rng, items, weights, count):
    items = list(items)
    weights = np.asarray(weights, dtype=float)
    picks = []
    for _ in range(count):
        if not items:
            raise GenerationError("ran out of candidates while sampling")
        probs = weights / weights.sum()
        idx = int(rng.choice(len(items), p=probs))
        picks.append(items.pop(idx))
        weights = np.delete(weights, idx)
    return picks


def sample_environment(
    dataset: PlacementDataset,
    layout: tuple[int, int],
    objects_per_surface: int,
    rng: np.random.Generator,
    adversarial: bool = False,
    ensure_objects: tuple[str, ...] = (),
    ensure_room_surface: tuple[str, str] | None = None,
    occluders_per_env: int = 1,
    max_retries: int = 20,
) -> EnvironmentSpec:
    """Sample rooms, surfaces, placements, and geometry for one environment."""
    num_rooms, num_surfaces = layout
    for attempt in range(max_retries):
        try:
            return _sample_once(dataset, num_rooms, num_surfaces,
                                objects_per_surface, rng, adversarial,
                                ensure_objects, ensure_room_surface,
                                occluders_per_env)
        except GenerationError:
            if attempt + 1 == max_retries:
                raise
    raise GenerationError("unreachable")


def _sample_once(dataset, num_rooms, num_surfaces, objects_per_surface, rng,
                 adversarial, ensure_objects, ensure_room_surface,
                 occluders_per_env):
    room_vocab = dataset.room_labels
    if len(room_vocab) < num_rooms:
        raise GenerationError(
            f"dataset has {len(room_vocab)} room labels, need {num_rooms}")
    room_labels = [str(v) for v in rng.choice(room_vocab, size=num_rooms,
                                              replace=False)]
    if ensure_room_surface and ensure_room_surface[0] not in room_labels:
        room_labels[-1] = ensure_room_surface[0]

    quotas = [num_surfaces // num_rooms] * num_rooms
    for i in range(num_surfaces % num_rooms):
        quotas[i] += 1
    if max(quotas) > 2 * len(_SLOT_X):
        raise GenerationError("too many surfaces per room for the layout grid")

    surface_labels: list[list[str]] = []
    for label, quota in zip(room_labels, quotas):
        vocab = dataset.surfaces_for_room(label)
        if len(vocab) < quota:
            raise GenerationError(f"room {label} offers {len(vocab)} surfaces, "
                                  f"need {quota}")
        surface_labels.append(
            [str(v) for v in rng.choice(vocab, size=quota, replace=False)])
    if ensure_room_surface:
        room_idx = room_labels.index(ensure_room_surface[0])
        if ensure_room_surface[1] not in surface_labels[room_idx]:
            surface_labels[room_idx][-1] = ensure_room_surface[1]

    # ----------------------------------------------------------- geometry
    cols = num_rooms if num_rooms < 4 else math.ceil(num_rooms / 2)
    rooms: list[Room] = []
    surfaces: list[Surface] = []
    nodes: list[NavNode] = []
    edges: list[tuple[int, int]] = []
    approach: dict[int, list[int]] = {}
    centers: dict[int, int] = {}

    def add_node(label, x, y):
        node = NavNode(len(nodes), label, x, y)
        nodes.append(node)
        return node.id

    for r in range(num_rooms):
        row, col = divmod(r, cols)
        x0, y0 = col * ROOM_W, row * ROOM_H
        rooms.append(Room(r, room_labels[r], Rect(x0, y0, x0 + ROOM_W, y0 + ROOM_H)))
        centers[r] = add_node(f"{room_labels[r]}_center", x0 + ROOM_W / 2,
                              y0 + ROOM_H / 2)

    sid = 0
    for r in range(num_rooms):
        row, col = divmod(r, cols)
        x0, y0 = col * ROOM_W, row * ROOM_H
        for k, label in enumerate(surface_labels[r]):
            wall = "n" if k < len(_SLOT_X) else "s"
            slot = _SLOT_X[k % len(_SLOT_X)]
            if wall == "n":
                rect = Rect(x0 + slot, y0 + ROOM_H - 0.3 - SURF_D,
                            x0 + slot + SURF_W, y0 + ROOM_H - 0.3)
                view_y, pick_y = rect.y0 - VIEW_OFFSET, rect.y0 - PICK_OFFSET
            else:
                rect = Rect(x0 + slot, y0 + 0.3, x0 + slot + SURF_W, y0 + 0.3 + SURF_D)
                view_y, pick_y = rect.y1 + VIEW_OFFSET, rect.y1 + PICK_OFFSET
            surfaces.append(Surface(sid, label, r, rect))
            node_ids = [add_node(f"view_{sid}_front", rect.center[0], view_y)]
            for side_x in (rect.x0 - SIDE_OFFSET, rect.x1 + SIDE_OFFSET):
                if x0 + 0.2 < side_x < x0 + ROOM_W - 0.2:
                    node_ids.append(add_node(f"view_{sid}_side", side_x,
                                             rect.center[1]))
            for px, tag in ((rect.x0 + 0.15, "l"), (rect.center[0], "c"),
                            (rect.x1 - 0.15, "r")):
                node_ids.append(add_node(f"pick_{sid}_{tag}", px, pick_y))
            for nid in node_ids:
                edges.append((nid, centers[r]))
            approach[sid] = node_ids
            sid += 1

    # doorways between grid neighbors
    for r in range(num_rooms):
        row, col = divmod(r, cols)
        x0, y0 = col * ROOM_W, row * ROOM_H
        right = r + 1
        if col + 1 < cols and right < num_rooms and divmod(right, cols)[0] == row:
            a = add_node(f"door_{r}_{right}_a", x0 + ROOM_W - 0.3, y0 + ROOM_H / 2)
            b = add_node(f"door_{r}_{right}_b", x0 + ROOM_W + 0.3, y0 + ROOM_H / 2)
            edges += [(a, b), (a, centers[r]), (b, centers[right])]
        below = r + cols
        if below < num_rooms:
            a = add_node(f"door_{r}_{below}_a", x0 + _VDOOR_X, y0 + ROOM_H - 0.3)
            b = add_node(f"door_{r}_{below}_b", x0 + _VDOOR_X, y0 + ROOM_H + 0.3)
            edges += [(a, b), (a, centers[r]), (b, centers[below])]

    # ------------------------------------------------------------ objects
    all_objects = dataset.object_labels
    placed: list[tuple[str, int]] = []  # (label, surface_id)
    used: set[str] = set()
    for surf in surfaces:
        room_label = rooms[surf.room_id].label
        if adversarial:
            weights = {o: 1.0 for o in all_objects}
        else:
            weights = dataset.object_weights_for_surface(room_label, surf.label)
            if not weights:
                weights = {o: 1.0 for o in all_objects}
        candidates = [o for o in weights if o not in used and o not in ensure_objects]
        if len(candidates) < objects_per_surface:
            extra = [o for o in all_objects
                     if o not in used and o not in ensure_objects
                     and o not in candidates]
            candidates += extra
        if len(candidates) < objects_per_surface:
            raise GenerationError("object vocabulary exhausted")
        w = [max(weights.get(o, 0.05), 0.05) for o in candidates]
        picks = _weighted_draw_without_replacement(rng, candidates, w,
                                                   objects_per_surface)
        for label in picks:
            placed.append((label, surf.id))
            used.add(label)

    for label in ensure_objects:
        if adversarial:
            target_surface = int(rng.integers(0, len(surfaces)))
        else:
            weights = []
            for surf in surfaces:
                probs = dataset.placement_probs(label, rooms[surf.room_id].label)
                weights.append(max(probs.get(surf.label, 0.0), 1e-6))
            weights = np.asarray(weights)
            target_surface = int(rng.choice(len(surfaces), p=weights / weights.sum()))
        placed.append((label, target_surface))

    objects: list[ObjectSpec] = []
    for label, surf_id in placed:
        rect = surfaces[surf_id].rect
        margin = 0.12
        x = float(rng.uniform(rect.x0 + margin, rect.x1 - margin))
        y = float(rng.uniform(rect.y0 + margin, rect.y1 - margin))
        yaw = float(rng.uniform(-np.pi, np.pi))
        objects.append(ObjectSpec(len(objects), label, surf_id, (x, y, yaw)))

    # ---------------------------------------------------------- occluders
    occluders: list[Occluder] = []
    if occluders_per_env > 0 and ensure_objects:
        target = next(o for o in objects if o.label == ensure_objects[0])
        surf = surfaces[target.surface_id]
        front = nodes[approach[surf.id][0]]
        ox, oy = target.pose[0], target.pose[1]
        direction = np.array([front.x - ox, front.y - oy])
        direction = direction / (np.linalg.norm(direction) + 1e-9)
        perp = np.array([-direction[1], direction[0]])
        half_w, half_d = 0.22, 0.12

        def clamped_box(cx, cy):
            bx0 = max(surf.rect.x0, min(cx - half_w, surf.rect.x1 - 2 * half_w))
            by0 = max(surf.rect.y0, min(cy - half_d, surf.rect.y1 - 2 * half_d))
            return Rect(bx0, by0, bx0 + 2 * half_w, by0 + 2 * half_d)

        def node_sees(nid, box):
            from .robot import VisionConfig
            from ..geometry import visible_mask
            pose = np.array([[ox, oy]])
            vision = VisionConfig()
            origin = nodes[nid].xy
            bearing = float(np.arctan2(oy - origin[1], ox - origin[0]))
            # approach nodes share the room, so walls cannot interfere
            return bool(visible_mask(origin, bearing, vision.half_angle,
                                     vision.max_range, pose, [box], [])[0])

        # shadow the front view but keep at least one angle open; slide the
        # box sideways until that holds, otherwise ship without it
        front_id = approach[surf.id][0]
        best_box = None
        for lateral in (0.0, 0.12, -0.12, 0.2, -0.2, 0.3, -0.3):
            box = clamped_box(ox + 0.3 * direction[0] + lateral * perp[0],
                              oy + 0.3 * direction[1] + lateral * perp[1])
            front_blocked = not node_sees(front_id, box)
            any_clear = any(node_sees(nid, box) for nid in approach[surf.id])
            if front_blocked and any_clear:
                best_box = box
                break
            if any_clear and best_box is None:
                best_box = box
        if best_box is not None:
            occluders.append(Occluder(best_box, known=False))

    return EnvironmentSpec(
        rooms=rooms,
        surfaces=surfaces,
        occluders=occluders,
        objects=objects,
        nav_nodes=nodes,
        nav_edges=edges,
        surface_approach=approach,
        start_node=centers[0],
        meta={"layout": [num_rooms, num_surfaces], "adversarial": adversarial},
    )
