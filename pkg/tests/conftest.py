import numpy as np
import pytest

from potamp.geometry import Rect
from potamp.world import EnvironmentSpec, NavNode, ObjectSpec, Occluder, Room, Surface


def make_env(room_surface_counts, objects=(), occluders=(), size=(6.0, 4.0)):
    """Rooms in a row, each `size` big, surfaces as small rects inside.

    room_surface_counts: list of surface counts per room.
    objects: list of (label, surface_id, (x, y, yaw)).
    """
    w, h = size
    rooms = []
    surfaces = []
    nodes = []
    edges = []
    approach = {}
    sid = 0
    for r, count in enumerate(room_surface_counts):
        x_off = r * w
        rooms.append(Room(r, f"room{r}", Rect(x_off, 0.0, x_off + w, h)))
        center = NavNode(len(nodes), f"room{r}_center", x_off + w / 2, h / 2)
        nodes.append(center)
        if r > 0:
            # doorway nodes on both sides of the shared wall
            left = NavNode(len(nodes), f"door{r}_w", x_off - 0.3, h / 2)
            nodes.append(left)
            right = NavNode(len(nodes), f"door{r}_e", x_off + 0.3, h / 2)
            nodes.append(right)
            edges.append((left.id, right.id))
            edges.append((left.id, prev_center))
            edges.append((right.id, center.id))
        for k in range(count):
            rect = Rect(x_off + 0.5 + k * 1.4, 0.5, x_off + 1.5 + k * 1.4, 1.0)
            surfaces.append(Surface(sid, f"surf{sid}", r, rect))
            spots = [
                (f"view_s{sid}", rect.center[0], rect.y1 + 0.9),
                (f"pick_s{sid}_l", rect.x0 + 0.15, rect.y1 + 0.25),
                (f"pick_s{sid}_c", rect.center[0], rect.y1 + 0.25),
                (f"pick_s{sid}_r", rect.x1 - 0.15, rect.y1 + 0.25),
            ]
            ids = []
            for name, x, y in spots:
                node = NavNode(len(nodes), name, x, y)
                nodes.append(node)
                edges.append((node.id, center.id))
                ids.append(node.id)
            approach[sid] = ids
            sid += 1
        prev_center = center.id
    objs = [
        ObjectSpec(i, label, surf, pose)
        for i, (label, surf, pose) in enumerate(objects)
    ]
    occs = [Occluder(rect, known) for rect, known in occluders]
    return EnvironmentSpec(
        rooms=rooms,
        surfaces=surfaces,
        occluders=occs,
        objects=objs,
        nav_nodes=nodes,
        nav_edges=edges,
        surface_approach=approach,
        start_node=0,
    )


@pytest.fixture
def env_2x2():
    """Two rooms, two surfaces each."""
    return make_env([2, 2])


@pytest.fixture
def env_4rooms():
    return make_env([2, 2, 2, 2])


@pytest.fixture
def rng():
    return np.random.default_rng(7)
