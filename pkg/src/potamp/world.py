"""Household world description: rooms, surfaces, occluders, objects, nav graph.

An EnvironmentSpec is immutable after construction and shared across parallel
runs. Indices are dense and 0-based; a surface knows the room it belongs to.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .geometry import Rect

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Room:
    id: int
    label: str
    rect: Rect


@dataclass(frozen=True)
class Surface:
    id: int
    label: str
    room_id: int
    rect: Rect
    height: str = "mid"  # low | mid | high, cosmetic


@dataclass(frozen=True)
class Occluder:
    rect: Rect
    known: bool = False  # known occluders enter the planner's map immediately


@dataclass(frozen=True)
class ObjectSpec:
    id: int
    label: str
    surface_id: int
    pose: tuple[float, float, float]  # x, y, yaw


@dataclass(frozen=True)
class NavNode:
    id: int
    label: str
    x: float
    y: float

    @property
    def xy(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass
class EnvironmentSpec:
    rooms: list[Room]
    surfaces: list[Surface]
    occluders: list[Occluder]
    objects: list[ObjectSpec]
    nav_nodes: list[NavNode]
    nav_edges: list[tuple[int, int]]  # undirected, length = euclidean
    surface_approach: dict[int, list[int]]  # surface id -> approach node ids
    start_node: int = 0
    meta: dict = field(default_factory=dict)

    # derived, filled by __post_init__
    _dist: np.ndarray | None = None
    _walls: list | None = None

    def __post_init__(self):
        self.validate()
        self._walls = self._build_walls()
        self._dist = self._all_pairs_distances()

    # ------------------------------------------------------------- validation
    def validate(self) -> None:
        if not self.rooms or not self.surfaces:
            raise ConfigurationError("environment needs at least one room and surface")
        for i, room in enumerate(self.rooms):
            if room.id != i:
                raise ConfigurationError("room ids must be dense and ordered")
            for other in self.rooms[i + 1:]:
                if room.rect.overlaps(other.rect):
                    raise ConfigurationError(
                        f"rooms {room.label} and {other.label} overlap")
        room_ids = {r.id for r in self.rooms}
        for j, surf in enumerate(self.surfaces):
            if surf.id != j:
                raise ConfigurationError("surface ids must be dense and ordered")
            if surf.room_id not in room_ids:
                raise ConfigurationError(f"surface {surf.label} references unknown room")
            if not self.rooms[surf.room_id].rect.contains_rect(surf.rect):
                raise ConfigurationError(f"surface {surf.label} outside its room")
        for obj in self.objects:
            surf = self.surfaces[obj.surface_id]
            if not surf.rect.contains_point(obj.pose[0], obj.pose[1]):
                raise ConfigurationError(f"object {obj.label} off its surface")
        if not self.nav_nodes:
            raise ConfigurationError("nav graph is empty")
        if not self._connected():
            raise ConfigurationError("nav graph is not connected")

    def _connected(self) -> bool:
        adj: dict[int, list[int]] = {n.id: [] for n in self.nav_nodes}
        for a, b in self.nav_edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = {self.nav_nodes[0].id}
        stack = [self.nav_nodes[0].id]
        while stack:
            cur = stack.pop()
            for nxt in adj[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return len(seen) == len(self.nav_nodes)

    # --------------------------------------------------------------- geometry
    def _build_walls(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Wall segments: each room's boundary minus doorway gaps.

        A doorway is declared implicitly by nav edges whose endpoints lie in
        different rooms; the shared boundary interval around the edge midpoint
        is left open (gap width 0.8 m).
        """
        gaps = []
        for a, b in self.nav_edges:
            na, nb = self.nav_nodes[a], self.nav_nodes[b]
            ra = self.room_of_point(na.x, na.y)
            rb = self.room_of_point(nb.x, nb.y)
            if ra is not None and rb is not None and ra != rb:
                gaps.append(((na.x + nb.x) / 2.0, (na.y + nb.y) / 2.0))

        half_gap = 0.4
        walls: list[tuple[np.ndarray, np.ndarray]] = []
        for room in self.rooms:
            r = room.rect
            edges = [
                ((r.x0, r.y0), (r.x1, r.y0)),
                ((r.x1, r.y0), (r.x1, r.y1)),
                ((r.x1, r.y1), (r.x0, r.y1)),
                ((r.x0, r.y1), (r.x0, r.y0)),
            ]
            for (ax, ay), (bx, by) in edges:
                pieces = [(0.0, 1.0)]
                length = float(np.hypot(bx - ax, by - ay))
                for gx, gy in gaps:
                    # distance of gap center to this edge; only split when on it
                    if abs((bx - ax) * (gy - ay) - (by - ay) * (gx - ax)) / length > 0.2:
                        continue
                    t = ((gx - ax) * (bx - ax) + (gy - ay) * (by - ay)) / length**2
                    if t < -0.05 or t > 1.05:
                        continue
                    lo, hi = t - half_gap / length, t + half_gap / length
                    new_pieces = []
                    for p0, p1 in pieces:
                        if hi <= p0 or lo >= p1:
                            new_pieces.append((p0, p1))
                        else:
                            if lo > p0:
                                new_pieces.append((p0, lo))
                            if hi < p1:
                                new_pieces.append((hi, p1))
                    pieces = new_pieces
                for p0, p1 in pieces:
                    pa = np.array([ax + (bx - ax) * p0, ay + (by - ay) * p0])
                    pb = np.array([ax + (bx - ax) * p1, ay + (by - ay) * p1])
                    if np.hypot(*(pb - pa)) > 1e-6:
                        walls.append((pa, pb))
        return walls

    @property
    def walls(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return self._walls

    def room_of_point(self, x: float, y: float) -> int | None:
        for room in self.rooms:
            if room.rect.contains_point(x, y):
                return room.id
        return None

    def surface_of_point(self, x: float, y: float) -> int | None:
        for surf in self.surfaces:
            if surf.rect.contains_point(x, y):
                return surf.id
        return None

    def surfaces_in_room(self, room_id: int) -> list[Surface]:
        return [s for s in self.surfaces if s.room_id == room_id]

    def room_of_surface(self, surface_id: int) -> int:
        return self.surfaces[surface_id].room_id

    def object_by_label(self, label: str) -> ObjectSpec:
        for obj in self.objects:
            if obj.label == label:
                return obj
        raise KeyError(label)

    def surface_by_label(self, label: str) -> Surface:
        for surf in self.surfaces:
            if surf.label == label:
                return surf
        raise KeyError(label)

    # -------------------------------------------------------------- nav graph
    def _all_pairs_distances(self) -> np.ndarray:
        n = len(self.nav_nodes)
        dist = np.full((n, n), np.inf)
        adj: dict[int, list[tuple[int, float]]] = {i: [] for i in range(n)}
        for a, b in self.nav_edges:
            na, nb = self.nav_nodes[a], self.nav_nodes[b]
            w = float(np.hypot(na.x - nb.x, na.y - nb.y))
            adj[a].append((b, w))
            adj[b].append((a, w))
        for src in range(n):
            d = np.full(n, np.inf)
            d[src] = 0.0
            heap = [(0.0, src)]
            while heap:
                dd, cur = heapq.heappop(heap)
                if dd > d[cur]:
                    continue
                for nxt, w in adj[cur]:
                    alt = dd + w
                    if alt < d[nxt]:
                        d[nxt] = alt
                        heapq.heappush(heap, (alt, nxt))
            dist[src] = d
        return dist

    def nav_distance(self, a: int, b: int) -> float:
        return float(self._dist[a, b])

    def node(self, node_id: int) -> NavNode:
        return self.nav_nodes[node_id]

    # ------------------------------------------------------------------- io
    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "rooms": [
                {"id": r.id, "label": r.label, "rect": r.rect.as_list()}
                for r in self.rooms
            ],
            "surfaces": [
                {
                    "id": s.id,
                    "label": s.label,
                    "room": s.room_id,
                    "rect": s.rect.as_list(),
                    "height": s.height,
                }
                for s in self.surfaces
            ],
            "occluders": [
                {"rect": o.rect.as_list(), "known": o.known} for o in self.occluders
            ],
            "objects": [
                {
                    "id": o.id,
                    "label": o.label,
                    "surface": o.surface_id,
                    "pose": list(o.pose),
                }
                for o in self.objects
            ],
            "nav": {
                "nodes": [
                    {"id": n.id, "label": n.label, "xy": [n.x, n.y]}
                    for n in self.nav_nodes
                ],
                "edges": [list(e) for e in self.nav_edges],
                "surface_approach": {
                    str(k): list(v) for k, v in self.surface_approach.items()
                },
                "start_node": self.start_node,
            },
            "meta": self.meta,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "EnvironmentSpec":
        version = doc.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ConfigurationError(f"unsupported environment schema {version!r}")
        rooms = [
            Room(r["id"], r["label"], Rect.from_list(r["rect"])) for r in doc["rooms"]
        ]
        surfaces = [
            Surface(
                s["id"], s["label"], s["room"], Rect.from_list(s["rect"]),
                s.get("height", "mid"),
            )
            for s in doc["surfaces"]
        ]
        occluders = [
            Occluder(Rect.from_list(o["rect"]), bool(o.get("known", False)))
            for o in doc.get("occluders", [])
        ]
        objects = [
            ObjectSpec(o["id"], o["label"], o["surface"], tuple(o["pose"]))
            for o in doc["objects"]
        ]
        nav = doc["nav"]
        nodes = [NavNode(n["id"], n["label"], n["xy"][0], n["xy"][1]) for n in nav["nodes"]]
        edges = [tuple(e) for e in nav["edges"]]
        approach = {int(k): list(v) for k, v in nav["surface_approach"].items()}
        return cls(
            rooms=rooms,
            surfaces=surfaces,
            occluders=occluders,
            objects=objects,
            nav_nodes=nodes,
            nav_edges=edges,
            surface_approach=approach,
            start_node=nav.get("start_node", 0),
            meta=doc.get("meta", {}),
        )

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)

    @classmethod
    def load(cls, path) -> "EnvironmentSpec":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def surface_option_label(env: EnvironmentSpec, surface_id: int) -> str:
    """Human-readable unique surface name for multiple-choice prompts."""
    surf = env.surfaces[surface_id]
    room = env.rooms[surf.room_id]
    return f"{surf.label} in the {room.label}"
