"""Planar geometry primitives: axis-aligned rectangles, ray blocking, view cones.

Everything works on numpy arrays of 2D points so the visibility checks stay
vectorized over whole particle sets.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle [x0, x1] x [y0, y1]."""

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if self.x1 <= self.x0 or self.y1 <= self.y0:
            raise ValueError(f"degenerate rect {self}")

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> np.ndarray:
        return np.array([(self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0])

    def contains(self, points: np.ndarray, eps: float = 1e-9) -> np.ndarray:
        """Boolean mask of points inside the rectangle (closed, with slack eps)."""
        pts = np.atleast_2d(points)
        return (
            (pts[:, 0] >= self.x0 - eps)
            & (pts[:, 0] <= self.x1 + eps)
            & (pts[:, 1] >= self.y0 - eps)
            & (pts[:, 1] <= self.y1 + eps)
        )

    def contains_point(self, x: float, y: float, eps: float = 1e-9) -> bool:
        return bool(self.contains(np.array([[x, y]]), eps=eps)[0])

    def contains_rect(self, other: "Rect", eps: float = 1e-9) -> bool:
        return (
            other.x0 >= self.x0 - eps
            and other.x1 <= self.x1 + eps
            and other.y0 >= self.y0 - eps
            and other.y1 <= self.y1 + eps
        )

    def overlaps(self, other: "Rect") -> bool:
        return not (
            other.x0 >= self.x1
            or other.x1 <= self.x0
            or other.y0 >= self.y1
            or other.y1 <= self.y0
        )

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """n points uniform over the rectangle, shape (n, 2)."""
        xs = rng.uniform(self.x0, self.x1, size=n)
        ys = rng.uniform(self.y0, self.y1, size=n)
        return np.column_stack([xs, ys])

    def grid_points(self, per_side: int = 16) -> np.ndarray:
        """Cell-center grid over the rect, used for area-fraction estimates."""
        fx = (np.arange(per_side) + 0.5) / per_side
        fy = (np.arange(per_side) + 0.5) / per_side
        gx, gy = np.meshgrid(self.x0 + fx * self.width, self.y0 + fy * self.height)
        return np.column_stack([gx.ravel(), gy.ravel()])

    def as_list(self) -> list:
        return [self.x0, self.y0, self.x1, self.y1]

    @classmethod
    def from_list(cls, vals) -> "Rect":
        return cls(*[float(v) for v in vals])


def segments_hit_rect(origin: np.ndarray, targets: np.ndarray, rect: Rect) -> np.ndarray:
    """For each target point, whether the open segment origin->target crosses rect.

    Liang-Barsky clipping, vectorized over targets. A segment that merely ends
    on the rect boundary (e.g. a detection pose on an occluder face) does not
    count as blocked; interior overlap does.
    """
    targets = np.atleast_2d(targets)
    d = targets - origin  # (n, 2)
    t0 = np.zeros(len(targets))
    t1 = np.ones(len(targets))
    ok = np.ones(len(targets), dtype=bool)

    for axis, (lo, hi) in enumerate(((rect.x0, rect.x1), (rect.y0, rect.y1))):
        p = d[:, axis]
        q_lo = origin[axis] - lo
        q_hi = hi - origin[axis]
        parallel = np.abs(p) < 1e-12
        # Parallel and outside the slab: no intersection possible.
        ok &= ~(parallel & ((q_lo < 0) | (q_hi < 0)))
        with np.errstate(divide="ignore", invalid="ignore"):
            t_lo = np.where(parallel, -np.inf, -q_lo / np.where(parallel, 1.0, p))
            t_hi = np.where(parallel, np.inf, q_hi / np.where(parallel, 1.0, p))
        enter = np.minimum(t_lo, t_hi)
        leave = np.maximum(t_lo, t_hi)
        t0 = np.where(parallel, t0, np.maximum(t0, enter))
        t1 = np.where(parallel, t1, np.minimum(t1, leave))

    span = np.maximum(t1 - t0, 0.0)
    # Require a real interior crossing, not a grazing touch.
    return ok & (t0 < t1) & (span > 1e-9)


def segment_hits_segment(origin: np.ndarray, targets: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """For each target, whether segment origin->target properly crosses segment a-b.

    Parametrize origin + t*(target-origin) and a + u*(b-a); both parameters are
    solved by 2D cross products. Grazing the endpoint of the ray is tolerated
    (t strictly inside) so a particle sitting on a wall face is still visible
    from its own side.
    """
    targets = np.atleast_2d(targets)
    r = targets - origin  # (n, 2)
    s = b - a  # (2,)
    qp = a - origin  # (2,)
    denom = r[:, 0] * s[1] - r[:, 1] * s[0]
    nonpar = np.abs(denom) > 1e-12
    safe = np.where(nonpar, denom, 1.0)
    t = (qp[0] * s[1] - qp[1] * s[0]) / safe
    u = (qp[0] * r[:, 1] - qp[1] * r[:, 0]) / safe
    eps = 1e-9
    return nonpar & (t > eps) & (t < 1 - eps) & (u > -eps) & (u < 1 + eps)


def in_view_cone(
    origin: np.ndarray,
    heading: float,
    half_angle: float,
    max_range: float,
    points: np.ndarray,
) -> np.ndarray:
    """Mask of points inside the wedge (heading +/- half_angle, radius max_range)."""
    pts = np.atleast_2d(points)
    d = pts - origin
    dist = np.hypot(d[:, 0], d[:, 1])
    bearing = np.arctan2(d[:, 1], d[:, 0])
    rel = np.arctan2(np.sin(bearing - heading), np.cos(bearing - heading))
    return (dist <= max_range + 1e-9) & (np.abs(rel) <= half_angle + 1e-9)


def visible_mask(
    origin: np.ndarray,
    heading: float,
    half_angle: float,
    max_range: float,
    points: np.ndarray,
    blockers: list[Rect],
    wall_segments: list[tuple[np.ndarray, np.ndarray]],
) -> np.ndarray:
    """Cone membership minus any ray blocked by a wall segment or blocker box."""
    pts = np.atleast_2d(points)
    mask = in_view_cone(origin, heading, half_angle, max_range, pts)
    if not mask.any():
        return mask
    for rect in blockers:
        hit = segments_hit_rect(origin, pts, rect)
        mask &= ~hit
        if not mask.any():
            return mask
    for a, b in wall_segments:
        hit = segment_hits_segment(origin, pts, a, b)
        mask &= ~hit
        if not mask.any():
            return mask
    return mask
