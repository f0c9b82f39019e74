"""Planar geometric primitives and contact queries.

Everything operates in the holder plane: lengths in millimetres, angles in
radians, counterclockwise positive.  Polygons are convex with CCW winding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

Vec2 = tuple[float, float]

_TWO_PI = 2.0 * math.pi

# Vertices closer than this to a boundary count as on it.
EDGE_EPS = 1e-9


def _wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    a = math.fmod(a, _TWO_PI)
    if a <= -math.pi:
        a += _TWO_PI
    elif a > math.pi:
        a -= _TWO_PI
    return a


@dataclass(frozen=True)
class Pose:
    """Planar rigid-body configuration: translation (mm) plus yaw (rad)."""

    x: float
    y: float
    yaw: float = 0.0

    def __post_init__(self) -> None:
        for v in (self.x, self.y, self.yaw):
            if not math.isfinite(v):
                raise ValueError(f"pose components must be finite, got {v!r}")
        object.__setattr__(self, "yaw", _wrap_angle(self.yaw))

    def translated(self, dx: float, dy: float) -> "Pose":
        return Pose(self.x + dx, self.y + dy, self.yaw)

    def xy(self) -> Vec2:
        return (self.x, self.y)


def transform(pose: Pose, point: Vec2) -> Vec2:
    """Map a body-frame point into the world frame."""
    c = math.cos(pose.yaw)
    s = math.sin(pose.yaw)
    px, py = point
    return (pose.x + c * px - s * py, pose.y + s * px + c * py)


@dataclass(frozen=True)
class Polygon:
    """Convex polygon, CCW winding, at least 3 vertices, nonzero area."""

    vertices: tuple[Vec2, ...]

    def __post_init__(self) -> None:
        verts = tuple((float(x), float(y)) for x, y in self.vertices)
        if len(verts) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        n = len(verts)
        area2 = 0.0
        for i in range(n):
            x0, y0 = verts[i]
            x1, y1 = verts[(i + 1) % n]
            x2, y2 = verts[(i + 2) % n]
            cross = (x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1)
            if cross < -EDGE_EPS:
                raise ValueError("polygon must be convex with CCW winding")
            area2 += x0 * y1 - x1 * y0
        if area2 <= EDGE_EPS:
            raise ValueError("polygon area must be positive (is the winding CW?)")
        object.__setattr__(self, "vertices", verts)

    @property
    def area(self) -> float:
        total = 0.0
        n = len(self.vertices)
        for i in range(n):
            x0, y0 = self.vertices[i]
            x1, y1 = self.vertices[(i + 1) % n]
            total += x0 * y1 - x1 * y0
        return 0.5 * total

    def radius(self) -> float:
        """Largest vertex distance from the body origin."""
        return max(math.hypot(x, y) for x, y in self.vertices)


def world_vertices(poly: Polygon, pose: Pose) -> list[Vec2]:
    """Polygon vertices transformed by a pose."""
    c = math.cos(pose.yaw)
    s = math.sin(pose.yaw)
    tx, ty = pose.x, pose.y
    return [(tx + c * x - s * y, ty + s * x + c * y) for x, y in poly.vertices]


@dataclass(frozen=True)
class Segment:
    """Oriented face segment with a unit normal pointing off the material side."""

    a: Vec2
    b: Vec2
    outward_normal: Vec2

    def __post_init__(self) -> None:
        ax, ay = self.a
        bx, by = self.b
        if math.hypot(bx - ax, by - ay) <= EDGE_EPS:
            raise ValueError("segment endpoints must be distinct")
        nx, ny = self.outward_normal
        if abs(math.hypot(nx, ny) - 1.0) > 1e-9:
            raise ValueError("outward_normal must be unit length")
        if abs((bx - ax) * nx + (by - ay) * ny) > 1e-9 * math.hypot(bx - ax, by - ay):
            raise ValueError("outward_normal must be perpendicular to the segment")

    @property
    def length(self) -> float:
        return math.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1])

    @property
    def tangent(self) -> Vec2:
        L = self.length
        return ((self.b[0] - self.a[0]) / L, (self.b[1] - self.a[1]) / L)


@dataclass(frozen=True)
class ContactPatch:
    """Single-point contact summary against a face.

    depth    -- penetration past the face line, >= 0 (0 for a touch)
    normal   -- the face outward normal
    point    -- deepest object point inside the face extent
    flush    -- True when a second support point shares the same depth,
                i.e. an object edge lies on the face
    """

    depth: float
    normal: Vec2
    point: Vec2
    flush: bool = False


def face_depth(verts: list[Vec2], seg: Segment) -> tuple[float, Vec2, bool] | None:
    """Deepest penetration of a convex polygon past a face, within its extent.

    Returns (raw_depth, point, flush) where raw_depth may be negative for a
    separated polygon, or None when the polygon does not overlap the strip
    swept by the segment.  Depth is measured along -outward_normal.
    """
    ax, ay = seg.a
    nx, ny = seg.outward_normal
    L = seg.length
    tx, ty = (seg.b[0] - ax) / L, (seg.b[1] - ay) / L

    n = len(verts)
    s_vals = [0.0] * n
    d_vals = [0.0] * n
    for i, (vx, vy) in enumerate(verts):
        rx, ry = vx - ax, vy - ay
        s_vals[i] = rx * tx + ry * ty
        d_vals[i] = -(rx * nx + ry * ny)

    best_d = -math.inf
    best_pt: Vec2 = verts[0]
    count_at_best = 0
    for i in range(n):
        s0, d0 = s_vals[i], d_vals[i]
        j = (i + 1) % n
        s1, d1 = s_vals[j], d_vals[j]
        # Candidate: the vertex itself when inside the extent.
        if -EDGE_EPS <= s0 <= L + EDGE_EPS:
            if d0 > best_d + EDGE_EPS:
                best_d, best_pt, count_at_best = d0, verts[i], 1
            elif d0 > best_d - EDGE_EPS:
                count_at_best += 1
        # Candidates: edge crossings of the extent boundaries s=0 and s=L.
        for s_cut in (0.0, L):
            if (s0 - s_cut) * (s1 - s_cut) < -EDGE_EPS * EDGE_EPS and abs(s1 - s0) > EDGE_EPS:
                t = (s_cut - s0) / (s1 - s0)
                if 0.0 <= t <= 1.0:
                    d_cut = d0 + t * (d1 - d0)
                    px = verts[i][0] + t * (verts[j][0] - verts[i][0])
                    py = verts[i][1] + t * (verts[j][1] - verts[i][1])
                    if d_cut > best_d + EDGE_EPS:
                        best_d, best_pt, count_at_best = d_cut, (px, py), 1
                    elif d_cut > best_d - EDGE_EPS:
                        count_at_best += 1
    if not math.isfinite(best_d):
        return None
    return best_d, best_pt, count_at_best >= 2


def penetration(poly: Polygon, seg: Segment, pose: Pose | None = None,
                touch_tol: float = 0.0) -> ContactPatch | None:
    """Contact patch of a polygon against a face segment, if any.

    A patch is reported when the deepest polygon point within the face extent
    reaches the face line to within touch_tol.  Reported depth is clamped at
    zero so an exact touch reads as depth 0.
    """
    verts = world_vertices(poly, pose) if pose is not None else list(poly.vertices)
    hit = face_depth(verts, seg)
    if hit is None:
        return None
    raw, point, flush = hit
    if raw < -touch_tol:
        return None
    return ContactPatch(depth=max(raw, 0.0), normal=seg.outward_normal,
                        point=point, flush=flush)


def point_in_polygon(p: Vec2, poly: Polygon, tol: float = EDGE_EPS) -> bool:
    """True when the point lies inside or on the boundary of a convex CCW polygon."""
    px, py = p
    verts = poly.vertices
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        if (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0) < -tol:
            return False
    return True


def _point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> float:
    px, py = p
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    if L2 <= EDGE_EPS * EDGE_EPS:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / L2
    t = min(1.0, max(0.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def pocket_containment_error(obj: Polygon, pocket: Polygon,
                             obj_pose: Pose | None = None) -> float:
    """Worst protrusion of the object outside the pocket outline, in mm.

    Zero when every object vertex lies inside (or on) the pocket boundary;
    otherwise the largest distance from a protruding vertex to the boundary.
    """
    verts = world_vertices(obj, obj_pose) if obj_pose is not None else list(obj.vertices)
    pverts = pocket.vertices
    n = len(pverts)
    worst = 0.0
    for v in verts:
        if point_in_polygon(v, pocket):
            continue
        dist = min(_point_segment_distance(v, pverts[i], pverts[(i + 1) % n])
                   for i in range(n))
        if dist > worst:
            worst = dist
    return worst
