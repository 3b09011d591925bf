"""Ground-plane geometry: oriented boxes, exact polygon IOU, frame transforms.

Everything here is a pure function on immutable values. Angles are radians,
normalized to [-pi, pi). Lengths are meters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_TWO_PI = 2.0 * math.pi


def wrap_angle(theta: float) -> float:
    """Normalize an angle to [-pi, pi)."""
    return (theta + math.pi) % _TWO_PI - math.pi


@dataclass(frozen=True)
class Pose2:
    """A 2D rigid pose (position + heading)."""

    x: float
    y: float
    yaw: float

    def __post_init__(self):
        object.__setattr__(self, "yaw", wrap_angle(float(self.yaw)))

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class OrientedBox:
    """Rectangular footprint: center, length along heading, width across it."""

    cx: float
    cy: float
    length: float
    width: float
    yaw: float

    def __post_init__(self):
        if not (self.length > 0 and self.width > 0):
            raise ValueError(f"box dims must be positive, got {self.length} x {self.width}")
        object.__setattr__(self, "yaw", wrap_angle(float(self.yaw)))

    @property
    def center(self) -> np.ndarray:
        return np.array([self.cx, self.cy])

    @property
    def area(self) -> float:
        return self.length * self.width

    def moved_to(self, cx: float, cy: float) -> "OrientedBox":
        return OrientedBox(cx, cy, self.length, self.width, self.yaw)


def box_corners(box: OrientedBox) -> np.ndarray:
    """The 4 vertices of the box, counter-clockwise, as a (4, 2) array.

    Order at yaw=0: front-left, rear-left, rear-right, front-right.
    """
    c, s = math.cos(box.yaw), math.sin(box.yaw)
    hl, hw = 0.5 * box.length, 0.5 * box.width
    local = np.array([[hl, hw], [-hl, hw], [-hl, -hw], [hl, -hw]])
    rot = np.array([[c, -s], [s, c]])
    return local @ rot.T + np.array([box.cx, box.cy])


def polygon_area(vertices: np.ndarray) -> float:
    """Shoelace area of a simple polygon given as an (n, 2) array."""
    if len(vertices) < 3:
        return 0.0
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def clip_convex_polygon(subject: np.ndarray, clip: np.ndarray) -> np.ndarray:
    """Sutherland-Hodgman clip of a convex polygon against a convex CCW polygon.

    Returns the intersection polygon as an (m, 2) array (possibly empty).
    """
    output = [np.asarray(p, dtype=float) for p in subject]
    n = len(clip)
    for i in range(n):
        if not output:
            break
        a = clip[i]
        b = clip[(i + 1) % n]
        ex, ey = b[0] - a[0], b[1] - a[1]
        inside = [ex * (p[1] - a[1]) - ey * (p[0] - a[0]) >= 0.0 for p in output]
        clipped = []
        m = len(output)
        for j in range(m):
            cur, nxt = output[j], output[(j + 1) % m]
            if inside[j]:
                clipped.append(cur)
            if inside[j] != inside[(j + 1) % m]:
                # edge crossing: intersect segment cur->nxt with the clip line
                dx, dy = nxt[0] - cur[0], nxt[1] - cur[1]
                denom = ex * dy - ey * dx
                if abs(denom) > 1e-15:
                    t = (ex * (a[1] - cur[1]) - ey * (a[0] - cur[0])) / denom
                    clipped.append(cur + t * np.array([dx, dy]))
        output = clipped
    return np.array(output) if output else np.empty((0, 2))


def iou_oriented(a: OrientedBox, b: OrientedBox) -> float:
    """Exact intersection-over-union of two oriented boxes via polygon clipping."""
    inter = polygon_area(clip_convex_polygon(box_corners(a), box_corners(b)))
    union = a.area + b.area - inter
    if union <= 0.0:
        return 0.0
    return min(max(inter / union, 0.0), 1.0)


def scale_box_params(box: OrientedBox, sx: float, sy: float) -> OrientedBox:
    """Rescale the box fields axis-wise: cx, length by sx; cy, width by sy.

    This treats length/width as if they were axis-aligned extents, which is what
    a coordinate-normalizing pipeline does to stored box parameters. For yawed
    boxes this genuinely distorts the shape (a true affine rescale of the
    footprint would leave IOU unchanged).
    """
    return OrientedBox(box.cx * sx, box.cy * sy, box.length * sx, box.width * sy, box.yaw)


def iou_oriented_scaled(a: OrientedBox, b: OrientedBox, scale: tuple[float, float] | None) -> float:
    """IOU after optional axis-wise parameter normalization (None = raw metric)."""
    if scale is None:
        return iou_oriented(a, b)
    sx, sy = scale
    return iou_oriented(scale_box_params(a, sx, sy), scale_box_params(b, sx, sy))


def world_to_ego(obj, ego: Pose2):
    """Express a Pose2 or OrientedBox given in world frame in the ego frame."""
    c, s = math.cos(ego.yaw), math.sin(ego.yaw)
    if isinstance(obj, Pose2):
        dx, dy = obj.x - ego.x, obj.y - ego.y
        return Pose2(c * dx + s * dy, -s * dx + c * dy, obj.yaw - ego.yaw)
    if isinstance(obj, OrientedBox):
        dx, dy = obj.cx - ego.x, obj.cy - ego.y
        return OrientedBox(c * dx + s * dy, -s * dx + c * dy, obj.length, obj.width, obj.yaw - ego.yaw)
    raise TypeError(f"unsupported type {type(obj)!r}")


def ego_to_world(obj, ego: Pose2):
    """Inverse of world_to_ego."""
    c, s = math.cos(ego.yaw), math.sin(ego.yaw)
    if isinstance(obj, Pose2):
        return Pose2(ego.x + c * obj.x - s * obj.y, ego.y + s * obj.x + c * obj.y, obj.yaw + ego.yaw)
    if isinstance(obj, OrientedBox):
        return OrientedBox(
            ego.x + c * obj.cx - s * obj.cy,
            ego.y + s * obj.cx + c * obj.cy,
            obj.length,
            obj.width,
            obj.yaw + ego.yaw,
        )
    raise TypeError(f"unsupported type {type(obj)!r}")


# --- angular intervals as seen from a viewpoint (used for occlusion reasoning) ---


def angular_interval(box: OrientedBox, viewpoint: np.ndarray) -> tuple[float, float]:
    """Angular interval (start, width) subtended by the box from a viewpoint.

    start is in [-pi, pi); the interval is [start, start + width] going
    counter-clockwise. A viewpoint inside the box subtends the full circle.
    """
    vx, vy = float(viewpoint[0]), float(viewpoint[1])
    corners = box_corners(box)
    if _point_in_box(vx, vy, box):
        return -math.pi, _TWO_PI
    angles = np.arctan2(corners[:, 1] - vy, corners[:, 0] - vx)
    ref = angles[0]
    rel = np.array([wrap_angle(a - ref) for a in angles])
    lo, hi = ref + rel.min(), ref + rel.max()
    return wrap_angle(lo), hi - lo


def _point_in_box(px: float, py: float, box: OrientedBox, tol: float = 0.0) -> bool:
    c, s = math.cos(box.yaw), math.sin(box.yaw)
    dx, dy = px - box.cx, py - box.cy
    u = c * dx + s * dy
    v = -s * dx + c * dy
    return abs(u) <= 0.5 * box.length + tol and abs(v) <= 0.5 * box.width + tol


def point_in_box(px: float, py: float, box: OrientedBox, tol: float = 0.0) -> bool:
    """Membership test in box coordinates; boundary points count as inside."""
    return _point_in_box(px, py, box, tol)


def interval_overlap(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Length of the circular overlap between two angular intervals."""
    return covered_length(a, [b])


def covered_length(target: tuple[float, float], others: list[tuple[float, float]]) -> float:
    """Length of the part of `target` covered by the union of `others`.

    Intervals are (start, width) on the circle. Treat the target as a segment
    [t0, t0 + w] on the real line and unwrap each other interval by +-2pi so
    every overlapping copy is counted once.
    """
    t0, tw = target
    if tw <= 0.0:
        return 0.0
    pieces: list[tuple[float, float]] = []
    for s0, sw in others:
        if sw <= 0.0:
            continue
        if sw >= _TWO_PI - 1e-12:
            return tw
        for k in (-1, 0, 1):
            lo = max(t0, s0 + k * _TWO_PI)
            hi = min(t0 + tw, s0 + sw + k * _TWO_PI)
            if hi > lo:
                pieces.append((lo, hi))
    if not pieces:
        return 0.0
    pieces.sort()
    total = 0.0
    cur_lo, cur_hi = pieces[0]
    for lo, hi in pieces[1:]:
        if lo > cur_hi:
            total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        else:
            cur_hi = max(cur_hi, hi)
    total += cur_hi - cur_lo
    return min(total, tw)
