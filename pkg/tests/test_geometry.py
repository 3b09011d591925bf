import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trackcast.geometry import (
    OrientedBox,
    Pose2,
    angular_interval,
    box_corners,
    covered_length,
    ego_to_world,
    iou_oriented,
    iou_oriented_scaled,
    polygon_area,
    world_to_ego,
    wrap_angle,
)


def mc_iou(a: OrientedBox, b: OrientedBox, n: int = 1_000_000, seed: int = 0) -> float:
    """Monte-Carlo IOU oracle: uniform samples over the joint bounding region."""
    ca, cb = box_corners(a), box_corners(b)
    pts = np.vstack([ca, cb])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    rng = np.random.default_rng(seed)
    samples = rng.uniform(lo, hi, size=(n, 2))

    def inside(box, p):
        c, s = math.cos(box.yaw), math.sin(box.yaw)
        dx, dy = p[:, 0] - box.cx, p[:, 1] - box.cy
        u = c * dx + s * dy
        v = -s * dx + c * dy
        return (np.abs(u) <= box.length / 2) & (np.abs(v) <= box.width / 2)

    in_a, in_b = inside(a, samples), inside(b, samples)
    union = np.count_nonzero(in_a | in_b)
    if union == 0:
        return 0.0
    return np.count_nonzero(in_a & in_b) / union


def random_box(rng, span=10.0) -> OrientedBox:
    return OrientedBox(
        rng.uniform(-span, span),
        rng.uniform(-span, span),
        rng.uniform(0.5, 6.0),
        rng.uniform(0.5, 4.0),
        rng.uniform(-math.pi, math.pi),
    )


class TestBoxCorners:
    def test_unit_square_axis_aligned(self):
        corners = box_corners(OrientedBox(0, 0, 1, 1, 0.0))
        expected = {(0.5, 0.5), (-0.5, 0.5), (-0.5, -0.5), (0.5, -0.5)}
        assert {(round(x, 12), round(y, 12)) for x, y in corners} == expected

    def test_quarter_turn_swaps_extents(self):
        # a 4x2 box at yaw pi/2 occupies the same cells as a 2x4 axis-aligned box
        turned = box_corners(OrientedBox(0, 0, 4, 2, math.pi / 2))
        axis = box_corners(OrientedBox(0, 0, 2, 4, 0.0))
        assert sorted(map(tuple, np.round(turned, 12))) == sorted(map(tuple, np.round(axis, 12)))

    def test_rotated_corners_match_rotation_matrix(self):
        # independent hand computation: R(pi/6) applied to (+-2, +-1)
        c, s = math.cos(math.pi / 6), math.sin(math.pi / 6)
        expected = sorted((c * x - s * y, s * x + c * y) for x in (-2, 2) for y in (-1, 1))
        got = sorted(map(tuple, box_corners(OrientedBox(0, 0, 4, 2, math.pi / 6))))
        assert np.allclose(got, expected, atol=1e-12)

    def test_centroid_is_center(self):
        box = OrientedBox(3.0, -7.0, 4.2, 1.7, 0.83)
        assert np.allclose(box_corners(box).mean(axis=0), [3.0, -7.0], atol=1e-12)

    def test_counter_clockwise(self):
        corners = box_corners(OrientedBox(1, 2, 3, 2, 0.4))
        assert polygon_area(corners) > 0
        # signed shoelace must be positive for CCW
        x, y = corners[:, 0], corners[:, 1]
        signed = 0.5 * (np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
        assert signed > 0


class TestIou:
    def test_identical_boxes(self):
        b = OrientedBox(1, 2, 4, 2, 0.3)
        assert iou_oriented(b, b) == pytest.approx(1.0, abs=1e-12)

    def test_disjoint(self):
        a = OrientedBox(0, 0, 1, 1, 0)
        b = OrientedBox(100, 0, 1, 1, 0)
        assert iou_oriented(a, b) == 0.0

    def test_half_offset_unit_squares(self):
        a = OrientedBox(0, 0, 1, 1, 0)
        b = OrientedBox(0.5, 0, 1, 1, 0)
        assert iou_oriented(a, b) == pytest.approx(1 / 3, abs=1e-12)

    def test_edge_contact_is_zero(self):
        a = OrientedBox(0, 0, 1, 1, 0)
        b = OrientedBox(1.0, 0, 1, 1, 0)
        assert iou_oriented(a, b) == pytest.approx(0.0, abs=1e-12)

    def test_rotated_concentric_square_vs_monte_carlo(self):
        a = OrientedBox(0, 0, 1, 1, 0.0)
        b = OrientedBox(0, 0, 1, 1, math.pi / 4)
        assert iou_oriented(a, b) == pytest.approx(mc_iou(a, b, seed=7), abs=1e-3)

    def test_random_pairs_vs_monte_carlo(self):
        # smaller sample count here; the full 1e6-sample sweep runs in acceptance
        rng = np.random.default_rng(42)
        for trial in range(20):
            a, b = random_box(rng, span=3.0), random_box(rng, span=3.0)
            assert iou_oriented(a, b) == pytest.approx(
                mc_iou(a, b, n=200_000, seed=trial), abs=3e-3
            )

    def test_symmetry_and_range(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            a, b = random_box(rng), random_box(rng)
            ab, ba = iou_oriented(a, b), iou_oriented(b, a)
            assert ab == pytest.approx(ba, abs=1e-12)
            assert 0.0 <= ab <= 1.0

    def test_rigid_invariance(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            a, b = random_box(rng, span=4.0), random_box(rng, span=4.0)
            base = iou_oriented(a, b)
            dx, dy, dth = rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-math.pi, math.pi)
            moved = []
            for box in (a, b):
                c, s = math.cos(dth), math.sin(dth)
                nx = c * box.cx - s * box.cy + dx
                ny = s * box.cx + c * box.cy + dy
                moved.append(OrientedBox(nx, ny, box.length, box.width, box.yaw + dth))
            assert iou_oriented(*moved) == pytest.approx(base, abs=1e-9)

    def test_scaled_mode_isotropic_matches_raw(self):
        a = OrientedBox(4, 4, 4, 2, 0.7)
        b = OrientedBox(5, 4.5, 4, 2, 0.9)
        assert iou_oriented_scaled(a, b, (0.01, 0.01)) == pytest.approx(
            iou_oriented(a, b), abs=1e-9
        )

    def test_scaled_mode_anisotropic_distorts_rotated_boxes(self):
        a = OrientedBox(4, 4, 4, 2, 0.7)
        b = OrientedBox(5, 4.5, 4, 2, 0.9)
        raw = iou_oriented(a, b)
        norm = iou_oriented_scaled(a, b, (1 / 100.0, 1 / 70.0))
        assert norm != pytest.approx(raw, abs=1e-6)


class TestTransforms:
    def test_identity_pose(self):
        p = Pose2(3.0, -1.0, 0.4)
        out = world_to_ego(p, Pose2(0, 0, 0))
        assert (out.x, out.y, out.yaw) == pytest.approx((p.x, p.y, p.yaw))

    def test_pure_translation(self):
        out = world_to_ego(Pose2(1, 0, 0), Pose2(1, 0, 0))
        assert (out.x, out.y) == pytest.approx((0.0, 0.0), abs=1e-15)

    def test_translate_and_rotate(self):
        # hand application of the inverse rigid transform
        out = world_to_ego(Pose2(2, 0, 0), Pose2(1, 0, math.pi / 2))
        assert (out.x, out.y) == pytest.approx((0.0, -1.0), abs=1e-12)

    @given(
        st.floats(-50, 50), st.floats(-50, 50), st.floats(-math.pi, math.pi - 1e-9),
        st.floats(-50, 50), st.floats(-50, 50), st.floats(-math.pi, math.pi - 1e-9),
    )
    @settings(max_examples=200, deadline=None)
    def test_roundtrip_pose(self, x, y, yaw, ex, ey, eyaw):
        ego = Pose2(ex, ey, eyaw)
        p = Pose2(x, y, yaw)
        back = ego_to_world(world_to_ego(p, ego), ego)
        assert back.x == pytest.approx(p.x, abs=1e-12)
        assert back.y == pytest.approx(p.y, abs=1e-12)
        assert wrap_angle(back.yaw - p.yaw) == pytest.approx(0.0, abs=1e-12)

    def test_roundtrip_box(self):
        rng = np.random.default_rng(5)
        ego = Pose2(3.3, -2.2, 1.1)
        for _ in range(100):
            b = random_box(rng)
            back = ego_to_world(world_to_ego(b, ego), ego)
            assert np.allclose(
                [back.cx, back.cy, back.length, back.width],
                [b.cx, b.cy, b.length, b.width],
                atol=1e-12,
            )
            assert wrap_angle(back.yaw - b.yaw) == pytest.approx(0.0, abs=1e-12)


class TestAngularIntervals:
    def test_box_straight_ahead(self):
        # 2m-wide box centered 10m away: half-angle atan(1/10)
        box = OrientedBox(10, 0, 1, 2, 0.0)
        start, width = angular_interval(box, np.array([0.0, 0.0]))
        half = math.atan2(1.0, 9.5)  # nearest corners dominate
        assert width == pytest.approx(2 * half, rel=1e-9)
        assert start == pytest.approx(-half, abs=1e-9)

    def test_viewpoint_inside(self):
        box = OrientedBox(0, 0, 4, 4, 0.3)
        _, width = angular_interval(box, np.array([0.0, 0.0]))
        assert width == pytest.approx(2 * math.pi)

    def test_covered_length_disjoint(self):
        assert covered_length((0.0, 0.5), [(1.0, 0.5)]) == 0.0

    def test_covered_length_nested(self):
        assert covered_length((0.0, 1.0), [(-1.0, 3.0)]) == pytest.approx(1.0)

    def test_covered_length_union_merges(self):
        got = covered_length((0.0, 1.0), [(0.0, 0.4), (0.3, 0.4), (0.9, 0.5)])
        assert got == pytest.approx(0.8)

    def test_covered_length_wraparound(self):
        # target straddles the -pi/pi cut
        target = (math.pi - 0.2, 0.4)
        other = (-math.pi, 0.1)
        assert covered_length(target, [other]) == pytest.approx(0.1)
