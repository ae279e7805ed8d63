"""Arena geometry, kinematics, ray casting, and the ultrasonic model."""
from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from voicebot.world import (
    Arena,
    Bounds,
    DEFAULT_MAX_RANGE_CM,
    EchoMeasurement,
    Pose,
    RobotBody,
    Segment,
    disc_is_free,
    distance_cm_from_duration,
    duration_from_distance_cm,
    echo_from_distance,
    normalize_heading,
    point_segment_distance,
    ray_hit_distance,
    resolve_collision,
    step_kinematics,
    ultrasonic_cast,
)

BODY = RobotBody()

# Round-trip time for a 10 cm wall, frozen from t = 2d / 343 m/s.
ECHO_10CM_US = 583.0903790087464


def rk4_pose(x: float, y: float, h: float, v: float, omega: float, total: float, steps: int):
    """Independent fixed-step RK4 integration of the unicycle ODE."""
    dt = total / steps
    for _ in range(steps):
        k1 = (v * math.cos(h), v * math.sin(h), omega)
        k2 = (v * math.cos(h + 0.5 * dt * k1[2]), v * math.sin(h + 0.5 * dt * k1[2]), omega)
        k3 = (v * math.cos(h + 0.5 * dt * k2[2]), v * math.sin(h + 0.5 * dt * k2[2]), omega)
        k4 = (v * math.cos(h + dt * k3[2]), v * math.sin(h + dt * k3[2]), omega)
        x += dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        y += dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        h += dt * omega
    return x, y, h


class TestNormalizeHeading:
    @pytest.mark.parametrize("h", [0.0, 0.5, -0.5, math.pi, -3.0, 3.0])
    def test_in_range_untouched(self, h):
        assert normalize_heading(h) == h

    def test_wraps_positive(self):
        assert normalize_heading(math.pi + 0.5) == pytest.approx(-math.pi + 0.5, abs=1e-12)

    def test_wraps_negative_pi_to_pi(self):
        assert normalize_heading(-math.pi) == math.pi

    def test_multiple_turns(self):
        assert normalize_heading(7 * math.pi) == pytest.approx(math.pi, abs=1e-9)

    @given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
    @settings(max_examples=300)
    def test_range_and_equivalence(self, h):
        out = normalize_heading(h)
        assert -math.pi < out <= math.pi
        # same direction modulo full turns
        assert math.isclose(math.cos(out), math.cos(h), abs_tol=1e-6)
        assert math.isclose(math.sin(out), math.sin(h), abs_tol=1e-6)


class TestKinematics:
    def test_zero_speeds_hold_pose_exactly(self):
        pose = Pose(1.25, 2.5, 0.7)
        out = step_kinematics(pose, 0.0, 0.0, BODY, 0.01)
        assert (out.x, out.y, out.heading) == (pose.x, pose.y, pose.heading)

    def test_equal_wheels_keep_heading_exactly(self):
        pose = Pose(1.0, 1.0, 0.3)
        out = step_kinematics(pose, 5.0, 5.0, BODY, 0.75)
        assert out.heading == pose.heading
        travelled = math.hypot(out.x - pose.x, out.y - pose.y)
        assert travelled == pytest.approx(BODY.wheel_radius * 5.0 * 0.75, abs=1e-12)

    def test_equal_wheels_move_along_heading(self):
        pose = Pose(0.0, 0.0, math.pi / 2)
        out = step_kinematics(pose, 4.0, 4.0, BODY, 1.0)
        assert out.x == pytest.approx(0.0, abs=1e-12)
        assert out.y == pytest.approx(BODY.wheel_radius * 4.0, abs=1e-12)

    def test_opposite_wheels_pivot_in_place_exactly(self):
        pose = Pose(2.0, 3.0, 1.0)
        out = step_kinematics(pose, -6.0, 6.0, BODY, 0.5)
        assert (out.x, out.y) == (pose.x, pose.y)
        omega = BODY.wheel_radius * 12.0 / BODY.wheel_base
        assert out.heading == pytest.approx(normalize_heading(1.0 + omega * 0.5), abs=1e-12)

    def test_one_wheel_arc_matches_rk4(self):
        # constant controls for 10 s, stepped at the simulation tick size
        pose = Pose(0.0, 0.0, 0.0)
        v_left, v_right = 0.0, 6.0
        for _ in range(1000):
            pose = step_kinematics(pose, v_left, v_right, BODY, 0.01)
        v = BODY.wheel_radius * (v_left + v_right) / 2
        omega = BODY.wheel_radius * (v_right - v_left) / BODY.wheel_base
        ox, oy, oh = rk4_pose(0.0, 0.0, 0.0, v, omega, 10.0, 10_000)
        assert pose.x == pytest.approx(ox, abs=1e-6)
        assert pose.y == pytest.approx(oy, abs=1e-6)
        assert math.cos(pose.heading) == pytest.approx(math.cos(oh), abs=1e-6)
        assert math.sin(pose.heading) == pytest.approx(math.sin(oh), abs=1e-6)

    def test_single_long_step_equals_composition(self):
        # the closed-form arc is exact, so step size must not matter much
        p1 = Pose(0.0, 0.0, 0.0)
        for _ in range(100):
            p1 = step_kinematics(p1, 2.0, 5.0, BODY, 0.01)
        p2 = step_kinematics(Pose(0.0, 0.0, 0.0), 2.0, 5.0, BODY, 1.0)
        assert p1.x == pytest.approx(p2.x, abs=1e-9)
        assert p1.y == pytest.approx(p2.y, abs=1e-9)

    def test_rejects_nonpositive_dt(self):
        with pytest.raises(ValueError):
            step_kinematics(Pose(0, 0, 0), 1.0, 1.0, BODY, 0.0)

    @given(
        st.floats(-8, 8),
        st.floats(-8, 8),
        st.floats(-3.1, 3.1),
        st.floats(0.001, 0.1),
    )
    @settings(max_examples=200)
    def test_heading_stays_normalized(self, vl, vr, h, dt):
        out = step_kinematics(Pose(0.0, 0.0, h), vl, vr, BODY, dt)
        assert -math.pi < out.heading <= math.pi


class TestRayCasting:
    WALL = (Segment(2.0, 0.0, 2.0, 3.0),)

    def test_perpendicular_hit_is_exact(self):
        assert ray_hit_distance(1.0, 1.5, 1.0, 0.0, self.WALL) == 1.0

    def test_ray_pointing_away_misses(self):
        assert ray_hit_distance(1.0, 1.5, -1.0, 0.0, self.WALL) == math.inf

    def test_parallel_ray_misses(self):
        assert ray_hit_distance(1.0, 1.5, 0.0, 1.0, self.WALL) == math.inf

    def test_diagonal_hit(self):
        d = ray_hit_distance(1.0, 1.0, math.sqrt(0.5), math.sqrt(0.5), self.WALL)
        assert d == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_beyond_segment_extent_misses(self):
        assert ray_hit_distance(1.0, 5.0, 1.0, 0.0, self.WALL) == math.inf

    def test_endpoint_hit_counts(self):
        d = ray_hit_distance(1.0, 3.0, 1.0, 0.0, self.WALL)
        assert d == 1.0

    def test_nearest_of_many_wins(self):
        segs = (Segment(3.0, 0.0, 3.0, 3.0), Segment(2.0, 0.0, 2.0, 3.0))
        assert ray_hit_distance(0.0, 1.0, 1.0, 0.0, segs) == 2.0

    def test_origin_on_segment_hits_at_zero(self):
        assert ray_hit_distance(2.0, 1.0, 1.0, 0.0, self.WALL) == 0.0


class TestEcho:
    def test_ten_centimeter_oracle(self):
        assert duration_from_distance_cm(10.0) == ECHO_10CM_US
        assert abs(duration_from_distance_cm(10.0) - 583.1) < 0.5

    def test_round_trip_inversion(self):
        for i in range(1000):
            d = 2.0 + (400.0 - 2.0) * i / 999.0
            back = distance_cm_from_duration(duration_from_distance_cm(d))
            assert abs(back - d) / d < 1e-9

    def test_saturation_past_max_range(self):
        echo = echo_from_distance(400.0000001)
        assert echo == EchoMeasurement(duration_from_distance_cm(400.0), 400.0, True)

    def test_infinite_distance_saturates(self):
        echo = echo_from_distance(math.inf)
        assert echo.saturated is True
        assert echo.distance_cm == DEFAULT_MAX_RANGE_CM

    def test_exactly_max_range_not_saturated(self):
        echo = echo_from_distance(400.0)
        assert echo.saturated is False

    def test_negative_clamps_to_zero(self):
        echo = echo_from_distance(-3.0)
        assert echo.distance_cm == 0.0
        assert echo.duration_us == 0.0

    def test_custom_max_range(self):
        echo = echo_from_distance(250.0, max_range_cm=200.0)
        assert echo == EchoMeasurement(duration_from_distance_cm(200.0), 200.0, True)


class TestUltrasonicCast:
    def test_facing_wall(self):
        arena = Arena(Bounds(0, 0, 5, 5), (Segment(3.0, 0.0, 3.0, 5.0),))
        echo = ultrasonic_cast(Pose(1.0, 2.5, 0.0), arena)
        assert echo.distance_cm == pytest.approx(200.0, abs=1e-9)
        assert echo.saturated is False

    def test_empty_arena_hits_boundary(self):
        arena = Arena(Bounds(0, 0, 3, 3))
        echo = ultrasonic_cast(Pose(1.0, 1.5, 0.0), arena)
        assert echo.distance_cm == pytest.approx(200.0, abs=1e-9)

    def test_saturates_in_large_arena(self):
        arena = Arena(Bounds(0, 0, 20, 20))
        echo = ultrasonic_cast(Pose(1.0, 10.0, 0.0), arena)
        assert echo.saturated is True
        assert echo.distance_cm == DEFAULT_MAX_RANGE_CM

    def test_beam_cone_sees_off_axis_wall(self):
        # wall covers only the upper half-plane; the center ray passes under it
        arena = Arena(Bounds(0, 0, 10, 10), (Segment(4.0, 5.2, 4.0, 10.0),))
        pose = Pose(1.0, 5.0, 0.0)
        center_only = ultrasonic_cast(pose, arena)
        with_cone = ultrasonic_cast(pose, arena, beam_half_angle=0.2)
        assert center_only.distance_cm == pytest.approx(900.0, abs=1e-9) or center_only.saturated
        assert with_cone.distance_cm < center_only.distance_cm

    def test_precomputed_segments_agree(self):
        arena = Arena(Bounds(0, 0, 5, 5), (Segment(3.0, 0.0, 3.0, 5.0),))
        pose = Pose(1.0, 2.5, 0.3)
        a = ultrasonic_cast(pose, arena)
        b = ultrasonic_cast(pose, arena, segments=arena.all_segments())
        assert a == b


class TestGeometry:
    def test_bounds_validation(self):
        with pytest.raises(ValueError):
            Bounds(5.0, 0.0, 0.0, 5.0)
        with pytest.raises(ValueError):
            Bounds(0.0, 0.0, 5.0, 0.0)

    def test_bounds_contains_edges(self):
        b = Bounds(0.0, 0.0, 5.0, 5.0)
        assert b.contains(0.0, 0.0)
        assert b.contains(5.0, 5.0)
        assert not b.contains(5.0001, 5.0)

    def test_arena_rejects_obstacle_outside_bounds(self):
        with pytest.raises(ValueError, match="outside bounds"):
            Arena(Bounds(0, 0, 5, 5), (Segment(1.0, 1.0, 6.0, 1.0),))

    def test_all_segments_includes_boundary(self):
        arena = Arena(Bounds(0, 0, 5, 5), (Segment(1, 1, 2, 2),))
        assert len(arena.all_segments()) == 5

    def test_body_validation(self):
        with pytest.raises(ValueError):
            RobotBody(wheel_base=0.0)

    def test_point_segment_distance_perpendicular(self):
        seg = Segment(0.0, 0.0, 4.0, 0.0)
        assert point_segment_distance(2.0, 3.0, seg) == 3.0

    def test_point_segment_distance_beyond_endpoint(self):
        seg = Segment(0.0, 0.0, 4.0, 0.0)
        assert point_segment_distance(7.0, 4.0, seg) == 5.0

    def test_point_segment_distance_degenerate(self):
        seg = Segment(1.0, 1.0, 1.0, 1.0)
        assert point_segment_distance(4.0, 5.0, seg) == 5.0


class TestCollision:
    ARENA = Arena(Bounds(0, 0, 5, 5), (Segment(2.0, 0.0, 2.0, 5.0),))

    def test_tangency_is_free(self):
        assert disc_is_free(2.0 - BODY.collision_radius, 2.5, BODY.collision_radius, self.ARENA)

    def test_overlap_is_blocked(self):
        assert not disc_is_free(2.0 - BODY.collision_radius + 1e-9, 2.5, BODY.collision_radius, self.ARENA)

    def test_bounds_limit_disc(self):
        assert disc_is_free(BODY.collision_radius, 2.5, BODY.collision_radius, self.ARENA)
        assert not disc_is_free(BODY.collision_radius - 1e-9, 2.5, BODY.collision_radius, self.ARENA)

    def test_resolve_accepts_free_candidate(self):
        pose = Pose(1.0, 2.5, 0.0)
        candidate = Pose(1.1, 2.5, 0.0)
        out, collided = resolve_collision(pose, candidate, self.ARENA, BODY)
        assert out == candidate
        assert collided is False

    def test_resolve_blocks_overlap_and_keeps_pose(self):
        pose = Pose(1.85, 2.5, 0.0)
        candidate = Pose(1.95, 2.5, 0.0)
        out, collided = resolve_collision(pose, candidate, self.ARENA, BODY)
        assert out == pose
        assert collided is True
