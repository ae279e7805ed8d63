"""2D arena: differential-drive kinematics, segment obstacles, and the
ray-cast ultrasonic range sensor."""
from __future__ import annotations

from dataclasses import dataclass
from math import cos, inf, isfinite, pi, sin, tau

SPEED_OF_SOUND_M_S = 343.0  # dry air at 20 degC
DEFAULT_MAX_RANGE_CM = 400.0

_OMEGA_EPS = 1e-9
_PARALLEL_EPS = 1e-15


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    heading: float  # radians, normalized to (-pi, pi]


@dataclass(frozen=True)
class Segment:
    ax: float
    ay: float
    bx: float
    by: float


@dataclass(frozen=True)
class Bounds:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self) -> None:
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError("bounds must have positive extent")

    def contains(self, x: float, y: float) -> bool:
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax

    def segments(self) -> tuple[Segment, ...]:
        return (
            Segment(self.xmin, self.ymin, self.xmax, self.ymin),
            Segment(self.xmax, self.ymin, self.xmax, self.ymax),
            Segment(self.xmax, self.ymax, self.xmin, self.ymax),
            Segment(self.xmin, self.ymax, self.xmin, self.ymin),
        )


@dataclass(frozen=True)
class Arena:
    bounds: Bounds
    obstacles: tuple[Segment, ...] = ()
    controller: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        for i, seg in enumerate(self.obstacles):
            for x, y in ((seg.ax, seg.ay), (seg.bx, seg.by)):
                if not self.bounds.contains(x, y):
                    raise ValueError(f"obstacles[{i}]: endpoint ({x}, {y}) outside bounds")

    def all_segments(self) -> tuple[Segment, ...]:
        return self.obstacles + self.bounds.segments()


@dataclass(frozen=True)
class RobotBody:
    wheel_base: float = 0.12  # m
    wheel_radius: float = 0.03  # m
    collision_radius: float = 0.09  # m

    def __post_init__(self) -> None:
        if self.wheel_base <= 0 or self.wheel_radius <= 0 or self.collision_radius <= 0:
            raise ValueError("robot body dimensions must be positive")


@dataclass(frozen=True)
class EchoMeasurement:
    duration_us: float
    distance_cm: float
    saturated: bool


def normalize_heading(heading: float) -> float:
    """Wrap an angle into (-pi, pi], leaving in-range values bit-identical."""
    if -pi < heading <= pi:
        return heading
    return pi - (pi - heading) % tau


def step_kinematics(pose: Pose, v_left: float, v_right: float, body: RobotBody, dt: float) -> Pose:
    """Advance a differential-drive pose by exact arc integration.

    Wheel speeds are angular (rad/s); straight-line motion is used when the
    turn rate is negligible.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    v = body.wheel_radius * (v_left + v_right) / 2
    omega = body.wheel_radius * (v_right - v_left) / body.wheel_base
    if abs(omega) > _OMEGA_EPS:
        radius = v / omega
        heading = pose.heading + omega * dt
        x = pose.x + radius * (sin(heading) - sin(pose.heading))
        y = pose.y - radius * (cos(heading) - cos(pose.heading))
        return Pose(x, y, normalize_heading(heading))
    x = pose.x + v * cos(pose.heading) * dt
    y = pose.y + v * sin(pose.heading) * dt
    return Pose(x, y, pose.heading)


def ray_hit_distance(x: float, y: float, dx: float, dy: float, segments: tuple[Segment, ...]) -> float:
    """Distance along the unit ray (dx, dy) to the nearest segment, inf if none."""
    best = inf
    for seg in segments:
        ex = seg.bx - seg.ax
        ey = seg.by - seg.ay
        denom = dx * ey - dy * ex
        if abs(denom) < _PARALLEL_EPS:
            continue
        ox = seg.ax - x
        oy = seg.ay - y
        t = (ox * ey - oy * ex) / denom
        if t < 0.0 or t >= best:
            continue
        s = (ox * dy - oy * dx) / denom
        if 0.0 <= s <= 1.0:
            best = t
    return best


def duration_from_distance_cm(distance_cm: float) -> float:
    """One-way distance in cm to ultrasonic round-trip duration in microseconds."""
    return 2.0 * (distance_cm / 100.0) / SPEED_OF_SOUND_M_S * 1e6


def distance_cm_from_duration(duration_us: float) -> float:
    """Ultrasonic round-trip duration in microseconds to one-way distance in cm."""
    return duration_us * 1e-6 * SPEED_OF_SOUND_M_S / 2.0 * 100.0


def echo_from_distance(distance_cm: float, max_range_cm: float = DEFAULT_MAX_RANGE_CM) -> EchoMeasurement:
    """Build a measurement from a raw hit distance, clamping past max range."""
    if not isfinite(distance_cm) or distance_cm > max_range_cm:
        return EchoMeasurement(duration_from_distance_cm(max_range_cm), max_range_cm, True)
    distance_cm = max(distance_cm, 0.0)
    return EchoMeasurement(duration_from_distance_cm(distance_cm), distance_cm, False)


def ultrasonic_cast(
    pose: Pose,
    arena: Arena,
    max_range_cm: float = DEFAULT_MAX_RANGE_CM,
    beam_half_angle: float = 0.0,
    segments: tuple[Segment, ...] | None = None,
) -> EchoMeasurement:
    """Cast the sensor ray along the heading and report the echo.

    With a nonzero beam half-angle the cone is sampled at its center and both
    edges and the nearest return wins. `segments` may pass a precomputed
    obstacle+boundary tuple to avoid rebuilding it per call.
    """
    if segments is None:
        segments = arena.all_segments()
    if beam_half_angle > 0.0:
        angles = (-beam_half_angle, 0.0, beam_half_angle)
    else:
        angles = (0.0,)
    best = inf
    for offset in angles:
        a = pose.heading + offset
        d = ray_hit_distance(pose.x, pose.y, cos(a), sin(a), segments)
        if d < best:
            best = d
    return echo_from_distance(best * 100.0, max_range_cm)


def point_segment_distance(px: float, py: float, seg: Segment) -> float:
    ex = seg.bx - seg.ax
    ey = seg.by - seg.ay
    wx = px - seg.ax
    wy = py - seg.ay
    length2 = ex * ex + ey * ey
    if length2 <= 0.0:
        return ((wx * wx) + (wy * wy)) ** 0.5
    t = (wx * ex + wy * ey) / length2
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    dx = wx - t * ex
    dy = wy - t * ey
    return (dx * dx + dy * dy) ** 0.5


def disc_is_free(x: float, y: float, radius: float, arena: Arena) -> bool:
    """True when a disc lies inside bounds and clear of all obstacles.

    Tangency counts as free: only strict overlap blocks.
    """
    b = arena.bounds
    if x - radius < b.xmin or x + radius > b.xmax or y - radius < b.ymin or y + radius > b.ymax:
        return False
    for seg in arena.obstacles:
        if point_segment_distance(x, y, seg) < radius:
            return False
    return True


def resolve_collision(pose: Pose, candidate: Pose, arena: Arena, body: RobotBody) -> tuple[Pose, bool]:
    """Accept the candidate pose unless its collision disc overlaps geometry.

    Blocked motion keeps the previous pose (no sliding) and flags a collision.
    """
    if disc_is_free(candidate.x, candidate.y, body.collision_radius, arena):
        return candidate, False
    return pose, True
