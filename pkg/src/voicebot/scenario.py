"""Scenario files: the JSON schema binding arena, configs, and command script
into one reproducible simulation run."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .actuators import HBridgeSpec
from .commands import CommandTable, DEFAULT_TABLE, load_table
from .firmware import FirmwareConfig, PinRoles
from .link import MAX_PAYLOAD_BYTES, LinkConfig
from .world import (
    Arena,
    Bounds,
    DEFAULT_MAX_RANGE_CM,
    Pose,
    RobotBody,
    Segment,
    disc_is_free,
    normalize_heading,
)

SCENARIO_VERSION = 1
TICK_SECONDS = 0.01  # one tick is 10 ms of simulated time, globally


class InvalidScenario(ValueError):
    pass


@dataclass(frozen=True)
class SensorConfig:
    max_range_cm: float = DEFAULT_MAX_RANGE_CM
    noise_std_cm: float = 0.0  # seeded Gaussian noise hook; 0 disables
    beam_half_angle: float = 0.0  # radians; 0 keeps the single forward ray

    def __post_init__(self) -> None:
        if self.max_range_cm <= 0:
            raise InvalidScenario("sensor.max_range_cm must be positive")
        if self.noise_std_cm < 0:
            raise InvalidScenario("sensor.noise_std_cm must be >= 0")
        if self.beam_half_angle < 0:
            raise InvalidScenario("sensor.beam_half_angle must be >= 0")


@dataclass(frozen=True)
class Scenario:
    name: str = "scenario"
    seed: int = 0
    duration: int = 100  # ticks
    snapshot_every: int = 10  # batch-mode snapshot cadence
    arena: Arena = field(default_factory=lambda: Arena(Bounds(0.0, 0.0, 5.0, 5.0)))
    start: Pose = field(default_factory=lambda: Pose(2.5, 2.5, 0.0))
    body: RobotBody = field(default_factory=RobotBody)
    bridge: HBridgeSpec = field(default_factory=HBridgeSpec)
    link: LinkConfig = field(default_factory=LinkConfig)
    firmware: FirmwareConfig = field(default_factory=FirmwareConfig)
    pins: PinRoles = field(default_factory=PinRoles)
    sensor: SensorConfig = field(default_factory=SensorConfig)
    table: CommandTable = DEFAULT_TABLE
    script: tuple[tuple[int, str], ...] = ()

    def __post_init__(self) -> None:
        if self.duration < 0:
            raise InvalidScenario("duration: must be >= 0")
        if self.snapshot_every < 1:
            raise InvalidScenario("snapshot_every: must be >= 1")
        previous = -1
        for i, (tick, text) in enumerate(self.script):
            if tick < 0:
                raise InvalidScenario(f"script[{i}].tick: must be >= 0")
            if tick < previous:
                raise InvalidScenario(f"script[{i}].tick: ticks must be sorted ascending")
            previous = tick
            payload = text.encode("utf-8")
            if len(payload) > MAX_PAYLOAD_BYTES:
                raise InvalidScenario(f"script[{i}].text: exceeds {MAX_PAYLOAD_BYTES} bytes")
            if "\n" in text:
                raise InvalidScenario(f"script[{i}].text: must not contain newlines")
        if self.script and self.duration < self.script[-1][0]:
            raise InvalidScenario("duration: must cover the last scripted tick")
        if not self.arena.bounds.contains(self.start.x, self.start.y):
            raise InvalidScenario("robot.start: outside arena bounds")
        if not disc_is_free(self.start.x, self.start.y, self.body.collision_radius, self.arena):
            raise InvalidScenario("robot.start: collision disc overlaps arena geometry")


def _expect(data: dict, key: str, kind: type, where: str, default=None):
    if key not in data:
        if default is not None:
            return default
        raise InvalidScenario(f"{where}.{key}: missing required field")
    value = data[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or (kind is not bool and isinstance(value, bool)):
        raise InvalidScenario(f"{where}.{key}: expected {kind.__name__}")
    return value


def _point(value, where: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise InvalidScenario(f"{where}: expected [x, y]")
    try:
        return float(value[0]), float(value[1])
    except (TypeError, ValueError):
        raise InvalidScenario(f"{where}: coordinates must be numbers") from None


def _arena_from(data: dict) -> Arena:
    bounds_raw = data.get("bounds")
    if not isinstance(bounds_raw, (list, tuple)) or len(bounds_raw) != 4:
        raise InvalidScenario("arena.bounds: expected [xmin, ymin, xmax, ymax]")
    try:
        bounds = Bounds(*(float(v) for v in bounds_raw))
    except ValueError as exc:
        raise InvalidScenario(f"arena.bounds: {exc}") from exc
    obstacles = []
    for i, seg in enumerate(data.get("obstacles", [])):
        if not isinstance(seg, (list, tuple)) or len(seg) != 2:
            raise InvalidScenario(f"arena.obstacles[{i}]: expected [[ax, ay], [bx, by]]")
        (ax, ay) = _point(seg[0], f"arena.obstacles[{i}][0]")
        (bx, by) = _point(seg[1], f"arena.obstacles[{i}][1]")
        obstacles.append(Segment(ax, ay, bx, by))
    controller = _point(data.get("controller", [bounds.xmin, bounds.ymin]), "arena.controller")
    try:
        return Arena(bounds, tuple(obstacles), controller)
    except ValueError as exc:
        raise InvalidScenario(f"arena: {exc}") from exc


def scenario_from_dict(data: dict, base_dir: Path | None = None) -> Scenario:
    """Build and validate a Scenario; error messages name the offending field."""
    if not isinstance(data, dict):
        raise InvalidScenario("scenario: expected a JSON object")
    version = data.get("v", SCENARIO_VERSION)
    if version != SCENARIO_VERSION:
        raise InvalidScenario(f"v: unsupported scenario version {version!r}")

    arena = _arena_from(_expect(data, "arena", dict, "scenario"))

    robot = data.get("robot", {})
    if not isinstance(robot, dict):
        raise InvalidScenario("robot: expected an object")
    bounds = arena.bounds
    center = [(bounds.xmin + bounds.xmax) / 2.0, (bounds.ymin + bounds.ymax) / 2.0, 0.0]
    start_raw = robot.get("start", center)
    if not isinstance(start_raw, (list, tuple)) or len(start_raw) != 3:
        raise InvalidScenario("robot.start: expected [x, y, heading]")
    start = Pose(float(start_raw[0]), float(start_raw[1]), normalize_heading(float(start_raw[2])))
    try:
        body = RobotBody(
            wheel_base=_expect(robot, "wheel_base", float, "robot", RobotBody.wheel_base),
            wheel_radius=_expect(robot, "wheel_radius", float, "robot", RobotBody.wheel_radius),
            collision_radius=_expect(robot, "collision_radius", float, "robot", RobotBody.collision_radius),
        )
        bridge = HBridgeSpec(
            max_wheel_speed=_expect(robot, "max_wheel_speed", float, "robot", HBridgeSpec.max_wheel_speed)
        )
    except ValueError as exc:
        raise InvalidScenario(f"robot: {exc}") from exc

    link_raw = data.get("link", {})
    if not isinstance(link_raw, dict):
        raise InvalidScenario("link: expected an object")
    try:
        link = LinkConfig(
            max_range=_expect(link_raw, "max_range", float, "link", LinkConfig.max_range),
            latency=_expect(link_raw, "latency", int, "link", LinkConfig.latency),
            drop_probability=_expect(
                link_raw, "drop_probability", float, "link", LinkConfig.drop_probability
            ),
        )
    except ValueError as exc:
        raise InvalidScenario(f"link: {exc}") from exc

    fw_raw = data.get("firmware", {})
    if not isinstance(fw_raw, dict):
        raise InvalidScenario("firmware: expected an object")
    pins_raw = fw_raw.get("pins", {})
    if not isinstance(pins_raw, dict):
        raise InvalidScenario("firmware.pins: expected an object")
    try:
        defaults = PinRoles()
        pins = PinRoles(**{role: int(pins_raw.get(role, pin)) for role, pin in defaults.as_dict().items()})
    except (TypeError, ValueError) as exc:
        raise InvalidScenario(f"firmware.pins: {exc}") from exc
    try:
        fw = FirmwareConfig(
            safety_distance=_expect(fw_raw, "safety_distance", float, "firmware", FirmwareConfig.safety_distance),
            trigger_pin=pins.trigger,
            echo_pin=pins.echo,
            backward_duration=_expect(
                fw_raw, "backward_duration", int, "firmware", FirmwareConfig.backward_duration
            ),
            turn_duration=_expect(fw_raw, "turn_duration", int, "firmware", FirmwareConfig.turn_duration),
            fuzzy_enabled=_expect(fw_raw, "fuzzy_enabled", bool, "firmware", FirmwareConfig.fuzzy_enabled),
            fuzzy_threshold=_expect(
                fw_raw, "fuzzy_threshold", float, "firmware", FirmwareConfig.fuzzy_threshold
            ),
            safety_one_shot=_expect(
                fw_raw, "safety_one_shot", bool, "firmware", FirmwareConfig.safety_one_shot
            ),
        )
    except ValueError as exc:
        raise InvalidScenario(f"firmware: {exc}") from exc

    sensor_raw = data.get("sensor", {})
    if not isinstance(sensor_raw, dict):
        raise InvalidScenario("sensor: expected an object")
    sensor = SensorConfig(
        max_range_cm=_expect(sensor_raw, "max_range_cm", float, "sensor", DEFAULT_MAX_RANGE_CM),
        noise_std_cm=_expect(sensor_raw, "noise_std_cm", float, "sensor", 0.0),
        beam_half_angle=_expect(sensor_raw, "beam_half_angle", float, "sensor", 0.0),
    )

    table = DEFAULT_TABLE
    table_path = data.get("command_table")
    if table_path is not None:
        if not isinstance(table_path, str):
            raise InvalidScenario("command_table: expected a file path string")
        resolved = Path(table_path)
        if not resolved.is_absolute() and base_dir is not None:
            resolved = base_dir / resolved
        try:
            table = load_table(resolved)
        except (OSError, ValueError) as exc:
            raise InvalidScenario(f"command_table: {exc}") from exc

    script_raw = data.get("script", [])
    if not isinstance(script_raw, list):
        raise InvalidScenario("script: expected a list of [tick, text] pairs")
    script: list[tuple[int, str]] = []
    for i, item in enumerate(script_raw):
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise InvalidScenario(f"script[{i}]: expected [tick, text]")
        tick, text = item
        if isinstance(tick, bool) or not isinstance(tick, int):
            raise InvalidScenario(f"script[{i}].tick: expected an integer")
        if not isinstance(text, str):
            raise InvalidScenario(f"script[{i}].text: expected a string")
        script.append((tick, text))

    return Scenario(
        name=_expect(data, "name", str, "scenario", "scenario"),
        seed=_expect(data, "seed", int, "scenario", 0),
        duration=_expect(data, "duration", int, "scenario"),
        snapshot_every=_expect(data, "snapshot_every", int, "scenario", 10),
        arena=arena,
        start=start,
        body=body,
        bridge=bridge,
        link=link,
        firmware=fw,
        pins=pins,
        sensor=sensor,
        table=table,
        script=tuple(script),
    )


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InvalidScenario(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidScenario(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from exc
    scenario = scenario_from_dict(data, base_dir=path.parent)
    if scenario.name == "scenario":
        scenario = replace(scenario, name=path.stem)
    return scenario
