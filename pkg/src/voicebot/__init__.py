"""Deterministic simulator and teleoperation stack for a voice-commanded robot.

The package models the full pipeline: a lossy serial command link, a firmware
control loop with fuzzy command matching and ultrasonic obstacle avoidance,
H-bridge and relay actuation, differential-drive kinematics in a 2D arena, and
trace emission with exact replay. A websocket service streams live state for
browser teleoperation.
"""
from .actuators import HBridgeSpec, RelayKind, RelayLoad, bridge_output, relay_output
from .commands import (
    Command,
    CommandTable,
    DEFAULT_FUZZY_THRESHOLD,
    DEFAULT_TABLE,
    MatchMethod,
    MatchResult,
    Utterance,
    load_table,
    match_exact,
    match_fuzzy,
    normalize,
    similarity,
)
from .engine import Simulation, replay, run_scenario
from .firmware import (
    AvoidancePhase,
    FirmwareConfig,
    FirmwareState,
    Motion,
    PinBank,
    PinRoles,
    dispatch,
)
from .link import Frame, LinkConfig, SendOutcome, SendReceipt, SerialLink
from .report import render_report
from .scenario import InvalidScenario, Scenario, SensorConfig, TICK_SECONDS, load_scenario, scenario_from_dict
from .service import PortUnavailable, TeleopServer, serve_scenario
from .trace import CorruptTrace, EventKind, Trace, TraceEvent
from .world import (
    Arena,
    Bounds,
    EchoMeasurement,
    Pose,
    RobotBody,
    Segment,
    distance_cm_from_duration,
    duration_from_distance_cm,
    echo_from_distance,
    normalize_heading,
    ray_hit_distance,
    step_kinematics,
    ultrasonic_cast,
)

__version__ = "0.1.0"

__all__ = [
    "Arena",
    "AvoidancePhase",
    "Bounds",
    "Command",
    "CommandTable",
    "CorruptTrace",
    "DEFAULT_FUZZY_THRESHOLD",
    "DEFAULT_TABLE",
    "EchoMeasurement",
    "EventKind",
    "Frame",
    "FirmwareConfig",
    "FirmwareState",
    "HBridgeSpec",
    "InvalidScenario",
    "LinkConfig",
    "MatchMethod",
    "MatchResult",
    "Motion",
    "PinBank",
    "PinRoles",
    "PortUnavailable",
    "Pose",
    "RelayKind",
    "RelayLoad",
    "RobotBody",
    "Scenario",
    "Segment",
    "SendOutcome",
    "SendReceipt",
    "SensorConfig",
    "SerialLink",
    "Simulation",
    "TICK_SECONDS",
    "TeleopServer",
    "Trace",
    "TraceEvent",
    "Utterance",
    "bridge_output",
    "dispatch",
    "distance_cm_from_duration",
    "duration_from_distance_cm",
    "echo_from_distance",
    "load_scenario",
    "load_table",
    "match_exact",
    "match_fuzzy",
    "normalize",
    "normalize_heading",
    "ray_hit_distance",
    "relay_output",
    "render_report",
    "replay",
    "run_scenario",
    "scenario_from_dict",
    "serve_scenario",
    "similarity",
    "step_kinematics",
    "ultrasonic_cast",
    "__version__",
]
