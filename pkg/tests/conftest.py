"""Shared fixtures and builders for the test suite."""
from __future__ import annotations

import random
from pathlib import Path

import pytest

from voicebot.engine import Simulation, make_header
from voicebot.firmware import FirmwareConfig, FirmwareState, PinRoles
from voicebot.link import LinkConfig
from voicebot.scenario import InvalidScenario, Scenario, SensorConfig
from voicebot.actuators import HBridgeSpec
from voicebot.trace import Trace
from voicebot.world import Arena, Bounds, Pose, RobotBody, Segment

REPO_ROOT = Path(__file__).resolve().parent.parent
SCENARIO_DIR = REPO_ROOT / "scenarios"
DATA_DIR = Path(__file__).resolve().parent / "data"


def run_with_state(scenario: Scenario) -> tuple[Trace, FirmwareState]:
    """run_scenario, but also returns the live final firmware state."""
    sim = Simulation(scenario)
    header = make_header(scenario, sim.state)
    events = []
    cursor = 0
    script = scenario.script
    for t in range(scenario.duration):
        while cursor < len(script) and script[cursor][0] == t:
            sim.inject(script[cursor][1])
            cursor += 1
        events.extend(sim.step())
    return Trace(header, events), sim.state


_SCRIPT_POOL = (
    "forward",
    "backward",
    "left",
    "right",
    "stop",
    "light on",
    "light off",
    "horn please",
    "horn stop",
    "go forward",
    "Horn, please!",
    "please light on",
    "stop stop",
    "xylophone",
    "",
    "!!!",
    "lite on",
)


def random_scenario(rng: random.Random) -> Scenario:
    """Draw a random valid scenario; retries draws that fail validation."""
    for _ in range(60):
        w = rng.uniform(3.0, 8.0)
        h = rng.uniform(3.0, 8.0)
        bounds = Bounds(0.0, 0.0, w, h)
        obstacles = []
        for _ in range(rng.randrange(4)):
            x = rng.uniform(0.5, w - 0.5)
            y = rng.uniform(0.5, h - 0.5)
            if rng.random() < 0.5:
                length = rng.uniform(0.5, min(2.5, h - y - 0.1))
                obstacles.append(Segment(x, y, x, y + length))
            else:
                length = rng.uniform(0.5, min(2.5, w - x - 0.1))
                obstacles.append(Segment(x, y, x + length, y))
        controller = (rng.uniform(0.2, w - 0.2), rng.uniform(0.2, h - 0.2))
        start = Pose(
            rng.uniform(0.7, w - 0.7),
            rng.uniform(0.7, h - 0.7),
            rng.uniform(-3.1, 3.1),
        )
        duration = rng.randrange(80, 250)
        ticks = sorted(rng.randrange(duration) for _ in range(rng.randrange(13)))
        script = tuple((t, rng.choice(_SCRIPT_POOL)) for t in ticks)
        try:
            return Scenario(
                name="randomized",
                seed=rng.randrange(2**32),
                duration=duration,
                snapshot_every=rng.choice((1, 5, 10, 25)),
                arena=Arena(bounds, tuple(obstacles), controller),
                start=start,
                body=RobotBody(),
                bridge=HBridgeSpec(max_wheel_speed=rng.uniform(4.0, 20.0)),
                link=LinkConfig(
                    max_range=rng.choice((50.0, 50.0, 2.0)),
                    latency=rng.randrange(4),
                    drop_probability=rng.choice((0.0, 0.0, 0.1, 0.5, 1.0)),
                ),
                firmware=FirmwareConfig(
                    safety_distance=rng.uniform(5.0, 20.0),
                    backward_duration=rng.randrange(3, 30),
                    turn_duration=rng.randrange(3, 30),
                    fuzzy_enabled=rng.random() < 0.5,
                    safety_one_shot=rng.random() < 0.2,
                ),
                pins=PinRoles(),
                sensor=SensorConfig(
                    noise_std_cm=rng.choice((0.0, 0.0, 0.5)),
                    beam_half_angle=rng.choice((0.0, 0.0, 0.1)),
                ),
                script=script,
            )
        except InvalidScenario:
            continue
    raise AssertionError("could not draw a valid random scenario")


@pytest.fixture
def wall_scenario() -> Scenario:
    """A wall straight ahead with a scripted forward command."""
    return Scenario(
        name="wall_test",
        seed=7,
        duration=260,
        snapshot_every=50,
        arena=Arena(
            Bounds(0.0, 0.0, 5.0, 5.0),
            (Segment(1.5, 0.5, 1.5, 4.5),),
            (0.5, 2.5),
        ),
        start=Pose(1.0, 2.5, 0.0),
        firmware=FirmwareConfig(backward_duration=20, turn_duration=20),
        script=((0, "forward"),),
    )
