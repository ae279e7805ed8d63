"""Deterministic simulation loop: wires the link, firmware, actuators, and
arena together tick by tick, and folds traces back into firmware state."""
from __future__ import annotations

import random
from dataclasses import replace
from math import cos, hypot, sin

from . import firmware as fw
from .actuators import bridge_output
from .commands import Command
from .link import (
    MAX_PAYLOAD_BYTES,
    SendOutcome,
    SerialLink,
    TERMINATOR,
)
from .scenario import Scenario, TICK_SECONDS
from .trace import CorruptTrace, EventKind, Trace, TraceEvent
from .world import echo_from_distance, ray_hit_distance, resolve_collision, step_kinematics

# Stable per-subsystem seed derivation from the scenario master seed.
_LINK_SEED_SALT = 0x6C696E6B  # "link"
_NOISE_SEED_SALT = 0x6E6F6973  # "nois"

_DROP_REASON = {
    SendOutcome.DROPPED_OUT_OF_RANGE: "out_of_range",
    SendOutcome.DROPPED_LOSS: "loss",
}


def _arena_summary(scenario: Scenario) -> dict:
    bounds = scenario.arena.bounds
    return {
        "bounds": [bounds.xmin, bounds.ymin, bounds.xmax, bounds.ymax],
        "obstacles": [[[s.ax, s.ay], [s.bx, s.by]] for s in scenario.arena.obstacles],
        "controller": list(scenario.arena.controller),
    }


def _state_summary(state: fw.FirmwareState) -> dict:
    return {
        "motion": state.motion.value,
        "light": state.light,
        "horn": state.horn,
        "avoidance": state.avoidance.value,
        "avoidance_remaining": state.avoidance_remaining,
        "last_distance": state.last_distance,
        "safety_fired": state.safety_fired,
    }


class Simulation:
    """Owns all mutable run state. Step it from exactly one thread; external
    senders must marshal utterances in through `inject`."""

    def __init__(self, scenario: Scenario, snapshot_every: int | None = None):
        self.scenario = scenario
        self.snapshot_every = snapshot_every if snapshot_every is not None else scenario.snapshot_every
        self.link = SerialLink(replace(scenario.link, seed=scenario.seed ^ _LINK_SEED_SALT))
        self.pins = fw.PinBank(scenario.pins)
        self.pose = scenario.start
        self.tick = 0
        self.collided = False
        self._segments = scenario.arena.all_segments()
        self._noise_rng = (
            random.Random(scenario.seed ^ _NOISE_SEED_SALT) if scenario.sensor.noise_std_cm > 0 else None
        )
        self._inbox: list[tuple[str, str]] = []
        # Sensor warm-up: the control loop starts with a real reading.
        self.state = fw.FirmwareState(last_distance=self._measure().distance_cm)

    def _measure(self):
        pose = self.pose
        sensor = self.scenario.sensor
        if sensor.beam_half_angle > 0.0:
            angles = (-sensor.beam_half_angle, 0.0, sensor.beam_half_angle)
        else:
            angles = (0.0,)
        best = float("inf")
        for offset in angles:
            a = pose.heading + offset
            d = ray_hit_distance(pose.x, pose.y, cos(a), sin(a), self._segments)
            if d < best:
                best = d
        distance_cm = best * 100.0
        if self._noise_rng is not None:
            distance_cm = max(0.0, distance_cm + self._noise_rng.gauss(0.0, sensor.noise_std_cm))
        return echo_from_distance(distance_cm, sensor.max_range_cm)

    def inject(self, text: str, client_id: str = "script") -> None:
        """Queue an utterance for transmission on the next tick."""
        payload = text.encode("utf-8")
        if len(payload) > MAX_PAYLOAD_BYTES:
            raise ValueError(f"utterance exceeds {MAX_PAYLOAD_BYTES} bytes")
        if TERMINATOR in payload:
            raise ValueError("utterance must not contain newlines")
        self._inbox.append((text, client_id))

    def separation(self) -> float:
        cx, cy = self.scenario.arena.controller
        return hypot(self.pose.x - cx, self.pose.y - cy)

    def snapshot_payload(self) -> dict:
        pose = self.pose
        state = self.state
        return {
            "tick": self.tick - 1,
            "pose": {"x": pose.x, "y": pose.y, "heading": pose.heading},
            "motion": state.motion.value,
            "light": state.light,
            "horn": state.horn,
            "avoidance": state.avoidance.value,
            "avoidance_remaining": state.avoidance_remaining,
            "last_distance": state.last_distance,
            "separation": self.separation(),
        }

    def step(self) -> list[TraceEvent]:
        """Advance one tick and return its events, in processing order."""
        now = self.tick
        events: list[TraceEvent] = []

        # controller-side sends happen first so latency-0 links could still
        # deliver within the same tick
        self.link.separation = self.separation()
        if self._inbox:
            for text, client_id in self._inbox:
                receipt = self.link.send(text.encode("utf-8"), now, client_id)
                if receipt.outcome is SendOutcome.DELIVERED:
                    events.append(
                        TraceEvent(
                            now,
                            EventKind.FRAME_SENT,
                            {"text": text, "client_id": client_id, "deliver_at": receipt.deliver_at},
                        )
                    )
                else:
                    events.append(
                        TraceEvent(
                            now,
                            EventKind.FRAME_DROPPED,
                            {"text": text, "client_id": client_id, "reason": _DROP_REASON[receipt.outcome]},
                        )
                    )
            self._inbox.clear()

        self.state, fw_events = fw.tick(
            self.state,
            self.scenario.firmware,
            self.scenario.table,
            self.link,
            self._measure,
            self.pins,
            now,
        )
        events.extend(fw_events)

        # actuators and physics
        pins = self.pins
        roles = pins.roles
        bridge = self.scenario.bridge
        v_left = bridge_output(
            pins.digital[roles.in1], pins.digital[roles.in2], pins.pwm[roles.enable_left], bridge
        )
        v_right = bridge_output(
            pins.digital[roles.in3], pins.digital[roles.in4], pins.pwm[roles.enable_right], bridge
        )
        self.collided = False
        if v_left != 0.0 or v_right != 0.0:
            candidate = step_kinematics(self.pose, v_left, v_right, self.scenario.body, TICK_SECONDS)
            self.pose, self.collided = resolve_collision(
                self.pose, candidate, self.scenario.arena, self.scenario.body
            )
            if self.collided:
                events.append(
                    TraceEvent(now, EventKind.COLLISION, {"x": self.pose.x, "y": self.pose.y})
                )

        self.tick = now + 1
        if now % self.snapshot_every == 0:
            events.append(TraceEvent(now, EventKind.SNAPSHOT, self.snapshot_payload()))
        return events


def make_header(scenario: Scenario, initial: fw.FirmwareState) -> dict:
    return {
        "name": scenario.name,
        "seed": scenario.seed,
        "duration": scenario.duration,
        "snapshot_every": scenario.snapshot_every,
        "tick_seconds": TICK_SECONDS,
        "safety_distance": scenario.firmware.safety_distance,
        "arena": _arena_summary(scenario),
        "initial": _state_summary(initial),
    }


def run_scenario(scenario: Scenario) -> Trace:
    """Execute the scripted run; output is bit-identical for identical input."""
    sim = Simulation(scenario)
    header = make_header(scenario, sim.state)
    events: list[TraceEvent] = []
    script = sim.scenario.script
    cursor = 0
    for t in range(scenario.duration):
        while cursor < len(script) and script[cursor][0] == t:
            sim.inject(script[cursor][1])
            cursor += 1
        events.extend(sim.step())
    return Trace(header, events)


_PHASE_MOTION = {phase.value: motion for phase, motion in fw.MOTION_FOR_PHASE.items()}


def replay(trace: Trace) -> fw.FirmwareState:
    """Fold a trace back into the final firmware state.

    Matched commands re-run through dispatch; avoidance and echo events pin
    the sensor-driven fields the command stream cannot reconstruct.
    """
    initial = trace.header.get("initial")
    if not isinstance(initial, dict):
        raise CorruptTrace("header is missing the initial firmware state")
    try:
        state = fw.FirmwareState(
            motion=fw.Motion(initial["motion"]),
            light=bool(initial["light"]),
            horn=bool(initial["horn"]),
            avoidance=fw.AvoidancePhase(initial["avoidance"]),
            avoidance_remaining=int(initial["avoidance_remaining"]),
            last_distance=float(initial["last_distance"]),
            safety_fired=bool(initial["safety_fired"]),
        )
    except (KeyError, ValueError) as exc:
        raise CorruptTrace(f"malformed initial state ({exc})") from exc

    for event in trace.events:
        payload = event.payload
        try:
            if event.kind is EventKind.COMMAND_MATCHED:
                state = fw.dispatch(state, Command(payload["command"]))
            elif event.kind is EventKind.AVOIDANCE_PHASE:
                phase = fw.AvoidancePhase(payload["phase"])
                state = replace(
                    state,
                    avoidance=phase,
                    avoidance_remaining=int(payload["remaining"]),
                    motion=_PHASE_MOTION[phase.value],
                    safety_fired=state.safety_fired or phase is fw.AvoidancePhase.HALTING,
                )
            elif event.kind is EventKind.ECHO_MEASURED:
                state = replace(state, last_distance=float(payload["distance_cm"]))
        except (KeyError, ValueError) as exc:
            raise CorruptTrace(f"tick {event.tick}: malformed {event.kind.value} payload ({exc})") from exc
    return state
