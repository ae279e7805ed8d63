"""The control-loop state machine: serial polling, command dispatch, the
ultrasonic safety routine, and actuator pin writes."""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable

from .commands import (
    Command,
    CommandTable,
    MatchMethod,
    MatchResult,
    Utterance,
    match_exact,
    match_fuzzy,
    normalize,
)
from .link import SerialLink
from .trace import EventKind, TraceEvent
from .world import DEFAULT_MAX_RANGE_CM, EchoMeasurement

PIN_COUNT = 14  # digital pins available on the controller board


class Motion(Enum):
    IDLE = "Idle"
    FORWARD = "Forward"
    BACKWARD = "Backward"
    LEFT = "Left"
    RIGHT = "Right"


class AvoidancePhase(Enum):
    INACTIVE = "Inactive"
    HALTING = "Halting"
    BACKING = "Backing"
    TURNING = "Turning"


_MOTION_FOR_COMMAND = {
    Command.FORWARD: Motion.FORWARD,
    Command.BACKWARD: Motion.BACKWARD,
    Command.LEFT: Motion.LEFT,
    Command.RIGHT: Motion.RIGHT,
    Command.STOP: Motion.IDLE,
}

# Motion implied by each avoidance phase; the maneuver owns the drivetrain.
MOTION_FOR_PHASE = {
    AvoidancePhase.HALTING: Motion.IDLE,
    AvoidancePhase.BACKING: Motion.BACKWARD,
    AvoidancePhase.TURNING: Motion.LEFT,
    AvoidancePhase.INACTIVE: Motion.IDLE,
}


@dataclass(frozen=True)
class FirmwareConfig:
    safety_distance: float = 10.0  # cm
    trigger_pin: int = 7
    echo_pin: int = 6
    backward_duration: int = 50  # ticks
    turn_duration: int = 50  # ticks
    fuzzy_enabled: bool = False
    fuzzy_threshold: float = 0.75
    # When set, the safety check disarms permanently after its first firing.
    safety_one_shot: bool = False

    def __post_init__(self) -> None:
        if self.safety_distance <= 0:
            raise ValueError("safety_distance must be positive")
        if self.backward_duration <= 0 or self.turn_duration <= 0:
            raise ValueError("avoidance durations must be positive")
        if self.trigger_pin == self.echo_pin:
            raise ValueError("trigger_pin and echo_pin must differ")
        if not 0.0 <= self.fuzzy_threshold <= 1.0:
            raise ValueError("fuzzy_threshold must be in [0, 1]")


@dataclass(frozen=True)
class FirmwareState:
    motion: Motion = Motion.IDLE
    light: bool = False
    horn: bool = False
    avoidance: AvoidancePhase = AvoidancePhase.INACTIVE
    avoidance_remaining: int = 0
    last_distance: float = DEFAULT_MAX_RANGE_CM  # cm
    safety_fired: bool = False


@dataclass(frozen=True)
class PinRoles:
    """Named pin assignment; defaults follow the trigger=7/echo=6 wiring with
    the remaining roles on documented constants."""

    in1: int = 2
    in2: int = 3
    in3: int = 4
    in4: int = 5
    enable_left: int = 9
    enable_right: int = 10
    light_relay: int = 12
    horn_relay: int = 13
    trigger: int = 7
    echo: int = 6

    def __post_init__(self) -> None:
        pins = self.as_dict()
        if len(set(pins.values())) != len(pins):
            raise ValueError("pin roles must map to distinct pins")
        for role, pin in pins.items():
            if not 0 <= pin < PIN_COUNT:
                raise ValueError(f"{role}: pin {pin} outside 0..{PIN_COUNT - 1}")

    def as_dict(self) -> dict[str, int]:
        return {
            "in1": self.in1,
            "in2": self.in2,
            "in3": self.in3,
            "in4": self.in4,
            "enable_left": self.enable_left,
            "enable_right": self.enable_right,
            "light_relay": self.light_relay,
            "horn_relay": self.horn_relay,
            "trigger": self.trigger,
            "echo": self.echo,
        }


class PinBank:
    """Digital levels and PWM duties keyed by pin number."""

    def __init__(self, roles: PinRoles | None = None):
        self.roles = roles or PinRoles()
        self.digital: dict[int, bool] = {
            pin: False
            for role, pin in self.roles.as_dict().items()
            if role not in ("enable_left", "enable_right")
        }
        self.pwm: dict[int, int] = {self.roles.enable_left: 0, self.roles.enable_right: 0}
        self._role_of = {pin: role for role, pin in self.roles.as_dict().items()}

    def role_of(self, pin: int) -> str:
        return self._role_of.get(pin, f"pin{pin}")

    def write_digital(self, pin: int, level: bool) -> bool:
        changed = self.digital.get(pin) != level
        self.digital[pin] = level
        return changed

    def write_pwm(self, pin: int, duty: int) -> bool:
        if not 0 <= duty <= 255:
            raise ValueError(f"duty must be in 0..255, got {duty}")
        changed = self.pwm.get(pin) != duty
        self.pwm[pin] = duty
        return changed


def dispatch(state: FirmwareState, cmd: Command) -> FirmwareState:
    """Apply one command. Motion commands are ignored while the avoidance
    maneuver runs; light and horn always apply."""
    if cmd in _MOTION_FOR_COMMAND:
        if state.avoidance is not AvoidancePhase.INACTIVE:
            return state
        return replace(state, motion=_MOTION_FOR_COMMAND[cmd])
    if cmd is Command.LIGHT_ON:
        return replace(state, light=True)
    if cmd is Command.LIGHT_OFF:
        return replace(state, light=False)
    if cmd is Command.HORN_ON:
        return replace(state, horn=True)
    return replace(state, horn=False)


# H-bridge input levels (in1, in2, in3, in4) per motion mode; left bridge is
# in1/in2, right bridge in3/in4. Turns pivot in place.
_BRIDGE_LEVELS = {
    Motion.IDLE: (False, False, False, False),
    Motion.FORWARD: (True, False, True, False),
    Motion.BACKWARD: (False, True, False, True),
    Motion.LEFT: (False, True, True, False),
    Motion.RIGHT: (True, False, False, True),
}


def apply_pins(state: FirmwareState, pins: PinBank) -> list[tuple[int, str, int]]:
    """Drive pins to match the state; returns (pin, kind, value) for each change."""
    roles = pins.roles
    levels = _BRIDGE_LEVELS[state.motion]
    duty = 0 if state.motion is Motion.IDLE else 255
    changes: list[tuple[int, str, int]] = []
    for pin, level in (
        (roles.in1, levels[0]),
        (roles.in2, levels[1]),
        (roles.in3, levels[2]),
        (roles.in4, levels[3]),
        (roles.light_relay, state.light),
        (roles.horn_relay, state.horn),
    ):
        if pins.write_digital(pin, level):
            changes.append((pin, "digital", int(level)))
    for pin in (roles.enable_left, roles.enable_right):
        if pins.write_pwm(pin, duty):
            changes.append((pin, "pwm", duty))
    return changes


def _match(text: str, cfg: FirmwareConfig, table: CommandTable) -> MatchResult:
    canonical = normalize(text)
    if cfg.fuzzy_enabled:
        return match_fuzzy(canonical, table, cfg.fuzzy_threshold)
    cmd = match_exact(canonical, table)
    if cmd is None:
        return MatchResult(None, 0.0, MatchMethod.NO_MATCH)
    return MatchResult(cmd, 1.0, MatchMethod.EXACT)


def _advance_avoidance(
    state: FirmwareState, cfg: FirmwareConfig, now: int
) -> tuple[FirmwareState, list[TraceEvent]]:
    events: list[TraceEvent] = []

    def phase_event(phase: AvoidancePhase, remaining: int) -> TraceEvent:
        return TraceEvent(now, EventKind.AVOIDANCE_PHASE, {"phase": phase.value, "remaining": remaining})

    if state.avoidance is AvoidancePhase.HALTING:
        state = replace(
            state,
            avoidance=AvoidancePhase.BACKING,
            avoidance_remaining=cfg.backward_duration,
            motion=Motion.BACKWARD,
        )
        events.append(phase_event(AvoidancePhase.BACKING, cfg.backward_duration))
        events.append(TraceEvent(now, EventKind.MOTION_CHANGED, {"motion": Motion.BACKWARD.value}))
    elif state.avoidance is AvoidancePhase.BACKING:
        remaining = state.avoidance_remaining - 1
        if remaining > 0:
            state = replace(state, avoidance_remaining=remaining)
            events.append(phase_event(AvoidancePhase.BACKING, remaining))
        else:
            state = replace(
                state,
                avoidance=AvoidancePhase.TURNING,
                avoidance_remaining=cfg.turn_duration,
                motion=Motion.LEFT,
            )
            events.append(phase_event(AvoidancePhase.TURNING, cfg.turn_duration))
            events.append(TraceEvent(now, EventKind.MOTION_CHANGED, {"motion": Motion.LEFT.value}))
    elif state.avoidance is AvoidancePhase.TURNING:
        remaining = state.avoidance_remaining - 1
        if remaining > 0:
            state = replace(state, avoidance_remaining=remaining)
            events.append(phase_event(AvoidancePhase.TURNING, remaining))
        else:
            state = replace(
                state, avoidance=AvoidancePhase.INACTIVE, avoidance_remaining=0, motion=Motion.IDLE
            )
            events.append(phase_event(AvoidancePhase.INACTIVE, 0))
            events.append(TraceEvent(now, EventKind.MOTION_CHANGED, {"motion": Motion.IDLE.value}))
    return state, events


def tick(
    state: FirmwareState,
    cfg: FirmwareConfig,
    table: CommandTable,
    link: SerialLink,
    measure: Callable[[], EchoMeasurement],
    pins: PinBank,
    now: int,
) -> tuple[FirmwareState, list[TraceEvent]]:
    """Run one control-loop iteration.

    Processing order: serial poll and dispatch, ultrasonic measurement, safety
    check, avoidance advance, pin writes. Malformed frames yield rejection
    events, never failures.
    """
    events: list[TraceEvent] = []

    # 1. serial: poll, normalize, match, dispatch
    for frame in link.poll(now):
        utterance = Utterance(frame.payload.decode("utf-8", errors="replace"), now)
        result = _match(utterance.raw_text, cfg, table)
        if result.command is None:
            events.append(
                TraceEvent(
                    now,
                    EventKind.COMMAND_REJECTED,
                    {"text": utterance.raw_text, "score": result.score, "client_id": frame.client_id},
                )
            )
            continue
        new_state = dispatch(state, result.command)
        applied = (
            result.command not in _MOTION_FOR_COMMAND
            or state.avoidance is AvoidancePhase.INACTIVE
        )
        events.append(
            TraceEvent(
                now,
                EventKind.COMMAND_MATCHED,
                {
                    "text": utterance.raw_text,
                    "command": result.command.value,
                    "score": result.score,
                    "method": result.method.value,
                    "applied": applied,
                    "client_id": frame.client_id,
                },
            )
        )
        if new_state.motion is not state.motion:
            events.append(TraceEvent(now, EventKind.MOTION_CHANGED, {"motion": new_state.motion.value}))
        state = new_state

    # 2. ultrasonic measurement
    echo = measure()
    if echo.distance_cm != state.last_distance:
        events.append(
            TraceEvent(
                now,
                EventKind.ECHO_MEASURED,
                {
                    "duration_us": echo.duration_us,
                    "distance_cm": echo.distance_cm,
                    "saturated": echo.saturated,
                },
            )
        )
    state = replace(state, last_distance=echo.distance_cm)

    # 3. safety check: obstacle ahead while driving forward starts avoidance
    entered = False
    if (
        state.motion is Motion.FORWARD
        and state.avoidance is AvoidancePhase.INACTIVE
        and state.last_distance <= cfg.safety_distance
        and not (cfg.safety_one_shot and state.safety_fired)
    ):
        state = replace(
            state,
            avoidance=AvoidancePhase.HALTING,
            avoidance_remaining=0,
            motion=Motion.IDLE,
            safety_fired=True,
        )
        events.append(
            TraceEvent(now, EventKind.AVOIDANCE_PHASE, {"phase": AvoidancePhase.HALTING.value, "remaining": 0})
        )
        events.append(TraceEvent(now, EventKind.MOTION_CHANGED, {"motion": Motion.IDLE.value}))
        entered = True

    # 4. advance the maneuver, but never on the tick it was entered
    if not entered and state.avoidance is not AvoidancePhase.INACTIVE:
        state, phase_events = _advance_avoidance(state, cfg, now)
        events.extend(phase_events)

    # 5. pins
    for pin, kind, value in apply_pins(state, pins):
        events.append(
            TraceEvent(
                now,
                EventKind.PIN_WRITE,
                {"pin": pin, "role": pins.role_of(pin), "kind": kind, "value": value},
            )
        )

    return state, events
