"""Dual H-bridge and relay driver models: pin states in, load states out."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


@dataclass(frozen=True)
class HBridgeSpec:
    """Electrical limits are informational only; the drive model is linear."""

    max_wheel_speed: float = 8.0  # rad/s at duty 255
    supply_min_volts: float = 5.0
    supply_max_volts: float = 36.0
    max_drive_milliamps: float = 600.0

    def __post_init__(self) -> None:
        if self.max_wheel_speed <= 0:
            raise ValueError("max_wheel_speed must be positive")


class RelayKind(Enum):
    LIGHT = "Light"
    HORN = "Horn"


@dataclass
class RelayLoad:
    kind: RelayKind
    energized: bool = False


def bridge_output(in_a: bool, in_b: bool, duty: int, spec: HBridgeSpec) -> float:
    """Signed wheel angular velocity for one H-bridge.

    (high, low) drives forward, (low, high) reverse; matching inputs brake or
    coast, both collapsed to zero. Speed scales linearly with PWM duty.
    """
    if not 0 <= duty <= 255:
        raise ValueError(f"duty must be in 0..255, got {duty}")
    if in_a == in_b:
        return 0.0
    magnitude = duty / 255 * spec.max_wheel_speed
    return magnitude if in_a else -magnitude


def relay_output(pin_level: bool) -> bool:
    """BC547 relay driver: the load mirrors its pin with no latching."""
    return bool(pin_level)
