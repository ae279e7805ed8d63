"""Serial Bluetooth channel emulation: newline framing, tick latency,
range gating, and seeded Bernoulli frame loss."""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

TERMINATOR = b"\n"
MAX_PAYLOAD_BYTES = 256


class LinkError(Exception):
    pass


class PayloadTooLong(LinkError):
    pass


class PayloadContainsTerminator(LinkError):
    pass


@dataclass(frozen=True)
class LinkConfig:
    max_range: float = 50.0  # meters; delivery is inclusive at the boundary
    latency: int = 1  # ticks
    drop_probability: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_range <= 0:
            raise ValueError("max_range must be positive")
        if not 0.0 <= self.drop_probability <= 1.0:
            raise ValueError("drop_probability must be in [0, 1]")
        if self.latency < 0:
            raise ValueError("latency must be >= 0 ticks")


@dataclass(frozen=True)
class Frame:
    """One utterance in flight. `client_id` is simulator-side metadata for
    trace attribution and never appears on the wire."""

    payload: bytes
    client_id: str | None = None

    def wire(self) -> bytes:
        return self.payload + TERMINATOR


class SendOutcome(Enum):
    DELIVERED = "Delivered"
    DROPPED_OUT_OF_RANGE = "DroppedOutOfRange"
    DROPPED_LOSS = "DroppedLoss"


@dataclass(frozen=True)
class SendReceipt:
    outcome: SendOutcome
    deliver_at: int | None = None


def split_wire(data: bytes) -> tuple[list[bytes], bytes]:
    """Split a raw byte stream into complete frame payloads plus the remainder."""
    parts = data.split(TERMINATOR)
    return parts[:-1], parts[-1]


class SerialLink:
    """FIFO frame channel between the controller endpoint and the robot.

    Single-owner mutable state: every call must come from the simulation
    thread. `separation` is the current endpoint distance in meters and is
    updated by the simulation before each send.
    """

    def __init__(self, config: LinkConfig):
        self.config = config
        self.separation = 0.0
        self._queue: deque[tuple[Frame, int]] = deque()
        self._rng = random.Random(config.seed)

    def send(self, payload: bytes, now: int, client_id: str | None = None) -> SendReceipt:
        if len(payload) > MAX_PAYLOAD_BYTES:
            raise PayloadTooLong(f"payload is {len(payload)} bytes, max {MAX_PAYLOAD_BYTES}")
        if TERMINATOR in payload:
            raise PayloadContainsTerminator("payload must not contain the newline terminator")
        if self.separation > self.config.max_range:
            return SendReceipt(SendOutcome.DROPPED_OUT_OF_RANGE)
        if self._rng.random() < self.config.drop_probability:
            return SendReceipt(SendOutcome.DROPPED_LOSS)
        deliver_at = now + self.config.latency
        self._queue.append((Frame(payload, client_id), deliver_at))
        return SendReceipt(SendOutcome.DELIVERED, deliver_at)

    def poll(self, now: int) -> list[Frame]:
        """Remove and return, in send order, every frame due by `now`."""
        out: list[Frame] = []
        queue = self._queue
        while queue and queue[0][1] <= now:
            out.append(queue.popleft()[0])
        return out

    def pending(self) -> int:
        return len(self._queue)
