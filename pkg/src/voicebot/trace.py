"""Line-oriented trace records: one JSON object per line, diff-friendly and
byte-stable for golden tests."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator

TRACE_VERSION = 1


class CorruptTrace(ValueError):
    pass


class EventKind(Enum):
    FRAME_SENT = "FrameSent"
    FRAME_DROPPED = "FrameDropped"
    COMMAND_MATCHED = "CommandMatched"
    COMMAND_REJECTED = "CommandRejected"
    MOTION_CHANGED = "MotionChanged"
    AVOIDANCE_PHASE = "AvoidancePhase"
    PIN_WRITE = "PinWrite"
    ECHO_MEASURED = "EchoMeasured"
    COLLISION = "Collision"
    SNAPSHOT = "Snapshot"


@dataclass(frozen=True)
class TraceEvent:
    tick: int
    kind: EventKind
    payload: dict

    def to_line(self) -> str:
        record = {"record": "event", "tick": self.tick, "kind": self.kind.value, "payload": self.payload}
        return json.dumps(record, separators=(",", ":"))


@dataclass
class Trace:
    """Header metadata plus the ordered event stream of one simulation run."""

    header: dict
    events: list[TraceEvent] = field(default_factory=list)

    def lines(self) -> Iterator[str]:
        head = dict(self.header)
        head["record"] = "header"
        head["v"] = TRACE_VERSION
        # Keep identifying keys first so headers diff cleanly.
        ordered = {k: head[k] for k in ("record", "v") if k in head}
        ordered.update((k, v) for k, v in head.items() if k not in ordered)
        yield json.dumps(ordered, separators=(",", ":"))
        for event in self.events:
            yield event.to_line()

    def dumps(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    def final_tick(self) -> int:
        return self.events[-1].tick if self.events else -1

    @classmethod
    def loads(cls, text: str) -> "Trace":
        header: dict | None = None
        events: list[TraceEvent] = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorruptTrace(f"line {lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise CorruptTrace(f"line {lineno}: expected an object")
            kind = record.get("record")
            if kind == "header":
                if header is not None:
                    raise CorruptTrace(f"line {lineno}: duplicate header")
                if record.get("v") != TRACE_VERSION:
                    raise CorruptTrace(f"line {lineno}: unsupported trace version {record.get('v')!r}")
                header = {k: v for k, v in record.items() if k not in ("record", "v")}
            elif kind == "event":
                if header is None:
                    raise CorruptTrace(f"line {lineno}: event before header")
                try:
                    events.append(
                        TraceEvent(
                            tick=int(record["tick"]),
                            kind=EventKind(record["kind"]),
                            payload=record["payload"],
                        )
                    )
                except (KeyError, ValueError) as exc:
                    raise CorruptTrace(f"line {lineno}: malformed event ({exc})") from exc
            else:
                raise CorruptTrace(f"line {lineno}: unknown record type {kind!r}")
        if header is None:
            raise CorruptTrace("trace has no header line")
        return cls(header, events)

    @classmethod
    def load(cls, path: str | Path) -> "Trace":
        return cls.loads(Path(path).read_text(encoding="utf-8"))
