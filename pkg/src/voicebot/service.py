"""Real-time teleop service: one simulation thread, many socket clients.

All mutable simulation state lives on the simulation thread. Client sessions
talk to it through two ordered queues: an inbound command queue drained at the
start of every tick, and per-client outbound queues fed from the tick's
events. No state is shared across threads.
"""
from __future__ import annotations

import asyncio
import json
import queue
import threading
import time
from dataclasses import dataclass

from websockets.asyncio.server import serve as ws_serve
from websockets.exceptions import ConnectionClosed

from .engine import Simulation, make_header
from .link import MAX_PAYLOAD_BYTES, TERMINATOR
from .scenario import Scenario
from .trace import EventKind

PROTOCOL_VERSION = 1

_CONTROL_ACTIONS = ("pause", "resume", "reset")


class PortUnavailable(OSError):
    """The requested listen port could not be bound."""


@dataclass(frozen=True)
class _Utterance:
    text: str
    client_id: str


@dataclass(frozen=True)
class _Control:
    action: str


def _message(msg_type: str, payload: dict) -> str:
    return json.dumps(
        {"v": PROTOCOL_VERSION, "type": msg_type, "payload": payload},
        separators=(",", ":"),
    )


def _parse_client_message(raw: str | bytes) -> _Utterance | _Control:
    """Validate one inbound frame; raises ValueError with a client-facing reason."""
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ValueError(f"not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ValueError("message must be a JSON object")
    if data.get("v") != PROTOCOL_VERSION:
        raise ValueError(f"unsupported protocol version {data.get('v')!r}")
    msg_type = data.get("type")
    if msg_type == "utterance":
        text = data.get("text")
        if not isinstance(text, str):
            raise ValueError("utterance requires a string 'text' field")
        encoded = text.encode("utf-8")
        if len(encoded) > MAX_PAYLOAD_BYTES:
            raise ValueError(f"text exceeds {MAX_PAYLOAD_BYTES} bytes")
        if TERMINATOR in encoded:
            raise ValueError("text must not contain newlines")
        client_id = data.get("client_id", "anonymous")
        if not isinstance(client_id, str):
            raise ValueError("client_id must be a string")
        return _Utterance(text, client_id)
    if msg_type == "control":
        action = data.get("action")
        if action not in _CONTROL_ACTIONS:
            raise ValueError(f"action must be one of {', '.join(_CONTROL_ACTIONS)}")
        return _Control(action)
    raise ValueError("type must be 'utterance' or 'control'")


class TeleopServer:
    """Serves a scenario over websockets in real time."""

    def __init__(self, scenario: Scenario, host: str = "127.0.0.1", port: int = 8765, tick_ms: float = 10.0):
        if tick_ms <= 0:
            raise ValueError("tick_ms must be positive")
        self.scenario = scenario
        self.host = host
        self.port = port
        self.tick_seconds = tick_ms / 1000.0
        self._inbound: queue.Queue[_Utterance | _Control] = queue.Queue()
        self._clients: set[asyncio.Queue[str]] = set()
        self._loop: asyncio.AbstractEventLoop | None = None
        self._stop = threading.Event()
        self._paused = False
        self._sim_thread: threading.Thread | None = None
        self._hello_payload: dict = {}

    def _broadcast(self, lines: list[str]) -> None:
        # runs on the event loop thread
        for q in self._clients:
            for line in lines:
                q.put_nowait(line)

    def _sim_loop(self) -> None:
        sim = Simulation(self.scenario, snapshot_every=1)
        self._publish_hello(sim)
        script = list(self.scenario.script)
        cursor = 0
        deadline = time.monotonic()
        while not self._stop.is_set():
            deadline += self.tick_seconds
            reset_requested = False
            while True:
                try:
                    item = self._inbound.get_nowait()
                except queue.Empty:
                    break
                if isinstance(item, _Utterance):
                    if not self._paused:
                        sim.inject(item.text, item.client_id)
                elif item.action == "pause":
                    self._paused = True
                elif item.action == "resume":
                    self._paused = False
                else:
                    reset_requested = True
            if reset_requested:
                sim = Simulation(self.scenario, snapshot_every=1)
                self._publish_hello(sim)
                cursor = 0
            if not self._paused:
                while cursor < len(script) and script[cursor][0] == sim.tick:
                    sim.inject(script[cursor][1])
                    cursor += 1
                events = sim.step()
                lines = []
                for event in events:
                    if event.kind is EventKind.SNAPSHOT:
                        lines.append(_message("snapshot", event.payload))
                    else:
                        lines.append(
                            _message(
                                "event",
                                {"tick": event.tick, "kind": event.kind.value, "payload": event.payload},
                            )
                        )
                if lines and self._loop is not None:
                    self._loop.call_soon_threadsafe(self._broadcast, lines)
            pause = deadline - time.monotonic()
            if pause > 0:
                self._stop.wait(pause)
            else:
                deadline = time.monotonic()  # fell behind; do not replay missed ticks

    def _publish_hello(self, sim: Simulation) -> None:
        """Store the greeting for new connections and push it to current ones.

        Clients treat a hello as a run boundary (it restarts their tick
        baseline), so a reset must deliver a fresh hello to every connected
        client before the first snapshot of the new run.
        """
        header = make_header(self.scenario, sim.state)
        header["protocol"] = PROTOCOL_VERSION
        self._hello_payload = header
        if self._loop is not None:
            line = _message("hello", header)
            self._loop.call_soon_threadsafe(self._broadcast, [line])

    async def _handle_client(self, websocket) -> None:
        outbound: asyncio.Queue[str] = asyncio.Queue()
        self._clients.add(outbound)

        async def sender() -> None:
            while True:
                await websocket.send(await outbound.get())

        send_task = asyncio.ensure_future(sender())
        try:
            await websocket.send(_message("hello", self._hello_payload))
            async for raw in websocket:
                try:
                    item = _parse_client_message(raw)
                except ValueError as exc:
                    await websocket.send(_message("error", {"message": str(exc)}))
                    continue
                self._inbound.put(item)
        except ConnectionClosed:
            pass
        finally:
            self._clients.discard(outbound)
            send_task.cancel()

    async def run(self) -> None:
        """Listen and serve until cancelled."""
        self._loop = asyncio.get_running_loop()
        try:
            server = await ws_serve(self._handle_client, self.host, self.port)
        except OSError as exc:
            raise PortUnavailable(f"cannot listen on {self.host}:{self.port} ({exc})") from exc
        self._sim_thread = threading.Thread(target=self._sim_loop, name="sim", daemon=True)
        self._sim_thread.start()
        print(f"listening on ws://{self.host}:{self.port}", flush=True)
        try:
            await server.serve_forever()
        finally:
            self._stop.set()
            server.close()
            await server.wait_closed()
            if self._sim_thread is not None:
                self._sim_thread.join(timeout=2.0)


def serve_scenario(scenario: Scenario, host: str = "127.0.0.1", port: int = 8765, tick_ms: float = 10.0) -> None:
    """Blocking entry point for the CLI; returns when interrupted."""
    server = TeleopServer(scenario, host, port, tick_ms)
    try:
        asyncio.run(server.run())
    except KeyboardInterrupt:
        pass
