/** Single state store for the console session.
 *
 * Snapshot handling and user input both funnel through this store, so the
 * view only ever renders one coherent state. The rendered tick is monotone
 * nondecreasing: snapshots older than the one on screen are discarded. A
 * hello message starts a new run (the service re-sends it on reset), which
 * clears the baseline so tick 0 renders again.
 */

import type { EventPayload, HelloPayload, SnapshotPayload } from "./protocol.js";

export type ConnectionState = "connecting" | "connected" | "disconnected";

export interface LogEntry {
  tick: number | null;
  kind: string;
  text: string;
}

export type SubmitDecision =
  | { ok: true; text: string }
  | { ok: false; reason: string };

const LOG_LIMIT = 200;

function describeEvent(event: EventPayload): string {
  const p = event.payload;
  switch (event.kind) {
    case "CommandMatched":
      return `"${String(p["text"])}" -> ${String(p["command"])} (${String(p["method"])})`;
    case "CommandRejected":
      return `"${String(p["text"])}" rejected (best ${Number(p["score"]).toFixed(3)})`;
    case "MotionChanged":
      return `motion ${String(p["motion"])}`;
    case "AvoidancePhase":
      return `avoidance ${String(p["phase"])}`;
    case "FrameSent":
      return `frame from ${String(p["client_id"])}`;
    case "FrameDropped":
      return `frame dropped (${String(p["reason"])})`;
    case "EchoMeasured":
      return `distance ${Number(p["distance_cm"]).toFixed(1)} cm`;
    case "Collision":
      return "collision";
    default:
      return JSON.stringify(p);
  }
}

export class SessionStore {
  connection: ConnectionState = "connecting";
  hello: HelloPayload | null = null;
  snapshot: SnapshotPayload | null = null;
  log: LogEntry[] = [];
  pendingText = "";

  private listeners: (() => void)[] = [];

  subscribe(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) {
      listener();
    }
  }

  private push(entry: LogEntry): void {
    this.log.push(entry);
    if (this.log.length > LOG_LIMIT) {
      this.log.splice(0, this.log.length - LOG_LIMIT);
    }
  }

  setConnection(state: ConnectionState): void {
    if (state !== this.connection) {
      this.connection = state;
      this.push({ tick: null, kind: "Connection", text: state });
      this.notify();
    }
  }

  applyHello(payload: HelloPayload): void {
    // New run: the next snapshot starts the tick baseline over.
    this.hello = payload;
    this.snapshot = null;
    this.push({ tick: null, kind: "Hello", text: `scenario ${payload.name}` });
    this.notify();
  }

  /** Returns false when the snapshot is stale and was discarded. */
  applySnapshot(payload: SnapshotPayload): boolean {
    if (this.snapshot !== null && payload.tick < this.snapshot.tick) {
      return false;
    }
    this.snapshot = payload;
    this.notify();
    return true;
  }

  applyEvent(payload: EventPayload): void {
    this.push({ tick: payload.tick, kind: payload.kind, text: describeEvent(payload) });
    this.notify();
  }

  applyError(message: string): void {
    this.push({ tick: null, kind: "Error", text: message });
    this.notify();
  }

  setPending(text: string): void {
    this.pendingText = text;
    this.notify();
  }

  /** Local validation before an utterance goes out: empty input never sends. */
  prepareSubmit(): SubmitDecision {
    const text = this.pendingText;
    if (text.trim().length === 0) {
      const reason = "empty input";
      this.push({ tick: null, kind: "Error", text: reason });
      this.notify();
      return { ok: false, reason };
    }
    return { ok: true, text };
  }

  clearPending(): void {
    this.pendingText = "";
    this.notify();
  }
}
