/** Wire types for the live service protocol, version 1.
 *
 * Client to server: utterance and control messages. Server to client:
 * one hello on connect, then a snapshot per tick, an event per non-snapshot
 * simulation event, and error replies to malformed input. Every message
 * carries `v: 1`.
 */

export const PROTOCOL_VERSION = 1;

export interface Pose {
  x: number;
  y: number;
  heading: number;
}

export interface SnapshotPayload {
  tick: number;
  pose: Pose;
  motion: string;
  light: boolean;
  horn: boolean;
  avoidance: string;
  avoidance_remaining: number;
  last_distance: number;
  separation: number;
}

export interface ArenaSummary {
  bounds: [number, number, number, number];
  obstacles: [[number, number], [number, number]][];
  controller: [number, number];
}

export interface HelloPayload {
  protocol: number;
  name: string;
  seed: number;
  duration: number;
  tick_seconds: number;
  safety_distance: number;
  arena: ArenaSummary;
  initial: Record<string, unknown>;
}

export interface EventPayload {
  tick: number;
  kind: string;
  payload: Record<string, unknown>;
}

export type ServerMessage =
  | { type: "hello"; payload: HelloPayload }
  | { type: "snapshot"; payload: SnapshotPayload }
  | { type: "event"; payload: EventPayload }
  | { type: "error"; payload: { message: string } };

export type ControlAction = "pause" | "resume" | "reset";

/** Parse a raw server frame; throws on anything outside the v1 schema. */
export function parseServerMessage(raw: string): ServerMessage {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    throw new Error("server frame is not valid JSON");
  }
  if (typeof data !== "object" || data === null || Array.isArray(data)) {
    throw new Error("server frame is not an object");
  }
  const msg = data as { v?: unknown; type?: unknown; payload?: unknown };
  if (msg.v !== PROTOCOL_VERSION) {
    throw new Error(`unsupported protocol version: ${String(msg.v)}`);
  }
  if (
    msg.type !== "hello" &&
    msg.type !== "snapshot" &&
    msg.type !== "event" &&
    msg.type !== "error"
  ) {
    throw new Error(`unknown server message type: ${String(msg.type)}`);
  }
  if (typeof msg.payload !== "object" || msg.payload === null) {
    throw new Error("server frame has no payload");
  }
  return { type: msg.type, payload: msg.payload } as ServerMessage;
}

export function utteranceMessage(text: string, clientId: string): string {
  return JSON.stringify({
    v: PROTOCOL_VERSION,
    type: "utterance",
    text,
    client_id: clientId,
  });
}

export function controlMessage(action: ControlAction): string {
  return JSON.stringify({ v: PROTOCOL_VERSION, type: "control", action });
}
