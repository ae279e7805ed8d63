/** Thin websocket client: parses server frames into the store and exposes
 * the two outbound message kinds. Reconnection is explicit (the UI offers a
 * retry button); the socket constructor is injectable for tests.
 */

import {
  controlMessage,
  parseServerMessage,
  utteranceMessage,
  type ControlAction,
} from "./protocol.js";
import type { SessionStore } from "./store.js";

interface SocketLike {
  send(data: string): void;
  close(): void;
  addEventListener(type: "open" | "close" | "error", handler: () => void): void;
  addEventListener(type: "message", handler: (event: { data: unknown }) => void): void;
}

type SocketFactory = (url: string) => SocketLike;

const browserSocketFactory: SocketFactory = (url) =>
  new WebSocket(url) as unknown as SocketLike;

export class TeleopClient {
  readonly clientId: string;
  private socket: SocketLike | null = null;
  private readonly factory: SocketFactory;

  constructor(
    private readonly store: SessionStore,
    clientId = "console",
    factory: SocketFactory = browserSocketFactory,
  ) {
    this.clientId = clientId;
    this.factory = factory;
  }

  connect(url: string): void {
    this.close();
    this.store.setConnection("connecting");
    const socket = this.factory(url);
    this.socket = socket;
    socket.addEventListener("open", () => this.store.setConnection("connected"));
    socket.addEventListener("close", () => this.store.setConnection("disconnected"));
    socket.addEventListener("error", () => this.store.setConnection("disconnected"));
    socket.addEventListener("message", (event) => this.receive(String(event.data)));
  }

  private receive(raw: string): void {
    let message;
    try {
      message = parseServerMessage(raw);
    } catch (exc) {
      this.store.applyError(exc instanceof Error ? exc.message : String(exc));
      return;
    }
    switch (message.type) {
      case "hello":
        this.store.applyHello(message.payload);
        break;
      case "snapshot":
        this.store.applySnapshot(message.payload);
        break;
      case "event":
        this.store.applyEvent(message.payload);
        break;
      case "error":
        this.store.applyError(message.payload.message);
        break;
    }
  }

  sendUtterance(text: string): boolean {
    if (this.socket === null || this.store.connection !== "connected") {
      this.store.applyError("not connected");
      return false;
    }
    this.socket.send(utteranceMessage(text, this.clientId));
    return true;
  }

  sendControl(action: ControlAction): boolean {
    if (this.socket === null || this.store.connection !== "connected") {
      this.store.applyError("not connected");
      return false;
    }
    this.socket.send(controlMessage(action));
    return true;
  }

  close(): void {
    if (this.socket !== null) {
      this.socket.close();
      this.socket = null;
    }
  }
}
