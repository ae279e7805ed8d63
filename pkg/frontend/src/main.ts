/** Browser bootstrap: wires the DOM console to the store, client, and
 * renderer. All state flows through the SessionStore; this file only moves
 * values between widgets and the store.
 */

import { TeleopClient } from "./client.js";
import { drawArena } from "./render.js";
import { DEFAULT_TABLE, preview } from "./similarity.js";
import { SessionStore } from "./store.js";
import type { ControlAction } from "./protocol.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

const canvas = el<HTMLCanvasElement>("arena");
const ctx = canvas.getContext("2d");
if (ctx === null) {
  throw new Error("canvas 2d context unavailable");
}

const addressInput = el<HTMLInputElement>("address");
const connectButton = el<HTMLButtonElement>("connect");
const statusBadge = el<HTMLSpanElement>("status");
const utteranceInput = el<HTMLInputElement>("utterance");
const sendButton = el<HTMLButtonElement>("send");
const previewBox = el<HTMLDivElement>("preview");
const buttonRow = el<HTMLDivElement>("quick-buttons");
const lightBadge = el<HTMLSpanElement>("light");
const hornBadge = el<HTMLSpanElement>("horn");
const phaseBadge = el<HTMLSpanElement>("phase");
const logList = el<HTMLUListElement>("log");

const params = new URLSearchParams(window.location.search);
addressInput.value = params.get("url") ?? "ws://127.0.0.1:8765";

const store = new SessionStore();
const client = new TeleopClient(store, "console");

let frameQueued = false;
function scheduleRender(): void {
  if (frameQueued) {
    return;
  }
  frameQueued = true;
  requestAnimationFrame(() => {
    frameQueued = false;
    renderAll();
  });
}

function renderBadge(badge: HTMLSpanElement, label: string, on: boolean): void {
  badge.textContent = `${label}: ${on ? "on" : "off"}`;
  badge.className = on ? "badge on" : "badge";
}

function renderAll(): void {
  statusBadge.textContent = store.connection;
  statusBadge.className = `badge ${store.connection}`;
  connectButton.textContent =
    store.connection === "disconnected" ? "retry" : "connect";

  drawArena(ctx!, canvas.width, canvas.height, store.hello, store.snapshot);

  const snap = store.snapshot;
  renderBadge(lightBadge, "light", snap?.light ?? false);
  renderBadge(hornBadge, "horn", snap?.horn ?? false);
  phaseBadge.textContent = `avoidance: ${snap?.avoidance ?? "-"}`;

  logList.replaceChildren(
    ...store.log.slice(-30).map((entry) => {
      const item = document.createElement("li");
      const tick = entry.tick === null ? "" : `[${entry.tick}] `;
      item.textContent = `${tick}${entry.kind}: ${entry.text}`;
      item.dataset["kind"] = entry.kind;
      return item;
    }),
  );
  logList.scrollTop = logList.scrollHeight;
}

function renderPreview(): void {
  const text = utteranceInput.value;
  if (text.trim().length === 0) {
    previewBox.textContent = "preview: -";
    return;
  }
  const result = preview(text);
  if (result.command === null) {
    previewBox.textContent = `preview: no match (best ${result.score.toFixed(3)})`;
  } else {
    previewBox.textContent =
      `preview: ${result.command} @ ${result.score.toFixed(3)} (${result.method})`;
  }
}

function submit(): void {
  store.setPending(utteranceInput.value);
  const decision = store.prepareSubmit();
  if (!decision.ok) {
    return;
  }
  if (client.sendUtterance(decision.text)) {
    store.clearPending();
    utteranceInput.value = "";
    renderPreview();
  }
}

store.subscribe(scheduleRender);

connectButton.addEventListener("click", () => client.connect(addressInput.value));
sendButton.addEventListener("click", submit);
utteranceInput.addEventListener("input", renderPreview);
utteranceInput.addEventListener("keydown", (event) => {
  if (event.key === "Enter") {
    submit();
  }
});

for (const [, phrase] of DEFAULT_TABLE) {
  const button = document.createElement("button");
  button.textContent = phrase;
  button.addEventListener("click", () => {
    utteranceInput.value = phrase;
    renderPreview();
    submit();
  });
  buttonRow.appendChild(button);
}

for (const action of ["pause", "resume", "reset"] as ControlAction[]) {
  const button = document.createElement("button");
  button.textContent = action;
  button.addEventListener("click", () => client.sendControl(action));
  el<HTMLDivElement>("controls").appendChild(button);
}

client.connect(addressInput.value);
renderPreview();
renderAll();
