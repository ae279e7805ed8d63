/** Canvas drawing for the arena view: bounds, obstacles, controller marker,
 * robot pose with heading, and the sensor ray scaled from the last measured
 * distance. Pure drawing, no DOM lookups, so it is testable headless.
 */

import type { HelloPayload, SnapshotPayload } from "./protocol.js";

const ROBOT_RADIUS_M = 0.09;
const MARGIN_PX = 24;

export interface Transform {
  scale: number;
  toX(xMeters: number): number;
  toY(yMeters: number): number;
}

/** Meters-to-pixels mapping that fits the bounds into the canvas, y up. */
export function arenaTransform(
  bounds: [number, number, number, number],
  width: number,
  height: number,
): Transform {
  const [xmin, ymin, xmax, ymax] = bounds;
  const scale = Math.min(
    (width - 2 * MARGIN_PX) / (xmax - xmin),
    (height - 2 * MARGIN_PX) / (ymax - ymin),
  );
  return {
    scale,
    toX: (x) => MARGIN_PX + (x - xmin) * scale,
    toY: (y) => height - MARGIN_PX - (y - ymin) * scale,
  };
}

function phaseColor(phase: string): string {
  switch (phase) {
    case "Halting":
      return "#d9534f";
    case "Backing":
      return "#f0ad4e";
    case "Turning":
      return "#5bc0de";
    default:
      return "#3c763d";
  }
}

export function drawArena(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  hello: HelloPayload | null,
  snapshot: SnapshotPayload | null,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#fafafa";
  ctx.fillRect(0, 0, width, height);

  if (hello === null) {
    ctx.fillStyle = "#666";
    ctx.font = "16px sans-serif";
    ctx.textAlign = "center";
    ctx.fillText("waiting for the service...", width / 2, height / 2);
    return;
  }

  const t = arenaTransform(hello.arena.bounds, width, height);
  const [xmin, ymin, xmax, ymax] = hello.arena.bounds;

  ctx.strokeStyle = "#222";
  ctx.lineWidth = 2;
  ctx.strokeRect(
    t.toX(xmin),
    t.toY(ymax),
    (xmax - xmin) * t.scale,
    (ymax - ymin) * t.scale,
  );

  ctx.strokeStyle = "#b22";
  ctx.lineWidth = 4;
  for (const [[ax, ay], [bx, by]] of hello.arena.obstacles) {
    ctx.beginPath();
    ctx.moveTo(t.toX(ax), t.toY(ay));
    ctx.lineTo(t.toX(bx), t.toY(by));
    ctx.stroke();
  }

  const [cx, cy] = hello.arena.controller;
  ctx.fillStyle = "#26c";
  ctx.beginPath();
  ctx.moveTo(t.toX(cx), t.toY(cy) - 8);
  ctx.lineTo(t.toX(cx) - 7, t.toY(cy) + 6);
  ctx.lineTo(t.toX(cx) + 7, t.toY(cy) + 6);
  ctx.closePath();
  ctx.fill();

  if (snapshot === null) {
    return;
  }
  const { pose } = snapshot;
  const px = t.toX(pose.x);
  const py = t.toY(pose.y);
  const radius = Math.max(ROBOT_RADIUS_M * t.scale, 5);

  // sensor ray, scaled from the last measured distance (cm -> m)
  const rayMeters = snapshot.last_distance / 100;
  ctx.strokeStyle = "#9467bd";
  ctx.lineWidth = 1.5;
  ctx.setLineDash([6, 4]);
  ctx.beginPath();
  ctx.moveTo(px, py);
  ctx.lineTo(
    t.toX(pose.x + rayMeters * Math.cos(pose.heading)),
    t.toY(pose.y + rayMeters * Math.sin(pose.heading)),
  );
  ctx.stroke();
  ctx.setLineDash([]);

  ctx.fillStyle = phaseColor(snapshot.avoidance);
  ctx.beginPath();
  ctx.arc(px, py, radius, 0, 2 * Math.PI);
  ctx.fill();

  // heading marker
  ctx.strokeStyle = "#111";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(px, py);
  ctx.lineTo(
    px + 2 * radius * Math.cos(pose.heading),
    py - 2 * radius * Math.sin(pose.heading),
  );
  ctx.stroke();

  ctx.fillStyle = "#333";
  ctx.font = "12px monospace";
  ctx.textAlign = "left";
  ctx.fillText(
    `tick ${snapshot.tick}  ${snapshot.motion}  ${snapshot.last_distance.toFixed(1)} cm`,
    MARGIN_PX,
    height - 6,
  );
}
