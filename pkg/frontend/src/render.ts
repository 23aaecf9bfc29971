/**
 * Immediate-mode canvas renderer for frame messages.
 *
 * World space: origin at the canvas center, y up, 1 scene unit = 40 px.
 * Each frame is drawn from scratch in command order; there is no retained
 * scene graph.  The context is typed structurally so tests can drive the
 * renderer with a recording stub instead of a real canvas.
 */

import type { Rgba, ShapeCommand, Vec2 } from "./protocol.js";

export const PIXELS_PER_UNIT = 40;

/** The slice of CanvasRenderingContext2D the renderer needs.  Style
 * properties are `unknown` so the real context's wider unions fit. */
export interface Context2DLike {
  fillStyle: unknown;
  strokeStyle: unknown;
  lineWidth: number;
  lineCap: string;
  lineJoin: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number, ccw?: boolean): void;
  arcTo(x1: number, y1: number, x2: number, y2: number, r: number): void;
  closePath(): void;
  fill(): void;
  stroke(): void;
}

export interface Viewport {
  width: number;
  height: number;
}

function css(color: Rgba): string {
  const [r, g, b, a] = color;
  return `rgba(${Math.round(r * 255)}, ${Math.round(g * 255)}, ${Math.round(b * 255)}, ${a})`;
}

export function renderFrame(
  ctx: Context2DLike,
  viewport: Viewport,
  frame: { scripts: { title: string; commands: ShapeCommand[] }[] },
): void {
  ctx.clearRect(0, 0, viewport.width, viewport.height);
  const cx = viewport.width / 2;
  const cy = viewport.height / 2;
  const px = (p: Vec2) => cx + p[0] * PIXELS_PER_UNIT;
  const py = (p: Vec2) => cy - p[1] * PIXELS_PER_UNIT;
  const len = (v: number) => v * PIXELS_PER_UNIT;

  for (const script of frame.scripts) {
    for (const cmd of script.commands) {
      drawCommand(ctx, cmd, px, py, len);
    }
  }
}

function drawCommand(
  ctx: Context2DLike,
  cmd: ShapeCommand,
  px: (p: Vec2) => number,
  py: (p: Vec2) => number,
  len: (v: number) => number,
): void {
  switch (cmd.kind) {
    case "rect": {
      const w = len(cmd.width);
      const h = len(cmd.height);
      const x = px(cmd.center) - w / 2;
      const y = py(cmd.center) - h / 2;
      const r = Math.min(len(cmd.corner_radius), w / 2, h / 2);
      ctx.fillStyle = css(cmd.color);
      ctx.beginPath();
      ctx.moveTo(x + r, y);
      ctx.arcTo(x + w, y, x + w, y + h, r);
      ctx.arcTo(x + w, y + h, x, y + h, r);
      ctx.arcTo(x, y + h, x, y, r);
      ctx.arcTo(x, y, x + w, y, r);
      ctx.closePath();
      ctx.fill();
      break;
    }
    case "disc":
      ctx.fillStyle = css(cmd.color);
      ctx.beginPath();
      ctx.arc(px(cmd.center), py(cmd.center), len(cmd.radius), 0, Math.PI * 2);
      ctx.fill();
      break;
    case "ring":
      ctx.strokeStyle = css(cmd.color);
      ctx.lineWidth = Math.max(1, len(cmd.thickness));
      ctx.beginPath();
      ctx.arc(px(cmd.center), py(cmd.center), len(cmd.radius), 0, Math.PI * 2);
      ctx.stroke();
      break;
    case "arc":
      ctx.strokeStyle = css(cmd.color);
      ctx.lineWidth = Math.max(1, len(cmd.thickness));
      ctx.lineCap = "round";
      ctx.beginPath();
      // canvas y points down, so world angles flip sign
      ctx.arc(
        px(cmd.center),
        py(cmd.center),
        len(cmd.radius),
        -cmd.angle_start_rad,
        -cmd.angle_end_rad,
        true,
      );
      ctx.stroke();
      break;
    case "line":
      ctx.strokeStyle = css(cmd.color);
      ctx.lineWidth = Math.max(1, len(cmd.thickness));
      ctx.lineCap = "round";
      ctx.beginPath();
      ctx.moveTo(px(cmd.a), py(cmd.a));
      ctx.lineTo(px(cmd.b), py(cmd.b));
      ctx.stroke();
      break;
    case "polyline": {
      ctx.strokeStyle = css(cmd.color);
      ctx.lineWidth = Math.max(1, len(cmd.thickness));
      ctx.lineCap = "round";
      ctx.lineJoin = "round";
      ctx.beginPath();
      cmd.points.forEach((p, i) => (i === 0 ? ctx.moveTo(px(p), py(p)) : ctx.lineTo(px(p), py(p))));
      ctx.stroke();
      break;
    }
    case "polygon": {
      ctx.fillStyle = css(cmd.color);
      ctx.beginPath();
      cmd.points.forEach((p, i) => (i === 0 ? ctx.moveTo(px(p), py(p)) : ctx.lineTo(px(p), py(p))));
      ctx.closePath();
      ctx.fill();
      break;
    }
    case "triangle":
      ctx.fillStyle = css(cmd.color);
      ctx.beginPath();
      ctx.moveTo(px(cmd.a), py(cmd.a));
      ctx.lineTo(px(cmd.b), py(cmd.b));
      ctx.lineTo(px(cmd.c), py(cmd.c));
      ctx.closePath();
      ctx.fill();
      break;
    case "regular_polygon": {
      ctx.fillStyle = css(cmd.color);
      ctx.beginPath();
      for (let i = 0; i < cmd.sides; i++) {
        const theta = cmd.rotation_rad + (i * 2 * Math.PI) / cmd.sides;
        const p: Vec2 = [
          cmd.center[0] + cmd.radius * Math.cos(theta),
          cmd.center[1] + cmd.radius * Math.sin(theta),
        ];
        i === 0 ? ctx.moveTo(px(p), py(p)) : ctx.lineTo(px(p), py(p));
      }
      ctx.closePath();
      ctx.fill();
      break;
    }
  }
}
