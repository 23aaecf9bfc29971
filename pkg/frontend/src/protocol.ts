/**
 * Wire protocol types, mirroring the engine's docs/wire-schema.json.
 * One JSON message per WebSocket text frame; unknown types are rejected.
 */

export type Vec2 = [number, number];
export type Rgba = [number, number, number, number];

export type ShapeCommand =
  | { kind: "rect"; center: Vec2; width: number; height: number; corner_radius: number; color: Rgba }
  | { kind: "disc"; center: Vec2; radius: number; color: Rgba }
  | { kind: "ring"; center: Vec2; radius: number; thickness: number; color: Rgba }
  | { kind: "arc"; center: Vec2; radius: number; thickness: number; angle_start_rad: number; angle_end_rad: number; color: Rgba }
  | { kind: "line"; a: Vec2; b: Vec2; thickness: number; color: Rgba }
  | { kind: "polyline"; points: Vec2[]; thickness: number; color: Rgba }
  | { kind: "polygon"; points: Vec2[]; color: Rgba }
  | { kind: "triangle"; a: Vec2; b: Vec2; c: Vec2; color: Rgba }
  | { kind: "regular_polygon"; center: Vec2; sides: number; radius: number; rotation_rad: number; color: Rgba };

export interface ScriptRecord {
  userPrompt: string;
  scriptContent: string;
  drawUI: boolean;
}

export interface DiagnosticItem {
  severity: "error" | "warning";
  code: string;
  line: number;
  col: number;
  message: string;
}

export type AuthorPhase = "enhance" | "generate" | "compile" | "check" | "done" | "failed";

export type ServerMessage =
  | { type: "features"; seq: number; t_ms: number; dominant_hz: number | null; norm: number; rms: number }
  | { type: "frame"; frame_seq: number; t_ms: number; scripts: { title: string; commands: ShapeCommand[] }[] }
  | { type: "script_list"; records: ScriptRecord[] }
  | { type: "author_status"; phase: AuthorPhase; detail: string }
  | { type: "diagnostics"; title?: string; items: DiagnosticItem[] }
  | { type: "protocol_error"; detail: string };

export type ClientMessage =
  | { type: "author"; prompt: string }
  | { type: "set_draw_ui"; title: string; value: boolean }
  | { type: "list_scripts" };

const SERVER_TYPES = new Set([
  "features",
  "frame",
  "script_list",
  "author_status",
  "diagnostics",
  "protocol_error",
]);

export class ProtocolError extends Error {}

/** Parse one incoming frame; throws ProtocolError on anything unexpected. */
export function parseServerMessage(payload: string): ServerMessage {
  let raw: unknown;
  try {
    raw = JSON.parse(payload);
  } catch {
    throw new ProtocolError(`not JSON: ${payload.slice(0, 80)}`);
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new ProtocolError("message must be an object");
  }
  const msg = raw as { type?: unknown };
  if (typeof msg.type !== "string" || !SERVER_TYPES.has(msg.type)) {
    throw new ProtocolError(`unknown server message type ${String(msg.type)}`);
  }
  return raw as ServerMessage;
}

export function authorMessage(prompt: string): ClientMessage {
  return { type: "author", prompt };
}

export function setDrawUiMessage(title: string, value: boolean): ClientMessage {
  return { type: "set_draw_ui", title, value };
}

export function listScriptsMessage(): ClientMessage {
  return { type: "list_scripts" };
}

export function encodeClientMessage(msg: ClientMessage): string {
  return JSON.stringify(msg);
}
