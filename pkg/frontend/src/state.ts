/**
 * UI state as a pure reduction over server messages.  The app never keeps
 * derived script/frame state of its own: everything re-renders from here,
 * and a reconnect rebuilds the lot from a fresh list_scripts reply.
 */

import type { AuthorPhase, ServerMessage, ScriptRecord } from "./protocol.js";

export interface PhaseEntry {
  phase: AuthorPhase;
  detail: string;
}

export interface UiState {
  connection: "connecting" | "open" | "closed";
  features: Extract<ServerMessage, { type: "features" }> | null;
  frame: Extract<ServerMessage, { type: "frame" }> | null;
  lastFrameSeq: number;
  scripts: ScriptRecord[];
  phaseLog: PhaseEntry[];
  authoringBusy: boolean;
  promptHistory: string[];
  notices: string[];
}

export function initialState(): UiState {
  return {
    connection: "connecting",
    features: null,
    frame: null,
    lastFrameSeq: 0,
    scripts: [],
    phaseLog: [],
    authoringBusy: false,
    promptHistory: [],
    notices: [],
  };
}

const IN_FLIGHT: AuthorPhase[] = ["enhance", "generate", "compile", "check"];
const MAX_LOG = 200;

/** Fold one server message into the state.  Mutates and returns `state`. */
export function applyMessage(state: UiState, msg: ServerMessage): UiState {
  switch (msg.type) {
    case "features":
      state.features = msg;
      break;
    case "frame":
      // only ever move forward; late frames are stale by definition
      if (msg.frame_seq > state.lastFrameSeq) {
        state.frame = msg;
        state.lastFrameSeq = msg.frame_seq;
      }
      break;
    case "script_list":
      state.scripts = msg.records;
      break;
    case "author_status":
      state.phaseLog.push({ phase: msg.phase, detail: msg.detail });
      if (state.phaseLog.length > MAX_LOG) {
        state.phaseLog.splice(0, state.phaseLog.length - MAX_LOG);
      }
      if (msg.phase === "failed" && msg.detail === "busy") {
        // a rejected submission; the in-flight authoring is still running
        state.notices.push("engine is busy with another authoring request");
      } else {
        state.authoringBusy = IN_FLIGHT.includes(msg.phase);
        if (msg.phase === "failed") {
          state.notices.push(`authoring failed: ${msg.detail}`);
        }
      }
      break;
    case "diagnostics": {
      const where = msg.title ? ` in ${msg.title}` : "";
      for (const item of msg.items) {
        state.notices.push(
          `${item.severity} ${item.code}${where} at ${item.line}:${item.col}: ${item.message}`,
        );
      }
      break;
    }
    case "protocol_error":
      state.notices.push(`protocol error: ${msg.detail}`);
      break;
  }
  if (state.notices.length > MAX_LOG) {
    state.notices.splice(0, state.notices.length - MAX_LOG);
  }
  return state;
}
