import { describe, expect, it } from "vitest";

import type { ServerMessage } from "../src/protocol";
import { applyMessage, initialState } from "../src/state";

function frame(seq: number, titles: string[] = []): ServerMessage {
  return {
    type: "frame",
    frame_seq: seq,
    t_ms: seq * 33.3,
    scripts: titles.map((title) => ({ title, commands: [] })),
  };
}

describe("state reducer", () => {
  it("keeps only the newest frame", () => {
    const state = initialState();
    applyMessage(state, frame(1, ["a"]));
    applyMessage(state, frame(2, ["b"]));
    expect(state.frame?.scripts[0].title).toBe("b");
    expect(state.lastFrameSeq).toBe(2);
  });

  it("discards out-of-order frames", () => {
    const state = initialState();
    applyMessage(state, frame(5, ["current"]));
    applyMessage(state, frame(3, ["stale"]));
    expect(state.frame?.scripts[0].title).toBe("current");
    expect(state.lastFrameSeq).toBe(5);
  });

  it("reflects a drawUI toggle as soon as the next frame arrives", () => {
    const state = initialState();
    applyMessage(state, frame(10, ["Volume Bar", "a wave"]));
    // server confirms the toggle by omitting the script from the next frame
    applyMessage(state, frame(11, ["a wave"]));
    const titles = state.frame!.scripts.map((s) => s.title);
    expect(titles).toEqual(["a wave"]);
  });

  it("tracks authoring busy through the phase log", () => {
    const state = initialState();
    for (const phase of ["enhance", "generate", "compile"] as const) {
      applyMessage(state, { type: "author_status", phase, detail: "" });
      expect(state.authoringBusy).toBe(true);
    }
    applyMessage(state, { type: "author_status", phase: "done", detail: "a wave" });
    expect(state.authoringBusy).toBe(false);
    expect(state.phaseLog.map((e) => e.phase)).toEqual([
      "enhance",
      "generate",
      "compile",
      "done",
    ]);
  });

  it("surfaces a busy rejection without ending the in-flight authoring", () => {
    const state = initialState();
    applyMessage(state, { type: "author_status", phase: "generate", detail: "" });
    applyMessage(state, { type: "author_status", phase: "failed", detail: "busy" });
    expect(state.authoringBusy).toBe(true); // the first request is still running
    expect(state.notices.at(-1)).toMatch(/busy/);
  });

  it("records failures and diagnostics as notices", () => {
    const state = initialState();
    applyMessage(state, { type: "author_status", phase: "failed", detail: "no fixture" });
    applyMessage(state, {
      type: "diagnostics",
      title: "a wave",
      items: [{ severity: "error", code: "E_BUDGET", line: 6, col: 3, message: "boom" }],
    });
    applyMessage(state, { type: "protocol_error", detail: "bad payload" });
    expect(state.notices).toHaveLength(3);
    expect(state.notices[1]).toContain("E_BUDGET");
    expect(state.notices[1]).toContain("a wave");
  });

  it("replaces the script list wholesale", () => {
    const state = initialState();
    applyMessage(state, {
      type: "script_list",
      records: [{ userPrompt: "a wave", scriptContent: "...", drawUI: true }],
    });
    applyMessage(state, {
      type: "script_list",
      records: [{ userPrompt: "a bar", scriptContent: "...", drawUI: false }],
    });
    expect(state.scripts).toHaveLength(1);
    expect(state.scripts[0].userPrompt).toBe("a bar");
  });

  it("stores the latest features", () => {
    const state = initialState();
    applyMessage(state, {
      type: "features",
      seq: 4,
      t_ms: 400,
      dominant_hz: 440,
      norm: 5.16,
      rms: 0.7,
    });
    expect(state.features?.dominant_hz).toBe(440);
  });
});
