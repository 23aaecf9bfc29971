/**
 * DOM wiring for the authoring console.  All behavior lives in the
 * testable modules (protocol/state/render/client); this file only binds
 * them to elements.
 */

import { EngineClient } from "./client.js";
import { renderFrame } from "./render.js";
import type { UiState } from "./state.js";

const canvas = document.getElementById("scene") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const promptInput = document.getElementById("prompt") as HTMLInputElement;
const promptForm = document.getElementById("prompt-form") as HTMLFormElement;
const phaseLog = document.getElementById("phase-log") as HTMLUListElement;
const scriptList = document.getElementById("script-list") as HTMLUListElement;
const meterFill = document.getElementById("meter-fill") as HTMLDivElement;
const meterLabel = document.getElementById("meter-label") as HTMLSpanElement;
const connectionBadge = document.getElementById("connection") as HTMLSpanElement;
const noticesBox = document.getElementById("notices") as HTMLUListElement;

function resizeCanvas() {
  canvas.width = canvas.clientWidth;
  canvas.height = canvas.clientHeight;
}
resizeCanvas();
window.addEventListener("resize", resizeCanvas);

const client = new EngineClient({
  url: `ws://${location.host}/stream`,
  socketFactory: (url) => {
    const ws = new WebSocket(url);
    const adapter: import("./client.js").SocketLike = {
      send: (payload) => ws.send(payload),
      close: () => ws.close(),
      onopen: null,
      onmessage: null,
      onclose: null,
    };
    ws.onopen = () => adapter.onopen?.();
    ws.onmessage = (event) => adapter.onmessage?.({ data: String(event.data) });
    ws.onclose = () => adapter.onclose?.();
    return adapter;
  },
  onChange: refresh,
});

promptForm.addEventListener("submit", (event) => {
  event.preventDefault();
  client.submitPrompt(promptInput.value);
  promptInput.value = "";
});

function refresh(state: UiState) {
  connectionBadge.textContent = state.connection;
  connectionBadge.className = `badge ${state.connection}`;
  promptInput.disabled = state.authoringBusy || state.connection !== "open";
  promptInput.placeholder = state.authoringBusy
    ? "authoring in progress..."
    : 'describe a visualization, e.g. "a wave"';

  if (state.frame) {
    renderFrame(ctx, { width: canvas.width, height: canvas.height }, state.frame);
  } else {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
  }

  if (state.features) {
    const norm = state.features.norm;
    meterFill.style.width = `${(norm / 10) * 100}%`;
    meterLabel.textContent = state.features.dominant_hz
      ? `${state.features.dominant_hz.toFixed(0)} Hz (${norm.toFixed(2)})`
      : "silence";
  }

  phaseLog.replaceChildren(
    ...state.phaseLog.slice(-12).map((entry) => {
      const li = document.createElement("li");
      li.textContent = entry.detail ? `${entry.phase}: ${entry.detail}` : entry.phase;
      li.className = `phase-${entry.phase}`;
      return li;
    }),
  );

  scriptList.replaceChildren(
    ...state.scripts.map((record) => {
      const li = document.createElement("li");
      const checkbox = document.createElement("input");
      checkbox.type = "checkbox";
      checkbox.checked = record.drawUI;
      checkbox.addEventListener("change", () =>
        client.toggleDrawUi(record.userPrompt, checkbox.checked),
      );
      const label = document.createElement("label");
      label.append(checkbox, document.createTextNode(` ${record.userPrompt}`));
      li.append(label);
      return li;
    }),
  );

  noticesBox.replaceChildren(
    ...state.notices.slice(-5).map((notice) => {
      const li = document.createElement("li");
      li.textContent = notice;
      return li;
    }),
  );
}

client.connect();
