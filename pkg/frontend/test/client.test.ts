import { describe, expect, it } from "vitest";

import { EngineClient, type SocketLike } from "../src/client";
import type { ServerMessage } from "../src/protocol";

/** A fake socket wired to a scripted server. */
class MockSocket implements SocketLike {
  onopen: (() => void) | null = null;
  onmessage: ((event: { data: string }) => void) | null = null;
  onclose: (() => void) | null = null;
  sentPayloads: string[] = [];

  constructor(private script: (msg: { type: string; [k: string]: unknown }, socket: MockSocket) => void) {}

  open() {
    this.onopen?.();
  }

  send(payload: string) {
    this.sentPayloads.push(payload);
    this.script(JSON.parse(payload), this);
  }

  reply(msg: ServerMessage) {
    this.onmessage?.({ data: JSON.stringify(msg) });
  }

  close() {
    this.onclose?.();
  }

  sentMessages() {
    return this.sentPayloads.map((p) => JSON.parse(p));
  }
}

const RECORDS = [{ userPrompt: "a wave", scriptContent: 'title "a wave"', drawUI: true }];

function scriptedServer(msg: { type: string; prompt?: unknown }, socket: MockSocket) {
  if (msg.type === "list_scripts") {
    socket.reply({ type: "script_list", records: RECORDS });
  } else if (msg.type === "author") {
    // the engine walks the pipeline and reports each phase in order
    socket.reply({ type: "author_status", phase: "enhance", detail: String(msg.prompt) });
    socket.reply({ type: "author_status", phase: "generate", detail: "" });
    socket.reply({ type: "author_status", phase: "compile", detail: "" });
    socket.reply({ type: "author_status", phase: "check", detail: "repair iteration 1" });
    socket.reply({ type: "author_status", phase: "compile", detail: "" });
    socket.reply({ type: "author_status", phase: "done", detail: String(msg.prompt) });
    socket.reply({ type: "script_list", records: RECORDS });
  }
}

function connectedClient() {
  let socket!: MockSocket;
  const client = new EngineClient({
    url: "ws://test/stream",
    socketFactory: () => {
      socket = new MockSocket(scriptedServer);
      return socket;
    },
  });
  client.connect();
  socket.open();
  return { client, socket };
}

describe("EngineClient against a scripted server", () => {
  it("restores the script list on connect", () => {
    const { client, socket } = connectedClient();
    expect(socket.sentMessages()).toEqual([{ type: "list_scripts" }]);
    expect(client.state.scripts).toEqual(RECORDS);
    expect(client.state.connection).toBe("open");
  });

  it("submits the exact author message and logs phases in order", () => {
    const { client, socket } = connectedClient();
    client.submitPrompt("  a wave  ");
    const sent = socket.sentMessages();
    expect(sent[1]).toEqual({ type: "author", prompt: "a wave" });
    expect(client.state.phaseLog.map((e) => e.phase)).toEqual([
      "enhance",
      "generate",
      "compile",
      "check",
      "compile",
      "done",
    ]);
    expect(client.state.authoringBusy).toBe(false);
    expect(client.state.promptHistory).toEqual(["a wave"]);
  });

  it("blocks prompt submission while authoring is in flight", () => {
    let socket!: MockSocket;
    const client = new EngineClient({
      url: "ws://test/stream",
      socketFactory: () => {
        // a server that never finishes the pipeline
        socket = new MockSocket((msg, s) => {
          if (msg.type === "author") {
            s.reply({ type: "author_status", phase: "enhance", detail: "" });
          }
        });
        return socket;
      },
    });
    client.connect();
    socket.open();
    client.submitPrompt("first");
    client.submitPrompt("second"); // swallowed: still busy
    const authors = socket.sentMessages().filter((m) => m.type === "author");
    expect(authors).toEqual([{ type: "author", prompt: "first" }]);
  });

  it("ignores empty prompts", () => {
    const { client, socket } = connectedClient();
    client.submitPrompt("   ");
    expect(socket.sentMessages().filter((m) => m.type === "author")).toEqual([]);
  });

  it("sends drawUI toggles for the right title", () => {
    const { client, socket } = connectedClient();
    client.toggleDrawUi("a wave", false);
    expect(socket.sentMessages()[1]).toEqual({
      type: "set_draw_ui",
      title: "a wave",
      value: false,
    });
  });

  it("reconnects after close and re-requests the script list", () => {
    const sockets: MockSocket[] = [];
    const scheduled: (() => void)[] = [];
    const client = new EngineClient({
      url: "ws://test/stream",
      socketFactory: () => {
        const socket = new MockSocket(scriptedServer);
        sockets.push(socket);
        return socket;
      },
      schedule: (fn) => scheduled.push(fn),
    });
    client.connect();
    sockets[0].open();
    sockets[0].close(); // connection drops
    expect(client.state.connection).toBe("closed");
    expect(scheduled).toHaveLength(1);
    scheduled[0](); // the reconnect timer fires
    sockets[1].open();
    expect(client.state.connection).toBe("open");
    const listRequests = sockets.flatMap((s) =>
      s.sentMessages().filter((m) => m.type === "list_scripts"),
    );
    expect(listRequests).toHaveLength(2);
  });

  it("keeps malformed server payloads as notices", () => {
    const { client, socket } = connectedClient();
    socket.onmessage?.({ data: "{broken" });
    socket.onmessage?.({ data: '{"type":"mystery"}' });
    expect(client.state.notices).toHaveLength(2);
  });
});
