/**
 * WebSocket client for the engine: parses incoming messages into the
 * state reducer and exposes typed send helpers.  The socket is injected
 * through a factory so tests can script a fake server.
 */

import {
  authorMessage,
  encodeClientMessage,
  listScriptsMessage,
  parseServerMessage,
  setDrawUiMessage,
  type ClientMessage,
} from "./protocol.js";
import { applyMessage, initialState, type UiState } from "./state.js";

/** The subset of the WebSocket API the client uses. */
export interface SocketLike {
  send(payload: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((event: { data: string }) => void) | null;
  onclose: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface EngineClientOptions {
  url: string;
  socketFactory: SocketFactory;
  onChange?: (state: UiState) => void;
  reconnectDelayMs?: number;
  /** injectable for tests; defaults to setTimeout */
  schedule?: (fn: () => void, ms: number) => void;
}

export class EngineClient {
  readonly state: UiState = initialState();
  sent: ClientMessage[] = [];
  private socket: SocketLike | null = null;
  private readonly opts: EngineClientOptions;
  private stopped = false;

  constructor(opts: EngineClientOptions) {
    this.opts = opts;
  }

  connect(): void {
    this.state.connection = "connecting";
    const socket = this.opts.socketFactory(this.opts.url);
    this.socket = socket;
    socket.onopen = () => {
      this.state.connection = "open";
      // a (re)connect always restores the script list from the server
      this.send(listScriptsMessage());
      this.changed();
    };
    socket.onmessage = (event) => {
      try {
        applyMessage(this.state, parseServerMessage(event.data));
      } catch (err) {
        this.state.notices.push(String(err));
      }
      this.changed();
    };
    socket.onclose = () => {
      this.state.connection = "closed";
      this.changed();
      if (!this.stopped) {
        const delay = this.opts.reconnectDelayMs ?? 2000;
        (this.opts.schedule ?? setTimeout)(() => this.connect(), delay);
      }
    };
  }

  stop(): void {
    this.stopped = true;
    this.socket?.close();
  }

  submitPrompt(prompt: string): void {
    const text = prompt.trim();
    if (!text || this.state.authoringBusy) {
      return;
    }
    this.state.promptHistory.push(text);
    this.state.authoringBusy = true; // optimistic; status messages confirm
    this.send(authorMessage(text));
    this.changed();
  }

  toggleDrawUi(title: string, value: boolean): void {
    this.send(setDrawUiMessage(title, value));
  }

  requestScripts(): void {
    this.send(listScriptsMessage());
  }

  private send(msg: ClientMessage): void {
    this.sent.push(msg);
    this.socket?.send(encodeClientMessage(msg));
  }

  private changed(): void {
    this.opts.onChange?.(this.state);
  }
}
