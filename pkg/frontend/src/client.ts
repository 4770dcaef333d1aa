/**
 * Gateway socket client. Works in the browser (native WebSocket) and under
 * node tests (inject the `ws` implementation). Outbound events queue FIFO
 * until the socket opens; the sender's own plain messages render
 * optimistically, everything else arrives as broadcast actions.
 */

import type { Action, ChatEvent, ClientMessage, EventKind, Snapshot } from "./protocol.js";
import { parseServerMessage } from "./protocol.js";
import { applyAction, applySnapshot, emptyState, type ViewState } from "./state.js";

type SocketLike = {
  send(data: string): void;
  close(): void;
  addEventListener(type: string, listener: (event: { data?: unknown }) => void): void;
};

export type SocketFactory = (url: string) => SocketLike;

const MESSAGE_KINDS: EventKind[] = ["dm_message", "channel_message", "mention"];

export class GatewayClient {
  state: ViewState;
  onChange: (state: ViewState) => void = () => {};
  private socket: SocketLike | null = null;
  private queue: string[] = [];
  private open = false;
  private counter = 0;

  constructor(
    public user: string,
    private url: string,
    private socketFactory: SocketFactory = (u) =>
      new WebSocket(u) as unknown as SocketLike
  ) {
    this.state = emptyState(user);
  }

  connect(): Promise<void> {
    return new Promise((resolve, reject) => {
      const socket = this.socketFactory(this.url);
      this.socket = socket;
      socket.addEventListener("open", () => {
        this.open = true;
        for (const frame of this.queue.splice(0)) socket.send(frame);
        resolve();
      });
      socket.addEventListener("error", () => reject(new Error("socket error")));
      socket.addEventListener("message", (event) => {
        this.handleFrame(String(event.data));
      });
      socket.addEventListener("close", () => {
        this.open = false;
      });
    });
  }

  disconnect(): void {
    this.socket?.close();
    this.socket = null;
    this.open = false;
  }

  /** Drop local state and rebuild the durable view from a fresh snapshot. */
  async reconnect(): Promise<void> {
    this.disconnect();
    this.state = emptyState(this.user);
    await this.connect();
    this.requestSnapshot();
  }

  private sendFrame(message: ClientMessage): void {
    const frame = JSON.stringify(message);
    if (this.open && this.socket) {
      this.socket.send(frame);
    } else {
      this.queue.push(frame);
    }
  }

  requestSnapshot(): void {
    this.sendFrame({ type: "snapshot_request" });
  }

  nextEventId(): string {
    this.counter += 1;
    return `ui-${this.user}-${this.counter}-${Math.random().toString(36).slice(2, 8)}`;
  }

  sendEvent(
    kind: EventKind,
    conversation: string,
    text = "",
    payload: Record<string, unknown> = {}
  ): ChatEvent {
    const event: ChatEvent = {
      event_id: this.nextEventId(),
      kind,
      conversation,
      author: this.user,
      text,
      payload,
      ts: new Date().toISOString(),
    };
    if (MESSAGE_KINDS.includes(kind)) {
      // Optimistic rendering of the sender's own plain message.
      if (!(conversation in this.state.conversations)) {
        this.state.conversations[conversation] = [];
      }
      this.state.conversations[conversation].push({
        author: this.user,
        text,
        ts: event.ts,
        bot: false,
      });
      this.onChange(this.state);
    }
    this.sendFrame({ type: "event", event });
    return event;
  }

  private handleFrame(raw: string): void {
    const message = parseServerMessage(raw);
    if (message.type === "action") {
      this.receiveAction(message.action);
    } else if (message.type === "snapshot") {
      this.receiveSnapshot(message);
    }
    this.onChange(this.state);
  }

  receiveAction(action: Action): void {
    applyAction(this.state, action);
  }

  receiveSnapshot(snapshot: Snapshot): void {
    applySnapshot(this.state, snapshot);
  }
}
