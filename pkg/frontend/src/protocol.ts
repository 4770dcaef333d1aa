/** Gateway socket protocol: message shapes shared with the Python service. */

export type EventKind =
  | "dm_message"
  | "channel_message"
  | "mention"
  | "button_click"
  | "modal_submit";

export type ActionKind =
  | "post_message"
  | "post_thread_reply"
  | "post_ephemeral"
  | "open_modal"
  | "dm_user"
  | "create_group_conversation";

export interface ChatEvent {
  event_id: string;
  kind: EventKind;
  conversation: string;
  author: string;
  text: string;
  payload: Record<string, unknown>;
  ts: string;
}

export interface Action {
  kind: ActionKind;
  target: string;
  payload: Record<string, unknown>;
}

export interface RosterEntry {
  id: string;
  name: string;
  role: "manager" | "member";
}

export interface LoggedMessage {
  author: string;
  text: string;
  ts: string;
  bot: boolean;
  payload?: Record<string, unknown>;
}

export interface Snapshot {
  type: "snapshot";
  channels: string[];
  messages: Record<string, LoggedMessage[]>;
  repo_files: { path: string; body: string }[];
  roster: RosterEntry[];
  qa_channel: string;
  bot_id: string;
  bot_handle: string;
  group_members: Record<string, string[]>;
  revision: number;
}

export type ServerMessage =
  | { type: "action"; action: Action }
  | Snapshot
  | { type: "error"; error: string };

export type ClientMessage =
  | { type: "event"; event: ChatEvent }
  | { type: "snapshot_request" };

export interface Reference {
  chunk_id: string;
  anchor: string;
  snippet: string;
  score: number;
}

export interface DiffSegment {
  op: "equal" | "insert" | "delete";
  text: string;
}

export function parseServerMessage(raw: string): ServerMessage {
  const data = JSON.parse(raw) as ServerMessage;
  if (data.type !== "action" && data.type !== "snapshot" && data.type !== "error") {
    throw new Error(`unknown server message type: ${(data as { type: string }).type}`);
  }
  return data;
}
