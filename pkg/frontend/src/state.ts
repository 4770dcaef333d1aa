/**
 * Client view state: a pure reduction of snapshot + action stream.
 *
 * The client holds no business state. Conversations, messages, and repo
 * files come from the gateway; ephemeral items and modals are transient
 * and render only for their target user; manager review cards only ever
 * reach manager users.
 */

import type {
  Action,
  LoggedMessage,
  RosterEntry,
  Snapshot,
} from "./protocol.js";

export interface TimelineItem {
  author: string;
  text: string;
  ts: string;
  bot: boolean;
  payload?: Record<string, unknown>;
  ephemeral?: boolean;
  thread?: boolean;
}

export interface ViewState {
  currentUser: string;
  roster: RosterEntry[];
  botId: string;
  botHandle: string;
  qaChannel: string;
  channels: string[];
  conversations: Record<string, TimelineItem[]>;
  groupMembers: Record<string, string[]>;
  repoFiles: { path: string; body: string }[];
  revision: number;
  openConversation: string;
  pendingModals: Record<string, unknown>[];
  reviewQueue: Record<string, unknown>[];
}

const REVIEW_CARD_KINDS = new Set(["review_card", "proposal_card", "file_picker"]);

export function emptyState(currentUser: string): ViewState {
  return {
    currentUser,
    roster: [],
    botId: "bot",
    botHandle: "@bot",
    qaChannel: "",
    channels: [],
    conversations: {},
    groupMembers: {},
    repoFiles: [],
    revision: 0,
    openConversation: "",
    pendingModals: [],
    reviewQueue: [],
  };
}

export function isManager(state: ViewState): boolean {
  const entry = state.roster.find((r) => r.id === state.currentUser);
  return entry !== undefined && entry.role === "manager";
}

function timeline(state: ViewState, conversation: string): TimelineItem[] {
  if (!(conversation in state.conversations)) {
    state.conversations[conversation] = [];
  }
  return state.conversations[conversation];
}

function fromLogged(message: LoggedMessage): TimelineItem {
  const item: TimelineItem = {
    author: message.author,
    text: message.text,
    ts: message.ts,
    bot: message.bot,
  };
  if (message.payload) {
    item.payload = message.payload;
    const kind = message.payload["kind"];
    if (kind === "evidence") item.thread = true;
  }
  return item;
}

/** Rebuild the durable view from a snapshot (connect or reconnect). */
export function applySnapshot(state: ViewState, snapshot: Snapshot): ViewState {
  state.roster = snapshot.roster;
  state.botId = snapshot.bot_id;
  state.botHandle = snapshot.bot_handle;
  state.qaChannel = snapshot.qa_channel;
  state.channels = snapshot.channels;
  state.groupMembers = snapshot.group_members;
  state.repoFiles = snapshot.repo_files;
  state.revision = snapshot.revision;
  state.conversations = {};
  for (const [conversation, messages] of Object.entries(snapshot.messages)) {
    state.conversations[conversation] = messages.map(fromLogged);
  }
  // Review cards are derived from the manager's own DM history.
  state.reviewQueue = [];
  if (isManager(state)) {
    const dm = state.conversations[`dm-${state.currentUser}`] ?? [];
    for (const item of dm) {
      const kind = item.payload?.["kind"];
      if (typeof kind === "string" && REVIEW_CARD_KINDS.has(kind)) {
        state.reviewQueue.push(item.payload as Record<string, unknown>);
      }
    }
  }
  if (!state.openConversation) {
    state.openConversation = state.qaChannel || state.channels[0] || "";
  }
  return state;
}

/** Fold one broadcast action into the view. */
export function applyAction(state: ViewState, action: Action): ViewState {
  const payload = action.payload;
  switch (action.kind) {
    case "post_message":
      timeline(state, action.target).push({
        author: state.botId,
        text: String(payload["text"] ?? ""),
        ts: "",
        bot: true,
        payload,
      });
      break;
    case "post_thread_reply":
      timeline(state, action.target).push({
        author: state.botId,
        text: String(payload["text"] ?? ""),
        ts: "",
        bot: true,
        payload,
        thread: true,
      });
      break;
    case "post_ephemeral":
      if (action.target === state.currentUser) {
        const conversation = String(payload["conversation"] ?? state.openConversation);
        timeline(state, conversation).push({
          author: state.botId,
          text: String(payload["text"] ?? ""),
          ts: "",
          bot: true,
          payload,
          ephemeral: true,
        });
      }
      break;
    case "open_modal":
      if (action.target === state.currentUser) {
        state.pendingModals.push(payload);
      }
      break;
    case "dm_user": {
      const conversation = `dm-${action.target}`;
      timeline(state, conversation).push({
        author: state.botId,
        text: String(payload["text"] ?? ""),
        ts: "",
        bot: true,
        payload,
      });
      const kind = payload["kind"];
      if (
        action.target === state.currentUser &&
        isManager(state) &&
        typeof kind === "string" &&
        REVIEW_CARD_KINDS.has(kind)
      ) {
        state.reviewQueue.push(payload);
      }
      break;
    }
    case "create_group_conversation":
      state.groupMembers[action.target] = (payload["members"] as string[]) ?? [];
      timeline(state, action.target);
      break;
  }
  return state;
}

/** A user sees channels, their own DMs, and groups they belong to. */
export function visibleConversations(state: ViewState): string[] {
  const names = new Set<string>(state.channels);
  for (const name of Object.keys(state.conversations)) {
    if (name.startsWith("dm-")) {
      if (name === `dm-${state.currentUser}`) names.add(name);
    } else if (name in state.groupMembers) {
      if (state.groupMembers[name].includes(state.currentUser)) names.add(name);
    } else {
      names.add(name);
    }
  }
  for (const [name, members] of Object.entries(state.groupMembers)) {
    if (members.includes(state.currentUser)) names.add(name);
  }
  return [...names].sort();
}

/**
 * Items the current user may see in one conversation. Ephemeral items are
 * already filtered at apply time (only the target user's state holds them).
 */
export function visibleTimeline(state: ViewState, conversation: string): TimelineItem[] {
  return state.conversations[conversation] ?? [];
}

/**
 * Durable projection used to verify that reconnect + snapshot rebuilds the
 * same view. Transient items (ephemerals, open modals) are excluded: they
 * are addressed to one user once and are not part of the durable view.
 * Repo files come from snapshots on both sides, so they are compared
 * separately by the caller.
 */
export function durableProjection(state: ViewState): Record<string, unknown> {
  const conversations: Record<string, unknown[]> = {};
  for (const [name, items] of Object.entries(state.conversations)) {
    conversations[name] = items
      .filter((item) => !item.ephemeral)
      .map((item) => ({
        author: item.author,
        text: item.text,
        bot: item.bot,
        payload: item.payload ?? null,
      }));
  }
  return {
    conversations,
    groupMembers: state.groupMembers,
  };
}
