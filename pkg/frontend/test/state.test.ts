import { describe, expect, it } from "vitest";

import type { Action, Snapshot } from "../src/protocol.js";
import {
  applyAction,
  applySnapshot,
  durableProjection,
  emptyState,
  isManager,
  visibleConversations,
} from "../src/state.js";

const SNAPSHOT: Snapshot = {
  type: "snapshot",
  channels: ["general", "qna"],
  messages: {
    general: [
      { author: "bob", text: "hello", ts: "t1", bot: false },
      {
        author: "bot",
        text: "answer text",
        ts: "t2",
        bot: true,
        payload: { kind: "answer", answered: true, text: "answer text" },
      },
    ],
    "dm-dana": [
      {
        author: "bot",
        text: "",
        ts: "t3",
        bot: true,
        payload: { kind: "review_card", session_id: "s1", suggestion: "x", buttons: [] },
      },
    ],
  },
  repo_files: [{ path: "handbook.md", body: "# H\n" }],
  roster: [
    { id: "dana", name: "Dana Kim", role: "manager" },
    { id: "alice", name: "Alice Park", role: "member" },
  ],
  qa_channel: "qna",
  bot_id: "bot",
  bot_handle: "@bot",
  group_members: { "group-ex-1": ["bot", "dana"] },
  revision: 0,
};

describe("applySnapshot", () => {
  it("rebuilds conversations and defaults the open conversation", () => {
    const state = applySnapshot(emptyState("alice"), SNAPSHOT);
    expect(state.openConversation).toBe("qna");
    expect(state.conversations.general).toHaveLength(2);
    expect(state.repoFiles[0].path).toBe("handbook.md");
  });

  it("managers get review cards from their DM history; members never do", () => {
    const dana = applySnapshot(emptyState("dana"), SNAPSHOT);
    expect(isManager(dana)).toBe(true);
    expect(dana.reviewQueue).toHaveLength(1);

    const alice = applySnapshot(emptyState("alice"), SNAPSHOT);
    expect(isManager(alice)).toBe(false);
    expect(alice.reviewQueue).toHaveLength(0);
  });
});

describe("applyAction", () => {
  it("ephemeral items render only for their target user", () => {
    const banner: Action = {
      kind: "post_ephemeral",
      target: "alice",
      payload: { kind: "share_banner", conversation: "dm-alice", text: "share?" },
    };
    const alice = applyAction(applySnapshot(emptyState("alice"), SNAPSHOT), banner);
    expect(alice.conversations["dm-alice"].some((i) => i.ephemeral)).toBe(true);

    const bobView = applyAction(applySnapshot(emptyState("bob"), SNAPSHOT), banner);
    expect(bobView.conversations["dm-alice"] ?? []).toHaveLength(0);
  });

  it("open_modal lands only in the target user's pending modals", () => {
    const modal: Action = {
      kind: "open_modal",
      target: "alice",
      payload: { modal: "share", exchange_id: "ex-1", mode: "to_channel" },
    };
    expect(applyAction(emptyState("alice"), modal).pendingModals).toHaveLength(1);
    expect(applyAction(emptyState("dana"), modal).pendingModals).toHaveLength(0);
  });

  it("dm review cards enqueue for the receiving manager only", () => {
    const card: Action = {
      kind: "dm_user",
      target: "dana",
      payload: { kind: "review_card", session_id: "s2", suggestion: "y", buttons: [] },
    };
    const dana = applyAction(applySnapshot(emptyState("dana"), SNAPSHOT), card);
    expect(dana.reviewQueue.map((c) => c["session_id"])).toContain("s2");

    const alice = applyAction(applySnapshot(emptyState("alice"), SNAPSHOT), card);
    expect(alice.reviewQueue).toHaveLength(0);
  });

  it("group conversations become visible to their members only", () => {
    const create: Action = {
      kind: "create_group_conversation",
      target: "group-ex-9",
      payload: { kind: "group", members: ["bot", "dana"] },
    };
    const dana = applyAction(applySnapshot(emptyState("dana"), SNAPSHOT), create);
    expect(visibleConversations(dana)).toContain("group-ex-9");

    const alice = applyAction(applySnapshot(emptyState("alice"), SNAPSHOT), create);
    expect(visibleConversations(alice)).not.toContain("group-ex-9");
  });

  it("thread replies are marked for indented rendering", () => {
    const reply: Action = {
      kind: "post_thread_reply",
      target: "general",
      payload: { kind: "evidence", references: [] },
    };
    const state = applyAction(applySnapshot(emptyState("alice"), SNAPSHOT), reply);
    expect(state.conversations.general.at(-1)?.thread).toBe(true);
  });
});

describe("durableProjection", () => {
  it("action-accumulated state equals snapshot-rebuilt state", () => {
    // Live: start from snapshot, receive two actions that the server also logs.
    const live = applySnapshot(emptyState("alice"), SNAPSHOT);
    const answer: Action = {
      kind: "post_message",
      target: "general",
      payload: { kind: "answer", answered: true, text: "fresh answer" },
    };
    const banner: Action = {
      kind: "post_ephemeral",
      target: "alice",
      payload: { kind: "share_banner", conversation: "general", text: "share?" },
    };
    applyAction(live, answer);
    applyAction(live, banner);

    // Reconnect: the server's log now includes the logged (non-ephemeral) action.
    const snapshotAfter: Snapshot = JSON.parse(JSON.stringify(SNAPSHOT));
    snapshotAfter.messages.general.push({
      author: "bot",
      text: "fresh answer",
      ts: "t4",
      bot: true,
      payload: { kind: "answer", answered: true, text: "fresh answer" },
    });
    const fresh = applySnapshot(emptyState("alice"), snapshotAfter);
    expect(durableProjection(fresh)).toEqual(durableProjection(live));
  });
});
