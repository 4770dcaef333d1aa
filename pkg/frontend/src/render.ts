/**
 * Pure renderers: payloads in, HTML strings out. No DOM access here so the
 * same functions run in the browser shell and under vitest.
 *
 * Diff styling: insertions render bold, removals render struck through.
 */

import type { DiffSegment, Reference } from "./protocol.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderDiff(segments: DiffSegment[]): string {
  return segments
    .map((segment) => {
      const text = escapeHtml(segment.text);
      if (segment.op === "insert") return `<strong class="diff-ins">${text}</strong>`;
      if (segment.op === "delete") return `<s class="diff-del">${text}</s>`;
      return `<span class="diff-eq">${text}</span>`;
    })
    .join(" ");
}

export function renderAnswer(payload: Record<string, unknown>): string {
  const answered = payload["answered"] !== false;
  const cls = answered ? "answer" : "answer abstain";
  return `<div class="${cls}">${escapeHtml(String(payload["text"] ?? ""))}</div>`;
}

export function renderEvidence(payload: Record<string, unknown>): string {
  const references = (payload["references"] ?? []) as Reference[];
  const rows = references.map(
    (ref, i) =>
      `<li class="reference">` +
      `<span class="ref-label">Reference ${i + 1}</span> ` +
      `<a class="ref-anchor" href="#repo:${escapeHtml(ref.anchor)}">${escapeHtml(ref.anchor)}</a>` +
      `<blockquote class="ref-snippet">${escapeHtml(ref.snippet)}</blockquote>` +
      `<span class="ref-score">score ${ref.score.toFixed(3)}</span></li>`
  );
  return `<ul class="evidence">${rows.join("")}</ul>`;
}

export function renderSharedPost(payload: Record<string, unknown>): string {
  const label = escapeHtml(String(payload["author_label"] ?? ""));
  const icon = escapeHtml(String(payload["author_icon"] ?? "avatar:anonymous"));
  const body = escapeHtml(String(payload["text"] ?? ""));
  return (
    `<div class="shared-post">` +
    `<span class="avatar" data-icon="${icon}"></span>` +
    `<span class="author">${label}</span>` +
    `<pre class="post-body">${body}</pre></div>`
  );
}

export function renderButtons(payload: Record<string, unknown>): string {
  const buttons = (payload["buttons"] ?? []) as Record<string, unknown>[];
  return buttons
    .map(
      (button) =>
        `<button class="action-btn" data-payload='${escapeHtml(JSON.stringify(button))}'>` +
        `${escapeHtml(String(button["label"] ?? button["action"]))}</button>`
    )
    .join(" ");
}

export function renderDraftCard(payload: Record<string, unknown>): string {
  return (
    `<div class="draft-card"><h4>Suggested Update</h4>` +
    `<pre class="draft-text">${escapeHtml(String(payload["text"] ?? ""))}</pre>` +
    renderButtons(payload) +
    `</div>`
  );
}

export function renderReviewCard(payload: Record<string, unknown>): string {
  const kind = payload["kind"];
  if (kind === "review_card") {
    const contributor = escapeHtml(String(payload["contributor"] ?? ""));
    const state = escapeHtml(String(payload["state"] ?? "pending"));
    return (
      `<div class="review-card" data-state="${state}">` +
      `<h4>Documentation suggestion</h4>` +
      (contributor ? `<span class="contributor">${contributor}</span>` : "") +
      `<pre class="suggestion">${escapeHtml(String(payload["suggestion"] ?? ""))}</pre>` +
      renderButtons(payload) +
      `</div>`
    );
  }
  if (kind === "file_picker") {
    const files = (payload["files"] ?? []) as string[];
    return (
      `<div class="file-picker"><h4>Select a file to update</h4>` +
      `<ul>${files.map((f) => `<li>${escapeHtml(f)}</li>`).join("")}</ul>` +
      renderButtons(payload) +
      `</div>`
    );
  }
  // proposal_card
  const segments = (payload["segments"] ?? []) as DiffSegment[];
  const headingPath = (payload["heading_path"] ?? []) as string[];
  const index = Number(payload["index"] ?? 0) + 1;
  const total = Number(payload["total"] ?? 1);
  return (
    `<div class="proposal-card">` +
    `<h4>Proposal ${index}/${total}: ${escapeHtml(String(payload["path"] ?? ""))}</h4>` +
    (headingPath.length
      ? `<span class="section">${escapeHtml(headingPath.join(" > "))}</span>`
      : "") +
    `<div class="diff">${renderDiff(segments)}</div>` +
    renderButtons(payload) +
    `</div>`
  );
}

/**
 * Share modal preview. The server renders the authored and anonymous
 * variants without a comment; the comment suffix rule mirrors the server's
 * rendering exactly, so the preview equals the eventual post byte for byte.
 */
export function sharePreview(
  model: Record<string, unknown>,
  anonymous: boolean,
  comment: string
): string {
  const base = String(anonymous ? model["preview_anonymous"] : model["preview"]);
  return comment ? `${base}\n\nComment: ${comment}` : base;
}

export function renderShareModal(
  model: Record<string, unknown>,
  anonymous: boolean,
  comment: string,
  recipients: string[]
): string {
  const isPrivate = model["mode"] === "to_private";
  const preview = sharePreview(model, anonymous, comment);
  const submitDisabled = isPrivate && recipients.length === 0;
  return (
    `<div class="modal share-modal" data-mode="${escapeHtml(String(model["mode"]))}">` +
    `<h3>${isPrivate ? "Ask in Private" : "Share with Q&amp;A"}</h3>` +
    `<label>Your Comment <input name="comment" value="${escapeHtml(comment)}"></label>` +
    `<label><input type="checkbox" name="anonymous"${anonymous ? " checked" : ""}> Share anonymously</label>` +
    (isPrivate
      ? `<div class="people-picker" data-recipients="${escapeHtml(recipients.join(","))}">` +
        recipients.map((r) => `<span class="pill">${escapeHtml(r)}</span>`).join("") +
        `</div>`
      : "") +
    `<pre class="preview">${escapeHtml(preview)}</pre>` +
    `<button class="submit" ${submitDisabled ? "disabled" : ""}>` +
    `${isPrivate ? "Send" : "Post to Channel"}</button></div>`
  );
}

export function renderTimelineItem(item: {
  author: string;
  text: string;
  bot: boolean;
  payload?: Record<string, unknown>;
  ephemeral?: boolean;
  thread?: boolean;
}): string {
  const payload = item.payload ?? {};
  const kind = payload["kind"];
  let body: string;
  switch (kind) {
    case "answer":
      body = renderAnswer(payload);
      break;
    case "evidence":
      body = renderEvidence(payload);
      break;
    case "shared_exchange":
      body = renderSharedPost(payload);
      break;
    case "suggestion_draft":
      body = renderDraftCard(payload);
      break;
    case "review_card":
    case "file_picker":
    case "proposal_card":
      body = renderReviewCard(payload);
      break;
    case "share_banner":
      body =
        `<div class="banner">${escapeHtml(item.text)} ` + renderButtons(payload) + `</div>`;
      break;
    case "relay":
      body =
        `<div class="relay"><em>${escapeHtml(String(payload["note"] ?? ""))}</em>` +
        `<p>${escapeHtml(String(payload["text"] ?? ""))}</p></div>`;
      break;
    default:
      body = `<p>${escapeHtml(item.text)}</p>`;
  }
  const classes = ["message"];
  if (item.bot) classes.push("bot");
  if (item.ephemeral) classes.push("ephemeral");
  if (item.thread) classes.push("thread");
  return (
    `<div class="${classes.join(" ")}">` +
    `<span class="author">${escapeHtml(item.author)}</span>${body}</div>`
  );
}
