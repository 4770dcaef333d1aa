/**
 * Browser shell: wires the gateway client and renderers to the DOM.
 *
 * Demo-grade identity: pick a roster user at connect. One event loop, no
 * state outside the client; every user decision maps to exactly one
 * protocol event.
 */

import { GatewayClient } from "./client.js";
import {
  escapeHtml,
  renderShareModal,
  renderTimelineItem,
  sharePreview,
} from "./render.js";
import { isManager, visibleConversations, visibleTimeline } from "./state.js";

const DEFAULT_URL = `ws://${location.host.replace(/:\d+$/, "")}:8777/ws`;

interface ModalForm {
  model: Record<string, unknown>;
  anonymous: boolean;
  comment: string;
  recipients: string[];
  heading?: string;
  text?: string;
}

let client: GatewayClient | null = null;
let activeModal: ModalForm | null = null;

function $(selector: string): HTMLElement {
  const el = document.querySelector(selector);
  if (!el) throw new Error(`missing element ${selector}`);
  return el as HTMLElement;
}

function render(): void {
  if (!client) return;
  const state = client.state;

  const sidebar = $("#conversations");
  sidebar.innerHTML = visibleConversations(state)
    .map(
      (name) =>
        `<li class="${name === state.openConversation ? "open" : ""}" data-conv="${escapeHtml(name)}">${escapeHtml(name)}</li>`
    )
    .join("");

  const timeline = $("#timeline");
  timeline.innerHTML = visibleTimeline(state, state.openConversation)
    .map(renderTimelineItem)
    .join("");
  timeline.scrollTop = timeline.scrollHeight;

  const queuePane = $("#review-queue");
  if (isManager(state)) {
    queuePane.hidden = false;
    queuePane.innerHTML =
      `<h3>Review queue</h3>` +
      state.reviewQueue.map((p) => renderTimelineItem({ author: state.botId, text: "", bot: true, payload: p })).join("");
  } else {
    queuePane.hidden = true;
    queuePane.innerHTML = "";
  }

  if (!activeModal && state.pendingModals.length) {
    const model = state.pendingModals.shift()!;
    activeModal = {
      model,
      anonymous: Boolean(model["anonymous"]),
      comment: String(model["comment"] ?? ""),
      recipients: [...((model["recipients"] ?? []) as string[])],
      heading: "",
      text: String(model["text"] ?? ""),
    };
  }
  renderModal();
}

function renderModal(): void {
  const overlay = $("#modal-overlay");
  if (!activeModal) {
    overlay.hidden = true;
    overlay.innerHTML = "";
    return;
  }
  overlay.hidden = false;
  const { model } = activeModal;
  if (model["modal"] === "share") {
    overlay.innerHTML = renderShareModal(
      model,
      activeModal.anonymous,
      activeModal.comment,
      activeModal.recipients
    );
  } else {
    overlay.innerHTML =
      `<div class="modal edit-modal"><h3>${escapeHtml(String(model["modal"]))}</h3>` +
      (model["modal"] === "create_new_section"
        ? `<label>Heading <input name="heading" value="${escapeHtml(activeModal.heading ?? "")}"></label>`
        : "") +
      `<textarea name="text">${escapeHtml(activeModal.text ?? "")}</textarea>` +
      `<button class="submit">Save</button>` +
      `<button class="cancel">Cancel</button></div>`;
  }
}

function submitModal(): void {
  if (!client || !activeModal) return;
  const { model } = activeModal;
  const modalKind = String(model["modal"]);
  const conversation = client.state.openConversation;
  if (modalKind === "share") {
    client.sendEvent("modal_submit", conversation, "", {
      modal: "share",
      exchange_id: model["exchange_id"],
      mode: model["mode"],
      anonymous: activeModal.anonymous,
      comment: activeModal.comment,
      recipients: activeModal.recipients,
    });
  } else {
    client.sendEvent("modal_submit", conversation, "", {
      modal: modalKind,
      draft_id: model["draft_id"],
      session_id: model["session_id"],
      heading: activeModal.heading ?? "",
      text: activeModal.text ?? "",
    });
  }
  activeModal = null;
  render();
}

function handleButtonPayload(payload: Record<string, unknown>): void {
  if (!client) return;
  const action = String(payload["action"]);
  const conversation = client.state.openConversation;
  if (action === "edit_draft" || action === "edit_suggestion" || action === "edit_proposal" || action === "create_new_section") {
    // These open a local form; the modal_submit carries the result.
    activeModal = {
      model: {
        modal: action === "edit_draft" ? "edit_draft" : action,
        draft_id: payload["draft_id"],
        session_id: payload["session_id"],
        text: "",
      },
      anonymous: false,
      comment: "",
      recipients: [],
      heading: "",
      text: "",
    };
    renderModal();
    return;
  }
  client.sendEvent("button_click", conversation, "", payload);
}

function wire(): void {
  $("#connect-form").addEventListener("submit", async (event) => {
    event.preventDefault();
    const user = ($("#user-select") as HTMLSelectElement).value;
    const url = ($("#server-url") as HTMLInputElement).value || DEFAULT_URL;
    client = new GatewayClient(user, url);
    client.onChange = render;
    await client.connect();
    client.requestSnapshot();
    $("#connect-pane").hidden = true;
    $("#workspace").hidden = false;
  });

  $("#conversations").addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest("[data-conv]");
    if (target && client) {
      client.state.openConversation = target.getAttribute("data-conv")!;
      render();
    }
  });

  $("#composer").addEventListener("submit", (event) => {
    event.preventDefault();
    if (!client) return;
    const input = $("#composer-input") as HTMLInputElement;
    const text = input.value.trim();
    if (!text) return;
    const conversation = client.state.openConversation;
    const kind = conversation === `dm-${client.user}`
      ? "dm_message"
      : text.includes(client.state.botHandle)
        ? "mention"
        : "channel_message";
    client.sendEvent(kind, conversation, text);
    input.value = "";
  });

  document.body.addEventListener("click", (event) => {
    const el = event.target as HTMLElement;
    if (el.matches(".action-btn")) {
      handleButtonPayload(JSON.parse(el.getAttribute("data-payload")!));
    } else if (el.matches("#modal-overlay .submit")) {
      submitModal();
    } else if (el.matches("#modal-overlay .cancel")) {
      activeModal = null;
      renderModal();
    }
  });

  document.body.addEventListener("input", (event) => {
    const el = event.target as HTMLInputElement;
    if (!activeModal || !el.closest("#modal-overlay")) return;
    if (el.name === "comment") activeModal.comment = el.value;
    if (el.name === "anonymous") activeModal.anonymous = el.checked;
    if (el.name === "heading") activeModal.heading = el.value;
    if (el.name === "text") activeModal.text = el.value;
    if (activeModal.model["modal"] === "share") {
      const preview = document.querySelector("#modal-overlay .preview");
      if (preview) {
        preview.textContent = sharePreview(
          activeModal.model,
          activeModal.anonymous,
          activeModal.comment
        );
      }
      const submit = document.querySelector("#modal-overlay .submit") as HTMLButtonElement;
      if (submit && activeModal.model["mode"] === "to_private") {
        submit.disabled = activeModal.recipients.length === 0;
      }
    } else {
      renderModal();
    }
  });

  // Populate the user picker from a one-off snapshot fetch over HTTP-less
  // socket: connect anonymously, request the snapshot, fill, disconnect.
  const probe = new GatewayClient("", ($("#server-url") as HTMLInputElement).value || DEFAULT_URL);
  probe.onChange = () => {
    if (probe.state.roster.length) {
      const select = $("#user-select") as HTMLSelectElement;
      select.innerHTML = probe.state.roster
        .map((r) => `<option value="${escapeHtml(r.id)}">${escapeHtml(r.name)} (${r.role})</option>`)
        .join("");
      probe.disconnect();
    }
  };
  probe
    .connect()
    .then(() => probe.requestSnapshot())
    .catch(() => {
      /* server not up yet; user can still type the URL and connect */
    });
}

wire();
