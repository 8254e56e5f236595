// Conversation controller: owns the session id and wires server responses
// into the transcript, banner and report panels. Pure projection of the
// API: no risk math happens here.

import { ApiClient, ApiError, Question } from "./api.js";
import { clearNode, el, messageBubble, renderBanner, renderErrorBanner,
         renderReport } from "./view.js";

export interface AppElements {
  transcript: HTMLElement;
  banner: HTMLElement;
  status: HTMLElement;
  input: HTMLInputElement;
  sendButton: HTMLButtonElement;
  report: HTMLElement;
}

export class ChatApp {
  readonly client: ApiClient;
  readonly dom: AppElements;
  sessionId: string | null = null;
  currentQuestion: Question | null = null;
  private busy = false;

  constructor(client: ApiClient, dom: AppElements) {
    this.client = client;
    this.dom = dom;
    this.dom.sendButton.addEventListener("click", () => { void this.send(); });
    this.dom.input.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter") {
        void this.send();
      }
    });
    this.dom.input.addEventListener("input", () => this.syncControls());
    this.syncControls();
  }

  private setBusy(busy: boolean): void {
    this.busy = busy;
    this.syncControls();
  }

  private syncControls(): void {
    const blocked = this.busy || this.sessionId === null;
    this.dom.input.disabled = blocked;
    this.dom.sendButton.disabled = blocked || this.dom.input.value.trim() === "";
  }

  private showError(error: unknown, retry: () => void): void {
    if (error instanceof ApiError && error.unauthorized) {
      renderErrorBanner(this.dom.status,
        "Configuration error: the API token is missing or wrong.", false, retry);
      return;
    }
    const message = error instanceof ApiError && error.unreachable
      ? "Cannot reach the screening service."
      : `Request failed: ${error instanceof Error ? error.message : String(error)}`;
    renderErrorBanner(this.dom.status, message, true, retry);
  }

  private clearStatus(): void {
    this.dom.status.className = "status-ok";
    clearNode(this.dom.status);
  }

  private appendQuestion(question: Question): void {
    this.currentQuestion = question;
    this.dom.transcript.appendChild(messageBubble("bot", question.text));
    if (question.id === "closing") {
      this.sessionId = null; // conversation over; input stays disabled
    }
  }

  /** POST /v1/sessions and render the opening question. */
  async start(): Promise<void> {
    this.setBusy(true);
    try {
      const created = await this.client.createSession();
      this.clearStatus();
      clearNode(this.dom.transcript);
      renderReport(this.dom.report, null);
      this.sessionId = created.session_id;
      this.appendQuestion(created.question);
      renderBanner(this.dom.banner, null);
    } catch (error) {
      this.showError(error, () => { void this.start(); });
    } finally {
      this.setBusy(false);
    }
  }

  /** Send the input box content; one request in flight at a time. */
  async send(): Promise<void> {
    const text = this.dom.input.value.trim();
    if (this.busy || this.sessionId === null || text === "") {
      return;
    }
    this.setBusy(true);
    try {
      const result = await this.client.postMessage(this.sessionId, text);
      this.clearStatus();
      this.dom.transcript.appendChild(messageBubble("user", text, result.score));
      this.appendQuestion(result.next_question);
      renderBanner(this.dom.banner, result.aggregate);
      this.dom.input.value = ""; // cleared only after a successful send
    } catch (error) {
      this.showError(error, () => { void this.send(); });
    } finally {
      this.setBusy(false);
    }
  }

  /** Fetch and render the report for the given (or current) session. */
  async viewReport(sessionId?: string): Promise<void> {
    const id = sessionId ?? this.sessionId;
    if (id === null) {
      renderReport(this.dom.report, null);
      return;
    }
    try {
      const report = await this.client.getReport(id);
      this.clearStatus();
      renderReport(this.dom.report, report);
    } catch (error) {
      if (error instanceof ApiError && error.notFound) {
        renderReport(this.dom.report, null);
        return;
      }
      this.showError(error, () => { void this.viewReport(id); });
    }
  }
}

export function buildDom(root: HTMLElement): AppElements {
  const banner = el("div", "risk-banner banner-none");
  const status = el("div", "status-ok");
  const transcript = el("div", "transcript");
  const controls = el("div", "controls");
  const input = el("input", "message-input") as HTMLInputElement;
  input.setAttribute("type", "text");
  input.setAttribute("placeholder", "Type your answer...");
  const sendButton = el("button", "send-button", "Send") as HTMLButtonElement;
  controls.appendChild(input);
  controls.appendChild(sendButton);
  const report = el("div", "report-panel");
  for (const node of [banner, status, transcript, controls, report]) {
    root.appendChild(node);
  }
  return { transcript, banner, status, input, sendButton, report };
}
