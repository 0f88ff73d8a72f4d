// Application wiring: session bootstrap (restore from the URL hash on
// reload), the send box, and the live message timelines.

import { ApiClient } from "./api.js";
import { MessageTimeline } from "./timeline.js";
import type { Transcript } from "./types.js";

export class ChatApp {
  readonly api: ApiClient;
  sessionId: string | null = null;
  private container: HTMLElement;

  constructor(container: HTMLElement, baseUrl = "") {
    this.api = new ApiClient(baseUrl);
    this.container = container;
  }

  /** Reuse the session in the URL hash when it still exists; else create. */
  async bootstrap(hash: string = typeof location === "undefined" ? "" : location.hash): Promise<string> {
    const candidate = hash.replace(/^#/, "");
    if (candidate) {
      try {
        const transcript = await this.api.getSession(candidate);
        this.sessionId = transcript.session_id;
        this.renderTranscript(transcript);
        return this.sessionId;
      } catch {
        // stale hash: fall through to a fresh session
      }
    }
    this.sessionId = await this.api.createSession();
    return this.sessionId;
  }

  /** Rebuild the static conversation view from a persisted transcript. */
  renderTranscript(transcript: Transcript): void {
    this.container.replaceChildren();
    for (const turn of transcript.turns) {
      if (turn.role === "system") {
        continue;
      }
      const line = document.createElement("p");
      line.className = `turn turn-${turn.role}`;
      line.textContent = `${turn.role}: ${turn.content}`;
      this.container.append(line);
    }
  }

  async send(text: string): Promise<MessageTimeline> {
    if (!this.sessionId) {
      throw new Error("bootstrap first");
    }
    const sessionId = this.sessionId;
    const you = document.createElement("p");
    you.className = "turn turn-user";
    you.textContent = `user: ${text}`;
    this.container.append(you);
    const timeline = new MessageTimeline(this.container, (ref) =>
      this.api.artifact(sessionId, ref),
    );
    await this.api.sendMessage(sessionId, text, {
      onEvent: (event) => timeline.push(event),
      onStreamDrop: (reason) => timeline.markDropped(reason),
    });
    await timeline.settle();
    return timeline;
  }
}

export function mount(root: Document = document): void {
  const container = root.getElementById("conversation");
  const form = root.getElementById("send-form") as HTMLFormElement | null;
  const input = root.getElementById("send-input") as HTMLInputElement | null;
  if (!container || !form || !input) {
    return;
  }
  const app = new ChatApp(container);
  void app.bootstrap().then((sessionId) => {
    location.hash = sessionId;
  });
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value.trim();
    if (!text) {
      return;
    }
    input.value = "";
    void app.send(text);
  });
}

if (typeof document !== "undefined" && document.getElementById("send-form")) {
  mount();
}
