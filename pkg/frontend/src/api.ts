// Thin client over the chat service HTTP API. The base URL is the single
// configuration point, so the bundle can sit on any static host.

import { SseParser } from "./sse.js";
import type { ChatEvent, SessionSummary, Transcript } from "./types.js";

export interface StreamHandlers {
  onEvent: (event: ChatEvent) => void;
  /** Called when the stream ends without a terminal done/error event. */
  onStreamDrop?: (reason: string) => void;
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async createSession(): Promise<string> {
    const response = await fetch(this.url("/api/sessions"), { method: "POST" });
    if (!response.ok) {
      throw new Error(`createSession failed: ${response.status}`);
    }
    const body = (await response.json()) as { session_id: string };
    return body.session_id;
  }

  async getSession(sessionId: string): Promise<Transcript> {
    const response = await fetch(this.url(`/api/sessions/${sessionId}`));
    if (!response.ok) {
      throw new Error(`getSession failed: ${response.status}`);
    }
    return (await response.json()) as Transcript;
  }

  async listSessions(): Promise<SessionSummary[]> {
    const response = await fetch(this.url("/api/sessions"));
    if (!response.ok) {
      throw new Error(`listSessions failed: ${response.status}`);
    }
    return (await response.json()) as SessionSummary[];
  }

  async artifact(sessionId: string, ref: string): Promise<unknown> {
    const response = await fetch(this.url(`/api/sessions/${sessionId}/artifacts/${ref}`));
    if (!response.ok) {
      throw new Error(`artifact fetch failed: ${response.status}`);
    }
    return response.json();
  }

  /**
   * POST one message and stream its events. Resolves once the stream closes;
   * a close without a terminal event reports a drop instead of failing.
   */
  async sendMessage(sessionId: string, text: string, handlers: StreamHandlers): Promise<void> {
    const response = await fetch(this.url(`/api/sessions/${sessionId}/messages`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
    });
    if (!response.ok || !response.body) {
      throw new Error(`sendMessage failed: ${response.status}`);
    }
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    const parser = new SseParser();
    let sawTerminal = false;
    for (;;) {
      const { done, value } = await reader.read();
      if (done) {
        break;
      }
      for (const event of parser.feed(decoder.decode(value, { stream: true }))) {
        if (event.kind === "done" || event.kind === "error") {
          sawTerminal = true;
        }
        handlers.onEvent(event);
      }
    }
    if (!sawTerminal) {
      handlers.onStreamDrop?.("stream closed before a terminal event");
    }
  }
}
