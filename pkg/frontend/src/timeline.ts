// Per-message event timeline. Events render strictly in seq order: anything
// arriving early is buffered until the gap fills, so network reordering can
// never reorder panels.

import { renderToolPanel } from "./panels.js";
import type { ChatEvent, PlanCall, ToolResultPayload } from "./types.js";

export type ArtifactResolver = (ref: string) => Promise<unknown>;

export class MessageTimeline {
  readonly root: HTMLElement;
  private readonly answer: HTMLElement;
  private pending = new Map<number, ChatEvent>();
  private nextSeq = 0;
  private terminated = false;
  private fetches: Promise<void>[] = [];
  renderedKinds: string[] = [];

  constructor(
    container: HTMLElement,
    private readonly resolveArtifact?: ArtifactResolver,
  ) {
    this.root = document.createElement("div");
    this.root.className = "message-timeline";
    this.answer = document.createElement("p");
    this.answer.className = "answer-text";
    container.append(this.root);
  }

  /** Resolves once every by-reference artifact fetch has settled. */
  async settle(): Promise<void> {
    await Promise.allSettled(this.fetches);
  }

  /** Accept an event in any order; render it once its turn arrives. */
  push(event: ChatEvent): void {
    if (this.terminated) {
      return;
    }
    this.pending.set(event.seq, event);
    while (this.pending.has(this.nextSeq)) {
      const next = this.pending.get(this.nextSeq)!;
      this.pending.delete(this.nextSeq);
      this.nextSeq += 1;
      this.render(next);
      if (next.kind === "done" || next.kind === "error") {
        this.terminated = true;
        break;
      }
    }
  }

  get isTerminated(): boolean {
    return this.terminated;
  }

  markDropped(reason: string): void {
    if (this.terminated) {
      return;
    }
    const note = document.createElement("p");
    note.className = "stream-drop";
    note.textContent = `connection lost: ${reason}`;
    const retry = document.createElement("button");
    retry.className = "reconnect";
    retry.textContent = "reconnect";
    note.append(retry);
    this.root.append(note);
  }

  private render(event: ChatEvent): void {
    this.renderedKinds.push(event.kind);
    switch (event.kind) {
      case "plan": {
        const calls = (event.payload.calls as PlanCall[]) ?? [];
        const line = document.createElement("p");
        line.className = "plan-line";
        if (event.payload.stop || calls.length === 0) {
          line.textContent = `step ${event.payload.step}: planning complete, no further tools`;
        } else {
          line.textContent = `step ${event.payload.step}: planning ${calls
            .map((c) => c.name)
            .join(", ")}`;
        }
        this.root.append(line);
        break;
      }
      case "tool_call": {
        const line = document.createElement("p");
        line.className = "tool-call-line";
        line.textContent = `calling ${event.payload.name} ${JSON.stringify(event.payload.arguments)}`;
        this.root.append(line);
        break;
      }
      case "tool_result": {
        const payload = event.payload as unknown as ToolResultPayload;
        const panel = renderToolPanel(payload);
        this.root.append(panel);
        if (payload.truncated && payload.ref && this.resolveArtifact) {
          // payload carries only a preview; swap in the full body by reference
          this.fetches.push(
            this.resolveArtifact(payload.ref)
              .then((full) => {
                const resolved = renderToolPanel({
                  ...(full as ToolResultPayload),
                  truncated: false,
                  ref: payload.ref,
                });
                panel.replaceWith(resolved);
              })
              .catch(() => {
                const note = document.createElement("p");
                note.className = "panel-error";
                note.textContent = "full result unavailable; showing preview";
                panel.append(note);
              }),
          );
        }
        break;
      }
      case "answer_delta": {
        if (!this.answer.isConnected) {
          this.root.append(this.answer);
        }
        this.answer.textContent = (this.answer.textContent ?? "") + String(event.payload.text ?? "");
        break;
      }
      case "done": {
        const line = document.createElement("p");
        line.className = "done-line";
        line.textContent = `done — ${event.payload.tool_calls} tool call(s)`;
        if (event.payload.degraded) {
          const badge = document.createElement("span");
          badge.className = "badge degraded";
          badge.textContent = "degraded: planner output unusable";
          line.append(badge);
        }
        this.root.append(line);
        break;
      }
      case "error": {
        const line = document.createElement("p");
        line.className = "error-line";
        line.textContent = `error [${event.payload.stage}]: ${event.payload.error}`;
        this.root.append(line);
        break;
      }
    }
  }
}
