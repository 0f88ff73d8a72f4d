// Server-sent-events parsing for POST streams.
//
// EventSource cannot POST a body, so the chat stream is read via fetch and a
// ReadableStream; this parser consumes arbitrary text chunks and yields one
// parsed event per complete `data: {json}` block.

import type { ChatEvent } from "./types.js";

export class SseParser {
  private buffer = "";

  /** Feed one network chunk; returns the events completed by it. */
  feed(chunk: string): ChatEvent[] {
    this.buffer += chunk;
    const events: ChatEvent[] = [];
    let boundary = this.buffer.indexOf("\n\n");
    while (boundary !== -1) {
      const block = this.buffer.slice(0, boundary);
      this.buffer = this.buffer.slice(boundary + 2);
      const event = parseBlock(block);
      if (event) {
        events.push(event);
      }
      boundary = this.buffer.indexOf("\n\n");
    }
    return events;
  }

  /** True when a partial block is still pending (stream died mid-event). */
  hasPartial(): boolean {
    return this.buffer.trim().length > 0;
  }
}

function parseBlock(block: string): ChatEvent | null {
  const dataLines = block
    .split("\n")
    .filter((line) => line.startsWith("data:"))
    .map((line) => line.slice(5).trimStart());
  if (dataLines.length === 0) {
    return null;
  }
  try {
    const parsed = JSON.parse(dataLines.join("\n"));
    if (typeof parsed === "object" && parsed !== null && "kind" in parsed && "seq" in parsed) {
      return parsed as ChatEvent;
    }
  } catch {
    // tolerate comment/heartbeat blocks
  }
  return null;
}
