import { describe, expect, it } from "vitest";

import { SseParser } from "../src/sse.js";

const event = (seq: number, kind = "plan") =>
  `data: ${JSON.stringify({ kind, payload: {}, seq })}\n\n`;

describe("SseParser", () => {
  it("parses complete blocks", () => {
    const parser = new SseParser();
    const events = parser.feed(event(0) + event(1, "done"));
    expect(events.map((e) => e.seq)).toEqual([0, 1]);
    expect(events[1].kind).toBe("done");
  });

  it("buffers partial blocks across chunks", () => {
    const parser = new SseParser();
    const wire = event(0);
    expect(parser.feed(wire.slice(0, 12))).toEqual([]);
    expect(parser.hasPartial()).toBe(true);
    const events = parser.feed(wire.slice(12));
    expect(events).toHaveLength(1);
    expect(parser.hasPartial()).toBe(false);
  });

  it("splits on event boundaries regardless of chunking", () => {
    const wire = event(0) + event(1) + event(2, "done");
    for (const chunkSize of [1, 3, 7, 50]) {
      const parser = new SseParser();
      const seen: number[] = [];
      for (let i = 0; i < wire.length; i += chunkSize) {
        for (const e of parser.feed(wire.slice(i, i + chunkSize))) {
          seen.push(e.seq);
        }
      }
      expect(seen).toEqual([0, 1, 2]);
    }
  });

  it("ignores heartbeats and non-event data", () => {
    const parser = new SseParser();
    expect(parser.feed(": keepalive\n\n")).toEqual([]);
    expect(parser.feed("data: not json\n\n")).toEqual([]);
    expect(parser.feed(event(5))).toHaveLength(1);
  });
});
