// End-to-end against the fixture-backed service: spawn the real HTTP server
// (scripted LLM backends + recorded fixtures, fully offline), drive the app
// exactly as the browser would, and verify the rendered result.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ChatApp } from "../src/app.js";
import type { ChatEvent } from "../src/types.js";

const PORT = 8791;
const BASE = `http://127.0.0.1:${PORT}`;
const QUERY = "Is Bitcoin a good investment right now?";
const DEMO_CONFIG = join(__dirname, "..", "..", "src", "tokenscope", "config", "service.demo.json");

let server: ChildProcess;

async function waitForHealth(): Promise<void> {
  for (let attempt = 0; attempt < 60; attempt++) {
    try {
      const response = await fetch(`${BASE}/api/health`);
      if (response.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 500));
  }
  throw new Error("service did not become healthy");
}

beforeAll(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), "tokenscope-ui-"));
  server = spawn(
    "python3",
    ["-m", "tokenscope.service.cli", "serve", "--config", DEMO_CONFIG, "--port", String(PORT)],
    { cwd: dataDir, stdio: "ignore" },
  );
  await waitForHealth();
});

afterAll(() => {
  server?.kill();
});

describe("UI end-to-end against the fixture-backed service", () => {
  it("renders >=3 tool panels in seq order, streams the answer, and every displayed number comes from event payloads", async () => {
    const container = document.createElement("div");
    document.body.append(container);
    const app = new ChatApp(container, BASE);
    await app.bootstrap("");

    const intercepted: ChatEvent[] = [];
    const originalSend = app.api.sendMessage.bind(app.api);
    app.api.sendMessage = (sessionId, text, handlers) =>
      originalSend(sessionId, text, {
        onEvent: (event) => {
          intercepted.push(event);
          handlers.onEvent(event);
        },
        onStreamDrop: handlers.onStreamDrop,
      });

    const timeline = await app.send(QUERY);

    // stream is gapless and terminated by exactly one done
    expect(intercepted.map((e) => e.seq)).toEqual(intercepted.map((_, i) => i));
    expect(intercepted.filter((e) => e.kind === "done")).toHaveLength(1);
    expect(intercepted.filter((e) => e.kind === "error")).toHaveLength(0);

    // >=3 distinct tool panels, rendered in the stream's seq order
    const panels = [...timeline.root.querySelectorAll(".panel")] as HTMLElement[];
    const renderedTools = panels.map((p) => p.dataset.tool);
    expect(new Set(renderedTools).size).toBeGreaterThanOrEqual(3);
    const streamedTools = intercepted
      .filter((e) => e.kind === "tool_result")
      .map((e) => (e.payload as { tool: string }).tool);
    expect(renderedTools).toEqual(streamedTools);

    // streamed answer rendered
    const answer = timeline.root.querySelector(".answer-text")?.textContent ?? "";
    const streamedAnswer = intercepted
      .filter((e) => e.kind === "answer_delta")
      .map((e) => String((e.payload as { text: string }).text))
      .join("");
    expect(answer).toBe(streamedAnswer);
    expect(answer).toContain("Bitcoin");

    // every number displayed in the panels originates from an event payload:
    // walk individual text nodes so adjacent cells never merge digits
    const payloadJson = JSON.stringify(intercepted.map((e) => e.payload));
    const displayed: string[] = [];
    for (const panel of panels) {
      const walker = document.createTreeWalker(panel, NodeFilter.SHOW_TEXT);
      for (let node = walker.nextNode(); node; node = walker.nextNode()) {
        displayed.push(...((node.textContent ?? "").match(/\d+(?:\.\d+)?/g) ?? []));
      }
    }
    expect(displayed.length).toBeGreaterThan(0);
    for (const token of displayed) {
      expect(payloadJson, `displayed number ${token} missing from payloads`).toContain(token);
    }

    // transfer table cells equal the payload values exactly
    const transfersEvent = intercepted.find(
      (e) => e.kind === "tool_result" && (e.payload as { type: string }).type === "whale_transfers",
    );
    expect(transfersEvent).toBeDefined();
    const payloadTransfers = (
      transfersEvent!.payload as { data: { transfers: Array<{ usd_value: number }> } }
    ).data.transfers;
    const cells = [
      ...timeline.root.querySelectorAll(".panel-whale_transfers tr.transfer-row td:first-child"),
    ].map((td) => td.textContent);
    expect(cells).toEqual(payloadTransfers.map((t) => String(t.usd_value)));
  });

  it("restores the transcript after a reload", async () => {
    const container = document.createElement("div");
    document.body.append(container);
    const app = new ChatApp(container, BASE);
    const sessionId = await app.bootstrap("");
    await app.send(QUERY);

    // simulate reload: brand-new app instance bootstrapped from the hash
    const freshContainer = document.createElement("div");
    document.body.append(freshContainer);
    const reloaded = new ChatApp(freshContainer, BASE);
    const restoredId = await reloaded.bootstrap(`#${sessionId}`);
    expect(restoredId).toBe(sessionId);
    const text = freshContainer.textContent ?? "";
    expect(text).toContain(`user: ${QUERY}`);
    expect(text).toContain("Bitcoin");
    expect(freshContainer.querySelectorAll(".turn").length).toBeGreaterThan(2);
  });

  it("stale hash falls back to a fresh session", async () => {
    const container = document.createElement("div");
    document.body.append(container);
    const app = new ChatApp(container, BASE);
    const sessionId = await app.bootstrap("#does-not-exist");
    expect(sessionId).not.toBe("does-not-exist");
    const transcript = await app.api.getSession(sessionId);
    expect(transcript.turns).toEqual([]);
  });
});
