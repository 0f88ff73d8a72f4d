import { describe, expect, it } from "vitest";

import { computeCandleLayout } from "../src/candles.js";
import { renderToolPanel } from "../src/panels.js";
import type { Candle, ToolResultPayload } from "../src/types.js";

const wrap = (tool: string, type: string, data: Record<string, unknown>): ToolResultPayload => ({
  tool,
  type,
  duration_ms: 3,
  data,
});

const candles: Candle[] = Array.from({ length: 30 }, (_, i) => ({
  open_time: 1_000 + i,
  open: 100 + i,
  high: 102 + i,
  low: 99 + i,
  close: 101 + i,
  volume: 10,
}));

describe("renderToolPanel", () => {
  it("market snapshot renders a candlestick chart from candle data", () => {
    const panel = renderToolPanel(
      wrap("market_analysis", "market_snapshot", {
        symbol: "BTC",
        price: 64250.5,
        change_24h: 2.35,
        volume_24h: 123,
        candles,
      }),
    );
    const canvas = panel.querySelector("canvas.candle-chart") as HTMLCanvasElement;
    expect(canvas).not.toBeNull();
    expect(canvas.dataset.candles).toBe("30");
    expect(panel.textContent).toContain("64250.5");
  });

  it("whale transfers render a sortable table", () => {
    const transfers = [
      { tx_hash: "0xa", timestamp: 1, token: "USDC", amount: 1.5, usd_value: 2_500_000, from_label: "whale_wallet", to_label: "exchange", intent: "exchange_deposit" },
      { tx_hash: "0xb", timestamp: 2, token: "USDC", amount: 0.5, usd_value: 1_200_000, from_label: "whale_wallet", to_label: "whale_wallet", intent: "wallet_to_wallet" },
    ];
    const panel = renderToolPanel(wrap("transaction_analysis", "whale_transfers", { transfers }));
    const rows = panel.querySelectorAll("tr.transfer-row");
    expect(rows).toHaveLength(2);
    const amountHeader = [...panel.querySelectorAll("th")].find((th) => th.textContent === "Amount")!;
    amountHeader.click();
    const firstCell = panel.querySelector("tr.transfer-row td.num:nth-child(2)");
    expect(firstCell?.textContent).toBe("1.5");
  });

  it("security report groups findings by severity with snippets", () => {
    const panel = renderToolPanel(
      wrap("code_analysis", "security_report", {
        address: "0xdead",
        overall_risk: "high",
        degraded: false,
        summary: "Reentrancy risk stands.",
        findings: [
          { kind: "reentrancy-eth", severity: "high", location: { contract: "V", line: 12 }, description: "d", snippet: "code here", false_positive: false },
          { kind: "unprotected-mint", severity: "medium", location: { contract: "V", line: 3 }, description: "d", snippet: "", false_positive: true },
        ],
      }),
    );
    expect(panel.querySelectorAll(".findings-high .finding")).toHaveLength(1);
    expect(panel.querySelector(".findings-medium .finding.false-positive")).not.toBeNull();
    expect(panel.querySelector("pre.snippet")?.textContent).toBe("code here");
  });

  it("empty findings show the all-clear note", () => {
    const panel = renderToolPanel(
      wrap("code_analysis", "security_report", {
        address: "0xfeed",
        overall_risk: "low",
        degraded: false,
        summary: "Clean.",
        findings: [],
      }),
    );
    expect(panel.querySelector(".all-clear")?.textContent).toContain("No high/medium issues");
  });

  it("news digest renders sentiment-tagged cards", () => {
    const panel = renderToolPanel(
      wrap("crypto_news_agent", "news_digest", {
        items: [
          { published_at: "2026-08-08T09:30:00Z", headline: "h1", category: "markets", sentiment: "bullish", affected_assets: ["BTC"], magnitude: "medium" },
          { published_at: "2026-08-07T09:30:00Z", headline: "h2", category: "tech", sentiment: "bearish", affected_assets: [], magnitude: "low" },
        ],
        synthesis: "Mixed.",
      }),
    );
    expect(panel.querySelectorAll(".news-card.sentiment-bullish")).toHaveLength(1);
    expect(panel.querySelectorAll(".news-card.sentiment-bearish")).toHaveLength(1);
    expect(panel.querySelector(".synthesis")?.textContent).toBe("Mixed.");
  });

  it("project report renders the base sections and critique", () => {
    const panel = renderToolPanel(
      wrap("project_background_agent", "project_report", {
        project: "Bitcoin",
        overview: "o",
        team: "t",
        tokenomics: "k",
        technology: "x",
        critique: { utility: "u" },
        sources: ["https://example.org/a"],
      }),
    );
    expect(panel.querySelectorAll(".report-section")).toHaveLength(5);
    expect(panel.querySelector(".sources a")?.getAttribute("href")).toBe("https://example.org/a");
  });

  it("unknown document types fall back to raw JSON", () => {
    const panel = renderToolPanel(wrap("someday_tool", "hologram", { zap: 1 }));
    expect(panel.querySelector("pre.raw-fallback")?.textContent).toContain('"zap": 1');
  });

  it("validation errors render as error panels", () => {
    const panel = renderToolPanel(
      wrap("transaction_analysis", "validation_error", { error: "missing required param 'token'" }),
    );
    expect(panel.querySelector(".panel-error")?.textContent).toContain("token");
  });
});

describe("computeCandleLayout", () => {
  it("maps prices into the canvas with wicks outside bodies", () => {
    const layout = computeCandleLayout(candles, 560, 180);
    expect(layout.boxes).toHaveLength(30);
    expect(layout.min).toBe(99);
    expect(layout.max).toBe(131);
    for (const box of layout.boxes) {
      expect(box.wickTop).toBeLessThanOrEqual(box.bodyTop + 1e-9);
      expect(box.wickBottom).toBeGreaterThanOrEqual(box.bodyTop + box.bodyHeight - 1e-9);
      expect(box.width).toBeGreaterThan(0);
    }
    // x positions strictly increase
    const xs = layout.boxes.map((b) => b.x);
    expect([...xs].sort((a, b) => a - b)).toEqual(xs);
  });

  it("handles the empty series", () => {
    expect(computeCandleLayout([], 100, 100).boxes).toEqual([]);
  });
});
