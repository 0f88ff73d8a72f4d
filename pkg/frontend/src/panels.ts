// Tool-output panels: one archetype per document type, raw-JSON fallback for
// anything unrecognized. Every number shown comes verbatim from the event
// payload — the UI formats, it never computes.

import { drawCandles } from "./candles.js";
import type {
  Candle,
  MarketSnapshot,
  NewsItem,
  SecurityReport,
  ToolResultPayload,
  WhaleTransfer,
} from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function renderToolPanel(payload: ToolResultPayload): HTMLElement {
  const panel = el("section", `panel panel-${payload.type}`);
  panel.dataset.tool = payload.tool;
  panel.dataset.type = payload.type;
  const header = el("header", "panel-header");
  header.append(
    el("span", "panel-tool", payload.tool),
    el("span", "panel-duration", `${payload.duration_ms} ms`),
  );
  if (payload.truncated && payload.ref) {
    header.append(el("span", "panel-truncated", `truncated — full body: ${payload.ref}`));
  }
  panel.append(header);
  panel.append(renderBody(payload));
  return panel;
}

function renderBody(payload: ToolResultPayload): HTMLElement {
  if (payload.truncated) {
    // only a preview arrived inline; the timeline resolves the full body
    return rawFallback(payload.data);
  }
  switch (payload.type) {
    case "market_snapshot":
      return marketSnapshotPanel(payload.data as unknown as MarketSnapshot);
    case "market_overview":
      return marketOverviewPanel(payload.data);
    case "whale_transfers":
      return transfersPanel(payload.data);
    case "security_report":
      return securityPanel(payload.data as unknown as SecurityReport);
    case "news_digest":
      return newsPanel(payload.data);
    case "project_report":
      return sectionedPanel(payload.data, [
        "overview",
        "team",
        "tokenomics",
        "technology",
      ]);
    case "historical_events":
      return eventsPanel(payload.data);
    case "tool_error":
    case "validation_error":
      return el("p", "panel-error", String(payload.data.error ?? "tool failed"));
    default:
      return rawFallback(payload.data);
  }
}

function marketSnapshotPanel(data: MarketSnapshot): HTMLElement {
  const body = el("div", "panel-body");
  const stats = el("p", "market-stats");
  stats.append(
    el("strong", undefined, data.symbol),
    " · ",
    el("span", "stat", `price ${data.price}`),
    " · ",
    el("span", "stat", `24h change ${data.change_24h}%`),
    " · ",
    el("span", "stat", `volume ${data.volume_24h}`),
  );
  body.append(stats);
  const canvas = el("canvas", "candle-chart");
  canvas.width = 560;
  canvas.height = 180;
  canvas.dataset.candles = String(data.candles.length);
  body.append(canvas);
  drawCandles(canvas, data.candles as Candle[]);
  return body;
}

function marketOverviewPanel(data: Record<string, unknown>): HTMLElement {
  const body = el("div", "panel-body overview-grid");
  const lists: Array<[string, string]> = [
    ["top_gainers", "Top gainers (%)"],
    ["top_losers", "Top losers (%)"],
    ["top_volume", "Top volume"],
  ];
  for (const [key, title] of lists) {
    const column = el("div", "overview-column");
    column.append(el("h4", undefined, title));
    const list = el("ol");
    for (const row of (data[key] as Array<[string, number]>) ?? []) {
      list.append(el("li", undefined, `${row[0]} ${row[1]}`));
    }
    column.append(list);
    body.append(column);
  }
  return body;
}

function transfersPanel(data: Record<string, unknown>): HTMLElement {
  const body = el("div", "panel-body");
  const transfers = (data.transfers as WhaleTransfer[]) ?? [];
  if (transfers.length === 0) {
    body.append(el("p", undefined, "No transfers above the threshold."));
    return body;
  }
  const table = el("table", "transfers sortable");
  const head = el("tr");
  for (const [label, key] of [
    ["USD value", "usd_value"],
    ["Amount", "amount"],
    ["From", "from_label"],
    ["To", "to_label"],
    ["Intent", "intent"],
  ] as Array<[string, keyof WhaleTransfer]>) {
    const th = el("th", "sort-header", label);
    th.addEventListener("click", () => sortRows(table, transfers, key));
    head.append(th);
  }
  table.append(head);
  appendTransferRows(table, transfers);
  body.append(table);
  return body;
}

function appendTransferRows(table: HTMLTableElement, transfers: WhaleTransfer[]): void {
  for (const row of table.querySelectorAll("tr.transfer-row")) {
    row.remove();
  }
  for (const t of transfers) {
    const tr = el("tr", "transfer-row");
    tr.append(
      el("td", "num", String(t.usd_value)),
      el("td", "num", String(t.amount)),
      el("td", undefined, t.from_label),
      el("td", undefined, t.to_label),
      el("td", `intent intent-${t.intent}`, t.intent),
    );
    table.append(tr);
  }
}

function sortRows(table: HTMLTableElement, transfers: WhaleTransfer[], key: keyof WhaleTransfer): void {
  const sorted = [...transfers].sort((a, b) => {
    const left = a[key];
    const right = b[key];
    if (typeof left === "number" && typeof right === "number") {
      return right - left;
    }
    return String(left).localeCompare(String(right));
  });
  transfers.splice(0, transfers.length, ...sorted);
  appendTransferRows(table, transfers);
}

function securityPanel(data: SecurityReport): HTMLElement {
  const body = el("div", "panel-body");
  body.append(el("p", `risk risk-${data.overall_risk}`, `overall risk: ${data.overall_risk}`));
  body.append(el("p", "summary", data.summary));
  const surviving = data.findings.filter((f) => !f.false_positive);
  if (surviving.length === 0) {
    body.append(el("p", "all-clear", "No high/medium issues stand after screening."));
  }
  for (const severity of ["high", "medium"] as const) {
    const group = data.findings.filter((f) => f.severity === severity);
    if (group.length === 0) {
      continue;
    }
    const section = el("div", `findings findings-${severity}`);
    section.append(el("h4", undefined, `${severity} severity`));
    for (const finding of group) {
      const item = el("article", finding.false_positive ? "finding false-positive" : "finding");
      item.append(
        el("h5", undefined, `${finding.kind} @ ${finding.location.contract}:${finding.location.line}`),
        el("p", undefined, finding.description),
      );
      if (finding.snippet) {
        item.append(el("pre", "snippet", finding.snippet));
      }
      if (finding.false_positive) {
        item.append(el("p", "fp-note", "screened as likely false positive"));
      }
      section.append(item);
    }
    body.append(section);
  }
  return body;
}

function newsPanel(data: Record<string, unknown>): HTMLElement {
  const body = el("div", "panel-body news-cards");
  for (const item of (data.items as NewsItem[]) ?? []) {
    const card = el("article", `news-card sentiment-${item.sentiment}`);
    card.append(
      el("h5", undefined, item.headline),
      el("p", "news-meta", `${item.published_at} · ${item.category} · ${item.sentiment} · impact ${item.magnitude}`),
    );
    if (item.affected_assets.length > 0) {
      card.append(el("p", "assets", `affects: ${item.affected_assets.join(", ")}`));
    }
    body.append(card);
  }
  if (typeof data.synthesis === "string" && data.synthesis) {
    body.append(el("p", "synthesis", data.synthesis));
  }
  return body;
}

function sectionedPanel(data: Record<string, unknown>, keys: string[]): HTMLElement {
  const body = el("div", "panel-body report-sections");
  if (typeof data.project === "string") {
    body.append(el("h4", undefined, data.project));
  }
  for (const key of keys) {
    if (typeof data[key] === "string") {
      const section = el("div", "report-section");
      section.append(el("h5", undefined, key), el("p", undefined, data[key] as string));
      body.append(section);
    }
  }
  const critique = data.critique as Record<string, string> | undefined;
  if (critique) {
    const section = el("div", "report-section critique");
    section.append(el("h5", undefined, "critique"));
    for (const [key, value] of Object.entries(critique)) {
      section.append(el("p", undefined, `${key}: ${value}`));
    }
    body.append(section);
  }
  const sources = data.sources as string[] | undefined;
  if (sources && sources.length > 0) {
    const list = el("ul", "sources");
    for (const url of sources) {
      const item = el("li");
      const anchor = el("a", undefined, url);
      anchor.setAttribute("href", url);
      item.append(anchor);
      list.append(item);
    }
    body.append(list);
  }
  return body;
}

function eventsPanel(data: Record<string, unknown>): HTMLElement {
  const body = el("div", "panel-body report-sections");
  const events = (data.events as Array<Record<string, unknown>>) ?? [];
  for (const event of events) {
    const section = el("div", "report-section event");
    section.append(el("h5", undefined, `${event.date} — ${event.title}`));
    section.append(el("p", undefined, String(event.description ?? "")));
    const impact = event.impact_analysis as Record<string, string> | undefined;
    if (impact) {
      for (const [key, value] of Object.entries(impact)) {
        section.append(el("p", "impact-note", `${key}: ${value}`));
      }
    }
    body.append(section);
  }
  if (events.length === 0) {
    body.append(el("p", undefined, "No events inside the lookback window."));
  }
  return body;
}

function rawFallback(data: Record<string, unknown>): HTMLElement {
  const pre = el("pre", "raw-fallback");
  pre.textContent = JSON.stringify(data, null, 2);
  return pre;
}
