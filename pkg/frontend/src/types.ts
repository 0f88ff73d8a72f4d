// Event and document shapes mirrored from the chat service API.

export type EventKind =
  | "plan"
  | "tool_call"
  | "tool_result"
  | "answer_delta"
  | "done"
  | "error";

export interface ChatEvent {
  kind: EventKind;
  payload: Record<string, unknown>;
  seq: number;
}

export interface PlanCall {
  name: string;
  arguments: Record<string, unknown>;
}

export interface ToolResultPayload {
  tool: string;
  type: string;
  duration_ms: number;
  truncated?: boolean;
  ref?: string;
  data: Record<string, unknown>;
}

export interface Candle {
  open_time: number;
  open: number;
  high: number;
  low: number;
  close: number;
  volume: number;
}

export interface MarketSnapshot {
  symbol: string;
  price: number;
  change_24h: number;
  volume_24h: number;
  candles: Candle[];
}

export interface WhaleTransfer {
  tx_hash: string;
  timestamp: number;
  token: string;
  amount: number;
  usd_value: number;
  from_label: string;
  to_label: string;
  intent: string;
}

export interface SecurityFinding {
  kind: string;
  severity: "high" | "medium";
  location: { contract: string; line: number };
  description: string;
  snippet: string;
  false_positive: boolean;
}

export interface SecurityReport {
  address: string;
  findings: SecurityFinding[];
  summary: string;
  overall_risk: "low" | "medium" | "high";
  degraded: boolean;
}

export interface NewsItem {
  published_at: string;
  headline: string;
  category: string;
  sentiment: "bullish" | "bearish" | "neutral";
  affected_assets: string[];
  magnitude: "low" | "medium" | "high";
}

export interface Turn {
  role: "system" | "user" | "assistant" | "tool";
  content: string;
}

export interface Transcript {
  session_id: string;
  created_at: string;
  status: string;
  turns: Turn[];
}

export interface SessionSummary {
  session_id: string;
  created_at: string;
  status: string;
  turns: number;
}
