"""Per-message serving loop: the caller plans tools step by step against real
executions, tool outputs feed back into its context, and the reasoner
synthesizes the final streamed answer.

The loop shares parse/validate code with the training environment, so serving
and simulation cannot diverge on action semantics. Each message produces a
gapless event stream terminated by exactly one done or error event.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Iterator

from ..calls import ToolCall, parse_action_text, validate_calls
from ..episode import build_system_prompt
from ..errors import TokenscopeError
from ..gateway import Backend, CompletionRequest, Message, RoleModels
from ..registry import ToolCatalog
from ..tools import (
    AddressLabelDirectory,
    Analyzer,
    ExplorerClient,
    MarketClient,
    NewsClient,
    SearchClient,
    TokenDirectoryClient,
    fetch_verified_source,
    filter_findings,
    large_transfers,
    market_overview,
    resolve_contract,
    run_static_analysis,
    summarize_security,
    token_market,
)
from ..agents import cn_report, he_report, pb_report
from .sessions import SessionStore

MAX_PLANNING_STEPS = 6
TOOL_PAYLOAD_BUDGET = 4000  # characters injected into model context per tool
ANSWER_DELTA_CHARS = 160

BLOCKING_VIOLATIONS = ("fatal_invalid_name", "fatal_unparsable", "missing_param", "invalid_param", "wrong_type")


@dataclass(frozen=True)
class ChatEvent:
    kind: str  # plan | tool_call | tool_result | answer_delta | done | error
    payload: dict
    seq: int

    def to_dict(self) -> dict:
        return {"kind": self.kind, "payload": self.payload, "seq": self.seq}


@dataclass
class ServiceClients:
    caller: Backend
    reasoner: Backend
    catalog: ToolCatalog
    market: MarketClient
    directory: TokenDirectoryClient
    explorer: ExplorerClient
    labels: AddressLabelDirectory
    analyzer: Analyzer
    news: NewsClient
    search: SearchClient
    models: RoleModels = field(default_factory=RoleModels)


def execute_tool(call: ToolCall, clients: ServiceClients) -> dict:
    """Dispatch one call to its implementation and wrap the output with tool
    name, duration, and a type tag for panel rendering. Calls with fatal or
    major schema violations are never executed; they get a validation-error
    result instead."""
    started = time.monotonic()
    single = parse_action_text(json.dumps([{"name": call.tool, "arguments": call.args}]))
    blocked = [
        v
        for v in validate_calls(single, clients.catalog)
        if v.kind in BLOCKING_VIOLATIONS
    ]
    if blocked:
        detail = "; ".join(v.detail for v in blocked)
        return _wrap(call.tool, "validation_error", {"error": detail}, started)
    try:
        doc_type, data = _dispatch(call, clients)
    except TokenscopeError as exc:
        return _wrap(call.tool, "tool_error", {"error": str(exc)}, started)
    except Exception as exc:  # tool bugs degrade to an error result, loop survives
        return _wrap(call.tool, "tool_error", {"error": f"unexpected failure: {exc}"}, started)
    return _wrap(call.tool, doc_type, data, started)


def _wrap(tool: str, doc_type: str, data: dict, started: float) -> dict:
    return {
        "tool": tool,
        "type": doc_type,
        "duration_ms": int((time.monotonic() - started) * 1000),
        "data": data,
    }


def _dispatch(call: ToolCall, clients: ServiceClients) -> tuple[str, dict]:
    args = call.args
    if call.tool == "market_analysis":
        if args.get("view") == "market_overview":
            return "market_overview", market_overview(clients.market).to_dict()
        token = args.get("token")
        if not token:
            return "tool_error", {"error": "token is required when view=token_detail"}
        return "market_snapshot", token_market(clients.market, token).to_dict()
    if call.tool == "transaction_analysis":
        token = args["token"]
        address = token if str(token).startswith("0x") else resolve_contract(clients.directory, token)
        transfers = large_transfers(
            clients.explorer,
            address,
            token if not str(token).startswith("0x") else "ETH",
            clients.market,
            clients.labels,
            min_usd=float(args.get("min_usd", 1_000_000)),
        )
        return "whale_transfers", {
            "token": str(token).upper(),
            "address": address,
            "transfers": [t.to_dict() for t in transfers],
        }
    if call.tool == "code_analysis":
        target = str(args["token_or_address"])
        address = target if target.startswith("0x") else resolve_contract(clients.directory, target)
        bundle = fetch_verified_source(clients.explorer, address)
        raw = run_static_analysis(clients.analyzer, bundle)
        findings = filter_findings(raw, bundle)
        report = summarize_security(
            findings, clients.reasoner, address=address, model_id=clients.models.reasoner
        )
        return "security_report", report.to_dict()
    if call.tool == "project_background_agent":
        report = pb_report(str(args["project"]), clients.search, clients.reasoner)
        return "project_report", report.to_dict()
    if call.tool == "historical_events_agent":
        return "historical_events", he_report(
            str(args["token"]),
            clients.news,
            clients.reasoner,
            window_days=int(args.get("window_days", 365)),
        )
    if call.tool == "crypto_news_agent":
        return "news_digest", cn_report(
            clients.news,
            clients.reasoner,
            topic=args.get("topic"),
            limit=int(args.get("limit", 10)),
        )
    raise TokenscopeError(f"no dispatcher for tool {call.tool!r}")


class Orchestrator:
    def __init__(self, clients: ServiceClients, store: SessionStore | None = None):
        self.clients = clients
        self.store = store or SessionStore()

    # ------------------------------------------------------------------
    # session lifecycle
    # ------------------------------------------------------------------

    def create_session(self):
        return self.store.create()

    def get_session(self, session_id: str):
        return self.store.get(session_id)

    def list_sessions(self):
        return self.store.list_sessions()

    # ------------------------------------------------------------------
    # message handling
    # ------------------------------------------------------------------

    def handle_message(self, session_id: str, text: str) -> Iterator[ChatEvent]:
        """Run the caller/tools/reasoner loop for one user message, yielding
        the event stream. Exactly one done or error event terminates it."""
        if not text or not text.strip():
            raise ValueError("message text must be non-empty")
        session = self.store.begin_message(session_id)
        seq = 0

        def event(kind: str, payload: dict) -> ChatEvent:
            nonlocal seq
            out = ChatEvent(kind=kind, payload=payload, seq=seq)
            seq += 1
            return out

        failed = False
        try:
            context = self._caller_context(session, text)
            self.store.append_turn(session_id, "user", text)
            history: list[ToolCall] = []
            outputs: list[dict] = []
            fatal_parse = False

            for step_idx in range(MAX_PLANNING_STEPS):
                try:
                    completion = self.clients.caller.complete(
                        CompletionRequest(
                            model_id=self.clients.models.caller,
                            messages=tuple(context),
                            mode="greedy",
                        )
                    )
                except TokenscopeError as exc:
                    yield event("error", {"stage": "caller", "error": str(exc)})
                    failed = True
                    return
                action = parse_action_text(completion.text)
                self.store.append_turn(session_id, "assistant", completion.text or "(empty)")
                context.append(Message("assistant", completion.text or "(empty)"))
                if action.kind == "stop":
                    yield event("plan", {"step": step_idx, "calls": [], "stop": True})
                    break
                if action.kind == "fatal_unparsable":
                    fatal_parse = True
                    break
                yield event(
                    "plan",
                    {
                        "step": step_idx,
                        "calls": [{"name": c.tool, "arguments": c.args} for c in action.calls],
                    },
                )
                for call in action.calls:
                    single = parse_action_text(
                        json.dumps([{"name": call.tool, "arguments": call.args}])
                    )
                    violations = validate_calls(single, self.clients.catalog, prior_calls=history)
                    blocked = [v for v in violations if v.kind in BLOCKING_VIOLATIONS]
                    yield event("tool_call", {"name": call.tool, "arguments": call.args})
                    if blocked:
                        document = {
                            "tool": call.tool,
                            "type": "validation_error",
                            "duration_ms": 0,
                            "data": {"error": "; ".join(v.detail for v in blocked)},
                        }
                    else:
                        document = execute_tool(call, self.clients)
                    history.append(call)
                    outputs.append(document)
                    ref = f"r{len(outputs) - 1}"
                    body_text = json.dumps(document["data"], sort_keys=True)
                    truncated = len(body_text) > TOOL_PAYLOAD_BUDGET
                    payload_doc = dict(document)
                    payload_doc["truncated"] = truncated
                    payload_doc["ref"] = ref
                    if truncated:
                        payload_doc["data"] = {"preview": body_text[:TOOL_PAYLOAD_BUDGET]}
                    self.store.add_artifact(session_id, ref, document)
                    yield event("tool_result", payload_doc)
                    turn_text = _tool_turn_text(document, truncated, body_text)
                    self.store.append_turn(session_id, "tool", turn_text)
                    context.append(Message("tool", turn_text))

            try:
                answer = self._reason(text, outputs, fatal_parse)
            except TokenscopeError as exc:
                yield event("error", {"stage": "reasoner", "error": str(exc)})
                failed = True
                return
            for chunk_start in range(0, len(answer), ANSWER_DELTA_CHARS):
                yield event("answer_delta", {"text": answer[chunk_start : chunk_start + ANSWER_DELTA_CHARS]})
            self.store.append_turn(session_id, "assistant", answer)
            yield event(
                "done",
                {
                    "tool_calls": len(history),
                    "degraded": fatal_parse,
                },
            )
        except Exception as exc:  # terminal-event-exactly-once even on bugs
            failed = True
            yield event("error", {"stage": "internal", "error": str(exc)})
        finally:
            self.store.finish_message(session_id, failed=failed)

    # ------------------------------------------------------------------
    # context construction
    # ------------------------------------------------------------------

    def _caller_context(self, session, text: str) -> list[Message]:
        """System prompt plus the last two user turns and a summary of the
        previous exchange's tool calls."""
        messages = [Message("system", build_system_prompt(self.clients.catalog))]
        last_user_idx = None
        for i, turn in enumerate(session.turns):
            if turn.role == "user":
                last_user_idx = i
        if last_user_idx is not None:
            messages.append(Message("user", session.turns[last_user_idx].content))
            called = _previous_exchange_tools(session.turns[last_user_idx + 1 :])
            if called:
                messages.append(
                    Message("assistant", "Previously called tools: " + ", ".join(called))
                )
        messages.append(Message("user", text))
        return messages

    def _reason(self, query: str, outputs: list[dict], fatal_parse: bool) -> str:
        sections = []
        for doc in outputs:
            body = json.dumps(doc["data"], sort_keys=True)
            if len(body) > TOOL_PAYLOAD_BUDGET:
                body = body[:TOOL_PAYLOAD_BUDGET] + "...(truncated)"
            status = "failed" if doc["type"] in ("tool_error", "validation_error") else "ok"
            sections.append(f"### {doc['tool']} [{status}]\n{body}")
        evidence = "\n\n".join(sections) if sections else "(no tool outputs are available)"
        note = (
            "\nNote: the planning stage produced unusable output, so no tools ran; "
            "answer from general knowledge and say so."
            if fatal_parse
            else ""
        )
        prompt = (
            "You are a cryptocurrency analysis assistant. Using only the tool outputs "
            f"below, answer the user's question; cite which tools informed each point. "
            f"If a tool failed, work around it and mention the gap.{note}\n\n"
            f"User question: {query}\n\nTool outputs:\n{evidence}"
        )
        result = self.clients.reasoner.complete(
            CompletionRequest(
                model_id=self.clients.models.reasoner,
                messages=(Message("user", prompt),),
                mode="greedy",
            )
        )
        return result.text


def _tool_turn_text(document: dict, truncated: bool, body_text: str) -> str:
    if document["type"] in ("tool_error", "validation_error"):
        return f"[tool error] {document['tool']}: {document['data'].get('error', 'failed')}"
    body = body_text[:TOOL_PAYLOAD_BUDGET] + ("...(truncated)" if truncated else "")
    return f"[{document['tool']}] {body}"


def _previous_exchange_tools(turns) -> list[str]:
    called: list[str] = []
    for turn in turns:
        if turn.role != "tool":
            continue
        name = turn.content.split("]", 1)[0].lstrip("[")
        if name.startswith("tool error"):
            name = turn.content.split(":", 1)[0].split("]", 1)[-1].strip()
        if name and name not in called:
            called.append(name)
    return called
