"""Command-line interface.

Subcommands:
  serve      run the HTTP service (SSE chat API + optional static UI)
  chat       terminal REPL over the same orchestration loop
  simulate   roll a scripted episode against simulated tools -> transcript
  score      score a transcript file (syntactic + judge reward breakdown)
  judge      judge a (query, plan) pair
  train-toy  train the toy policy; writes policy JSON + curve CSV + PNG
  eval       evaluate a caller on a dataset; writes report JSON + CSV + PNG
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .. import reporting
from ..calls import ToolCall, parse_action_text, validate_calls
from ..episode import EnvConfig, load_transcript, run_episode, scripted_policy, trajectory_to_dict
from ..evaluation import desk_dataset_path, load_dataset, run_eval
from ..judge import judge as judge_call
from ..lab import (
    CoverageProxyJudge,
    PPOConfig,
    SamplingConfig,
    ToyPolicy,
    make_caller,
    train,
)
from ..registry import default_catalog
from ..rewards import RewardConfig, trajectory_reward
from .config import build_judge_backend, build_orchestrator, load_config


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help()
        return 2
    return args.func(args) or 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tokenscope")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--config", default=None)
    p.add_argument("--ui", default=None, help="static UI bundle directory to serve at /")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("chat", help="terminal chat REPL")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_chat)

    p = sub.add_parser("simulate", help="run a scripted episode with simulated tools")
    p.add_argument("--script", required=True, help="JSON file: list of action texts")
    p.add_argument("--query", required=True)
    p.add_argument("--out", default=None, help="transcript path (default stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("score", help="score a transcript file")
    p.add_argument("--transcript", required=True)
    p.add_argument("--judge", choices=("proxy", "live"), default="proxy")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("judge", help="judge a (query, plan) pair")
    p.add_argument("--query", required=True)
    p.add_argument("--plan", required=True, help="JSON call list, or @file")
    p.add_argument("--judge", choices=("proxy", "live"), default="proxy")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_judge)

    p = sub.add_parser("train-toy", help="train the toy policy")
    p.add_argument("--prompts", default=None, help="dataset JSONL or plain-text prompts (default: shipped set)")
    p.add_argument("--config", default=None, help="PPO config JSON")
    p.add_argument("--out", required=True, help="policy file")
    p.add_argument("--curve", required=True, help="per-batch metrics CSV (PNG written alongside)")
    p.set_defaults(func=cmd_train_toy)

    p = sub.add_parser("eval", help="evaluate a caller on a dataset")
    p.add_argument("--dataset", default=None, help="JSONL dataset (default: shipped set)")
    p.add_argument("--caller", required=True, help="toy:<policy file> or live")
    p.add_argument("--mode", choices=("name", "strict"), default="name")
    p.add_argument("--out", required=True, help="report JSON (CSV and PNG written alongside)")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_eval)

    return parser


def cmd_serve(args) -> int:
    import uvicorn

    from .http import create_app

    orchestrator = build_orchestrator(load_config(args.config))
    app = create_app(orchestrator, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_chat(args) -> int:
    orchestrator = build_orchestrator(load_config(args.config))
    session = orchestrator.create_session()
    print(f"session {session.session_id} — type a question, or /quit")
    while True:
        try:
            text = input("you> ").strip()
        except (EOFError, KeyboardInterrupt):
            print()
            return 0
        if not text:
            continue
        if text in ("/quit", "/exit"):
            return 0
        for event in orchestrator.handle_message(session.session_id, text):
            if event.kind == "plan":
                names = ", ".join(c["name"] for c in event.payload["calls"])
                print(f"  [plan] {names}")
            elif event.kind == "tool_result":
                print(f"  [{event.payload['tool']}] {event.payload['type']}")
            elif event.kind == "answer_delta":
                sys.stdout.write(event.payload["text"])
                sys.stdout.flush()
            elif event.kind == "done":
                print()
            elif event.kind == "error":
                print(f"  [error:{event.payload.get('stage')}] {event.payload.get('error')}")
    return 0


def cmd_simulate(args) -> int:
    script = json.loads(Path(args.script).read_text())
    catalog = default_catalog()
    trajectory = run_episode(scripted_policy(script), args.query, catalog)
    doc = trajectory_to_dict(trajectory)
    payload = json.dumps(doc, indent=2)
    if args.out:
        Path(args.out).write_text(payload + "\n")
        print(f"wrote {args.out}")
    else:
        print(payload)
    return 0


def _judge_backend(kind: str, config_path):
    if kind == "proxy":
        return CoverageProxyJudge()
    return build_judge_backend(load_config(config_path))


def cmd_score(args) -> int:
    catalog = default_catalog()
    doc = load_transcript(args.transcript)
    history: list[ToolCall] = []
    violations = []
    for action_doc in doc.get("actions", []):
        action = parse_action_text(action_doc.get("raw_text", ""))
        violations.extend(validate_calls(action, catalog, prior_calls=history))
        history.extend(action.calls)
    backend = _judge_backend(args.judge, args.config)
    verdict = judge_call(doc["query"], history, catalog, backend)
    breakdown = trajectory_reward(
        doc["query"], history, violations, verdict.scores, RewardConfig(), verdict.flagged
    )
    payload = json.dumps(breakdown.to_dict(), indent=2)
    if args.out:
        Path(args.out).write_text(payload + "\n")
        print(f"wrote {args.out}")
    else:
        print(payload)
    return 0


def cmd_judge(args) -> int:
    catalog = default_catalog()
    plan_text = args.plan
    if plan_text.startswith("@"):
        plan_text = Path(plan_text[1:]).read_text()
    action = parse_action_text(plan_text)
    if action.kind == "fatal_unparsable":
        print("plan is not a valid call list", file=sys.stderr)
        return 2
    backend = _judge_backend(args.judge, args.config)
    verdict = judge_call(args.query, list(action.calls), catalog, backend)
    from ..judge import semantic_reward

    print(
        json.dumps(
            {
                "information_coverage": verdict.scores.coverage,
                "relevance": verdict.scores.relevance,
                "semantic_reward": semantic_reward(verdict.scores),
                "flagged": verdict.flagged,
            },
            indent=2,
        )
    )
    return 0


def load_prompts(path: str | None, catalog) -> list[str]:
    if path is None:
        return [ex.prompt for ex in load_dataset(desk_dataset_path(), catalog)]
    text = Path(path).read_text()
    first = text.lstrip()[:1]
    if first == "{":
        return [ex.prompt for ex in load_dataset(path, catalog)]
    return [line.strip() for line in text.splitlines() if line.strip()]


def load_ppo_config(path: str | None) -> PPOConfig:
    if path is None:
        return PPOConfig()
    doc = json.loads(Path(path).read_text())
    sampling = doc.pop("sampling", None)
    if sampling:
        doc["sampling"] = SamplingConfig(**sampling)
    valid = {f.name for f in dataclasses.fields(PPOConfig)}
    unknown = set(doc) - valid
    if unknown:
        raise SystemExit(f"unknown PPO config keys: {sorted(unknown)}")
    return PPOConfig(**doc)


def cmd_train_toy(args) -> int:
    catalog = default_catalog()
    prompts = load_prompts(args.prompts, catalog)
    cfg = load_ppo_config(args.config)
    policy, curve = train(
        prompts,
        catalog,
        ppo_config=cfg,
        judge_backend=CoverageProxyJudge(),
    )
    policy.save(args.out)
    curve_path = reporting.write_curve_csv(curve, args.curve)
    figure_path = reporting.render_curve_figure(curve, Path(args.curve).with_suffix(".png"))
    print(f"wrote {args.out}, {curve_path}, {figure_path}")
    if curve:
        last = curve[-1]
        print(
            f"final batch: reward={last.mean_reward:.3f} coverage={last.mean_coverage:.2f} "
            f"plan_size={last.mean_plan_size:.2f}"
        )
    return 0


def cmd_eval(args) -> int:
    catalog = default_catalog()
    dataset = load_dataset(args.dataset or desk_dataset_path(), catalog)
    if args.caller.startswith("toy:"):
        policy = ToyPolicy.load(args.caller[4:])
        caller = make_caller(policy, catalog, "greedy")
    elif args.caller == "live":
        from ..gateway import CompletionRequest, Message
        from .config import build_clients

        clients = build_clients(load_config(args.config))

        def caller(state):
            result = clients.caller.complete(
                CompletionRequest(
                    model_id=clients.models.caller,
                    messages=tuple(Message(t.role, t.content) for t in state.turns),
                    mode="greedy",
                )
            )
            return result.text

    else:
        raise SystemExit("--caller must be toy:<policy file> or live")
    report, _transcripts = run_eval(caller, dataset, catalog, EnvConfig(), mode=args.mode)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    csv_path = reporting.write_eval_csv(report, out.with_suffix(".csv"))
    png_path = reporting.render_eval_figure(report, out.with_suffix(".png"))
    print(f"wrote {out}, {csv_path}, {png_path}")
    print(
        f"n={len(report.per_prompt)} failed={report.failed} mode={report.mode} "
        f"P={report.mean_precision:.3f} R={report.mean_recall:.3f} F1={report.f1:.3f}"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
