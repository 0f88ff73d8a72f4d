"""Shared plumbing for the agent pipelines: template loading and strict
structured-output parsing with one retry."""

from __future__ import annotations

import json
from importlib import resources
from string import Template

from ..gateway import Backend, CompletionRequest, Message

_RETRY_NOTE = (
    "Your previous reply could not be parsed. Respond with ONLY the requested "
    "JSON value — no prose, no markdown fences."
)


def load_template(name: str) -> Template:
    text = resources.files("tokenscope").joinpath(f"templates/{name}.txt").read_text()
    return Template(text)


def parse_json_payload(text: str):
    """First JSON object or array found in the text, tolerating fences and
    prose. None when nothing decodes."""
    decoder = json.JSONDecoder()
    starts = sorted(i for i in (text.find("{"), text.find("[")) if i != -1)
    idx = starts[0] if starts else -1
    while idx != -1 and idx < len(text):
        if text[idx] in "{[":
            try:
                obj, _ = decoder.raw_decode(text, idx)
                return obj
            except json.JSONDecodeError:
                pass
        idx += 1
    return None


def structured_completion(prompt: str, backend: Backend, model_id: str = "reasoner"):
    """One completion demanding structured output, with one retry appending a
    format reminder. Returns (parsed_or_None, raw_text)."""
    messages = [Message("user", prompt)]
    text = ""
    for attempt in range(2):
        result = backend.complete(
            CompletionRequest(model_id=model_id, messages=tuple(messages), mode="greedy")
        )
        text = result.text
        parsed = parse_json_payload(text)
        if parsed is not None:
            return parsed, text
        if attempt == 0:
            messages = messages + [
                Message("assistant", text or "(empty)"),
                Message("user", _RETRY_NOTE),
            ]
    return None, text
