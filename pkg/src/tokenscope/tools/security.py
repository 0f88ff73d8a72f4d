"""Smart-contract security pipeline.

Stage 1 fetches the verified source bundle (onchain module), stage 2 runs a
static analyzer over it, stage 3 keeps only high/medium findings, attaches
source snippets, asks an LLM to screen false positives, and emits a plain-
language risk report.

The analyzer sits behind an interface: SubprocessAnalyzer shells out to an
installed slither-compatible executable and parses its JSON report;
FixtureAnalyzer replays recorded analyzer output through that same parser.
"""

from __future__ import annotations

import hashlib
import json
import os
import shutil
import subprocess
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path

from ..errors import AnalysisFailedError, AnalyzerUnavailableError
from ..gateway import Backend, CompletionRequest, Message
from .fixtures import FixtureStore
from .onchain import SourceBundle

SEVERITIES = ("high", "medium", "low", "informational")
KEPT_SEVERITIES = ("high", "medium")
SNIPPET_CONTEXT_LINES = 3


@dataclass(frozen=True)
class RawFinding:
    kind: str
    severity: str  # high | medium | low | informational
    contract: str
    line: int
    description: str


@dataclass(frozen=True)
class SecurityFinding:
    kind: str
    severity: str  # high | medium only
    contract: str
    line: int
    description: str
    snippet: str = ""
    false_positive: bool = False

    def __post_init__(self):
        if self.severity not in KEPT_SEVERITIES:
            raise ValueError(f"filtered finding must be high or medium, got {self.severity!r}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "severity": self.severity,
            "location": {"contract": self.contract, "line": self.line},
            "description": self.description,
            "snippet": self.snippet,
            "false_positive": self.false_positive,
        }


@dataclass(frozen=True)
class SecurityReport:
    address: str
    findings: tuple[SecurityFinding, ...]
    summary: str
    overall_risk: str  # low | medium | high
    degraded: bool = False

    def to_dict(self) -> dict:
        return {
            "address": self.address,
            "findings": [f.to_dict() for f in self.findings],
            "summary": self.summary,
            "overall_risk": self.overall_risk,
            "degraded": self.degraded,
        }


def bundle_digest(bundle: SourceBundle) -> str:
    blob = json.dumps({"files": bundle.files, "name": bundle.contract_name}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def parse_analyzer_output(doc: dict) -> list[RawFinding]:
    """Parse a slither-style JSON report: results.detectors with check,
    impact, description and element source mappings."""
    detectors = (doc.get("results") or {}).get("detectors") or []
    findings = []
    for det in detectors:
        severity = str(det.get("impact", "")).strip().lower()
        if severity not in SEVERITIES:
            severity = "informational"
        contract, line = "", 0
        for element in det.get("elements") or []:
            mapping = element.get("source_mapping") or {}
            lines = mapping.get("lines") or []
            if lines:
                contract = element.get("name") or mapping.get("filename_short", "")
                line = int(lines[0])
                break
        findings.append(
            RawFinding(
                kind=det.get("check", "unknown"),
                severity=severity,
                contract=contract,
                line=line,
                description=(det.get("description") or "").strip(),
            )
        )
    return findings


class Analyzer:
    def run(self, bundle: SourceBundle) -> list[RawFinding]:
        raise NotImplementedError


class SubprocessAnalyzer(Analyzer):
    """Invokes the configured analyzer executable on a materialized bundle.

    The executable must accept a target path and `--json -` and emit the
    report on stdout. Concurrency is capped because static analysis is
    memory-hungry.
    """

    def __init__(self, executable: str | None = None, max_concurrency: int = 2):
        self.executable = executable or os.environ.get("ANALYZER_PATH", "")
        self._semaphore = threading.Semaphore(max_concurrency)

    def run(self, bundle: SourceBundle) -> list[RawFinding]:
        if not self.executable or not shutil.which(self.executable):
            raise AnalyzerUnavailableError(
                "static analyzer not found; set ANALYZER_PATH or use fixture replay"
            )
        with tempfile.TemporaryDirectory(prefix="bundle-") as tmp:
            root = Path(tmp)
            for fname, body in bundle.files.items():
                target = root / fname
                target.parent.mkdir(parents=True, exist_ok=True)
                target.write_text(body)
            entry = root if len(bundle.files) > 1 else root / next(iter(bundle.files))
            with self._semaphore:
                proc = subprocess.run(
                    [self.executable, str(entry), "--json", "-"],
                    capture_output=True,
                    text=True,
                    timeout=300,
                )
        if not proc.stdout.strip():
            raise AnalysisFailedError(
                f"analyzer exited {proc.returncode} with no output: {proc.stderr[:200]}"
            )
        try:
            doc = json.loads(proc.stdout)
        except json.JSONDecodeError as exc:
            raise AnalysisFailedError(f"analyzer emitted non-JSON output: {exc}") from exc
        return parse_analyzer_output(doc)


class FixtureAnalyzer(Analyzer):
    """Replays recorded analyzer reports, keyed by bundle content digest, and
    parses them with the same parser as the live path."""

    def __init__(self, store: FixtureStore | None = None):
        self.store = store or FixtureStore()

    def run(self, bundle: SourceBundle) -> list[RawFinding]:
        doc = self.store.fetch(
            "analyzer", {"bundle": bundle_digest(bundle)}, lambda: _no_live(bundle)
        )
        return parse_analyzer_output(doc)


def _no_live(bundle):
    raise AnalyzerUnavailableError("FixtureAnalyzer has no live path; record with SubprocessAnalyzer")


def run_static_analysis(analyzer: Analyzer, bundle: SourceBundle) -> list[RawFinding]:
    return analyzer.run(bundle)


def filter_findings(
    raw: list[RawFinding], bundle: SourceBundle | None = None
) -> list[SecurityFinding]:
    """Keep only high/medium findings, each enriched with a source snippet of
    +-3 lines around its location when the bundle is available."""
    kept = []
    for finding in raw:
        if finding.severity not in KEPT_SEVERITIES:
            continue
        kept.append(
            SecurityFinding(
                kind=finding.kind,
                severity=finding.severity,
                contract=finding.contract,
                line=finding.line,
                description=finding.description,
                snippet=_snippet(bundle, finding) if bundle else "",
            )
        )
    return kept


def _snippet(bundle: SourceBundle, finding: RawFinding) -> str:
    for body in bundle.files.values():
        lines = body.splitlines()
        if 1 <= finding.line <= len(lines):
            lo = max(0, finding.line - 1 - SNIPPET_CONTEXT_LINES)
            hi = min(len(lines), finding.line + SNIPPET_CONTEXT_LINES)
            if finding.contract and finding.contract not in body:
                continue
            return "\n".join(lines[lo:hi])
    return ""


_SUMMARY_PROMPT = (
    "You are a smart-contract security analyst. Review the static-analysis findings "
    "below, decide which are likely false positives given their code snippets, and "
    "write a short plain-language risk summary for an investor.\n\n"
    "Findings:\n{findings}\n\n"
    "Respond with exactly one JSON object:\n"
    '{{"false_positive_indices": [<0-based indices>], "summary": "<2-5 sentences>"}}'
)


def summarize_security(
    findings: list[SecurityFinding],
    backend: Backend,
    address: str = "",
    model_id: str = "reasoner",
) -> SecurityReport:
    """Stage 3 tail: false-positive screening plus the narrative summary.

    One completion with one retry on unparsable output; if both fail, the
    report keeps every finding unflagged, uses the raw text as summary, and
    is marked degraded.
    """
    if not findings:
        return SecurityReport(
            address=address,
            findings=(),
            summary="No high or medium severity issues were found by static analysis.",
            overall_risk="low",
        )
    listing = "\n".join(
        f"[{i}] {f.severity.upper()} {f.kind} at {f.contract}:{f.line} — {f.description}\n"
        f"    snippet:\n{_indent(f.snippet)}"
        for i, f in enumerate(findings)
    )
    prompt = _SUMMARY_PROMPT.format(findings=listing)
    verdict, text = None, ""
    for _attempt in range(2):
        result = backend.complete(
            CompletionRequest(
                model_id=model_id,
                messages=(Message("user", prompt),),
                mode="greedy",
            )
        )
        text = result.text
        verdict = _parse_verdict(text)
        if verdict is not None:
            break
    if verdict is None:
        flagged = list(findings)
        summary = text.strip() or "Security summary unavailable."
        degraded = True
    else:
        fp_indices, summary = verdict
        flagged = [
            SecurityFinding(
                kind=f.kind,
                severity=f.severity,
                contract=f.contract,
                line=f.line,
                description=f.description,
                snippet=f.snippet,
                false_positive=(i in fp_indices),
            )
            for i, f in enumerate(findings)
        ]
        degraded = False
    surviving = [f for f in flagged if not f.false_positive]
    if not surviving:
        risk = "low"
    elif any(f.severity == "high" for f in surviving):
        risk = "high"
    else:
        risk = "medium"
    return SecurityReport(
        address=address,
        findings=tuple(flagged),
        summary=summary,
        overall_risk=risk,
        degraded=degraded,
    )


def _parse_verdict(text: str):
    decoder = json.JSONDecoder()
    idx = text.find("{")
    while idx != -1:
        try:
            obj, _ = decoder.raw_decode(text, idx)
        except json.JSONDecodeError:
            idx = text.find("{", idx + 1)
            continue
        if isinstance(obj, dict) and "summary" in obj:
            indices = obj.get("false_positive_indices", [])
            if isinstance(indices, list) and all(isinstance(i, int) for i in indices):
                return set(indices), str(obj["summary"])
        idx = text.find("{", idx + 1)
    return None


def _indent(text: str, prefix: str = "      ") -> str:
    return "\n".join(prefix + line for line in text.splitlines()) if text else prefix + "(none)"
