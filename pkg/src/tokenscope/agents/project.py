"""Project background agent: gather web documents, synthesize the base
profile, then critique it.

Degrades explicitly: zero documents yields an all-"insufficient data" profile
without calling the backend, and unparsable backend output (after one retry)
yields a flagged degraded report rather than an exception.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..gateway import Backend
from ..tools.feeds import SearchClient
from .shared import load_template, structured_completion

INSUFFICIENT = "insufficient data"
BASE_SECTIONS = ("overview", "team", "tokenomics", "technology")
CRITIQUE_SECTIONS = ("utility", "distribution", "innovation", "competitors")
DEFAULT_MAX_DOCUMENTS = 8


@dataclass(frozen=True)
class ProjectReport:
    project: str
    overview: str
    team: str
    tokenomics: str
    technology: str
    critique: dict = field(default_factory=dict)
    sources: tuple[str, ...] = ()
    degraded: bool = False

    def to_dict(self) -> dict:
        return {
            "project": self.project,
            "overview": self.overview,
            "team": self.team,
            "tokenomics": self.tokenomics,
            "technology": self.technology,
            "critique": dict(self.critique),
            "sources": list(self.sources),
            "degraded": self.degraded,
        }


def pb_gather(search: SearchClient, project: str, max_documents: int = DEFAULT_MAX_DOCUMENTS) -> list[dict]:
    """Broad web query for the project, deduplicated by URL."""
    if not project:
        raise ValueError("project name must be non-empty")
    seen: set[str] = set()
    documents = []
    for doc in search.search(project):
        url = doc.get("url", "")
        if not url or url in seen:
            continue
        seen.add(url)
        documents.append({"url": url, "title": doc.get("title", ""), "text": doc.get("text", "")})
        if len(documents) >= max_documents:
            break
    return documents


def pb_synthesize(project: str, documents: list[dict], backend: Backend) -> tuple[dict, bool]:
    """Structure raw documents into the four base sections. Returns
    (sections, degraded)."""
    if not documents:
        return {name: INSUFFICIENT for name in BASE_SECTIONS}, False
    listing = "\n\n".join(
        f"[{d['url']}] {d.get('title', '')}\n{d.get('text', '')}" for d in documents
    )
    prompt = load_template("pb_synthesize").substitute(project=project, documents=listing)
    parsed, _raw = structured_completion(prompt, backend)
    if not isinstance(parsed, dict):
        return {name: INSUFFICIENT for name in BASE_SECTIONS}, True
    return {name: str(parsed.get(name) or INSUFFICIENT) for name in BASE_SECTIONS}, False


def pb_critique(project: str, base: dict, backend: Backend) -> tuple[dict, bool]:
    """Critical analysis over the base sections. Returns (critique, degraded)."""
    for name in BASE_SECTIONS:
        if name not in base:
            raise ValueError(f"base sections missing {name!r}")
    if all(base[name] == INSUFFICIENT for name in BASE_SECTIONS):
        note = "Assessment not possible: no substantiated project information was gathered."
        return {name: note for name in CRITIQUE_SECTIONS}, False
    prompt = load_template("pb_critique").substitute(project=project, **{k: base[k] for k in BASE_SECTIONS})
    parsed, _raw = structured_completion(prompt, backend)
    if not isinstance(parsed, dict):
        return {name: INSUFFICIENT for name in CRITIQUE_SECTIONS}, True
    return {name: str(parsed.get(name) or INSUFFICIENT) for name in CRITIQUE_SECTIONS}, False


def pb_report(
    project: str,
    search: SearchClient,
    backend: Backend,
    max_documents: int = DEFAULT_MAX_DOCUMENTS,
) -> ProjectReport:
    documents = pb_gather(search, project, max_documents)
    base, degraded_base = pb_synthesize(project, documents, backend)
    critique, degraded_crit = pb_critique(project, base, backend)
    return ProjectReport(
        project=project,
        overview=base["overview"],
        team=base["team"],
        tokenomics=base["tokenomics"],
        technology=base["technology"],
        critique=critique,
        sources=tuple(d["url"] for d in documents),
        degraded=degraded_base or degraded_crit,
    )
