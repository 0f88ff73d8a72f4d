"""Tool catalog: the canonical inventory of callable tools and their schemas.

The catalog is loaded from a JSON document, validated, and then treated as
immutable. One rendering of it (``render_tool_list``) is injected into both
the caller and the judge prompts so the two always see the same inventory.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import CatalogError

PARAM_KINDS = ("string", "integer", "number", "boolean", "enum")
CATEGORIES = ("data_analytics", "report_agent")

_NAME_RE = re.compile(r"^[a-z][a-z0-9_]*$")


@dataclass(frozen=True)
class ParamSpec:
    """One parameter of a tool: name, kind, required flag, optional enum set."""

    name: str
    kind: str
    required: bool
    description: str = ""
    enum_values: tuple[str, ...] | None = None

    def validate(self, tool: str) -> None:
        if self.kind not in PARAM_KINDS:
            raise CatalogError(f"tool {tool!r}: param {self.name!r} has unknown kind {self.kind!r}")
        if self.kind == "enum" and not self.enum_values:
            raise CatalogError(f"tool {tool!r}: enum param {self.name!r} has no enum_values")
        if self.kind != "enum" and self.enum_values:
            raise CatalogError(f"tool {tool!r}: param {self.name!r} has enum_values but kind {self.kind!r}")


@dataclass(frozen=True)
class ToolSpec:
    name: str
    category: str
    description: str
    params: tuple[ParamSpec, ...] = ()

    def validate(self) -> None:
        if not _NAME_RE.match(self.name):
            raise CatalogError(f"bad tool identifier {self.name!r}")
        if self.category not in CATEGORIES:
            raise CatalogError(f"tool {self.name!r}: unknown category {self.category!r}")
        if not self.description:
            raise CatalogError(f"tool {self.name!r}: empty description")
        seen = set()
        for p in self.params:
            if p.name in seen:
                raise CatalogError(f"tool {self.name!r}: duplicate param {p.name!r}")
            seen.add(p.name)
            p.validate(self.name)

    def param(self, name: str) -> ParamSpec | None:
        for p in self.params:
            if p.name == name:
                return p
        return None

    @property
    def required_params(self) -> tuple[ParamSpec, ...]:
        return tuple(p for p in self.params if p.required)


@dataclass(frozen=True)
class ToolCatalog:
    tools: tuple[ToolSpec, ...]
    version: str = "0"
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self.tools:
            raise CatalogError("empty catalog")
        seen = set()
        for t in self.tools:
            t.validate()
            if t.name in seen:
                raise CatalogError(f"duplicate tool name {t.name!r}")
            seen.add(t.name)
        object.__setattr__(self, "_index", {t.name: t for t in self.tools})

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.tools)


def lookup(catalog: ToolCatalog, name: str) -> ToolSpec | None:
    """Exact, case-sensitive lookup. Returns None (a value) when absent."""
    return catalog._index.get(name)


def load_catalog(source: str | Path | dict) -> ToolCatalog:
    """Parse and validate a catalog document.

    ``source`` may be a path to a JSON file, a JSON string, or an
    already-decoded dict. Raises CatalogError naming the offending tool.
    """
    if isinstance(source, dict):
        doc = source
    else:
        text = Path(source).read_text() if _looks_like_path(source) else str(source)
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CatalogError(f"catalog is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "tools" not in doc:
        raise CatalogError("catalog document must be an object with a 'tools' list")
    tools = []
    for entry in doc["tools"]:
        params = tuple(
            ParamSpec(
                name=p["name"],
                kind=p["kind"],
                required=bool(p.get("required", False)),
                description=p.get("description", ""),
                enum_values=tuple(p["enum_values"]) if p.get("enum_values") else None,
            )
            for p in entry.get("params", [])
        )
        tools.append(
            ToolSpec(
                name=entry.get("name", ""),
                category=entry.get("category", ""),
                description=entry.get("description", ""),
                params=params,
            )
        )
    return ToolCatalog(tools=tuple(tools), version=str(doc.get("version", "0")))


def save_catalog(catalog: ToolCatalog, path: str | Path) -> None:
    """Round-trip partner of load_catalog."""
    Path(path).write_text(json.dumps(catalog_to_dict(catalog), indent=2) + "\n")


def catalog_to_dict(catalog: ToolCatalog) -> dict:
    return {
        "version": catalog.version,
        "tools": [
            {
                "name": t.name,
                "category": t.category,
                "description": t.description,
                "params": [
                    {
                        "name": p.name,
                        "kind": p.kind,
                        "required": p.required,
                        "description": p.description,
                        **({"enum_values": list(p.enum_values)} if p.enum_values else {}),
                    }
                    for p in t.params
                ],
            }
            for t in catalog.tools
        ],
    }


def default_catalog() -> ToolCatalog:
    """The shipped six-tool catalog (config/tools.default.json)."""
    text = resources.files("tokenscope").joinpath("config/tools.default.json").read_text()
    return load_catalog(json.loads(text))


def render_tool_list(catalog: ToolCatalog) -> str:
    """Deterministic human-readable tool list, in catalog order.

    One section per tool; each parameter on its own line as
    "name (kind, required|optional): description". Enum kinds list their
    values inline so the model sees the legal choices.
    """
    blocks = []
    for t in catalog.tools:
        lines = [f"### {t.name}", t.description]
        if t.params:
            lines.append("Parameters:")
            for p in t.params:
                kind = p.kind
                if p.kind == "enum" and p.enum_values:
                    kind = "enum[" + "|".join(p.enum_values) + "]"
                req = "required" if p.required else "optional"
                desc = f": {p.description}" if p.description else ""
                lines.append(f"  - {p.name} ({kind}, {req}){desc}")
        else:
            lines.append("Parameters: none")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def _looks_like_path(source) -> bool:
    if isinstance(source, Path):
        return True
    s = str(source)
    return not s.lstrip().startswith("{") and ("\n" not in s)
