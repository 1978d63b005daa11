"""Report renderers: DMP-ready Markdown, canonical JSON, N-Triples RDF.

Every renderer is a pure function producing byte-identical output for the
same report.  Placeholders that could not be filled appear as ``<name>``;
no output ever contains a raw ``{name}`` marker.
"""

from __future__ import annotations

import json

from .recommend import RecommendationReport
from .schema import DIMENSION_ORDER

MARKDOWN_MEDIA_TYPE = "text/markdown"
JSON_MEDIA_TYPE = "application/json"
NTRIPLES_MEDIA_TYPE = "application/n-triples"

_TITLE = "FAIRIST Recommendations"
_INTRO = (
    "Based on your responses, the following recommendations are included for "
    "your consideration and/or inclusion in your project's Data Management Plan."
)
_TABLE_HEADER = "| FAIR Dimension | Research Data Stewardship Practices Planned |"
_TABLE_CAPTION = "Table 1: Data Stewardship Practices Planned by FAIR Dimension"

VOCAB = "urn:fairist:vocab#"


def _cell_text(text: str) -> str:
    # Pipe-table cells cannot hold raw pipes or newlines.
    return text.replace("|", "\\|").replace("\n", " ")


def render_markdown(report: RecommendationReport, long: bool = False) -> str:
    """DMP-ready Markdown document.

    Fragments appear as bullet runs inside a two-column pipe table, one row
    per non-empty dimension.  With ``long`` set, plain bulleted sections per
    dimension follow the table for easier copy-editing.
    """
    lines: list[str] = [f"# {_TITLE}", "", _INTRO, "", "## Types of Data", ""]
    if report.artifact_types:
        lines.extend(f"- {label}" for label in report.artifact_types)
    else:
        lines.append("None specified")
    lines.extend(["", "## Data Stewardship Practices Planned", "", _TABLE_HEADER, "| --- | --- |"])
    for dimension in DIMENSION_ORDER:
        fragments = report.fragments.get(dimension, ())
        if not fragments:
            continue
        cell = "; ".join(f"\u2022 {_cell_text(f.text)}" for f in fragments)
        lines.append(f"| {dimension.value} | {cell} |")
    lines.extend(["", _TABLE_CAPTION])
    if long:
        for dimension in DIMENSION_ORDER:
            fragments = report.fragments.get(dimension, ())
            if not fragments:
                continue
            lines.extend(["", f"### {dimension.value}", ""])
            lines.extend(f"- {f.text}" for f in fragments)
    return "\n".join(lines) + "\n"


def render_json(report: RecommendationReport) -> str:
    """Canonical JSON: sorted keys, no insignificant whitespace, LF-terminated."""
    payload = {
        "schema_id": report.schema_id,
        "schema_version": report.schema_version,
        "token": report.token,
        "artifact_types": list(report.artifact_types),
        "dimensions": {
            dimension.value: [
                {"text": f.text, "rule_id": f.rule_id, "emit_index": f.emit_index}
                for f in fragments
            ]
            for dimension, fragments in report.fragments.items()
            if fragments
        },
        "unresolved": sorted(report.unresolved),
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def _escape_literal(text: str) -> str:
    return (
        text.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )


def render_ntriples(report: RecommendationReport) -> str:
    """Machine-actionable form: one RDF triple per line, lexicographically sorted."""
    subject = f"<urn:fairist:report:{report.token}>"
    lines = [f'{subject} <{VOCAB}schemaVersion> "{_escape_literal(report.schema_version)}" .']
    for label in report.artifact_types:
        lines.append(f'{subject} <{VOCAB}artifactType> "{_escape_literal(label)}" .')
    for index, fragment in enumerate(report.all_fragments()):
        node = f"<urn:fairist:report:{report.token}:frag:{index}>"
        lines.append(f"{subject} <{VOCAB}hasFragment> {node} .")
        lines.append(f'{node} <{VOCAB}dimension> "{fragment.dimension.value}" .')
        lines.append(f'{node} <{VOCAB}text> "{_escape_literal(fragment.text)}" .')
    return "".join(line + "\n" for line in sorted(lines))


_RENDERERS = {
    "md": (render_markdown, MARKDOWN_MEDIA_TYPE),
    "json": (render_json, JSON_MEDIA_TYPE),
    "nt": (render_ntriples, NTRIPLES_MEDIA_TYPE),
}

FORMATS = tuple(_RENDERERS)


def render(report: RecommendationReport, fmt: str) -> str:
    """Dispatch by short format name: md, json, or nt."""
    try:
        renderer, _ = _RENDERERS[fmt]
    except KeyError:
        raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(_RENDERERS)}") from None
    return renderer(report)


def media_type(fmt: str) -> str:
    try:
        _, media = _RENDERERS[fmt]
    except KeyError:
        raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(_RENDERERS)}") from None
    return media
