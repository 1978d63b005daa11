"""Turns a completed answer set into grouped, fully substituted recommendations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .answers import AnswerValue, BooleanAnswer, MultiAnswer, SingleAnswer, TextAnswer
from .conditions import evaluate_condition
from .schema import PLACEHOLDER_RE, Dimension, DIMENSION_ORDER, Question, SurveySchema
from .session import Session, SessionError, SessionStatus, _check_schema

# The question whose answer classifies the project's research objects.
ARTIFACT_TYPES_QUESTION_ID = "q_artifact_types"


class SessionNotCompleteError(SessionError):
    code = "session-not-complete"

    def __init__(self) -> None:
        super().__init__("recommendations require a complete session")


@dataclass(frozen=True)
class ResolvedFragment:
    dimension: Dimension
    text: str
    rule_id: str
    emit_index: int
    note: str | None = None


@dataclass(frozen=True)
class RecommendationReport:
    schema_id: str
    schema_version: str
    token: str
    artifact_types: tuple[str, ...]
    fragments: Mapping[Dimension, tuple[ResolvedFragment, ...]]
    unresolved: frozenset[str]

    def all_fragments(self) -> list[ResolvedFragment]:
        """Fragments in render order: dimension order, then within-dimension order."""
        out: list[ResolvedFragment] = []
        for dimension in DIMENSION_ORDER:
            out.extend(self.fragments.get(dimension, ()))
        return out


def substitute_placeholders(
    template: str, bindings: Mapping[str, str]
) -> tuple[str, set[str]]:
    """Replace ``{name}`` markers with their bindings.

    A missing or empty binding leaves the literal ``<name>`` in the text and
    reports the name as unresolved, so a reader can spot what to fill in.
    """
    unresolved: set[str] = set()

    def _replace(match):
        name = match.group(1)
        value = bindings.get(name, "")
        if value:
            return value
        unresolved.add(name)
        return f"<{name}>"

    return PLACEHOLDER_RE.sub(_replace, template), unresolved


def display_value(question: Question, answer: AnswerValue) -> str:
    """Prose rendering of an answer: option labels, free text where given."""
    if isinstance(answer, SingleAnswer):
        option = question.option(answer.option)
        if answer.text:
            return answer.text
        return option.label if option is not None else answer.option
    if isinstance(answer, MultiAnswer):
        parts = []
        for option in question.options:
            if option.id in answer.selections:
                text = answer.texts.get(option.id, "")
                parts.append(text if text else option.label)
        return ", ".join(parts)
    if isinstance(answer, BooleanAnswer):
        return "yes" if answer.value else "no"
    if isinstance(answer, TextAnswer):
        return answer.value
    raise TypeError(f"not an answer value: {answer!r}")


def placeholder_bindings(schema: SurveySchema, answers: Mapping[str, AnswerValue]) -> dict[str, str]:
    """Placeholder name -> display text, from question ``binds`` declarations."""
    bindings: dict[str, str] = {}
    for question in schema.questions:
        if question.binds is not None and question.id in answers:
            bindings[question.binds] = display_value(question, answers[question.id])
    return bindings


def _artifact_type_labels(schema: SurveySchema, answers: Mapping[str, AnswerValue]) -> tuple[str, ...]:
    question = schema.question(ARTIFACT_TYPES_QUESTION_ID)
    if question is None:
        return ()
    answer = answers.get(question.id)
    if not isinstance(answer, MultiAnswer):
        return ()
    return tuple(opt.label for opt in question.options if opt.id in answer.selections)


def apply_rules(schema: SurveySchema, session: Session) -> RecommendationReport:
    """Fire every rule whose condition holds and assemble the report.

    Fragments are grouped by dimension, ordered by (weight, rule declaration
    index, emit index), and exact duplicates within a dimension keep only
    the first occurrence.
    """
    _check_schema(schema, session)
    if session.status is not SessionStatus.COMPLETE:
        raise SessionNotCompleteError()

    bindings = placeholder_bindings(schema, session.answers)
    fired: dict[Dimension, list[tuple[tuple[int, int, int], ResolvedFragment, set[str]]]] = {
        dim: [] for dim in DIMENSION_ORDER
    }
    for rule_index, rule in enumerate(schema.rules):
        if not evaluate_condition(rule.when, session.answers):
            continue
        for emit_index, fragment in enumerate(rule.emit):
            text, unresolved = substitute_placeholders(fragment.template, bindings)
            resolved = ResolvedFragment(
                dimension=fragment.dimension,
                text=text,
                rule_id=rule.id,
                emit_index=emit_index,
                note=fragment.note,
            )
            sort_key = (fragment.weight, rule_index, emit_index)
            fired[fragment.dimension].append((sort_key, resolved, unresolved))

    fragments: dict[Dimension, tuple[ResolvedFragment, ...]] = {}
    unresolved_names: set[str] = set()
    for dimension in DIMENSION_ORDER:
        bucket = sorted(fired[dimension], key=lambda item: item[0])
        kept: list[ResolvedFragment] = []
        seen_texts: set[str] = set()
        for _, resolved, unresolved in bucket:
            if resolved.text in seen_texts:
                continue
            seen_texts.add(resolved.text)
            kept.append(resolved)
            unresolved_names |= unresolved
        if kept:
            fragments[dimension] = tuple(kept)

    return RecommendationReport(
        schema_id=schema.id,
        schema_version=schema.version,
        token=session.token,
        artifact_types=_artifact_type_labels(schema, session.answers),
        fragments=fragments,
        unresolved=frozenset(unresolved_names),
    )
