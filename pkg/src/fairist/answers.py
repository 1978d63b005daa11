"""Answer values stored in a survey session, plus their JSON wire encoding."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping


@dataclass(frozen=True, eq=True)
class SingleAnswer:
    """One selected option, with an optional free-text slot ("other, specify")."""

    option: str
    text: str | None = None


@dataclass(frozen=True, eq=True)
class MultiAnswer:
    """A set of selected options; free text may accompany individual options."""

    selections: frozenset[str]
    texts: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True, eq=True)
class BooleanAnswer:
    value: bool


@dataclass(frozen=True, eq=True)
class TextAnswer:
    value: str


AnswerValue = SingleAnswer | MultiAnswer | BooleanAnswer | TextAnswer


def single_value(answer: AnswerValue | None) -> str | None:
    """The comparable scalar for ``==`` / ``!=`` conditions.

    Single-choice answers compare by option id, booleans by "true"/"false",
    free text by the stored string.  Multi-choice answers have no single
    value and return None.
    """
    if isinstance(answer, SingleAnswer):
        return answer.option
    if isinstance(answer, BooleanAnswer):
        return "true" if answer.value else "false"
    if isinstance(answer, TextAnswer):
        return answer.value
    return None


def selected_options(answer: AnswerValue | None) -> frozenset[str] | None:
    """The selection set tested by ``includes`` conditions; None unless multi."""
    if isinstance(answer, MultiAnswer):
        return answer.selections
    return None


class AnswerDecodeError(ValueError):
    """Raised when a JSON answer value does not match any known shape."""


def answer_to_json(answer: AnswerValue) -> dict[str, Any]:
    """Encode an answer as a JSON-compatible dict (deterministic ordering)."""
    if isinstance(answer, SingleAnswer):
        out: dict[str, Any] = {"kind": "single", "option": answer.option}
        if answer.text is not None:
            out["text"] = answer.text
        return out
    if isinstance(answer, MultiAnswer):
        out = {"kind": "multi", "selections": sorted(answer.selections)}
        if answer.texts:
            out["texts"] = {k: answer.texts[k] for k in sorted(answer.texts)}
        return out
    if isinstance(answer, BooleanAnswer):
        return {"kind": "boolean", "value": answer.value}
    if isinstance(answer, TextAnswer):
        return {"kind": "text", "value": answer.value}
    raise TypeError(f"not an answer value: {answer!r}")


def answer_from_json(data: Any) -> AnswerValue:
    """Decode the wire shape produced by :func:`answer_to_json`."""
    if not isinstance(data, dict) or "kind" not in data:
        raise AnswerDecodeError("answer value must be an object with a 'kind' field")
    kind = data["kind"]
    if kind == "single":
        option = data.get("option")
        text = data.get("text")
        if not isinstance(option, str):
            raise AnswerDecodeError("single answer requires a string 'option'")
        if text is not None and not isinstance(text, str):
            raise AnswerDecodeError("single answer 'text' must be a string")
        return SingleAnswer(option=option, text=text)
    if kind == "multi":
        selections = data.get("selections")
        texts = data.get("texts", {})
        if not isinstance(selections, list) or not all(isinstance(s, str) for s in selections):
            raise AnswerDecodeError("multi answer requires a string list 'selections'")
        if not isinstance(texts, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in texts.items()
        ):
            raise AnswerDecodeError("multi answer 'texts' must map option ids to strings")
        return MultiAnswer(selections=frozenset(selections), texts=dict(texts))
    if kind == "boolean":
        value = data.get("value")
        if not isinstance(value, bool):
            raise AnswerDecodeError("boolean answer requires a boolean 'value'")
        return BooleanAnswer(value=value)
    if kind == "text":
        value = data.get("value")
        if not isinstance(value, str):
            raise AnswerDecodeError("text answer requires a string 'value'")
        return TextAnswer(value=value)
    raise AnswerDecodeError(f"unknown answer kind: {kind!r}")
