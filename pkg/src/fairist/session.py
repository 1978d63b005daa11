"""Session engine: one researcher's pass through the questionnaire.

All operations are pure transformations returning a new Session.  Conditions
only reference earlier questions, so answer changes cascade forward in a
single pass: any stored answer whose question is no longer visible is
dropped, keeping the visibility fixpoint (every stored answer belongs to a
currently visible question) after every operation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Mapping

from .answers import (
    AnswerValue,
    BooleanAnswer,
    MultiAnswer,
    SingleAnswer,
    TextAnswer,
    answer_from_json,
    answer_to_json,
)
from .conditions import evaluate_condition
from .schema import (
    Question,
    QuestionKind,
    Severity,
    SurveySchema,
    SchemaValidationError,
    validate_schema,
)
from .tokens import mint_token


class SessionStatus(str, Enum):
    IN_PROGRESS = "in_progress"
    COMPLETE = "complete"


@dataclass(frozen=True)
class Session:
    token: str
    schema_id: str
    schema_version: str
    answers: Mapping[str, AnswerValue]
    status: SessionStatus
    created_at: datetime


class SessionError(Exception):
    """Base class for session operation failures."""

    code = "session-error"


class UnknownQuestionError(SessionError):
    code = "unknown-question"

    def __init__(self, question_id: str):
        self.question_id = question_id
        super().__init__(f"no question '{question_id}' in this schema")


class QuestionNotVisibleError(SessionError):
    code = "question-not-visible"

    def __init__(self, question_id: str):
        self.question_id = question_id
        super().__init__(f"question '{question_id}' is not visible under the current answers")


class AnswerTypeError(SessionError):
    code = "answer-type-mismatch"

    def __init__(self, question_id: str, detail: str):
        self.question_id = question_id
        super().__init__(f"bad answer for '{question_id}': {detail}")


class SessionCompleteError(SessionError):
    code = "session-complete"

    def __init__(self) -> None:
        super().__init__("session is already complete")


class NoSuchAnswerError(SessionError):
    code = "no-such-answer"

    def __init__(self, question_id: str):
        self.question_id = question_id
        super().__init__(f"question '{question_id}' has no stored answer")


class IncompleteSessionError(SessionError):
    code = "session-incomplete"

    def __init__(self, question_ids: list[str]):
        self.question_ids = question_ids
        names = ", ".join(f"'{q}'" for q in question_ids)
        super().__init__(f"visible questions still unanswered: {names}")


class SchemaMismatchError(SessionError):
    code = "schema-mismatch"

    def __init__(self, expected: str, got: str):
        super().__init__(f"session belongs to schema {expected}, not {got}")


def _check_schema(schema: SurveySchema, session: Session) -> None:
    if (schema.id, schema.version) != (session.schema_id, session.schema_version):
        raise SchemaMismatchError(
            f"{session.schema_id}@{session.schema_version}", f"{schema.id}@{schema.version}"
        )


def _is_visible(question: Question, answers: Mapping[str, AnswerValue]) -> bool:
    if question.visible_when is None:
        return True
    return evaluate_condition(question.visible_when, answers)


def start_session(schema: SurveySchema, token: str | None = None) -> Session:
    """Open an empty session against a schema that validates without errors.

    The service mints tokens; library callers may supply their own.
    """
    problems = [d for d in validate_schema(schema) if d.severity is Severity.ERROR]
    if problems:
        raise SchemaValidationError(problems)
    return Session(
        token=token if token is not None else mint_token(),
        schema_id=schema.id,
        schema_version=schema.version,
        answers={},
        status=SessionStatus.IN_PROGRESS,
        created_at=datetime.now(timezone.utc),
    )


def visible_questions(schema: SurveySchema, session: Session) -> list[Question]:
    """Questions currently presented, in declaration order."""
    _check_schema(schema, session)
    return [q for q in schema.questions if _is_visible(q, session.answers)]


def next_question(schema: SurveySchema, session: Session) -> Question | None:
    """First visible question without a stored answer; None when complete."""
    for question in visible_questions(schema, session):
        if question.id not in session.answers:
            return question
    return None


def _check_value(question: Question, value: AnswerValue) -> None:
    kind = question.kind
    if kind is QuestionKind.SINGLE_CHOICE:
        if not isinstance(value, SingleAnswer):
            raise AnswerTypeError(question.id, "expected a single-choice answer")
        option = question.option(value.option)
        if option is None:
            raise AnswerTypeError(question.id, f"no option '{value.option}'")
        if value.text is not None and not option.allows_free_text:
            raise AnswerTypeError(question.id, f"option '{value.option}' takes no free text")
    elif kind is QuestionKind.MULTI_CHOICE:
        if not isinstance(value, MultiAnswer):
            raise AnswerTypeError(question.id, "expected a multi-choice answer")
        if not value.selections:
            raise AnswerTypeError(question.id, "selection set must not be empty")
        for selected in value.selections:
            if question.option(selected) is None:
                raise AnswerTypeError(question.id, f"no option '{selected}'")
        for option_id in value.texts:
            if option_id not in value.selections:
                raise AnswerTypeError(question.id, f"free text for unselected option '{option_id}'")
            option = question.option(option_id)
            if option is None or not option.allows_free_text:
                raise AnswerTypeError(question.id, f"option '{option_id}' takes no free text")
    elif kind is QuestionKind.BOOLEAN:
        if not isinstance(value, BooleanAnswer):
            raise AnswerTypeError(question.id, "expected a boolean answer")
    elif kind is QuestionKind.FREE_TEXT:
        if not isinstance(value, TextAnswer):
            raise AnswerTypeError(question.id, "expected a text answer")
    else:  # pragma: no cover - exhaustive over QuestionKind
        raise AnswerTypeError(question.id, f"unhandled question kind {kind}")


def _cascade(
    schema: SurveySchema, answers: dict[str, AnswerValue], from_index: int
) -> dict[str, AnswerValue]:
    # One ordered pass reaches the fixpoint: conditions only look backwards.
    for question in schema.questions[from_index:]:
        if question.id in answers and not _is_visible(question, answers):
            del answers[question.id]
    return answers


def submit_answer(
    schema: SurveySchema, session: Session, question_id: str, value: AnswerValue
) -> Session:
    """Store an answer for a visible question, dropping newly hidden answers."""
    _check_schema(schema, session)
    if session.status is SessionStatus.COMPLETE:
        raise SessionCompleteError()
    question = schema.question(question_id)
    if question is None:
        raise UnknownQuestionError(question_id)
    if not _is_visible(question, session.answers):
        raise QuestionNotVisibleError(question_id)
    _check_value(question, value)
    answers = dict(session.answers)
    answers[question_id] = value
    position = schema.position(question_id)
    assert position is not None
    answers = _cascade(schema, answers, position + 1)
    return replace(session, answers=answers)


def retract_answer(schema: SurveySchema, session: Session, question_id: str) -> Session:
    """Remove a stored answer.  Allowed on a complete session; reopens it."""
    _check_schema(schema, session)
    question = schema.question(question_id)
    if question is None:
        raise UnknownQuestionError(question_id)
    if question_id not in session.answers:
        raise NoSuchAnswerError(question_id)
    answers = dict(session.answers)
    del answers[question_id]
    position = schema.position(question_id)
    assert position is not None
    answers = _cascade(schema, answers, position + 1)
    return replace(session, answers=answers, status=SessionStatus.IN_PROGRESS)


def complete_session(schema: SurveySchema, session: Session) -> Session:
    """Mark the session complete once every visible question is answered."""
    _check_schema(schema, session)
    missing = [q.id for q in visible_questions(schema, session) if q.id not in session.answers]
    if missing:
        raise IncompleteSessionError(missing)
    return replace(session, status=SessionStatus.COMPLETE)


def fixpoint_holds(schema: SurveySchema, session: Session) -> bool:
    """True when every stored answer's question is visible under the answers."""
    return all(
        (q := schema.question(qid)) is not None and _is_visible(q, session.answers)
        for qid in session.answers
    )


# --- snapshot codec ---------------------------------------------------------


def session_to_json(session: Session) -> dict[str, Any]:
    """JSON-compatible snapshot; key order is canonicalized by the store."""
    return {
        "token": session.token,
        "schema_id": session.schema_id,
        "schema_version": session.schema_version,
        "status": session.status.value,
        "created_at": session.created_at.isoformat(),
        "answers": {qid: answer_to_json(session.answers[qid]) for qid in sorted(session.answers)},
    }


def session_from_json(data: Mapping[str, Any]) -> Session:
    return Session(
        token=data["token"],
        schema_id=data["schema_id"],
        schema_version=data["schema_version"],
        answers={qid: answer_from_json(raw) for qid, raw in data["answers"].items()},
        status=SessionStatus(data["status"]),
        created_at=datetime.fromisoformat(data["created_at"]),
    )
