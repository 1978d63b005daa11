"""Shared test helpers."""

from __future__ import annotations

import random

from fairist import Session, SurveySchema
from fairist.answers import (
    AnswerValue,
    BooleanAnswer,
    MultiAnswer,
    SingleAnswer,
    TextAnswer,
    answer_from_json,
)
from fairist.schema import Question, QuestionKind
from fairist.session import complete_session, start_session, submit_answer, visible_questions


def drive_session(
    schema: SurveySchema, answers: dict[str, AnswerValue], token: str = "local"
) -> Session:
    """Submit answers in declaration order, then complete the session."""
    current = start_session(schema, token=token)
    for question in schema.questions:
        if question.id not in answers:
            continue
        if question.id in {q.id for q in visible_questions(schema, current)}:
            current = submit_answer(schema, current, question.id, answers[question.id])
    return complete_session(schema, current)


def decode_answers(raw: dict) -> dict[str, AnswerValue]:
    return {qid: answer_from_json(value) for qid, value in raw.items()}


def random_answer(rng: random.Random, question: Question) -> AnswerValue:
    """A well-typed random answer for any question kind."""
    if question.kind is QuestionKind.SINGLE_CHOICE:
        option = rng.choice(question.options)
        text = "custom" if option.allows_free_text and rng.random() < 0.5 else None
        return SingleAnswer(option.id, text=text)
    if question.kind is QuestionKind.MULTI_CHOICE:
        count = rng.randint(1, len(question.options))
        picked = rng.sample([o.id for o in question.options], count)
        return MultiAnswer(frozenset(picked))
    if question.kind is QuestionKind.BOOLEAN:
        return BooleanAnswer(rng.random() < 0.5)
    return TextAnswer(rng.choice(["", "alpha", "beta"]))
