"""FAIRIST: survey-driven FAIR implementation recommendations for DMPs."""

from .answers import (
    AnswerDecodeError,
    AnswerValue,
    BooleanAnswer,
    MultiAnswer,
    SingleAnswer,
    TextAnswer,
    answer_from_json,
    answer_to_json,
)
from .conditions import (
    Condition,
    ConditionSyntaxError,
    evaluate_condition,
    parse_condition,
    print_condition,
)
from .content_pack import builtin_document, builtin_schema, example_answers
from .recommend import (
    RecommendationReport,
    ResolvedFragment,
    apply_rules,
    substitute_placeholders,
)
from .render import render, render_json, render_markdown, render_ntriples
from .schema import (
    Diagnostic,
    Dimension,
    Option,
    Question,
    QuestionKind,
    RecommendationFragment,
    Rule,
    SchemaError,
    SchemaFormatError,
    SchemaValidationError,
    Severity,
    SurveySchema,
    check_document,
    parse_schema,
    serialize_schema,
    validate_schema,
)
from .session import (
    Session,
    SessionError,
    SessionStatus,
    complete_session,
    next_question,
    retract_answer,
    start_session,
    submit_answer,
    visible_questions,
)
from .store import SessionStore, StoredSession, UnknownTokenError
from .tokens import mint_token

__version__ = "1.0.0"

__all__ = [
    "AnswerDecodeError",
    "AnswerValue",
    "BooleanAnswer",
    "Condition",
    "ConditionSyntaxError",
    "Diagnostic",
    "Dimension",
    "MultiAnswer",
    "Option",
    "Question",
    "QuestionKind",
    "RecommendationFragment",
    "RecommendationReport",
    "ResolvedFragment",
    "Rule",
    "SchemaError",
    "SchemaFormatError",
    "SchemaValidationError",
    "Session",
    "SessionError",
    "SessionStatus",
    "SessionStore",
    "Severity",
    "SingleAnswer",
    "StoredSession",
    "SurveySchema",
    "TextAnswer",
    "UnknownTokenError",
    "answer_from_json",
    "answer_to_json",
    "apply_rules",
    "builtin_document",
    "builtin_schema",
    "check_document",
    "complete_session",
    "evaluate_condition",
    "example_answers",
    "mint_token",
    "next_question",
    "parse_condition",
    "parse_schema",
    "print_condition",
    "render",
    "render_json",
    "render_markdown",
    "render_ntriples",
    "retract_answer",
    "serialize_schema",
    "start_session",
    "submit_answer",
    "substitute_placeholders",
    "validate_schema",
    "visible_questions",
]
