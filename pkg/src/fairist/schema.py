"""Survey schema: declarative questions, rules, and their validation.

A schema document is YAML with a fixed field layout.  Top level: ``id``,
``version``, ``placeholders`` (list of names), ``questions`` (list), ``rules``
(list).  Question keys: ``id``, ``prompt``, ``kind``, ``options``,
``visible_when``, ``binds``.  Rule keys: ``id``, ``when``, ``emit``.  Emit
keys: ``dimension``, ``template``, ``weight``, ``note``.  Unknown keys are
reported as validation errors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable

import yaml

from .conditions import (
    And,
    Condition,
    ConditionSyntaxError,
    Eq,
    Includes,
    Neq,
    Not,
    Or,
    iter_leaves,
    parse_condition,
    print_condition,
)

_IDENT_RE = re.compile(r"^[a-z][a-z0-9_]*$")
_SEMVER_RE = re.compile(r"^\d+\.\d+\.\d+(?:[-+].*)?$")
PLACEHOLDER_RE = re.compile(r"\{([a-z][a-z0-9_]*)\}")


class QuestionKind(str, Enum):
    SINGLE_CHOICE = "single_choice"
    MULTI_CHOICE = "multi_choice"
    BOOLEAN = "boolean"
    FREE_TEXT = "free_text"


class Dimension(str, Enum):
    FINDABLE = "Findable"
    ACCESSIBLE = "Accessible"
    INTEROPERABLE = "Interoperable"
    REUSABLE = "Reusable"
    REPRODUCIBILITY = "Reproducibility"


# Render order for reports; empty dimensions are omitted by renderers.
DIMENSION_ORDER: tuple[Dimension, ...] = (
    Dimension.FINDABLE,
    Dimension.ACCESSIBLE,
    Dimension.INTEROPERABLE,
    Dimension.REUSABLE,
    Dimension.REPRODUCIBILITY,
)


@dataclass(frozen=True)
class Option:
    id: str
    label: str
    allows_free_text: bool = False


@dataclass(frozen=True)
class Question:
    id: str
    prompt: str
    kind: QuestionKind
    options: tuple[Option, ...] = ()
    visible_when: Condition | None = None
    binds: str | None = None

    def option_ids(self) -> frozenset[str]:
        return frozenset(opt.id for opt in self.options)

    def option(self, option_id: str) -> Option | None:
        for opt in self.options:
            if opt.id == option_id:
                return opt
        return None


@dataclass(frozen=True)
class RecommendationFragment:
    dimension: Dimension
    template: str
    weight: int
    note: str | None = None


@dataclass(frozen=True)
class Rule:
    id: str
    when: Condition
    emit: tuple[RecommendationFragment, ...]


@dataclass(frozen=True)
class SurveySchema:
    id: str
    version: str
    placeholders: tuple[str, ...]
    questions: tuple[Question, ...]
    rules: tuple[Rule, ...]

    def question(self, question_id: str) -> Question | None:
        return self.question_index().get(question_id)

    def question_index(self) -> dict[str, Question]:
        # Derived lookup cached on first use; excluded from equality.
        cache = getattr(self, "_qindex", None)
        if cache is None:
            cache = {q.id: q for q in self.questions}
            object.__setattr__(self, "_qindex", cache)
        return cache

    def position(self, question_id: str) -> int | None:
        cache = getattr(self, "_qpos", None)
        if cache is None:
            cache = {q.id: i for i, q in enumerate(self.questions)}
            object.__setattr__(self, "_qpos", cache)
        return cache.get(question_id)

    def bound_placeholders(self) -> dict[str, str]:
        """Placeholder name -> id of the question that binds it."""
        return {q.binds: q.id for q in self.questions if q.binds is not None}


# --- diagnostics -----------------------------------------------------------


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    severity: Severity
    where: str  # e.g. "question:q_data", "rule:r_pid", "placeholder:name", "document"
    message: str
    sort_key: tuple[int, int] = field(default=(0, 0), compare=False)

    def __str__(self) -> str:
        return f"{self.severity.value}: {self.code} ({self.where}): {self.message}"


# Error codes
DUPLICATE_QUESTION_ID = "duplicate-question-id"
DUPLICATE_OPTION_ID = "duplicate-option-id"
DUPLICATE_RULE_ID = "duplicate-rule-id"
DUPLICATE_PLACEHOLDER = "duplicate-placeholder"
FORWARD_REFERENCE = "forward-reference"
UNKNOWN_QUESTION = "unknown-question"
UNKNOWN_OPTION = "unknown-option"
UNDECLARED_PLACEHOLDER = "undeclared-placeholder"
BAD_IDENTIFIER = "bad-identifier"
MISSING_OPTIONS = "missing-options"
UNEXPECTED_OPTIONS = "unexpected-options"
EMPTY_RULE = "empty-rule"
UNKNOWN_KEY = "unknown-key"
# Warning codes
UNREACHABLE_QUESTION = "unreachable-question"
RULE_NEVER_FIRES = "rule-never-fires"
UNBOUND_PLACEHOLDER = "unbound-placeholder"

# Sort sections: document-level, then questions, then rules, then placeholders.
_SECTION_DOCUMENT = 0
_SECTION_QUESTION = 1
_SECTION_RULE = 2
_SECTION_PLACEHOLDER = 3


class SchemaError(Exception):
    """Base for schema loading and validation failures."""


class SchemaFormatError(SchemaError):
    """Document cannot be materialized: bad YAML, bad shapes, bad condition text."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class SchemaValidationError(SchemaError):
    """Raised by parse_schema when error diagnostics are present."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        errors = [d for d in diagnostics if d.severity is Severity.ERROR]
        summary = "; ".join(str(d) for d in errors[:5])
        if len(errors) > 5:
            summary += f"; and {len(errors) - 5} more"
        super().__init__(f"schema has {len(errors)} error(s): {summary}")


def _sorted_diagnostics(diags: Iterable[Diagnostic]) -> list[Diagnostic]:
    return sorted(diags, key=lambda d: (d.sort_key, d.code, d.message))


# --- document loading ------------------------------------------------------

_TOP_KEYS = {"id", "version", "placeholders", "questions", "rules"}
_QUESTION_KEYS = {"id", "prompt", "kind", "options", "visible_when", "binds"}
_OPTION_KEYS = {"id", "label", "allows_free_text"}
_RULE_KEYS = {"id", "when", "emit"}
_EMIT_KEYS = {"dimension", "template", "weight", "note"}


def _require(mapping: dict, key: str, types: type | tuple, where: str) -> Any:
    if key not in mapping:
        raise SchemaFormatError(f"missing required key '{key}'", where)
    value = mapping[key]
    if not isinstance(value, types):
        raise SchemaFormatError(f"key '{key}' has the wrong type", where)
    return value


def _optional(mapping: dict, key: str, types: type | tuple, where: str, default: Any) -> Any:
    if key not in mapping or mapping[key] is None:
        return default
    value = mapping[key]
    if not isinstance(value, types):
        raise SchemaFormatError(f"key '{key}' has the wrong type", where)
    return value


def _unknown_keys(mapping: dict, allowed: set, where: str, section: tuple[int, int],
                  diags: list[Diagnostic]) -> None:
    for key in mapping:
        if key not in allowed:
            diags.append(Diagnostic(
                code=UNKNOWN_KEY,
                severity=Severity.ERROR,
                where=where,
                message=f"unknown key '{key}'",
                sort_key=section,
            ))


def _parse_condition_field(text: str, where: str) -> Condition:
    try:
        return parse_condition(text)
    except ConditionSyntaxError as exc:
        raise SchemaFormatError(f"bad condition: {exc}", where) from exc


def load_document(text: str) -> tuple[SurveySchema, list[Diagnostic]]:
    """Materialize a schema document without semantic validation.

    Returns the schema plus document-layout diagnostics (currently only
    unknown keys).  Raises SchemaFormatError when the document cannot be
    materialized at all.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        location = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "document"
        raise SchemaFormatError(f"invalid document syntax: {exc}", location) from exc
    if not isinstance(doc, dict):
        raise SchemaFormatError("document must be a mapping", "document")

    diags: list[Diagnostic] = []
    _unknown_keys(doc, _TOP_KEYS, "document", (_SECTION_DOCUMENT, 0), diags)

    schema_id = _require(doc, "id", str, "document")
    version = _require(doc, "version", str, "document")
    if not _SEMVER_RE.match(version):
        raise SchemaFormatError(f"version {version!r} is not a semantic version", "document")

    raw_placeholders = _optional(doc, "placeholders", list, "document", [])
    placeholders: list[str] = []
    for i, name in enumerate(raw_placeholders):
        if not isinstance(name, str):
            raise SchemaFormatError("placeholder names must be strings", f"placeholders[{i}]")
        placeholders.append(name)

    questions: list[Question] = []
    for qi, raw in enumerate(_optional(doc, "questions", list, "document", [])):
        where = f"questions[{qi}]"
        if not isinstance(raw, dict):
            raise SchemaFormatError("question must be a mapping", where)
        _unknown_keys(raw, _QUESTION_KEYS, where, (_SECTION_QUESTION, qi), diags)
        qid = _require(raw, "id", str, where)
        prompt = _require(raw, "prompt", str, where)
        kind_text = _require(raw, "kind", str, where)
        try:
            kind = QuestionKind(kind_text)
        except ValueError:
            raise SchemaFormatError(f"unknown question kind {kind_text!r}", where) from None
        options: list[Option] = []
        for oi, raw_opt in enumerate(_optional(raw, "options", list, where, [])):
            opt_where = f"{where}.options[{oi}]"
            if not isinstance(raw_opt, dict):
                raise SchemaFormatError("option must be a mapping", opt_where)
            _unknown_keys(raw_opt, _OPTION_KEYS, opt_where, (_SECTION_QUESTION, qi), diags)
            options.append(Option(
                id=_require(raw_opt, "id", str, opt_where),
                label=_require(raw_opt, "label", str, opt_where),
                allows_free_text=_optional(raw_opt, "allows_free_text", bool, opt_where, False),
            ))
        visible_when = None
        raw_cond = _optional(raw, "visible_when", str, where, None)
        if raw_cond is not None:
            visible_when = _parse_condition_field(raw_cond, f"{where}.visible_when")
        binds = _optional(raw, "binds", str, where, None)
        questions.append(Question(
            id=qid, prompt=prompt, kind=kind, options=tuple(options),
            visible_when=visible_when, binds=binds,
        ))

    rules: list[Rule] = []
    for ri, raw in enumerate(_optional(doc, "rules", list, "document", [])):
        where = f"rules[{ri}]"
        if not isinstance(raw, dict):
            raise SchemaFormatError("rule must be a mapping", where)
        _unknown_keys(raw, _RULE_KEYS, where, (_SECTION_RULE, ri), diags)
        rid = _require(raw, "id", str, where)
        when = _parse_condition_field(_require(raw, "when", str, where), f"{where}.when")
        emit: list[RecommendationFragment] = []
        for ei, raw_emit in enumerate(_optional(raw, "emit", list, where, [])):
            emit_where = f"{where}.emit[{ei}]"
            if not isinstance(raw_emit, dict):
                raise SchemaFormatError("emit entry must be a mapping", emit_where)
            _unknown_keys(raw_emit, _EMIT_KEYS, emit_where, (_SECTION_RULE, ri), diags)
            dim_text = _require(raw_emit, "dimension", str, emit_where)
            try:
                dimension = Dimension(dim_text)
            except ValueError:
                raise SchemaFormatError(f"unknown dimension {dim_text!r}", emit_where) from None
            weight = _require(raw_emit, "weight", int, emit_where)
            if isinstance(weight, bool):
                raise SchemaFormatError("key 'weight' has the wrong type", emit_where)
            emit.append(RecommendationFragment(
                dimension=dimension,
                template=_require(raw_emit, "template", str, emit_where),
                weight=weight,
                note=_optional(raw_emit, "note", str, emit_where, None),
            ))
        rules.append(Rule(id=rid, when=when, emit=tuple(emit)))

    schema = SurveySchema(
        id=schema_id,
        version=version,
        placeholders=tuple(placeholders),
        questions=tuple(questions),
        rules=tuple(rules),
    )
    return schema, diags


# --- semantic validation ---------------------------------------------------


def _check_condition_references(
    cond: Condition,
    schema: SurveySchema,
    where: str,
    section: tuple[int, int],
    max_question_index: int | None,
    diags: list[Diagnostic],
) -> bool:
    """Report unknown/forward references; True when the condition is clean."""
    clean = True
    for leaf in iter_leaves(cond):
        target = schema.question(leaf.question_id)
        if target is None:
            diags.append(Diagnostic(
                code=UNKNOWN_QUESTION, severity=Severity.ERROR, where=where,
                message=f"condition references undeclared question '{leaf.question_id}'",
                sort_key=section,
            ))
            clean = False
            continue
        position = schema.position(leaf.question_id)
        if max_question_index is not None and position is not None and position >= max_question_index:
            own_id = schema.questions[max_question_index].id
            diags.append(Diagnostic(
                code=FORWARD_REFERENCE, severity=Severity.ERROR, where=where,
                message=(
                    f"condition on '{own_id}' references '{leaf.question_id}', "
                    f"which is not declared earlier"
                ),
                sort_key=section,
            ))
            clean = False
        # Option-id references must exist on questions that declare options.
        if isinstance(leaf, (Eq, Neq)) and target.kind is QuestionKind.SINGLE_CHOICE:
            if leaf.value not in target.option_ids():
                diags.append(Diagnostic(
                    code=UNKNOWN_OPTION, severity=Severity.ERROR, where=where,
                    message=f"question '{leaf.question_id}' has no option '{leaf.value}'",
                    sort_key=section,
                ))
                clean = False
        if isinstance(leaf, Includes) and target.kind in (
            QuestionKind.SINGLE_CHOICE, QuestionKind.MULTI_CHOICE
        ):
            if leaf.option_id not in target.option_ids():
                diags.append(Diagnostic(
                    code=UNKNOWN_OPTION, severity=Severity.ERROR, where=where,
                    message=f"question '{leaf.question_id}' has no option '{leaf.option_id}'",
                    sort_key=section,
                ))
                clean = False
    return clean


def _fold(cond: Condition, schema: SurveySchema, unreachable: set[str]) -> bool | None:
    """Constant-fold a condition: True/False when statically decided, else None.

    Leaves referencing questions that can never be visible fold to False,
    as do shape-impossible tests (equality against a multi-choice answer,
    ``includes`` against anything but multi-choice, boolean compared with
    something other than "true"/"false").
    """
    if isinstance(cond, Or):
        folded = [_fold(c, schema, unreachable) for c in cond.children]
        if any(f is True for f in folded):
            return True
        if all(f is False for f in folded):
            return False
        return None
    if isinstance(cond, And):
        folded = [_fold(c, schema, unreachable) for c in cond.children]
        if any(f is False for f in folded):
            return False
        if all(f is True for f in folded):
            return True
        return None
    if isinstance(cond, Not):
        inner = _fold(cond.child, schema, unreachable)
        return None if inner is None else not inner
    target = schema.question(cond.question_id)
    if target is None:
        return None  # unknown-question error owns this case
    if cond.question_id in unreachable:
        return False
    if isinstance(cond, (Eq, Neq)):
        if target.kind is QuestionKind.MULTI_CHOICE:
            return False
        if isinstance(cond, Eq):
            if target.kind is QuestionKind.BOOLEAN and cond.value not in ("true", "false"):
                return False
            if target.kind is QuestionKind.SINGLE_CHOICE and cond.value not in target.option_ids():
                return False
        return None
    if isinstance(cond, Includes):
        if target.kind is not QuestionKind.MULTI_CHOICE:
            return False
        if cond.option_id not in target.option_ids():
            return False
        return None
    return None  # Answered


def validate_schema(schema: SurveySchema) -> list[Diagnostic]:
    """All invariant violations (errors) and lint findings (warnings).

    Deterministic: ordered by declaration position, then diagnostic code.
    """
    diags: list[Diagnostic] = []

    declared = set(schema.placeholders)
    seen_placeholders: set[str] = set()
    for pi, name in enumerate(schema.placeholders):
        if not _IDENT_RE.match(name):
            diags.append(Diagnostic(
                code=BAD_IDENTIFIER, severity=Severity.ERROR, where=f"placeholder:{name}",
                message=f"placeholder name {name!r} must match [a-z][a-z0-9_]*",
                sort_key=(_SECTION_PLACEHOLDER, pi),
            ))
        if name in seen_placeholders:
            diags.append(Diagnostic(
                code=DUPLICATE_PLACEHOLDER, severity=Severity.ERROR, where=f"placeholder:{name}",
                message=f"placeholder {name!r} declared more than once",
                sort_key=(_SECTION_PLACEHOLDER, pi),
            ))
        seen_placeholders.add(name)

    seen_questions: set[str] = set()
    question_clean: dict[str, bool] = {}
    for qi, question in enumerate(schema.questions):
        where = f"question:{question.id}"
        section = (_SECTION_QUESTION, qi)
        clean = True
        if not _IDENT_RE.match(question.id):
            diags.append(Diagnostic(
                code=BAD_IDENTIFIER, severity=Severity.ERROR, where=where,
                message=f"question id {question.id!r} must match [a-z][a-z0-9_]*",
                sort_key=section,
            ))
            clean = False
        if question.id in seen_questions:
            diags.append(Diagnostic(
                code=DUPLICATE_QUESTION_ID, severity=Severity.ERROR, where=where,
                message=f"question id {question.id!r} declared more than once",
                sort_key=section,
            ))
            clean = False
        seen_questions.add(question.id)

        if question.kind in (QuestionKind.SINGLE_CHOICE, QuestionKind.MULTI_CHOICE):
            if not question.options:
                diags.append(Diagnostic(
                    code=MISSING_OPTIONS, severity=Severity.ERROR, where=where,
                    message=f"{question.kind.value} question must declare at least one option",
                    sort_key=section,
                ))
                clean = False
        elif question.options:
            diags.append(Diagnostic(
                code=UNEXPECTED_OPTIONS, severity=Severity.ERROR, where=where,
                message=f"{question.kind.value} question must not declare options",
                sort_key=section,
            ))
            clean = False

        seen_options: set[str] = set()
        for opt in question.options:
            if not _IDENT_RE.match(opt.id):
                diags.append(Diagnostic(
                    code=BAD_IDENTIFIER, severity=Severity.ERROR, where=where,
                    message=f"option id {opt.id!r} must match [a-z][a-z0-9_]*",
                    sort_key=section,
                ))
                clean = False
            if opt.id in seen_options:
                diags.append(Diagnostic(
                    code=DUPLICATE_OPTION_ID, severity=Severity.ERROR, where=where,
                    message=f"option id {opt.id!r} declared more than once on '{question.id}'",
                    sort_key=section,
                ))
                clean = False
            seen_options.add(opt.id)

        if question.binds is not None and question.binds not in declared:
            diags.append(Diagnostic(
                code=UNDECLARED_PLACEHOLDER, severity=Severity.ERROR, where=where,
                message=f"binds references undeclared placeholder '{question.binds}'",
                sort_key=section,
            ))
            clean = False

        if question.visible_when is not None:
            if not _check_condition_references(
                question.visible_when, schema, where, section, qi, diags
            ):
                clean = False
        question_clean[question.id] = clean

    seen_rules: set[str] = set()
    rule_clean: dict[int, bool] = {}
    bound = set(schema.bound_placeholders())
    for ri, rule in enumerate(schema.rules):
        where = f"rule:{rule.id}"
        section = (_SECTION_RULE, ri)
        clean = True
        if not _IDENT_RE.match(rule.id):
            diags.append(Diagnostic(
                code=BAD_IDENTIFIER, severity=Severity.ERROR, where=where,
                message=f"rule id {rule.id!r} must match [a-z][a-z0-9_]*",
                sort_key=section,
            ))
            clean = False
        if rule.id in seen_rules:
            diags.append(Diagnostic(
                code=DUPLICATE_RULE_ID, severity=Severity.ERROR, where=where,
                message=f"rule id {rule.id!r} declared more than once",
                sort_key=section,
            ))
            clean = False
        seen_rules.add(rule.id)

        if not rule.emit:
            diags.append(Diagnostic(
                code=EMPTY_RULE, severity=Severity.ERROR, where=where,
                message="rule emits no fragments",
                sort_key=section,
            ))
            clean = False
        for ei, fragment in enumerate(rule.emit):
            for name in PLACEHOLDER_RE.findall(fragment.template):
                if name not in declared:
                    diags.append(Diagnostic(
                        code=UNDECLARED_PLACEHOLDER, severity=Severity.ERROR, where=where,
                        message=f"emit[{ei}] template references undeclared placeholder '{name}'",
                        sort_key=section,
                    ))
                    clean = False

        if not _check_condition_references(rule.when, schema, where, section, None, diags):
            clean = False
        rule_clean[ri] = clean

    # Reachability lint: one forward pass; conditions only see earlier questions.
    unreachable: set[str] = set()
    for qi, question in enumerate(schema.questions):
        if question.visible_when is None or not question_clean.get(question.id, False):
            continue
        if _fold(question.visible_when, schema, unreachable) is False:
            unreachable.add(question.id)
            diags.append(Diagnostic(
                code=UNREACHABLE_QUESTION, severity=Severity.WARNING,
                where=f"question:{question.id}",
                message=f"question '{question.id}' can never become visible",
                sort_key=(_SECTION_QUESTION, qi),
            ))
    for ri, rule in enumerate(schema.rules):
        if not rule_clean.get(ri, False):
            continue
        if _fold(rule.when, schema, unreachable) is False:
            diags.append(Diagnostic(
                code=RULE_NEVER_FIRES, severity=Severity.WARNING, where=f"rule:{rule.id}",
                message=f"rule '{rule.id}' can never fire",
                sort_key=(_SECTION_RULE, ri),
            ))

    for pi, name in enumerate(schema.placeholders):
        if name not in bound:
            diags.append(Diagnostic(
                code=UNBOUND_PLACEHOLDER, severity=Severity.WARNING,
                where=f"placeholder:{name}",
                message=f"placeholder '{name}' is declared but no question binds it",
                sort_key=(_SECTION_PLACEHOLDER, pi),
            ))

    return _sorted_diagnostics(diags)


def parse_schema(text: str) -> SurveySchema:
    """Parse and fully validate a schema document.

    Raises:
        SchemaFormatError: document or condition syntax prevents parsing.
        SchemaValidationError: the parsed document violates schema invariants.
    """
    schema, load_diags = load_document(text)
    diags = _sorted_diagnostics(load_diags + validate_schema(schema))
    if any(d.severity is Severity.ERROR for d in diags):
        raise SchemaValidationError(diags)
    return schema


def check_document(text: str) -> list[Diagnostic]:
    """Diagnostics for a document without raising on validation errors.

    Still raises SchemaFormatError when the text cannot be materialized.
    """
    schema, load_diags = load_document(text)
    return _sorted_diagnostics(load_diags + validate_schema(schema))


# --- serialization ---------------------------------------------------------


def serialize_schema(schema: SurveySchema) -> str:
    """Emit the YAML document for a schema; parse_schema round-trips it."""
    doc: dict[str, Any] = {
        "id": schema.id,
        "version": schema.version,
        "placeholders": list(schema.placeholders),
        "questions": [],
        "rules": [],
    }
    for question in schema.questions:
        raw: dict[str, Any] = {
            "id": question.id,
            "prompt": question.prompt,
            "kind": question.kind.value,
        }
        if question.options:
            raw["options"] = [
                {"id": o.id, "label": o.label, **({"allows_free_text": True} if o.allows_free_text else {})}
                for o in question.options
            ]
        if question.visible_when is not None:
            raw["visible_when"] = print_condition(question.visible_when)
        if question.binds is not None:
            raw["binds"] = question.binds
        doc["questions"].append(raw)
    for rule in schema.rules:
        raw = {
            "id": rule.id,
            "when": print_condition(rule.when),
            "emit": [
                {
                    "dimension": f.dimension.value,
                    "template": f.template,
                    "weight": f.weight,
                    **({"note": f.note} if f.note is not None else {}),
                }
                for f in rule.emit
            ],
        }
        doc["rules"].append(raw)
    return yaml.safe_dump(doc, sort_keys=False, allow_unicode=True, width=100000)
