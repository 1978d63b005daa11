"""Boolean condition language driving question visibility and rule firing.

Grammar (whitespace insignificant)::

    expr    := or
    or      := and { "or" and }
    and     := unary { "and" unary }
    unary   := "not" unary | primary
    primary := "(" expr ")"
             | "answered" "(" qid ")"
             | "includes" "(" qid "," string ")"
             | qid ("==" | "!=") string
             | qid "includes" string
    qid     := [a-z][a-z0-9_]*
    string  := '"' non-quote-chars '"'

``and`` binds tighter than ``or``; ``not`` binds tightest.  ``includes``
is accepted both in call form and infix form; the printer emits call form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .answers import AnswerValue, selected_options, single_value

_KEYWORDS = frozenset({"and", "or", "not", "answered", "includes"})


@dataclass(frozen=True)
class Or:
    children: tuple["Condition", ...]


@dataclass(frozen=True)
class And:
    children: tuple["Condition", ...]


@dataclass(frozen=True)
class Not:
    child: "Condition"


@dataclass(frozen=True)
class Eq:
    question_id: str
    value: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neq:
    question_id: str
    value: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Includes:
    question_id: str
    option_id: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Answered:
    question_id: str
    pos: int = field(default=0, compare=False)


Condition = Or | And | Not | Eq | Neq | Includes | Answered

# Leaf node types; every leaf references one question.
Leaf = Eq | Neq | Includes | Answered


class ConditionSyntaxError(ValueError):
    """Malformed condition text.  ``offset`` is a byte offset into the input."""

    def __init__(self, message: str, text: str, char_pos: int):
        self.offset = len(text[:char_pos].encode("utf-8"))
        super().__init__(f"{message} at offset {self.offset}")


# --- tokenizer -------------------------------------------------------------

_IDENT_START = "abcdefghijklmnopqrstuvwxyz"
_IDENT_CONT = _IDENT_START + "0123456789_"


@dataclass(frozen=True)
class _Token:
    kind: str  # ident | string | lparen | rparen | comma | eq | neq | eof
    value: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch == "(":
            tokens.append(_Token("lparen", ch, i))
            i += 1
        elif ch == ")":
            tokens.append(_Token("rparen", ch, i))
            i += 1
        elif ch == ",":
            tokens.append(_Token("comma", ch, i))
            i += 1
        elif ch == "=":
            if text.startswith("==", i):
                tokens.append(_Token("eq", "==", i))
                i += 2
            else:
                raise ConditionSyntaxError("expected '=='", text, i)
        elif ch == "!":
            if text.startswith("!=", i):
                tokens.append(_Token("neq", "!=", i))
                i += 2
            else:
                raise ConditionSyntaxError("expected '!='", text, i)
        elif ch == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise ConditionSyntaxError("unterminated string", text, n)
            tokens.append(_Token("string", text[i + 1 : end], i))
            i = end + 1
        elif ch in _IDENT_START:
            start = i
            while i < n and text[i] in _IDENT_CONT:
                i += 1
            tokens.append(_Token("ident", text[start:i], start))
        else:
            raise ConditionSyntaxError(f"unexpected character {ch!r}", text, i)
    tokens.append(_Token("eof", "", n))
    return tokens


# --- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def fail(self, message: str) -> ConditionSyntaxError:
        return ConditionSyntaxError(message, self.text, self.current.pos)

    def expect(self, kind: str, what: str) -> _Token:
        if self.current.kind != kind:
            raise self.fail(f"expected {what}")
        return self.advance()

    def parse(self) -> Condition:
        expr = self.parse_or()
        if self.current.kind != "eof":
            raise self.fail("unexpected trailing input")
        return expr

    def parse_or(self) -> Condition:
        parts = [self.parse_and()]
        while self.current.kind == "ident" and self.current.value == "or":
            self.advance()
            parts.append(self.parse_and())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def parse_and(self) -> Condition:
        parts = [self.parse_unary()]
        while self.current.kind == "ident" and self.current.value == "and":
            self.advance()
            parts.append(self.parse_unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def parse_unary(self) -> Condition:
        if self.current.kind == "ident" and self.current.value == "not":
            self.advance()
            return Not(self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Condition:
        token = self.current
        if token.kind == "lparen":
            self.advance()
            inner = self.parse_or()
            self.expect("rparen", "')'")
            return inner
        if token.kind != "ident":
            raise self.fail("expected a question reference or '('")
        if token.value == "answered":
            self.advance()
            self.expect("lparen", "'('")
            qid = self._expect_qid()
            self.expect("rparen", "')'")
            return Answered(qid.value, pos=qid.pos)
        if token.value == "includes" and self.tokens[self.index + 1].kind == "lparen":
            self.advance()
            self.advance()  # lparen
            qid = self._expect_qid()
            self.expect("comma", "','")
            option = self.expect("string", "a quoted option id")
            self.expect("rparen", "')'")
            return Includes(qid.value, option.value, pos=qid.pos)
        qid = self._expect_qid()
        op = self.current
        if op.kind == "eq":
            self.advance()
            value = self.expect("string", "a quoted value")
            return Eq(qid.value, value.value, pos=qid.pos)
        if op.kind == "neq":
            self.advance()
            value = self.expect("string", "a quoted value")
            return Neq(qid.value, value.value, pos=qid.pos)
        if op.kind == "ident" and op.value == "includes":
            self.advance()
            option = self.expect("string", "a quoted option id")
            return Includes(qid.value, option.value, pos=qid.pos)
        raise self.fail("expected '==', '!=' or 'includes'")

    def _expect_qid(self) -> _Token:
        if self.current.kind != "ident":
            raise self.fail("expected a question id")
        if self.current.value in _KEYWORDS:
            raise self.fail(f"reserved word {self.current.value!r} cannot be a question id")
        return self.advance()


def parse_condition(text: str) -> Condition:
    """Parse condition text to an AST.

    Raises:
        ConditionSyntaxError: on malformed or empty input, carrying the
            byte offset of the problem.
    """
    if not text.strip():
        raise ConditionSyntaxError("empty condition", text, 0)
    return _Parser(text).parse()


# --- printing --------------------------------------------------------------


def print_condition(cond: Condition) -> str:
    """Render an AST back to canonical condition text (round-trips via parse)."""
    return _print(cond, parent="or")


def _print(cond: Condition, parent: str) -> str:
    if isinstance(cond, Or):
        # Parenthesize under tighter operators and under another Or, so the
        # parsed tree keeps this exact shape instead of flattening.
        text = " or ".join(_print(c, "or-child") for c in cond.children)
        return f"({text})" if parent != "or" else text
    if isinstance(cond, And):
        text = " and ".join(_print(c, "and-child") for c in cond.children)
        return text if parent in ("or", "or-child") else f"({text})"
    if isinstance(cond, Not):
        return f"not {_print(cond.child, 'not')}"
    if isinstance(cond, Eq):
        return f'{cond.question_id} == "{cond.value}"'
    if isinstance(cond, Neq):
        return f'{cond.question_id} != "{cond.value}"'
    if isinstance(cond, Includes):
        return f'includes({cond.question_id}, "{cond.option_id}")'
    if isinstance(cond, Answered):
        return f"answered({cond.question_id})"
    raise TypeError(f"not a condition node: {cond!r}")


# --- evaluation ------------------------------------------------------------


def evaluate_condition(cond: Condition, answers: Mapping[str, AnswerValue]) -> bool:
    """Evaluate a condition against stored answers.  Total and pure.

    References to unanswered questions are never satisfied: ``==`` and
    ``!=`` are both false, ``includes`` is false, ``answered`` is false.
    The same holds when the stored answer has no value of the tested shape
    (``==`` against a multi-choice answer, ``includes`` against anything
    but a multi-choice answer).
    """
    if isinstance(cond, Or):
        return any(evaluate_condition(c, answers) for c in cond.children)
    if isinstance(cond, And):
        return all(evaluate_condition(c, answers) for c in cond.children)
    if isinstance(cond, Not):
        return not evaluate_condition(cond.child, answers)
    if isinstance(cond, Eq):
        value = single_value(answers.get(cond.question_id))
        return value is not None and value == cond.value
    if isinstance(cond, Neq):
        value = single_value(answers.get(cond.question_id))
        return value is not None and value != cond.value
    if isinstance(cond, Includes):
        selections = selected_options(answers.get(cond.question_id))
        return selections is not None and cond.option_id in selections
    if isinstance(cond, Answered):
        return cond.question_id in answers
    raise TypeError(f"not a condition node: {cond!r}")


def iter_leaves(cond: Condition) -> Iterator[Leaf]:
    """Yield every leaf node (question reference) in the tree."""
    if isinstance(cond, (Or, And)):
        for child in cond.children:
            yield from iter_leaves(child)
    elif isinstance(cond, Not):
        yield from iter_leaves(cond.child)
    else:
        yield cond


def referenced_questions(cond: Condition) -> frozenset[str]:
    """Ids of all questions the condition reads."""
    return frozenset(leaf.question_id for leaf in iter_leaves(cond))
