"""Command-line entry points.

Exit codes: 0 success, 1 validation or answer errors, 2 usage and I/O
errors, 130 user abort.  Diagnostics go to stderr; report bytes go only to
the selected output target (stdout with ``-o -``).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import NoReturn

import click

from . import session as session_ops
from .answers import AnswerDecodeError, AnswerValue, BooleanAnswer, MultiAnswer, SingleAnswer, TextAnswer, answer_from_json
from .content_pack import builtin_document, builtin_schema
from .recommend import RecommendationReport, apply_rules
from .render import FORMATS, render, render_markdown
from .schema import (
    Question,
    QuestionKind,
    SchemaFormatError,
    Severity,
    SurveySchema,
    check_document,
    parse_schema,
)
from .session import Session, SessionError, IncompleteSessionError
from .service import create_app

# Library runs use a fixed token so batch and wizard output is reproducible.
LOCAL_TOKEN = "local"

_BACK = object()


def _fail(message: str, code: int) -> NoReturn:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_schema_arg(schema_path: str | None) -> SurveySchema:
    if schema_path is None:
        return builtin_schema()
    try:
        text = Path(schema_path).read_text("utf-8")
    except OSError as exc:
        _fail(f"cannot read schema file: {exc}", 2)
    try:
        return parse_schema(text)
    except SchemaFormatError as exc:
        _fail(f"cannot parse schema file: {exc}", 2)
    except Exception as exc:  # SchemaValidationError
        _fail(str(exc), 1)


def _write_output(text: str, out_path: str) -> None:
    if out_path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        Path(out_path).write_text(text, encoding="utf-8")
    except OSError as exc:
        _fail(f"cannot write output: {exc}", 2)


@click.group()
def main() -> None:
    """FAIR implementation survey tool: questionnaire, recommendations, reports."""


@main.command()
@click.argument("schema_file", type=click.Path())
@click.option("--strict", is_flag=True, help="Treat warnings as errors.")
def validate(schema_file: str, strict: bool) -> None:
    """Check a schema document and print its diagnostics."""
    try:
        text = Path(schema_file).read_text("utf-8")
    except OSError as exc:
        _fail(f"cannot read schema file: {exc}", 2)
    try:
        diagnostics = check_document(text)
    except SchemaFormatError as exc:
        _fail(f"cannot parse schema file: {exc}", 2)
    for diagnostic in diagnostics:
        click.echo(str(diagnostic), err=True)
    errors = sum(1 for d in diagnostics if d.severity is Severity.ERROR)
    warnings = len(diagnostics) - errors
    click.echo(f"{errors} error(s), {warnings} warning(s)", err=True)
    if errors or (strict and warnings):
        sys.exit(1)


def _apply_answer_file(schema: SurveySchema, data: dict) -> Session:
    """Replay a batch answer file through the engine in declaration order."""
    if not isinstance(data, dict) or not isinstance(data.get("answers"), dict):
        _fail("answers file must be a JSON object with an 'answers' mapping", 1)
    file_schema_id = data.get("schema_id")
    if file_schema_id is not None and file_schema_id != schema.id:
        _fail(f"answers file targets schema '{file_schema_id}', not '{schema.id}'", 1)
    answers: dict[str, AnswerValue] = {}
    for question_id, raw in data["answers"].items():
        try:
            answers[question_id] = answer_from_json(raw)
        except AnswerDecodeError as exc:
            _fail(f"bad answer for '{question_id}': {exc}", 1)

    current = session_ops.start_session(schema, token=LOCAL_TOKEN)
    applied: set[str] = set()
    for question in schema.questions:
        if question.id not in answers:
            continue
        if question.id in {q.id for q in session_ops.visible_questions(schema, current)}:
            try:
                current = session_ops.submit_answer(schema, current, question.id, answers[question.id])
            except SessionError as exc:
                _fail(str(exc), 1)
            applied.add(question.id)
    leftover = set(answers) - applied
    for question_id in sorted(leftover):
        if schema.question(question_id) is None:
            click.echo(f"error: unknown question '{question_id}'", err=True)
        else:
            click.echo(f"error: question not visible: '{question_id}'", err=True)
    if leftover:
        sys.exit(1)
    try:
        return session_ops.complete_session(schema, current)
    except IncompleteSessionError as exc:
        _fail(str(exc), 1)


@main.command()
@click.option("--answers", "answers_file", required=True, type=click.Path(), help="JSON answers file.")
@click.option("--schema", "schema_file", type=click.Path(), default=None, help="Schema document; defaults to the built-in pack.")
@click.option("--builtin", is_flag=True, help="Use the built-in questionnaire (the default).")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="md", show_default=True)
@click.option("-o", "out_path", default="-", show_default=True, help="Output path; '-' is stdout.")
@click.option("--long", "long_form", is_flag=True, help="Append plain bulleted sections to the Markdown table.")
def batch(answers_file: str, schema_file: str | None, builtin: bool, fmt: str, out_path: str, long_form: bool) -> None:
    """Compile an answers file into a rendered report without prompts."""
    if builtin and schema_file is not None:
        _fail("--builtin and --schema are mutually exclusive", 2)
    schema = _load_schema_arg(schema_file)
    try:
        data = json.loads(Path(answers_file).read_text("utf-8"))
    except OSError as exc:
        _fail(f"cannot read answers file: {exc}", 2)
    except json.JSONDecodeError as exc:
        _fail(f"answers file is not valid JSON: {exc}", 1)
    completed = _apply_answer_file(schema, data)
    report = apply_rules(schema, completed)
    _write_output(_render_for_cli(report, fmt, long_form), out_path)


def _render_for_cli(report: RecommendationReport, fmt: str, long_form: bool) -> str:
    if fmt == "md" and long_form:
        return render_markdown(report, long=True)
    return render(report, fmt)


def _read_line(prompt: str) -> str:
    click.echo(prompt, err=True, nl=False)
    return input()


def _prompt_options(question: Question) -> None:
    for number, option in enumerate(question.options, start=1):
        suffix = " (specify)" if option.allows_free_text else ""
        click.echo(f"  {number}) {option.label}{suffix}", err=True)


def _prompt_question(question: Question) -> AnswerValue | object:
    """Ask one question; returns an answer value or the back sentinel."""
    click.echo(f"\n{question.prompt}", err=True)
    if question.kind in (QuestionKind.SINGLE_CHOICE, QuestionKind.MULTI_CHOICE):
        _prompt_options(question)
    while True:
        if question.kind is QuestionKind.SINGLE_CHOICE:
            line = _read_line("Choose a number ('back' to revisit): ").strip()
            if line.lower() == "back":
                return _BACK
            if not line.isdigit() or not 1 <= int(line) <= len(question.options):
                click.echo("Enter one of the listed numbers.", err=True)
                continue
            option = question.options[int(line) - 1]
            text = None
            if option.allows_free_text:
                entered = _read_line("Specify (leave empty to skip): ").strip()
                text = entered or None
            return SingleAnswer(option=option.id, text=text)
        if question.kind is QuestionKind.MULTI_CHOICE:
            line = _read_line("Choose numbers separated by commas ('back' to revisit): ").strip()
            if line.lower() == "back":
                return _BACK
            picks = [p.strip() for p in line.split(",") if p.strip()]
            if not picks or not all(p.isdigit() and 1 <= int(p) <= len(question.options) for p in picks):
                click.echo("Enter listed numbers separated by commas, e.g. 1,3.", err=True)
                continue
            selected = [question.options[int(p) - 1] for p in picks]
            texts: dict[str, str] = {}
            for option in selected:
                if option.allows_free_text:
                    entered = _read_line(f"Text for '{option.label}' (leave empty to skip): ").strip()
                    if entered:
                        texts[option.id] = entered
            return MultiAnswer(selections=frozenset(o.id for o in selected), texts=texts)
        if question.kind is QuestionKind.BOOLEAN:
            line = _read_line("[y/n] ('back' to revisit): ").strip().lower()
            if line == "back":
                return _BACK
            if line in ("y", "yes"):
                return BooleanAnswer(True)
            if line in ("n", "no"):
                return BooleanAnswer(False)
            click.echo("Answer y or n.", err=True)
            continue
        line = _read_line("Answer ('back' to revisit): ")
        if line.strip().lower() == "back":
            return _BACK
        return TextAnswer(line)


def _go_back(schema: SurveySchema, current: Session, trail: list[str]) -> Session:
    if not trail:
        click.echo("Nothing to go back to.", err=True)
        return current
    current = session_ops.retract_answer(schema, current, trail[-1])
    trail[:] = [qid for qid in trail if qid in current.answers]
    return current


@main.command()
@click.option("--schema", "schema_file", type=click.Path(), default=None, help="Schema document; defaults to the built-in pack.")
@click.option("--builtin", is_flag=True, help="Use the built-in questionnaire (the default).")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="md", show_default=True)
@click.option("-o", "out_path", default="-", show_default=True, help="Output path; '-' is stdout.")
@click.option("--long", "long_form", is_flag=True, help="Append plain bulleted sections to the Markdown table.")
@click.option("--assume-tty", is_flag=True, help="Skip the interactive-terminal check (for scripted stdin).")
def wizard(schema_file: str | None, builtin: bool, fmt: str, out_path: str, long_form: bool, assume_tty: bool) -> None:
    """Step through the survey interactively and write the report."""
    if builtin and schema_file is not None:
        _fail("--builtin and --schema are mutually exclusive", 2)
    if not sys.stdin.isatty() and not assume_tty:
        _fail("stdin is not a terminal; use 'fairist batch' for scripted runs", 2)
    schema = _load_schema_arg(schema_file)
    current = session_ops.start_session(schema, token=LOCAL_TOKEN)
    trail: list[str] = []
    try:
        while True:
            question = session_ops.next_question(schema, current)
            if question is None:
                click.echo("\nAll questions answered.", err=True)
                line = _read_line("Type 'done' to finish or 'back' to revisit: ").strip().lower()
                if line == "done":
                    break
                if line == "back":
                    current = _go_back(schema, current, trail)
                continue
            result = _prompt_question(question)
            if result is _BACK:
                current = _go_back(schema, current, trail)
                continue
            try:
                current = session_ops.submit_answer(schema, current, question.id, result)
            except SessionError as exc:
                click.echo(f"error: {exc}", err=True)
                continue
            trail.append(question.id)
            trail[:] = [qid for qid in trail if qid in current.answers]
    except (EOFError, KeyboardInterrupt):
        click.echo("\naborted", err=True)
        sys.exit(130)
    completed = session_ops.complete_session(schema, current)
    report = apply_rules(schema, completed)
    _write_output(_render_for_cli(report, fmt, long_form), out_path)


@main.command()
@click.option("--addr", envvar="FAIRIST_ADDR", default="127.0.0.1:8000", show_default=True, help="Listen address host:port.")
@click.option("--data-dir", envvar="FAIRIST_DATA_DIR", default="./fairist-data", show_default=True, help="Session snapshot directory.")
@click.option("--static-dir", envvar="FAIRIST_STATIC_DIR", default=None, help="Directory of web UI assets to serve under /.")
def serve(addr: str, data_dir: str, static_dir: str | None) -> None:
    """Run the HTTP service."""
    import uvicorn

    host, _, port_text = addr.rpartition(":")
    if not host or not port_text.isdigit():
        _fail(f"bad --addr value {addr!r}; expected host:port", 2)
    app = create_app(Path(data_dir), Path(static_dir) if static_dir else None)
    uvicorn.run(app, host=host, port=int(port_text), log_level="warning")


@main.command("export-schema")
@click.option("--builtin", is_flag=True, required=True, help="Export the built-in questionnaire.")
@click.option("-o", "out_path", default="-", show_default=True, help="Output path; '-' is stdout.")
def export_schema(builtin: bool, out_path: str) -> None:
    """Write the built-in schema document for editing or inspection."""
    _write_output(builtin_document(), out_path)


if __name__ == "__main__":
    main()
