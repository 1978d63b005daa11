"""Command-line behavior: batch, validate, wizard, export."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from fairist.cli import main
from fairist.content_pack import builtin_document, example_answers

FORWARD_REF_DOC = """
id: "x"
version: "0.1.0"
questions:
  - id: "q_first"
    prompt: "First?"
    kind: "boolean"
    visible_when: 'q_second == "true"'
  - id: "q_second"
    prompt: "Second?"
    kind: "boolean"
"""

NEVER_FIRES_DOC = """
id: "x"
version: "0.1.0"
questions:
  - id: "q1"
    prompt: "On?"
    kind: "boolean"
rules:
  - id: "r1"
    when: 'q1 == "maybe"'
    emit:
      - dimension: "Findable"
        template: "Never."
        weight: 10
"""

EMPTY_DOC = 'id: "empty"\nversion: "0.1.0"\n'


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def fixture_answers_file(tmp_path) -> Path:
    path = tmp_path / "answers.json"
    path.write_text(json.dumps(example_answers()))
    return path


class TestBatch:
    def test_fixture_reproduces_table(self, runner, fixture_answers_file):
        result = runner.invoke(
            main, ["batch", "--answers", str(fixture_answers_file), "--format", "md", "-o", "-"]
        )
        assert result.exit_code == 0, result.stderr
        assert "ML model and data will be deposited at OpenML.org." in result.stdout
        assert "- Data\n- (Machine Learning) Models" in result.stdout

    def test_invisible_answer_rejected(self, runner, tmp_path):
        answers = {
            "schema_id": "fairist-core",
            "answers": {
                "q_artifact_types": {"kind": "multi", "selections": ["data"]},
                "q_ml_model_share": {"kind": "single", "option": "openml"},
            },
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(answers))
        result = runner.invoke(main, ["batch", "--answers", str(path)])
        assert result.exit_code == 1
        assert "question not visible" in result.stderr
        assert "q_ml_model_share" in result.stderr

    def test_empty_answers_on_zero_rule_schema(self, runner, tmp_path):
        schema_path = tmp_path / "empty.yaml"
        schema_path.write_text(EMPTY_DOC)
        answers_path = tmp_path / "answers.json"
        answers_path.write_text(json.dumps({"schema_id": "empty", "answers": {}}))
        result = runner.invoke(
            main,
            ["batch", "--answers", str(answers_path), "--schema", str(schema_path), "-o", "-"],
        )
        assert result.exit_code == 0, result.stderr
        assert "None specified" in result.stdout

    def test_incomplete_answers_name_missing_questions(self, runner, tmp_path):
        answers = {
            "schema_id": "fairist-core",
            "answers": {"q_artifact_types": {"kind": "multi", "selections": ["data"]}},
        }
        path = tmp_path / "partial.json"
        path.write_text(json.dumps(answers))
        result = runner.invoke(main, ["batch", "--answers", str(path)])
        assert result.exit_code == 1
        assert "q_project_name" in result.stderr

    def test_unknown_question_in_answers(self, runner, tmp_path):
        path = tmp_path / "ghost.json"
        path.write_text(json.dumps({"answers": {"q_ghost": {"kind": "text", "value": "x"}}}))
        result = runner.invoke(main, ["batch", "--answers", str(path)])
        assert result.exit_code == 1
        assert "unknown question" in result.stderr

    def test_missing_answers_file(self, runner):
        result = runner.invoke(main, ["batch", "--answers", "/nonexistent.json"])
        assert result.exit_code == 2

    def test_report_written_to_file(self, runner, fixture_answers_file, tmp_path):
        out = tmp_path / "report.md"
        result = runner.invoke(
            main, ["batch", "--answers", str(fixture_answers_file), "-o", str(out)]
        )
        assert result.exit_code == 0
        assert "All data is open." in out.read_text()
        assert result.stdout == ""

    def test_json_and_nt_formats(self, runner, fixture_answers_file):
        as_json = runner.invoke(
            main, ["batch", "--answers", str(fixture_answers_file), "--format", "json", "-o", "-"]
        )
        data = json.loads(as_json.stdout)
        assert data["token"] == "local"
        triples = runner.invoke(
            main, ["batch", "--answers", str(fixture_answers_file), "--format", "nt", "-o", "-"]
        )
        assert "<urn:fairist:report:local>" in triples.stdout


class TestValidate:
    def test_builtin_export_validates_clean(self, runner, tmp_path):
        path = tmp_path / "pack.yaml"
        path.write_text(builtin_document())
        result = runner.invoke(main, ["validate", str(path)])
        assert result.exit_code == 0
        assert "0 error(s), 0 warning(s)" in result.stderr

    def test_forward_reference_lists_both_ids(self, runner, tmp_path):
        path = tmp_path / "fwd.yaml"
        path.write_text(FORWARD_REF_DOC)
        result = runner.invoke(main, ["validate", str(path)])
        assert result.exit_code == 1
        assert "q_first" in result.stderr and "q_second" in result.stderr
        assert "forward-reference" in result.stderr

    def test_warnings_keep_exit_zero_unless_strict(self, runner, tmp_path):
        path = tmp_path / "warn.yaml"
        path.write_text(NEVER_FIRES_DOC)
        assert runner.invoke(main, ["validate", str(path)]).exit_code == 0
        assert runner.invoke(main, ["validate", str(path), "--strict"]).exit_code == 1

    def test_unreadable_file_exit_2(self, runner):
        assert runner.invoke(main, ["validate", "/nonexistent.yaml"]).exit_code == 2

    def test_unparseable_file_exit_2(self, runner, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("id: [unclosed")
        assert runner.invoke(main, ["validate", str(path)]).exit_code == 2


WIZARD_FIXTURE_INPUT = "\n".join(
    [
        "1,2",      # artifact types: data + ml models
        "Project",  # project name
        "1",        # ML models shared at OpenML.org
        "10",       # repro considerations: none planned
        "1",        # ML datasets shared at OpenML.org
        "y",        # PID
        "1",        # open web folder
        "1",        # HDF5
        "1",        # CC-BY
        "y",        # schema.org
        "y",        # ontologies
        "1",        # code on github
        "y",        # libraries included
        "y",        # posted to website
        "done",
    ]
) + "\n"


class TestWizard:
    def test_requires_tty_or_flag(self, runner):
        result = runner.invoke(main, ["wizard"], input="x\n")
        assert result.exit_code == 2
        assert "batch" in result.stderr

    def test_scripted_walkthrough_follows_ml_branch(self, runner):
        result = runner.invoke(
            main, ["wizard", "--assume-tty", "-o", "-"], input=WIZARD_FIXTURE_INPUT
        )
        assert result.exit_code == 0, result.stderr
        assert "Where will the ML models be shared?" in result.stderr
        assert "Where will your ML datasets be shared?" in result.stderr
        assert "ML model and data will be deposited at OpenML.org." in result.stdout

    def test_back_re_presents_previous_question(self, runner):
        feed = "\n".join(
            [
                "1",     # artifact types: data only
                "X",     # project name
                "back",  # at q_data_pid: go back to project name
                "Y",     # project name again
                "y", "1", "1", "1", "y", "y",  # data branch
                "y",     # website posting
                "done",
            ]
        ) + "\n"
        result = runner.invoke(main, ["wizard", "--assume-tty", "-o", "-"], input=feed)
        assert result.exit_code == 0, result.stderr
        assert result.stderr.count("What is the name of the project?") == 2

    def test_eof_aborts_without_writing(self, runner, tmp_path):
        out = tmp_path / "report.md"
        result = runner.invoke(
            main, ["wizard", "--assume-tty", "-o", str(out)], input="1,2\n"
        )
        assert result.exit_code == 130
        assert not out.exists()

    def test_matches_batch_output_bytes(self, runner, fixture_answers_file):
        wizard_run = runner.invoke(
            main, ["wizard", "--assume-tty", "--format", "json", "-o", "-"],
            input=WIZARD_FIXTURE_INPUT,
        )
        batch_run = runner.invoke(
            main, ["batch", "--answers", str(fixture_answers_file), "--format", "json", "-o", "-"]
        )
        assert wizard_run.exit_code == 0 and batch_run.exit_code == 0
        assert wizard_run.stdout == batch_run.stdout


class TestExport:
    def test_export_matches_builtin_document(self, runner, tmp_path):
        out = tmp_path / "pack.yaml"
        result = runner.invoke(main, ["export-schema", "--builtin", "-o", str(out)])
        assert result.exit_code == 0
        assert out.read_text() == builtin_document()

    def test_export_to_stdout(self, runner):
        result = runner.invoke(main, ["export-schema", "--builtin", "-o", "-"])
        assert result.exit_code == 0
        assert result.stdout == builtin_document()
