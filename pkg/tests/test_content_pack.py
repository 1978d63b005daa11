"""Built-in questionnaire: validity, coverage, and example reproduction."""

from __future__ import annotations

from fairist import parse_schema, validate_schema
from fairist.answers import MultiAnswer
from fairist.content_pack import builtin_document, builtin_schema, example_answers
from fairist.recommend import apply_rules
from fairist.schema import Dimension, QuestionKind
from fairist.session import start_session, submit_answer, visible_questions

from util import decode_answers, drive_session

EXAMPLE_PRACTICE_STRINGS = [
    "Research products will be posted to the Project website.",
    "Data will be assigned a unique identifier per community best practices and will be referenced on the project's website.",
    "Metadata and links to related ontologies will be available on the Project website.",
    "Where tags exist, schema.org descriptors will be utilized.",
    "Available via open, web accessible folder.",
    "All data is open.",
    "Code stored on github (and linked from the Project website).",
    "Uses libraries included with the code.",
    "Both input and output data are in HDF5 format.",
    "ML model and data will be deposited at OpenML.org.",
    "A notice posted will designate research objects as licensed under CC-BY.",
]

REPRO_FACTOR_OPTIONS = {
    "seeds",
    "thread_count",
    "processing_unit",
    "software_versions",
    "container_link",
    "compiler_settings",
    "primitive_op_selection",
    "floating_point",
    "rounding_errors",
}


def test_pack_parses_and_validates_clean():
    schema = parse_schema(builtin_document())
    assert validate_schema(schema) == []
    assert (schema.id, schema.version) == ("fairist-core", "1.0.0")


def test_selecting_ml_models_reveals_exactly_three_ml_questions(pack):
    session = start_session(pack)
    before = {q.id for q in visible_questions(pack, session)}
    session = submit_answer(pack, session, "q_artifact_types", MultiAnswer(frozenset({"ml_models"})))
    after = {q.id for q in visible_questions(pack, session)}
    newly_visible_ml = {qid for qid in after - before if qid.startswith("q_ml_")}
    assert newly_visible_ml == {"q_ml_model_share", "q_ml_repro", "q_ml_dataset_share"}


def test_ml_repro_offers_all_published_factors(pack):
    question = pack.question("q_ml_repro")
    assert question is not None and question.kind is QuestionKind.MULTI_CHOICE
    option_ids = {opt.id for opt in question.options}
    assert len(option_ids) >= 9
    assert REPRO_FACTOR_OPTIONS <= option_ids


def test_each_selected_repro_factor_emits_a_reproducibility_fragment(pack, example_answer_values):
    answers = dict(example_answer_values)
    answers["q_ml_repro"] = MultiAnswer(frozenset(REPRO_FACTOR_OPTIONS))
    report = apply_rules(pack, drive_session(pack, answers))
    repro = report.fragments[Dimension.REPRODUCIBILITY]
    assert len(repro) == len(REPRO_FACTOR_OPTIONS)
    assert "Initialization seeds used will be documented." in [f.text for f in repro]


def test_required_questions_and_bindings(pack):
    project = pack.question("q_project_name")
    assert project.kind is QuestionKind.FREE_TEXT and project.binds == "project_name"

    artifacts = pack.question("q_artifact_types")
    assert artifacts.kind is QuestionKind.MULTI_CHOICE
    assert {o.id for o in artifacts.options} == {
        "data", "ml_models", "notebooks", "software", "workflows",
        "benchmarks", "website", "domain_repository", "nanopublications",
    }

    model_share = pack.question("q_ml_model_share")
    assert model_share.prompt == "Where will the ML models be shared?"
    assert [o.id for o in model_share.options][:2] == ["openml", "mlcommons"]
    assert model_share.option("openml").label == "OpenML.org"
    assert model_share.option("mlcommons").label == "MLCommons"
    assert model_share.option("other").allows_free_text

    repro = pack.question("q_ml_repro")
    assert repro.prompt == (
        "What are the reproducibility considerations you will undertake to "
        "document analysis that utilizes ML?"
    )

    dataset_share = pack.question("q_ml_dataset_share")
    assert dataset_share.prompt == "Where will your ML datasets be shared?"

    registry = pack.question("q_domain_registry")
    assert registry.option("magic").label == "Magnetics Information Consortium (MagIC)"
    assert registry.option("cdf").label == "Council of Data Facilities"

    access = pack.question("q_data_access")
    assert {o.id for o in access.options} == {"open_web_folder", "object_store", "restricted"}
    assert {o.id for o in pack.question("q_data_license").options} == {"cc_by", "cc0", "other"}
    assert pack.question("q_data_format").option("hdf5").label == "HDF5"
    assert pack.question("q_data_schema_org").kind is QuestionKind.BOOLEAN
    assert pack.question("q_data_ontologies").kind is QuestionKind.BOOLEAN
    assert pack.question("q_code_host").option("github") is not None
    assert pack.question("q_code_libraries").kind is QuestionKind.BOOLEAN


def test_every_published_option_name_appears_in_pack():
    document = builtin_document()
    for needle in [
        "OpenML.org", "MLCommons", "MagIC", "Council of Data Facilities",
        "HDF5", "CC-BY", "schema.org", "Zenodo", "github",
    ]:
        assert needle in document, needle


def test_example_fixture_reproduces_every_fragment_string(pack, example_answer_values):
    report = apply_rules(pack, drive_session(pack, example_answer_values))
    rendered = [f.text for fragments in report.fragments.values() for f in fragments]
    for expected in EXAMPLE_PRACTICE_STRINGS:
        assert expected in rendered, expected
    # Pure-FAIR fixture: no Reproducibility row.
    assert Dimension.REPRODUCIBILITY not in report.fragments


def test_example_answers_target_builtin_schema():
    data = example_answers()
    assert data["schema_id"] == builtin_schema().id
    decoded = decode_answers(data["answers"])
    assert set(decoded) <= {q.id for q in builtin_schema().questions}


def test_notebook_branch_is_nested(pack):
    # Notebook DOI service only appears after the DOI question is answered yes.
    session = start_session(pack)
    session = submit_answer(
        pack, session, "q_artifact_types", MultiAnswer(frozenset({"notebooks"}))
    )
    visible = {q.id for q in visible_questions(pack, session)}
    assert "q_notebook_doi" in visible and "q_notebook_doi_service" not in visible
    from fairist.answers import BooleanAnswer

    session = submit_answer(pack, session, "q_notebook_doi", BooleanAnswer(True))
    assert "q_notebook_doi_service" in {q.id for q in visible_questions(pack, session)}
