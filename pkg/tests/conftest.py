from __future__ import annotations

import pytest

from fairist import SurveySchema, builtin_schema
from fairist.content_pack import example_answers
from fairist.recommend import RecommendationReport, apply_rules

from util import decode_answers, drive_session


@pytest.fixture(scope="session")
def pack() -> SurveySchema:
    return builtin_schema()


@pytest.fixture(scope="session")
def example_answer_values() -> dict:
    return decode_answers(example_answers()["answers"])


@pytest.fixture(scope="session")
def example_report(pack, example_answer_values) -> RecommendationReport:
    session = drive_session(pack, example_answer_values, token="example-fixture-token0")
    return apply_rules(pack, session)
