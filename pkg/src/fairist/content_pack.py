"""Built-in questionnaire and the example answer set that exercises it."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Any

from .schema import SurveySchema, parse_schema

BUILTIN_SCHEMA_ID = "fairist-core"

_PACK_RESOURCE = "fairist-core.yaml"
_FIXTURE_RESOURCE = "example-answers.json"


def _read_data(name: str) -> str:
    return resources.files("fairist").joinpath("data").joinpath(name).read_text("utf-8")


@lru_cache(maxsize=1)
def builtin_document() -> str:
    """The shipped schema document, exactly as exported by the CLI."""
    return _read_data(_PACK_RESOURCE)


@lru_cache(maxsize=1)
def builtin_schema() -> SurveySchema:
    """The parsed, validated built-in questionnaire."""
    return parse_schema(builtin_document())


@lru_cache(maxsize=1)
def example_answers_document() -> str:
    """Answer file reproducing the published example recommendation table."""
    return _read_data(_FIXTURE_RESOURCE)


def example_answers() -> dict[str, Any]:
    return json.loads(example_answers_document())
