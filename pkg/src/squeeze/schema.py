"""Versioned JSON schemas for every emitted document."""

import json
from functools import lru_cache
from importlib import resources

import jsonschema

from .errors import ValidationError

_KINDS = {
    "domain": "domain-1.json",
    "construction-certificate": "construction-certificate-1.json",
    "levi-report": "levi-report-1.json",
    "estimates": "estimates-1.json",
    "run-config": "run-config-1.json",
}


@lru_cache(maxsize=None)
def load_schema(kind: str) -> dict:
    try:
        name = _KINDS[kind]
    except KeyError:
        raise ValidationError(f"no schema for document kind {kind!r}")
    with resources.files("squeeze.schemas").joinpath(name).open() as fh:
        return json.load(fh)


def validate_doc(kind: str, doc: dict) -> dict:
    """Validate and return ``doc``; raises ValidationError with the schema path."""
    try:
        jsonschema.validate(doc, load_schema(kind))
    except jsonschema.ValidationError as exc:
        raise ValidationError(f"{kind} document fails its schema: {exc.message}")
    return doc
