"""Versioned JSON reports and their schema."""

from __future__ import annotations

import datetime
import json

import jsonschema

from . import guards

SCHEMA_ID = "orbit-site/1"


def tool_version() -> str:
    from . import __version__

    return __version__


_CHECK = {
    "type": "object",
    "required": ["id", "anchor", "inputs", "outputs", "pass", "status", "runtime_ms", "witness"],
    "properties": {
        "id": {"type": "string"},
        "anchor": {"type": "string"},
        "inputs": {"type": "object"},
        "outputs": {"type": "object"},
        "pass": {"type": "boolean"},
        "status": {"enum": ["passed", "failed", "skipped"]},
        "runtime_ms": {"type": "number", "minimum": 0},
        "witness": {"type": ["object", "null"]},
    },
    # a failing check always carries a witness
    "if": {"properties": {"status": {"const": "failed"}}},
    "then": {"properties": {"witness": {"type": "object"}}},
}

VERIFY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "kind", "suite", "checks", "summary", "version", "guards"],
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "kind": {"const": "verify"},
        "suite": {"type": "string"},
        "checks": {"type": "array", "items": _CHECK},
        "summary": {
            "type": "object",
            "required": ["total", "passed", "failed", "skipped"],
            "properties": {k: {"type": "integer", "minimum": 0} for k in ("total", "passed", "failed", "skipped")},
        },
        "version": {"type": "string"},
        "guards": {"type": "object"},
        "timestamp": {"type": "string"},
    },
}

_INVS = {"type": "array", "items": {"type": "integer", "minimum": 0}}

PICARD_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "kind", "group", "p", "q", "paths", "invariant_factors", "agree", "character_image_order"],
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "kind": {"const": "picard"},
        "group": {"type": "string"},
        "p": {"type": "integer"},
        "q": {"type": "integer"},
        "paths": {
            "type": "object",
            "properties": {k: _INVS for k in ("bar", "cech_ext", "bruteforce")},
            "additionalProperties": False,
        },
        "invariant_factors": {"anyOf": [_INVS, {"type": "null"}]},
        "agree": {"type": "boolean"},
        "character_image_order": {"type": "integer"},
    },
}

COHOMOLOGY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "kind", "degree", "engines", "agree"],
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "kind": {"const": "cohomology"},
        "degree": {"type": "integer", "minimum": 0},
        "engines": {"type": "object", "properties": {k: _INVS for k in ("bar", "ext")}},
        "agree": {"type": "boolean"},
    },
}

SCHEMAS = {"verify": VERIFY_SCHEMA, "picard": PICARD_SCHEMA, "cohomology": COHOMOLOGY_SCHEMA}


def _stamp(d: dict, timestamp: bool) -> dict:
    """Add a timestamp, or make the report reproducible byte for byte.

    Without a timestamp, wall-clock runtimes are zeroed too, since they are
    the only other run-dependent fields.
    """
    if timestamp:
        d["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        return d
    for c in d.get("checks", []):
        c["runtime_ms"] = 0
    if isinstance(d.get("runtime_ms"), dict):
        d["runtime_ms"] = {k: 0 for k in d["runtime_ms"]}
    return d


def summarize(checks: list[dict]) -> dict:
    s = {"total": len(checks), "passed": 0, "failed": 0, "skipped": 0}
    for c in checks:
        s[c["status"]] += 1
    return s


def verify_report(suite: str, checks: list[dict], timestamp: bool = True) -> dict:
    d = {
        "schema": SCHEMA_ID,
        "kind": "verify",
        "suite": suite,
        "checks": checks,
        "summary": summarize(checks),
        "version": tool_version(),
        "guards": guards.get().as_dict(),
    }
    return _stamp(d, timestamp)


def picard_report(result: dict, timestamp: bool = True) -> dict:
    d = {"schema": SCHEMA_ID, "kind": "picard", "version": tool_version()}
    d.update(result)
    return _stamp(d, timestamp)


def cohomology_report(inputs: dict, degree: int, engines: dict, timestamp: bool = True) -> dict:
    vals = list(engines.values())
    d = {
        "schema": SCHEMA_ID,
        "kind": "cohomology",
        "version": tool_version(),
        "inputs": inputs,
        "degree": degree,
        "engines": engines,
        "agree": all(v == vals[0] for v in vals),
    }
    return _stamp(d, timestamp)


def validate(report: dict) -> None:
    """Raise jsonschema.ValidationError if ``report`` does not match its schema."""
    jsonschema.validate(report, SCHEMAS[report.get("kind", "verify")])


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> dict:
    d = json.loads(text)
    validate(d)
    return d
