"""Language-neutral JSON interchange for class models.

Document shape::

    {
      "classes": [
        {"name": "B", "parent": "A",
         "fields": [{"name": "x", "type": "int"}],
         "methods": [{"name": "m", "arity": 0, "decision_points": 1,
                      "calls": [{"receiver": "@self", "method": "n", "arity": 0}],
                      "field_uses": ["x"]}]}
      ],
      "external": ["Exception"],
      "stats": {"files": 1, "lines": 10, "blank": 2, "comment": 1, "code": 7,
                "executable": 3, "declarative": 1}
    }

``parent``, ``external`` and ``stats`` are optional, as are a method's
``decision_points``, ``calls`` and ``field_uses``. Unknown keys are
rejected. ``"@self"`` is the receiver of calls on the enclosing object.
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema

from entropia.model import (
    CallSite,
    ClassDef,
    ClassModel,
    FieldDef,
    MethodDef,
    SourceStats,
    build_model,
)

_COUNT = {"type": "integer", "minimum": 0}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["classes"],
    "properties": {
        "classes": {"type": "array", "items": {"$ref": "#/$defs/class"}},
        "external": {"type": "array", "items": {"type": "string"}},
        "stats": {"$ref": "#/$defs/stats"},
    },
    "$defs": {
        "class": {
            "type": "object",
            "additionalProperties": False,
            "required": ["name", "fields", "methods"],
            "properties": {
                "name": {"type": "string", "minLength": 1},
                "parent": {"type": ["string", "null"]},
                "fields": {"type": "array", "items": {"$ref": "#/$defs/field"}},
                "methods": {"type": "array", "items": {"$ref": "#/$defs/method"}},
            },
        },
        "field": {
            "type": "object",
            "additionalProperties": False,
            "required": ["name", "type"],
            "properties": {"name": {"type": "string"}, "type": {"type": "string"}},
        },
        "method": {
            "type": "object",
            "additionalProperties": False,
            "required": ["name", "arity"],
            "properties": {
                "name": {"type": "string"},
                "arity": _COUNT,
                "decision_points": _COUNT,
                "calls": {"type": "array", "items": {"$ref": "#/$defs/call"}},
                "field_uses": {"type": "array", "items": {"type": "string"}},
            },
        },
        "call": {
            "type": "object",
            "additionalProperties": False,
            "required": ["receiver", "method", "arity"],
            "properties": {
                "receiver": {"type": "string"},
                "method": {"type": "string"},
                "arity": _COUNT,
            },
        },
        "stats": {
            "type": "object",
            "additionalProperties": False,
            "required": ["files", "lines", "blank", "comment", "code", "executable", "declarative"],
            "properties": {
                k: _COUNT
                for k in ("files", "lines", "blank", "comment", "code", "executable", "declarative")
            },
        },
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


class SchemaError(ValueError):
    """Interchange document does not match the schema."""


def model_to_dict(model: ClassModel) -> dict:
    doc: dict = {"classes": []}
    for c in model.classes:
        entry: dict = {"name": c.name}
        if c.parent is not None:
            entry["parent"] = c.parent
        entry["fields"] = [{"name": f.name, "type": f.declared_type} for f in c.fields]
        entry["methods"] = [
            {
                "name": m.name,
                "arity": m.arity,
                "decision_points": m.decision_points,
                "calls": [{"receiver": k.receiver, "method": k.method, "arity": k.arity} for k in m.calls],
                "field_uses": sorted(m.field_uses),
            }
            for m in c.methods
        ]
        doc["classes"].append(entry)
    parents = {c.parent for c in model.classes if c.parent is not None}
    external = sorted(p for p in parents if p not in model)
    if external:
        doc["external"] = external
    if model.stats is not None:
        s = model.stats
        doc["stats"] = {
            "files": s.files,
            "lines": s.lines,
            "blank": s.blank,
            "comment": s.comment,
            "code": s.code,
            "executable": s.executable,
            "declarative": s.declarative,
        }
    return doc


def model_from_dict(doc: object) -> ClassModel:
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise SchemaError(f"{where}: {err.message}")
    classes = [
        ClassDef(
            name=c["name"],
            parent=c.get("parent"),
            fields=tuple(FieldDef(f["name"], f["type"]) for f in c["fields"]),
            methods=tuple(
                MethodDef(
                    name=m["name"],
                    arity=m["arity"],
                    decision_points=m.get("decision_points", 0),
                    calls=tuple(CallSite(k["receiver"], k["method"], k["arity"]) for k in m.get("calls", [])),
                    field_uses=frozenset(m.get("field_uses", [])),
                )
                for m in c["methods"]
            ),
        )
        for c in doc["classes"]
    ]
    stats = SourceStats(**doc["stats"]) if "stats" in doc else None
    return build_model(classes, stats, external=doc.get("external", ()))


def dumps_interchange(model: ClassModel) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def dump_interchange(model: ClassModel, path: str | Path) -> None:
    Path(path).write_text(dumps_interchange(model), encoding="utf-8")


def load_interchange(path: str | Path) -> ClassModel:
    """Read an interchange file; raises :class:`SchemaError` or a ``ModelError``."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    return model_from_dict(doc)
