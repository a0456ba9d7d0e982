"""Published output schemas for every structured generation stage.

These are plain JSON Schema documents so fixture authors and alternate
frontends can validate stage outputs without importing this package.
``register_all`` wires them into a gateway; ``publish`` dumps them to disk.
"""

from __future__ import annotations

from pathlib import Path

from .serialize import canonical_bytes

_INTERACTION_TYPES = ["propose", "critique", "improve", "finalize"]

_OUTLINE_TASK = {
    "type": "object",
    "required": ["stepName", "taskContent", "inputObjects", "outputObject"],
    "additionalProperties": False,
    "properties": {
        "stepName": {"type": "string", "minLength": 1},
        "taskContent": {"type": "string", "minLength": 1},
        "inputObjects": {"type": "array", "items": {"type": "string", "minLength": 1}},
        "outputObject": {"type": "string", "minLength": 1},
    },
}

_ACTION = {
    "type": "object",
    "required": ["agent", "instruction", "interactionType", "importantInputs"],
    "additionalProperties": False,
    "properties": {
        "agent": {"type": "string", "minLength": 1},
        "instruction": {"type": "string", "minLength": 1},
        "interactionType": {"enum": _INTERACTION_TYPES},
        "importantInputs": {
            "type": "array",
            "items": {
                "oneOf": [
                    {
                        "type": "object",
                        "required": ["kind", "name"],
                        "additionalProperties": False,
                        "properties": {"kind": {"const": "keyObject"}, "name": {"type": "string", "minLength": 1}},
                    },
                    {
                        "type": "object",
                        "required": ["kind", "index"],
                        "additionalProperties": False,
                        "properties": {"kind": {"const": "action"}, "index": {"type": "integer", "minimum": 0}},
                    },
                ]
            },
        },
    },
}

PLAN_OUTLINE_SCHEMA = {
    "$id": "plan-outline/v1",
    "type": "object",
    "required": ["tasks"],
    "additionalProperties": False,
    "properties": {"tasks": {"type": "array", "minItems": 1, "items": _OUTLINE_TASK}},
}

AGENT_ASSIGNMENT_SCHEMA = {
    "$id": "agent-assignment/v1",
    "type": "object",
    "required": ["team"],
    "additionalProperties": False,
    "properties": {"team": {"type": "array", "minItems": 1, "items": {"type": "string", "minLength": 1}}},
}

TASK_PROCESS_SCHEMA = {
    "$id": "task-process/v1",
    "type": "object",
    "required": ["actions"],
    "additionalProperties": False,
    "properties": {"actions": {"type": "array", "minItems": 1, "items": _ACTION}},
}

ASPECT_DERIVATION_SCHEMA = {
    "$id": "aspect-derivation/v1",
    "type": "object",
    "required": ["aspects"],
    "additionalProperties": False,
    "properties": {
        "aspects": {"type": "array", "minItems": 3, "maxItems": 3, "items": {"type": "string", "minLength": 1}}
    },
}

AGENT_SCORING_SCHEMA = {
    "$id": "agent-scoring/v1",
    "type": "object",
    "required": ["rows"],
    "additionalProperties": False,
    "properties": {
        "rows": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["agent", "scores", "rationales"],
                "additionalProperties": False,
                "properties": {
                    "agent": {"type": "string", "minLength": 1},
                    "scores": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 1, "maximum": 5}},
                    "rationales": {"type": "object", "additionalProperties": {"type": "string", "minLength": 1}},
                },
            },
        }
    },
}

PLAN_BRANCH_SCHEMA = {
    "$id": "plan-branch/v1",
    "type": "object",
    "required": ["tasks"],
    "additionalProperties": False,
    "properties": {"tasks": {"type": "array", "items": _OUTLINE_TASK}},
}

PROCESS_BRANCH_SCHEMA = {
    "$id": "process-branch/v1",
    "type": "object",
    "required": ["actions"],
    "additionalProperties": False,
    "properties": {"actions": {"type": "array", "items": _ACTION}},
}

ALL_SCHEMAS = {
    schema["$id"]: schema
    for schema in (
        PLAN_OUTLINE_SCHEMA,
        AGENT_ASSIGNMENT_SCHEMA,
        TASK_PROCESS_SCHEMA,
        ASPECT_DERIVATION_SCHEMA,
        AGENT_SCORING_SCHEMA,
        PLAN_BRANCH_SCHEMA,
        PROCESS_BRANCH_SCHEMA,
    )
}

# Import schema for agent board files: an array of profile entries.
AGENT_BOARD_IMPORT_SCHEMA = {
    "$id": "agent-board-import/v1",
    "type": "array",
    "items": {
        "type": "object",
        "required": ["name", "profile"],
        "additionalProperties": False,
        "properties": {
            "name": {"type": "string", "minLength": 1},
            "profile": {"type": "string", "minLength": 1},
            "avatar": {"type": "string"},
        },
    },
}


def register_all(gateway) -> None:
    for schema_id, schema in ALL_SCHEMAS.items():
        gateway.register_schema(schema_id, schema)


def publish(directory: str | Path) -> list[Path]:
    """Write every stage schema as a standalone document; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for schema_id, schema in {**ALL_SCHEMAS, "agent-board-import/v1": AGENT_BOARD_IMPORT_SCHEMA}.items():
        path = directory / (schema_id.replace("/", "-") + ".schema.json")
        path.write_bytes(canonical_bytes(schema))
        written.append(path)
    return written
