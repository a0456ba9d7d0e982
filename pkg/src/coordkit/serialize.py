"""Canonical JSON serialization for strategy documents.

The wire format is a single JSON document with top-level keys ``goal``,
``keyObjects``, ``tasks``, ``agentBoard``. Keys are camelCase, arrays keep
their order, and canonical byte output (sorted keys, UTF-8, LF, two-space
indent) makes round-trips byte-stable. Optional fields are omitted when
absent so that equal values always produce equal bytes.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .errors import CorruptProjectError
from .model import (
    ActionSpec,
    AgentBoard,
    AgentProfile,
    Goal,
    InputRef,
    InteractionType,
    KeyObject,
    Origin,
    Strategy,
    TaskProcess,
    TaskSpec,
)


def canonical_bytes(doc: Any) -> bytes:
    """Canonical UTF-8 encoding of a JSON-compatible document."""
    return (json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def content_hash(doc: Any) -> str:
    """sha256 over canonical bytes; equal hashes iff equal canonical bytes."""
    return hashlib.sha256(canonical_bytes(doc)).hexdigest()


class VersionStore:
    """Content-addressed document store.

    Identical documents share one blob: the key is the sha256 of the
    canonical bytes, so hash equality holds exactly when the canonical
    encodings are byte-equal.
    """

    def __init__(self, docs: dict[str, Any] | None = None):
        self._docs: dict[str, Any] = dict(docs or {})

    def put(self, doc: Any) -> str:
        digest = content_hash(doc)
        self._docs.setdefault(digest, doc)
        return digest

    def get(self, digest: str) -> Any:
        if digest not in self._docs:
            from .errors import NotFoundError

            raise NotFoundError(f"no stored version {digest!r}")
        return self._docs[digest]

    def __contains__(self, digest: str) -> bool:
        return digest in self._docs

    def __len__(self) -> int:
        return len(self._docs)

    def items(self):
        return self._docs.items()


# ---------------------------------------------------------------------------
# Strategy <-> document
# ---------------------------------------------------------------------------


def strategy_to_doc(strategy: Strategy) -> dict:
    return {
        "goal": strategy.goal.text,
        "keyObjects": [key_object_to_doc(ko) for ko in strategy.key_objects],
        "tasks": [task_to_doc(t) for t in strategy.tasks],
        "agentBoard": board_to_doc(strategy.board),
    }


def key_object_to_doc(ko: KeyObject) -> dict:
    doc: dict[str, Any] = {
        "id": ko.id,
        "name": ko.name,
        "description": ko.description,
        "origin": {"kind": ko.origin.kind},
    }
    if ko.origin.task_id is not None:
        doc["origin"]["taskId"] = ko.origin.task_id
    if ko.value is not None:
        doc["value"] = ko.value
    return doc


def task_to_doc(task: TaskSpec) -> dict:
    return {
        "id": task.id,
        "stepName": task.step_name,
        "taskContent": task.task_content,
        "inputObjectIds": list(task.input_object_ids),
        "outputObjectId": task.output_object_id,
        "team": list(task.team),
        "process": [action_to_doc(a) for a in task.process],
    }


def action_to_doc(action: ActionSpec) -> dict:
    return {
        "agentId": action.agent_id,
        "instruction": action.instruction,
        "interactionType": action.interaction_type.value,
        "importantInputs": [input_ref_to_doc(r) for r in action.important_inputs],
    }


def input_ref_to_doc(ref: InputRef) -> dict:
    if ref.kind == "keyObject":
        return {"kind": "keyObject", "keyObjectId": ref.key_object_id}
    return {"kind": "action", "actionIndex": ref.action_index}


def board_to_doc(board: AgentBoard) -> dict:
    agents = []
    for a in board.agents:
        doc: dict[str, Any] = {"id": a.id, "name": a.name, "profile": a.profile}
        if a.avatar is not None:
            doc["avatar"] = a.avatar
        agents.append(doc)
    return {"agents": agents}


def process_to_doc(process: TaskProcess) -> dict:
    return {"taskId": process.task_id, "actions": [action_to_doc(a) for a in process.actions]}


# ---------------------------------------------------------------------------
# Document -> strategy
# ---------------------------------------------------------------------------


class _Path:
    """Tracks a document path so parse errors locate the failing element."""

    def __init__(self, at: str = ""):
        self.at = at

    def child(self, segment: str) -> "_Path":
        return _Path(f"{self.at}.{segment}" if self.at else segment)

    def item(self, index: int) -> "_Path":
        return _Path(f"{self.at}[{index}]")


def _fail(path: _Path, message: str) -> CorruptProjectError:
    return CorruptProjectError(message, path=path.at or "$")


def _expect(doc: Any, kind: type, path: _Path) -> Any:
    if not isinstance(doc, kind):
        raise _fail(path, f"expected {kind.__name__}, got {type(doc).__name__}")
    return doc


def _get(doc: dict, key: str, kind: type, path: _Path, default: Any = ...) -> Any:
    if key not in doc:
        if default is not ...:
            return default
        raise _fail(path.child(key), f"missing required key {key!r}")
    return _expect(doc[key], kind, path.child(key))


def strategy_from_doc(doc: Any, path: _Path | None = None) -> Strategy:
    path = path or _Path()
    _expect(doc, dict, path)
    goal = Goal(_get(doc, "goal", str, path))
    kos = tuple(
        key_object_from_doc(item, path.child("keyObjects").item(i))
        for i, item in enumerate(_get(doc, "keyObjects", list, path, []))
    )
    tasks = tuple(
        task_from_doc(item, path.child("tasks").item(i)) for i, item in enumerate(_get(doc, "tasks", list, path, []))
    )
    board = board_from_doc(_get(doc, "agentBoard", dict, path, {"agents": []}), path.child("agentBoard"))
    return Strategy(goal=goal, key_objects=kos, tasks=tasks, board=board)


def key_object_from_doc(doc: Any, path: _Path) -> KeyObject:
    _expect(doc, dict, path)
    origin_doc = _get(doc, "origin", dict, path, {"kind": "initial"})
    kind = _get(origin_doc, "kind", str, path.child("origin"))
    if kind == "initial":
        origin = Origin.initial()
    elif kind == "taskOutput":
        origin = Origin.task_output(_get(origin_doc, "taskId", str, path.child("origin")))
    else:
        raise _fail(path.child("origin").child("kind"), f"unknown origin kind {kind!r}")
    return KeyObject(
        id=_get(doc, "id", str, path),
        name=_get(doc, "name", str, path),
        description=_get(doc, "description", str, path, ""),
        origin=origin,
        value=_get(doc, "value", str, path, None),
    )


def task_from_doc(doc: Any, path: _Path) -> TaskSpec:
    _expect(doc, dict, path)
    return TaskSpec(
        id=_get(doc, "id", str, path),
        step_name=_get(doc, "stepName", str, path),
        task_content=_get(doc, "taskContent", str, path),
        input_object_ids=tuple(
            _expect(x, str, path.child("inputObjectIds").item(i))
            for i, x in enumerate(_get(doc, "inputObjectIds", list, path, []))
        ),
        output_object_id=_get(doc, "outputObjectId", str, path),
        team=tuple(_expect(x, str, path.child("team").item(i)) for i, x in enumerate(_get(doc, "team", list, path, []))),
        process=tuple(
            action_from_doc(item, path.child("process").item(i)) for i, item in enumerate(_get(doc, "process", list, path, []))
        ),
    )


def action_from_doc(doc: Any, path: _Path) -> ActionSpec:
    _expect(doc, dict, path)
    raw_type = _get(doc, "interactionType", str, path)
    try:
        interaction = InteractionType(raw_type)
    except ValueError:
        raise _fail(path.child("interactionType"), f"unknown interaction type {raw_type!r}")
    return ActionSpec(
        agent_id=_get(doc, "agentId", str, path),
        instruction=_get(doc, "instruction", str, path),
        interaction_type=interaction,
        important_inputs=tuple(
            input_ref_from_doc(item, path.child("importantInputs").item(i))
            for i, item in enumerate(_get(doc, "importantInputs", list, path, []))
        ),
    )


def input_ref_from_doc(doc: Any, path: _Path) -> InputRef:
    _expect(doc, dict, path)
    kind = _get(doc, "kind", str, path)
    if kind == "keyObject":
        return InputRef.key_object(_get(doc, "keyObjectId", str, path))
    if kind == "action":
        return InputRef.action(_get(doc, "actionIndex", int, path))
    raise _fail(path.child("kind"), f"unknown input ref kind {kind!r}")


def board_from_doc(doc: Any, path: _Path | None = None) -> AgentBoard:
    path = path or _Path("agentBoard")
    _expect(doc, dict, path)
    agents = []
    for i, item in enumerate(_get(doc, "agents", list, path, [])):
        apath = path.child("agents").item(i)
        _expect(item, dict, apath)
        agents.append(
            AgentProfile(
                id=_get(item, "id", str, apath),
                name=_get(item, "name", str, apath),
                profile=_get(item, "profile", str, apath),
                avatar=_get(item, "avatar", str, apath, None),
            )
        )
    return AgentBoard(agents=tuple(agents))


def process_from_doc(doc: Any, path: _Path | None = None) -> TaskProcess:
    path = path or _Path()
    _expect(doc, dict, path)
    return TaskProcess(
        task_id=_get(doc, "taskId", str, path),
        actions=tuple(
            action_from_doc(item, path.child("actions").item(i)) for i, item in enumerate(_get(doc, "actions", list, path, []))
        ),
    )


def loads_strategy(data: bytes | str) -> Strategy:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CorruptProjectError(f"not valid JSON: {exc}", path="$")
    return strategy_from_doc(doc)


def dumps_strategy(strategy: Strategy) -> bytes:
    return canonical_bytes(strategy_to_doc(strategy))
