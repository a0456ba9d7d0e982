"""Project persistence: one JSON document plus sidecar run logs.

A project bundles the goal, the agent board, a content-addressed version
store of strategy/process payloads, exploration sessions, and an index of
execution-run log files. Saves are atomic (write temp, rename) and the
canonical encoding makes repeat saves byte-stable. Loading is fail-closed:
the first structural problem raises with the offending document path.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from typing import Any, Optional

import jsonschema

from .errors import BoardSchemaError, CorruptProjectError, NotFoundError
from .explore import ExplorationSession, session_from_doc, session_to_doc
from .genesis import slugify
from .model import AgentBoard, AgentProfile, Goal, Strategy, ensure_valid, unique_id
from .runtime import ExecutionRecord, record_from_doc, record_to_doc
from .schemas import AGENT_BOARD_IMPORT_SCHEMA
from .serialize import (
    VersionStore,
    _expect,
    _get,
    _Path,
    board_from_doc,
    board_to_doc,
    canonical_bytes,
    strategy_from_doc,
    strategy_to_doc,
)

__all__ = [
    "Project",
    "PROJECT_SUFFIX",
    "new_project",
    "save",
    "load",
    "set_strategy",
    "import_agent_board",
    "parse_agent_board",
    "export_result",
    "save_record",
    "load_record",
]

PROJECT_SUFFIX = ".agentcoord.json"


@dataclass
class Project:
    id: str
    name: str
    goal: Goal
    board: AgentBoard = field(default_factory=AgentBoard)
    versions: VersionStore = field(default_factory=VersionStore)
    current_strategy: Optional[str] = None  # version hash
    sessions: dict[str, ExplorationSession] = field(default_factory=dict)
    run_index: dict[str, str] = field(default_factory=dict)  # run id -> relative log path

    def strategy(self) -> Strategy:
        if self.current_strategy is None:
            raise NotFoundError(f"project {self.id!r} has no strategy yet")
        return strategy_from_doc(self.versions.get(self.current_strategy))

    def next_session_id(self) -> str:
        return unique_id(f"sess-{len(self.sessions) + 1}", set(self.sessions))

    def next_run_id(self) -> str:
        return unique_id(f"run-{len(self.run_index) + 1}", set(self.run_index))


def new_project(name: str, goal: Goal, board: AgentBoard = AgentBoard()) -> Project:
    return Project(id=f"proj-{slugify(name)}", name=name, goal=goal, board=board)


def set_strategy(project: Project, strategy: Strategy) -> str:
    """Install a validated strategy as the current version; returns its hash."""
    ensure_valid(strategy)
    digest = project.versions.put(strategy_to_doc(strategy))
    project.current_strategy = digest
    project.board = strategy.board
    return digest


# ---------------------------------------------------------------------------
# Save / load
# ---------------------------------------------------------------------------


def project_to_doc(project: Project) -> dict:
    doc: dict[str, Any] = {
        "id": project.id,
        "name": project.name,
        "goal": project.goal.text,
        "agentBoard": board_to_doc(project.board),
        "versions": {digest: payload for digest, payload in sorted(project.versions.items())},
        "explorationSessions": [session_to_doc(s) for s in project.sessions.values()],
        "runIndex": dict(sorted(project.run_index.items())),
    }
    if project.current_strategy is not None:
        doc["currentStrategy"] = project.current_strategy
    return doc


def project_from_doc(doc: Any) -> Project:
    path = _Path()
    _expect(doc, dict, path)
    project = Project(
        id=_get(doc, "id", str, path),
        name=_get(doc, "name", str, path),
        goal=Goal(_get(doc, "goal", str, path)),
        board=board_from_doc(_get(doc, "agentBoard", dict, path, {"agents": []}), path.child("agentBoard")),
        versions=VersionStore(_get(doc, "versions", dict, path, {})),
        current_strategy=_get(doc, "currentStrategy", str, path, None),
    )
    if project.current_strategy is not None and project.current_strategy not in project.versions:
        raise CorruptProjectError(
            f"current strategy {project.current_strategy!r} is not in the version store", path="currentStrategy"
        )
    for i, session_doc in enumerate(_get(doc, "explorationSessions", list, path, [])):
        session = session_from_doc(session_doc, path.child("explorationSessions").item(i))
        for node in session.nodes.values():
            if node.payload_hash not in project.versions:
                raise CorruptProjectError(
                    f"payload {node.payload_hash!r} is not in the version store",
                    path=f"explorationSessions[{i}].nodes",
                )
        project.sessions[session.id] = session
    run_index = _get(doc, "runIndex", dict, path, {})
    for run_id, rel in run_index.items():
        if not isinstance(rel, str):
            raise CorruptProjectError("expected string path", path=f"runIndex.{run_id}")
    project.run_index = dict(run_index)
    # Decoding the current strategy verifies the blob is well formed.
    if project.current_strategy is not None:
        project.strategy()
    return project


def save(project: Project, path: str) -> str:
    """Atomically write the project document; returns the path written."""
    data = canonical_bytes(project_to_doc(project))
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, temp_path = tempfile.mkstemp(dir=directory, prefix=".coordkit-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise
    return path


def load(path: str) -> Project:
    try:
        with open(path, "rb") as handle:
            raw = handle.read()
    except OSError as exc:
        raise CorruptProjectError(f"cannot read project file: {exc}", path="$")
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptProjectError(f"not valid JSON: {exc}", path="$")
    return project_from_doc(doc)


# ---------------------------------------------------------------------------
# Agent board import
# ---------------------------------------------------------------------------


def parse_agent_board(doc: Any) -> AgentBoard:
    """Build a board from an array of {name, profile, avatar?} entries."""
    validator = jsonschema.Draft202012Validator(AGENT_BOARD_IMPORT_SCHEMA)
    problems = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if problems:
        entries = [f"{'/'.join(str(p) for p in e.absolute_path) or '$'}: {e.message}" for e in problems]
        raise BoardSchemaError("agent board document is invalid", entries=entries)
    agents = []
    taken: set[str] = set()
    for item in doc:
        agent_id = unique_id(f"agent-{slugify(item['name'])}", taken)
        taken.add(agent_id)
        agents.append(
            AgentProfile(id=agent_id, name=item["name"], profile=item["profile"], avatar=item.get("avatar"))
        )
    return AgentBoard(agents=tuple(agents))


def import_agent_board(path: str) -> AgentBoard:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise BoardSchemaError(f"cannot read board file: {exc}", entries=[])
    except json.JSONDecodeError as exc:
        raise BoardSchemaError(f"board file is not valid JSON: {exc}", entries=[])
    return parse_agent_board(doc)


# ---------------------------------------------------------------------------
# Run logs and exports
# ---------------------------------------------------------------------------


def save_record(record: ExecutionRecord, directory: str) -> str:
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"{record.id}.json")
    data = canonical_bytes(record_to_doc(record))
    fd, temp_path = tempfile.mkstemp(dir=directory, prefix=".coordkit-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise
    return path


def load_record(path: str) -> ExecutionRecord:
    try:
        with open(path, "rb") as handle:
            doc = json.loads(handle.read().decode("utf-8"))
    except OSError as exc:
        raise CorruptProjectError(f"cannot read run log: {exc}", path="$")
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptProjectError(f"run log is not valid JSON: {exc}", path="$")
    return record_from_doc(doc)


def export_result(record: ExecutionRecord, strategy: Strategy, format: str = "markdown") -> str:
    """Render a run for sharing; markdown follows plan order, one section per task."""
    if format == "json":
        return canonical_bytes(record_to_doc(record)).decode("utf-8")
    if format != "markdown":
        raise ValueError(f"unknown export format {format!r}")
    lines = [f"# {strategy.goal.text}", "", f"Run `{record.id}` - status: {record.status.value}", ""]
    for i, task in enumerate(strategy.tasks):
        lines.append(f"## {i + 1}. {task.step_name}")
        lines.append("")
        lines.append(task.task_content)
        lines.append("")
        output = strategy.key_object(task.output_object_id)
        if output is not None:
            value = record.object_values.get(output.id)
            lines.append(f"**{output.name}:** {value if value is not None else '(not produced)'}")
            lines.append("")
        for result in record.action_results:
            if result.task_id != task.id:
                continue
            action = task.process[result.action_index]
            agent = strategy.board.get(result.agent_id)
            who = agent.name if agent else result.agent_id
            lines.append(f"### Action {result.action_index + 1}: {who} ({action.interaction_type.value})")
            lines.append("")
            lines.append(f"> {action.instruction}")
            lines.append("")
            lines.append(result.output)
            lines.append("")
    return "\n".join(lines).rstrip() + "\n"
