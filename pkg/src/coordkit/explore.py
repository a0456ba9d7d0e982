"""Exploration state: branch forests, baselines, and assignment analysis.

Each exploration session tracks one line of inquiry — plan-outline
variants, task-process variants, or agent-assignment analysis for one
task. Branch payloads are immutable content-addressed versions held in a
shared store; nodes only carry the hash, so variants that share a prefix
share bytes. Manual edits never mutate an existing node: they append a
child labeled "manual edit".
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional, Union

from .errors import (
    EmptyTeamError,
    InvalidRequestError,
    NotFoundError,
    UnresolvedReferenceError,
)
from .genesis import AspectSet, BranchRequest, GenerationPipeline, ScoreMatrix
from .model import AgentBoard, Goal, Strategy, TaskProcess, TaskSpec
from .serialize import (
    VersionStore,
    _expect,
    _fail,
    _get,
    _Path,
    content_hash,
    process_from_doc,
    process_to_doc,
    strategy_from_doc,
    strategy_to_doc,
)

__all__ = [
    "SessionKind",
    "SpawnRecord",
    "BranchNode",
    "ExplorationSession",
    "RankedRow",
    "open_session",
    "spawn_branches",
    "set_baseline",
    "adopt",
    "rank_agents",
    "rank_rows",
    "edit_team",
    "add_manual_version",
    "is_forest",
    "session_to_doc",
    "session_from_doc",
]


class SessionKind(str, Enum):
    PLAN_OUTLINE = "planOutline"
    TASK_PROCESS = "taskProcess"
    AGENT_ASSIGNMENT = "agentAssignment"


@dataclass(frozen=True)
class SpawnRecord:
    """The request that produced a node; the baseline is the parent's payload."""

    branch_point: int
    requirement: str
    count: int


@dataclass(frozen=True)
class BranchNode:
    id: str
    parent_id: Optional[str]
    payload_hash: str
    request: Optional[SpawnRecord] = None
    created_at: float = 0.0
    label: Optional[str] = None


@dataclass
class ExplorationSession:
    id: str
    kind: SessionKind
    task_id: Optional[str] = None  # bound task for process/assignment sessions
    nodes: dict[str, BranchNode] = field(default_factory=dict)
    active_baseline: str = ""
    adopted: Optional[str] = None
    aspects: AspectSet = field(default_factory=AspectSet)
    matrix: Optional[ScoreMatrix] = None
    team: tuple[str, ...] = ()

    def node(self, node_id: str) -> BranchNode:
        if node_id not in self.nodes:
            raise NotFoundError(f"no node {node_id!r} in session {self.id!r}")
        return self.nodes[node_id]

    def children(self, node_id: Optional[str]) -> tuple[BranchNode, ...]:
        return tuple(n for n in self.nodes.values() if n.parent_id == node_id)

    def _next_node_id(self) -> str:
        return f"node-{len(self.nodes) + 1}"


Payload = Union[Strategy, TaskProcess, tuple]


def _payload_doc(kind: SessionKind, payload: Payload) -> dict:
    if kind is SessionKind.PLAN_OUTLINE:
        if not isinstance(payload, Strategy):
            raise InvalidRequestError("plan-outline sessions take Strategy payloads")
        return strategy_to_doc(payload)
    if kind is SessionKind.TASK_PROCESS:
        if not isinstance(payload, TaskProcess):
            raise InvalidRequestError("task-process sessions take TaskProcess payloads")
        return process_to_doc(payload)
    if not isinstance(payload, tuple) or not all(isinstance(a, str) for a in payload):
        raise InvalidRequestError("agent-assignment sessions take team tuples")
    return {"team": list(payload)}


def _decode_payload(kind: SessionKind, doc: Any) -> Payload:
    if kind is SessionKind.PLAN_OUTLINE:
        return strategy_from_doc(doc)
    if kind is SessionKind.TASK_PROCESS:
        return process_from_doc(doc)
    return tuple(doc["team"])


def open_session(
    store: VersionStore,
    session_id: str,
    kind: SessionKind,
    seed: Payload,
    *,
    task_id: Optional[str] = None,
) -> ExplorationSession:
    """Start a session whose single root node holds the seed payload."""
    digest = store.put(_payload_doc(kind, seed))
    session = ExplorationSession(id=session_id, kind=kind, task_id=task_id)
    root = BranchNode(id=session._next_node_id(), parent_id=None, payload_hash=digest, created_at=time.time())
    session.nodes[root.id] = root
    session.active_baseline = root.id
    if kind is SessionKind.AGENT_ASSIGNMENT and isinstance(seed, tuple):
        session.team = seed
    return session


def spawn_branches(
    store: VersionStore,
    session: ExplorationSession,
    pipeline: GenerationPipeline,
    request: BranchRequest,
    *,
    goal: Optional[Goal] = None,
    task: Optional[TaskSpec] = None,
    board: Optional[AgentBoard] = None,
    strategy: Optional[Strategy] = None,
    provider: Optional[str] = None,
) -> list[str]:
    """Generate ``request.count`` variants and attach them under the baseline node.

    All variants are generated before any node is attached, so a failure
    leaves the session untouched.
    """
    if session.kind is SessionKind.AGENT_ASSIGNMENT:
        raise InvalidRequestError("agent-assignment sessions do not spawn generated branches")
    parent = _resolve_parent(store, session, request.baseline)
    if session.kind is SessionKind.PLAN_OUTLINE:
        payloads: list[Payload] = list(pipeline.branch_plan(request, provider=provider))
    else:
        if goal is None or task is None or board is None:
            raise InvalidRequestError("task-process branching needs goal, task, and board context")
        payloads = list(
            pipeline.branch_process(request, goal=goal, task=task, board=board, strategy=strategy, provider=provider)
        )

    record = SpawnRecord(branch_point=request.branch_point, requirement=request.requirement, count=request.count)
    created: list[str] = []
    now = time.time()
    for payload in payloads:
        node = BranchNode(
            id=session._next_node_id(),
            parent_id=parent.id,
            payload_hash=store.put(_payload_doc(session.kind, payload)),
            request=record,
            created_at=now,
        )
        session.nodes[node.id] = node
        created.append(node.id)
    return created


def _resolve_parent(store: VersionStore, session: ExplorationSession, baseline: Payload) -> BranchNode:
    digest = content_hash(_payload_doc(session.kind, baseline))
    active = session.nodes.get(session.active_baseline)
    if active is not None and active.payload_hash == digest:
        return active
    for node in session.nodes.values():
        if node.payload_hash == digest:
            return node
    raise NotFoundError("the request baseline does not match any node in this session")


def set_baseline(session: ExplorationSession, node_id: str) -> None:
    session.node(node_id)
    session.active_baseline = node_id


def adopt(store: VersionStore, session: ExplorationSession, node_id: str) -> Payload:
    """Mark a node adopted and return its payload for installation."""
    node = session.node(node_id)
    payload = _decode_payload(session.kind, store.get(node.payload_hash))
    session.adopted = node_id
    if session.kind is SessionKind.AGENT_ASSIGNMENT and isinstance(payload, tuple):
        session.team = payload
    return payload


def add_manual_version(store: VersionStore, session: ExplorationSession, payload: Payload) -> str:
    """Record a direct user edit as a child of the active baseline."""
    parent = session.node(session.active_baseline)
    node = BranchNode(
        id=session._next_node_id(),
        parent_id=parent.id,
        payload_hash=store.put(_payload_doc(session.kind, payload)),
        created_at=time.time(),
        label="manual edit",
    )
    session.nodes[node.id] = node
    return node.id


def is_forest(session: ExplorationSession) -> bool:
    """True when parent links are acyclic and point at existing nodes."""
    for node in session.nodes.values():
        seen = {node.id}
        current = node
        while current.parent_id is not None:
            if current.parent_id not in session.nodes:
                return False
            current = session.nodes[current.parent_id]
            if current.id in seen:
                return False
            seen.add(current.id)
    return True


# ---------------------------------------------------------------------------
# Agent-assignment analysis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankedRow:
    agent_id: str
    partition: str  # "assigned" | "unassigned"
    mean: float


def rank_rows(
    matrix: ScoreMatrix,
    board: AgentBoard,
    team: tuple[str, ...],
    selected_aspects: tuple[str, ...],
) -> tuple[RankedRow, ...]:
    """Assigned agents first, then unassigned; each partition sorted by
    descending mean over the selected aspects with board order breaking ties."""
    if not selected_aspects:
        raise InvalidRequestError("at least one aspect must be selected")
    for name in selected_aspects:
        if name not in matrix.aspects:
            raise NotFoundError(f"aspect {name!r} is not in the score matrix")

    def mean(agent_id: str) -> float:
        row = matrix.row(agent_id)
        if row is None:
            raise NotFoundError(f"agent {agent_id!r} has no score row")
        return sum(row.scores[a] for a in selected_aspects) / len(selected_aspects)

    assigned = set(team)
    ranked: list[RankedRow] = []
    for partition, members in (("assigned", True), ("unassigned", False)):
        block = [a.id for a in board.agents if (a.id in assigned) == members]
        block.sort(key=lambda agent_id: -mean(agent_id))  # stable: board order survives ties
        ranked.extend(RankedRow(agent_id=agent_id, partition=partition, mean=mean(agent_id)) for agent_id in block)
    return tuple(ranked)


def rank_agents(session: ExplorationSession, board: AgentBoard) -> tuple[RankedRow, ...]:
    if session.matrix is None:
        raise NotFoundError(f"session {session.id!r} has no score matrix yet")
    return rank_rows(session.matrix, board, session.team, session.aspects.selected_names())


def edit_team(
    store: VersionStore,
    session: ExplorationSession,
    board: AgentBoard,
    *,
    add: tuple[str, ...] = (),
    remove: tuple[str, ...] = (),
) -> tuple[str, ...]:
    """Apply add/remove edits to the working team; the team may never empty out."""
    known = set(board.ids())
    for agent_id in tuple(add) + tuple(remove):
        if agent_id not in known:
            raise UnresolvedReferenceError(f"agent {agent_id!r} is not on the board")
    team = [a for a in session.team if a not in set(remove)]
    for agent_id in add:
        if agent_id not in team:
            team.append(agent_id)
    if not team:
        raise EmptyTeamError("a task team must keep at least one agent")
    session.team = tuple(team)
    add_manual_version(store, session, session.team)
    return session.team


# ---------------------------------------------------------------------------
# Session <-> document
# ---------------------------------------------------------------------------


def session_to_doc(session: ExplorationSession) -> dict:
    doc: dict[str, Any] = {
        "id": session.id,
        "kind": session.kind.value,
        "activeBaseline": session.active_baseline,
        "nodes": [_node_to_doc(n) for n in session.nodes.values()],
    }
    if session.task_id is not None:
        doc["taskId"] = session.task_id
    if session.adopted is not None:
        doc["adopted"] = session.adopted
    if session.aspects.aspects:
        doc["aspects"] = [
            {"name": a.name, "source": a.source, "selected": a.selected} for a in session.aspects.aspects
        ]
    if session.matrix is not None:
        doc["matrix"] = {
            "taskId": session.matrix.task_id,
            "aspects": list(session.matrix.aspects),
            "rows": [
                {"agentId": r.agent_id, "scores": dict(r.scores), "rationales": dict(r.rationales)}
                for r in session.matrix.rows
            ],
        }
    if session.team:
        doc["team"] = list(session.team)
    return doc


def _node_to_doc(node: BranchNode) -> dict:
    doc: dict[str, Any] = {
        "id": node.id,
        "parentId": node.parent_id,
        "payload": node.payload_hash,
        "createdAt": node.created_at,
    }
    if node.request is not None:
        doc["request"] = {
            "branchPoint": node.request.branch_point,
            "requirement": node.request.requirement,
            "count": node.request.count,
        }
    if node.label is not None:
        doc["label"] = node.label
    return doc


def session_from_doc(doc: Any, path: Optional[_Path] = None) -> ExplorationSession:
    from .genesis import Aspect, ScoreRow

    path = path or _Path("explorationSessions")
    _expect(doc, dict, path)
    kind_raw = _get(doc, "kind", str, path)
    try:
        kind = SessionKind(kind_raw)
    except ValueError:
        raise _fail(path.child("kind"), f"unknown session kind {kind_raw!r}")
    session = ExplorationSession(
        id=_get(doc, "id", str, path),
        kind=kind,
        task_id=_get(doc, "taskId", str, path, None),
        active_baseline=_get(doc, "activeBaseline", str, path),
        adopted=_get(doc, "adopted", str, path, None),
    )
    for i, node_doc in enumerate(_get(doc, "nodes", list, path)):
        node_path = path.child("nodes").item(i)
        _expect(node_doc, dict, node_path)
        request = None
        if "request" in node_doc:
            req_doc = _get(node_doc, "request", dict, node_path)
            request = SpawnRecord(
                branch_point=_get(req_doc, "branchPoint", int, node_path.child("request")),
                requirement=_get(req_doc, "requirement", str, node_path.child("request")),
                count=_get(req_doc, "count", int, node_path.child("request")),
            )
        node = BranchNode(
            id=_get(node_doc, "id", str, node_path),
            parent_id=node_doc.get("parentId"),
            payload_hash=_get(node_doc, "payload", str, node_path),
            request=request,
            created_at=float(_get(node_doc, "createdAt", (int, float), node_path, 0.0)),
            label=_get(node_doc, "label", str, node_path, None),
        )
        if node.parent_id is not None and not isinstance(node.parent_id, str):
            raise _fail(node_path.child("parentId"), "expected string or null")
        session.nodes[node.id] = node
    if session.active_baseline not in session.nodes:
        raise _fail(path.child("activeBaseline"), f"node {session.active_baseline!r} does not exist")
    if session.adopted is not None and session.adopted not in session.nodes:
        raise _fail(path.child("adopted"), f"node {session.adopted!r} does not exist")
    if not is_forest(session):
        raise _fail(path.child("nodes"), "parent links do not form a forest")
    aspects = []
    for i, aspect_doc in enumerate(_get(doc, "aspects", list, path, [])):
        aspect_path = path.child("aspects").item(i)
        _expect(aspect_doc, dict, aspect_path)
        aspects.append(
            Aspect(
                name=_get(aspect_doc, "name", str, aspect_path),
                source=_get(aspect_doc, "source", str, aspect_path),
                selected=_get(aspect_doc, "selected", bool, aspect_path, True),
            )
        )
    session.aspects = AspectSet(tuple(aspects))
    if "matrix" in doc:
        m_path = path.child("matrix")
        m_doc = _get(doc, "matrix", dict, path)
        rows = []
        for i, row_doc in enumerate(_get(m_doc, "rows", list, m_path)):
            row_path = m_path.child("rows").item(i)
            _expect(row_doc, dict, row_path)
            rows.append(
                ScoreRow(
                    agent_id=_get(row_doc, "agentId", str, row_path),
                    scores={k: int(v) for k, v in _get(row_doc, "scores", dict, row_path).items()},
                    rationales={k: str(v) for k, v in _get(row_doc, "rationales", dict, row_path).items()},
                )
            )
        session.matrix = ScoreMatrix(
            task_id=_get(m_doc, "taskId", str, m_path),
            aspects=tuple(_get(m_doc, "aspects", list, m_path)),
            rows=tuple(rows),
        )
    session.team = tuple(_get(doc, "team", list, path, []))
    return session
