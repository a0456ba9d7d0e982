"""Strategy execution with dependency-scoped prompts and provenance.

Tasks run strictly in plan order and actions strictly in process order.
Each action's prompt carries exactly the agent profile, the goal, the task
content, the instruction, and the full text of every resolved important
input; nothing else leaks in, so the important-input declarations fully
scope the context. Finalize outputs materialize key-object values, and the
record keeps an append-only event log with gapless sequence numbers.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Iterator, Optional

from . import prompts
from .config import RuntimeConfig
from .errors import NotFoundError, UnmaterializedInputError
from .gateway import Gateway, render
from .model import (
    ActionSpec,
    InputRef,
    InteractionType,
    Ref,
    Strategy,
    TaskSpec,
    ensure_valid,
)
from .serialize import _expect, _get, _Path, content_hash, input_ref_from_doc, input_ref_to_doc, strategy_to_doc

__all__ = [
    "RunStatus",
    "ExecutionEvent",
    "ActionResult",
    "ExecutionRecord",
    "TraceGraph",
    "execute",
    "resolve_inputs",
    "build_trace",
    "trace_back",
    "replay_events",
    "record_to_doc",
    "record_from_doc",
]


class RunStatus(str, Enum):
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass(frozen=True)
class ExecutionEvent:
    seq: int
    kind: str
    data: dict[str, Any]

    def to_doc(self) -> dict:
        return {"seq": self.seq, "kind": self.kind, "data": self.data}


@dataclass(frozen=True)
class ActionResult:
    task_id: str
    action_index: int
    agent_id: str
    prompt_rendered: str
    output: str
    started: float
    finished: float
    resolved_inputs: tuple[tuple[InputRef, str], ...]


@dataclass
class ExecutionRecord:
    id: str
    strategy_version: str
    status: RunStatus = RunStatus.RUNNING
    failed_at: Optional[tuple[str, int]] = None  # (task_id, action_index)
    error: Optional[str] = None
    action_results: list[ActionResult] = field(default_factory=list)
    object_values: dict[str, str] = field(default_factory=dict)
    events: list[ExecutionEvent] = field(default_factory=list)

    def result_for(self, task_id: str, action_index: int) -> Optional[ActionResult]:
        for result in self.action_results:
            if result.task_id == task_id and result.action_index == action_index:
                return result
        return None


EventSink = Callable[[ExecutionEvent], None]


def _emit(record: ExecutionRecord, sink: Optional[EventSink], kind: str, **data: Any) -> None:
    event = ExecutionEvent(seq=len(record.events) + 1, kind=kind, data=data)
    record.events.append(event)
    if sink is not None:
        sink(event)


def resolve_inputs(
    action: ActionSpec, record: ExecutionRecord, strategy: Strategy, task: TaskSpec
) -> tuple[tuple[InputRef, str], ...]:
    """Materialize the action's important inputs, in declaration order.

    Key-object refs read the object's current value; action refs read the
    earlier action's output within the same task. A missing value aborts
    the run rather than improvising context.
    """
    resolved: list[tuple[InputRef, str]] = []
    for ref in action.important_inputs:
        if ref.kind == "keyObject":
            if ref.key_object_id not in record.object_values:
                raise UnmaterializedInputError(f"key object {ref.key_object_id!r} has no value yet")
            resolved.append((ref, record.object_values[ref.key_object_id]))
        else:
            result = record.result_for(task.id, ref.action_index)
            if result is None:
                raise UnmaterializedInputError(f"action {task.id}:{ref.action_index} has not produced output yet")
            resolved.append((ref, result.output))
    return tuple(resolved)


def _inputs_text(resolved: tuple[tuple[InputRef, str], ...], strategy: Strategy, task: TaskSpec) -> str:
    if not resolved:
        return "(none)"
    lines = []
    for ref, content in resolved:
        if ref.kind == "keyObject":
            ko = strategy.key_object(ref.key_object_id)
            label = ko.name if ko else ref.key_object_id
        else:
            earlier = task.process[ref.action_index]
            agent = strategy.board.get(earlier.agent_id)
            who = agent.name if agent else earlier.agent_id
            label = f"action {ref.action_index + 1} by {who} ({earlier.interaction_type.value})"
        lines.append(f"--- {label} ---\n{content}")
    return "\n".join(lines)


def _action_prompt(strategy: Strategy, task: TaskSpec, action: ActionSpec, resolved) -> str:
    agent = strategy.board.get(action.agent_id)
    return render(
        prompts.ACTION_TEMPLATE,
        {
            "agent_name": agent.name if agent else action.agent_id,
            "profile": agent.profile if agent else "",
            "goal": strategy.goal.text,
            "task_name": task.step_name,
            "task_content": task.task_content,
            "interaction": action.interaction_type.value,
            "instruction": action.instruction,
            "inputs": _inputs_text(resolved, strategy, task),
        },
    )


def execute(
    strategy: Strategy,
    gateway: Gateway,
    provider: str,
    *,
    config: RuntimeConfig | None = None,
    run_id: str = "run-1",
    seed: int | None = None,
    on_event: Optional[EventSink] = None,
) -> ExecutionRecord:
    """Run every task and action in order; never raises for provider trouble.

    A provider failure after the configured retries (or an unmaterialized
    input) marks the record Failed at the exact coordinates while keeping
    every result produced so far.
    """
    ensure_valid(strategy)
    config = config or RuntimeConfig()
    record = ExecutionRecord(id=run_id, strategy_version=content_hash(strategy_to_doc(strategy)))
    for ko in strategy.key_objects:
        if ko.value is not None:
            record.object_values[ko.id] = ko.value
    _emit(record, on_event, "run-started", runId=run_id, strategyVersion=record.strategy_version)

    for task in strategy.tasks:
        _emit(record, on_event, "task-started", taskId=task.id)
        for index, action in enumerate(task.process):
            _emit(record, on_event, "action-started", taskId=task.id, actionIndex=index, agentId=action.agent_id)
            try:
                resolved = resolve_inputs(action, record, strategy, task)
                prompt = _action_prompt(strategy, task, action, resolved)
                output, started, finished = _call_with_retries(gateway, provider, prompt, config, seed)
            except UnmaterializedInputError as exc:
                return _fail_run(record, on_event, task.id, index, str(exc))
            except Exception as exc:  # provider exhausted its retries
                return _fail_run(record, on_event, task.id, index, f"provider failure: {exc}")
            record.action_results.append(
                ActionResult(
                    task_id=task.id,
                    action_index=index,
                    agent_id=action.agent_id,
                    prompt_rendered=prompt,
                    output=output,
                    started=started,
                    finished=finished,
                    resolved_inputs=resolved,
                )
            )
            _emit(record, on_event, "action-finished", taskId=task.id, actionIndex=index, output=output)
            if action.interaction_type is InteractionType.FINALIZE:
                record.object_values[task.output_object_id] = output
                _emit(record, on_event, "object-materialized", objectId=task.output_object_id, value=output)
        _emit(record, on_event, "task-finished", taskId=task.id)

    record.status = RunStatus.COMPLETED
    _emit(record, on_event, "run-finished", status=record.status.value)
    return record


def _call_with_retries(
    gateway: Gateway, provider: str, prompt: str, config: RuntimeConfig, seed: int | None
) -> tuple[str, float, float]:
    from .gateway import Stage

    last: Exception | None = None
    for attempt in range(config.action_retries + 1):
        started = time.time()
        try:
            output = gateway.complete_text(provider, prompt, stage=Stage.ACTION, temperature=0.7, seed=seed)
            return output, started, time.time()
        except Exception as exc:
            last = exc
            if attempt < config.action_retries:
                time.sleep(config.retry_backoff_seconds * (2**attempt))
    raise last if last is not None else RuntimeError("provider returned nothing")


def _fail_run(
    record: ExecutionRecord, sink: Optional[EventSink], task_id: str, action_index: int, message: str
) -> ExecutionRecord:
    record.status = RunStatus.FAILED
    record.failed_at = (task_id, action_index)
    record.error = message
    _emit(record, sink, "run-failed", taskId=task_id, actionIndex=action_index, error=message)
    return record


# ---------------------------------------------------------------------------
# Provenance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceGraph:
    """Directed dependency graph over action results and materialized objects.

    Node ids reuse the strategy reference encoding: ``action:<taskId>:<i>``
    and ``object:<keyObjectId>``. Every edge points from an input to its
    consumer.
    """

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def predecessors(self, node: str) -> tuple[str, ...]:
        return tuple(src for src, dst in self.edges if dst == node)


def build_trace(record: ExecutionRecord, strategy: Strategy) -> TraceGraph:
    """Graph of what actually fed what during this run.

    Edges come solely from resolved important inputs plus the finalize
    link from each completed task's last action to its output object.
    """
    nodes: list[str] = []
    edges: list[tuple[str, str]] = []

    def add_node(node: str) -> None:
        if node not in nodes:
            nodes.append(node)

    for object_id in record.object_values:
        add_node(Ref.object(object_id).encode())
    for result in record.action_results:
        action_node = Ref.action(result.task_id, result.action_index).encode()
        add_node(action_node)
        for ref, _content in result.resolved_inputs:
            if ref.kind == "keyObject":
                src = Ref.object(ref.key_object_id).encode()
            else:
                src = Ref.action(result.task_id, ref.action_index).encode()
            add_node(src)
            edge = (src, action_node)
            if edge not in edges:
                edges.append(edge)
    for task in strategy.tasks:
        if task.output_object_id not in record.object_values or not task.process:
            continue
        final_index = len(task.process) - 1
        result = record.result_for(task.id, final_index)
        if result is None:
            continue
        edge = (Ref.action(task.id, final_index).encode(), Ref.object(task.output_object_id).encode())
        if edge not in edges:
            edges.append(edge)
    return TraceGraph(nodes=tuple(nodes), edges=tuple(edges))


def trace_back(graph: TraceGraph, node: str) -> tuple[str, ...]:
    """Every transitive predecessor of ``node``, topologically ordered.

    Dependencies come before their dependents; the start node is excluded.
    """
    if node not in graph.nodes:
        raise NotFoundError(f"node {node!r} is not in the trace graph")
    reachable: set[str] = set()
    stack = [node]
    while stack:
        current = stack.pop()
        for src in graph.predecessors(current):
            if src not in reachable:
                reachable.add(src)
                stack.append(src)
    # Kahn's algorithm over the predecessor closure; graph insertion order
    # breaks ties so the result is deterministic.
    order_index = {n: i for i, n in enumerate(graph.nodes)}
    incoming = {n: set(graph.predecessors(n)) for n in reachable}
    heap = [(order_index[n], n) for n in reachable if not incoming[n]]
    heapq.heapify(heap)
    ordered: list[str] = []
    while heap:
        _, current = heapq.heappop(heap)
        ordered.append(current)
        for follower, preds in incoming.items():
            if current in preds:
                preds.discard(current)
                if not preds:
                    heapq.heappush(heap, (order_index[follower], follower))
    return tuple(ordered)


def replay_events(record: ExecutionRecord) -> Iterator[ExecutionEvent]:
    """Deterministic replay of the append-only event log."""
    return iter(tuple(record.events))


# ---------------------------------------------------------------------------
# Record <-> document (sidecar run logs)
# ---------------------------------------------------------------------------


def record_to_doc(record: ExecutionRecord) -> dict:
    doc: dict[str, Any] = {
        "id": record.id,
        "strategyVersion": record.strategy_version,
        "status": record.status.value,
        "actionResults": [
            {
                "taskId": r.task_id,
                "actionIndex": r.action_index,
                "agentId": r.agent_id,
                "promptRendered": r.prompt_rendered,
                "output": r.output,
                "started": r.started,
                "finished": r.finished,
                "resolvedInputs": [
                    {"ref": input_ref_to_doc(ref), "content": content} for ref, content in r.resolved_inputs
                ],
            }
            for r in record.action_results
        ],
        "objectValues": dict(record.object_values),
        "events": [e.to_doc() for e in record.events],
    }
    if record.failed_at is not None:
        doc["failedAt"] = {"taskId": record.failed_at[0], "actionIndex": record.failed_at[1]}
    if record.error is not None:
        doc["error"] = record.error
    return doc


def record_from_doc(doc: Any) -> ExecutionRecord:
    path = _Path("record")
    _expect(doc, dict, path)
    record = ExecutionRecord(
        id=_get(doc, "id", str, path),
        strategy_version=_get(doc, "strategyVersion", str, path),
        status=RunStatus(_get(doc, "status", str, path)),
        error=_get(doc, "error", str, path, None),
    )
    failed = _get(doc, "failedAt", dict, path, None)
    if failed is not None:
        record.failed_at = (
            _get(failed, "taskId", str, path.child("failedAt")),
            _get(failed, "actionIndex", int, path.child("failedAt")),
        )
    for i, r_doc in enumerate(_get(doc, "actionResults", list, path, [])):
        r_path = path.child("actionResults").item(i)
        _expect(r_doc, dict, r_path)
        resolved = tuple(
            (
                input_ref_from_doc(_get(item, "ref", dict, r_path.child("resolvedInputs").item(j)), r_path),
                _get(item, "content", str, r_path.child("resolvedInputs").item(j)),
            )
            for j, item in enumerate(_get(r_doc, "resolvedInputs", list, r_path, []))
        )
        record.action_results.append(
            ActionResult(
                task_id=_get(r_doc, "taskId", str, r_path),
                action_index=_get(r_doc, "actionIndex", int, r_path),
                agent_id=_get(r_doc, "agentId", str, r_path),
                prompt_rendered=_get(r_doc, "promptRendered", str, r_path),
                output=_get(r_doc, "output", str, r_path),
                started=float(_get(r_doc, "started", (int, float), r_path, 0.0)),
                finished=float(_get(r_doc, "finished", (int, float), r_path, 0.0)),
                resolved_inputs=resolved,
            )
        )
    record.object_values = dict(_get(doc, "objectValues", dict, path, {}))
    for i, e_doc in enumerate(_get(doc, "events", list, path, [])):
        e_path = path.child("events").item(i)
        _expect(e_doc, dict, e_path)
        record.events.append(
            ExecutionEvent(
                seq=_get(e_doc, "seq", int, e_path),
                kind=_get(e_doc, "kind", str, e_path),
                data=_get(e_doc, "data", dict, e_path, {}),
            )
        )
    return record
