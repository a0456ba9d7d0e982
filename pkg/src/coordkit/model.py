"""Structured representation of a multi-agent coordination strategy.

A strategy is a goal, a pool of key objects, and an ordered task plan.
Each task names its input/output key objects, a team drawn from the agent
board, and a process: an ordered list of agent actions classified by
cooperative interaction type. All types here are immutable value objects;
new versions are built rather than mutated, which is what makes branching
cheap and safe.

Constructors are deliberately permissive: arbitrary candidate structures
can be built and then checked with :func:`validate_strategy`, which reports
every violated invariant instead of throwing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Union

from .errors import UnresolvedReferenceError

__all__ = [
    "Goal",
    "Origin",
    "KeyObject",
    "AgentProfile",
    "AgentBoard",
    "InteractionType",
    "InputRef",
    "ActionSpec",
    "TaskSpec",
    "TaskProcess",
    "Strategy",
    "Issue",
    "ValidationReport",
    "PlanDiff",
    "TaskDelta",
    "TaskChange",
    "Ref",
    "validate_strategy",
    "report_to_doc",
    "dependency_closure",
    "closure_edges",
    "diff_plans",
    "ensure_valid",
    "unique_id",
]


@dataclass(frozen=True)
class Goal:
    text: str


@dataclass(frozen=True)
class Origin:
    """Where a key object comes from: user-provided or produced by a task."""

    kind: str  # "initial" | "taskOutput"
    task_id: str | None = None

    @classmethod
    def initial(cls) -> "Origin":
        return cls("initial")

    @classmethod
    def task_output(cls, task_id: str) -> "Origin":
        return cls("taskOutput", task_id)

    @property
    def is_initial(self) -> bool:
        return self.kind == "initial"


@dataclass(frozen=True)
class KeyObject:
    """A named intermediate artifact of the collaboration.

    ``value`` stays None until execution materializes it (or the user
    supplies content for an initial object up front).
    """

    id: str
    name: str
    description: str = ""
    origin: Origin = field(default_factory=Origin.initial)
    value: str | None = None


@dataclass(frozen=True)
class AgentProfile:
    id: str
    name: str
    profile: str
    avatar: str | None = None


@dataclass(frozen=True)
class AgentBoard:
    agents: tuple[AgentProfile, ...] = ()

    def ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.agents)

    def get(self, agent_id: str) -> AgentProfile | None:
        for a in self.agents:
            if a.id == agent_id:
                return a
        return None

    def by_name(self, name: str) -> AgentProfile | None:
        for a in self.agents:
            if a.name == name:
                return a
        return None


class InteractionType(enum.Enum):
    """Four-way classification of an action's cooperative role."""

    PROPOSE = "propose"
    CRITIQUE = "critique"
    IMPROVE = "improve"
    FINALIZE = "finalize"


@dataclass(frozen=True)
class InputRef:
    """A declared dependency of an action.

    Either a key object from the enclosing task's input list, or the result
    of a strictly earlier action in the same task process.
    """

    kind: str  # "keyObject" | "action"
    key_object_id: str | None = None
    action_index: int | None = None

    @classmethod
    def key_object(cls, key_object_id: str) -> "InputRef":
        return cls("keyObject", key_object_id=key_object_id)

    @classmethod
    def action(cls, action_index: int) -> "InputRef":
        return cls("action", action_index=action_index)


@dataclass(frozen=True)
class ActionSpec:
    agent_id: str
    instruction: str
    interaction_type: InteractionType
    important_inputs: tuple[InputRef, ...] = ()


@dataclass(frozen=True)
class TaskSpec:
    id: str
    step_name: str
    task_content: str
    input_object_ids: tuple[str, ...] = ()
    output_object_id: str = ""
    team: tuple[str, ...] = ()
    process: tuple[ActionSpec, ...] = ()


@dataclass(frozen=True)
class TaskProcess:
    """A task's action sequence as a standalone exploration payload."""

    task_id: str
    actions: tuple[ActionSpec, ...] = ()


@dataclass(frozen=True)
class Strategy:
    goal: Goal
    key_objects: tuple[KeyObject, ...] = ()
    tasks: tuple[TaskSpec, ...] = ()
    board: AgentBoard = field(default_factory=AgentBoard)

    def key_object(self, object_id: str) -> KeyObject | None:
        for ko in self.key_objects:
            if ko.id == object_id:
                return ko
        return None

    def task(self, task_id: str) -> TaskSpec | None:
        for t in self.tasks:
            if t.id == task_id:
                return t
        return None

    def task_index(self, task_id: str) -> int | None:
        for i, t in enumerate(self.tasks):
            if t.id == task_id:
                return i
        return None

    def initial_objects(self) -> tuple[KeyObject, ...]:
        return tuple(ko for ko in self.key_objects if ko.origin.is_initial)

    def with_task(self, index: int, task: TaskSpec) -> "Strategy":
        tasks = list(self.tasks)
        tasks[index] = task
        return replace(self, tasks=tuple(tasks))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

Issue = tuple[str, str, str]  # (code, path, message)


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Issue, ...] = ()
    warnings: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    def codes(self) -> set[str]:
        return {code for code, _, _ in self.errors}

    def warning_codes(self) -> set[str]:
        return {code for code, _, _ in self.warnings}


def report_to_doc(report: ValidationReport) -> dict:
    return {
        "errors": [{"code": c, "path": p, "message": m} for c, p, m in report.errors],
        "warnings": [{"code": c, "path": p, "message": m} for c, p, m in report.warnings],
    }


def validate_strategy(strategy: Strategy) -> ValidationReport:
    """Check every strategy invariant and report violations.

    Never raises: problems come back as (code, path, message) issues with
    paths into the canonical camelCase document. Deterministic for
    identical input.
    """
    errors: list[Issue] = []
    warnings: list[Issue] = []

    if not strategy.goal.text.strip():
        errors.append(("empty-goal", "goal", "goal text is empty"))

    seen_objects: dict[str, int] = {}
    for i, ko in enumerate(strategy.key_objects):
        path = f"keyObjects[{i}]"
        if ko.id in seen_objects:
            errors.append(
                ("duplicate-object-id", path, f"key object id {ko.id!r} already used at keyObjects[{seen_objects[ko.id]}]")
            )
        else:
            seen_objects[ko.id] = i

    board_ids: dict[str, int] = {}
    for i, agent in enumerate(strategy.board.agents):
        path = f"agentBoard.agents[{i}]"
        if agent.id in board_ids:
            errors.append(("duplicate-agent-id", path, f"agent id {agent.id!r} already used"))
        else:
            board_ids[agent.id] = i
        if not agent.profile.strip():
            errors.append(("empty-profile", f"{path}.profile", f"agent {agent.id!r} has an empty profile"))

    # Map object id -> producing task index, to check sequential dataflow.
    producer_index: dict[str, int] = {}
    seen_tasks: dict[str, int] = {}
    for i, task in enumerate(strategy.tasks):
        if task.output_object_id and task.output_object_id in producer_index:
            errors.append(
                (
                    "duplicate-output",
                    f"tasks[{i}].outputObjectId",
                    f"object {task.output_object_id!r} is already output by tasks[{producer_index[task.output_object_id]}]",
                )
            )
        elif task.output_object_id:
            producer_index[task.output_object_id] = i
        if task.id in seen_tasks:
            errors.append(("duplicate-task-id", f"tasks[{i}]", f"task id {task.id!r} already used"))
        else:
            seen_tasks[task.id] = i

    for i, task in enumerate(strategy.tasks):
        tpath = f"tasks[{i}]"
        if not task.step_name.strip():
            errors.append(("empty-step-name", f"{tpath}.stepName", "step name is empty"))
        if not task.task_content.strip():
            errors.append(("empty-task-content", f"{tpath}.taskContent", "task content is empty"))

        for j, oid in enumerate(task.input_object_ids):
            ipath = f"{tpath}.inputObjectIds[{j}]"
            ko = strategy.key_object(oid)
            if ko is None:
                errors.append(("unknown-object", ipath, f"input object {oid!r} does not exist"))
                continue
            if ko.origin.is_initial and oid not in producer_index:
                continue
            prod = producer_index.get(oid)
            if prod is None:
                # Declared as a task output but no task produces it.
                errors.append(("origin-mismatch", ipath, f"object {oid!r} claims origin {ko.origin.task_id!r} but no task outputs it"))
            elif prod >= i:
                errors.append(
                    ("forward-dependency", ipath, f"input {oid!r} is produced by tasks[{prod}], not strictly earlier than tasks[{i}]")
                )

        if task.output_object_id in task.input_object_ids:
            errors.append(
                ("output-in-inputs", f"{tpath}.outputObjectId", f"output object {task.output_object_id!r} also appears in inputs")
            )
        out = strategy.key_object(task.output_object_id)
        if out is None:
            errors.append(("unknown-object", f"{tpath}.outputObjectId", f"output object {task.output_object_id!r} does not exist"))
        elif out.origin != Origin.task_output(task.id):
            errors.append(
                ("origin-mismatch", f"{tpath}.outputObjectId", f"object {task.output_object_id!r} does not declare tasks[{i}] as its origin")
            )

        seen_team: set[str] = set()
        for j, agent_id in enumerate(task.team):
            apath = f"{tpath}.team[{j}]"
            if agent_id not in board_ids:
                errors.append(("unknown-agent", apath, f"agent {agent_id!r} is not on the board"))
            if agent_id in seen_team:
                errors.append(("duplicate-team-agent", apath, f"agent {agent_id!r} listed twice; teams are sets"))
            seen_team.add(agent_id)

        _validate_process(task, i, strategy, errors, warnings)
        if not task.process:
            warnings.append(("empty-process", f"{tpath}.process", "task process has not been generated yet"))

    # Orphan origin claims: objects naming a producing task that never outputs them.
    for i, ko in enumerate(strategy.key_objects):
        if ko.origin.is_initial:
            continue
        t = strategy.task(ko.origin.task_id or "")
        if t is None or t.output_object_id != ko.id:
            errors.append(
                ("origin-mismatch", f"keyObjects[{i}].origin", f"object {ko.id!r} claims producing task {ko.origin.task_id!r}")
            )

    if not strategy.tasks:
        warnings.append(("empty-plan", "tasks", "strategy has no tasks"))

    return ValidationReport(errors=tuple(errors), warnings=tuple(warnings))


def _validate_process(task: TaskSpec, task_index: int, strategy: Strategy, errors: list[Issue], warnings: list[Issue]) -> None:
    if not task.process:
        return
    tpath = f"tasks[{task_index}]"
    team = set(task.team)
    finalize_positions = [j for j, a in enumerate(task.process) if a.interaction_type is InteractionType.FINALIZE]
    if not finalize_positions:
        errors.append(("missing-finalize", f"{tpath}.process", "non-empty process has no finalize action"))
    else:
        if len(finalize_positions) > 1:
            errors.append(
                ("multiple-finalize", f"{tpath}.process", f"finalize appears at positions {finalize_positions}; exactly one allowed")
            )
        if finalize_positions[-1] != len(task.process) - 1:
            errors.append(("finalize-not-last", f"{tpath}.process[{finalize_positions[-1]}]", "finalize must be the last action"))

    inputs = set(task.input_object_ids)
    for j, action in enumerate(task.process):
        apath = f"{tpath}.process[{j}]"
        if action.agent_id not in team:
            errors.append(("agent-not-in-team", f"{apath}.agentId", f"agent {action.agent_id!r} is not on this task's team"))
        if not action.instruction.strip():
            errors.append(("empty-instruction", f"{apath}.instruction", "instruction is empty"))
        for k, ref in enumerate(action.important_inputs):
            rpath = f"{apath}.importantInputs[{k}]"
            if ref.kind == "keyObject":
                if ref.key_object_id not in inputs:
                    errors.append(
                        ("input-ref-not-task-input", rpath, f"object {ref.key_object_id!r} is not in this task's input list")
                    )
            elif ref.kind == "action":
                if ref.action_index is None or not (0 <= ref.action_index < j):
                    errors.append(
                        ("action-ref-not-earlier", rpath, f"action ref {ref.action_index!r} must target a strictly earlier action")
                    )
            else:
                errors.append(("unknown-ref-kind", rpath, f"unknown input ref kind {ref.kind!r}"))
        if action.interaction_type is InteractionType.FINALIZE and not action.important_inputs:
            warnings.append(("finalize-no-important-inputs", apath, "finalize declares no important inputs; it will see task inputs only"))


# ---------------------------------------------------------------------------
# Dependency closure
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Ref:
    """A reference into the strategy's dependency universe.

    ``kind`` is "object" or "action"; actions are addressed by
    (task_id, action_index).
    """

    kind: str
    object_id: str = ""
    task_id: str = ""
    action_index: int = -1

    @classmethod
    def object(cls, object_id: str) -> "Ref":
        return cls("object", object_id=object_id)

    @classmethod
    def action(cls, task_id: str, action_index: int) -> "Ref":
        return cls("action", task_id=task_id, action_index=action_index)

    def encode(self) -> str:
        if self.kind == "object":
            return f"object:{self.object_id}"
        return f"action:{self.task_id}:{self.action_index}"

    @classmethod
    def decode(cls, text: str) -> "Ref":
        parts = text.split(":")
        if parts[0] == "object" and len(parts) == 2:
            return cls.object(parts[1])
        if parts[0] == "action" and len(parts) == 3:
            return cls.action(parts[1], int(parts[2]))
        raise UnresolvedReferenceError(f"cannot parse reference {text!r}")


def closure_edges(strategy: Strategy) -> list[tuple[Ref, Ref]]:
    """The explicit dependency edge list of a strategy.

    Edges point from dependency to dependent:
      * task-level dataflow: each input object -> the task's output object,
      * producer link: the final (finalize) action -> the output object,
      * important inputs: referenced object/action -> the declaring action.
    """
    edges: list[tuple[Ref, Ref]] = []
    for task in strategy.tasks:
        out = Ref.object(task.output_object_id)
        for oid in task.input_object_ids:
            edges.append((Ref.object(oid), out))
        if task.process:
            edges.append((Ref.action(task.id, len(task.process) - 1), out))
        for j, action in enumerate(task.process):
            target = Ref.action(task.id, j)
            for ref in action.important_inputs:
                if ref.kind == "keyObject" and ref.key_object_id is not None:
                    edges.append((Ref.object(ref.key_object_id), target))
                elif ref.kind == "action" and ref.action_index is not None:
                    edges.append((Ref.action(task.id, ref.action_index), target))
    return edges


def dependency_closure(strategy: Strategy, start: Union[str, InputRef, Ref]) -> set[Ref]:
    """Everything the given reference transitively depends on, start included.

    ``start`` may be a key-object id, an encoded reference string, an
    :class:`InputRef` (action refs are not resolvable without task context
    and must come as :class:`Ref`), or a :class:`Ref`.
    """
    ref = _coerce_start(strategy, start)
    backward: dict[Ref, list[Ref]] = {}
    for src, dst in closure_edges(strategy):
        backward.setdefault(dst, []).append(src)

    seen: set[Ref] = set()
    stack = [ref]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        stack.extend(backward.get(node, ()))
    return seen


def _coerce_start(strategy: Strategy, start: Union[str, InputRef, Ref]) -> Ref:
    if isinstance(start, Ref):
        ref = start
    elif isinstance(start, InputRef):
        if start.kind != "keyObject" or start.key_object_id is None:
            raise UnresolvedReferenceError("action input refs need task context; pass a Ref instead")
        ref = Ref.object(start.key_object_id)
    elif isinstance(start, str):
        ref = Ref.decode(start) if ":" in start else Ref.object(start)
    else:
        raise UnresolvedReferenceError(f"unsupported start reference {start!r}")

    if ref.kind == "object":
        if strategy.key_object(ref.object_id) is None:
            raise UnresolvedReferenceError(f"key object {ref.object_id!r} does not exist")
    else:
        task = strategy.task(ref.task_id)
        if task is None or not (0 <= ref.action_index < len(task.process)):
            raise UnresolvedReferenceError(f"action {ref.encode()!r} does not exist")
    return ref


# ---------------------------------------------------------------------------
# Plan diffing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TaskDelta:
    task_id: str
    index: int


@dataclass(frozen=True)
class TaskChange:
    task_id: str
    index_a: int
    index_b: int


@dataclass(frozen=True)
class PlanDiff:
    shared_prefix: int
    added: tuple[TaskDelta, ...] = ()
    removed: tuple[TaskDelta, ...] = ()
    changed: tuple[TaskChange, ...] = ()
    moved: tuple[TaskChange, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not (self.added or self.removed or self.changed or self.moved)


def diff_plans(a: Strategy, b: Strategy) -> PlanDiff:
    """Compare two plans by id and by position.

    ``shared_prefix`` counts leading positions where the tasks are
    structurally identical. Tasks present in only one plan are
    added/removed; shared ids with different content are changed; shared
    ids with equal content at different positions are moved.
    """
    prefix = 0
    for ta, tb in zip(a.tasks, b.tasks):
        if ta == tb:
            prefix += 1
        else:
            break

    index_a = {t.id: i for i, t in enumerate(a.tasks)}
    index_b = {t.id: i for i, t in enumerate(b.tasks)}

    removed = tuple(TaskDelta(t.id, i) for i, t in enumerate(a.tasks) if t.id not in index_b)
    added = tuple(TaskDelta(t.id, i) for i, t in enumerate(b.tasks) if t.id not in index_a)
    changed = []
    moved = []
    for i, t in enumerate(a.tasks):
        j = index_b.get(t.id)
        if j is None:
            continue
        other = b.tasks[j]
        if t != other:
            changed.append(TaskChange(t.id, i, j))
        elif i != j:
            moved.append(TaskChange(t.id, i, j))
    return PlanDiff(shared_prefix=prefix, added=added, removed=removed, changed=tuple(changed), moved=tuple(moved))


def ensure_valid(strategy: Strategy) -> ValidationReport:
    """Validate and raise :class:`StrategyInvalidError` on any error."""
    from .errors import StrategyInvalidError

    report = validate_strategy(strategy)
    if not report.ok:
        first = report.errors[0]
        raise StrategyInvalidError(f"strategy is invalid: {first[0]} at {first[1]}", report=report)
    return report


def unique_id(base: str, taken: Iterable[str]) -> str:
    """Disambiguate ``base`` against already-taken ids with -2, -3, ..."""
    taken = set(taken)
    if base not in taken:
        return base
    n = 2
    while f"{base}-{n}" in taken:
        n += 1
    return f"{base}-{n}"
