"""Three-stage strategy generation, capability scoring, and branching.

Stage 1 drafts the plan outline from the goal, stage 2 assigns a team to
each task from the agent board, stage 3 specifies each task's action
process. Every stage goes through the gateway's schema-gated repair loop
and then through a stage-specific semantic check, so nothing that violates
the strategy model ever escapes. Model outputs speak in display names; the
pipeline resolves them into stable ids.

Branching regenerates only the part of a baseline at/after a chosen point:
the kept prefix is spliced back verbatim (ids preserved), which makes
prefix preservation hold by construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Any, Callable, Union

from . import prompts
from .config import GatewayConfig, GenesisConfig
from .errors import (
    DuplicateAspectError,
    EmptyBoardError,
    GenerationFailedError,
    InvalidBranchPointError,
    SchemaViolationError,
)
from .gateway import CompletionRequest, Gateway, PromptTemplate
from .model import (
    ActionSpec,
    AgentBoard,
    Goal,
    InputRef,
    InteractionType,
    KeyObject,
    Origin,
    Strategy,
    TaskProcess,
    TaskSpec,
    ensure_valid,
    unique_id,
)

__all__ = [
    "Aspect",
    "AspectSet",
    "ScoreRow",
    "ScoreMatrix",
    "BranchRequest",
    "PlanOutline",
    "GenerationPipeline",
    "add_user_aspect",
    "set_aspect_selected",
    "slugify",
]


def slugify(text: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")
    return slug or "item"


# ---------------------------------------------------------------------------
# Exploration data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Aspect:
    name: str
    source: str  # "llm" | "user"
    selected: bool = True


@dataclass(frozen=True)
class AspectSet:
    aspects: tuple[Aspect, ...] = ()

    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.aspects)

    def selected_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.aspects if a.selected)


def add_user_aspect(aspects: AspectSet, name: str) -> AspectSet:
    name = name.strip()
    if not name:
        raise DuplicateAspectError("aspect name is empty")
    if name in aspects.names():
        raise DuplicateAspectError(f"aspect {name!r} already exists")
    return AspectSet(aspects.aspects + (Aspect(name=name, source="user", selected=True),))


def set_aspect_selected(aspects: AspectSet, name: str, selected: bool) -> AspectSet:
    if name not in aspects.names():
        raise DuplicateAspectError(f"aspect {name!r} does not exist")
    return AspectSet(tuple(replace(a, selected=selected) if a.name == name else a for a in aspects.aspects))


@dataclass(frozen=True)
class ScoreRow:
    agent_id: str
    scores: dict[str, int]
    rationales: dict[str, str]


@dataclass(frozen=True)
class ScoreMatrix:
    task_id: str
    aspects: tuple[str, ...]
    rows: tuple[ScoreRow, ...]

    def row(self, agent_id: str) -> ScoreRow | None:
        for r in self.rows:
            if r.agent_id == agent_id:
                return r
        return None


@dataclass(frozen=True)
class BranchRequest:
    baseline: Union[Strategy, TaskProcess]
    branch_point: int
    requirement: str
    count: int = 1


@dataclass(frozen=True)
class PlanOutline:
    """Stage-1 result: tasks plus the key objects they introduced."""

    tasks: tuple[TaskSpec, ...]
    key_objects: tuple[KeyObject, ...]


# ---------------------------------------------------------------------------
# Prompt rendering helpers
# ---------------------------------------------------------------------------


def _objects_text(objects: tuple[KeyObject, ...]) -> str:
    if not objects:
        return "(none)"
    return "\n".join(f"- {ko.name}: {ko.description or 'no description'}" for ko in objects)


def _board_text(board: AgentBoard) -> str:
    return "\n".join(f"- {a.name}: {a.profile}" for a in board.agents)


def _team_text(board: AgentBoard, team: tuple[str, ...]) -> str:
    lines = []
    for agent_id in team:
        agent = board.get(agent_id)
        if agent is not None:
            lines.append(f"- {agent.name}: {agent.profile}")
    return "\n".join(lines)


def _plan_text(strategy: Strategy, tasks: tuple[TaskSpec, ...]) -> str:
    if not tasks:
        return "(empty)"
    lines = []
    for i, t in enumerate(tasks):
        inputs = ", ".join(_object_name(strategy, oid) for oid in t.input_object_ids) or "none"
        out = _object_name(strategy, t.output_object_id)
        lines.append(f"{i + 1}. {t.step_name}: {t.task_content} [inputs: {inputs}] -> {out}")
    return "\n".join(lines)


def _object_name(strategy: Strategy, object_id: str) -> str:
    ko = strategy.key_object(object_id)
    return ko.name if ko else object_id


def _process_text(actions: tuple[ActionSpec, ...], board: AgentBoard) -> str:
    if not actions:
        return "(empty)"
    lines = []
    for i, a in enumerate(actions):
        agent = board.get(a.agent_id)
        name = agent.name if agent else a.agent_id
        lines.append(f"{i + 1}. [{a.interaction_type.value}] {name}: {a.instruction}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# The pipeline
# ---------------------------------------------------------------------------


class GenerationPipeline:
    """Runs the generation stages against a gateway-registered provider.

    ``provider`` is the default; every operation accepts a per-call
    override so a faster model can serve individual steps.
    """

    def __init__(
        self,
        gateway: Gateway,
        provider: str,
        *,
        config: GenesisConfig | None = None,
        seed: int | None = None,
    ):
        self.gateway = gateway
        self.provider = provider
        self.config = config or GenesisConfig()
        self.seed = seed

    # -- shared plumbing ----------------------------------------------------

    def _complete(
        self,
        template: PromptTemplate,
        bindings: dict[str, str],
        check: Callable[[Any], list[str]] | None,
        *,
        provider: str | None,
        temperature: float,
        stage_name: str,
    ) -> Any:
        request = CompletionRequest(
            template=template,
            bindings=bindings,
            provider=provider or self.provider,
            temperature=temperature,
            seed=self.seed,
        )
        try:
            return self.gateway.complete_structured(request, semantic_check=check).value
        except SchemaViolationError as exc:
            raise GenerationFailedError(stage_name, f"{exc.message}; last issues: {exc.issues}") from exc

    @property
    def _gen_temp(self) -> float:
        cfg = self.gateway.config
        return cfg.generation_temperature if isinstance(cfg, GatewayConfig) else 0.7

    @property
    def _score_temp(self) -> float:
        cfg = self.gateway.config
        return cfg.scoring_temperature if isinstance(cfg, GatewayConfig) else 0.2

    # -- stage 1: plan outline ----------------------------------------------

    def generate_plan_outline(
        self, goal: Goal, initial_objects: tuple[KeyObject, ...] = (), *, provider: str | None = None
    ) -> PlanOutline:
        if not goal.text.strip():
            raise GenerationFailedError("plan_outline", "goal is empty")
        bindings = {"goal": goal.text, "initial_objects": _objects_text(initial_objects)}
        doc = self._complete(
            prompts.PLAN_OUTLINE_TEMPLATE,
            bindings,
            _outline_check(tuple(ko.name for ko in initial_objects)),
            provider=provider,
            temperature=self._gen_temp,
            stage_name="plan_outline",
        )
        return _build_outline(doc["tasks"], initial_objects)

    # -- stage 2: agent assignment -------------------------------------------

    def assign_agents(self, goal: Goal, task: TaskSpec, board: AgentBoard, *, provider: str | None = None) -> tuple[str, ...]:
        if not board.agents:
            raise EmptyBoardError("agent board is empty")
        bindings = {
            "goal": goal.text,
            "task_name": task.step_name,
            "task_content": task.task_content,
            "board": _board_text(board),
        }
        names = {a.name for a in board.agents}
        doc = self._complete(
            prompts.AGENT_ASSIGNMENT_TEMPLATE,
            bindings,
            lambda value: [f"team: agent {name!r} is not on the board" for name in value["team"] if name not in names],
            provider=provider,
            temperature=self._gen_temp,
            stage_name="agent_assignment",
        )
        team: list[str] = []
        for name in doc["team"]:
            agent = board.by_name(name)
            if agent is not None and agent.id not in team:
                team.append(agent.id)
        return tuple(team)

    # -- stage 3: task process ------------------------------------------------

    def generate_task_process(
        self,
        goal: Goal,
        task: TaskSpec,
        team: tuple[str, ...],
        board: AgentBoard,
        *,
        strategy: Strategy | None = None,
        provider: str | None = None,
    ) -> tuple[ActionSpec, ...]:
        if not team:
            raise GenerationFailedError("task_process", "team is empty")
        input_names = _input_names(task, strategy)
        bindings = {
            "goal": goal.text,
            "task_name": task.step_name,
            "task_content": task.task_content,
            "task_inputs": ", ".join(input_names.keys()) or "none",
            "team_profiles": _team_text(board, team),
        }
        team_names = {board.get(agent_id).name: agent_id for agent_id in team if board.get(agent_id) is not None}
        doc = self._complete(
            prompts.TASK_PROCESS_TEMPLATE,
            bindings,
            _process_check(team_names, input_names, prefix_len=0),
            provider=provider,
            temperature=self._gen_temp,
            stage_name="task_process",
        )
        return _build_actions(doc["actions"], team_names, input_names, offset=0)

    # -- stage composition -----------------------------------------------------

    def generate_full_strategy(
        self, goal: Goal, initial_objects: tuple[KeyObject, ...], board: AgentBoard, *, provider: str | None = None
    ) -> Strategy:
        if not board.agents:
            raise EmptyBoardError("agent board is empty")
        outline = self.generate_plan_outline(goal, initial_objects, provider=provider)
        strategy = Strategy(goal=goal, key_objects=outline.key_objects, tasks=outline.tasks, board=board)
        tasks = []
        for task in strategy.tasks:
            team = self.assign_agents(goal, task, board, provider=provider)
            tasks.append(replace(task, team=team))
        strategy = replace(strategy, tasks=tuple(tasks))
        tasks = []
        for task in strategy.tasks:
            process = self.generate_task_process(goal, task, task.team, board, strategy=strategy, provider=provider)
            tasks.append(replace(task, process=process))
        strategy = replace(strategy, tasks=tuple(tasks))
        ensure_valid(strategy)
        return strategy

    # -- assignment exploration --------------------------------------------------

    def derive_aspects(self, goal: Goal, task: TaskSpec, *, provider: str | None = None) -> AspectSet:
        bindings = {"goal": goal.text, "task_name": task.step_name, "task_content": task.task_content}

        def check(value: Any) -> list[str]:
            issues = []
            seen = set()
            for name in value["aspects"]:
                if name in seen:
                    issues.append(f"aspects: {name!r} appears twice")
                seen.add(name)
                if len(name.split()) > 6:
                    issues.append(f"aspects: {name!r} is longer than six words")
            return issues

        doc = self._complete(
            prompts.ASPECT_DERIVATION_TEMPLATE,
            bindings,
            check,
            provider=provider,
            temperature=self._gen_temp,
            stage_name="aspect_derivation",
        )
        return AspectSet(tuple(Aspect(name=name, source="llm", selected=True) for name in doc["aspects"]))

    def score_agents(
        self, goal: Goal, task: TaskSpec, aspects: AspectSet, board: AgentBoard, *, provider: str | None = None
    ) -> ScoreMatrix:
        if not board.agents:
            raise EmptyBoardError("agent board is empty")
        if not aspects.aspects:
            raise GenerationFailedError("agent_scoring", "no aspects to score")
        aspect_names = aspects.names()
        bindings = {
            "goal": goal.text,
            "task_name": task.step_name,
            "task_content": task.task_content,
            "aspects": ", ".join(aspect_names),
            "board": _board_text(board),
        }
        doc = self._complete(
            prompts.AGENT_SCORING_TEMPLATE,
            bindings,
            _scoring_check(board, aspect_names),
            provider=provider,
            temperature=self._score_temp,
            stage_name="agent_scoring",
        )
        by_name = {row["agent"]: row for row in doc["rows"]}
        rows = tuple(
            ScoreRow(
                agent_id=agent.id,
                scores={name: by_name[agent.name]["scores"][name] for name in aspect_names},
                rationales={name: by_name[agent.name]["rationales"][name] for name in aspect_names},
            )
            for agent in board.agents
        )
        return ScoreMatrix(task_id=task.id, aspects=aspect_names, rows=rows)

    # -- branching ------------------------------------------------------------

    def branch_plan(self, request: BranchRequest, *, provider: str | None = None) -> list[Strategy]:
        baseline = request.baseline
        if not isinstance(baseline, Strategy):
            raise InvalidBranchPointError("branch_plan needs a Strategy baseline")
        self._check_request(request, len(baseline.tasks))
        ensure_valid(baseline)

        initials = baseline.initial_objects()
        prefix_tasks = baseline.tasks[: request.branch_point]
        variants: list[Strategy] = []
        for k in range(request.count):
            bindings = {
                "goal": baseline.goal.text,
                "initial_objects": _objects_text(initials),
                "baseline": _plan_text(baseline, baseline.tasks),
                "branch_point": str(request.branch_point),
                "prefix": _plan_text(baseline, prefix_tasks),
                "requirement": request.requirement,
                "variant_hint": f"variant {k + 1} of {request.count}; explore a distinct direction",
            }
            available = tuple(ko.name for ko in initials) + tuple(
                _object_name(baseline, t.output_object_id) for t in prefix_tasks
            )
            doc = self._complete(
                prompts.PLAN_BRANCH_TEMPLATE,
                bindings,
                _outline_check(available, allow_empty=request.branch_point > 0),
                provider=provider,
                temperature=self._gen_temp,
                stage_name="branch_completion",
            )
            variant = _splice_plan(baseline, request.branch_point, doc["tasks"])
            ensure_valid(variant)
            variants.append(variant)
        return variants

    def branch_process(
        self,
        request: BranchRequest,
        *,
        goal: Goal,
        task: TaskSpec,
        board: AgentBoard,
        strategy: Strategy | None = None,
        provider: str | None = None,
    ) -> list[TaskProcess]:
        baseline = request.baseline
        if not isinstance(baseline, TaskProcess):
            raise InvalidBranchPointError("branch_process needs a TaskProcess baseline")
        self._check_request(request, len(baseline.actions))

        input_names = _input_names(task, strategy)
        team_names = {board.get(a).name: a for a in task.team if board.get(a) is not None}
        prefix = baseline.actions[: request.branch_point]
        variants: list[TaskProcess] = []
        for k in range(request.count):
            bindings = {
                "goal": goal.text,
                "task_name": task.step_name,
                "task_content": task.task_content,
                "task_inputs": ", ".join(input_names.keys()) or "none",
                "team_profiles": _team_text(board, task.team),
                "baseline": _process_text(baseline.actions, board),
                "branch_point": str(request.branch_point),
                "prefix": _process_text(prefix, board),
                "requirement": request.requirement,
                "variant_hint": f"variant {k + 1} of {request.count}; explore a distinct direction",
            }
            doc = self._complete(
                prompts.PROCESS_BRANCH_TEMPLATE,
                bindings,
                _process_check(team_names, input_names, prefix_len=len(prefix), prefix=prefix),
                provider=provider,
                temperature=self._gen_temp,
                stage_name="branch_completion",
            )
            suffix = _build_actions(doc["actions"], team_names, input_names, offset=len(prefix))
            variants.append(TaskProcess(task_id=baseline.task_id, actions=prefix + suffix))
        return variants

    def _check_request(self, request: BranchRequest, length: int) -> None:
        if not request.requirement.strip():
            raise InvalidBranchPointError("branch requirement is empty")
        if not (0 <= request.branch_point <= length):
            raise InvalidBranchPointError(f"branch point {request.branch_point} outside [0, {length}]")
        if not (1 <= request.count <= self.config.max_branch_count):
            raise InvalidBranchPointError(f"count {request.count} outside [1, {self.config.max_branch_count}]")


# ---------------------------------------------------------------------------
# Semantic checks (drive the repair loop)
# ---------------------------------------------------------------------------


def _outline_check(available_names: tuple[str, ...], allow_empty: bool = False) -> Callable[[Any], list[str]]:
    def check(value: Any) -> list[str]:
        issues: list[str] = []
        tasks = value["tasks"]
        if not tasks and not allow_empty:
            issues.append("tasks: plan must contain at least one task")
        known = list(available_names)
        for i, task in enumerate(tasks):
            for name in task["inputObjects"]:
                if name not in known:
                    issues.append(
                        f"tasks[{i}]: input object {name!r} is neither an initial object nor the output of an earlier task"
                    )
            out = task["outputObject"]
            if out in known:
                issues.append(f"tasks[{i}]: output object {out!r} already exists; output names must be new and unique")
            if out in task["inputObjects"]:
                issues.append(f"tasks[{i}]: output object {out!r} also appears in its own inputs")
            known.append(out)
        return issues

    return check


def _process_check(
    team_names: dict[str, str],
    input_names: dict[str, str],
    prefix_len: int,
    prefix: tuple[ActionSpec, ...] = (),
) -> Callable[[Any], list[str]]:
    prefix_has_finalize = any(a.interaction_type is InteractionType.FINALIZE for a in prefix)

    def check(value: Any) -> list[str]:
        issues: list[str] = []
        actions = value["actions"]
        total = prefix_len + len(actions)
        if total == 0:
            issues.append("actions: process must contain at least one action")
            return issues
        finalize_positions = [prefix_len + i for i, a in enumerate(actions) if a["interactionType"] == "finalize"]
        if prefix_has_finalize:
            issues.append("actions: the kept prefix already contains a finalize action; branch from an earlier point")
        if not finalize_positions and not prefix_has_finalize:
            issues.append("actions: exactly one finalize action is required and none is present")
        elif len(finalize_positions) > 1:
            issues.append("actions: finalize appears more than once")
        elif finalize_positions and finalize_positions[-1] != total - 1:
            issues.append("actions: the finalize action must be the last action")
        for i, action in enumerate(actions):
            position = prefix_len + i
            if action["agent"] not in team_names:
                issues.append(f"actions[{i}]: agent {action['agent']!r} is not on this task's team")
            for ref in action["importantInputs"]:
                if ref["kind"] == "keyObject" and ref["name"] not in input_names:
                    issues.append(f"actions[{i}]: key object {ref['name']!r} is not among the task's inputs")
                if ref["kind"] == "action" and not (0 <= ref["index"] < position):
                    issues.append(f"actions[{i}]: action ref {ref['index']} must point at a strictly earlier action")
        return issues

    return check


def _scoring_check(board: AgentBoard, aspect_names: tuple[str, ...]) -> Callable[[Any], list[str]]:
    def check(value: Any) -> list[str]:
        issues: list[str] = []
        expected = [a.name for a in board.agents]
        got = [row["agent"] for row in value["rows"]]
        for name in expected:
            if name not in got:
                issues.append(f"rows: agent {name!r} is missing; score every agent on the board")
        for name in got:
            if name not in expected:
                issues.append(f"rows: agent {name!r} is not on the board")
        if len(got) != len(set(got)):
            issues.append("rows: an agent appears more than once")
        for row in value["rows"]:
            for aspect in aspect_names:
                if aspect not in row["scores"]:
                    issues.append(f"rows[{row['agent']}]: missing score for {aspect!r}")
                if aspect not in row["rationales"]:
                    issues.append(f"rows[{row['agent']}]: missing rationale for {aspect!r}")
        return issues

    return check


# ---------------------------------------------------------------------------
# Name resolution and splicing
# ---------------------------------------------------------------------------


def _input_names(task: TaskSpec, strategy: Strategy | None) -> dict[str, str]:
    """Map input object display names to ids for one task."""
    names: dict[str, str] = {}
    for oid in task.input_object_ids:
        name = oid
        if strategy is not None:
            ko = strategy.key_object(oid)
            if ko is not None:
                name = ko.name
        names.setdefault(name, oid)
    return names


def _build_outline(doc_tasks: list[dict], initial_objects: tuple[KeyObject, ...]) -> PlanOutline:
    objects = list(initial_objects)
    name_to_id = {ko.name: ko.id for ko in objects}
    taken_obj = {ko.id for ko in objects}
    taken_task: set[str] = set()
    tasks: list[TaskSpec] = []
    for doc in doc_tasks:
        task_id = unique_id(f"task-{slugify(doc['stepName'])}", taken_task)
        taken_task.add(task_id)
        out_id = unique_id(f"ko-{slugify(doc['outputObject'])}", taken_obj)
        taken_obj.add(out_id)
        objects.append(KeyObject(id=out_id, name=doc["outputObject"], description=doc["taskContent"], origin=Origin.task_output(task_id)))
        tasks.append(
            TaskSpec(
                id=task_id,
                step_name=doc["stepName"],
                task_content=doc["taskContent"],
                input_object_ids=tuple(name_to_id[name] for name in doc["inputObjects"]),
                output_object_id=out_id,
            )
        )
        name_to_id[doc["outputObject"]] = out_id
    return PlanOutline(tasks=tuple(tasks), key_objects=tuple(objects))


def _build_actions(
    doc_actions: list[dict], team_names: dict[str, str], input_names: dict[str, str], offset: int
) -> tuple[ActionSpec, ...]:
    actions = []
    for doc in doc_actions:
        refs = []
        for ref in doc["importantInputs"]:
            if ref["kind"] == "keyObject":
                refs.append(InputRef.key_object(input_names[ref["name"]]))
            else:
                refs.append(InputRef.action(ref["index"]))
        actions.append(
            ActionSpec(
                agent_id=team_names[doc["agent"]],
                instruction=doc["instruction"],
                interaction_type=InteractionType(doc["interactionType"]),
                important_inputs=tuple(refs),
            )
        )
    return tuple(actions)


def _splice_plan(baseline: Strategy, branch_point: int, suffix_docs: list[dict]) -> Strategy:
    """Prefix tasks verbatim plus converted suffix tasks.

    A suffix task that is textually identical to an unused baseline task
    (same step name, content, and input/output names resolving to the same
    ids) reuses that task verbatim, team and process included, so an
    unchanged tail keeps its identity across variants.
    """
    prefix_tasks = list(baseline.tasks[:branch_point])
    objects = [ko for ko in baseline.key_objects if ko.origin.is_initial]
    for t in prefix_tasks:
        ko = baseline.key_object(t.output_object_id)
        if ko is not None:
            objects.append(ko)
    name_to_id = {ko.name: ko.id for ko in objects}
    taken_obj = {ko.id for ko in objects}
    taken_task = {t.id for t in prefix_tasks}

    unused = list(baseline.tasks[branch_point:])
    tasks = list(prefix_tasks)
    for doc in suffix_docs:
        reused = _match_baseline_task(baseline, unused, doc, name_to_id, taken_task, taken_obj)
        if reused is not None:
            unused.remove(reused)
            tasks.append(reused)
            taken_task.add(reused.id)
            out = baseline.key_object(reused.output_object_id)
            objects.append(out)
            taken_obj.add(out.id)
            name_to_id[out.name] = out.id
            continue
        task_id = unique_id(f"task-{slugify(doc['stepName'])}", taken_task)
        taken_task.add(task_id)
        out_id = unique_id(f"ko-{slugify(doc['outputObject'])}", taken_obj)
        taken_obj.add(out_id)
        objects.append(
            KeyObject(id=out_id, name=doc["outputObject"], description=doc["taskContent"], origin=Origin.task_output(task_id))
        )
        tasks.append(
            TaskSpec(
                id=task_id,
                step_name=doc["stepName"],
                task_content=doc["taskContent"],
                input_object_ids=tuple(name_to_id[name] for name in doc["inputObjects"]),
                output_object_id=out_id,
            )
        )
        name_to_id[doc["outputObject"]] = out_id
    return Strategy(goal=baseline.goal, key_objects=tuple(objects), tasks=tuple(tasks), board=baseline.board)


def _match_baseline_task(
    baseline: Strategy,
    unused: list[TaskSpec],
    doc: dict,
    name_to_id: dict[str, str],
    taken_task: set[str],
    taken_obj: set[str],
) -> TaskSpec | None:
    for candidate in unused:
        if candidate.id in taken_task or candidate.output_object_id in taken_obj:
            continue
        if candidate.step_name != doc["stepName"] or candidate.task_content != doc["taskContent"]:
            continue
        out = baseline.key_object(candidate.output_object_id)
        if out is None or out.name != doc["outputObject"]:
            continue
        input_names = [_object_name(baseline, oid) for oid in candidate.input_object_ids]
        if input_names != list(doc["inputObjects"]):
            continue
        if any(name_to_id.get(name) != oid for name, oid in zip(input_names, candidate.input_object_ids)):
            continue
        return candidate
    return None
