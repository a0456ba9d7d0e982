"""Acceptance checks, one test per core guarantee of the package.

Each test prints a single ``PASS: ...`` / ``FAIL: ...`` line (visible with
``pytest -s``) and fails loudly if the guarantee does not hold at the full
sample size. Everything here runs headless against the mock provider.
"""

from __future__ import annotations

import json
import random
import time
from contextlib import contextmanager

import pytest
from fastapi.testclient import TestClient

from coordkit import workspace
from coordkit.cli import main as cli_main
from coordkit.config import RuntimeConfig, ServiceConfig
from coordkit.errors import CorruptProjectError, GenerationFailedError, SchemaViolationError
from coordkit.explore import SessionKind, add_manual_version, open_session, rank_rows
from coordkit.gateway import MockProvider, Stage
from coordkit.genesis import (
    BranchRequest,
    ScoreMatrix,
    ScoreRow,
    add_user_aspect,
    set_aspect_selected,
)
from coordkit.model import (
    AgentBoard,
    AgentProfile,
    InteractionType,
    Strategy,
    TaskProcess,
    TaskSpec,
    diff_plans,
    validate_strategy,
)
from coordkit.runtime import build_trace, execute
from coordkit.server import build_state, create_app
from coordkit.workspace import project_to_doc

from conftest import MALFORMED, NOVEL, NOVEL_GOAL, build_random_strategy, make_gateway, make_pipeline

API = "/api/v1"


@contextmanager
def criterion(label: str):
    """Print one PASS/FAIL line for the guarantee, whatever happens inside."""
    ok = False
    try:
        yield
        ok = True
    finally:
        print(f"{'PASS' if ok else 'FAIL'}: {label}")


# ---------------------------------------------------------------------------
# 1. Schema-gated generation
# ---------------------------------------------------------------------------


def test_criterion_1_schema_gated_generation(novel_board):
    with criterion("1 schema-gated generation: zero validation errors in under 2s"):
        pipeline = make_pipeline(fixture_dir=NOVEL)
        start = time.perf_counter()
        strategy = pipeline.generate_full_strategy(NOVEL_GOAL, (), novel_board)
        elapsed = time.perf_counter() - start
        report = validate_strategy(strategy)
        assert report.errors == (), report.errors
        assert strategy.tasks, "generation produced an empty plan"
        assert elapsed < 2.0, f"generation took {elapsed:.2f}s"
        print(f"  {len(strategy.tasks)} tasks, 0 errors, {elapsed:.2f}s")


# ---------------------------------------------------------------------------
# 2. Repair loop containment
# ---------------------------------------------------------------------------


def _valid_team(team, board) -> list[str]:
    problems = []
    if not team:
        problems.append("empty team escaped")
    if not set(team) <= set(board.ids()):
        problems.append(f"team cites agents off the board: {team}")
    return problems


def _valid_process(process, task) -> list[str]:
    problems = []
    if not process:
        return ["empty process escaped"]
    finalizes = [i for i, a in enumerate(process) if a.interaction_type is InteractionType.FINALIZE]
    if finalizes != [len(process) - 1]:
        problems.append(f"finalize positions {finalizes} in a {len(process)}-action process")
    for i, action in enumerate(process):
        if action.agent_id not in task.team:
            problems.append(f"action {i} cites off-team agent {action.agent_id!r}")
        if action.interaction_type not in InteractionType:
            problems.append(f"action {i} has unknown interaction {action.interaction_type!r}")
        for ref in action.important_inputs:
            if ref.kind == "keyObject" and ref.key_object_id not in task.input_object_ids:
                problems.append(f"action {i} reads undeclared object {ref.key_object_id!r}")
            if ref.kind == "action" and not 0 <= ref.action_index < i:
                problems.append(f"action {i} reads non-earlier action {ref.action_index}")
    return problems


def test_criterion_2_repair_loop_containment(novel_board):
    with criterion("2 repair loop: malformed outputs repaired within budget or rejected"):
        problems: list[str] = []

        for scenario in ("forward_dependency", "missing_output"):
            pipeline = make_pipeline(MockProvider(fixture_dir=MALFORMED / scenario))
            outline = pipeline.generate_plan_outline(NOVEL_GOAL)
            plan = Strategy(goal=NOVEL_GOAL, key_objects=outline.key_objects, tasks=outline.tasks)
            problems += [f"{scenario}: {e}" for e in validate_strategy(plan).errors]

        pipeline = make_pipeline(MockProvider(fixture_dir=MALFORMED / "dangling_agent"))
        team = pipeline.assign_agents(NOVEL_GOAL, TaskSpec("task-x", "Theme Selection", "Pick a theme."), novel_board)
        problems += [f"dangling_agent: {p}" for p in _valid_team(team, novel_board)]

        staffed = TaskSpec(
            "task-x", "Theme Selection", "Pick a theme.",
            team=("agent-futurist", "agent-science-fiction-writer"),
        )
        for scenario in ("mid_finalize", "unknown_interaction"):
            pipeline = make_pipeline(MockProvider(fixture_dir=MALFORMED / scenario))
            process = pipeline.generate_task_process(NOVEL_GOAL, staffed, staffed.team, novel_board)
            problems += [f"{scenario}: {p}" for p in _valid_process(process, staffed)]

        # When no valid follow-up exists the caller sees the repair budget
        # failure; nothing partially parsed is ever returned.
        pipeline = make_pipeline(MockProvider(fixture_dir=MALFORMED / "never_valid"))
        with pytest.raises(GenerationFailedError) as exc:
            pipeline.generate_plan_outline(NOVEL_GOAL)
        cause = exc.value.__cause__
        if not isinstance(cause, SchemaViolationError) or cause.code != "schema-violation-after-repairs":
            problems.append(f"never_valid surfaced {cause!r} instead of schema-violation-after-repairs")

        assert not problems, problems
        print("  5 scenarios repaired, 1 rejected after budget, 0 invalid artifacts")


# ---------------------------------------------------------------------------
# 3. Branch prefix preservation
# ---------------------------------------------------------------------------


def _random_suffix_doc(rng: random.Random, baseline: Strategy, point: int, tag: int) -> dict:
    """A structurally valid continuation for the plan kept up to ``point``."""
    names = {ko.id: ko.name for ko in baseline.key_objects}
    known = [ko.name for ko in baseline.initial_objects()]
    known += [names[t.output_object_id] for t in baseline.tasks[:point]]
    tasks = []
    for j in range(rng.randint(1 if point == 0 else 0, 4)):
        inputs = rng.sample(known, k=min(len(known), rng.randint(0, 2)))
        output = f"Artifact {tag}-{j}"
        tasks.append(
            {
                "stepName": f"Alternative Step {tag}-{j}",
                "taskContent": f"Take direction {tag} at step {j}.",
                "inputObjects": inputs,
                "outputObject": output,
            }
        )
        known.append(output)
    return {"tasks": tasks}


def test_criterion_3_branch_prefix_preservation(novel_board):
    with criterion("3 branching: 100 randomized requests, every variant keeps the prefix"):
        baseline = make_pipeline(fixture_dir=NOVEL).generate_full_strategy(NOVEL_GOAL, (), novel_board)
        provider = MockProvider()
        pipeline = make_pipeline(provider)
        rng = random.Random(303)
        violations = 0
        for i in range(100):
            point = rng.randint(0, len(baseline.tasks))
            provider.push(Stage.BRANCH_COMPLETION, json.dumps(_random_suffix_doc(rng, baseline, point, i)))
            request = BranchRequest(baseline=baseline, branch_point=point, requirement=f"direction {i}", count=1)
            for variant in pipeline.branch_plan(request):
                if diff_plans(baseline, variant).shared_prefix < point:
                    violations += 1
                if variant.tasks[:point] != baseline.tasks[:point]:
                    violations += 1
                if validate_strategy(variant).errors:
                    violations += 1
        assert violations == 0, f"{violations} prefix violations"
        print("  100 requests, violations=0")


# ---------------------------------------------------------------------------
# 4. Ranking oracle
# ---------------------------------------------------------------------------


def _brute_force_rank(matrix, board, team, selected):
    def mean(agent_id: str) -> float:
        row = next(r for r in matrix.rows if r.agent_id == agent_id)
        return sum(row.scores[name] for name in selected) / len(selected)

    ordered = []
    for in_team in (True, False):
        block = [a.id for a in board.agents if (a.id in set(team)) == in_team]
        block = sorted(block, key=lambda agent_id: -mean(agent_id))
        label = "assigned" if in_team else "unassigned"
        ordered.extend((agent_id, label, mean(agent_id)) for agent_id in block)
    return ordered


def _random_rank_case(rng: random.Random):
    board = AgentBoard(
        agents=tuple(
            AgentProfile(id=f"agent-{i}", name=f"Agent {i}", profile="A specialist.")
            for i in range(rng.randint(1, 8))
        )
    )
    aspects = tuple(f"Aspect {j}" for j in range(rng.randint(1, 4)))
    rows = tuple(
        ScoreRow(
            agent_id=agent.id,
            scores={name: rng.randint(1, 5) for name in aspects},
            rationales={name: "because" for name in aspects},
        )
        for agent in board.agents
    )
    matrix = ScoreMatrix(task_id="task-x", aspects=aspects, rows=rows)
    team = tuple(agent.id for agent in board.agents if rng.random() < 0.4)
    selected = tuple(rng.sample(aspects, rng.randint(1, len(aspects))))
    return matrix, board, team, selected


def test_criterion_4_ranking_matches_brute_force(novel_board):
    with criterion("4 ranking: equals brute-force on 1000 matrices; fixture order holds"):
        rng = random.Random(404)
        mismatches = 0
        for _ in range(1000):
            matrix, board, team, selected = _random_rank_case(rng)
            got = [(r.agent_id, r.partition, r.mean) for r in rank_rows(matrix, board, team, selected)]
            if got != _brute_force_rank(matrix, board, team, selected):
                mismatches += 1
        assert mismatches == 0, f"{mismatches} ranking mismatches"

        pipeline = make_pipeline(fixture_dir=NOVEL)
        task = TaskSpec("task-plot", "Plot Development", "Develop the full plot arc.")
        aspects = pipeline.derive_aspects(NOVEL_GOAL, task)
        aspects = add_user_aspect(aspects, "AI Tech Understanding")
        aspects = add_user_aspect(aspects, "Love Element Understanding")
        aspects = set_aspect_selected(aspects, "Storytelling Craft", False)
        selected = aspects.selected_names()
        assert set(selected) == {
            "Creative Thinking",
            "Knowledge of AI Ethics",
            "AI Tech Understanding",
            "Love Element Understanding",
        }
        matrix = pipeline.score_agents(NOVEL_GOAL, task, aspects, novel_board)
        order = [r.agent_id for r in rank_rows(matrix, novel_board, (), selected)]
        scientist = novel_board.by_name("AI Scientist").id
        engineer = novel_board.by_name("AI Engineer").id
        assert order.index(scientist) < order.index(engineer)
        print("  1000 matrices exact, AI Scientist above AI Engineer on 4 aspects")


# ---------------------------------------------------------------------------
# 5. Execution ordering and provenance
# ---------------------------------------------------------------------------


def _brute_force_edges(record, strategy) -> set[tuple[str, str]]:
    edges: set[tuple[str, str]] = set()
    for result in record.action_results:
        consumer = f"action:{result.task_id}:{result.action_index}"
        for ref, _ in result.resolved_inputs:
            if ref.kind == "keyObject":
                edges.add((f"object:{ref.key_object_id}", consumer))
            else:
                edges.add((f"action:{result.task_id}:{ref.action_index}", consumer))
    for task in strategy.tasks:
        if task.process and task.output_object_id in record.object_values:
            if record.result_for(task.id, len(task.process) - 1) is not None:
                edges.add((f"action:{task.id}:{len(task.process) - 1}", f"object:{task.output_object_id}"))
    return edges


def test_criterion_5_execution_order_and_provenance():
    with criterion("5 execution: order, output coverage, and trace exact on 500 runs"):
        gateway = make_gateway()
        config = RuntimeConfig(action_retries=0, retry_backoff_seconds=0.0)
        mismatches = 0
        for i in range(500):
            rng = random.Random(50_000 + i)
            strategy = build_random_strategy(rng, max_tasks=10, max_actions=6, max_initial=0)
            record = execute(strategy, gateway, "mock", config=config, run_id=f"run-{i:04d}", seed=i)
            expected_order = [(t.id, j) for t in strategy.tasks for j in range(len(t.process))]
            actual_order = [(r.task_id, r.action_index) for r in record.action_results]
            graph = build_trace(record, strategy)
            if (
                record.status.value != "completed"
                or actual_order != expected_order
                or set(record.object_values) != {t.output_object_id for t in strategy.tasks}
                or set(graph.edges) != _brute_force_edges(record, strategy)
                or len(graph.edges) != len(set(graph.edges))
            ):
                mismatches += 1
        assert mismatches == 0, f"{mismatches} of 500 runs violated ordering or provenance"
        print("  500 runs, 0 mismatches")


# ---------------------------------------------------------------------------
# 6. Persistence
# ---------------------------------------------------------------------------


def _random_project(rng: random.Random, index: int):
    strategy = build_random_strategy(rng, max_tasks=6, max_actions=4)
    project = workspace.new_project(f"Project {index}", strategy.goal)
    project.board = strategy.board
    workspace.set_strategy(project, strategy)
    if rng.random() < 0.7:
        session = open_session(project.versions, project.next_session_id(), SessionKind.PLAN_OUTLINE, strategy)
        project.sessions[session.id] = session
        for _ in range(rng.randint(0, 2)):
            add_manual_version(project.versions, session, build_random_strategy(rng, max_tasks=4, max_actions=3))
    if rng.random() < 0.5:
        task = strategy.tasks[rng.randrange(len(strategy.tasks))]
        process_session = open_session(
            project.versions,
            project.next_session_id(),
            SessionKind.TASK_PROCESS,
            TaskProcess(task_id=task.id, actions=task.process),
            task_id=task.id,
        )
        project.sessions[process_session.id] = process_session
    for r in range(rng.randint(0, 2)):
        project.run_index[f"run-{r + 1:03d}"] = f"runs/run-{r + 1:03d}.json"
    return project


def test_criterion_6_persistence_round_trip(tmp_path):
    with criterion("6 persistence: 200 projects round-trip, byte-stable, corruption caught"):
        rng = random.Random(606)
        problems: list[str] = []
        for i in range(200):
            project = _random_project(rng, i)
            path = tmp_path / f"proj-{i:03d}.json"
            workspace.save(project, str(path))
            loaded = workspace.load(str(path))
            if project_to_doc(loaded) != project_to_doc(project):
                problems.append(f"{i}: round-trip drift")
            resave = tmp_path / f"proj-{i:03d}-resave.json"
            workspace.save(loaded, str(resave))
            if path.read_bytes() != resave.read_bytes():
                problems.append(f"{i}: re-save not byte-stable")
            data = path.read_bytes()
            clipped = tmp_path / f"proj-{i:03d}-clipped.json"
            clipped.write_bytes(data[: rng.randrange(1, len(data) - 1)])
            try:
                workspace.load(str(clipped))
                problems.append(f"{i}: truncated file loaded")
            except CorruptProjectError:
                pass
        assert not problems, problems
        print("  200 projects, 0 drift, 0 partial loads")


# ---------------------------------------------------------------------------
# 7. CLI end to end plus SSE
# ---------------------------------------------------------------------------


def _wait(client: TestClient, url: str, timeout: float = 10.0) -> dict:
    deadline = time.time() + timeout
    while time.time() < deadline:
        doc = client.get(url).json()
        if doc.get("status") in ("completed", "failed"):
            return doc
        time.sleep(0.01)
    raise AssertionError(f"{url} did not settle")


def test_criterion_7_cli_end_to_end_and_sse(tmp_path, capsys):
    with criterion("7 CLI pipeline exits 0 and the run event stream is gapless"):
        flags = ["--fixtures", str(NOVEL), "--seed", "7"]
        project = str(tmp_path / "acceptance.json")
        for step in (
            ["init", "--project", project, "--name", "acceptance", "--goal", NOVEL_GOAL.text],
            ["board", "import", str(NOVEL / "board.json"), "--project", project],
            ["generate", "--project", project],
            ["branch", "plan", "--project", project, "--requirement", "add love elements", "--count", "3", "--point", "0"],
        ):
            assert cli_main(flags + step) == 0, step
            capsys.readouterr()
        strategy = workspace.load(project).strategy()
        assert cli_main(flags + ["assign", "--project", project, "--task", strategy.tasks[0].id]) == 0
        capsys.readouterr()
        assert cli_main(flags + ["run", "--project", project]) == 0
        run_id = capsys.readouterr().out.split()[0]
        node = f"object:{strategy.tasks[-1].output_object_id}"
        assert cli_main(flags + ["trace", "--project", project, "--run", run_id, "--node", node]) == 0
        capsys.readouterr()

        config = ServiceConfig(
            mock_fixture_dir=str(NOVEL),
            runtime=RuntimeConfig(action_retries=0, retry_backoff_seconds=0.0),
        )
        with TestClient(create_app(state=build_state(config, seed=7))) as client:
            response = client.post(f"{API}/projects", json={"name": "acceptance", "goal": NOVEL_GOAL.text})
            project_id = response.json()["id"]
            board_doc = json.loads((NOVEL / "board.json").read_text(encoding="utf-8"))
            assert client.put(f"{API}/projects/{project_id}/board", json={"agents": board_doc}).status_code == 200
            job_id = client.post(f"{API}/projects/{project_id}/generate", json={"kind": "full"}).json()["jobId"]
            assert _wait(client, f"{API}/jobs/{job_id}")["status"] == "completed"
            run_id = client.post(f"{API}/projects/{project_id}/runs", json={}).json()["runId"]
            assert _wait(client, f"{API}/runs/{run_id}")["status"] == "completed"
            events = []
            with client.stream("GET", f"{API}/runs/{run_id}/events") as stream:
                for line in stream.iter_lines():
                    if line.startswith("data: "):
                        events.append(json.loads(line[len("data: "):]))
            seqs = [e["seq"] for e in events]
            assert seqs and seqs == list(range(1, len(seqs) + 1)), "sequence numbers have gaps"
            assert events[0]["kind"] == "run-started"
            assert events[-1]["kind"] == "run-finished"
        print(f"  7 commands exit 0, {len(seqs)} SSE events gapless")
