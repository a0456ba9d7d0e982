"""Strategy data model: validation, dependency closure, plan diffing."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coordkit import (
    ActionSpec,
    AgentBoard,
    AgentProfile,
    Goal,
    InputRef,
    InteractionType,
    KeyObject,
    Origin,
    Ref,
    Strategy,
    StrategyInvalidError,
    TaskSpec,
    closure_edges,
    dependency_closure,
    diff_plans,
    ensure_valid,
    unique_id,
    validate_strategy,
)
from coordkit.errors import UnresolvedReferenceError

from conftest import build_random_strategy


def _board(*names: str) -> AgentBoard:
    return AgentBoard(tuple(AgentProfile(f"agent-{n.lower()}", n, f"{n} profile") for n in names))


def _chain_strategy(n_tasks: int = 3) -> Strategy:
    """Linear pipeline: task k consumes task k-1's output."""
    board = _board("Alice", "Bob")
    objects = [KeyObject("ko-seed", "Seed", origin=Origin.initial(), value="start")]
    tasks = []
    prev = "ko-seed"
    for k in range(n_tasks):
        out = f"ko-out-{k}"
        objects.append(KeyObject(out, f"Output {k}", origin=Origin.task_output(f"task-{k}")))
        tasks.append(
            TaskSpec(
                id=f"task-{k}",
                step_name=f"Step {k}",
                task_content=f"Do step {k}.",
                input_object_ids=(prev,),
                output_object_id=out,
                team=("agent-alice",),
                process=(
                    ActionSpec("agent-alice", "draft it", InteractionType.PROPOSE, (InputRef.key_object(prev),)),
                    ActionSpec("agent-alice", "finish it", InteractionType.FINALIZE, (InputRef.action(0),)),
                ),
            )
        )
        prev = out
    return Strategy(goal=Goal("Chain goal"), key_objects=tuple(objects), tasks=tuple(tasks), board=board)


class TestValidation:
    def test_generated_novel_strategy_has_no_errors(self, novel_strategy):
        report = validate_strategy(novel_strategy)
        assert report.errors == ()
        assert report.ok

    def test_empty_plan_is_a_warning_not_an_error(self):
        strategy = Strategy(goal=Goal("Just a goal"), board=_board("Alice"))
        report = validate_strategy(strategy)
        assert report.ok
        assert ("empty-plan", "tasks") in {(w[0], w[1]) for w in report.warnings}

    def test_consuming_a_later_output_is_a_forward_dependency_error(self):
        base = _chain_strategy(2)
        # Rewire task 0 to consume task 1's output: a forward reference.
        t0 = base.tasks[0]
        bad = base.with_task(
            0,
            TaskSpec(
                id=t0.id,
                step_name=t0.step_name,
                task_content=t0.task_content,
                input_object_ids=("ko-out-1",),
                output_object_id=t0.output_object_id,
                team=t0.team,
                process=(),
            ),
        )
        report = validate_strategy(bad)
        codes = {(e[0], e[1]) for e in report.errors}
        assert ("forward-dependency", "tasks[0].inputObjectIds[0]") in codes

    def test_unknown_agent_on_team_is_reported(self):
        base = _chain_strategy(1)
        t0 = base.tasks[0]
        bad = base.with_task(
            0,
            TaskSpec(t0.id, t0.step_name, t0.task_content, t0.input_object_ids, t0.output_object_id, ("agent-ghost",), ()),
        )
        report = validate_strategy(bad)
        assert any(e[0] == "unknown-agent" for e in report.errors)

    def test_finalize_must_be_last_and_unique(self):
        base = _chain_strategy(1)
        t0 = base.tasks[0]
        fin = ActionSpec("agent-alice", "finish", InteractionType.FINALIZE)
        prop = ActionSpec("agent-alice", "draft", InteractionType.PROPOSE)

        mid = base.with_task(0, TaskSpec(t0.id, t0.step_name, t0.task_content, t0.input_object_ids, t0.output_object_id, t0.team, (fin, prop)))
        assert any(e[0] == "finalize-not-last" for e in validate_strategy(mid).errors)

        double = base.with_task(0, TaskSpec(t0.id, t0.step_name, t0.task_content, t0.input_object_ids, t0.output_object_id, t0.team, (fin, fin)))
        assert any(e[0] == "multiple-finalize" for e in validate_strategy(double).errors)

        none = base.with_task(0, TaskSpec(t0.id, t0.step_name, t0.task_content, t0.input_object_ids, t0.output_object_id, t0.team, (prop,)))
        assert any(e[0] == "missing-finalize" for e in validate_strategy(none).errors)

    def test_action_ref_must_point_strictly_earlier(self):
        base = _chain_strategy(1)
        t0 = base.tasks[0]
        bad = base.with_task(
            0,
            TaskSpec(
                t0.id,
                t0.step_name,
                t0.task_content,
                t0.input_object_ids,
                t0.output_object_id,
                t0.team,
                (
                    ActionSpec("agent-alice", "draft", InteractionType.PROPOSE, (InputRef.action(1),)),
                    ActionSpec("agent-alice", "finish", InteractionType.FINALIZE),
                ),
            ),
        )
        assert any(e[0] == "action-ref-not-earlier" for e in validate_strategy(bad).errors)

    def test_ensure_valid_raises_with_report_attached(self):
        bad = Strategy(goal=Goal(""), board=_board("Alice"))
        with pytest.raises(StrategyInvalidError) as exc:
            ensure_valid(bad)
        assert exc.value.report is not None
        assert not exc.value.report.ok


class TestDependencyClosure:
    def test_initial_object_depends_only_on_itself(self):
        strategy = _chain_strategy(3)
        assert dependency_closure(strategy, "ko-seed") == {Ref.object("ko-seed")}

    def test_chain_final_output_reaches_every_prior_node(self):
        strategy = _chain_strategy(3)
        closure = dependency_closure(strategy, "ko-out-2")
        objects = {r.object_id for r in closure if r.kind == "object"}
        assert objects == {"ko-seed", "ko-out-0", "ko-out-1", "ko-out-2"}
        # Every action of every task participates in producing the tail.
        actions = {(r.task_id, r.action_index) for r in closure if r.kind == "action"}
        assert actions == {(f"task-{k}", j) for k in range(3) for j in range(2)}

    def test_novel_plot_design_depends_on_theme_and_characters(self, novel_strategy):
        plot = next(ko for ko in novel_strategy.key_objects if ko.name == "Plot Design")
        closure = dependency_closure(novel_strategy, plot.id)
        names = {
            ko.name
            for ko in novel_strategy.key_objects
            if Ref.object(ko.id) in closure
        }
        assert "Main Theme" in names
        assert "Character List" in names

    def test_unknown_start_reference_raises(self):
        strategy = _chain_strategy(1)
        with pytest.raises(UnresolvedReferenceError):
            dependency_closure(strategy, "ko-nope")

    def test_closure_matches_brute_force_reachability(self):
        rng = random.Random(1234)
        for _ in range(25):
            strategy = build_random_strategy(rng)
            edges = closure_edges(strategy)
            backward: dict[Ref, set[Ref]] = {}
            for src, dst in edges:
                backward.setdefault(dst, set()).add(src)
            for task in strategy.tasks:
                start = Ref.object(task.output_object_id)
                # Brute force: iterate to a fixed point.
                reach = {start}
                while True:
                    grown = set(reach)
                    for node in reach:
                        grown |= backward.get(node, set())
                    if grown == reach:
                        break
                    reach = grown
                assert dependency_closure(strategy, start) == reach


class TestDiffPlans:
    def test_identical_plans_diff_empty(self):
        a = _chain_strategy(3)
        b = _chain_strategy(3)
        diff = diff_plans(a, b)
        assert diff.is_empty
        assert diff.shared_prefix == 3

    def test_merging_last_two_steps_is_one_removal_one_change(self):
        a = _chain_strategy(3)
        merged_last = TaskSpec(
            id="task-1",
            step_name="Step 1 and 2",
            task_content="Do steps 1 and 2 in one pass.",
            input_object_ids=("ko-out-0",),
            output_object_id="ko-out-1",
            team=("agent-alice",),
            process=a.tasks[1].process,
        )
        b = Strategy(
            goal=a.goal,
            key_objects=tuple(ko for ko in a.key_objects if ko.id != "ko-out-2"),
            tasks=(a.tasks[0], merged_last),
            board=a.board,
        )
        diff = diff_plans(a, b)
        assert diff.shared_prefix == 1
        assert [d.task_id for d in diff.removed] == ["task-2"]
        assert [c.task_id for c in diff.changed] == ["task-1"]
        assert diff.added == ()
        assert diff.moved == ()

    def test_disjoint_task_ids_are_all_added_and_removed(self):
        a = _chain_strategy(2)
        b = _chain_strategy(2)
        renamed = tuple(
            TaskSpec(f"other-{t.id}", t.step_name, t.task_content, t.input_object_ids, t.output_object_id, t.team, t.process)
            for t in b.tasks
        )
        b = Strategy(goal=b.goal, key_objects=b.key_objects, tasks=renamed, board=b.board)
        diff = diff_plans(a, b)
        assert diff.shared_prefix == 0
        assert {d.task_id for d in diff.removed} == {"task-0", "task-1"}
        assert {d.task_id for d in diff.added} == {"other-task-0", "other-task-1"}

    def test_reordering_equal_tasks_is_a_move(self):
        a = _chain_strategy(1)
        extra = TaskSpec(
            id="task-solo",
            step_name="Solo",
            task_content="Independent step.",
            input_object_ids=(),
            output_object_id="ko-solo",
            team=("agent-alice",),
            process=(),
        )
        solo_ko = KeyObject("ko-solo", "Solo Out", origin=Origin.task_output("task-solo"))
        base = Strategy(a.goal, a.key_objects + (solo_ko,), a.tasks + (extra,), a.board)
        swapped = Strategy(a.goal, base.key_objects, (extra, a.tasks[0]), a.board)
        diff = diff_plans(base, swapped)
        assert {c.task_id for c in diff.moved} == {"task-0", "task-solo"}
        assert diff.added == () and diff.removed == () and diff.changed == ()


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**9))
    def test_closure_is_acyclic_on_valid_strategies(self, seed):
        strategy = build_random_strategy(random.Random(seed), max_tasks=10)
        edges = closure_edges(strategy)
        for src, dst in edges:
            assert src != dst
            # dst depends on src, so src's own closure must not loop back.
            assert dst not in dependency_closure(strategy, src)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**9))
    def test_validate_is_pure_and_deterministic(self, seed):
        strategy = build_random_strategy(random.Random(seed))
        before = strategy
        first = validate_strategy(strategy)
        second = validate_strategy(strategy)
        assert first == second
        assert strategy == before

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**9), st.integers(0, 10**9))
    def test_diff_is_a_mirror(self, seed_a, seed_b):
        a = build_random_strategy(random.Random(seed_a))
        b = build_random_strategy(random.Random(seed_b))
        ab = diff_plans(a, b)
        ba = diff_plans(b, a)
        assert ab.shared_prefix == ba.shared_prefix
        assert {d.task_id for d in ab.added} == {d.task_id for d in ba.removed}
        assert {d.task_id for d in ab.removed} == {d.task_id for d in ba.added}
        assert {(c.task_id, c.index_a, c.index_b) for c in ab.changed} == {
            (c.task_id, c.index_b, c.index_a) for c in ba.changed
        }
        assert {(c.task_id, c.index_a, c.index_b) for c in ab.moved} == {
            (c.task_id, c.index_b, c.index_a) for c in ba.moved
        }

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**9))
    def test_diff_with_self_is_empty(self, seed):
        a = build_random_strategy(random.Random(seed))
        assert diff_plans(a, a).is_empty


class TestRefsAndIds:
    def test_ref_encode_decode_roundtrip(self):
        for ref in (Ref.object("ko-x"), Ref.action("task-y", 3)):
            assert Ref.decode(ref.encode()) == ref

    def test_unique_id_disambiguates(self):
        assert unique_id("task-review", set()) == "task-review"
        assert unique_id("task-review", {"task-review"}) == "task-review-2"
        assert unique_id("task-review", {"task-review", "task-review-2"}) == "task-review-3"
