"""Shared test fixtures: the novel corpus, scripted providers, and random
valid strategies for property-style checks."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from coordkit import schemas
from coordkit.config import GatewayConfig
from coordkit.gateway import Gateway, MockProvider
from coordkit.genesis import GenerationPipeline
from coordkit.model import (
    ActionSpec,
    AgentBoard,
    AgentProfile,
    Goal,
    InputRef,
    InteractionType,
    KeyObject,
    Origin,
    Strategy,
    TaskSpec,
    validate_strategy,
)
from coordkit.workspace import import_agent_board

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
NOVEL = FIXTURES / "novel"
MALFORMED = FIXTURES / "malformed"

NOVEL_GOAL = Goal("Write a novel about the awakening of artificial intelligence")


@pytest.fixture
def novel_board() -> AgentBoard:
    return import_agent_board(str(NOVEL / "board.json"))


def make_gateway(provider: MockProvider | None = None, *, fixture_dir: Path | None = None) -> Gateway:
    gateway = Gateway(GatewayConfig())
    schemas.register_all(gateway)
    gateway.register_provider("mock", provider or MockProvider(fixture_dir=fixture_dir))
    return gateway


def make_pipeline(provider: MockProvider | None = None, *, fixture_dir: Path | None = None, seed: int = 7):
    return GenerationPipeline(make_gateway(provider, fixture_dir=fixture_dir), "mock", seed=seed)


@pytest.fixture
def novel_pipeline() -> GenerationPipeline:
    return make_pipeline(fixture_dir=NOVEL)


@pytest.fixture
def novel_strategy(novel_pipeline, novel_board) -> Strategy:
    return novel_pipeline.generate_full_strategy(NOVEL_GOAL, (), novel_board)


def build_random_strategy(
    rng: random.Random, *, max_tasks: int = 10, max_actions: int = 6, with_values: bool = True, max_initial: int = 3
) -> Strategy:
    """A structurally valid random strategy for fuzz-style checks.

    Every task ends in a finalize action and initial objects carry values,
    so the result is executable as-is under the mock provider. Pass
    ``max_initial=0`` to get plans whose only key objects are task outputs.
    """
    agent_count = rng.randint(2, 5)
    board = AgentBoard(
        agents=tuple(
            AgentProfile(id=f"agent-{i}", name=f"Agent {i}", profile=f"Specialist number {i}.")
            for i in range(1, agent_count + 1)
        )
    )
    objects: list[KeyObject] = []
    for i in range(rng.randint(0, max_initial)):
        objects.append(
            KeyObject(
                id=f"ko-seed-{i}",
                name=f"Seed {i}",
                description="Provided up front.",
                origin=Origin.initial(),
                value=f"seed text {i}" if with_values else None,
            )
        )
    tasks: list[TaskSpec] = []
    available = [ko.id for ko in objects]
    for t in range(rng.randint(1, max_tasks)):
        inputs = tuple(rng.sample(available, k=min(len(available), rng.randint(0, 3))))
        output_id = f"ko-out-{t}"
        objects.append(
            KeyObject(
                id=output_id,
                name=f"Output {t}",
                description=f"Result of step {t}.",
                origin=Origin.task_output(f"task-{t}"),
            )
        )
        team = tuple(rng.sample(board.ids(), k=rng.randint(1, agent_count)))
        actions = []
        action_count = rng.randint(1, max_actions)
        for a in range(action_count):
            kinds = [InteractionType.PROPOSE, InteractionType.CRITIQUE, InteractionType.IMPROVE]
            interaction = InteractionType.FINALIZE if a == action_count - 1 else rng.choice(kinds)
            refs: list[InputRef] = []
            for object_id in inputs:
                if rng.random() < 0.4:
                    refs.append(InputRef.key_object(object_id))
            for earlier in range(a):
                if rng.random() < 0.3:
                    refs.append(InputRef.action(earlier))
            actions.append(
                ActionSpec(
                    agent_id=rng.choice(team),
                    instruction=f"Carry out step {a} of task {t}.",
                    interaction_type=interaction,
                    important_inputs=tuple(refs),
                )
            )
        tasks.append(
            TaskSpec(
                id=f"task-{t}",
                step_name=f"Step {t}",
                task_content=f"Do the work for step {t}.",
                input_object_ids=inputs,
                output_object_id=output_id,
                team=team,
                process=tuple(actions),
            )
        )
        available.append(output_id)
    strategy = Strategy(goal=Goal("Fuzz goal"), key_objects=tuple(objects), tasks=tuple(tasks), board=board)
    report = validate_strategy(strategy)
    assert report.ok, report.errors
    return strategy
