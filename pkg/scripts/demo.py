"""End-to-end walkthrough against the bundled fixture corpus.

Runs entirely offline: generates a strategy for the novel-writing goal,
explores plan branches, ranks candidate agents for one task, executes the
strategy, traces the final result back to its sources, and writes a
markdown report. Usage: ``python3 scripts/demo.py [output-dir]``.
"""

from __future__ import annotations

import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from coordkit import schemas, workspace  # noqa: E402
from coordkit.config import GatewayConfig, RuntimeConfig  # noqa: E402
from coordkit.explore import rank_rows  # noqa: E402
from coordkit.gateway import Gateway, MockProvider  # noqa: E402
from coordkit.genesis import BranchRequest, GenerationPipeline, add_user_aspect, set_aspect_selected  # noqa: E402
from coordkit.model import Goal, diff_plans  # noqa: E402
from coordkit.runtime import build_trace, execute, trace_back  # noqa: E402

FIXTURES = ROOT / "fixtures" / "novel"
GOAL = Goal("Write a novel about the awakening of artificial intelligence")


def section(title: str) -> None:
    print(f"\n=== {title} " + "=" * max(0, 60 - len(title)))


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="coordkit-demo-"))
    out_dir.mkdir(parents=True, exist_ok=True)

    board = workspace.import_agent_board(str(FIXTURES / "board.json"))
    gateway = Gateway(GatewayConfig())
    schemas.register_all(gateway)
    gateway.register_provider("mock", MockProvider(fixture_dir=FIXTURES))
    pipeline = GenerationPipeline(gateway, "mock", seed=7)

    section("Three-stage generation")
    strategy = pipeline.generate_full_strategy(GOAL, (), board)
    for i, task in enumerate(strategy.tasks):
        names = ", ".join(a.name for a in (strategy.board.get(x) for x in task.team) if a)
        output = strategy.key_object(task.output_object_id)
        print(f"{i}. {task.step_name}  ->  {output.name if output else task.output_object_id}")
        print(f"   team: {names}; {len(task.process)} actions")

    section("Plan branching")
    request = BranchRequest(baseline=strategy, branch_point=0, requirement="add love elements", count=3)
    for k, variant in enumerate(pipeline.branch_plan(request)):
        diff = diff_plans(strategy, variant)
        print(f"variant {k}: shared prefix {diff.shared_prefix}, "
              f"+{len(diff.added)} / -{len(diff.removed)} / ~{len(diff.changed)} tasks")

    section("Agent ranking for Plot Development")
    task = next(t for t in strategy.tasks if t.step_name == "Plot Development")
    aspects = pipeline.derive_aspects(GOAL, task)
    aspects = add_user_aspect(aspects, "AI Tech Understanding")
    aspects = add_user_aspect(aspects, "Love Element Understanding")
    aspects = set_aspect_selected(aspects, "Storytelling Craft", False)
    matrix = pipeline.score_agents(GOAL, task, aspects, board)
    print("selected aspects: " + ", ".join(aspects.selected_names()))
    for row in rank_rows(matrix, board, task.team, aspects.selected_names()):
        agent = board.get(row.agent_id)
        print(f"  {row.partition:<10} {agent.name:<24} mean {row.mean:.2f}")

    section("Execution")
    record = execute(
        strategy, gateway, "mock",
        config=RuntimeConfig(retry_backoff_seconds=0.0), run_id="run-001", seed=7,
    )
    print(f"status: {record.status.value}; {len(record.action_results)} actions")
    final_id = strategy.tasks[-1].output_object_id
    final = strategy.key_object(final_id)
    print(f"final object {final.name if final else final_id!r}:")
    print("  " + record.object_values[final_id][:100])

    section("Provenance")
    graph = build_trace(record, strategy)
    chain = trace_back(graph, f"object:{final_id}")
    print(f"{len(chain)} predecessors feed the final object; last five:")
    for node in chain[-5:]:
        print(f"  {node}")

    section("Export")
    report = workspace.export_result(record, strategy, "markdown")
    report_path = out_dir / "report.md"
    report_path.write_text(report, encoding="utf-8")
    print(f"wrote {report_path} ({len(report)} chars)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
