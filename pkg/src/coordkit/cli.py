"""Command-line interface covering the whole pipeline headlessly.

Every subcommand operates on a project file, loads it, applies one step,
and saves it back; run logs land in a ``runs/`` directory next to the
project. Failures print ``<error-code>: <message>`` on stderr and exit
nonzero.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from . import explore, schemas, workspace
from .config import GatewayConfig, GenesisConfig, RuntimeConfig, load_service_config
from .errors import CoordError, InvalidRequestError, NotFoundError
from .explore import SessionKind
from .gateway import Gateway, HttpProvider, MockProvider
from .genesis import BranchRequest, GenerationPipeline, add_user_aspect
from .model import Goal, KeyObject, Origin, Strategy, TaskProcess, validate_strategy
from .runtime import build_trace, execute, trace_back
from .serialize import process_from_doc, strategy_from_doc

__all__ = ["main", "console_main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coordkit", description="Design and run multi-agent coordination strategies.")
    parser.add_argument("--provider", default=None, help="LLM provider id (default: mock)")
    parser.add_argument("--fixtures", default=None, help="fixture directory for the mock provider")
    parser.add_argument("--seed", type=int, default=None, help="seed for deterministic mock output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="create a new project file")
    p.add_argument("--project", required=True)
    p.add_argument("--name", required=True)
    p.add_argument("--goal", required=True)
    p.add_argument("--initial", action="append", default=[], metavar="NAME=VALUE", help="initial key object")

    p = sub.add_parser("board", help="agent board commands")
    board_sub = p.add_subparsers(dest="board_command", required=True)
    b = board_sub.add_parser("import", help="import agents from a JSON file")
    b.add_argument("file")
    b.add_argument("--project", required=True)

    p = sub.add_parser("generate", help="run the full three-stage generation")
    p.add_argument("--project", required=True)
    p.add_argument("--goal", default=None, help="override the project goal")

    p = sub.add_parser("branch", help="spawn exploration branches")
    branch_sub = p.add_subparsers(dest="branch_command", required=True)
    for scope in ("plan", "process"):
        b = branch_sub.add_parser(scope)
        b.add_argument("--project", required=True)
        b.add_argument("--requirement", required=True)
        b.add_argument("--count", type=int, default=1)
        b.add_argument("--point", type=int, default=0, help="branch point (kept prefix length)")
        b.add_argument("--baseline", default=None, help="node id to re-anchor the baseline first")
        if scope == "process":
            b.add_argument("--task", required=True)

    p = sub.add_parser("adopt", help="install a branch node into the working strategy")
    p.add_argument("--project", required=True)
    p.add_argument("--session", required=True)
    p.add_argument("--node", required=True)

    p = sub.add_parser("assign", help="regenerate one task's team (and its process)")
    p.add_argument("--project", required=True)
    p.add_argument("--task", required=True)

    p = sub.add_parser("score", help="derive aspects and score the board for a task")
    p.add_argument("--project", required=True)
    p.add_argument("--task", required=True)
    p.add_argument("--aspects", default=None, help="comma-separated extra aspects")

    p = sub.add_parser("run", help="execute the current strategy")
    p.add_argument("--project", required=True)

    p = sub.add_parser("trace", help="print the dependency predecessors of a node")
    p.add_argument("--project", required=True)
    p.add_argument("--run", required=True)
    p.add_argument("--node", required=True, help="object:<id> or action:<taskId>:<index>")

    p = sub.add_parser("export", help="export a run")
    p.add_argument("--project", required=True)
    p.add_argument("--run", required=True)
    p.add_argument("--format", choices=("markdown", "json"), default="markdown")
    p.add_argument("--out", default=None)

    p = sub.add_parser("validate", help="validate the current strategy")
    p.add_argument("--project", required=True)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--config", default=None)
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)

    return parser


# ---------------------------------------------------------------------------
# Shared wiring
# ---------------------------------------------------------------------------


def _gateway(args: argparse.Namespace) -> tuple[Gateway, str]:
    config = load_service_config(env=os.environ)
    gateway = Gateway(GatewayConfig())
    schemas.register_all(gateway)
    fixtures = args.fixtures or config.mock_fixture_dir
    gateway.register_provider("mock", MockProvider(fixture_dir=fixtures))
    for provider_id, provider_config in config.providers.items():
        gateway.register_provider(provider_id, HttpProvider(provider_config))
    provider = args.provider or config.default_provider
    return gateway, provider


def _pipeline(args: argparse.Namespace) -> tuple[GenerationPipeline, Gateway, str]:
    gateway, provider = _gateway(args)
    return GenerationPipeline(gateway, provider, config=GenesisConfig(), seed=args.seed), gateway, provider


def _runs_dir(project_path: str) -> str:
    return os.path.join(os.path.dirname(os.path.abspath(project_path)), "runs")


def _find_session(project: workspace.Project, kind: SessionKind, task_id: Optional[str] = None):
    for session in project.sessions.values():
        if session.kind is kind and session.task_id == task_id:
            return session
    return None


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_init(args) -> int:
    initials = []
    taken: set[str] = set()
    from .genesis import slugify
    from .model import unique_id

    for pair in args.initial:
        if "=" not in pair:
            raise InvalidRequestError(f"--initial takes NAME=VALUE, got {pair!r}")
        name, value = pair.split("=", 1)
        object_id = unique_id(f"ko-{slugify(name)}", taken)
        taken.add(object_id)
        initials.append(KeyObject(id=object_id, name=name, description="", origin=Origin.initial(), value=value))
    project = workspace.new_project(args.name, Goal(args.goal))
    if initials:
        workspace.set_strategy(project, Strategy(goal=project.goal, key_objects=tuple(initials)))
    workspace.save(project, args.project)
    print(f"wrote {args.project}")
    return 0


def _cmd_board_import(args) -> int:
    project = workspace.load(args.project)
    board = workspace.import_agent_board(args.file)
    project.board = board
    if project.current_strategy is not None:
        from dataclasses import replace

        workspace.set_strategy(project, replace(project.strategy(), board=board))
    workspace.save(project, args.project)
    print(f"imported {len(board.agents)} agents")
    return 0


def _cmd_generate(args) -> int:
    project = workspace.load(args.project)
    if args.goal is not None:
        project.goal = Goal(args.goal)
    pipeline, _gw, _provider = _pipeline(args)
    initials = ()
    if project.current_strategy is not None:
        initials = project.strategy().initial_objects()
    strategy = pipeline.generate_full_strategy(project.goal, tuple(initials), project.board)
    version = workspace.set_strategy(project, strategy)
    workspace.save(project, args.project)
    print(f"strategy {version[:12]} tasks={len(strategy.tasks)}")
    return 0


def _cmd_branch(args) -> int:
    project = workspace.load(args.project)
    pipeline, _gw, _provider = _pipeline(args)
    strategy = project.strategy()
    if args.branch_command == "plan":
        session = _find_session(project, SessionKind.PLAN_OUTLINE)
        if session is None:
            session = explore.open_session(
                project.versions, project.next_session_id(), SessionKind.PLAN_OUTLINE, strategy
            )
            project.sessions[session.id] = session
        if args.baseline:
            explore.set_baseline(session, args.baseline)
        baseline = strategy_from_doc(project.versions.get(session.node(session.active_baseline).payload_hash))
        request = BranchRequest(
            baseline=baseline, branch_point=args.point, requirement=args.requirement, count=args.count
        )
        node_ids = explore.spawn_branches(project.versions, session, pipeline, request)
    else:
        task = strategy.task(args.task)
        if task is None:
            raise NotFoundError(f"no task {args.task!r}")
        session = _find_session(project, SessionKind.TASK_PROCESS, task.id)
        if session is None:
            session = explore.open_session(
                project.versions,
                project.next_session_id(),
                SessionKind.TASK_PROCESS,
                TaskProcess(task_id=task.id, actions=task.process),
                task_id=task.id,
            )
            project.sessions[session.id] = session
        if args.baseline:
            explore.set_baseline(session, args.baseline)
        baseline = process_from_doc(project.versions.get(session.node(session.active_baseline).payload_hash))
        request = BranchRequest(
            baseline=baseline, branch_point=args.point, requirement=args.requirement, count=args.count
        )
        node_ids = explore.spawn_branches(
            project.versions, session, pipeline, request,
            goal=strategy.goal, task=task, board=strategy.board, strategy=strategy,
        )
    workspace.save(project, args.project)
    print(f"session {session.id}")
    for node_id in node_ids:
        print(node_id)
    return 0


def _cmd_adopt(args) -> int:
    project = workspace.load(args.project)
    if args.session not in project.sessions:
        raise NotFoundError(f"no session {args.session!r}")
    session = project.sessions[args.session]
    payload = explore.adopt(project.versions, session, args.node)
    strategy = project.strategy()
    if session.kind is SessionKind.PLAN_OUTLINE:
        strategy = payload
    elif session.kind is SessionKind.TASK_PROCESS:
        from .server import _install_process

        strategy = _install_process(strategy, payload)
    else:
        from .server import _install_team

        strategy = _install_team(strategy, session.task_id or "", payload)
    version = workspace.set_strategy(project, strategy)
    workspace.save(project, args.project)
    print(f"strategy {version[:12]}")
    return 0


def _cmd_assign(args) -> int:
    from dataclasses import replace

    project = workspace.load(args.project)
    pipeline, _gw, _provider = _pipeline(args)
    strategy = project.strategy()
    index = strategy.task_index(args.task)
    if index is None:
        raise NotFoundError(f"no task {args.task!r}")
    task = strategy.tasks[index]
    team = pipeline.assign_agents(strategy.goal, task, strategy.board)
    task = replace(task, team=team)
    # The old process may cite agents no longer on the team; redraw it.
    process = pipeline.generate_task_process(strategy.goal, task, team, strategy.board, strategy=strategy)
    strategy = strategy.with_task(index, replace(task, process=process))
    version = workspace.set_strategy(project, strategy)
    workspace.save(project, args.project)
    names = [a.name for a in (strategy.board.get(i) for i in team) if a is not None]
    print(f"team: {', '.join(names)}")
    print(f"strategy {version[:12]}")
    return 0


def _cmd_score(args) -> int:
    project = workspace.load(args.project)
    pipeline, _gw, _provider = _pipeline(args)
    strategy = project.strategy()
    task = strategy.task(args.task)
    if task is None:
        raise NotFoundError(f"no task {args.task!r}")
    session = _find_session(project, SessionKind.AGENT_ASSIGNMENT, task.id)
    if session is None:
        session = explore.open_session(
            project.versions, project.next_session_id(), SessionKind.AGENT_ASSIGNMENT, task.team, task_id=task.id
        )
        project.sessions[session.id] = session
    if not session.aspects.aspects:
        session.aspects = pipeline.derive_aspects(strategy.goal, task)
    if args.aspects:
        for name in args.aspects.split(","):
            name = name.strip()
            if name and name not in session.aspects.names():
                session.aspects = add_user_aspect(session.aspects, name)
    session.matrix = pipeline.score_agents(strategy.goal, task, session.aspects, strategy.board)
    rows = explore.rank_agents(session, strategy.board)
    workspace.save(project, args.project)
    print("aspects: " + ", ".join(session.aspects.selected_names()))
    for row in rows:
        agent = strategy.board.get(row.agent_id)
        name = agent.name if agent else row.agent_id
        print(f"{row.partition:<10} {name:<24} {row.mean:.2f}")
    return 0


def _cmd_run(args) -> int:
    project = workspace.load(args.project)
    gateway, provider = _gateway(args)
    strategy = project.strategy()
    run_id = project.next_run_id()
    record = execute(
        strategy, gateway, provider, config=RuntimeConfig(), run_id=run_id, seed=args.seed
    )
    runs_dir = _runs_dir(args.project)
    path = workspace.save_record(record, runs_dir)
    project.run_index[run_id] = os.path.relpath(path, os.path.dirname(os.path.abspath(args.project)))
    workspace.save(project, args.project)
    print(f"{run_id} {record.status.value} actions={len(record.action_results)}")
    if record.status.value != "completed":
        print(f"failed at {record.failed_at}: {record.error}", file=sys.stderr)
        return 1
    return 0


def _load_run(project: workspace.Project, project_path: str, run_id: str):
    if run_id not in project.run_index:
        raise NotFoundError(f"no run {run_id!r} in this project")
    log_path = os.path.join(os.path.dirname(os.path.abspath(project_path)), project.run_index[run_id])
    return workspace.load_record(log_path)


def _cmd_trace(args) -> int:
    project = workspace.load(args.project)
    record = _load_run(project, args.project, args.run)
    strategy = strategy_from_doc(project.versions.get(record.strategy_version))
    graph = build_trace(record, strategy)
    node = args.node if ":" in args.node else f"object:{args.node}"
    for predecessor in trace_back(graph, node):
        print(predecessor)
    return 0


def _cmd_export(args) -> int:
    project = workspace.load(args.project)
    record = _load_run(project, args.project, args.run)
    strategy = strategy_from_doc(project.versions.get(record.strategy_version))
    document = workspace.export_result(record, strategy, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(document)
        print(f"wrote {args.out}")
    else:
        print(document, end="")
    return 0


def _cmd_validate(args) -> int:
    project = workspace.load(args.project)
    report = validate_strategy(project.strategy())
    for code, path, message in report.errors:
        print(f"error {code} at {path}: {message}")
    for code, path, message in report.warnings:
        print(f"warning {code} at {path}: {message}")
    if report.ok:
        print("valid")
        return 0
    return 1


def _cmd_serve(args) -> int:
    from .server import serve

    config = load_service_config(args.config, env=os.environ)
    overrides = {}
    if args.host is not None:
        overrides["host"] = args.host
    if args.port is not None:
        overrides["port"] = args.port
    if args.fixtures is not None:
        overrides["mock_fixture_dir"] = args.fixtures
    if args.provider is not None:
        overrides["default_provider"] = args.provider
    if overrides:
        from dataclasses import replace

        config = replace(config, **overrides)
    serve(config, seed=args.seed)
    return 0


_HANDLERS = {
    "init": _cmd_init,
    "generate": _cmd_generate,
    "branch": _cmd_branch,
    "adopt": _cmd_adopt,
    "assign": _cmd_assign,
    "score": _cmd_score,
    "run": _cmd_run,
    "trace": _cmd_trace,
    "export": _cmd_export,
    "validate": _cmd_validate,
    "serve": _cmd_serve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "board":
            return _cmd_board_import(args)
        return _HANDLERS[args.command](args)
    except CoordError as exc:
        print(f"{exc.code}: {exc.message}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main(sys.argv[1:]))
