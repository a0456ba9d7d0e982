"""HTTP service consumed by the studio frontend.

All endpoints live under ``/api/v1`` and speak the canonical camelCase
documents. Generation endpoints enqueue background jobs (poll ``/jobs/{id}``
or stream its status events); execution streams progress over server-sent
events with gapless per-run sequence numbers. Errors always arrive as an
``{"error": {code, message, ...}}`` envelope drawn from the published code
enumeration. Mutating endpoints are idempotent under a client-supplied
request id (``X-Request-Id`` header or ``requestId`` body field).
"""

from __future__ import annotations

import asyncio
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Optional

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel

from . import explore, genesis, runtime, schemas, workspace
from .config import ServiceConfig
from .errors import (
    ERROR_CODES,
    BoardSchemaError,
    CoordError,
    InvalidRequestError,
    NotFoundError,
    RunInProgressError,
    StrategyInvalidError,
)
from .explore import ExplorationSession, SessionKind
from .gateway import Gateway, HttpProvider, MockProvider
from .genesis import BranchRequest, GenerationPipeline, add_user_aspect, set_aspect_selected
from .model import Goal, Strategy, TaskProcess, ensure_valid, report_to_doc
from .runtime import ExecutionRecord, RunStatus, build_trace, execute, trace_back
from .serialize import process_from_doc, strategy_from_doc, strategy_to_doc
from .workspace import Project, project_to_doc

__all__ = ["AppState", "EventBus", "create_app", "build_state", "serve"]

API = "/api/v1"


# ---------------------------------------------------------------------------
# Event plumbing
# ---------------------------------------------------------------------------


class EventBus:
    """Thread-safe append-only event buffer with blocking reads."""

    def __init__(self):
        self._events: list[dict] = []
        self._cond = threading.Condition()
        self._closed = False

    def publish(self, event: dict) -> None:
        with self._cond:
            self._events.append(event)
            self._cond.notify_all()

    def close(self) -> None:
        with self._cond:
            self._closed = True
            self._cond.notify_all()

    def next_seq(self) -> int:
        with self._cond:
            return len(self._events) + 1

    def wait_since(self, index: int, timeout: float) -> tuple[list[dict], bool]:
        with self._cond:
            if len(self._events) <= index and not self._closed:
                self._cond.wait(timeout)
            return self._events[index:], self._closed


def _sse_line(event: dict) -> str:
    body = json.dumps(event, sort_keys=True, ensure_ascii=False)
    return f"id: {event.get('seq', 0)}\nevent: {event.get('kind', 'message')}\ndata: {body}\n\n"


async def _stream_bus(bus: EventBus):
    loop = asyncio.get_running_loop()
    index = 0
    while True:
        batch, closed = await loop.run_in_executor(None, bus.wait_since, index, 0.2)
        for event in batch:
            yield _sse_line(event)
        index += len(batch)
        if closed:
            remaining, _ = bus.wait_since(index, 0.0)
            for event in remaining:
                yield _sse_line(event)
            return


async def _stream_static(events: list[dict]):
    for event in events:
        yield _sse_line(event)


# ---------------------------------------------------------------------------
# Application state
# ---------------------------------------------------------------------------


@dataclass
class Job:
    id: str
    kind: str
    status: str = "pending"
    result: Any = None
    error: Optional[dict] = None
    bus: EventBus = field(default_factory=EventBus)

    def to_doc(self) -> dict:
        return {"id": self.id, "kind": self.kind, "status": self.status, "result": self.result, "error": self.error}


@dataclass
class AppState:
    config: ServiceConfig
    gateway: Gateway
    seed: Optional[int] = None
    projects: dict[str, Project] = field(default_factory=dict)
    records: dict[str, ExecutionRecord] = field(default_factory=dict)
    run_projects: dict[str, str] = field(default_factory=dict)  # run id -> project id
    buses: dict[str, EventBus] = field(default_factory=dict)
    jobs: dict[str, Job] = field(default_factory=dict)
    active_runs: dict[str, str] = field(default_factory=dict)
    executor: ThreadPoolExecutor = field(default_factory=lambda: ThreadPoolExecutor(max_workers=8))
    _locks: dict[str, threading.RLock] = field(default_factory=dict)
    _registry_lock: threading.Lock = field(default_factory=threading.Lock)
    _idempotent: dict = field(default_factory=dict)

    def lock_for(self, project_id: str) -> threading.RLock:
        with self._registry_lock:
            return self._locks.setdefault(project_id, threading.RLock())

    def pipeline(self, provider: Optional[str] = None) -> GenerationPipeline:
        return GenerationPipeline(
            self.gateway,
            provider or self.config.default_provider,
            config=self.config.genesis,
            seed=self.seed,
        )

    def next_job_id(self) -> str:
        with self._registry_lock:
            return f"job-{len(self.jobs) + 1}"


def build_state(config: ServiceConfig | None = None, *, seed: int | None = None) -> AppState:
    config = config or ServiceConfig()
    gateway = Gateway(config.gateway)
    schemas.register_all(gateway)
    gateway.register_provider("mock", MockProvider(fixture_dir=config.mock_fixture_dir))
    for provider_id, provider_config in config.providers.items():
        gateway.register_provider(provider_id, HttpProvider(provider_config))
    return AppState(config=config, gateway=gateway, seed=seed)


# ---------------------------------------------------------------------------
# Error envelopes
# ---------------------------------------------------------------------------

_STATUS_BY_CODE = {
    "not-found": 404,
    "run-in-progress": 409,
    "provider-unavailable": 503,
    "generation-failed": 502,
    "schema-violation-after-repairs": 502,
    "internal-error": 500,
}


def _envelope(exc: CoordError) -> dict:
    error: dict[str, Any] = {"code": exc.code, "message": exc.message}
    if exc.path is not None:
        error["path"] = exc.path
    if isinstance(exc, StrategyInvalidError) and exc.report is not None:
        error["report"] = report_to_doc(exc.report)
    if isinstance(exc, BoardSchemaError):
        error["entries"] = list(exc.entries)
    return {"error": error}


def _status_for(exc: CoordError) -> int:
    return _STATUS_BY_CODE.get(exc.code, 400)


# ---------------------------------------------------------------------------
# Request bodies
# ---------------------------------------------------------------------------


class CreateProjectBody(BaseModel):
    name: str
    goal: str
    requestId: Optional[str] = None


class OpenProjectBody(BaseModel):
    path: str


class SaveProjectBody(BaseModel):
    path: str


class BoardBody(BaseModel):
    agents: list[dict]
    requestId: Optional[str] = None


class GenerateBody(BaseModel):
    kind: str = "full"  # "full" | "outline"
    provider: Optional[str] = None
    requestId: Optional[str] = None


class StageBody(BaseModel):
    provider: Optional[str] = None
    requestId: Optional[str] = None


class EditStrategyBody(BaseModel):
    taskId: str
    stepName: Optional[str] = None
    taskContent: Optional[str] = None
    actionIndex: Optional[int] = None
    instruction: Optional[str] = None
    requestId: Optional[str] = None


class OpenSessionBody(BaseModel):
    kind: str
    taskId: Optional[str] = None
    requestId: Optional[str] = None


class SpawnBody(BaseModel):
    branchPoint: int
    requirement: str
    count: int = 1
    provider: Optional[str] = None
    requestId: Optional[str] = None


class NodeBody(BaseModel):
    nodeId: str
    requestId: Optional[str] = None


class AspectBody(BaseModel):
    name: str
    selected: Optional[bool] = None
    requestId: Optional[str] = None


class TeamBody(BaseModel):
    add: list[str] = []
    remove: list[str] = []
    requestId: Optional[str] = None


class RunBody(BaseModel):
    provider: Optional[str] = None
    requestId: Optional[str] = None


class ExportBody(BaseModel):
    runId: str
    format: str = "markdown"
    requestId: Optional[str] = None


# ---------------------------------------------------------------------------
# App factory
# ---------------------------------------------------------------------------


def create_app(config: ServiceConfig | None = None, *, seed: int | None = None, state: AppState | None = None) -> FastAPI:
    state = state or build_state(config, seed=seed)
    app = FastAPI(title="coordkit", docs_url=None, redoc_url=None)
    app.state.coordkit = state

    @app.exception_handler(CoordError)
    async def coord_error_handler(request: Request, exc: CoordError):
        return JSONResponse(status_code=_status_for(exc), content=_envelope(exc))

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": {"code": "invalid-request", "message": str(exc.errors()[:3])}},
        )

    @app.exception_handler(Exception)
    async def fallback_handler(request: Request, exc: Exception):
        return JSONResponse(status_code=500, content={"error": {"code": "internal-error", "message": str(exc)}})

    # -- helpers -------------------------------------------------------------

    def project_of(project_id: str) -> Project:
        if project_id not in state.projects:
            raise NotFoundError(f"no project {project_id!r}")
        return state.projects[project_id]

    def session_of(project: Project, session_id: str) -> ExplorationSession:
        if session_id not in project.sessions:
            raise NotFoundError(f"no session {session_id!r} in project {project.id!r}")
        return project.sessions[session_id]

    def request_id_of(request: Request, body: Any) -> Optional[str]:
        header = request.headers.get("x-request-id")
        if header:
            return header
        return getattr(body, "requestId", None)

    def idempotent(scope: str, request_id: Optional[str], produce: Callable[[], tuple[int, dict]]) -> JSONResponse:
        key = (scope, request_id)
        if request_id is not None:
            with state._registry_lock:
                if key in state._idempotent:
                    status, payload = state._idempotent[key]
                    return JSONResponse(status_code=status, content=payload)
        status, payload = produce()
        if request_id is not None:
            with state._registry_lock:
                status, payload = state._idempotent.setdefault(key, (status, payload))
        return JSONResponse(status_code=status, content=payload)

    def submit_job(kind: str, work: Callable[[], Any]) -> Job:
        job = Job(id=state.next_job_id(), kind=kind)
        state.jobs[job.id] = job
        job.bus.publish({"seq": 1, "kind": "job-status", "data": {"status": "pending", "jobId": job.id}})

        def runner():
            job.status = "running"
            job.bus.publish({"seq": job.bus.next_seq(), "kind": "job-status", "data": {"status": "running", "jobId": job.id}})
            try:
                job.result = work()
                job.status = "completed"
            except CoordError as exc:
                job.status = "failed"
                job.error = _envelope(exc)["error"]
            except Exception as exc:
                job.status = "failed"
                job.error = {"code": "internal-error", "message": str(exc)}
            job.bus.publish(
                {"seq": job.bus.next_seq(), "kind": "job-status", "data": {"status": job.status, "jobId": job.id}}
            )
            job.bus.close()

        state.executor.submit(runner)
        return job

    def install_strategy(project: Project, strategy: Strategy) -> str:
        with state.lock_for(project.id):
            return workspace.set_strategy(project, strategy)

    def session_doc_with_payloads(project: Project, session: ExplorationSession) -> dict:
        doc = explore.session_to_doc(session)
        doc["payloads"] = {
            node.payload_hash: project.versions.get(node.payload_hash) for node in session.nodes.values()
        }
        return doc

    # -- meta ------------------------------------------------------------------

    @app.get(API + "/health")
    async def health():
        return {"ok": True}

    @app.get(API + "/meta")
    async def meta():
        return {"errorCodes": list(ERROR_CODES), "defaultProvider": state.config.default_provider}

    # -- projects ----------------------------------------------------------------

    @app.post(API + "/projects")
    async def create_project(body: CreateProjectBody, request: Request):
        def produce():
            project = workspace.new_project(body.name, Goal(body.goal))
            if project.id in state.projects:
                project.id = f"{project.id}-{len(state.projects) + 1}"
            state.projects[project.id] = project
            return 201, {"id": project.id, "name": project.name, "goal": project.goal.text}

        return idempotent("projects", request_id_of(request, body), produce)

    @app.post(API + "/projects/open")
    async def open_project(body: OpenProjectBody):
        project = workspace.load(body.path)
        state.projects[project.id] = project
        return {"id": project.id, "name": project.name, "goal": project.goal.text}

    @app.post(API + "/projects/{project_id}/save")
    async def save_project(project_id: str, body: SaveProjectBody):
        project = project_of(project_id)
        with state.lock_for(project_id):
            path = workspace.save(project, body.path)
        return {"path": path}

    @app.get(API + "/projects/{project_id}")
    async def get_project(project_id: str):
        return project_to_doc(project_of(project_id))

    @app.put(API + "/projects/{project_id}/board")
    async def set_board(project_id: str, body: BoardBody, request: Request):
        project = project_of(project_id)

        def produce():
            board = workspace.parse_agent_board(body.agents)
            with state.lock_for(project_id):
                project.board = board
                if project.current_strategy is not None:
                    strategy = replace(project.strategy(), board=board)
                    workspace.set_strategy(project, strategy)
            return 200, {"agentBoard": {"agents": [vars(a) for a in board.agents]}}

        return idempotent(project_id, request_id_of(request, body), produce)

    @app.get(API + "/projects/{project_id}/strategy")
    async def get_strategy(project_id: str):
        return strategy_to_doc(project_of(project_id).strategy())

    @app.patch(API + "/projects/{project_id}/strategy")
    async def edit_strategy(project_id: str, body: EditStrategyBody, request: Request):
        project = project_of(project_id)

        def produce():
            with state.lock_for(project_id):
                strategy = project.strategy()
                index = strategy.task_index(body.taskId)
                if index is None:
                    raise NotFoundError(f"no task {body.taskId!r}")
                task = strategy.tasks[index]
                if body.stepName is not None:
                    task = replace(task, step_name=body.stepName)
                if body.taskContent is not None:
                    task = replace(task, task_content=body.taskContent)
                if body.instruction is not None:
                    if body.actionIndex is None or not (0 <= body.actionIndex < len(task.process)):
                        raise InvalidRequestError("instruction edits need a valid actionIndex")
                    action = replace(task.process[body.actionIndex], instruction=body.instruction)
                    process = list(task.process)
                    process[body.actionIndex] = action
                    task = replace(task, process=tuple(process))
                strategy = strategy.with_task(index, task)
                version = install_strategy(project, strategy)
            return 200, {"strategyVersion": version}

        return idempotent(project_id, request_id_of(request, body), produce)

    # -- generation jobs -----------------------------------------------------------

    @app.post(API + "/projects/{project_id}/generate", status_code=202)
    async def generate(project_id: str, body: GenerateBody, request: Request):
        project = project_of(project_id)
        if body.kind not in ("full", "outline"):
            raise InvalidRequestError(f"unknown generation kind {body.kind!r}")

        def work():
            pipeline = state.pipeline(body.provider)
            if body.kind == "outline":
                outline = pipeline.generate_plan_outline(project.goal, ())
                strategy = Strategy(
                    goal=project.goal, key_objects=outline.key_objects, tasks=outline.tasks, board=project.board
                )
            else:
                strategy = pipeline.generate_full_strategy(project.goal, (), project.board)
            version = install_strategy(project, strategy)
            return {"strategyVersion": version}

        def produce():
            job = submit_job(f"generate-{body.kind}", work)
            return 202, {"jobId": job.id}

        return idempotent(project_id, request_id_of(request, body), produce)

    @app.post(API + "/projects/{project_id}/tasks/{task_id}/assign", status_code=202)
    async def assign_task(project_id: str, task_id: str, body: StageBody, request: Request):
        project = project_of(project_id)

        def work():
            with state.lock_for(project_id):
                strategy = project.strategy()
                index = strategy.task_index(task_id)
                if index is None:
                    raise NotFoundError(f"no task {task_id!r}")
                team = state.pipeline(body.provider).assign_agents(
                    strategy.goal, strategy.tasks[index], strategy.board
                )
                strategy = strategy.with_task(index, replace(strategy.tasks[index], team=team, process=()))
                version = install_strategy(project, strategy)
            return {"team": list(team), "strategyVersion": version}

        def produce():
            job = submit_job("assign", work)
            return 202, {"jobId": job.id}

        return idempotent(project_id, request_id_of(request, body), produce)

    @app.post(API + "/projects/{project_id}/tasks/{task_id}/process", status_code=202)
    async def specify_process(project_id: str, task_id: str, body: StageBody, request: Request):
        project = project_of(project_id)

        def work():
            with state.lock_for(project_id):
                strategy = project.strategy()
                index = strategy.task_index(task_id)
                if index is None:
                    raise NotFoundError(f"no task {task_id!r}")
                task = strategy.tasks[index]
                process = state.pipeline(body.provider).generate_task_process(
                    strategy.goal, task, task.team, strategy.board, strategy=strategy
                )
                strategy = strategy.with_task(index, replace(task, process=process))
                version = install_strategy(project, strategy)
            return {"strategyVersion": version}

        def produce():
            job = submit_job("process", work)
            return 202, {"jobId": job.id}

        return idempotent(project_id, request_id_of(request, body), produce)

    @app.get(API + "/jobs/{job_id}")
    async def get_job(job_id: str):
        if job_id not in state.jobs:
            raise NotFoundError(f"no job {job_id!r}")
        return state.jobs[job_id].to_doc()

    @app.get(API + "/jobs/{job_id}/events")
    async def job_events(job_id: str):
        if job_id not in state.jobs:
            raise NotFoundError(f"no job {job_id!r}")
        return StreamingResponse(_stream_bus(state.jobs[job_id].bus), media_type="text/event-stream")

    # -- exploration sessions ---------------------------------------------------------

    @app.post(API + "/projects/{project_id}/sessions", status_code=201)
    async def open_session(project_id: str, body: OpenSessionBody, request: Request):
        project = project_of(project_id)

        def produce():
            try:
                kind = SessionKind(body.kind)
            except ValueError:
                raise InvalidRequestError(f"unknown session kind {body.kind!r}")
            with state.lock_for(project_id):
                strategy = project.strategy()
                if kind is SessionKind.PLAN_OUTLINE:
                    seed_payload: Any = strategy
                    task_id = None
                else:
                    if body.taskId is None:
                        raise InvalidRequestError("task-scoped sessions need a taskId")
                    task = strategy.task(body.taskId)
                    if task is None:
                        raise NotFoundError(f"no task {body.taskId!r}")
                    task_id = task.id
                    if kind is SessionKind.TASK_PROCESS:
                        seed_payload = TaskProcess(task_id=task.id, actions=task.process)
                    else:
                        seed_payload = task.team
                session = explore.open_session(
                    project.versions, project.next_session_id(), kind, seed_payload, task_id=task_id
                )
                project.sessions[session.id] = session
                return 201, session_doc_with_payloads(project, session)

        return idempotent(project_id, request_id_of(request, body), produce)

    @app.get(API + "/projects/{project_id}/sessions/{session_id}")
    async def get_session(project_id: str, session_id: str):
        project = project_of(project_id)
        return session_doc_with_payloads(project, session_of(project, session_id))

    @app.post(API + "/projects/{project_id}/sessions/{session_id}/branches", status_code=202)
    async def spawn(project_id: str, session_id: str, body: SpawnBody, request: Request):
        project = project_of(project_id)
        session = session_of(project, session_id)

        def work():
            with state.lock_for(project_id):
                baseline_doc = project.versions.get(session.node(session.active_baseline).payload_hash)
                strategy = project.strategy()
                if session.kind is SessionKind.PLAN_OUTLINE:
                    request_obj = BranchRequest(
                        baseline=strategy_from_doc(baseline_doc),
                        branch_point=body.branchPoint,
                        requirement=body.requirement,
                        count=body.count,
                    )
                    node_ids = explore.spawn_branches(
                        project.versions, session, state.pipeline(body.provider), request_obj
                    )
                else:
                    task = strategy.task(session.task_id or "")
                    if task is None:
                        raise NotFoundError(f"session task {session.task_id!r} is gone")
                    request_obj = BranchRequest(
                        baseline=process_from_doc(baseline_doc),
                        branch_point=body.branchPoint,
                        requirement=body.requirement,
                        count=body.count,
                    )
                    node_ids = explore.spawn_branches(
                        project.versions,
                        session,
                        state.pipeline(body.provider),
                        request_obj,
                        goal=strategy.goal,
                        task=task,
                        board=strategy.board,
                        strategy=strategy,
                    )
            return {"nodeIds": node_ids, "session": session_doc_with_payloads(project, session)}

        def produce():
            job = submit_job("spawn-branches", work)
            return 202, {"jobId": job.id}

        return idempotent(f"{project_id}/{session_id}", request_id_of(request, body), produce)

    @app.post(API + "/projects/{project_id}/sessions/{session_id}/baseline")
    async def set_baseline(project_id: str, session_id: str, body: NodeBody, request: Request):
        project = project_of(project_id)
        session = session_of(project, session_id)

        def produce():
            with state.lock_for(project_id):
                explore.set_baseline(session, body.nodeId)
            return 200, session_doc_with_payloads(project, session)

        return idempotent(f"{project_id}/{session_id}", request_id_of(request, body), produce)

    @app.post(API + "/projects/{project_id}/sessions/{session_id}/adopt")
    async def adopt_node(project_id: str, session_id: str, body: NodeBody, request: Request):
        project = project_of(project_id)
        session = session_of(project, session_id)

        def produce():
            with state.lock_for(project_id):
                payload = explore.adopt(project.versions, session, body.nodeId)
                if session.kind is SessionKind.PLAN_OUTLINE:
                    strategy = payload
                elif session.kind is SessionKind.TASK_PROCESS:
                    strategy = _install_process(project.strategy(), payload)
                else:
                    strategy = _install_team(project.strategy(), session.task_id or "", payload)
                version = install_strategy(project, strategy)
            return 200, {"strategyVersion": version, "session": session_doc_with_payloads(project, session)}

        return idempotent(f"{project_id}/{session_id}", request_id_of(request, body), produce)

    @app.post(API + "/projects/{project_id}/sessions/{session_id}/derive-aspects", status_code=202)
    async def derive_aspects(project_id: str, session_id: str, body: StageBody, request: Request):
        project = project_of(project_id)
        session = session_of(project, session_id)

        def work():
            with state.lock_for(project_id):
                strategy = project.strategy()
                task = strategy.task(session.task_id or "")
                if task is None:
                    raise NotFoundError(f"session task {session.task_id!r} is gone")
                derived = state.pipeline(body.provider).derive_aspects(strategy.goal, task)
                user_aspects = tuple(a for a in session.aspects.aspects if a.source == "user")
                session.aspects = genesis.AspectSet(derived.aspects + user_aspects)
            return {"aspects": [vars(a) for a in session.aspects.aspects]}

        def produce():
            job = submit_job("derive-aspects", work)
            return 202, {"jobId": job.id}

        return idempotent(f"{project_id}/{session_id}", request_id_of(request, body), produce)

    @app.post(API + "/projects/{project_id}/sessions/{session_id}/aspects")
    async def add_aspect(project_id: str, session_id: str, body: AspectBody, request: Request):
        project = project_of(project_id)
        session = session_of(project, session_id)

        def produce():
            with state.lock_for(project_id):
                session.aspects = add_user_aspect(session.aspects, body.name)
            return 200, {"aspects": [vars(a) for a in session.aspects.aspects]}

        return idempotent(f"{project_id}/{session_id}", request_id_of(request, body), produce)

    @app.patch(API + "/projects/{project_id}/sessions/{session_id}/aspects")
    async def toggle_aspect(project_id: str, session_id: str, body: AspectBody, request: Request):
        project = project_of(project_id)
        session = session_of(project, session_id)

        def produce():
            if body.selected is None:
                raise InvalidRequestError("selected must be true or false")
            with state.lock_for(project_id):
                session.aspects = set_aspect_selected(session.aspects, body.name, body.selected)
            return 200, {"aspects": [vars(a) for a in session.aspects.aspects]}

        return idempotent(f"{project_id}/{session_id}", request_id_of(request, body), produce)

    @app.post(API + "/projects/{project_id}/sessions/{session_id}/score", status_code=202)
    async def score(project_id: str, session_id: str, body: StageBody, request: Request):
        project = project_of(project_id)
        session = session_of(project, session_id)

        def work():
            with state.lock_for(project_id):
                strategy = project.strategy()
                task = strategy.task(session.task_id or "")
                if task is None:
                    raise NotFoundError(f"session task {session.task_id!r} is gone")
                session.matrix = state.pipeline(body.provider).score_agents(
                    strategy.goal, task, session.aspects, strategy.board
                )
            return {"matrix": explore.session_to_doc(session).get("matrix")}

        def produce():
            job = submit_job("score", work)
            return 202, {"jobId": job.id}

        return idempotent(f"{project_id}/{session_id}", request_id_of(request, body), produce)

    @app.get(API + "/projects/{project_id}/sessions/{session_id}/rank")
    async def rank(project_id: str, session_id: str):
        project = project_of(project_id)
        session = session_of(project, session_id)
        strategy = project.strategy()
        rows = explore.rank_agents(session, strategy.board)
        matrix = session.matrix
        out = []
        for row in rows:
            agent = strategy.board.get(row.agent_id)
            score_row = matrix.row(row.agent_id) if matrix else None
            out.append(
                {
                    "agentId": row.agent_id,
                    "name": agent.name if agent else row.agent_id,
                    "partition": row.partition,
                    "mean": row.mean,
                    "scores": dict(score_row.scores) if score_row else {},
                    "rationales": dict(score_row.rationales) if score_row else {},
                }
            )
        return {"rows": out, "selectedAspects": list(session.aspects.selected_names())}

    @app.post(API + "/projects/{project_id}/sessions/{session_id}/team")
    async def edit_team(project_id: str, session_id: str, body: TeamBody, request: Request):
        project = project_of(project_id)
        session = session_of(project, session_id)

        def produce():
            with state.lock_for(project_id):
                strategy = project.strategy()
                team = explore.edit_team(
                    project.versions, session, strategy.board, add=tuple(body.add), remove=tuple(body.remove)
                )
            return 200, {"team": list(team)}

        return idempotent(f"{project_id}/{session_id}", request_id_of(request, body), produce)

    # -- execution ---------------------------------------------------------------

    @app.post(API + "/projects/{project_id}/runs", status_code=202)
    async def start_run(project_id: str, body: RunBody, request: Request):
        project = project_of(project_id)

        def produce():
            with state.lock_for(project_id):
                active = state.active_runs.get(project_id)
                if active is not None:
                    raise RunInProgressError(f"run {active!r} is still in progress")
                strategy = project.strategy()
                ensure_valid(strategy)
                run_id = f"run-{len(state.records) + len(state.active_runs) + 1}"
                state.active_runs[project_id] = run_id
                state.run_projects[run_id] = project_id
                bus = EventBus()
                state.buses[run_id] = bus
            provider = body.provider or state.config.default_provider

            def run_worker():
                try:
                    record = execute(
                        strategy,
                        state.gateway,
                        provider,
                        config=state.config.runtime,
                        run_id=run_id,
                        seed=state.seed,
                        on_event=lambda e: bus.publish(e.to_doc()),
                    )
                except Exception as exc:
                    record = ExecutionRecord(id=run_id, strategy_version="", status=RunStatus.FAILED, error=str(exc))
                    bus.publish({"seq": 1, "kind": "run-failed", "data": {"error": str(exc)}})
                state.records[run_id] = record
                project.run_index[run_id] = f"runs/{run_id}.json"
                state.active_runs.pop(project_id, None)
                bus.close()

            state.executor.submit(run_worker)
            return 202, {"runId": run_id}

        return idempotent(project_id, request_id_of(request, body), produce)

    @app.get(API + "/projects/{project_id}/runs")
    async def list_runs(project_id: str):
        project = project_of(project_id)
        runs = []
        for run_id in project.run_index:
            record = state.records.get(run_id)
            runs.append({"id": run_id, "status": record.status.value if record else "running"})
        return {"runs": runs}

    @app.get(API + "/runs/{run_id}")
    async def get_run(run_id: str):
        record = state.records.get(run_id)
        if record is None:
            if run_id in state.buses:
                return {"id": run_id, "status": RunStatus.RUNNING.value}
            raise NotFoundError(f"no run {run_id!r}")
        return runtime.record_to_doc(record)

    @app.get(API + "/runs/{run_id}/events")
    async def run_events(run_id: str):
        bus = state.buses.get(run_id)
        if bus is not None:
            return StreamingResponse(_stream_bus(bus), media_type="text/event-stream")
        record = state.records.get(run_id)
        if record is None:
            raise NotFoundError(f"no run {run_id!r}")
        return StreamingResponse(
            _stream_static([e.to_doc() for e in record.events]), media_type="text/event-stream"
        )

    @app.get(API + "/runs/{run_id}/trace")
    async def get_trace(run_id: str, node: Optional[str] = Query(default=None)):
        record = state.records.get(run_id)
        if record is None:
            raise NotFoundError(f"no run {run_id!r}")
        project = state.projects.get(state.run_projects.get(run_id, ""))
        if project is None:
            raise NotFoundError(f"run {run_id!r} has no project")
        strategy = strategy_from_doc(project.versions.get(record.strategy_version))
        graph = build_trace(record, strategy)
        doc: dict[str, Any] = {"nodes": list(graph.nodes), "edges": [list(e) for e in graph.edges]}
        if node is not None:
            doc["traceBack"] = list(trace_back(graph, node))
        return doc

    # -- export ---------------------------------------------------------------------

    @app.post(API + "/projects/{project_id}/export")
    async def export(project_id: str, body: ExportBody):
        project = project_of(project_id)
        record = state.records.get(body.runId)
        if record is None:
            raise NotFoundError(f"no run {body.runId!r}")
        strategy = strategy_from_doc(project.versions.get(record.strategy_version))
        return {"document": workspace.export_result(record, strategy, body.format)}

    return app


def _install_process(strategy: Strategy, process: TaskProcess) -> Strategy:
    index = strategy.task_index(process.task_id)
    if index is None:
        raise NotFoundError(f"no task {process.task_id!r}")
    return strategy.with_task(index, replace(strategy.tasks[index], process=process.actions))


def _install_team(strategy: Strategy, task_id: str, team: tuple[str, ...]) -> Strategy:
    index = strategy.task_index(task_id)
    if index is None:
        raise NotFoundError(f"no task {task_id!r}")
    task = strategy.tasks[index]
    # Actions by agents no longer on the team would break validity; the
    # process must then be redrawn from scratch.
    process = task.process if all(a.agent_id in team for a in task.process) else ()
    return strategy.with_task(index, replace(task, team=team, process=process))


def serve(config: ServiceConfig | None = None, *, seed: int | None = None) -> None:
    """Run the service with uvicorn (blocking)."""
    import uvicorn

    config = config or ServiceConfig()
    uvicorn.run(create_app(config, seed=seed), host=config.host, port=config.port, log_level="warning")
