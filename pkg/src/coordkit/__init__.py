"""Structured multi-agent coordination strategies: generate, explore, run.

The package turns a plain-language goal into an executable coordination
strategy for a board of LLM agents: an ordered task plan over named key
objects, a team per task, and a typed action process per task. Strategies
are validated structurally, explorable through branch forests, executable
with full dependency provenance, and persistable as canonical JSON.
"""

from .config import (
    GatewayConfig,
    GenesisConfig,
    ProviderConfig,
    RuntimeConfig,
    ServiceConfig,
    load_service_config,
)
from .errors import (
    ERROR_CODES,
    BoardSchemaError,
    CoordError,
    CorruptProjectError,
    DuplicateAspectError,
    DuplicateProviderError,
    EmptyBoardError,
    EmptyTeamError,
    GenerationFailedError,
    InvalidBranchPointError,
    InvalidRequestError,
    MissingBindingError,
    NotFoundError,
    ProviderUnavailableError,
    RunInProgressError,
    SchemaViolationError,
    StrategyInvalidError,
    UnmaterializedInputError,
    UnresolvedReferenceError,
)
from .gateway import (
    CompletionRequest,
    Gateway,
    HttpProvider,
    MockProvider,
    PromptTemplate,
    Stage,
    StructuredResult,
    extract_json,
    render,
)
from .genesis import (
    Aspect,
    AspectSet,
    BranchRequest,
    GenerationPipeline,
    PlanOutline,
    ScoreMatrix,
    ScoreRow,
    add_user_aspect,
    set_aspect_selected,
    slugify,
)
from .model import (
    ActionSpec,
    AgentBoard,
    AgentProfile,
    Goal,
    InputRef,
    InteractionType,
    KeyObject,
    Origin,
    PlanDiff,
    Ref,
    Strategy,
    TaskProcess,
    TaskSpec,
    ValidationReport,
    closure_edges,
    dependency_closure,
    diff_plans,
    ensure_valid,
    report_to_doc,
    unique_id,
    validate_strategy,
)
from .runtime import (
    ActionResult,
    ExecutionEvent,
    ExecutionRecord,
    RunStatus,
    TraceGraph,
    build_trace,
    execute,
    replay_events,
    resolve_inputs,
    trace_back,
)
from .serialize import (
    VersionStore,
    canonical_bytes,
    content_hash,
    dumps_strategy,
    loads_strategy,
    strategy_from_doc,
    strategy_to_doc,
)
from .workspace import (
    Project,
    export_result,
    import_agent_board,
    load,
    load_record,
    new_project,
    parse_agent_board,
    project_from_doc,
    project_to_doc,
    save,
    save_record,
    set_strategy,
)

__version__ = "0.1.0"
