"""Error types shared across the engine, service, and CLI.

Every error carries a stable machine-readable ``code`` so the HTTP layer
and the CLI can surface the same enumeration.
"""

from __future__ import annotations


class CoordError(Exception):
    """Base class for all domain errors."""

    code = "internal-error"

    def __init__(self, message: str, *, path: str | None = None):
        super().__init__(message)
        self.message = message
        self.path = path


class MissingBindingError(CoordError):
    code = "missing-binding"

    def __init__(self, name: str):
        super().__init__(f"placeholder {name!r} is unbound")
        self.name = name


class DuplicateProviderError(CoordError):
    code = "duplicate-provider"


class ProviderUnavailableError(CoordError):
    code = "provider-unavailable"


class SchemaViolationError(CoordError):
    """Raised when model output still fails validation after all repairs."""

    code = "schema-violation-after-repairs"

    def __init__(self, message: str, *, raw: str, attempts: int, issues: list[str]):
        super().__init__(message)
        self.raw = raw
        self.attempts = attempts
        self.issues = issues


class GenerationFailedError(CoordError):
    code = "generation-failed"

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


class EmptyBoardError(CoordError):
    code = "empty-board"


class DuplicateAspectError(CoordError):
    code = "duplicate-aspect"


class InvalidBranchPointError(CoordError):
    code = "invalid-branch-point"


class UnresolvedReferenceError(CoordError):
    code = "unresolved-reference"


class UnmaterializedInputError(CoordError):
    code = "unmaterialized-input"


class EmptyTeamError(CoordError):
    code = "empty-team-forbidden"


class CorruptProjectError(CoordError):
    code = "corrupt-file"


class BoardSchemaError(CoordError):
    """Agent board import file does not match the expected schema."""

    code = "schema-violation"

    def __init__(self, message: str, *, entries: list[str]):
        super().__init__(message)
        self.entries = entries


class StrategyInvalidError(CoordError):
    """An operation required a strategy with zero validation errors."""

    code = "validation-failed"

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class InvalidRequestError(CoordError):
    code = "invalid-request"


class RunInProgressError(CoordError):
    code = "run-in-progress"


class NotFoundError(CoordError):
    code = "not-found"


# The published enumeration of error codes usable in ApiError envelopes.
ERROR_CODES = (
    "internal-error",
    "invalid-request",
    "missing-binding",
    "duplicate-provider",
    "provider-unavailable",
    "schema-violation-after-repairs",
    "generation-failed",
    "empty-board",
    "duplicate-aspect",
    "invalid-branch-point",
    "unresolved-reference",
    "unmaterialized-input",
    "empty-team-forbidden",
    "corrupt-file",
    "schema-violation",
    "validation-failed",
    "run-in-progress",
    "not-found",
)
