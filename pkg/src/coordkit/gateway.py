"""Provider-agnostic completion gateway with schema-gated repair.

One interface covers every model call in the system: render a template,
ask a provider for text, parse it as JSON, validate against the template's
registered output schema plus any semantic check, and if that fails,
re-prompt with the validation errors appended. At most ``repair_attempts``
repairs happen before :class:`SchemaViolationError` surfaces with the last
raw text attached, so no invalid artifact ever escapes the gateway.

The deterministic mock provider makes the whole pipeline testable offline:
it answers from a fixture directory (one file per expected call, matched
by stage + ordinal) or from an in-memory script, and synthesizes a stable
digest-based reply when neither matches.
"""

from __future__ import annotations

import enum
import hashlib
import json
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Protocol

import jsonschema

from .config import GatewayConfig, ProviderConfig
from .errors import (
    DuplicateProviderError,
    MissingBindingError,
    ProviderUnavailableError,
    SchemaViolationError,
)


class Stage(enum.Enum):
    """The prompt stages the gateway knows how to route and mock."""

    PLAN_OUTLINE = "plan_outline"
    AGENT_ASSIGNMENT = "agent_assignment"
    TASK_PROCESS = "task_process"
    ASPECT_DERIVATION = "aspect_derivation"
    AGENT_SCORING = "agent_scoring"
    BRANCH_COMPLETION = "branch_completion"
    ACTION = "action"  # free-text execution calls, not schema-gated


_PLACEHOLDER = re.compile(r"\{\{([a-z][a-z0-9_]*)\}\}")


@dataclass(frozen=True)
class PromptTemplate:
    stage: Stage
    body: str
    schema_id: str | None = None

    @property
    def placeholders(self) -> frozenset[str]:
        return frozenset(_PLACEHOLDER.findall(self.body))


def render(template: PromptTemplate, bindings: dict[str, str]) -> str:
    """Substitute every ``{{name}}`` marker verbatim from ``bindings``."""
    missing = template.placeholders - bindings.keys()
    if missing:
        raise MissingBindingError(sorted(missing)[0])
    return _PLACEHOLDER.sub(lambda m: bindings[m.group(1)], template.body)


@dataclass(frozen=True)
class CompletionRequest:
    template: PromptTemplate
    bindings: dict[str, str]
    provider: str
    temperature: float = 0.7
    seed: int | None = None


@dataclass(frozen=True)
class StructuredResult:
    value: Any
    raw: str
    repair_attempts: int


class Provider(Protocol):
    def complete(self, prompt: str, *, stage: Stage, temperature: float, seed: int | None) -> str: ...


class MockProvider:
    """Deterministic offline provider.

    Resolution order for each call: the in-memory script for the stage,
    then ``<stage>_<ordinal:03d>.json`` in the fixture directory, then a
    synthesized digest line. Ordinals count calls per stage over the
    provider's lifetime.
    """

    def __init__(self, fixture_dir: str | Path | None = None, script: dict[Stage, list[str]] | None = None):
        self.fixture_dir = Path(fixture_dir) if fixture_dir else None
        self.script = {stage: list(items) for stage, items in (script or {}).items()}
        self._calls: dict[Stage, int] = {}
        self._lock = threading.Lock()

    def push(self, stage: Stage, *responses: str) -> None:
        self.script.setdefault(stage, []).extend(responses)

    def complete(self, prompt: str, *, stage: Stage, temperature: float, seed: int | None) -> str:
        with self._lock:
            ordinal = self._calls.get(stage, 0)
            self._calls[stage] = ordinal + 1
        queued = self.script.get(stage)
        if queued:
            return queued.pop(0)
        if self.fixture_dir is not None:
            path = self.fixture_dir / f"{stage.value}_{ordinal:03d}.json"
            if path.exists():
                return path.read_text(encoding="utf-8")
        digest = hashlib.sha256(f"{seed}:{prompt}".encode("utf-8")).hexdigest()[:12]
        return f"[{stage.value}#{ordinal}] {digest}"


class HttpProvider:
    """Minimal remote adapter for OpenAI-style chat completion endpoints."""

    def __init__(self, config: ProviderConfig):
        self.config = config

    def complete(self, prompt: str, *, stage: Stage, temperature: float, seed: int | None) -> str:
        import httpx

        payload: dict[str, Any] = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": temperature,
        }
        if seed is not None:
            payload["seed"] = seed
        headers = {"Content-Type": "application/json"}
        if self.config.credential:
            headers["Authorization"] = f"Bearer {self.config.credential}"
        try:
            response = httpx.post(
                self.config.endpoint, json=payload, headers=headers, timeout=self.config.timeout_seconds
            )
            response.raise_for_status()
            body = response.json()
        except Exception as exc:
            raise ProviderUnavailableError(f"remote provider failed: {exc}")
        try:
            return body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderUnavailableError(f"unexpected response shape: {exc}")


_FENCE = re.compile(r"```(?:json)?\s*(.*?)```", re.DOTALL)


def extract_json(text: str) -> Any:
    """Parse the JSON document in a completion, tolerating code fences."""
    candidate = text.strip()
    fenced = _FENCE.search(candidate)
    if fenced:
        candidate = fenced.group(1).strip()
    if not candidate.startswith(("{", "[")):
        start = min((i for i in (candidate.find("{"), candidate.find("[")) if i >= 0), default=-1)
        if start < 0:
            raise ValueError("no JSON document found in output")
        candidate = candidate[start:]
    return json.loads(candidate)


SemanticCheck = Callable[[Any], list[str]]


class Gateway:
    """Provider registry plus the structured completion loop."""

    def __init__(self, config: GatewayConfig | None = None):
        self.config = config or GatewayConfig()
        self._providers: dict[str, Provider] = {}
        self._schemas: dict[str, dict] = {}
        self._caps: dict[str, threading.Semaphore] = {}

    # -- registries --------------------------------------------------------

    def register_provider(self, provider_id: str, adapter: Provider) -> None:
        if provider_id in self._providers:
            raise DuplicateProviderError(f"provider {provider_id!r} already registered")
        self._providers[provider_id] = adapter
        self._caps[provider_id] = threading.Semaphore(self.config.provider_concurrency)

    def provider(self, provider_id: str) -> Provider:
        try:
            return self._providers[provider_id]
        except KeyError:
            raise ProviderUnavailableError(f"provider {provider_id!r} is not registered")

    def register_schema(self, schema_id: str, schema: dict) -> None:
        self._schemas[schema_id] = schema

    def schema(self, schema_id: str) -> dict:
        return self._schemas[schema_id]

    # -- completion --------------------------------------------------------

    def complete_text(self, provider_id: str, prompt: str, *, stage: Stage, temperature: float, seed: int | None = None) -> str:
        adapter = self.provider(provider_id)
        with self._caps[provider_id]:
            return adapter.complete(prompt, stage=stage, temperature=temperature, seed=seed)

    def complete_structured(self, request: CompletionRequest, semantic_check: SemanticCheck | None = None) -> StructuredResult:
        """Run the prompt and return a schema-valid document, repairing if needed."""
        schema = self._schemas.get(request.template.schema_id)
        if schema is None:
            raise SchemaViolationError(
                f"schema {request.template.schema_id!r} is not registered",
                raw="",
                attempts=0,
                issues=[f"unregistered schema {request.template.schema_id!r}"],
            )
        prompt = render(request.template, request.bindings)
        raw = ""
        for attempt in range(self.config.repair_attempts + 1):
            raw = self.complete_text(
                request.provider, prompt, stage=request.template.stage, temperature=request.temperature, seed=request.seed
            )
            issues = []
            value: Any = None
            try:
                value = extract_json(raw)
            except (ValueError, json.JSONDecodeError) as exc:
                issues.append(f"output is not valid JSON: {exc}")
            if not issues:
                validator = jsonschema.Draft202012Validator(schema)
                issues.extend(
                    f"{'/'.join(str(p) for p in e.absolute_path) or '$'}: {e.message}"
                    for e in sorted(validator.iter_errors(value), key=lambda e: list(map(str, e.absolute_path)))
                )
            if not issues and semantic_check is not None:
                issues.extend(semantic_check(value))
            if not issues:
                return StructuredResult(value=value, raw=raw, repair_attempts=attempt)
            prompt = self._repair_prompt(request, raw, issues)
        raise SchemaViolationError(
            f"output failed validation after {self.config.repair_attempts} repair attempts",
            raw=raw,
            attempts=self.config.repair_attempts,
            issues=issues,
        )

    def _repair_prompt(self, request: CompletionRequest, raw: str, issues: list[str]) -> str:
        base = render(request.template, request.bindings)
        listing = "\n".join(f"- {issue}" for issue in issues)
        return (
            f"{base}\n\n"
            f"Your previous reply was rejected. It was:\n{raw}\n\n"
            f"It failed these checks:\n{listing}\n\n"
            "Reply again with a corrected JSON document that passes every check."
        )
