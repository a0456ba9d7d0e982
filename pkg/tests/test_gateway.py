"""Prompt templating, JSON extraction, the mock provider, and repair loops."""

from __future__ import annotations

import json

import pytest

from coordkit.errors import MissingBindingError, ProviderUnavailableError, SchemaViolationError
from coordkit.gateway import (
    CompletionRequest,
    Gateway,
    MockProvider,
    PromptTemplate,
    Stage,
    extract_json,
    render,
)

from conftest import NOVEL, make_gateway


SIMPLE = PromptTemplate(stage=Stage.PLAN_OUTLINE, body="Goal: {{goal}}\nStyle: {{style}}", schema_id="demo")


class TestRender:
    def test_substitutes_all_placeholders(self):
        text = render(SIMPLE, {"goal": "write", "style": "terse"})
        assert text == "Goal: write\nStyle: terse"

    def test_missing_binding_raises_with_name(self):
        with pytest.raises(MissingBindingError) as exc:
            render(SIMPLE, {"goal": "write"})
        assert "style" in str(exc.value)

    def test_extra_bindings_are_ignored(self):
        text = render(SIMPLE, {"goal": "g", "style": "s", "unused": "x"})
        assert "unused" not in text


class TestExtractJson:
    def test_plain_document(self):
        assert extract_json('{"a": 1}') == {"a": 1}

    def test_fenced_document(self):
        raw = 'Sure, here you go:\n```json\n{"a": [1, 2]}\n```\nHope that helps!'
        assert extract_json(raw) == {"a": [1, 2]}

    def test_prose_prefix_before_bare_json(self):
        raw = 'Here is the plan you asked for: {"tasks": []}'
        assert extract_json(raw) == {"tasks": []}

    def test_array_root(self):
        assert extract_json("[1, 2, 3]") == [1, 2, 3]

    def test_garbage_raises(self):
        with pytest.raises(ValueError):
            extract_json("no json anywhere")


class TestMockProvider:
    def test_script_wins_over_fixtures(self):
        provider = MockProvider(fixture_dir=NOVEL)
        provider.push(Stage.PLAN_OUTLINE, "scripted reply")
        out = provider.complete("p", stage=Stage.PLAN_OUTLINE, temperature=0.0, seed=1)
        assert out == "scripted reply"

    def test_fixture_files_resolve_by_stage_ordinal(self):
        provider = MockProvider(fixture_dir=NOVEL)
        first = provider.complete("p", stage=Stage.AGENT_ASSIGNMENT, temperature=0.0, seed=1)
        second = provider.complete("p", stage=Stage.AGENT_ASSIGNMENT, temperature=0.0, seed=1)
        assert first == (NOVEL / "agent_assignment_000.json").read_text(encoding="utf-8")
        assert second == (NOVEL / "agent_assignment_001.json").read_text(encoding="utf-8")

    def test_synthesized_reply_is_deterministic_in_seed_and_prompt(self):
        a = MockProvider().complete("same prompt", stage=Stage.ACTION, temperature=0.9, seed=42)
        b = MockProvider().complete("same prompt", stage=Stage.ACTION, temperature=0.1, seed=42)
        c = MockProvider().complete("same prompt", stage=Stage.ACTION, temperature=0.9, seed=43)
        d = MockProvider().complete("other prompt", stage=Stage.ACTION, temperature=0.9, seed=42)
        assert a == b
        assert a != c and a != d
        assert a.startswith("[action#0] ")

    def test_ordinal_counts_per_stage_independently(self):
        provider = MockProvider()
        a0 = provider.complete("x", stage=Stage.ACTION, temperature=0, seed=1)
        p0 = provider.complete("x", stage=Stage.PLAN_OUTLINE, temperature=0, seed=1)
        a1 = provider.complete("x", stage=Stage.ACTION, temperature=0, seed=1)
        assert a0.startswith("[action#0]")
        assert p0.startswith("[plan_outline#0]")
        assert a1.startswith("[action#1]")


class TestRepairLoop:
    def _gateway_with_schema(self, provider: MockProvider) -> Gateway:
        gateway = make_gateway(provider=provider)
        gateway.register_schema("demo", {"type": "object", "required": ["n"], "properties": {"n": {"type": "integer"}}})
        return gateway

    def _request(self) -> CompletionRequest:
        return CompletionRequest(template=SIMPLE, bindings={"goal": "g", "style": "s"}, provider="mock")

    def test_valid_first_reply_needs_no_repair(self):
        provider = MockProvider()
        provider.push(Stage.PLAN_OUTLINE, '{"n": 1}')
        result = self._gateway_with_schema(provider).complete_structured(self._request())
        assert result.value == {"n": 1}
        assert result.repair_attempts == 0

    def test_malformed_then_valid_costs_one_repair(self):
        provider = MockProvider()
        provider.push(Stage.PLAN_OUTLINE, "utter nonsense", '{"n": 2}')
        result = self._gateway_with_schema(provider).complete_structured(self._request())
        assert result.value == {"n": 2}
        assert result.repair_attempts == 1

    def test_total_calls_bounded_by_repair_budget(self):
        provider = MockProvider()
        # Far more bad replies than the budget allows; only budget+1 get used.
        provider.push(Stage.PLAN_OUTLINE, *["bad"] * 10)
        gateway = self._gateway_with_schema(provider)
        with pytest.raises(SchemaViolationError) as exc:
            gateway.complete_structured(self._request())
        consumed = 10 - len(provider.script[Stage.PLAN_OUTLINE])
        assert consumed == gateway.config.repair_attempts + 1 == 3
        assert exc.value.issues

    def test_schema_violation_lists_paths(self):
        provider = MockProvider()
        provider.push(Stage.PLAN_OUTLINE, *['{"n": "text"}'] * 3)
        with pytest.raises(SchemaViolationError) as exc:
            self._gateway_with_schema(provider).complete_structured(self._request())
        assert any(issue.startswith("n:") for issue in exc.value.issues)

    def test_semantic_check_failures_trigger_repair(self):
        provider = MockProvider()
        provider.push(Stage.PLAN_OUTLINE, '{"n": 1}', '{"n": 5}')
        gateway = self._gateway_with_schema(provider)
        check = lambda doc: [] if doc["n"] >= 5 else ["n must be at least 5"]
        result = gateway.complete_structured(self._request(), semantic_check=check)
        assert result.value == {"n": 5}
        assert result.repair_attempts == 1

    def test_repair_prompt_quotes_previous_reply_and_issues(self):
        provider = MockProvider()
        seen: list[str] = []
        original = provider.complete

        def spying(prompt, *, stage, temperature, seed):
            seen.append(prompt)
            return original(prompt, stage=stage, temperature=temperature, seed=seed)

        provider.complete = spying  # type: ignore[method-assign]
        provider.push(Stage.PLAN_OUTLINE, '"just a string"', '{"n": 9}')
        self._gateway_with_schema(provider).complete_structured(self._request())
        assert len(seen) == 2
        assert '"just a string"' in seen[1]
        assert "rejected" in seen[1]

    def test_unregistered_schema_fails_immediately(self):
        gateway = make_gateway(provider=MockProvider())
        request = CompletionRequest(
            template=PromptTemplate(stage=Stage.PLAN_OUTLINE, body="x", schema_id="nope"),
            bindings={},
            provider="mock",
        )
        with pytest.raises(SchemaViolationError):
            gateway.complete_structured(request)


class TestGatewayRegistry:
    def test_unknown_provider_is_unavailable(self):
        gateway = make_gateway(provider=MockProvider())
        with pytest.raises(ProviderUnavailableError):
            gateway.complete_text("missing", "hi", stage=Stage.ACTION, temperature=0.0)

    def test_complete_text_passes_through(self):
        provider = MockProvider()
        provider.push(Stage.ACTION, "raw text out")
        gateway = make_gateway(provider=provider)
        assert gateway.complete_text("mock", "hi", stage=Stage.ACTION, temperature=0.5) == "raw text out"
