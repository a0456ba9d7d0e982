"""Runtime configuration as plain dataclasses, loadable from file + env."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path


@dataclass(frozen=True)
class ProviderConfig:
    """Connection settings for one remote completion provider."""

    endpoint: str = ""
    credential: str = ""
    model: str = ""
    timeout_seconds: float = 60.0


@dataclass(frozen=True)
class GatewayConfig:
    repair_attempts: int = 2
    generation_temperature: float = 0.7
    scoring_temperature: float = 0.2
    provider_concurrency: int = 4
    timeout_seconds: float = 60.0


@dataclass(frozen=True)
class GenesisConfig:
    max_branch_count: int = 5


@dataclass(frozen=True)
class RuntimeConfig:
    action_retries: int = 2
    retry_backoff_seconds: float = 0.5


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8472
    default_provider: str = "mock"
    mock_fixture_dir: str | None = None
    providers: dict[str, ProviderConfig] = field(default_factory=dict)
    gateway: GatewayConfig = field(default_factory=GatewayConfig)
    genesis: GenesisConfig = field(default_factory=GenesisConfig)
    runtime: RuntimeConfig = field(default_factory=RuntimeConfig)


def load_service_config(path: str | Path | None = None, env: dict[str, str] | None = None) -> ServiceConfig:
    """Build a ServiceConfig from an optional JSON file with env overrides.

    Recognized env vars: COORDKIT_HOST, COORDKIT_PORT, COORDKIT_PROVIDER,
    COORDKIT_FIXTURES, COORDKIT_ENDPOINT, COORDKIT_CREDENTIAL,
    COORDKIT_MODEL, COORDKIT_TIMEOUT.
    """
    env = dict(os.environ if env is None else env)
    raw: dict = {}
    if path is not None:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))

    providers = {
        name: ProviderConfig(
            endpoint=p.get("endpoint", ""),
            credential=p.get("credential", ""),
            model=p.get("model", ""),
            timeout_seconds=float(p.get("timeoutSeconds", 60.0)),
        )
        for name, p in raw.get("providers", {}).items()
    }
    if env.get("COORDKIT_ENDPOINT"):
        providers["remote"] = ProviderConfig(
            endpoint=env["COORDKIT_ENDPOINT"],
            credential=env.get("COORDKIT_CREDENTIAL", ""),
            model=env.get("COORDKIT_MODEL", ""),
            timeout_seconds=float(env.get("COORDKIT_TIMEOUT", "60")),
        )

    return ServiceConfig(
        host=env.get("COORDKIT_HOST", raw.get("host", "127.0.0.1")),
        port=int(env.get("COORDKIT_PORT", raw.get("port", 8472))),
        default_provider=env.get("COORDKIT_PROVIDER", raw.get("defaultProvider", "mock")),
        mock_fixture_dir=env.get("COORDKIT_FIXTURES", raw.get("mockFixtureDir")),
        providers=providers,
    )
