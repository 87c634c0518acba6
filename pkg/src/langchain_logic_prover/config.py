# MIT License
#
# Copyright (c) 2024 Dinesh
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

"""Configuration helpers for the prover, the search and the formalizer endpoint."""

from __future__ import annotations

import os
from collections.abc import Mapping
from typing import Any, Callable, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .exceptions import ProverConfigurationError
from .generator import GeneratorConfig
from .scorer import parse_scorer_spec
from .search import SearchConfig

__all__ = [
    "ENV_PREFIX",
    "LLM_API_KEY_ENV_VAR",
    "ProverSettings",
    "redact_secret",
]

ENV_PREFIX = "LOGIC_PROVER_"
LLM_API_KEY_ENV_VAR = f"{ENV_PREFIX}LLM_API_KEY"


def _flag(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in {"1", "true", "yes", "on"}:
        return True
    if lowered in {"0", "false", "no", "off"}:
        return False
    raise ValueError(value)


# field name -> (environment suffix, converter, description used in errors)
_ENV_FIELDS: dict[str, tuple[str, Callable[[str], Any], str]] = {
    "timeout_secs": ("TIMEOUT_SECS", float, "numeric"),
    "num_tactics": ("NUM_TACTICS", int, "an integer"),
    "retrieval_size": ("RETRIEVAL_SIZE", int, "an integer"),
    "similarity_weight": ("SIMILARITY_WEIGHT", float, "numeric"),
    "subsumption": ("SUBSUMPTION", _flag, "a boolean"),
    "max_expansions": ("MAX_EXPANSIONS", int, "an integer"),
    "scorer": ("SCORER", str, "text"),
    "scorer_timeout": ("SCORER_TIMEOUT", float, "numeric"),
    "workers": ("WORKERS", int, "an integer"),
    "llm_api_url": ("LLM_API_URL", str, "text"),
    "llm_api_key": ("LLM_API_KEY", str, "text"),
    "llm_model": ("LLM_MODEL", str, "text"),
    "temperature": ("TEMPERATURE", float, "numeric"),
    "max_tokens": ("MAX_TOKENS", int, "an integer"),
    "http_timeout": ("HTTP_TIMEOUT", float, "numeric"),
}


class ProverSettings(BaseModel):
    """Validated configuration shared by the CLI, the search and the tools."""

    model_config = ConfigDict(extra="ignore", str_strip_whitespace=True)

    timeout_secs: float = Field(default=180.0, gt=0.0, description="Per-theorem search budget in seconds.")
    num_tactics: int = Field(default=64, ge=1, description="Tactic candidates requested per expansion.")
    retrieval_size: int = Field(default=4, ge=1, description="Premises passed to the scorer.")
    similarity_weight: float = Field(default=1.0, ge=0.0, description="Weight of premise similarity.")
    subsumption: bool = Field(default=True)
    containment: Literal["multiset", "prefix"] = Field(default="multiset")
    max_expansions: Optional[int] = Field(default=None, ge=1)
    concurrent_duals: bool = Field(default=False, description="Search both dual theorems at once.")
    scorer: str = Field(default="builtin", description="'builtin' or 'subprocess:<command>'.")
    scorer_timeout: float = Field(default=30.0, ge=0.1)
    workers: int = Field(default=1, ge=1, description="Problems evaluated in parallel.")
    llm_api_url: Optional[str] = Field(default=None, description="Chat-completions endpoint URL.")
    llm_api_key: Optional[str] = Field(default=None, repr=False, description="Bearer credential for the endpoint.")
    llm_model: Optional[str] = Field(default=None)
    temperature: float = Field(default=0.0, ge=0.0)
    max_tokens: int = Field(default=2048, ge=1)
    http_timeout: float = Field(default=60.0, ge=1.0)

    @field_validator("scorer")
    @classmethod
    def _validate_scorer(cls, value: str) -> str:
        parse_scorer_spec(value)
        return value

    @field_validator("llm_api_url", "llm_api_key", "llm_model")
    @classmethod
    def _empty_as_none(cls, value: Optional[str]) -> Optional[str]:
        if value == "":
            return None
        return value

    @classmethod
    def from_env(
        cls,
        env: Optional[Mapping[str, str]] = None,
    ) -> ProverSettings:
        """Load settings from ``LOGIC_PROVER_*`` environment variables."""

        source = env if env is not None else os.environ
        values: dict[str, Any] = {}
        for field_name, (suffix, convert, kind) in _ENV_FIELDS.items():
            key = ENV_PREFIX + suffix
            raw = source.get(key)
            if raw is None or not raw.strip():
                continue
            try:
                values[field_name] = convert(raw.strip())
            except ValueError as exc:
                raise ProverConfigurationError(f"{key} must be {kind}.") from exc
        return cls._validated(values)

    @classmethod
    def resolve(
        cls,
        *,
        settings: Optional[ProverSettings] = None,
        env: Optional[Mapping[str, str]] = None,
        **overrides: Any,
    ) -> ProverSettings:
        """Resolve settings from explicit values, existing settings, or env."""

        base = settings if settings is not None else cls.from_env(env=env)
        update = {key: value for key, value in overrides.items() if value is not None}
        unknown = set(update) - set(cls.model_fields)
        if unknown:
            raise ProverConfigurationError(f"Unknown setting(s): {', '.join(sorted(unknown))}")
        if not update:
            return base
        return cls._validated({**base.model_dump(), **update})

    @classmethod
    def _validated(cls, values: Mapping[str, Any]) -> ProverSettings:
        try:
            return cls.model_validate(dict(values))
        except ValidationError as exc:
            reasons = "; ".join(
                f"{'.'.join(str(part) for part in error['loc'])}: {error['msg']}" for error in exc.errors()
            )
            raise ProverConfigurationError(f"Invalid settings: {reasons}") from exc

    def search_config(self) -> SearchConfig:
        return SearchConfig(
            time_budget=self.timeout_secs,
            num_candidates=self.num_tactics,
            max_expansions=self.max_expansions,
            subsumption=self.subsumption,
            containment=self.containment,
        )

    def generator_config(self) -> GeneratorConfig:
        return GeneratorConfig(
            num_candidates=self.num_tactics,
            retrieval_size=self.retrieval_size,
            similarity_weight=self.similarity_weight,
        )

    def require_endpoint(self) -> tuple[str, str]:
        """Return the chat endpoint URL and model or raise if either is missing."""

        if self.llm_api_url is None:
            raise ProverConfigurationError(
                f"A chat endpoint is required. Set {ENV_PREFIX}LLM_API_URL or use replay fixtures."
            )
        if self.llm_model is None:
            raise ProverConfigurationError(f"A model name is required. Set {ENV_PREFIX}LLM_MODEL.")
        return self.llm_api_url, self.llm_model


def redact_secret(value: Optional[str]) -> str:
    """Redact a credential for safe logging."""

    if value is None:
        return ""
    stripped = value.strip()
    if not stripped:
        return ""
    if len(stripped) <= 4:
        return "*" * len(stripped)
    hidden = "*" * (len(stripped) - 4)
    return f"{hidden}{stripped[-4:]}"
