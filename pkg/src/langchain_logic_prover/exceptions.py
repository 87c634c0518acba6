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

"""Custom exceptions for langchain-logic-prover."""

from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:  # pragma: no cover - typing only
    from .logic import Diagnostic, SourceSpan

__all__ = [
    "LogicProverError",
    "ProverConfigurationError",
    "LogicError",
    "TheoryParseError",
    "TheoryCheckError",
    "TacticError",
    "RetrievalError",
    "GeneratorError",
    "ScorerProtocolError",
    "FormalizationError",
    "ChatTransportError",
    "CorpusError",
    "OracleFragmentError",
    "InstanceGenerationError",
]


class LogicProverError(Exception):
    """Base exception for langchain-logic-prover."""


class ProverConfigurationError(LogicProverError):
    """Raised when the prover is misconfigured."""


class LogicError(LogicProverError):
    """Raised when a formula or term violates the theory's signature."""


class TheoryParseError(LogicProverError):
    """Raised when Lean-subset source text cannot be parsed."""

    def __init__(
        self,
        message: str,
        *,
        span: Optional[SourceSpan] = None,
        expected: Sequence[str] = (),
    ) -> None:
        super().__init__(message)
        self.span = span
        self.expected = tuple(sorted(expected))


class TheoryCheckError(LogicProverError):
    """Raised when parsed source fails the well-formedness check."""

    def __init__(self, diagnostics: Sequence[Diagnostic]) -> None:
        self.diagnostics = tuple(diagnostics)
        lines = "; ".join(str(item) for item in self.diagnostics)
        super().__init__(f"Theory is not well-formed: {lines}")


class TacticError(LogicProverError):
    """Raised when a tactic does not apply to the current proof state."""

    def __init__(self, tactic: str, reason: str) -> None:
        super().__init__(f"{tactic}: {reason}")
        self.tactic = tactic
        self.reason = reason


class RetrievalError(LogicProverError):
    """Raised for invalid premise retrieval input."""


class GeneratorError(LogicProverError):
    """Raised when the tactic generator cannot produce candidates."""


class ScorerProtocolError(GeneratorError):
    """Raised when the external scorer replies with malformed data."""


class FormalizationError(LogicProverError):
    """Raised when a prompt cannot be rendered or a completion holds no code."""


class ChatTransportError(LogicProverError):
    """Raised when the chat model endpoint cannot be reached or rejects a request."""

    def __init__(self, message: str, *, status: Optional[int] = None) -> None:
        super().__init__(message)
        self.status = status


class CorpusError(LogicProverError):
    """Raised when a corpus record is malformed."""

    def __init__(self, message: str, *, record_id: Optional[str] = None) -> None:
        prefix = f"{record_id}: " if record_id else ""
        super().__init__(f"{prefix}{message}")
        self.record_id = record_id


class OracleFragmentError(LogicProverError):
    """Raised when a theory or question falls outside the Horn-literal fragment."""


class InstanceGenerationError(LogicProverError):
    """Raised when synthetic instance parameters cannot be satisfied."""
