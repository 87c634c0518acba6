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

"""Neuro-symbolic logical reasoning over a Lean-subset prover, with LangChain tools."""

from __future__ import annotations

from .client import (
    ChatClient,
    GenerationParams,
    HttpChatClient,
    LangChainChatClient,
    ReplayChatClient,
    create_chat_client,
)
from .config import ENV_PREFIX, LLM_API_KEY_ENV_VAR, ProverSettings, redact_secret
from .corpus import ProblemRecord, dump_corpus, load_corpus, load_golden_corpus
from .evaluation import EvaluationReport, ProblemResult, ProverPipeline, evaluate
from .exceptions import (
    ChatTransportError,
    CorpusError,
    FormalizationError,
    GeneratorError,
    InstanceGenerationError,
    LogicError,
    LogicProverError,
    OracleFragmentError,
    ProverConfigurationError,
    RetrievalError,
    ScorerProtocolError,
    TacticError,
    TheoryCheckError,
    TheoryParseError,
)
from .formalizer import (
    FormalizationResult,
    PromptTemplate,
    extract_code,
    formalize_with_retry,
    render_prompt,
)
from .generator import BuiltinGenerator, Candidate, ExternalGenerator, GeneratorConfig, create_generator
from .interpreter import OptionMapping, Verdict, build_duals, interpret, score
from .kernel import Goal, Kernel, ProofReport, ProofState, ProofStatus, apply_tactic, check_script, init_state
from .logic import Formula, Theory, check_wf, instantiate, negate
from .oracle import InstanceParams, OracleResult, generate_instances, oracle
from .parser import parse_formula, parse_script, parse_tactic, parse_theory, pretty_print
from .retrieval import PremiseIndex, embed, rank, recall_at_k
from .search import SearchConfig, SearchOutcome, SearchStatus, is_subsumed, prove_both, search
from .solver import Solution, solve
from .toolkit import ProverToolkit, create_toolkit
from .tools import LogicSolveTool, PremiseRetrieveTool

__all__ = [
    "__version__",
    "ENV_PREFIX",
    "LLM_API_KEY_ENV_VAR",
    "ProverSettings",
    "redact_secret",
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
    "Formula",
    "Theory",
    "check_wf",
    "instantiate",
    "negate",
    "parse_theory",
    "parse_formula",
    "parse_tactic",
    "parse_script",
    "pretty_print",
    "Goal",
    "ProofState",
    "ProofStatus",
    "ProofReport",
    "Kernel",
    "init_state",
    "apply_tactic",
    "check_script",
    "PremiseIndex",
    "embed",
    "rank",
    "recall_at_k",
    "Candidate",
    "GeneratorConfig",
    "BuiltinGenerator",
    "ExternalGenerator",
    "create_generator",
    "SearchConfig",
    "SearchStatus",
    "SearchOutcome",
    "search",
    "is_subsumed",
    "prove_both",
    "Verdict",
    "OptionMapping",
    "build_duals",
    "interpret",
    "score",
    "Solution",
    "solve",
    "ChatClient",
    "GenerationParams",
    "HttpChatClient",
    "ReplayChatClient",
    "LangChainChatClient",
    "create_chat_client",
    "PromptTemplate",
    "FormalizationResult",
    "render_prompt",
    "extract_code",
    "formalize_with_retry",
    "ProblemRecord",
    "load_corpus",
    "load_golden_corpus",
    "dump_corpus",
    "OracleResult",
    "InstanceParams",
    "oracle",
    "generate_instances",
    "ProblemResult",
    "ProverPipeline",
    "EvaluationReport",
    "evaluate",
    "ProverToolkit",
    "create_toolkit",
    "LogicSolveTool",
    "PremiseRetrieveTool",
]

__version__ = "0.1.0"
