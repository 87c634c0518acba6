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

"""Tactic candidate generation: rule-based enumeration plus retrieval-aware scoring."""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from typing import Optional, Protocol, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .exceptions import TheoryParseError
from .kernel import SHADOW_MARK, Goal, Kernel, ProofState, fresh_name, match_formula, premise_chain, render_state
from .logic import (
    And,
    Const,
    Exists,
    Falsum,
    ForAll,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    SymbolTable,
    Term,
    Theory,
    format_formula,
    open_binder,
    substitute_holes,
)
from .parser import parse_tactic
from .retrieval import Embedder, PremiseIndex, rank, similarity_map
from .scorer import ExternalEmbedder, ScorerProcess
from .tactics import (
    AndIntro,
    Apply,
    Assumption,
    Cases,
    Contradiction,
    Exact,
    Exfalso,
    Have,
    Intro,
    Left,
    OrIntro,
    ProofApp,
    ProofName,
    ProofTerm,
    Right,
    Sorry,
    Split,
    Tactic,
    Use,
    format_tactic,
    proof_head,
    tactic_kind,
)

__all__ = [
    "TACTIC_PRIORS",
    "GeneratorConfig",
    "Candidate",
    "TacticGenerator",
    "BuiltinGenerator",
    "ExternalGenerator",
    "enumerate_tactics",
    "score_candidates",
    "create_generator",
]

logger = logging.getLogger(__name__)

TACTIC_PRIORS: Mapping[str, float] = {
    "exact": 2.0,
    "assumption": 2.0,
    "contradiction": 1.5,
    "apply": 1.0,
    "split": 0.5,
    "left": 0.5,
    "right": 0.5,
    "intro": 0.5,
    "cases": 0.0,
    "use": 0.0,
    "exfalso": 0.0,
    "have": -1.0,
}


class GeneratorConfig(BaseModel):
    """Knobs of the built-in scorer."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    num_candidates: int = Field(default=64, ge=1, description="Candidates kept per expansion.")
    retrieval_size: int = Field(default=4, ge=1, description="Premises considered similar (top-m).")
    similarity_weight: float = Field(default=1.0, ge=0.0, description="Weight of premise similarity.")
    priors: dict[str, float] = Field(default_factory=lambda: dict(TACTIC_PRIORS))
    embed_premises: bool = Field(
        default=False, description="Embed premises with the external scorer instead of TF-IDF."
    )


@dataclass(frozen=True)
class Candidate:
    tactic: Tactic
    logprob: float
    provenance: str = "builtin"

    @property
    def text(self) -> str:
        return format_tactic(self.tactic)


class TacticGenerator(Protocol):
    def generate(self, state: ProofState, k: Optional[int] = None) -> list[Candidate]: ...


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _sort_ok(table: SymbolTable, term: Term, sort: Optional[str]) -> bool:
    if sort is None or not isinstance(term, Const):
        return True
    actual = table.sort_of(term.name)
    return not actual or actual == sort


def _assignments(
    holes: Sequence[Optional[str]], fixed: Mapping[int, Term], table: SymbolTable
) -> Iterator[tuple[Term, ...]]:
    choices: list[list[Term]] = []
    for index, sort in enumerate(holes):
        if index in fixed:
            if not _sort_ok(table, fixed[index], sort):
                return
            choices.append([fixed[index]])
        else:
            choices.append([Const(name) for name in table.constants_of_sort(sort)])
    yield from itertools.product(*choices)


def _instantiated_term(name: str, args: Sequence[Term]) -> ProofTerm:
    if not args:
        return ProofName(name)
    return ProofApp(ProofName(name), tuple(ProofName(arg.name) for arg in args if isinstance(arg, Const)))


class _Discharger:
    """Finds direct proof terms for antecedents from hypotheses and axioms."""

    def __init__(self, kernel: Kernel, goal: Goal) -> None:
        self.by_formula: dict[Formula, str] = {}
        for name, formula in kernel.axioms.items():
            self.by_formula.setdefault(formula, name)
        for name, formula in goal.hypotheses:
            if SHADOW_MARK not in name:
                self.by_formula[formula] = name

    def __call__(self, formula: Formula) -> Optional[ProofTerm]:
        name = self.by_formula.get(formula)
        if name is not None:
            return ProofName(name)
        if isinstance(formula, And):
            left, right = self(formula.left), self(formula.right)
            if left is not None and right is not None:
                return AndIntro(left, right)
            return None
        if isinstance(formula, Or):
            left = self(formula.left)
            if left is not None:
                return OrIntro(left, right=False)
            right = self(formula.right)
            if right is not None:
                return OrIntro(right, right=True)
        return None


def _elimination_is_useful(formula: Formula, goal: Goal, known: set[Formula]) -> bool:
    if formula in known:
        return False
    if isinstance(formula, Or):
        return formula.left not in known and formula.right not in known
    if isinstance(formula, And):
        return not (formula.left in known and formula.right in known)
    if isinstance(formula, Exists):
        return not any(open_binder(formula, Const(name)) in known for name, _ in goal.constants)
    return isinstance(formula, Falsum)


def enumerate_tactics(kernel: Union[Kernel, Theory], goal: Goal) -> list[Tactic]:
    """Every rule-based candidate tactic for ``goal``, in a deterministic order.

    Universal binders the goal does not determine are instantiated with every
    constant of the right sort. ``sorry`` is never produced.
    """

    if isinstance(kernel, Theory):
        kernel = Kernel(kernel)
    table = kernel.local_table(goal)
    target = goal.target
    taken = kernel.taken_names(goal)
    hypotheses = [(name, formula) for name, formula in goal.hypotheses if SHADOW_MARK not in name]
    hypothesis_names = {name for name, _ in hypotheses}
    premises = [*kernel.axioms.items(), *hypotheses]
    known = set(goal.formulas())
    discharge = _Discharger(kernel, goal)
    have_name = fresh_name("h", taken)

    result: list[Tactic] = []
    seen: set[str] = set()

    def emit(tactic: Tactic) -> None:
        text = format_tactic(tactic)
        if text not in seen:
            seen.add(text)
            result.append(tactic)

    if target in known:
        emit(Assumption())
    if isinstance(target, (And, Or)):
        composite = discharge(target)
        if composite is not None and not isinstance(composite, ProofName):
            emit(Exact(composite))
    if Kernel.has_contradiction(goal):
        emit(Contradiction())
    if isinstance(target, (Implies, Not)):
        emit(Intro(have_name))
    elif isinstance(target, ForAll):
        emit(Intro(fresh_name(target.var, taken)))
    elif isinstance(target, (And, Iff)):
        emit(Split())
    elif isinstance(target, Or):
        emit(Left())
        emit(Right())
    elif isinstance(target, Exists):
        for name in table.constants_of_sort(target.sort):
            emit(Use(name))

    haves: list[Tactic] = []
    for name, formula in premises:
        local = name in hypothesis_names
        for stage in premise_chain(formula):
            if not stage.prenex:
                break
            subst = match_formula(stage.conclusion, target)
            if subst is None:
                continue
            for args in _assignments(stage.holes, subst, table):
                term = _instantiated_term(name, args)
                if not stage.antecedents:
                    if not (local and not args):
                        emit(Exact(term))
                    continue
                emit(Apply(term))
                mapping = dict(enumerate(args))
                for antecedent in stage.antecedents:
                    instance = substitute_holes(antecedent, mapping)
                    if instance not in known:
                        haves.append(Have(have_name, instance))

    for name, formula in hypotheses:
        if isinstance(formula, (Or, And, Exists, Iff)):
            emit(Cases(ProofName(name)))
    for name, formula in premises:
        local = name in hypothesis_names
        stages = premise_chain(formula)
        stage = stages[-1]
        if not stage.prenex or not isinstance(stage.conclusion, (Or, And, Exists, Falsum)):
            continue
        if local and not stage.antecedents and not stage.holes:
            continue
        for args in _assignments(stage.holes, {}, table):
            mapping = dict(enumerate(args))
            proofs: list[ProofTerm] = []
            for antecedent in stage.antecedents:
                proof = discharge(substitute_holes(antecedent, mapping))
                if proof is None:
                    break
                proofs.append(proof)
            else:
                conclusion = substitute_holes(stage.conclusion, mapping)
                if not _elimination_is_useful(conclusion, goal, known):
                    continue
                head = _instantiated_term(name, args)
                if proofs:
                    base_args = head.args if isinstance(head, ProofApp) else ()
                    head = ProofApp(ProofName(name), (*base_args, *proofs))
                emit(Cases(head))

    if goal.hypotheses and not isinstance(target, Falsum):
        emit(Exfalso())
    for tactic in haves:
        emit(tactic)
    return result


# ---------------------------------------------------------------------------
# Scoring
# ---------------------------------------------------------------------------


def _referenced_premise(tactic: Tactic) -> Optional[str]:
    if isinstance(tactic, (Apply, Exact, Cases)):
        return proof_head(tactic.term)
    return None


def _logsumexp(values: np.ndarray) -> float:
    peak = float(values.max())
    return peak + math.log(float(np.exp(values - peak).sum()))


def _log_normalise(values: np.ndarray) -> np.ndarray:
    return np.minimum(values - _logsumexp(values), 0.0)


def score_candidates(
    tactics: Sequence[Tactic],
    goal: Goal,
    index: PremiseIndex,
    config: Optional[GeneratorConfig] = None,
) -> list[Candidate]:
    """Attach normalised log-probabilities and keep the best ``num_candidates``.

    The raw score of a tactic is the weighted similarity of the premise it
    references (zero outside the top-m) plus a per-kind prior. Ties are broken
    by the tactic's text.
    """

    settings = config or GeneratorConfig()
    if not tactics:
        return []
    similarities = similarity_map(rank(goal, index, settings.retrieval_size))
    raw = np.array(
        [
            settings.similarity_weight * similarities.get(_referenced_premise(tactic) or "", 0.0)
            + settings.priors.get(tactic_kind(tactic), 0.0)
            for tactic in tactics
        ],
        dtype=np.float64,
    )
    logprobs = _log_normalise(raw)
    texts = [format_tactic(tactic) for tactic in tactics]
    order = sorted(range(len(tactics)), key=lambda i: (-float(logprobs[i]), texts[i]))
    return [
        Candidate(tactics[i], float(logprobs[i]), "builtin")
        for i in order[: settings.num_candidates]
    ]


class BuiltinGenerator:
    """Enumerates rule-based tactics and ranks them with premise similarity."""

    provenance = "builtin"

    def __init__(
        self,
        theory: Theory,
        config: Optional[GeneratorConfig] = None,
        *,
        index: Optional[PremiseIndex] = None,
        kernel: Optional[Kernel] = None,
    ) -> None:
        self.config = config or GeneratorConfig()
        self.kernel = kernel or Kernel(theory)
        self.index = index or PremiseIndex.build(theory, top_m=self.config.retrieval_size)

    def generate(self, state: ProofState, k: Optional[int] = None) -> list[Candidate]:
        if not state.goals:
            return []
        goal = state.goals[0]
        candidates = score_candidates(enumerate_tactics(self.kernel, goal), goal, self.index, self.config)
        return candidates[:k] if k is not None else candidates


class ExternalGenerator:
    """Asks an external scorer process for candidates.

    Replies that do not parse as a supported tactic, or whose log-probability is
    positive or not finite, are dropped and counted in :attr:`dropped`. When the
    surviving probabilities sum to more than one they are renormalised.
    """

    provenance = "external"

    def __init__(
        self,
        theory: Theory,
        process: ScorerProcess,
        config: Optional[GeneratorConfig] = None,
        *,
        index: Optional[PremiseIndex] = None,
    ) -> None:
        self.config = config or GeneratorConfig()
        self.process = process
        self.theory = theory
        self.axioms = dict(theory.axioms())
        embedder: Optional[Embedder] = ExternalEmbedder(process) if self.config.embed_premises else None
        self.index = index or PremiseIndex.build(
            theory, top_m=self.config.retrieval_size, embedder=embedder
        )
        self.dropped = 0

    def generate(self, state: ProofState, k: Optional[int] = None) -> list[Candidate]:
        if not state.goals:
            return []
        limit = k if k is not None else self.config.num_candidates
        ranking = rank(state.goals[0], self.index, self.config.retrieval_size)
        premises = [f"{item.name} : {format_formula(self.axioms[item.name])}" for item in ranking]
        replies = self.process.generate(state.canonical_text(), render_state(state), premises, limit)
        candidates: list[Candidate] = []
        for reply in replies:
            text, logprob = reply.get("tactic"), reply.get("logprob")
            if not isinstance(text, str) or not isinstance(logprob, (int, float)):
                self._drop("missing tactic or logprob", reply)
                continue
            if isinstance(logprob, bool) or not math.isfinite(logprob) or logprob > 0:
                self._drop("log-probability out of range", reply)
                continue
            try:
                tactic = parse_tactic(text)
            except TheoryParseError:
                self._drop("unparseable tactic", reply)
                continue
            if isinstance(tactic, Sorry):
                self._drop("sorry is not a candidate", reply)
                continue
            candidates.append(Candidate(tactic, float(logprob), self.provenance))
        if candidates:
            scores = np.array([item.logprob for item in candidates], dtype=np.float64)
            if _logsumexp(scores) > 0.0:
                logger.debug("Renormalised scorer log-probabilities", extra={"candidates": len(candidates)})
                candidates = [
                    Candidate(item.tactic, float(value), item.provenance)
                    for item, value in zip(candidates, _log_normalise(scores))
                ]
        candidates.sort(key=lambda item: (-item.logprob, item.text))
        return candidates[:limit]

    def _drop(self, reason: str, reply: Mapping[str, object]) -> None:
        self.dropped += 1
        logger.warning("Dropped scorer candidate", extra={"reason": reason, "reply": dict(reply)})


def create_generator(
    theory: Theory,
    config: Optional[GeneratorConfig] = None,
    *,
    process: Optional[ScorerProcess] = None,
) -> TacticGenerator:
    """Built-in generator, or an external one when a scorer process is given."""

    if process is None:
        return BuiltinGenerator(theory, config)
    return ExternalGenerator(theory, process, config)
