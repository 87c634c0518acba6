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

"""Proof states and tactic semantics for the supported Lean subset."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional, Union

from .exceptions import LogicError, TacticError
from .logic import (
    And,
    Atom,
    Const,
    DeclarationKind,
    Exists,
    Falsum,
    ForAll,
    Formula,
    Hole,
    Iff,
    Implies,
    Not,
    Or,
    SymbolTable,
    Term,
    Theory,
    Var,
    canonical_text,
    check_formula,
    format_formula,
    instantiate,
    is_closed,
    open_binder,
    rename_constants,
    substitute_holes,
)
from .tactics import (
    AndIntro,
    Apply,
    Assumption,
    Block,
    Cases,
    Contradiction,
    Exact,
    Exfalso,
    Have,
    Intro,
    Left,
    Opaque,
    OrIntro,
    ProofApp,
    ProofName,
    ProofTerm,
    Right,
    Sorry,
    Split,
    Tactic,
    TacticScript,
    Use,
    format_proof_term,
    format_tactic,
)

__all__ = [
    "Goal",
    "ProofState",
    "ProofStatus",
    "ProofReport",
    "PremiseChain",
    "Kernel",
    "fresh_name",
    "premise_chain",
    "match_formula",
    "init_state",
    "apply_tactic",
    "check_script",
    "check_theory",
    "render_state",
]

logger = logging.getLogger(__name__)

SHADOW_MARK = "✝"


def fresh_name(base: str, taken: Iterable[str]) -> str:
    """Return ``base`` or the first of ``base_1``, ``base_2``, ... not in ``taken``."""

    used = set(taken)
    if base not in used:
        return base
    index = 1
    while f"{base}_{index}" in used:
        index += 1
    return f"{base}_{index}"


@dataclass(frozen=True)
class Goal:
    """A local context (constants and named hypotheses) plus a target formula."""

    target: Formula
    hypotheses: tuple[tuple[str, Formula], ...] = ()
    constants: tuple[tuple[str, Optional[str]], ...] = ()

    def lookup(self, name: str) -> Optional[Formula]:
        if SHADOW_MARK in name:
            return None
        for hypothesis, formula in reversed(self.hypotheses):
            if hypothesis == name:
                return formula
        return None

    def names(self) -> set[str]:
        return {name for name, _ in self.hypotheses} | {name for name, _ in self.constants}

    def formulas(self) -> list[Formula]:
        return [formula for _, formula in self.hypotheses]

    def with_target(self, target: Formula) -> Goal:
        return Goal(target, self.hypotheses, self.constants)

    def with_hypothesis(self, name: str, formula: Formula) -> Goal:
        """Add a hypothesis; an existing one with the same name becomes inaccessible."""

        hypotheses = list(self.hypotheses)
        if any(existing == name for existing, _ in hypotheses):
            taken = {existing for existing, _ in hypotheses}
            shadow = name + SHADOW_MARK
            index = 0
            while shadow in taken:
                index += 1
                shadow = f"{name}{SHADOW_MARK}{index}"
            hypotheses = [
                (shadow if existing == name else existing, value) for existing, value in hypotheses
            ]
        hypotheses.append((name, formula))
        return Goal(self.target, tuple(hypotheses), self.constants)

    def without_hypothesis(self, name: str) -> Goal:
        hypotheses = list(self.hypotheses)
        for position in range(len(hypotheses) - 1, -1, -1):
            if hypotheses[position][0] == name:
                del hypotheses[position]
                break
        return Goal(self.target, tuple(hypotheses), self.constants)

    def with_constant(self, name: str, sort: Optional[str]) -> Goal:
        return Goal(self.target, self.hypotheses, (*self.constants, (name, sort)))

    def canonical_text(self) -> str:
        """Name-insensitive rendering: hypotheses as a sorted set, locals renamed by position."""

        mapping = {name: f"!{position}" for position, (name, _) in enumerate(self.constants)}

        def text(formula: Formula) -> str:
            return canonical_text(rename_constants(formula, mapping) if mapping else formula)

        locals_text = ", ".join(f"{mapping[name]} : {sort or '_'}" for name, sort in self.constants)
        hypotheses = ", ".join(sorted({text(formula) for _, formula in self.hypotheses}))
        return f"{locals_text} | {hypotheses} ⊢ {text(self.target)}"

    def render(self) -> str:
        lines = [f"{name} : {sort or 'Type'}" for name, sort in self.constants]
        lines.extend(f"{name} : {format_formula(formula)}" for name, formula in self.hypotheses)
        lines.append(f"⊢ {format_formula(self.target)}")
        return "\n".join(lines)


@dataclass(frozen=True)
class ProofState:
    goals: tuple[Goal, ...]
    tainted: bool = False

    @property
    def is_complete(self) -> bool:
        return not self.goals

    def canonical_text(self) -> str:
        if not self.goals:
            return "no goals"
        return " ;; ".join(goal.canonical_text() for goal in self.goals)

    def goal_texts(self) -> tuple[str, ...]:
        return tuple(goal.canonical_text() for goal in self.goals)


def render_state(state: ProofState) -> str:
    """Human-readable goal display in the usual Lean layout."""

    if not state.goals:
        return "no goals"
    return "\n\n".join(goal.render() for goal in state.goals)


class ProofStatus(str, Enum):
    COMPLETE = "complete"
    INCOMPLETE = "incomplete"
    FAILED = "failed"


@dataclass(frozen=True)
class ProofReport:
    """Outcome of replaying a tactic script against a theorem."""

    theorem: str
    status: ProofStatus
    tainted: bool = False
    step: Optional[int] = None
    error: Optional[str] = None
    remaining_goals: int = 0
    steps_executed: int = 0

    @property
    def valid(self) -> bool:
        return self.status is ProofStatus.COMPLETE and not self.tainted

    def to_dict(self) -> dict[str, Any]:
        return {
            "theorem": self.theorem,
            "status": self.status.value,
            "valid": self.valid,
            "tainted": self.tainted,
            "step": self.step,
            "error": self.error,
            "remaining_goals": self.remaining_goals,
            "steps_executed": self.steps_executed,
        }


class _Failure(Exception):
    """Internal signal carrying the reason a tactic does not apply."""


# ---------------------------------------------------------------------------
# Matching premises against targets
# ---------------------------------------------------------------------------


def _match_term(pattern: Term, target: Term, subst: dict[int, Term]) -> bool:
    if isinstance(pattern, Hole):
        if isinstance(target, (Var, Hole)):
            return False
        bound = subst.get(pattern.index)
        if bound is None:
            subst[pattern.index] = target
            return True
        return bound == target
    return pattern == target


def _match(pattern: Formula, target: Formula, subst: dict[int, Term]) -> bool:
    if type(pattern) is not type(target):
        return False
    if isinstance(pattern, Atom):
        assert isinstance(target, Atom)
        return (
            pattern.predicate == target.predicate
            and len(pattern.args) == len(target.args)
            and all(_match_term(p, t, subst) for p, t in zip(pattern.args, target.args))
        )
    if isinstance(pattern, Falsum):
        return True
    if isinstance(pattern, Not):
        assert isinstance(target, Not)
        return _match(pattern.body, target.body, subst)
    if isinstance(pattern, (And, Or, Implies, Iff)):
        return _match(pattern.left, target.left, subst) and _match(  # type: ignore[union-attr]
            pattern.right, target.right, subst  # type: ignore[union-attr]
        )
    if isinstance(pattern, (ForAll, Exists)):
        assert isinstance(target, (ForAll, Exists))
        return pattern.sort == target.sort and _match(pattern.body, target.body, subst)
    return False


def match_formula(pattern: Formula, target: Formula) -> Optional[dict[int, Term]]:
    """First-order match of ``pattern`` (which may contain holes) against ``target``."""

    subst: dict[int, Term] = {}
    return subst if _match(pattern, target, subst) else None


@dataclass(frozen=True)
class PremiseChain:
    """A premise viewed as ``∀ holes, A1 → ... → An → conclusion`` at one stage."""

    holes: tuple[Optional[str], ...]
    antecedents: tuple[Formula, ...]
    conclusion: Formula
    prenex: bool = True


def premise_chain(formula: Formula) -> list[PremiseChain]:
    """Every way of reading ``formula`` as a rule, by number of consumed antecedents.

    A negation ``¬ A`` is read as ``A → false``. ``prenex`` is False once a
    binder follows an antecedent.
    """

    stages: list[PremiseChain] = []
    holes: list[Optional[str]] = []
    antecedents: list[Formula] = []
    current = formula
    prenex = True
    while True:
        while isinstance(current, ForAll):
            if antecedents:
                prenex = False
            holes.append(current.sort)
            current = open_binder(current, Hole(len(holes) - 1))
        stages.append(PremiseChain(tuple(holes), tuple(antecedents), current, prenex))
        if isinstance(current, Implies):
            antecedents.append(current.left)
            current = current.right
        elif isinstance(current, Not):
            antecedents.append(current.body)
            current = Falsum()
        else:
            return stages


# ---------------------------------------------------------------------------
# Kernel
# ---------------------------------------------------------------------------


class Kernel:
    """Tactic semantics bound to one theory.

    Premises available to proof terms are the theory's axioms plus the local
    hypotheses of the goal; theorems are never used as premises.
    """

    def __init__(self, theory: Theory) -> None:
        self.theory = theory
        self.table = SymbolTable.from_theory(theory)
        self.axioms: dict[str, Formula] = dict(theory.axioms())
        self.reserved = {decl.name for decl in theory.declarations}

    # state construction ----------------------------------------------

    def init_state(self, target: Formula) -> ProofState:
        check_formula(self.table, target, label="target")
        if not is_closed(target):
            raise LogicError("the target must be a closed formula")
        return ProofState((Goal(target),))

    def local_table(self, goal: Goal) -> SymbolTable:
        if not goal.constants:
            return self.table
        return self.table.with_constants(goal.constants)

    def taken_names(self, goal: Goal) -> set[str]:
        return self.reserved | goal.names()

    # elaboration -------------------------------------------------------

    def premise(self, goal: Goal, name: str) -> Optional[Formula]:
        local = goal.lookup(name)
        if local is not None:
            return local
        return self.axioms.get(name)

    def infer(self, goal: Goal, term: ProofTerm) -> Formula:
        """Synthesize the proposition proved by ``term``."""

        if isinstance(term, ProofName):
            formula = self.premise(goal, term.name)
            if formula is not None:
                return formula
            if self.local_table(goal).sort_of(term.name) is not None:
                raise _Failure(f"{term.name} is a term, not a proof")
            decl = self.theory.get(term.name)
            if decl is not None and decl.kind is DeclarationKind.THEOREM:
                raise _Failure(f"theorem {term.name} cannot be used as a premise")
            raise _Failure(f"unknown identifier {term.name}")
        if isinstance(term, ProofApp):
            formula = self.infer(goal, term.head)
            for argument in term.args:
                formula = self._apply_argument(goal, formula, argument)
            return formula
        if isinstance(term, AndIntro):
            return And(self.infer(goal, term.left), self.infer(goal, term.right))
        side = "inr" if term.right else "inl"
        raise _Failure(f"cannot infer the statement proved by or.{side} without an expected type")

    def _apply_argument(self, goal: Goal, formula: Formula, argument: ProofTerm) -> Formula:
        if isinstance(formula, ForAll):
            table = self.local_table(goal)
            if not isinstance(argument, ProofName) or table.sort_of(argument.name) is None:
                expected = formula.sort or "a constant"
                raise _Failure(f"expected a term of sort {expected}, got {format_proof_term(argument)}")
            try:
                return instantiate(formula, argument.name, table=table)
            except LogicError as exc:
                raise _Failure(str(exc)) from exc
        if isinstance(formula, Implies):
            self.check(goal, argument, formula.left)
            return formula.right
        if isinstance(formula, Not):
            self.check(goal, argument, formula.body)
            return Falsum()
        raise _Failure(
            f"a proof of {format_formula(formula)} cannot be applied to {format_proof_term(argument)}"
        )

    def check(self, goal: Goal, term: ProofTerm, expected: Formula) -> None:
        """Check ``term`` against ``expected``, propagating the expected type inward."""

        if isinstance(term, OrIntro):
            if not isinstance(expected, Or):
                raise _Failure(f"or.{'inr' if term.right else 'inl'} cannot prove {format_formula(expected)}")
            self.check(goal, term.proof, expected.right if term.right else expected.left)
            return
        if isinstance(term, AndIntro):
            if not isinstance(expected, And):
                raise _Failure(f"and.intro cannot prove {format_formula(expected)}")
            self.check(goal, term.left, expected.left)
            self.check(goal, term.right, expected.right)
            return
        actual = self.infer(goal, term)
        if actual != expected:
            raise _Failure(
                f"type mismatch: {format_proof_term(term)} proves {format_formula(actual)},"
                f" expected {format_formula(expected)}"
            )

    # tactics -----------------------------------------------------------

    def apply(self, state: ProofState, tactic: Tactic) -> ProofState:
        """Apply ``tactic`` to the first goal of ``state``.

        Raises :class:`TacticError` when the tactic does not apply.
        """

        if isinstance(tactic, Block):
            try:
                return self._run_block(state, tactic, [0])
            except _ScriptFailure as failure:
                raise TacticError("{ ... }", failure.error) from None
        if not state.goals:
            raise TacticError(format_tactic(tactic), "no goals")
        goal, rest = state.goals[0], state.goals[1:]
        if isinstance(tactic, Sorry):
            return ProofState(rest, tainted=True)
        try:
            replacement = self._step(goal, tactic)
        except _Failure as exc:
            raise TacticError(format_tactic(tactic), str(exc)) from None
        return ProofState(tuple(replacement) + rest, state.tainted)

    def _step(self, goal: Goal, tactic: Tactic) -> Sequence[Goal]:
        target = goal.target
        if isinstance(tactic, Intro):
            return [self._intro(goal, tactic.name)]
        if isinstance(tactic, Apply):
            premise = self.infer(goal, tactic.term)
            return [goal.with_target(formula) for formula in self._apply_premise(goal, premise)]
        if isinstance(tactic, Exact):
            self.check(goal, tactic.term, target)
            return []
        if isinstance(tactic, Assumption):
            if any(formula == target for formula in goal.formulas()):
                return []
            raise _Failure("no hypothesis matches the goal")
        if isinstance(tactic, Split):
            if isinstance(target, And):
                return [goal.with_target(target.left), goal.with_target(target.right)]
            if isinstance(target, Iff):
                return [
                    goal.with_target(Implies(target.left, target.right)),
                    goal.with_target(Implies(target.right, target.left)),
                ]
            raise _Failure("the goal is not a conjunction")
        if isinstance(tactic, (Left, Right)):
            if not isinstance(target, Or):
                raise _Failure("the goal is not a disjunction")
            return [goal.with_target(target.left if isinstance(tactic, Left) else target.right)]
        if isinstance(tactic, Cases):
            return self._cases(goal, tactic)
        if isinstance(tactic, Have):
            return self._have(goal, tactic)
        if isinstance(tactic, Contradiction):
            if self.has_contradiction(goal):
                return []
            raise _Failure("no contradictory hypotheses")
        if isinstance(tactic, Exfalso):
            return [goal.with_target(Falsum())]
        if isinstance(tactic, Use):
            if not isinstance(target, Exists):
                raise _Failure("the goal is not an existential statement")
            table = self.local_table(goal)
            sort = table.sort_of(tactic.witness)
            if sort is None:
                raise _Failure(f"unknown constant {tactic.witness}")
            if target.sort is not None and sort and sort != target.sort:
                raise _Failure(f"{tactic.witness} has sort {sort}, expected {target.sort}")
            return [goal.with_target(open_binder(target, Const(tactic.witness)))]
        if isinstance(tactic, Opaque):
            raise _Failure("unsupported tactic")
        raise _Failure("unsupported tactic")

    def _intro(self, goal: Goal, name: Optional[str]) -> Goal:
        target = goal.target
        if isinstance(target, (Implies, Not)):
            hypothesis = name or fresh_name("h", self.taken_names(goal))
            if isinstance(target, Implies):
                return goal.with_target(target.right).with_hypothesis(hypothesis, target.left)
            return goal.with_target(Falsum()).with_hypothesis(hypothesis, target.body)
        if isinstance(target, ForAll):
            taken = self.taken_names(goal)
            if name is not None and name in taken:
                raise _Failure(f"name {name} is already in use")
            constant = name or fresh_name(target.var, taken)
            opened = open_binder(target, Const(constant))
            return goal.with_constant(constant, target.sort).with_target(opened)
        raise _Failure("nothing to introduce")

    def _apply_premise(self, goal: Goal, premise: Formula) -> tuple[Formula, ...]:
        table = self.local_table(goal)
        unresolved: Optional[str] = None
        for stage in premise_chain(premise):
            subst = match_formula(stage.conclusion, goal.target)
            if subst is None:
                continue
            missing = [index for index in range(len(stage.holes)) if index not in subst]
            if missing:
                unresolved = unresolved or "cannot infer every universal binder; supply the constants explicitly"
                continue
            if not all(
                _sort_fits(table, term, stage.holes[index]) for index, term in subst.items()
            ):
                continue
            return tuple(substitute_holes(antecedent, subst) for antecedent in stage.antecedents)
        raise _Failure(unresolved or f"the conclusion does not match {format_formula(goal.target)}")

    def _cases(self, goal: Goal, tactic: Cases) -> list[Goal]:
        term = tactic.term
        local: Optional[str] = None
        if isinstance(term, ProofName) and goal.lookup(term.name) is not None:
            local = term.name
            formula = goal.lookup(term.name)
            base = goal.without_hypothesis(term.name)
        else:
            formula = self.infer(goal, term)
            base = goal
        assert formula is not None
        names = list(tactic.names)
        taken = self.taken_names(base)

        def pick(position: int, default: str) -> str:
            if position < len(names):
                return names[position]
            return default

        if isinstance(formula, Or):
            first = pick(0, local or fresh_name("h", taken))
            second = pick(1, first)
            return [
                base.with_hypothesis(first, formula.left),
                base.with_hypothesis(second, formula.right),
            ]
        if isinstance(formula, (And, Iff)):
            if isinstance(formula, And):
                left, right = formula.left, formula.right
                suffixes = ("left", "right")
            else:
                left = Implies(formula.left, formula.right)
                right = Implies(formula.right, formula.left)
                suffixes = ("mp", "mpr")
            if local:
                defaults = (f"{local}_{suffixes[0]}", f"{local}_{suffixes[1]}")
            else:
                first_default = fresh_name(suffixes[0], taken)
                defaults = (first_default, fresh_name(suffixes[1], taken | {first_default}))
            return [
                base.with_hypothesis(pick(0, defaults[0]), left).with_hypothesis(
                    pick(1, defaults[1]), right
                )
            ]
        if isinstance(formula, Exists):
            if local:
                witness_default, proof_default = f"{local}_w", f"{local}_h"
            else:
                witness_default = fresh_name("w", taken)
                proof_default = fresh_name("h", taken | {witness_default})
            witness = pick(0, witness_default)
            if witness in taken:
                witness = fresh_name(witness, taken)
            opened = open_binder(formula, Const(witness))
            return [base.with_constant(witness, formula.sort).with_hypothesis(pick(1, proof_default), opened)]
        if isinstance(formula, Falsum):
            return []
        raise _Failure(f"cannot eliminate {format_formula(formula)}")

    def _have(self, goal: Goal, tactic: Have) -> list[Goal]:
        name = tactic.name or "this"
        statement = tactic.formula
        if statement is not None:
            try:
                check_formula(self.local_table(goal), statement, label=name)
            except LogicError as exc:
                raise _Failure(str(exc)) from exc
        if tactic.proof is not None:
            if statement is not None:
                self.check(goal, tactic.proof, statement)
            else:
                statement = self.infer(goal, tactic.proof)
            return [goal.with_hypothesis(name, statement)]
        if statement is None:
            raise _Failure("have needs a statement or a proof")
        return [goal.with_target(statement), goal.with_hypothesis(name, statement)]

    @staticmethod
    def has_contradiction(goal: Goal) -> bool:
        formulas = goal.formulas()
        if isinstance(goal.target, Not):
            formulas.append(goal.target.body)
        known = set(formulas)
        if Falsum() in known:
            return True
        return any(isinstance(formula, Not) and formula.body in known for formula in formulas)

    # scripts -----------------------------------------------------------

    def _run_items(self, state: ProofState, items: Sequence[Tactic], counter: list[int]) -> ProofState:
        for item in items:
            if isinstance(item, Block):
                state = self._run_block(state, item, counter)
                continue
            counter[0] += 1
            try:
                state = self.apply(state, item)
            except TacticError as exc:
                raise _ScriptFailure(counter[0], str(exc), state) from exc
        return state

    def _run_block(self, state: ProofState, block: Block, counter: list[int]) -> ProofState:
        if not state.goals:
            counter[0] += 1
            raise _ScriptFailure(counter[0], "{ ... }: no goals", state)
        focused = ProofState(state.goals[:1], state.tainted)
        inner = self._run_items(focused, block.tactics, counter)
        if not inner.is_complete:
            raise _ScriptFailure(
                counter[0], f"{{ ... }}: {len(inner.goals)} unsolved goal(s) remain", inner
            )
        return ProofState(state.goals[1:], state.tainted or inner.tainted)

    def replay(self, target: Formula, script: Union[TacticScript, Sequence[Tactic]], *, name: str = "goal") -> ProofReport:
        """Run a script against ``target`` and classify the outcome."""

        tactics = script.tactics if isinstance(script, TacticScript) else tuple(script)
        state = self.init_state(target)
        counter = [0]
        try:
            state = self._run_items(state, tactics, counter)
        except _ScriptFailure as failure:
            logger.debug(
                "Proof script failed",
                extra={"theorem": name, "step": failure.step, "error": failure.error},
            )
            return ProofReport(
                name,
                ProofStatus.FAILED,
                # Lean admits a declaration that failed to elaborate with an implicit sorry.
                tainted=True,
                step=failure.step,
                error=failure.error,
                remaining_goals=len(failure.state.goals),
                steps_executed=failure.step - 1,
            )
        status = ProofStatus.COMPLETE if state.is_complete else ProofStatus.INCOMPLETE
        return ProofReport(
            name,
            status,
            tainted=state.tainted,
            remaining_goals=len(state.goals),
            steps_executed=counter[0],
        )


def _sort_fits(table: SymbolTable, term: Term, sort: Optional[str]) -> bool:
    if sort is None or not isinstance(term, Const):
        return True
    actual = table.sort_of(term.name)
    return not actual or actual == sort


class _ScriptFailure(Exception):
    def __init__(self, step: int, error: str, state: ProofState) -> None:
        super().__init__(error)
        self.step = step
        self.error = error
        self.state = state


def init_state(theory: Theory, target: Formula) -> ProofState:
    return Kernel(theory).init_state(target)


def apply_tactic(theory: Theory, state: ProofState, tactic: Tactic) -> ProofState:
    return Kernel(theory).apply(state, tactic)


def check_script(
    theory: Theory, theorem: str, script: Optional[TacticScript] = None
) -> ProofReport:
    """Replay ``script`` (or the theorem's attached script) against theorem ``theorem``."""

    decl = theory.get(theorem)
    if decl is None or decl.kind is not DeclarationKind.THEOREM or decl.formula is None:
        raise LogicError(f"unknown theorem {theorem}")
    proof = script if script is not None else decl.script
    if proof is None:
        raise LogicError(f"theorem {theorem} has no proof script")
    return Kernel(theory).replay(decl.formula, proof, name=theorem)


def check_theory(theory: Theory) -> list[ProofReport]:
    """Replay every attached proof script in declaration order."""

    kernel = Kernel(theory)
    return [
        kernel.replay(decl.formula, decl.script, name=decl.name)
        for decl in theory.theorems()
        if decl.script is not None and decl.formula is not None
    ]
