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

"""Forward-chaining ground truth for Horn-literal theories, and a generator of such theories."""

from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import NamedTuple, Optional

from pydantic import BaseModel, ConfigDict, Field

from .corpus import ProblemRecord
from .exceptions import InstanceGenerationError, OracleFragmentError
from .interpreter import Verdict
from .logic import And, Atom, Const, ForAll, Formula, Implies, Not, SymbolTable, Theory, format_formula, open_binder
from .parser import parse_theory

__all__ = [
    "GroundLiteral",
    "OracleResult",
    "oracle",
    "InstanceParams",
    "GeneratedInstance",
    "generate_instances",
]

logger = logging.getLogger(__name__)


class GroundLiteral(NamedTuple):
    positive: bool
    predicate: str
    args: tuple[str, ...]

    @property
    def complement(self) -> GroundLiteral:
        return GroundLiteral(not self.positive, self.predicate, self.args)

    def formula(self) -> Formula:
        atom = Atom(self.predicate, tuple(Const(arg) for arg in self.args))
        return atom if self.positive else Not(atom)


@dataclass(frozen=True)
class _Rule:
    body: tuple[GroundLiteral, ...]
    head: GroundLiteral


def _literal(formula: Formula, where: str) -> GroundLiteral:
    positive = True
    if isinstance(formula, Not):
        positive, formula = False, formula.body
    if isinstance(formula, Atom) and all(isinstance(arg, Const) for arg in formula.args):
        return GroundLiteral(positive, formula.predicate, tuple(arg.name for arg in formula.args if isinstance(arg, Const)))
    raise OracleFragmentError(f"{where}: {format_formula(formula)} is not a ground literal")


def _conjuncts(formula: Formula) -> Iterable[Formula]:
    if isinstance(formula, And):
        yield from _conjuncts(formula.left)
        yield from _conjuncts(formula.right)
    else:
        yield formula


def _ground_rules(name: str, formula: Formula, table: SymbolTable) -> list[_Rule]:
    sorts: list[Optional[str]] = []
    matrix = formula
    while isinstance(matrix, ForAll):
        sorts.append(matrix.sort)
        matrix = matrix.body
    if not isinstance(matrix, Implies):
        raise OracleFragmentError(f"{name}: {format_formula(formula)} is not a rule or a ground literal")
    rules = []
    for assignment in itertools.product(*(table.constants_of_sort(sort) for sort in sorts)):
        current = formula
        for constant in assignment:
            assert isinstance(current, ForAll)
            current = open_binder(current, Const(constant))
        assert isinstance(current, Implies)
        body = tuple(_literal(part, name) for part in _conjuncts(current.left))
        rules.append(_Rule(body, _literal(current.right, name)))
    return rules


def _fragment(theory: Theory) -> tuple[dict[GroundLiteral, int], list[_Rule]]:
    table = SymbolTable.from_theory(theory)
    facts: dict[GroundLiteral, int] = {}
    rules: list[_Rule] = []
    for name, formula in theory.axioms():
        if isinstance(formula, (ForAll, Implies)):
            rules.extend(_ground_rules(name, formula, table))
        else:
            facts[_literal(formula, name)] = 0
    return facts, rules


def _chain(
    facts: Mapping[GroundLiteral, int],
    rules: Sequence[_Rule],
    depth_cap: Optional[int] = None,
) -> dict[GroundLiteral, int]:
    known = dict(facts)
    depth = 0
    while depth_cap is None or depth < depth_cap:
        depth += 1
        fresh = {
            rule.head: depth
            for rule in rules
            if rule.head not in known and all(literal in known for literal in rule.body)
        }
        if not fresh:
            break
        known.update(fresh)
    return known


def _consistent(known: Iterable[GroundLiteral]) -> bool:
    literals = set(known)
    return not any(literal.complement in literals for literal in literals if literal.positive)


@dataclass(frozen=True)
class OracleResult:
    derived: Mapping[GroundLiteral, int]
    label: Verdict
    consistent: bool
    depth: Optional[int] = None


def oracle(theory: Theory, question: Formula, depth_cap: Optional[int] = None) -> OracleResult:
    """Label ``question`` by forward chaining over ``theory``.

    Facts must be ground literals and rules universally quantified implications
    from a conjunction of literals to a literal. ``depth_cap`` bounds the
    number of rule rounds; None runs to the fixpoint.
    """

    facts, rules = _fragment(theory)
    target = _literal(question, "question")
    derived = _chain(facts, rules, depth_cap)
    if target in derived:
        label, depth = Verdict.TRUE, derived[target]
    elif target.complement in derived:
        label, depth = Verdict.FALSE, derived[target.complement]
    else:
        label, depth = Verdict.UNKNOWN, None
    return OracleResult(derived, label, _consistent(derived), depth)


class InstanceParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    num_constants: int = Field(default=4, ge=1, le=8)
    num_unary: int = Field(default=6, ge=1, le=12)
    num_binary: int = Field(default=2, ge=0, le=5)
    num_facts: int = Field(default=6, ge=1)
    num_rules: int = Field(default=8, ge=0, le=15)
    max_depth: int = Field(default=3, ge=1, le=5, description="Deepest derivation a question may need.")
    max_body: int = Field(default=2, ge=1, le=3, description="Literals per rule body.")
    negation_rate: float = Field(default=0.25, ge=0.0, le=1.0)
    max_attempts: int = Field(default=2000, ge=1, description="Draws per instance before giving up.")


_CONSTANTS = ("Anne", "Bob", "Charlie", "Dave", "Erin", "Fiona", "Gary", "Harry")
_UNARY = ("big", "blue", "cold", "furry", "green", "kind", "nice", "quiet", "red", "rough", "round", "young")
_BINARY = ("chases", "likes", "needs", "sees", "visits")


@dataclass(frozen=True)
class GeneratedInstance:
    theory: Theory
    source: str
    context: tuple[str, ...]
    question: Formula
    label: Verdict
    depth: Optional[int] = None

    def to_record(self, identifier: str) -> ProblemRecord:
        return ProblemRecord(
            id=identifier,
            context=list(self.context),
            question=_sentence(_literal(self.question, "question")),
            options=["True", "False", "Unknown"],
            label=self.label.value,
            theory=self.source,
            formal_question=format_formula(self.question),
        )


def _sentence(literal: GroundLiteral, subject: Optional[str] = None) -> str:
    who = subject or literal.args[0]
    if len(literal.args) == 1:
        return f"{who} is {'' if literal.positive else 'not '}{literal.predicate}."
    verb = literal.predicate if literal.positive else f"does not {literal.predicate[:-1]}"
    return f"{who} {verb} {literal.args[1]}."


class _Draw:
    """One random theory over a fixed vocabulary."""

    def __init__(self, rng: random.Random, params: InstanceParams) -> None:
        self.rng = rng
        self.params = params
        self.constants = list(_CONSTANTS[: params.num_constants])
        self.unary = rng.sample(_UNARY, params.num_unary)
        self.binary = rng.sample(_BINARY, params.num_binary)

    def literal(self, subject: str) -> GroundLiteral:
        positive = self.rng.random() >= self.params.negation_rate
        if self.binary and self.rng.random() < 0.25:
            return GroundLiteral(positive, self.rng.choice(self.binary), (subject, self.rng.choice(self.constants)))
        return GroundLiteral(positive, self.rng.choice(self.unary), (subject,))

    def build(self) -> tuple[str, tuple[str, ...]]:
        lines = ["universe u", "", "constant obj : Type u", ""]
        lines += [f"constant {name} : obj" for name in self.constants]
        lines.append("")
        lines += [f"constant {name} : obj → Prop" for name in self.unary]
        lines += [f"constant {name} : obj → obj → Prop" for name in self.binary]
        lines.append("")
        context: list[str] = []
        facts: set[GroundLiteral] = set()
        while len(facts) < self.params.num_facts:
            fact = self.literal(self.rng.choice(self.constants))
            if fact.complement not in facts:
                facts.add(fact)
        for number, fact in enumerate(sorted(facts, key=lambda item: (item.args, item.predicate, item.positive)), start=1):
            lines.append(f"axiom F{number} : {format_formula(fact.formula())}")
            context.append(_sentence(fact))
        for number in range(1, self.params.num_rules + 1):
            size = self.rng.randint(1, self.params.max_body)
            body = [self.literal("x") for _ in range(size)]
            head = self.literal("x")
            premise = " ∧ ".join(_open_text(part) for part in body)
            lines.append(f"axiom R{number} : ∀ x : obj, {premise} → {_open_text(head)}")
            clauses = " and ".join(_sentence(part, "it").rstrip(".").replace("it ", "", 1) for part in body)
            context.append(f"If something {clauses} then it {_sentence(head, 'it').replace('it ', '', 1)}")
        return "\n".join(lines) + "\n", tuple(context)


def _open_text(literal: GroundLiteral) -> str:
    text = " ".join((literal.predicate, *literal.args))
    return text if literal.positive else f"¬ {text}"


def _hypothetically_consistent(
    facts: Mapping[GroundLiteral, int],
    rules: Sequence[_Rule],
    derived: Mapping[GroundLiteral, int],
    vocabulary: Iterable[GroundLiteral],
) -> bool:
    for literal in vocabulary:
        if literal in derived or literal.complement in derived:
            continue
        if not _consistent(_chain({**facts, literal: 0}, rules)):
            return False
    return True


def _vocabulary(draw: _Draw) -> list[GroundLiteral]:
    atoms = [GroundLiteral(True, name, (constant,)) for name in draw.unary for constant in draw.constants]
    atoms += [
        GroundLiteral(True, name, (left, right))
        for name in draw.binary
        for left in draw.constants
        for right in draw.constants
    ]
    return [literal for atom in atoms for literal in (atom, atom.complement)]


def _pick(rng: random.Random, wanted: Verdict, derived: Mapping[GroundLiteral, int], draw: _Draw, max_depth: int) -> Optional[tuple[GroundLiteral, Optional[int]]]:
    if wanted is Verdict.UNKNOWN:
        open_literals = [
            literal
            for literal in _vocabulary(draw)
            if literal not in derived and literal.complement not in derived
        ]
        return (rng.choice(open_literals), None) if open_literals else None
    reachable = sorted(
        (literal for literal, depth in derived.items() if depth <= max_depth),
        key=lambda literal: (-derived[literal], literal),
    )
    if not reachable:
        return None
    deep = [literal for literal in reachable if derived[literal] >= 1]
    chosen = rng.choice(deep or reachable)
    question = chosen if wanted is Verdict.TRUE else chosen.complement
    return question, derived[chosen]


def generate_instances(seed: int, count: int, params: Optional[InstanceParams] = None) -> list[GeneratedInstance]:
    """Random consistent instances with labels cycling True, False, Unknown."""

    if count < 0:
        raise InstanceGenerationError("count must not be negative")
    settings = params or InstanceParams()
    atoms = settings.num_unary * settings.num_constants + settings.num_binary * settings.num_constants**2
    if settings.num_facts > atoms:
        raise InstanceGenerationError(f"num_facts exceeds the {atoms} available ground atoms")
    rng = random.Random(seed)
    labels = (Verdict.TRUE, Verdict.FALSE, Verdict.UNKNOWN)
    instances: list[GeneratedInstance] = []
    for index in range(count):
        wanted = labels[index % len(labels)]
        for _ in range(settings.max_attempts):
            draw = _Draw(rng, settings)
            source, context = draw.build()
            theory = parse_theory(source)
            facts, rules = _fragment(theory)
            derived = _chain(facts, rules)
            if not _consistent(derived):
                continue
            if not _hypothetically_consistent(facts, rules, derived, _vocabulary(draw)):
                continue
            picked = _pick(rng, wanted, derived, draw, settings.max_depth)
            if picked is None:
                continue
            literal, depth = picked
            instances.append(GeneratedInstance(theory, source, context, literal.formula(), wanted, depth))
            break
        else:
            raise InstanceGenerationError(
                f"No {wanted.value} instance found in {settings.max_attempts} draws; loosen the parameters"
            )
    logger.debug("Generated instances", extra={"seed": seed, "count": count})
    return instances
