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

"""First-order logic data model: terms, formulas, declarations and theories.

Bound variables are stored as de Bruijn indices, so two formulas that differ
only in the names of their binders compare equal. Binder names are kept as
printing hints and never take part in equality.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Callable, ClassVar, Optional, Union

from .exceptions import LogicError

if TYPE_CHECKING:  # pragma: no cover - typing only
    from .tactics import TacticScript

__all__ = [
    "SourceSpan",
    "Const",
    "Var",
    "Hole",
    "Term",
    "Atom",
    "Falsum",
    "Not",
    "And",
    "Or",
    "Implies",
    "Iff",
    "ForAll",
    "Exists",
    "Formula",
    "Signature",
    "DeclarationKind",
    "Declaration",
    "Theory",
    "SymbolTable",
    "DiagnosticKind",
    "Diagnostic",
    "bind",
    "open_binder",
    "substitute_holes",
    "rename_constants",
    "constants_of",
    "is_closed",
    "instantiate",
    "negate",
    "check_wf",
    "check_formula",
    "format_formula",
    "format_term",
    "canonical_text",
]


@dataclass(frozen=True)
class SourceSpan:
    """Location of a syntactic item in its source text."""

    start: int
    end: int
    line: int
    column: int

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}"


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    """A declared (or locally introduced) constant."""

    name: str


@dataclass(frozen=True)
class Var:
    """A bound variable; ``index`` counts enclosing binders, innermost first."""

    index: int
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class Hole:
    """An unresolved instantiation slot used while matching premises."""

    index: int


Term = Union[Const, Var, Hole]


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Falsum:
    """The absurd proposition."""


@dataclass(frozen=True)
class Not:
    body: Formula


@dataclass(frozen=True)
class _Binary:
    left: Formula
    right: Formula

    symbol: ClassVar[str] = "?"
    precedence: ClassVar[int] = 0


@dataclass(frozen=True)
class And(_Binary):
    symbol: ClassVar[str] = "∧"
    precedence: ClassVar[int] = 4


@dataclass(frozen=True)
class Or(_Binary):
    symbol: ClassVar[str] = "∨"
    precedence: ClassVar[int] = 3


@dataclass(frozen=True)
class Implies(_Binary):
    symbol: ClassVar[str] = "→"
    precedence: ClassVar[int] = 2


@dataclass(frozen=True)
class Iff(_Binary):
    symbol: ClassVar[str] = "↔"
    precedence: ClassVar[int] = 1


@dataclass(frozen=True)
class _Quantifier:
    sort: Optional[str]
    body: Formula
    var: str = field(default="x", compare=False)

    symbol: ClassVar[str] = "?"


@dataclass(frozen=True)
class ForAll(_Quantifier):
    symbol: ClassVar[str] = "∀"


@dataclass(frozen=True)
class Exists(_Quantifier):
    symbol: ClassVar[str] = "∃"


Formula = Union[Atom, Falsum, Not, And, Or, Implies, Iff, ForAll, Exists]

_NOT_PRECEDENCE = 5
_ATOM_PRECEDENCE = 6


def _map_terms(
    formula: Formula, fn: Callable[[Term, int], Term], depth: int = 0
) -> Formula:
    if isinstance(formula, Atom):
        return Atom(formula.predicate, tuple(fn(arg, depth) for arg in formula.args))
    if isinstance(formula, Falsum):
        return formula
    if isinstance(formula, Not):
        return Not(_map_terms(formula.body, fn, depth))
    if isinstance(formula, _Binary):
        return type(formula)(
            _map_terms(formula.left, fn, depth), _map_terms(formula.right, fn, depth)
        )
    if isinstance(formula, _Quantifier):
        return type(formula)(
            formula.sort, _map_terms(formula.body, fn, depth + 1), formula.var
        )
    raise LogicError(f"Unsupported formula node: {formula!r}")


def _iter_terms(formula: Formula, depth: int = 0) -> Iterator[tuple[Term, int]]:
    if isinstance(formula, Atom):
        for arg in formula.args:
            yield arg, depth
    elif isinstance(formula, Not):
        yield from _iter_terms(formula.body, depth)
    elif isinstance(formula, _Binary):
        yield from _iter_terms(formula.left, depth)
        yield from _iter_terms(formula.right, depth)
    elif isinstance(formula, _Quantifier):
        yield from _iter_terms(formula.body, depth + 1)


def _binder_names(formula: Formula) -> set[str]:
    if isinstance(formula, Not):
        return _binder_names(formula.body)
    if isinstance(formula, _Binary):
        return _binder_names(formula.left) | _binder_names(formula.right)
    if isinstance(formula, _Quantifier):
        return {formula.var} | _binder_names(formula.body)
    return set()


def bind(name: str, body: Formula) -> Formula:
    """Abstract free occurrences of constant ``name`` into the outermost binder slot.

    The result is meant to become the body of a new quantifier.
    """

    def replace(term: Term, depth: int) -> Term:
        if isinstance(term, Const) and term.name == name:
            return Var(depth, name)
        return term

    return _map_terms(body, replace)


def open_binder(quantifier: _Quantifier, term: Term) -> Formula:
    """Return the quantifier's body with its bound variable replaced by ``term``."""

    def replace(current: Term, depth: int) -> Term:
        if isinstance(current, Var):
            if current.index == depth:
                return term
            if current.index > depth:
                return Var(current.index - 1, current.name)
        return current

    return _map_terms(quantifier.body, replace)


def substitute_holes(formula: Formula, mapping: Mapping[int, Term]) -> Formula:
    def replace(term: Term, depth: int) -> Term:
        if isinstance(term, Hole) and term.index in mapping:
            return mapping[term.index]
        return term

    return _map_terms(formula, replace)


def rename_constants(formula: Formula, mapping: Mapping[str, str]) -> Formula:
    def replace(term: Term, depth: int) -> Term:
        if isinstance(term, Const) and term.name in mapping:
            return Const(mapping[term.name])
        return term

    return _map_terms(formula, replace)


def constants_of(formula: Formula) -> set[str]:
    return {term.name for term, _ in _iter_terms(formula) if isinstance(term, Const)}


def is_closed(formula: Formula) -> bool:
    """True when every bound variable refers to an enclosing binder and no holes remain."""

    for term, depth in _iter_terms(formula):
        if isinstance(term, Hole):
            return False
        if isinstance(term, Var) and term.index >= depth:
            return False
    return True


def negate(formula: Formula) -> Formula:
    """Wrap the closed ``formula`` in a negation. Double negations are kept as written."""

    if not is_closed(formula):
        raise LogicError("cannot negate an open formula")
    return Not(formula)


# ---------------------------------------------------------------------------
# Declarations and theories
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Signature:
    """Type of a declared constant, e.g. ``obj → obj → Prop``."""

    domain: tuple[str, ...]
    codomain: str

    def __str__(self) -> str:
        return " → ".join((*self.domain, self.codomain))


class DeclarationKind(str, Enum):
    SORT = "sort"
    CONSTANT = "constant"
    PREDICATE = "predicate"
    FUNCTION = "function"
    AXIOM = "axiom"
    THEOREM = "theorem"


@dataclass(frozen=True)
class Declaration:
    kind: DeclarationKind
    name: str
    signature: Optional[Signature] = None
    formula: Optional[Formula] = None
    script: Optional[TacticScript] = None
    comment: Optional[str] = field(default=None, compare=False)
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True)
class Theory:
    """An ordered sequence of declarations.

    Equality is alpha-equivalence: comments, spans and binder names are ignored.
    """

    declarations: tuple[Declaration, ...] = ()
    _index: dict[str, Declaration] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        declarations = tuple(self.declarations)
        object.__setattr__(self, "declarations", declarations)
        index: dict[str, Declaration] = {}
        for declaration in declarations:
            index.setdefault(declaration.name, declaration)
        object.__setattr__(self, "_index", index)

    def get(self, name: str) -> Optional[Declaration]:
        return self._index.get(name)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def of_kind(self, kind: DeclarationKind) -> list[Declaration]:
        return [item for item in self.declarations if item.kind is kind]

    def sorts(self) -> list[str]:
        return [item.name for item in self.of_kind(DeclarationKind.SORT)]

    def constants(self) -> dict[str, str]:
        return {
            item.name: item.signature.codomain
            for item in self.of_kind(DeclarationKind.CONSTANT)
            if item.signature is not None
        }

    def predicates(self) -> dict[str, tuple[str, ...]]:
        return {
            item.name: item.signature.domain
            for item in self.of_kind(DeclarationKind.PREDICATE)
            if item.signature is not None
        }

    def axioms(self) -> list[tuple[str, Formula]]:
        return [
            (item.name, item.formula)
            for item in self.of_kind(DeclarationKind.AXIOM)
            if item.formula is not None
        ]

    def theorems(self) -> list[Declaration]:
        return self.of_kind(DeclarationKind.THEOREM)

    def extend(self, *declarations: Declaration) -> Theory:
        return Theory(self.declarations + tuple(declarations))

    def without_theorems(self) -> Theory:
        return Theory(
            tuple(
                item for item in self.declarations if item.kind is not DeclarationKind.THEOREM
            )
        )


@dataclass(frozen=True)
class SymbolTable:
    """Sorts, constants and predicates visible at some point of a theory."""

    sorts: frozenset[str] = frozenset()
    constants: Mapping[str, str] = field(default_factory=dict)
    predicates: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    @classmethod
    def from_theory(cls, theory: Theory) -> SymbolTable:
        return cls(
            sorts=frozenset(theory.sorts()),
            constants=theory.constants(),
            predicates=theory.predicates(),
        )

    def with_constants(self, extra: Iterable[tuple[str, Optional[str]]]) -> SymbolTable:
        constants = dict(self.constants)
        for name, sort in extra:
            constants[name] = sort or ""
        return SymbolTable(self.sorts, constants, self.predicates)

    def sort_of(self, name: str) -> Optional[str]:
        return self.constants.get(name)

    def constants_of_sort(self, sort: Optional[str]) -> list[str]:
        return [
            name
            for name, declared in self.constants.items()
            if sort is None or not declared or declared == sort
        ]


class DiagnosticKind(str, Enum):
    UNKNOWN_SYMBOL = "unknown-symbol"
    ARITY_MISMATCH = "arity-mismatch"
    SORT_MISMATCH = "sort-mismatch"
    DUPLICATE_NAME = "duplicate-name"
    FREE_VARIABLE = "free-variable"
    UNSUPPORTED = "unsupported-construct"


@dataclass(frozen=True)
class Diagnostic:
    declaration: str
    kind: DiagnosticKind
    message: str
    span: Optional[SourceSpan] = None

    def __str__(self) -> str:
        location = f" ({self.span})" if self.span is not None else ""
        return f"{self.declaration}: {self.kind.value}: {self.message}{location}"


def _is_numeral(name: str) -> bool:
    return bool(name) and name[0].isdigit()


def _formula_diagnostics(
    formula: Formula,
    table: SymbolTable,
    declaration: str,
    span: Optional[SourceSpan],
) -> list[Diagnostic]:
    diagnostics: list[Diagnostic] = []
    escaped = _binder_names(formula)

    def report(kind: DiagnosticKind, message: str) -> None:
        diagnostics.append(Diagnostic(declaration, kind, message, span))

    def term_sort(term: Term, binders: list[Optional[str]]) -> Optional[str]:
        if isinstance(term, Var):
            if term.index >= len(binders):
                report(DiagnosticKind.FREE_VARIABLE, f"variable {term.name} is not bound")
                return None
            return binders[-1 - term.index]
        if isinstance(term, Hole):
            report(DiagnosticKind.UNSUPPORTED, "unresolved placeholder")
            return None
        if _is_numeral(term.name):
            report(DiagnosticKind.UNSUPPORTED, f"numeric literal {term.name} is not supported")
            return None
        if term.name in table.constants:
            return table.constants[term.name] or None
        if term.name in escaped:
            report(DiagnosticKind.FREE_VARIABLE, f"variable {term.name} is used outside its binder")
        else:
            report(DiagnosticKind.UNKNOWN_SYMBOL, f"unknown constant {term.name}")
        return None

    def walk(node: Formula, binders: list[Optional[str]]) -> None:
        if isinstance(node, Atom):
            if node.predicate == "=":
                report(DiagnosticKind.UNSUPPORTED, "equality is not supported")
                for arg in node.args:
                    term_sort(arg, binders)
                return
            domain = table.predicates.get(node.predicate)
            if domain is None:
                hint = " (declared as a constant)" if node.predicate in table.constants else ""
                report(DiagnosticKind.UNKNOWN_SYMBOL, f"unknown predicate {node.predicate}{hint}")
                for arg in node.args:
                    term_sort(arg, binders)
                return
            if len(domain) != len(node.args):
                report(
                    DiagnosticKind.ARITY_MISMATCH,
                    f"{node.predicate} expects {len(domain)} argument(s), got {len(node.args)}",
                )
            for position, arg in enumerate(node.args):
                actual = term_sort(arg, binders)
                expected = domain[position] if position < len(domain) else None
                if actual and expected and actual != expected:
                    report(
                        DiagnosticKind.SORT_MISMATCH,
                        f"argument {position + 1} of {node.predicate} has sort {actual},"
                        f" expected {expected}",
                    )
        elif isinstance(node, Not):
            walk(node.body, binders)
        elif isinstance(node, _Binary):
            walk(node.left, binders)
            walk(node.right, binders)
        elif isinstance(node, _Quantifier):
            if node.sort is not None and node.sort not in table.sorts:
                report(DiagnosticKind.UNKNOWN_SYMBOL, f"unknown sort {node.sort}")
            walk(node.body, [*binders, node.sort])

    walk(formula, [])
    return diagnostics


def check_wf(theory: Theory) -> list[Diagnostic]:
    """Return every well-formedness violation of ``theory``; empty means well-formed.

    Each symbol must be declared before it is used.
    """

    diagnostics: list[Diagnostic] = []
    sorts: set[str] = set()
    constants: dict[str, str] = {}
    predicates: dict[str, tuple[str, ...]] = {}
    seen: set[str] = set()

    for item in theory.declarations:
        if item.name in seen:
            diagnostics.append(
                Diagnostic(item.name, DiagnosticKind.DUPLICATE_NAME, "name declared twice", item.span)
            )
            continue
        seen.add(item.name)
        signature = item.signature
        if item.kind is DeclarationKind.SORT:
            sorts.add(item.name)
        elif item.kind is DeclarationKind.CONSTANT and signature is not None:
            if signature.codomain not in sorts:
                diagnostics.append(
                    Diagnostic(
                        item.name,
                        DiagnosticKind.UNKNOWN_SYMBOL,
                        f"unknown sort {signature.codomain}",
                        item.span,
                    )
                )
            constants[item.name] = signature.codomain
        elif item.kind is DeclarationKind.PREDICATE and signature is not None:
            for sort in signature.domain:
                if sort not in sorts:
                    diagnostics.append(
                        Diagnostic(item.name, DiagnosticKind.UNKNOWN_SYMBOL, f"unknown sort {sort}", item.span)
                    )
            predicates[item.name] = signature.domain
        elif item.kind is DeclarationKind.FUNCTION:
            diagnostics.append(
                Diagnostic(
                    item.name,
                    DiagnosticKind.UNSUPPORTED,
                    f"function symbol of type {signature} is not supported",
                    item.span,
                )
            )
        elif item.formula is not None:
            table = SymbolTable(frozenset(sorts), dict(constants), dict(predicates))
            diagnostics.extend(_formula_diagnostics(item.formula, table, item.name, item.span))
    return diagnostics


def check_formula(table: SymbolTable, formula: Formula, *, label: str = "formula") -> None:
    """Raise :class:`LogicError` unless ``formula`` is well-formed under ``table``."""

    problems = _formula_diagnostics(formula, table, label, None)
    if problems:
        raise LogicError("; ".join(str(problem) for problem in problems))


def instantiate(
    formula: Formula,
    witness: Union[Term, str],
    *,
    table: Optional[SymbolTable] = None,
) -> Formula:
    """Instantiate the outermost universal binder of ``formula`` with ``witness``."""

    if not isinstance(formula, ForAll):
        raise LogicError("only universally quantified formulas can be instantiated")
    term = Const(witness) if isinstance(witness, str) else witness
    if not isinstance(term, Const):
        raise LogicError("the witness must be a constant")
    if table is not None:
        sort = table.sort_of(term.name)
        if sort is None:
            raise LogicError(f"unknown constant {term.name}")
        if formula.sort is not None and sort and sort != formula.sort:
            raise LogicError(f"{term.name} has sort {sort}, expected {formula.sort}")
    return open_binder(formula, term)


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def format_term(term: Term, names: tuple[str, ...] = ()) -> str:
    if isinstance(term, Const):
        return term.name
    if isinstance(term, Hole):
        return f"?{term.index}"
    if term.index < len(names):
        return names[-1 - term.index]
    return term.name


def _precedence(formula: Formula) -> int:
    if isinstance(formula, (Atom, Falsum)):
        return _ATOM_PRECEDENCE
    if isinstance(formula, Not):
        return _NOT_PRECEDENCE
    if isinstance(formula, _Binary):
        return formula.precedence
    return 0


def _child(formula: Formula, names: tuple[str, ...], tail: bool, minimum: int) -> str:
    if isinstance(formula, _Quantifier):
        text = _render(formula, names, True)
        return text if tail else f"({text})"
    if _precedence(formula) < minimum:
        return f"({_render(formula, names, True)})"
    return _render(formula, names, tail)


def _render(formula: Formula, names: tuple[str, ...], tail: bool) -> str:
    if isinstance(formula, Atom):
        return " ".join([formula.predicate, *(format_term(arg, names) for arg in formula.args)])
    if isinstance(formula, Falsum):
        return "false"
    if isinstance(formula, Not):
        return "¬ " + _child(formula.body, names, tail, _NOT_PRECEDENCE)
    if isinstance(formula, _Binary):
        left = _child(formula.left, names, False, formula.precedence + 1)
        right = _child(formula.right, names, tail, formula.precedence)
        return f"{left} {formula.symbol} {right}"
    if isinstance(formula, _Quantifier):
        taken = set(names) | constants_of(formula.body)
        name, suffix = formula.var, 0
        while name in taken:
            suffix += 1
            name = f"{formula.var}_{suffix}"
        sort = f" : {formula.sort}" if formula.sort else ""
        body = _render(formula.body, (*names, name), True)
        return f"{formula.symbol} {name}{sort}, {body}"
    raise LogicError(f"Unsupported formula node: {formula!r}")


def format_formula(formula: Formula) -> str:
    """Render ``formula`` in surface syntax with minimal parentheses."""

    return _render(formula, (), True)


def _canonical(formula: Formula, depth: int) -> str:
    if isinstance(formula, Atom):
        parts = [formula.predicate]
        for arg in formula.args:
            if isinstance(arg, Var):
                parts.append(f"#{depth - 1 - arg.index}")
            else:
                parts.append(format_term(arg))
        return " ".join(parts)
    if isinstance(formula, Falsum):
        return "⊥"
    if isinstance(formula, Not):
        return "¬" + _canonical(formula.body, depth)
    if isinstance(formula, _Binary):
        return f"({_canonical(formula.left, depth)} {formula.symbol} {_canonical(formula.right, depth)})"
    if isinstance(formula, _Quantifier):
        sort = f" : {formula.sort}" if formula.sort else ""
        return f"({formula.symbol}#{depth}{sort}, {_canonical(formula.body, depth + 1)})"
    raise LogicError(f"Unsupported formula node: {formula!r}")


def canonical_text(formula: Formula) -> str:
    """Deterministic, fully parenthesised rendering with binders renamed by depth."""

    return _canonical(formula, 0)
