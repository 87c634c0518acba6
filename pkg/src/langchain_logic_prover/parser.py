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

"""Parser and pretty-printer for the supported Lean 3 subset.

The grammar is LALR. Shift/reduce ambiguities around quantifiers are resolved
as shifts by lark, so a quantifier body extends as far to the right as possible.
"""

from __future__ import annotations

import logging
import re
import unicodedata
from dataclasses import replace
from functools import lru_cache
from typing import Any, Optional

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedInput, VisitError

from .exceptions import TheoryCheckError, TheoryParseError
from .logic import (
    And,
    Atom,
    Const,
    Declaration,
    DeclarationKind,
    Exists,
    Falsum,
    ForAll,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Signature,
    SourceSpan,
    Theory,
    bind,
    check_wf,
    format_formula,
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
)

__all__ = [
    "GRAMMAR",
    "parse_theory",
    "parse_formula",
    "parse_tactic",
    "parse_script",
    "pretty_print",
]

logger = logging.getLogger(__name__)

GRAMMAR = r"""
start: _item*
formula_start: formula
tactic_start: _tactic_item
proof_start: proof

_item: universe_decl | constant_decl | axiom_decl | theorem_decl

universe_decl: ("universe" | "universes") NAME+
constant_decl: ("constant" | "constants") NAME+ ":" type_expr
axiom_decl: "axiom" NAME ":" formula
theorem_decl: ("theorem" | "lemma") NAME ":" formula [":=" proof]

type_expr: type_atom (_arrow type_atom)*
?type_atom: NAME               -> sort_name
          | "Type" [NAME]      -> type_universe
          | "Prop"             -> prop
          | "(" type_expr ")"

?formula: implication
        | implication _iff formula        -> iff
?implication: disjunction
        | disjunction _arrow implication  -> implies
?disjunction: conjunction
        | conjunction _or disjunction     -> or_
?conjunction: negation
        | negation _and conjunction       -> and_
?negation: _not negation                  -> not_
        | primary
?primary: atom
        | "(" formula ")"
        | quantifier
        | ("false" | "⊥")                 -> falsum

quantifier: _forall binders "," formula   -> forall_
          | _exists binders "," formula   -> exists_
binders: NAME+ [":" NAME]                 -> plain_binders
       | binder_group+                    -> grouped_binders
binder_group: "(" NAME+ ":" NAME ")"

atom: NAME term*
    | term "=" term                       -> equality
?term: NAME                               -> const_term
     | INT                                -> numeral

_arrow: "→" | "->"
_iff: "↔" | "<->"
_and: "∧" | "/\\"
_or: "∨" | "\\/"
_not: "¬" | "~"
_forall: "∀" | "forall"
_exists: "∃" | "exists"

proof: "begin" tactic_seq "end"          -> begin_end
     | "by" _tactic_item                 -> by_tactic
     | "sorry"                           -> term_sorry

tactic_seq: (_tactic_item ",")* _tactic_item?
_tactic_item: tactic | block
block: "{" tactic_seq "}"

?tactic: "intro" [NAME]                              -> intro
       | "apply" pterm                               -> apply
       | "exact" pterm                               -> exact
       | "assumption"                                -> assumption
       | "split"                                     -> split
       | "left"                                      -> left
       | "right"                                     -> right
       | "contradiction"                             -> contradiction
       | "exfalso"                                   -> exfalso
       | "sorry"                                     -> sorry
       | "cases" pterm [case_names]                  -> cases
       | "have" [NAME] [":" formula] [":=" pterm]    -> have
       | "have" [NAME] ":" formula _COMMA_FROM pterm -> have
       | "use" NAME                                  -> use
       | NAME _opaque_arg*                           -> opaque
case_names: "with" NAME+
_opaque_arg: NAME | INT | "(" pterm ")" | "[" [pterm ("," pterm)*] "]"

pterm: pterm_atom+
?pterm_atom: NAME                          -> pname
           | "(" pterm ")"
           | "⟨" pterm ("," pterm)* "⟩"    -> anonymous_constructor

_COMMA_FROM.2: /,\s*from\b/
NAME: /[^\W\d][\w'.]*/
INT: /\d+/
LINE_COMMENT: /--[^\n]*/
BLOCK_COMMENT: /\/-(.|\n)*?-\//

%import common.WS
%ignore WS
%ignore LINE_COMMENT
%ignore BLOCK_COMMENT
"""

_STARTS = ["start", "formula_start", "tactic_start", "proof_start"]
_COMMENT_LINE = re.compile(r"^[ \t]*--[ \t]?(.*)$", re.MULTILINE)
_END_LINE = re.compile(r"^[ \t]*end[ \t]*,?[ \t]*$", re.MULTILINE)
_DECLARATION_LINE = re.compile(
    r"^[ \t]*(universes?|constants?|axiom|theorem|lemma)\b", re.MULTILINE
)


@lru_cache(maxsize=1)
def _parser() -> Lark:
    return Lark(
        GRAMMAR,
        parser="lalr",
        start=_STARTS,
        propagate_positions=True,
        maybe_placeholders=True,
    )


def _span(meta: Any) -> Optional[SourceSpan]:
    if getattr(meta, "empty", True):
        return None
    return SourceSpan(meta.start_pos, meta.end_pos, meta.line, meta.column)


def _classify(parts: list[str]) -> tuple[DeclarationKind, Signature]:
    signature = Signature(tuple(parts[:-1]), parts[-1])
    if signature.codomain == "Type" and not signature.domain:
        return DeclarationKind.SORT, signature
    if signature.codomain == "Prop" and not {"Prop", "Type"} & set(signature.domain):
        return DeclarationKind.PREDICATE, signature
    if not signature.domain and signature.codomain != "Prop":
        return DeclarationKind.CONSTANT, signature
    return DeclarationKind.FUNCTION, signature


def _build_application(items: list[ProofTerm]) -> ProofTerm:
    head, args = items[0], items[1:]
    if isinstance(head, ProofName):
        if head.name == "and.intro" and len(args) == 2:
            return AndIntro(args[0], args[1])
        if head.name in ("or.inl", "or.inr") and len(args) == 1:
            return OrIntro(args[0], right=head.name == "or.inr")
    if not args:
        return head
    return ProofApp(head, tuple(args))


class _TheoryBuilder(Transformer):
    """Turn the lark parse tree into logic and tactic values."""

    def __init__(self, source: str) -> None:
        super().__init__()
        self._source = source

    # declarations -----------------------------------------------------

    def start(self, items: list[list[Declaration]]) -> Theory:
        return Theory(tuple(decl for group in items for decl in group))

    def formula_start(self, items: list[Formula]) -> Formula:
        return items[0]

    def tactic_start(self, items: list[Tactic]) -> Tactic:
        return items[0]

    def proof_start(self, items: list[TacticScript]) -> TacticScript:
        return items[0]

    def universe_decl(self, _items: list[Token]) -> list[Declaration]:
        return []

    @v_args(meta=True)
    def constant_decl(self, meta: Any, items: list[Any]) -> list[Declaration]:
        *names, parts = items
        kind, signature = _classify(parts)
        span = _span(meta)
        return [Declaration(kind, str(name), signature=signature, span=span) for name in names]

    @v_args(meta=True, inline=True)
    def axiom_decl(self, meta: Any, name: Token, formula: Formula) -> list[Declaration]:
        return [Declaration(DeclarationKind.AXIOM, str(name), formula=formula, span=_span(meta))]

    @v_args(meta=True, inline=True)
    def theorem_decl(
        self, meta: Any, name: Token, formula: Formula, script: Optional[TacticScript]
    ) -> list[Declaration]:
        return [
            Declaration(
                DeclarationKind.THEOREM, str(name), formula=formula, script=script, span=_span(meta)
            )
        ]

    def type_expr(self, items: list[str]) -> list[str]:
        parts: list[str] = []
        for item in items:
            parts.extend(item if isinstance(item, list) else [item])
        return parts

    @v_args(inline=True)
    def sort_name(self, token: Token) -> str:
        return str(token)

    def type_universe(self, _items: list[Any]) -> str:
        return "Type"

    def prop(self, _items: list[Any]) -> str:
        return "Prop"

    # formulas ----------------------------------------------------------

    @v_args(inline=True)
    def iff(self, left: Formula, right: Formula) -> Formula:
        return Iff(left, right)

    @v_args(inline=True)
    def implies(self, left: Formula, right: Formula) -> Formula:
        return Implies(left, right)

    @v_args(inline=True)
    def or_(self, left: Formula, right: Formula) -> Formula:
        return Or(left, right)

    @v_args(inline=True)
    def and_(self, left: Formula, right: Formula) -> Formula:
        return And(left, right)

    @v_args(inline=True)
    def not_(self, body: Formula) -> Formula:
        return Not(body)

    def falsum(self, _items: list[Any]) -> Formula:
        return Falsum()

    @v_args(inline=True)
    def forall_(self, binders: list[tuple[str, Optional[str]]], body: Formula) -> Formula:
        for name, sort in reversed(binders):
            body = ForAll(sort, bind(name, body), name)
        return body

    @v_args(inline=True)
    def exists_(self, binders: list[tuple[str, Optional[str]]], body: Formula) -> Formula:
        for name, sort in reversed(binders):
            body = Exists(sort, bind(name, body), name)
        return body

    def plain_binders(self, items: list[Optional[Token]]) -> list[tuple[str, Optional[str]]]:
        *names, sort = items
        return [(str(name), None if sort is None else str(sort)) for name in names]

    def grouped_binders(self, groups: list[list[tuple[str, Optional[str]]]]) -> list[tuple[str, Optional[str]]]:
        return [binder for group in groups for binder in group]

    def binder_group(self, items: list[Token]) -> list[tuple[str, Optional[str]]]:
        *names, sort = items
        return [(str(name), str(sort)) for name in names]

    def atom(self, items: list[Any]) -> Formula:
        head, *args = items
        return Atom(str(head), tuple(args))

    @v_args(inline=True)
    def equality(self, left: Const, right: Const) -> Formula:
        return Atom("=", (left, right))

    @v_args(inline=True)
    def const_term(self, token: Token) -> Const:
        return Const(str(token))

    @v_args(inline=True)
    def numeral(self, token: Token) -> Const:
        return Const(str(token))

    # proofs ------------------------------------------------------------

    @v_args(meta=True, inline=True)
    def begin_end(self, meta: Any, tactics: tuple[Tactic, ...]) -> TacticScript:
        if not tactics:
            raise TheoryParseError("A tactic script must contain at least one tactic", span=_span(meta))
        return TacticScript(tactics, span=_span(meta))

    @v_args(meta=True, inline=True)
    def by_tactic(self, meta: Any, tactic: Tactic) -> TacticScript:
        return TacticScript((tactic,), span=_span(meta))

    @v_args(meta=True)
    def term_sorry(self, meta: Any, _items: list[Any]) -> TacticScript:
        return TacticScript((Sorry(span=_span(meta)),), span=_span(meta))

    def tactic_seq(self, items: list[Tactic]) -> tuple[Tactic, ...]:
        return tuple(item for item in items if item is not None)

    @v_args(meta=True, inline=True)
    def block(self, meta: Any, tactics: tuple[Tactic, ...]) -> Tactic:
        if not tactics:
            raise TheoryParseError("A tactic block must not be empty", span=_span(meta))
        return Block(tactics, span=_span(meta))

    @v_args(meta=True, inline=True)
    def intro(self, meta: Any, name: Optional[Token]) -> Tactic:
        return Intro(None if name is None else str(name), span=_span(meta))

    @v_args(meta=True, inline=True)
    def apply(self, meta: Any, term: ProofTerm) -> Tactic:
        return Apply(term, span=_span(meta))

    @v_args(meta=True, inline=True)
    def exact(self, meta: Any, term: ProofTerm) -> Tactic:
        return Exact(term, span=_span(meta))

    @v_args(meta=True)
    def assumption(self, meta: Any, _items: list[Any]) -> Tactic:
        return Assumption(span=_span(meta))

    @v_args(meta=True)
    def split(self, meta: Any, _items: list[Any]) -> Tactic:
        return Split(span=_span(meta))

    @v_args(meta=True)
    def left(self, meta: Any, _items: list[Any]) -> Tactic:
        return Left(span=_span(meta))

    @v_args(meta=True)
    def right(self, meta: Any, _items: list[Any]) -> Tactic:
        return Right(span=_span(meta))

    @v_args(meta=True)
    def contradiction(self, meta: Any, _items: list[Any]) -> Tactic:
        return Contradiction(span=_span(meta))

    @v_args(meta=True)
    def exfalso(self, meta: Any, _items: list[Any]) -> Tactic:
        return Exfalso(span=_span(meta))

    @v_args(meta=True)
    def sorry(self, meta: Any, _items: list[Any]) -> Tactic:
        return Sorry(span=_span(meta))

    @v_args(meta=True, inline=True)
    def cases(self, meta: Any, term: ProofTerm, names: Optional[tuple[str, ...]]) -> Tactic:
        return Cases(term, names or (), span=_span(meta))

    def case_names(self, items: list[Token]) -> tuple[str, ...]:
        return tuple(str(item) for item in items)

    @v_args(meta=True, inline=True)
    def have(
        self,
        meta: Any,
        name: Optional[Token],
        formula: Optional[Formula],
        proof: Optional[ProofTerm],
    ) -> Tactic:
        return Have(None if name is None else str(name), formula, proof, span=_span(meta))

    @v_args(meta=True, inline=True)
    def use(self, meta: Any, name: Token) -> Tactic:
        return Use(str(name), span=_span(meta))

    @v_args(meta=True)
    def opaque(self, meta: Any, _items: list[Any]) -> Tactic:
        text = self._source[meta.start_pos : meta.end_pos]
        return Opaque(" ".join(text.split()), span=_span(meta))

    def pterm(self, items: list[ProofTerm]) -> ProofTerm:
        return _build_application(items)

    @v_args(inline=True)
    def pname(self, token: Token) -> ProofTerm:
        return ProofName(str(token))

    def anonymous_constructor(self, items: list[ProofTerm]) -> ProofTerm:
        result = items[-1]
        for item in reversed(items[:-1]):
            result = AndIntro(item, result)
        return result


def _end_position(source: str) -> SourceSpan:
    line = source.count("\n") + 1
    column = len(source) - (source.rfind("\n") + 1) + 1
    return SourceSpan(len(source), len(source), line, column)


def _to_parse_error(exc: UnexpectedInput, source: str) -> TheoryParseError:
    expected: set[str] = set()
    for attribute in ("expected", "allowed"):
        value = getattr(exc, attribute, None)
        if value:
            expected.update(str(item) for item in value)
    token = getattr(exc, "token", None)
    at_end = token is not None and getattr(token, "type", None) == "$END"
    position = getattr(exc, "pos_in_stream", None)
    if at_end or position is None or position < 0 or position >= len(source):
        span = _end_position(source)
        found = "end of input"
    else:
        span = SourceSpan(position, position + 1, exc.line, exc.column)
        if isinstance(exc, UnexpectedCharacters):
            found = repr(source[position])
        else:
            found = repr(str(token))
    hint = f"; expected one of: {', '.join(sorted(expected))}" if expected else ""
    return TheoryParseError(f"Unexpected {found} at {span}{hint}", span=span, expected=expected)


def _run(source: str, start: str) -> Any:
    text = unicodedata.normalize("NFC", source)
    try:
        tree = _parser().parse(text, start=start)
    except UnexpectedInput as exc:
        raise _to_parse_error(exc, text) from exc
    try:
        return _TheoryBuilder(text).transform(tree)
    except VisitError as exc:
        if isinstance(exc.orig_exc, TheoryParseError):
            raise exc.orig_exc from exc
        raise


def _attach_comments(theory: Theory, source: str) -> Theory:
    comments = [
        (source.count("\n", 0, match.start()) + 1, match.group(1).rstrip())
        for match in _COMMENT_LINE.finditer(source)
    ]
    if not comments:
        return theory
    attached: list[Declaration] = []
    previous_end = 0
    previous_span: Optional[SourceSpan] = None
    for decl in theory.declarations:
        span = decl.span
        if span is None or span == previous_span:
            attached.append(decl)
            continue
        previous_span = span
        lines = [text for line, text in comments if previous_end < line < span.line]
        previous_end = source.count("\n", 0, span.end) + 1
        attached.append(replace(decl, comment="\n".join(lines)) if lines else decl)
    return Theory(tuple(attached))


def _strip_trailing_prose(source: str, error: TheoryParseError) -> Optional[str]:
    if error.span is None:
        return None
    cut: Optional[int] = None
    for match in _END_LINE.finditer(source):
        if match.end() <= error.span.start:
            cut = match.end()
    if cut is None or _DECLARATION_LINE.search(source, cut):
        return None
    return source[:cut]


def parse_theory(source: str, *, check: bool = True) -> Theory:
    """Parse Lean-subset source into a :class:`Theory`.

    With ``check`` the result is also run through :func:`check_wf` and a
    :class:`TheoryCheckError` is raised when it reports anything.
    """

    text = unicodedata.normalize("NFC", source)
    try:
        theory = _run(text, "start")
    except TheoryParseError as error:
        prefix = _strip_trailing_prose(text, error)
        if prefix is None:
            raise
        logger.warning(
            "Ignoring trailing text after the last proof block",
            extra={"line": error.span.line if error.span else None},
        )
        theory = _run(prefix, "start")
    theory = _attach_comments(theory, text)
    if check:
        diagnostics = check_wf(theory)
        if diagnostics:
            raise TheoryCheckError(diagnostics)
    return theory


def parse_formula(text: str) -> Formula:
    return _run(text, "formula_start")


def parse_tactic(text: str) -> Tactic:
    return _run(text, "tactic_start")


def parse_script(text: str) -> TacticScript:
    """Parse a ``begin ... end`` block (or ``by tactic``) into a script."""

    return _run(text, "proof_start")


def _format_declaration(decl: Declaration) -> str:
    if decl.kind in (DeclarationKind.AXIOM, DeclarationKind.THEOREM):
        assert decl.formula is not None
        keyword = "axiom" if decl.kind is DeclarationKind.AXIOM else "theorem"
        text = f"{keyword} {decl.name} : {format_formula(decl.formula)}"
        if decl.script is not None:
            text += " :=\n" + decl.script.render()
        return text
    return f"constant {decl.name} : {decl.signature}"


def pretty_print(theory: Theory) -> str:
    """Render ``theory`` so that re-parsing yields an alpha-equivalent theory."""

    chunks: list[str] = []
    for decl in theory.declarations:
        lines: list[str] = []
        if decl.kind is DeclarationKind.THEOREM and chunks:
            lines.append("")
        if decl.comment:
            lines.extend(f"-- {line}".rstrip() for line in decl.comment.splitlines())
        lines.append(_format_declaration(decl))
        chunks.append("\n".join(lines))
    return "\n".join(chunks) + ("\n" if chunks else "")
