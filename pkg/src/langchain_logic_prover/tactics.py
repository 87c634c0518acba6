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

"""Tactic and proof-term syntax trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar, Optional, Union

from .logic import Formula, SourceSpan, format_formula

__all__ = [
    "ProofName",
    "ProofApp",
    "AndIntro",
    "OrIntro",
    "ProofTerm",
    "proof_head",
    "format_proof_term",
    "Intro",
    "Apply",
    "Exact",
    "Assumption",
    "Split",
    "Left",
    "Right",
    "Cases",
    "Have",
    "Contradiction",
    "Exfalso",
    "Use",
    "Sorry",
    "Opaque",
    "Block",
    "Tactic",
    "TacticScript",
    "tactic_kind",
    "format_tactic",
]


@dataclass(frozen=True)
class ProofName:
    """Reference to an axiom, a theorem, a hypothesis or a constant."""

    name: str


@dataclass(frozen=True)
class ProofApp:
    head: ProofTerm
    args: tuple[ProofTerm, ...]


@dataclass(frozen=True)
class AndIntro:
    left: ProofTerm
    right: ProofTerm


@dataclass(frozen=True)
class OrIntro:
    """``or.inl`` when ``right`` is False, ``or.inr`` otherwise."""

    proof: ProofTerm
    right: bool = False


ProofTerm = Union[ProofName, ProofApp, AndIntro, OrIntro]


def proof_head(term: ProofTerm) -> Optional[str]:
    """Name at the head of an application, if any."""

    while isinstance(term, ProofApp):
        term = term.head
    if isinstance(term, ProofName):
        return term.name
    return None


def _format_argument(term: ProofTerm) -> str:
    text = format_proof_term(term)
    if isinstance(term, ProofName):
        return text
    return f"({text})"


def format_proof_term(term: ProofTerm) -> str:
    if isinstance(term, ProofName):
        return term.name
    if isinstance(term, ProofApp):
        return " ".join([_format_argument(term.head), *(_format_argument(arg) for arg in term.args)])
    if isinstance(term, AndIntro):
        return f"and.intro {_format_argument(term.left)} {_format_argument(term.right)}"
    side = "inr" if term.right else "inl"
    return f"or.{side} {_format_argument(term.proof)}"


@dataclass(frozen=True)
class Intro:
    name: Optional[str] = None
    span: Optional[SourceSpan] = field(default=None, compare=False)

    keyword: ClassVar[str] = "intro"


@dataclass(frozen=True)
class Apply:
    term: ProofTerm
    span: Optional[SourceSpan] = field(default=None, compare=False)

    keyword: ClassVar[str] = "apply"


@dataclass(frozen=True)
class Exact:
    term: ProofTerm
    span: Optional[SourceSpan] = field(default=None, compare=False)

    keyword: ClassVar[str] = "exact"


@dataclass(frozen=True)
class Assumption:
    span: Optional[SourceSpan] = field(default=None, compare=False)

    keyword: ClassVar[str] = "assumption"


@dataclass(frozen=True)
class Split:
    span: Optional[SourceSpan] = field(default=None, compare=False)

    keyword: ClassVar[str] = "split"


@dataclass(frozen=True)
class Left:
    span: Optional[SourceSpan] = field(default=None, compare=False)

    keyword: ClassVar[str] = "left"


@dataclass(frozen=True)
class Right:
    span: Optional[SourceSpan] = field(default=None, compare=False)

    keyword: ClassVar[str] = "right"


@dataclass(frozen=True)
class Cases:
    term: ProofTerm
    names: tuple[str, ...] = ()
    span: Optional[SourceSpan] = field(default=None, compare=False)

    keyword: ClassVar[str] = "cases"


@dataclass(frozen=True)
class Have:
    """``have name : formula := proof``; either the formula or the proof may be omitted."""

    name: Optional[str] = None
    formula: Optional[Formula] = None
    proof: Optional[ProofTerm] = None
    span: Optional[SourceSpan] = field(default=None, compare=False)

    keyword: ClassVar[str] = "have"


@dataclass(frozen=True)
class Contradiction:
    span: Optional[SourceSpan] = field(default=None, compare=False)

    keyword: ClassVar[str] = "contradiction"


@dataclass(frozen=True)
class Exfalso:
    span: Optional[SourceSpan] = field(default=None, compare=False)

    keyword: ClassVar[str] = "exfalso"


@dataclass(frozen=True)
class Use:
    witness: str
    span: Optional[SourceSpan] = field(default=None, compare=False)

    keyword: ClassVar[str] = "use"


@dataclass(frozen=True)
class Sorry:
    span: Optional[SourceSpan] = field(default=None, compare=False)

    keyword: ClassVar[str] = "sorry"


@dataclass(frozen=True)
class Opaque:
    """A tactic outside the supported set, kept verbatim."""

    text: str
    span: Optional[SourceSpan] = field(default=None, compare=False)

    keyword: ClassVar[str] = "opaque"


@dataclass(frozen=True)
class Block:
    """A ``{ ... }`` block focused on the first goal."""

    tactics: tuple[Tactic, ...]
    span: Optional[SourceSpan] = field(default=None, compare=False)

    keyword: ClassVar[str] = "block"


Tactic = Union[
    Intro,
    Apply,
    Exact,
    Assumption,
    Split,
    Left,
    Right,
    Cases,
    Have,
    Contradiction,
    Exfalso,
    Use,
    Sorry,
    Opaque,
    Block,
]


def tactic_kind(tactic: Tactic) -> str:
    return tactic.keyword


def format_tactic(tactic: Tactic, indent: str = "  ") -> str:
    """Render a single tactic on one line (blocks span several lines)."""

    if isinstance(tactic, Intro):
        return "intro" if tactic.name is None else f"intro {tactic.name}"
    if isinstance(tactic, (Apply, Exact)):
        return f"{tactic.keyword} {format_proof_term(tactic.term)}"
    if isinstance(tactic, Cases):
        text = f"cases {format_proof_term(tactic.term)}"
        if tactic.names:
            text += " with " + " ".join(tactic.names)
        return text
    if isinstance(tactic, Have):
        parts = ["have"]
        if tactic.name is not None:
            parts.append(tactic.name)
        if tactic.formula is not None:
            parts.extend([":", format_formula(tactic.formula)])
        if tactic.proof is not None:
            parts.extend([":=", format_proof_term(tactic.proof)])
        return " ".join(parts)
    if isinstance(tactic, Use):
        return f"use {tactic.witness}"
    if isinstance(tactic, Opaque):
        return tactic.text
    if isinstance(tactic, Block):
        inner = ",\n".join(indent + format_tactic(item, indent).replace("\n", "\n" + indent) for item in tactic.tactics)
        return "{\n" + inner + ",\n}"
    return tactic.keyword


@dataclass(frozen=True)
class TacticScript:
    """An ordered, non-empty tactic script; nested blocks are kept as :class:`Block`."""

    tactics: tuple[Tactic, ...]
    span: Optional[SourceSpan] = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.tactics)

    def flatten(self) -> list[Tactic]:
        """Tactics in execution order with blocks expanded."""

        result: list[Tactic] = []

        def visit(items: tuple[Tactic, ...]) -> None:
            for item in items:
                if isinstance(item, Block):
                    visit(item.tactics)
                else:
                    result.append(item)

        visit(self.tactics)
        return result

    def render(self, indent: str = "  ") -> str:
        lines = [
            indent + format_tactic(item, indent).replace("\n", "\n" + indent) + ","
            for item in self.tactics
        ]
        return "begin\n" + "\n".join(lines) + "\nend"
