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

"""Dual theorems and the verdict drawn from their two searches."""

from __future__ import annotations

import hashlib
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .exceptions import LogicError, ProverConfigurationError
from .logic import Atom, Const, Declaration, DeclarationKind, Formula, Not, canonical_text, is_closed, negate
from .search import SearchOutcome, SearchStatus

__all__ = [
    "Verdict",
    "OptionMapping",
    "theorem_name",
    "build_duals",
    "interpret",
    "score",
]

_CAMEL = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")
_INVALID = re.compile(r"[^0-9A-Za-z_]+")


class Verdict(str, Enum):
    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"
    INCONSISTENT = "Inconsistent"


def _snake(text: str) -> str:
    return _INVALID.sub("_", _CAMEL.sub("_", text)).strip("_").lower()


def theorem_name(question: Formula) -> str:
    """Deterministic theorem name for ``question``.

    A ground atom ``Chases Cow Cow`` is named after its subject first
    (``cow_chases_cow``); anything else gets a short digest of its canonical text.
    """

    if isinstance(question, Atom) and question.args and all(isinstance(arg, Const) for arg in question.args):
        names = [arg.name for arg in question.args if isinstance(arg, Const)]
        parts = [names[0], question.predicate, *names[1:]]
        name = "_".join(_snake(part) for part in parts)
        if name and not name[0].isdigit():
            return name
    if isinstance(question, Not):
        return "not_" + theorem_name(question.body)
    digest = hashlib.blake2b(canonical_text(question).encode("utf-8"), digest_size=4).hexdigest()
    return f"thm_{digest}"


def build_duals(question: Formula) -> tuple[Declaration, Declaration]:
    """Positive and negated theorem declarations for ``question``."""

    if not is_closed(question):
        raise LogicError("Question must be a closed formula")
    positive = theorem_name(question)
    return (
        Declaration(DeclarationKind.THEOREM, positive, formula=question),
        Declaration(DeclarationKind.THEOREM, f"not_{positive}", formula=negate(question)),
    )


def interpret(positive: SearchOutcome, negative: SearchOutcome) -> Verdict:
    proved_positive = positive.status is SearchStatus.PROVED
    proved_negative = negative.status is SearchStatus.PROVED
    if proved_positive and proved_negative:
        return Verdict.INCONSISTENT
    if proved_positive:
        return Verdict.TRUE
    if proved_negative:
        return Verdict.FALSE
    return Verdict.UNKNOWN


@dataclass(frozen=True)
class OptionMapping:
    """Dataset option labels mapped onto verdicts."""

    labels: Mapping[str, Verdict]

    def __post_init__(self) -> None:
        verdicts = list(self.labels.values())
        if Verdict.INCONSISTENT in verdicts:
            raise ProverConfigurationError("Inconsistent is never an answer option")
        if len(set(verdicts)) != len(verdicts):
            raise ProverConfigurationError("Option mapping must be injective")
        folded = [label.casefold() for label in self.labels]
        if len(set(folded)) != len(folded):
            raise ProverConfigurationError("Option labels must differ beyond case")

    @classmethod
    def proofwriter(cls) -> OptionMapping:
        return cls({"True": Verdict.TRUE, "False": Verdict.FALSE, "Unknown": Verdict.UNKNOWN})

    @classmethod
    def folio(cls) -> OptionMapping:
        return cls({"True": Verdict.TRUE, "False": Verdict.FALSE, "Uncertain": Verdict.UNKNOWN})

    @classmethod
    def for_options(cls, options: Iterable[str]) -> OptionMapping:
        """Mapping for a record's option set; "uncertain" and "unknown" both mean Unknown."""

        words = {"true": Verdict.TRUE, "false": Verdict.FALSE, "unknown": Verdict.UNKNOWN, "uncertain": Verdict.UNKNOWN}
        labels: dict[str, Verdict] = {}
        for option in options:
            verdict = words.get(option.strip().casefold())
            if verdict is None:
                raise ProverConfigurationError(f"Unsupported answer option: {option!r}")
            labels[option] = verdict
        return cls(labels)

    def verdict_of(self, label: str) -> Verdict:
        wanted = label.strip().casefold()
        for option, verdict in self.labels.items():
            if option.casefold() == wanted:
                return verdict
        raise ProverConfigurationError(f"Unknown answer option: {label!r}")

    def label_of(self, verdict: Verdict) -> Optional[str]:
        for option, candidate in self.labels.items():
            if candidate is verdict:
                return option
        return None


def score(verdict: Verdict, gold: str, mapping: Optional[OptionMapping] = None) -> bool:
    """Whether ``verdict`` answers ``gold``; an inconsistent verdict is always wrong."""

    if verdict is Verdict.INCONSISTENT:
        return False
    mapping = mapping or OptionMapping.proofwriter()
    return mapping.verdict_of(gold) is verdict
