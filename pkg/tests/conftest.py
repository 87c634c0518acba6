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

from __future__ import annotations

import os

import pytest

from langchain_logic_prover.corpus import ProblemRecord, load_golden_corpus
from langchain_logic_prover.logic import Theory
from langchain_logic_prover.parser import parse_theory

HUDSON = """\
universe u

constant obj : Type u

constant Hudson : obj

constant is_cat : obj → Prop
constant is_animal : obj → Prop
constant often_meow : obj → Prop

-- Hudson is a cat.
axiom A1 : is_cat Hudson
-- All cats are animals.
axiom A2 : ∀ x : obj, is_cat x → is_animal x
-- Cats often meow.
axiom A3 : ∀ x : obj, is_cat x → often_meow x
"""


@pytest.fixture
def hudson_source() -> str:
    return HUDSON


@pytest.fixture
def hudson() -> Theory:
    return parse_theory(HUDSON)


@pytest.fixture(scope="session")
def golden() -> dict[str, ProblemRecord]:
    return {record.id: record for record in load_golden_corpus()}


@pytest.fixture(autouse=True)
def clear_prover_env(monkeypatch: pytest.MonkeyPatch) -> None:
    for key in list(os.environ):
        if key.startswith("LOGIC_PROVER_"):
            monkeypatch.delenv(key, raising=False)
