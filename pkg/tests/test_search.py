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

import io
import json
from collections.abc import Sequence
from typing import Optional

import pytest

from langchain_logic_prover.exceptions import GeneratorError
from langchain_logic_prover.generator import BuiltinGenerator, Candidate
from langchain_logic_prover.kernel import Kernel, ProofState
from langchain_logic_prover.logic import Theory
from langchain_logic_prover.parser import parse_formula, parse_tactic
from langchain_logic_prover.search import (
    SearchConfig,
    SearchStatus,
    SearchTrace,
    is_subsumed,
    prove_both,
    search,
)
from langchain_logic_prover.tactics import format_tactic

OFTEN_MEOW = parse_formula("often_meow Hudson")


class StubGenerator:
    def __init__(self, candidates: Sequence[tuple[str, float]]) -> None:
        self.candidates = [Candidate(parse_tactic(text), logprob, "stub") for text, logprob in candidates]
        self.calls = 0

    def generate(self, state: ProofState, k: Optional[int] = None) -> list[Candidate]:
        self.calls += 1
        return list(self.candidates)


class FailingGenerator:
    def generate(self, state: ProofState, k: Optional[int] = None) -> list[Candidate]:
        raise GeneratorError("scorer went away")


def test_builtin_search_proves_hudson(hudson: Theory) -> None:
    outcome = search(hudson, OFTEN_MEOW, BuiltinGenerator(hudson))
    assert outcome.status is SearchStatus.PROVED
    assert [format_tactic(tactic) for tactic in outcome.tactics] == ["apply A3 Hudson", "exact A1"]
    script = outcome.script()
    assert script is not None
    assert Kernel(hudson).replay(OFTEN_MEOW, script).valid
    assert outcome.script_text() == "begin\n  apply A3 Hudson,\n  exact A1,\nend"


def test_prove_both_settles_hudson(hudson: Theory) -> None:
    positive, negative = prove_both(hudson, OFTEN_MEOW, BuiltinGenerator(hudson))
    assert positive.proved
    assert negative.status is SearchStatus.EXHAUSTED
    assert negative.script() is None


def test_concurrent_duals_match_sequential(hudson: Theory) -> None:
    generator = BuiltinGenerator(hudson)
    sequential = prove_both(hudson, OFTEN_MEOW, generator)
    concurrent = prove_both(hudson, OFTEN_MEOW, generator, concurrent=True)
    assert [outcome.status for outcome in concurrent] == [outcome.status for outcome in sequential]
    assert concurrent[0].tactics == sequential[0].tactics


def test_equivalent_children_are_deduplicated(hudson: Theory) -> None:
    generator = StubGenerator([("apply A3 Hudson", -0.1), ("apply A3", -0.5)])
    outcome = search(hudson, OFTEN_MEOW, generator)
    assert outcome.status is SearchStatus.EXHAUSTED
    assert outcome.stats.deduplicated == 1
    assert outcome.stats.expansions == 2
    assert outcome.stats.generated == 4
    assert outcome.stats.rejected == 2


def test_placeholder_and_inapplicable_candidates_are_rejected(hudson: Theory) -> None:
    outcome = search(hudson, OFTEN_MEOW, StubGenerator([("sorry", -0.1), ("split", -0.2)]))
    assert outcome.status is SearchStatus.EXHAUSTED
    assert outcome.stats.rejected == 2
    assert outcome.tactics == ()


def test_states_containing_an_expanded_state_are_pruned(hudson: Theory) -> None:
    generator = StubGenerator([("have h : often_meow Hudson", -0.1)])
    outcome = search(hudson, OFTEN_MEOW, generator)
    assert outcome.status is SearchStatus.EXHAUSTED
    assert outcome.stats.pruned == 1
    assert outcome.stats.expansions == 1

    unpruned = search(
        hudson, OFTEN_MEOW, generator, SearchConfig(subsumption=False, max_expansions=3)
    )
    assert unpruned.status is SearchStatus.TIMEOUT
    assert unpruned.stats.pruned == 0
    assert unpruned.stats.expansions == 3


def test_time_budget_is_checked_before_expanding(hudson: Theory) -> None:
    ticks = iter([0.0, 10.0])
    generator = StubGenerator([("apply A3 Hudson", -0.1)])
    outcome = search(
        hudson,
        OFTEN_MEOW,
        generator,
        SearchConfig(time_budget=1.0),
        clock=lambda: next(ticks, 10.0),
    )
    assert outcome.status is SearchStatus.TIMEOUT
    assert outcome.stats.expansions == 0
    assert generator.calls == 0


def test_expansion_cap_reports_timeout(hudson: Theory) -> None:
    outcome = search(hudson, OFTEN_MEOW, BuiltinGenerator(hudson), SearchConfig(max_expansions=1))
    assert outcome.status is SearchStatus.TIMEOUT
    assert outcome.stats.expansions == 1


def test_generator_failure_stops_the_search(hudson: Theory) -> None:
    outcome = search(hudson, OFTEN_MEOW, FailingGenerator())
    assert outcome.status is SearchStatus.GENERATOR_FAILURE
    assert outcome.error == "scorer went away"
    assert outcome.to_dict()["status"] == "generator-failure"


def test_trace_records_expansions_and_the_result(hudson: Theory) -> None:
    stream = io.StringIO()
    search(hudson, OFTEN_MEOW, BuiltinGenerator(hudson), trace=SearchTrace(stream), label="hudson_often_meow")
    events = [json.loads(line) for line in stream.getvalue().splitlines()]
    assert events[0]["event"] == "expand"
    assert events[-1]["event"] == "finish"
    assert events[-1]["status"] == "proved"
    assert events[-1]["tactics"] == ["apply A3 Hudson", "exact A1"]
    assert {event["theorem"] for event in events} == {"hudson_often_meow"}


def test_trace_file_is_appended(tmp_path, hudson: Theory) -> None:  # type: ignore[no-untyped-def]
    path = tmp_path / "trace.jsonl"
    for _ in range(2):
        with SearchTrace.open(path) as trace:
            search(hudson, OFTEN_MEOW, BuiltinGenerator(hudson), trace=trace)
    finishes = [line for line in path.read_text(encoding="utf-8").splitlines() if '"finish"' in line]
    assert len(finishes) == 2


@pytest.mark.parametrize(
    ("goals", "expanded", "containment", "expected"),
    [
        (["G1", "G2"], [["G1"]], "multiset", True),
        (["G1"], [["G1", "G2"]], "multiset", False),
        (["G2", "G1"], [["G1", "G2"]], "multiset", True),
        (["G1"], [["G1", "G1"]], "multiset", False),
        (["G2", "G1"], [["G1"]], "prefix", False),
        (["G1", "G2"], [["G1"]], "prefix", True),
        ([], [["G1"]], "multiset", False),
    ],
)
def test_is_subsumed(goals: list[str], expanded: list[list[str]], containment: str, expected: bool) -> None:
    assert is_subsumed(goals, expanded, containment) is expected  # type: ignore[arg-type]
