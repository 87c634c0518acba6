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

import pytest

from langchain_logic_prover.config import ProverSettings
from langchain_logic_prover.corpus import ProblemRecord
from langchain_logic_prover.exceptions import LogicError
from langchain_logic_prover.interpreter import Verdict
from langchain_logic_prover.logic import Theory
from langchain_logic_prover.oracle import InstanceParams, generate_instances
from langchain_logic_prover.parser import parse_formula
from langchain_logic_prover.search import SearchStatus, SearchTrace
from langchain_logic_prover.solver import solve

SETTINGS = ProverSettings(timeout_secs=30.0, max_expansions=200)


def _solve_record(record: ProblemRecord, settings: ProverSettings = SETTINGS):  # type: ignore[no-untyped-def]
    theory = record.parsed_theory()
    assert theory is not None and record.formal_question is not None
    return solve(theory, parse_formula(record.formal_question), settings)


def test_hudson_is_true_with_a_replayed_proof(hudson: Theory) -> None:
    solution = solve(hudson, parse_formula("often_meow Hudson"), SETTINGS)
    assert solution.verdict is Verdict.TRUE
    assert solution.names == ("hudson_often_meow", "not_hudson_often_meow")
    assert solution.proof == "begin\n  apply A3 Hudson,\n  exact A1,\nend"
    assert solution.positive_report is not None and solution.positive_report.valid
    assert solution.negative_report is None
    assert [report.theorem for report in solution.reports()] == ["hudson_often_meow"]
    data = solution.to_dict()
    assert data["verdict"] == "True"
    assert data["question"] == "often_meow Hudson"
    assert data["theorems"] == ["hudson_often_meow", "not_hudson_often_meow"]
    assert data["negative"]["status"] == SearchStatus.EXHAUSTED.value


def test_negated_question_swaps_the_verdict(hudson: Theory) -> None:
    solution = solve(hudson, parse_formula("¬ often_meow Hudson"), SETTINGS)
    assert solution.verdict is Verdict.FALSE
    assert solution.names == ("not_hudson_often_meow", "not_not_hudson_often_meow")
    assert solution.proof is not None
    assert solution.negative_report is not None and solution.negative_report.valid


def test_concurrent_duals_agree(hudson: Theory) -> None:
    settings = SETTINGS.model_copy(update={"concurrent_duals": True})
    assert solve(hudson, parse_formula("often_meow Hudson"), settings).verdict is Verdict.TRUE


def test_trace_names_both_theorems(hudson: Theory) -> None:
    stream = io.StringIO()
    solve(hudson, parse_formula("often_meow Hudson"), SETTINGS, trace=SearchTrace(stream))
    finished = [json.loads(line) for line in stream.getvalue().splitlines() if '"finish"' in line]
    assert [event["theorem"] for event in finished] == ["hudson_often_meow", "not_hudson_often_meow"]


def test_question_outside_the_vocabulary_is_rejected(hudson: Theory) -> None:
    with pytest.raises(LogicError):
        solve(hudson, parse_formula("often_bark Hudson"), SETTINGS)


@pytest.mark.parametrize(
    ("record_id", "verdict"),
    [
        ("golden-08-round-anne", Verdict.TRUE),
        ("golden-09-green-erin", Verdict.FALSE),
        ("golden-11-rough-gary", Verdict.TRUE),
        ("golden-12-young-rabbit", Verdict.TRUE),
        ("golden-07-kind-bob", Verdict.UNKNOWN),
        ("golden-10-rough-charlie", Verdict.UNKNOWN),
    ],
)
def test_small_golden_problems(golden: dict[str, ProblemRecord], record_id: str, verdict: Verdict) -> None:
    solution = _solve_record(golden[record_id])
    assert solution.verdict is verdict
    assert all(report.valid for report in solution.reports())
    if verdict is Verdict.UNKNOWN:
        assert solution.proof is None
        assert solution.reports() == []


def test_existential_proof_uses_a_witness(golden: dict[str, ProblemRecord]) -> None:
    solution = _solve_record(golden["golden-12-young-rabbit"])
    assert solution.proof is not None
    assert "use Harry" in solution.proof
    assert solution.names[0].startswith("thm_")


@pytest.mark.parametrize("subsumption", [True, False])
def test_generated_instances_match_their_labels(subsumption: bool) -> None:
    settings = ProverSettings(timeout_secs=60.0, max_expansions=500, subsumption=subsumption)
    instances = generate_instances(23, 6, InstanceParams(max_depth=2, num_rules=5))
    for instance in instances:
        solution = solve(instance.theory, instance.question, settings)
        assert solution.verdict is instance.label, instance.source
        if instance.label is not Verdict.UNKNOWN:
            assert all(report.valid for report in solution.reports())
