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

from typing import Optional

import pytest

from langchain_logic_prover.corpus import ProblemRecord, parse_corpus
from langchain_logic_prover.exceptions import InstanceGenerationError, OracleFragmentError, TacticError
from langchain_logic_prover.generator import enumerate_tactics
from langchain_logic_prover.interpreter import Verdict
from langchain_logic_prover.kernel import Kernel, ProofState
from langchain_logic_prover.logic import Theory
from langchain_logic_prover.oracle import GroundLiteral, InstanceParams, generate_instances, oracle
from langchain_logic_prover.parser import parse_formula, parse_theory


def _label(record: ProblemRecord, depth_cap: Optional[int] = None):  # type: ignore[no-untyped-def]
    theory = record.parsed_theory()
    assert theory is not None and record.formal_question is not None
    return oracle(theory, parse_formula(record.formal_question), depth_cap)


def test_hudson_is_derived_in_one_round(hudson: Theory) -> None:
    result = oracle(hudson, parse_formula("often_meow Hudson"))
    assert result.label is Verdict.TRUE
    assert result.depth == 1
    assert result.consistent
    assert result.derived[GroundLiteral(True, "is_animal", ("Hudson",))] == 1
    assert oracle(hudson, parse_formula("¬ often_meow Hudson")).label is Verdict.FALSE


@pytest.mark.parametrize(
    ("record_id", "label", "depth"),
    [
        ("golden-02-cow", Verdict.FALSE, 5),
        ("golden-07-kind-bob", Verdict.UNKNOWN, None),
        ("golden-08-round-anne", Verdict.TRUE, 3),
        ("golden-09-green-erin", Verdict.FALSE, 1),
        ("golden-10-rough-charlie", Verdict.UNKNOWN, None),
        ("golden-11-rough-gary", Verdict.TRUE, None),
    ],
)
def test_golden_labels(golden: dict[str, ProblemRecord], record_id: str, label: Verdict, depth: Optional[int]) -> None:
    result = _label(golden[record_id])
    assert result.label is label
    assert result.consistent
    assert result.label.value == golden[record_id].label
    if depth is not None:
        assert result.depth == depth


def test_depth_cap_limits_rounds(golden: dict[str, ProblemRecord]) -> None:
    record = golden["golden-08-round-anne"]
    assert _label(record, depth_cap=2).label is Verdict.UNKNOWN
    assert _label(record, depth_cap=3).label is Verdict.TRUE


@pytest.mark.parametrize("record_id", ["golden-03-turkey-q1", "golden-06-sea-eel", "golden-12-young-rabbit"])
def test_outside_the_fragment(golden: dict[str, ProblemRecord], record_id: str) -> None:
    with pytest.raises(OracleFragmentError):
        _label(golden[record_id])


def test_inconsistent_theory_is_flagged() -> None:
    theory = parse_theory(
        "constant obj : Type\nconstant a : obj\nconstant p : obj → Prop\nconstant q : obj → Prop\n"
        "axiom F1 : p a\naxiom F2 : ¬ q a\naxiom R1 : ∀ x : obj, p x → q x\n"
    )
    assert not oracle(theory, parse_formula("p a")).consistent


def test_generation_is_seeded() -> None:
    first = generate_instances(7, 4)
    second = generate_instances(7, 4)
    assert [instance.source for instance in first] == [instance.source for instance in second]
    assert [instance.question for instance in first] == [instance.question for instance in second]


def test_generated_labels_cycle_and_agree_with_the_oracle() -> None:
    params = InstanceParams(max_depth=2)
    instances = generate_instances(11, 6, params)
    assert [instance.label for instance in instances] == [Verdict.TRUE, Verdict.FALSE, Verdict.UNKNOWN] * 2
    for instance in instances:
        result = oracle(instance.theory, instance.question)
        assert result.label is instance.label
        assert result.consistent
        assert result.depth == instance.depth
        if instance.depth is not None:
            assert instance.depth <= 2
        assert len(instance.context) == len(instance.theory.axioms())


def _successors(kernel: Kernel, state: ProofState) -> list[ProofState]:
    found = []
    for tactic in enumerate_tactics(kernel, state.goals[0]):
        try:
            found.append(kernel.apply(state, tactic))
        except TacticError:
            continue
    return found


def _closes_within_two_steps(kernel: Kernel, state: ProofState) -> bool:
    for middle in _successors(kernel, state):
        if middle.is_complete:
            return True
        if len(middle.goals) == 1 and any(last.is_complete for last in _successors(kernel, middle)):
            return True
    return False


def test_shallow_true_questions_close_in_two_tactics() -> None:
    instances = generate_instances(5, 9, InstanceParams(max_depth=1))
    proved = [instance for instance in instances if instance.label is Verdict.TRUE]
    assert len(proved) == 3
    for instance in proved:
        kernel = Kernel(instance.theory)
        assert _closes_within_two_steps(kernel, kernel.init_state(instance.question)), instance.source


def test_generated_records_load_as_a_corpus() -> None:
    instances = generate_instances(3, 3, InstanceParams(num_rules=4))
    records = [instance.to_record(f"gen-{index}") for index, instance in enumerate(instances)]
    text = "\n".join(record.model_dump_json(exclude_none=True) for record in records)
    loaded = parse_corpus(text)
    assert [record.label for record in loaded] == ["True", "False", "Unknown"]
    assert all(record.question.endswith(".") for record in loaded)


def test_generation_errors() -> None:
    with pytest.raises(InstanceGenerationError):
        generate_instances(1, -1)
    tiny = InstanceParams(num_constants=1, num_unary=1, num_binary=0, num_facts=2)
    with pytest.raises(InstanceGenerationError, match="num_facts"):
        generate_instances(1, 1, tiny)
    decided = InstanceParams(num_constants=1, num_unary=1, num_binary=0, num_facts=1, num_rules=0, max_attempts=5)
    with pytest.raises(InstanceGenerationError, match="Unknown"):
        generate_instances(1, 3, decided)
    assert generate_instances(1, 0) == []
