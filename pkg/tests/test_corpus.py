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

import json
from pathlib import Path
from typing import Any

import pytest

from langchain_logic_prover.corpus import (
    ProblemRecord,
    dump_corpus,
    load_corpus,
    load_golden_corpus,
    parse_corpus,
)
from langchain_logic_prover.exceptions import CorpusError
from langchain_logic_prover.parser import parse_formula


def _line(**fields: Any) -> str:
    record = {"id": "p-1", "context": ["Anne is round."], "question": "Anne is round.", "label": "True"}
    record.update(fields)
    return json.dumps(record)


def test_golden_corpus_is_sorted_and_complete() -> None:
    records = load_golden_corpus()
    ids = [record.id for record in records]
    assert len(records) == 12
    assert ids == sorted(ids)
    assert all(record.theory is not None and record.formal_question is not None for record in records)


def test_golden_records_carry_metadata(golden: dict[str, ProblemRecord]) -> None:
    cow = golden["golden-02-cow"]
    assert cow.gold_premises is not None and "R3" in cow.gold_premises
    turkey = golden["golden-05-turkey-q3"]
    assert turkey.options == ["True", "False", "Uncertain"]
    assert turkey.all_questions[turkey.question_index] == turkey.question
    assert set(golden["golden-06-sea-eel"].proofs or {}) == {"intuitive", "concise"}
    hudson = golden["golden-01-hudson"]
    assert hudson.all_questions == ["Hudson often meows."]
    theory = hudson.parsed_theory()
    assert theory is not None
    assert hudson.question_formula(theory) == parse_formula("often_meow Hudson")


def test_parse_corpus_skips_blank_lines_and_sorts() -> None:
    text = "\n".join([_line(id="b"), "", _line(id="a")])
    assert [record.id for record in parse_corpus(text)] == ["a", "b"]


@pytest.mark.parametrize(
    ("line", "fragment"),
    [
        ("{not json", "invalid JSON"),
        (_line(label="Maybe"), "label"),
        (_line(extra="field"), "xtra"),
        (_line(proofs={"fancy": "begin sorry end"}), "fancy"),
        (_line(questions=["q"], question_index=3), "question_index"),
    ],
)
def test_parse_corpus_rejects_bad_records(line: str, fragment: str) -> None:
    with pytest.raises(CorpusError, match=fragment):
        parse_corpus(line, source="bad.jsonl")


def test_duplicate_identifiers_are_rejected() -> None:
    with pytest.raises(CorpusError, match="duplicate") as info:
        parse_corpus("\n".join([_line(), _line()]))
    assert info.value.record_id == "p-1"


def test_attached_theory_and_question_are_checked() -> None:
    theory = "constant obj : Type\nconstant Anne : obj\nconstant round : obj → Prop\naxiom A1 : round Anne\n"
    assert parse_corpus(_line(theory=theory, formal_question="round Anne"))[0].formal_question == "round Anne"
    with pytest.raises(CorpusError, match="p-1"):
        parse_corpus(_line(theory=theory, formal_question="square Anne"))
    with pytest.raises(CorpusError):
        parse_corpus(_line(theory="axiom A1 : round Anne\n"))


def test_dump_then_load(tmp_path: Path, golden: dict[str, ProblemRecord]) -> None:
    path = tmp_path / "corpus.jsonl"
    records = [golden["golden-01-hudson"], golden["golden-03-turkey-q1"]]
    dump_corpus(records, path)
    assert load_corpus(path) == records


def test_load_corpus_missing_file(tmp_path: Path) -> None:
    with pytest.raises(CorpusError, match="Cannot read"):
        load_corpus(tmp_path / "absent.jsonl")
