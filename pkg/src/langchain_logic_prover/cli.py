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

"""Command line interface for langchain-logic-prover."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from contextlib import ExitStack
from importlib import resources
from pathlib import Path
from typing import Any, NoReturn, Optional

from .client import ChatClient, ReplayChatClient, create_chat_client
from .config import ProverSettings
from .corpus import dump_corpus, load_corpus, load_golden_corpus
from .evaluation import ProverPipeline, evaluate
from .exceptions import LogicProverError, TheoryCheckError, TheoryParseError
from .generator import create_generator
from .kernel import check_theory
from .logic import SymbolTable, Theory, check_formula
from .oracle import InstanceParams, generate_instances, oracle
from .parser import parse_formula, parse_theory, pretty_print
from .retrieval import PremiseIndex, rank
from .scorer import ScorerProcess, parse_scorer_spec
from .search import SearchTrace, search
from .solver import solve

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _print_json(data: Any) -> None:
    json.dump(data, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")


def _read_text(parser: argparse.ArgumentParser, path: Path) -> str:
    if not path.is_file():
        parser.error(f"file not found: {path}")
    return path.read_text(encoding="utf-8")


def _fail(message: str) -> int:
    sys.stderr.write(f"error: {message}\n")
    return EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="logic-prover", description="Prove, solve and evaluate Lean-subset theories")
    parser.add_argument("--timeout-secs", type=float, help="Per-theorem search budget (default 180).")
    parser.add_argument("--num-tactics", type=int, help="Candidates per expansion (default 64).")
    parser.add_argument("--max-expansions", type=int, help="Expansion cap per theorem.")
    parser.add_argument("--scorer", help="'builtin' or 'subprocess:<command>'.")
    parser.add_argument("--no-subsumption", action="store_true", help="Disable subsumption pruning.")
    parser.add_argument("--containment", choices=["multiset", "prefix"], help="Subsumption comparison.")
    parser.add_argument("--concurrent-duals", action="store_true", help="Search both dual theorems at once.")
    parser.add_argument("--trace", type=Path, help="Append search events as JSON lines to this file.")
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable debug logging.")
    commands = parser.add_subparsers(dest="command", required=True)

    command = commands.add_parser("parse", help="Parse a theory and print it back.")
    command.add_argument("file", type=Path)

    command = commands.add_parser("check", help="Check well-formedness and replay bundled proofs.")
    command.add_argument("file", type=Path)

    command = commands.add_parser("prove", help="Search for a proof of one theorem.")
    command.add_argument("file", type=Path)
    command.add_argument("--theorem", required=True)

    command = commands.add_parser("solve", help="Answer a question with the dual searches.")
    command.add_argument("file", type=Path)
    command.add_argument("--question", required=True, help="Question formula.")

    command = commands.add_parser("oracle", help="Label a question by forward chaining.")
    command.add_argument("file", type=Path)
    command.add_argument("--question", required=True)
    command.add_argument("--depth-cap", type=int)

    command = commands.add_parser("gen", help="Generate a labelled corpus.")
    command.add_argument("--seed", type=int, default=1)
    command.add_argument("--count", type=int, default=10)
    command.add_argument("--depth", type=int, default=3, help="Deepest derivation (1-5).")
    command.add_argument("--rules", type=int, help="Rules per theory (at most 15).")
    command.add_argument("--output", type=Path, help="Corpus file to write (default stdout).")

    command = commands.add_parser("eval", help="Evaluate a corpus (default: the bundled golden corpus).")
    command.add_argument("corpus", type=Path, nargs="?")
    command.add_argument("--workers", type=int)
    command.add_argument("--formalize", action="store_true", help="Ignore attached theories and formalize.")
    command.add_argument("--replay", type=Path, help="Replay completions from this fixtures directory.")
    command.add_argument("--bundled-replay", action="store_true", help="Replay the bundled fixtures.")
    command.add_argument("--json", type=Path, help="Also write the JSON report here.")
    command.add_argument("--format", choices=["table", "json"], default="table")

    command = commands.add_parser("retrieve", help="Rank axioms against a goal.")
    command.add_argument("file", type=Path)
    command.add_argument("--goal", required=True)
    command.add_argument("-k", type=int, default=4)
    return parser


def _settings(parser: argparse.ArgumentParser, args: argparse.Namespace) -> ProverSettings:
    overrides = {
        "timeout_secs": args.timeout_secs,
        "num_tactics": args.num_tactics,
        "max_expansions": args.max_expansions,
        "scorer": args.scorer,
        "containment": args.containment,
        "subsumption": False if args.no_subsumption else None,
        "concurrent_duals": True if args.concurrent_duals else None,
        "workers": getattr(args, "workers", None),
    }
    try:
        return ProverSettings.resolve(**overrides)
    except (LogicProverError, ValueError) as exc:
        parser.error(str(exc))


def _theory(parser: argparse.ArgumentParser, path: Path, *, check: bool = True) -> Theory:
    return parse_theory(_read_text(parser, path), check=check)


def _problem_error(exc: LogicProverError) -> dict[str, Any]:
    data: dict[str, Any] = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, TheoryParseError):
        data["span"] = str(exc.span) if exc.span else None
        data["expected"] = list(exc.expected)
    if isinstance(exc, TheoryCheckError):
        data["diagnostics"] = [str(item) for item in exc.diagnostics]
    return data


def _run(parser: argparse.ArgumentParser, args: argparse.Namespace, settings: ProverSettings, stack: ExitStack) -> int:
    trace = stack.enter_context(SearchTrace.open(args.trace)) if args.trace else None
    command = parse_scorer_spec(settings.scorer)
    process = stack.enter_context(ScorerProcess(command, timeout=settings.scorer_timeout)) if command else None

    if args.command == "parse":
        sys.stdout.write(pretty_print(_theory(parser, args.file, check=False)))
        return EXIT_OK

    if args.command == "check":
        reports = check_theory(_theory(parser, args.file))
        _print_json({"diagnostics": [], "theorems": [report.to_dict() for report in reports]})
        return EXIT_OK if all(report.valid for report in reports) else EXIT_FAILURE

    if args.command == "prove":
        theory = _theory(parser, args.file)
        declaration = theory.get(args.theorem)
        if declaration is None or declaration.formula is None:
            parser.error(f"no theorem named {args.theorem!r}")
        premises = theory.without_theorems()
        generator = create_generator(premises, settings.generator_config(), process=process)
        outcome = search(
            premises, declaration.formula, generator, settings.search_config(), trace=trace, label=args.theorem
        )
        _print_json({**outcome.to_dict(), "theorem": args.theorem, "script": outcome.script_text()})
        return EXIT_OK if outcome.proved else EXIT_FAILURE

    if args.command == "solve":
        theory = _theory(parser, args.file)
        solution = solve(theory, parse_formula(args.question), settings, process=process, trace=trace)
        _print_json(solution.to_dict())
        return EXIT_OK

    if args.command == "oracle":
        theory = _theory(parser, args.file)
        question = parse_formula(args.question)
        check_formula(SymbolTable.from_theory(theory), question, label="question")
        result = oracle(theory, question, args.depth_cap)
        _print_json({"label": result.label.value, "consistent": result.consistent, "depth": result.depth})
        return EXIT_OK

    if args.command == "gen":
        if args.count < 0:
            parser.error("--count must not be negative")
        try:
            params = InstanceParams(
                max_depth=args.depth,
                **({"num_rules": args.rules} if args.rules is not None else {}),
            )
        except ValueError as exc:
            parser.error(str(exc))
        instances = generate_instances(args.seed, args.count, params)
        records = [instance.to_record(f"gen-{args.seed}-{index:04d}") for index, instance in enumerate(instances)]
        if args.output is not None:
            dump_corpus(records, args.output)
        else:
            for record in records:
                sys.stdout.write(json.dumps(record.model_dump(exclude_none=True), ensure_ascii=False, sort_keys=True) + "\n")
        return EXIT_OK

    if args.command == "eval":
        records = load_corpus(args.corpus) if args.corpus is not None else load_golden_corpus()
        if args.replay is not None and args.bundled_replay:
            parser.error("use either --replay or --bundled-replay")
        chat_client: Optional[ChatClient] = None
        if args.bundled_replay:
            chat_client = ReplayChatClient(resources.files("langchain_logic_prover") / "data" / "replay")
        elif args.replay is not None:
            chat_client = ReplayChatClient(args.replay)
        elif args.formalize:
            chat_client = create_chat_client(settings)
        formalize = args.formalize or chat_client is not None
        pipeline = ProverPipeline(settings, chat_client=chat_client, process=process, formalize=formalize)
        report = evaluate(records, pipeline, workers=settings.workers)
        if args.json is not None:
            args.json.write_text(report.to_json() + "\n", encoding="utf-8")
        if args.format == "json":
            sys.stdout.write(report.to_json() + "\n")
        else:
            sys.stdout.write(report.format_table() + "\n")
        return EXIT_OK

    theory = _theory(parser, args.file)
    goal = parse_formula(args.goal)
    if args.k < 1:
        parser.error("-k must be at least 1")
    index = PremiseIndex.build(theory.without_theorems(), top_m=args.k)
    _print_json([{"name": item.name, "similarity": item.similarity} for item in rank(goal, index, args.k)])
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point for the ``logic-prover`` command."""

    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG)
    settings = _settings(parser, args)
    try:
        with ExitStack() as stack:
            return _run(parser, args, settings, stack)
    except LogicProverError as exc:
        if args.command in {"check", "parse"}:
            _print_json(_problem_error(exc))
            return EXIT_FAILURE
        return _fail(str(exc))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
