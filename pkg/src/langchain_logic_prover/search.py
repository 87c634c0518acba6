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

"""Best-first proof search over tactic states."""

from __future__ import annotations

import heapq
import itertools
import json
import logging
import threading
import time
from collections import Counter
from collections.abc import Iterable, Iterator, Sequence
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import IO, Any, Callable, Literal, Optional, Union

import anyio
from pydantic import BaseModel, ConfigDict, Field

from .exceptions import GeneratorError, TacticError
from .generator import TacticGenerator
from .kernel import Kernel, ProofState
from .logic import Formula, Theory, format_formula, negate
from .tactics import Sorry, Tactic, TacticScript, format_tactic

__all__ = [
    "SearchConfig",
    "SearchStatus",
    "SearchStats",
    "SearchOutcome",
    "SearchTrace",
    "search",
    "is_subsumed",
    "prove_both",
]

logger = logging.getLogger(__name__)


class SearchConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    time_budget: float = Field(default=180.0, gt=0.0, description="Wall-clock seconds per theorem.")
    num_candidates: int = Field(default=64, ge=1, description="Candidates requested per expansion.")
    max_expansions: Optional[int] = Field(
        default=None, ge=1, description="Optional expansion cap, reported as a timeout."
    )
    subsumption: bool = Field(default=True, description="Prune states containing an expanded one.")
    containment: Literal["multiset", "prefix"] = Field(
        default="multiset", description="How goal lists are compared for subsumption."
    )
    seed: Optional[int] = Field(default=None, description="Reserved for stochastic scorers.")


class SearchStatus(str, Enum):
    PROVED = "proved"
    TIMEOUT = "timeout"
    EXHAUSTED = "exhausted"
    GENERATOR_FAILURE = "generator-failure"


@dataclass
class SearchStats:
    expansions: int = 0
    deduplicated: int = 0
    pruned: int = 0
    generated: int = 0
    rejected: int = 0
    wall_time: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "expansions": self.expansions,
            "deduplicated": self.deduplicated,
            "pruned": self.pruned,
            "generated": self.generated,
            "rejected": self.rejected,
            "wall_time": self.wall_time,
        }


@dataclass(frozen=True)
class SearchOutcome:
    target: Formula
    status: SearchStatus
    tactics: tuple[Tactic, ...] = ()
    stats: SearchStats = field(default_factory=SearchStats)
    error: Optional[str] = None

    @property
    def proved(self) -> bool:
        return self.status is SearchStatus.PROVED

    def script(self) -> Optional[TacticScript]:
        return TacticScript(self.tactics) if self.tactics else None

    def script_text(self) -> Optional[str]:
        script = self.script()
        return script.render() if script is not None else None

    def to_dict(self) -> dict[str, Any]:
        return {
            "target": format_formula(self.target),
            "status": self.status.value,
            "tactics": [format_tactic(tactic) for tactic in self.tactics],
            "stats": self.stats.to_dict(),
            "error": self.error,
        }


class SearchTrace:
    """Append-only JSON-lines log of search events."""

    def __init__(self, stream: IO[str]) -> None:
        self._stream = stream
        self._lock = threading.Lock()

    @classmethod
    @contextmanager
    def open(cls, path: Union[str, Path]) -> Iterator[SearchTrace]:
        with Path(path).open("a", encoding="utf-8") as stream:
            yield cls(stream)

    def write(self, event: str, **fields: Any) -> None:
        record = {"event": event, **fields}
        with self._lock:
            self._stream.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
            self._stream.flush()


class _Subsumption:
    """Index of expanded goal lists for containment checks."""

    def __init__(self, containment: str) -> None:
        self.containment = containment
        self._entries: dict[str, list[Any]] = {}

    def add(self, goals: tuple[str, ...]) -> None:
        if not goals:
            return
        if self.containment == "multiset":
            self._entries.setdefault(min(goals), []).append(Counter(goals))
        else:
            self._entries.setdefault(goals[0], []).append(goals)

    def covers(self, goals: tuple[str, ...]) -> bool:
        if not goals:
            return False
        if self.containment == "prefix":
            return any(
                len(other) <= len(goals) and goals[: len(other)] == other
                for other in self._entries.get(goals[0], ())
            )
        counts = Counter(goals)
        for goal in counts:
            for other in self._entries.get(goal, ()):
                if all(counts[text] >= number for text, number in other.items()):
                    return True
        return False


def is_subsumed(
    goals: Sequence[str],
    expanded: Iterable[Sequence[str]],
    containment: Literal["multiset", "prefix"] = "multiset",
) -> bool:
    """Whether some expanded goal list is contained in ``goals``.

    >>> is_subsumed(["G1", "G2"], [["G1"]])
    True
    >>> is_subsumed(["G1"], [["G1", "G2"]])
    False
    """

    index = _Subsumption(containment)
    for other in expanded:
        index.add(tuple(other))
    return index.covers(tuple(goals))


@dataclass(order=True)
class _Entry:
    priority: float
    key: str
    sequence: int
    state: ProofState = field(compare=False)
    path: tuple[Tactic, ...] = field(compare=False)
    logprob: float = field(compare=False)


def search(
    theory: Theory,
    target: Formula,
    generator: TacticGenerator,
    config: Optional[SearchConfig] = None,
    *,
    trace: Optional[SearchTrace] = None,
    label: Optional[str] = None,
    kernel: Optional[Kernel] = None,
    clock: Callable[[], float] = time.monotonic,
) -> SearchOutcome:
    """Search for a tactic script proving ``target`` from ``theory``.

    States are expanded in order of cumulative log-probability, ties broken by
    their canonical text. A state is expanded at most once.
    """

    settings = config or SearchConfig()
    kernel = kernel or Kernel(theory)
    name = label or format_formula(target)
    stats = SearchStats()
    started = clock()
    deadline = started + settings.time_budget

    def finish(status: SearchStatus, path: tuple[Tactic, ...] = (), error: Optional[str] = None) -> SearchOutcome:
        stats.wall_time = clock() - started
        if trace is not None:
            trace.write(
                "finish",
                theorem=name,
                status=status.value,
                tactics=[format_tactic(item) for item in path],
                **stats.to_dict(),
            )
        logger.debug(
            "Search finished",
            extra={"theorem": name, "status": status.value, "expansions": stats.expansions},
        )
        return SearchOutcome(target, status, path, stats, error)

    root = kernel.init_state(target)
    counter = itertools.count()
    frontier: list[_Entry] = [_Entry(-0.0, root.canonical_text(), next(counter), root, (), 0.0)]
    expanded: set[str] = set()
    best: dict[str, float] = {}
    covered = _Subsumption(settings.containment)

    while frontier:
        if clock() >= deadline:
            return finish(SearchStatus.TIMEOUT)
        if settings.max_expansions is not None and stats.expansions >= settings.max_expansions:
            return finish(SearchStatus.TIMEOUT)
        entry = heapq.heappop(frontier)
        if entry.key in expanded:
            stats.deduplicated += 1
            continue
        goal_texts = entry.state.goal_texts()
        if settings.subsumption and covered.covers(goal_texts):
            stats.pruned += 1
            if trace is not None:
                trace.write("prune", theorem=name, state=entry.key)
            continue
        expanded.add(entry.key)
        if settings.subsumption:
            covered.add(goal_texts)
        stats.expansions += 1
        if trace is not None:
            trace.write("expand", theorem=name, state=entry.key, logprob=entry.logprob, depth=len(entry.path))
        try:
            candidates = generator.generate(entry.state, settings.num_candidates)
        except GeneratorError as exc:
            logger.warning("Tactic generator failed", extra={"theorem": name, "error": str(exc)})
            return finish(SearchStatus.GENERATOR_FAILURE, error=str(exc))
        for candidate in candidates[: settings.num_candidates]:
            if clock() >= deadline:
                return finish(SearchStatus.TIMEOUT)
            stats.generated += 1
            if isinstance(candidate.tactic, Sorry):
                stats.rejected += 1
                continue
            try:
                child = kernel.apply(entry.state, candidate.tactic)
            except TacticError:
                stats.rejected += 1
                continue
            if child.tainted:
                stats.rejected += 1
                continue
            path = (*entry.path, candidate.tactic)
            if child.is_complete:
                return finish(SearchStatus.PROVED, path)
            logprob = entry.logprob + candidate.logprob
            key = child.canonical_text()
            if key in expanded or best.get(key, float("-inf")) >= logprob:
                stats.deduplicated += 1
                continue
            best[key] = logprob
            heapq.heappush(frontier, _Entry(-logprob, key, next(counter), child, path, logprob))
    return finish(SearchStatus.EXHAUSTED)


def prove_both(
    theory: Theory,
    question: Formula,
    generator: TacticGenerator,
    config: Optional[SearchConfig] = None,
    *,
    concurrent: bool = False,
    trace: Optional[SearchTrace] = None,
    names: Optional[tuple[str, str]] = None,
) -> tuple[SearchOutcome, SearchOutcome]:
    """Search for proofs of ``question`` and of its negation."""

    targets = (question, negate(question))
    labels = names or (format_formula(targets[0]), format_formula(targets[1]))
    kernel = Kernel(theory)

    def run(position: int) -> SearchOutcome:
        return search(
            theory,
            targets[position],
            generator,
            config,
            trace=trace,
            label=labels[position],
            kernel=kernel,
        )

    if not concurrent:
        return run(0), run(1)

    results: list[Optional[SearchOutcome]] = [None, None]

    async def worker(position: int) -> None:
        results[position] = await anyio.to_thread.run_sync(run, position)

    async def main() -> None:
        async with anyio.create_task_group() as group:
            group.start_soon(worker, 0)
            group.start_soon(worker, 1)

    anyio.run(main)
    positive, negative = results
    assert positive is not None and negative is not None
    return positive, negative
