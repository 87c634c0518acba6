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

"""Dense premise retrieval over a theory's axioms.

Texts are embedded as L2-normalised TF-IDF vectors hashed into a fixed number
of buckets. Similarity is cosine similarity.
"""

from __future__ import annotations

import hashlib
import logging
import math
import re
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Optional, Protocol, Union

import numpy as np

from .exceptions import RetrievalError
from .kernel import Goal
from .logic import Formula, Theory, canonical_text

__all__ = [
    "EMBEDDING_DIMENSION",
    "Embedder",
    "HashingEmbedder",
    "RankedPremise",
    "PremiseIndex",
    "tokenize",
    "embed",
    "rank",
    "recall_at_k",
    "similarity_map",
]

logger = logging.getLogger(__name__)

EMBEDDING_DIMENSION = 512

_TOKEN = re.compile(r"[^\W\d][\w'.]*|[¬∧∨→↔∀∃⊥]")


def tokenize(text: str) -> list[str]:
    """Identifiers and logical connectives; bound-variable placeholders are dropped."""

    return _TOKEN.findall(text)


def _bucket(token: str, dimension: int) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") % dimension


class Embedder(Protocol):
    def embed(self, text: str) -> np.ndarray: ...


@dataclass
class HashingEmbedder:
    """TF-IDF embedder; inverse document frequencies come from :meth:`fit`."""

    dimension: int = EMBEDDING_DIMENSION
    idf: dict[str, float] = field(default_factory=dict)
    documents: int = 0

    def fit(self, texts: Iterable[str]) -> HashingEmbedder:
        frequencies: Counter[str] = Counter()
        count = 0
        for text in texts:
            count += 1
            frequencies.update(set(tokenize(text)))
        self.documents = count
        self.idf = {
            token: math.log((1 + count) / (1 + frequency)) + 1.0
            for token, frequency in frequencies.items()
        }
        return self

    def weight(self, token: str) -> float:
        if not self.documents:
            return 1.0
        return self.idf.get(token, math.log(1 + self.documents) + 1.0)

    def embed(self, text: str) -> np.ndarray:
        vector = np.zeros(self.dimension, dtype=np.float64)
        for token, count in Counter(tokenize(text)).items():
            vector[_bucket(token, self.dimension)] += count * self.weight(token)
        norm = float(np.linalg.norm(vector))
        if norm > 0.0:
            vector /= norm
        return vector


def embed(text: str, embedder: Optional[Embedder] = None) -> np.ndarray:
    """Embed ``text`` as a unit vector.

    Without ``embedder`` the weights are raw term frequencies. Pass an embedder
    fitted on the theory (as :class:`PremiseIndex` does) to get TF-IDF weights.
    """

    return (embedder or HashingEmbedder()).embed(text)


@dataclass(frozen=True)
class RankedPremise:
    name: str
    similarity: float


@dataclass
class PremiseIndex:
    """Embeddings of every axiom of one theory."""

    names: list[str]
    texts: list[str]
    matrix: np.ndarray
    embedder: Embedder
    top_m: int = 4

    @classmethod
    def build(
        cls,
        premises: Union[Theory, Sequence[tuple[str, Formula]]],
        *,
        top_m: int = 4,
        embedder: Optional[Embedder] = None,
    ) -> PremiseIndex:
        items = premises.axioms() if isinstance(premises, Theory) else list(premises)
        names = [name for name, _ in items]
        texts = [canonical_text(formula) for _, formula in items]
        if embedder is None:
            embedder = HashingEmbedder().fit(texts)
        if texts:
            matrix = np.vstack([embedder.embed(text) for text in texts])
        else:
            matrix = np.zeros((0, EMBEDDING_DIMENSION), dtype=np.float64)
        logger.debug("Built premise index", extra={"premises": len(names), "top_m": top_m})
        return cls(names=names, texts=texts, matrix=matrix, embedder=embedder, top_m=top_m)

    def __len__(self) -> int:
        return len(self.names)

    def similarities(self, text: str) -> np.ndarray:
        if not self.names:
            return np.zeros(0, dtype=np.float64)
        query = self.embedder.embed(text)
        return np.clip(self.matrix @ query, -1.0, 1.0)

    def rank_text(self, text: str, top_m: Optional[int] = None) -> list[RankedPremise]:
        limit = self.top_m if top_m is None else top_m
        scores = self.similarities(text)
        order = sorted(range(len(self.names)), key=lambda i: (-float(scores[i]), self.names[i]))
        return [RankedPremise(self.names[i], float(scores[i])) for i in order[:limit]]


def _goal_text(goal: Goal) -> str:
    parts = [canonical_text(formula) for formula in goal.formulas()]
    parts.append(canonical_text(goal.target))
    return " ".join(parts)


def rank(goal: Union[Goal, Formula], index: PremiseIndex, top_m: Optional[int] = None) -> list[RankedPremise]:
    """Top-m premises for ``goal`` by descending similarity; ties broken by name."""

    text = _goal_text(goal) if isinstance(goal, Goal) else canonical_text(goal)
    return index.rank_text(text, top_m)


def recall_at_k(
    ground_truth: Iterable[str],
    predicted: Sequence[Union[str, RankedPremise, tuple[str, float]]],
    k: int,
) -> float:
    """Fraction of ground-truth premises found among the first ``k`` predictions."""

    truth = set(ground_truth)
    if not truth:
        raise RetrievalError("recall@k is undefined for an empty ground-truth set")
    if k < 1:
        raise RetrievalError("k must be at least 1")
    names: list[str] = []
    for item in predicted[:k]:
        if isinstance(item, RankedPremise):
            names.append(item.name)
        elif isinstance(item, tuple):
            names.append(item[0])
        else:
            names.append(item)
    return len(truth & set(names)) / len(truth)


def similarity_map(ranking: Sequence[RankedPremise]) -> Mapping[str, float]:
    return {item.name: item.similarity for item in ranking}
