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

"""Premise retrieval tool."""

from __future__ import annotations

import logging
from collections.abc import Mapping
from typing import Any, Optional

import anyio
from langchain_core.callbacks import AsyncCallbackManagerForToolRun, CallbackManagerForToolRun
from langchain_core.tools import BaseTool
from pydantic import BaseModel, Field

from ..config import ProverSettings
from ..exceptions import LogicProverError
from ..logic import format_formula
from ..parser import parse_formula, parse_theory
from ..retrieval import PremiseIndex, rank
from .solve import _raise_tool_error

__all__ = [
    "PremiseRetrieveInput",
    "RetrievedPremise",
    "PremiseRetrieveTool",
]

logger = logging.getLogger(__name__)


class PremiseRetrieveInput(BaseModel):
    """Inputs accepted by the premise retrieval tool."""

    theory: str = Field(description="Lean-subset source whose axioms are ranked.")
    goal: str = Field(description="Goal formula to rank the axioms against.")
    k: Optional[int] = Field(default=None, ge=1, description="Number of premises to return.")


class RetrievedPremise(BaseModel):
    name: str
    formula: str
    similarity: float = Field(description="Cosine similarity to the goal.")


class PremiseRetrieveTool(BaseTool):
    """LangChain tool that ranks a theory's axioms by similarity to a goal."""

    name: str = "premise_retrieve"
    description: str = (
        "Rank the axioms of a Lean-subset theory by their similarity to a goal formula"
        " and return the top k."
    )

    def __init__(
        self,
        *,
        settings: Optional[ProverSettings] = None,
        env: Optional[Mapping[str, str]] = None,
        **kwargs: Any,
    ) -> None:
        kwargs.setdefault("args_schema", PremiseRetrieveInput)
        super().__init__(**kwargs)
        self._settings = ProverSettings.resolve(settings=settings, env=env)

    @property
    def settings(self) -> ProverSettings:
        return self._settings

    def _run(
        self,
        theory: str,
        goal: str,
        k: Optional[int] = None,
        run_manager: Optional[CallbackManagerForToolRun] = None,
    ) -> list[dict[str, Any]]:
        payload = PremiseRetrieveInput(theory=theory, goal=goal, k=k)
        return [item.model_dump() for item in self._retrieve(payload)]

    async def _arun(
        self,
        theory: str,
        goal: str,
        k: Optional[int] = None,
        run_manager: Optional[AsyncCallbackManagerForToolRun] = None,
    ) -> list[dict[str, Any]]:
        payload = PremiseRetrieveInput(theory=theory, goal=goal, k=k)
        results = await anyio.to_thread.run_sync(self._retrieve, payload)
        return [item.model_dump() for item in results]

    def _retrieve(self, payload: PremiseRetrieveInput) -> list[RetrievedPremise]:
        limit = payload.k or self._settings.retrieval_size
        try:
            premises = parse_theory(payload.theory).without_theorems()
            formula = parse_formula(payload.goal)
        except LogicProverError as exc:
            _raise_tool_error("Retrieve premises", exc)
        logger.debug("Ranking premises", extra={"goal": payload.goal, "k": limit})
        axioms = dict(premises.axioms())
        index = PremiseIndex.build(premises, top_m=limit)
        return [
            RetrievedPremise(name=item.name, formula=format_formula(axioms[item.name]), similarity=item.similarity)
            for item in rank(formula, index, limit)
        ]
