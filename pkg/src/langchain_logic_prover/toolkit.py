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

"""Toolkit factory for the prover tools."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Optional, Union

from .config import ProverSettings
from .tools import LogicSolveTool, PremiseRetrieveTool

__all__ = ["ProverToolkit", "create_toolkit"]


@dataclass
class ProverToolkit:
    """Container bundling preconfigured prover tools."""

    settings: ProverSettings
    solve: LogicSolveTool
    retrieve: PremiseRetrieveTool

    @property
    def tools(self) -> Sequence[Union[LogicSolveTool, PremiseRetrieveTool]]:
        return (self.solve, self.retrieve)


def create_toolkit(
    *,
    settings: Optional[ProverSettings] = None,
    env: Optional[Mapping[str, str]] = None,
) -> ProverToolkit:
    """Build a ProverToolkit whose tools share one settings object."""

    resolved_settings = ProverSettings.resolve(settings=settings, env=env)
    solve = LogicSolveTool(settings=resolved_settings)
    retrieve = PremiseRetrieveTool(settings=resolved_settings)
    return ProverToolkit(settings=resolved_settings, solve=solve, retrieve=retrieve)
