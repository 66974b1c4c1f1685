"""
The abstract class `prefixforge.consumer.Consumer` and the model consumers used by the
topology enumerator.

A consumer receives the answer sets of the topology encoding one by one and decides when it has
seen enough. Each answer set is reduced to its split map `{(hi, lo): m}` right away, because
`clingo` models are only valid inside the callback.
"""

from abc import ABC, abstractmethod
import os
from textwrap import indent
from typing import Dict, List, Optional, Sequence, Tuple

from clingo.solving import Model, SolveResult

from .outcome import Outcome

SplitMap = Dict[Tuple[int, int], int]


def splits_of(model: Model) -> SplitMap:
    """
    Returns the `split(Hi, Lo, M)` atoms shown in `model` as a split map.
    """

    splits = {}
    for symbol in model.symbols(shown=True):
        if symbol.name == "split" and len(symbol.arguments) == 3:
            hi, lo, split = (argument.number for argument in symbol.arguments)
            splits[(hi, lo)] = split
    return splits


class Consumer(ABC):
    """
    A consumer of the models of a `prefixforge.solver.Solver`.
    """

    def on_model(self, _model: Model) -> bool:
        """
        Consume a model.

        Returns
        -------
        Whether further models are needed.
        """

        return True

    @abstractmethod
    def on_finish(self, result: SolveResult) -> None:
        """
        Consume the final solve result. Afterwards the outcome must be certain.
        """

    @abstractmethod
    def outcome(self) -> Outcome:
        """
        Returns whether this consumer found what it was looking for, and whether that is final.
        """


class Collect(Consumer):
    """
    Collects the split maps of up to `limit` models, or of all models if `limit` is `None`.
    """

    def __init__(self, limit: Optional[int] = None) -> None:
        self.__limit = limit
        self.__models: List[SplitMap] = []
        self.__outcome = Outcome(False, limit == 0)

    def __repr__(self):
        return f"{self.__class__.__name__}({self.__limit}, __models={len(self.__models)})"

    def __str__(self):
        return f"[{self.__outcome}] {self.__class__.__name__} {len(self.__models)}/{self.__limit}"

    def models(self) -> List[SplitMap]:
        """
        Returns the collected split maps in the order they were found.
        """

        return list(self.__models)

    def on_model(self, model: Model) -> bool:
        self.__models.append(splits_of(model))
        if self.__limit is not None and len(self.__models) >= self.__limit:
            self.__outcome = Outcome(True, True)
            return False
        self.__outcome = Outcome(True, False)
        return True

    def on_finish(self, result: SolveResult) -> None:
        self.__outcome = Outcome(bool(self.__models), True)

    def outcome(self) -> Outcome:
        return self.__outcome


class Minimum(Consumer):
    """
    Tracks the cheapest model of an optimization run.
    The outcome is certainly true once optimality is proven.
    """

    def __init__(self) -> None:
        self.__best: Optional[SplitMap] = None
        self.__cost: Optional[Sequence[int]] = None
        self.__outcome = Outcome(False, False)

    def __repr__(self):
        return f"{self.__class__.__name__}(__cost={self.__cost})"

    def __str__(self):
        return os.linesep.join([
            f"[{self.__outcome}] {self.__class__.__name__}",
            indent(f"cost: {self.__cost}", 4 * " "),
        ])

    def best(self) -> Optional[SplitMap]:
        """
        Returns the split map of the cheapest model found.
        """

        return self.__best

    def cost(self) -> Optional[Sequence[int]]:
        """
        Returns the cost vector of the cheapest model found.
        """

        return self.__cost

    def on_model(self, model: Model) -> bool:
        self.__best = splits_of(model)
        self.__cost = list(model.cost)
        return True

    def on_finish(self, result: SolveResult) -> None:
        self.__outcome = Outcome(self.__best is not None and result.exhausted, True)

    def outcome(self) -> Outcome:
        return self.__outcome
