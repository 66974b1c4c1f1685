"""
The abstract class `prefixforge.solver.Solver` and its `clingo` implementation.
"""

from abc import ABC, abstractmethod
import logging
from typing import Optional, Sequence

from clingo.control import Control

from .consumer import Consumer

log = logging.getLogger(__name__)


class Solver(ABC):
    """
    An initialized solver that feeds its models to a consumer.
    """

    @abstractmethod
    def solve(self, consumer: Consumer) -> None:
        """
        Solve and stream every model to `consumer` until it needs no more.

        Parameters
        ----------
        consumer
            The `prefixforge.consumer.Consumer` receiving the models.
        """


class Clingo(Solver):
    """
    A solver using `clingo.control.Control`.

    Parameters
    ----------
    arguments
        Command-line style `clingo` arguments, e.g. `["0", "--project"]`.
    program
        The logic program as a `str`.
    """

    def __init__(self, arguments: Optional[Sequence[str]] = None, program: str = "") -> None:
        self.__arguments = [] if arguments is None else list(arguments)
        self.__program = program

    def __repr__(self):
        name = self.__class__.__name__
        return f"{name}({self.__arguments!r}, {len(self.__program)} characters)"

    def solve(self, consumer: Consumer) -> None:
        ctl = Control(self.__arguments)
        ctl.add("base", [], self.__program)
        ctl.ground([("base", [])])
        log.debug("solving with %s", " ".join(self.__arguments))

        if not consumer.outcome().is_certain():
            ctl.solve(on_model=consumer.on_model, on_finish=consumer.on_finish)
