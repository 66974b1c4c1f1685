"""
The abstract class `prefixforge.quantifier.Quantifier` and classes extending it.

A quantifier consumes batches of per-vector agreement flags produced by simulating a netlist
and the reference adder side by side, and keeps the `prefixforge.outcome.Outcome` they imply.
"""

from abc import ABC, abstractmethod

import numpy as np

from .outcome import Outcome


class Quantifier(ABC):
    """
    A stateful consumer of agreement flags.
    """

    @abstractmethod
    def outcome(self) -> Outcome:
        """
        Returns the current outcome of this quantifier.
        """

    @abstractmethod
    def consume(self, agrees: np.ndarray) -> Outcome:
        """
        Consume one batch of agreement flags.

        Parameters
        ----------
        agrees
            A boolean array, one entry per simulated vector.

        Returns
        -------
        The outcome of this quantifier after the batch was consumed.
        """


class All(Quantifier):
    """
    A quantifier demanding agreement on every vector.
    """

    def __init__(self) -> None:
        self.__state = Outcome(True, False)
        self.__seen = 0
        self.__failed = 0

    def __repr__(self):
        name = self.__class__.__name__
        return f"{name}(__state={self.__state!r}, __seen={self.__seen}, __failed={self.__failed})"

    def __str__(self):
        return f"{self.__class__.__name__} {self.__seen - self.__failed}/{self.__seen}"

    def seen(self) -> int:
        """
        Returns the number of vectors consumed so far.
        """

        return self.__seen

    def failed(self) -> int:
        """
        Returns the number of disagreeing vectors consumed so far.
        """

        return self.__failed

    def outcome(self) -> Outcome:
        return self.__state

    def consume(self, agrees: np.ndarray) -> Outcome:
        agrees = np.asarray(agrees, dtype=bool)
        self.__seen += int(agrees.size)
        misses = int(agrees.size - np.count_nonzero(agrees))
        if misses:
            self.__failed += misses
            self.__state = Outcome(False, True)
        return self.__state


class Finished(Quantifier):
    """
    A wrapper around an `inner` quantifier marking that its input space is covered.
    The outcome equals the outcome of `inner` but is always certain, and further batches are
    ignored.

    Parameters
    ----------
    inner
        The quantifier that covered the whole input space.
    """

    def __init__(self, inner: Quantifier) -> None:
        self.__inner = inner
        self.__state = Outcome(inner.outcome().value(), True)

    def __repr__(self):
        name = self.__class__.__name__
        return f"{name}({self.__inner!r})"

    def __str__(self):
        return f"{self.__class__.__name__}({self.__inner})"

    def outcome(self) -> Outcome:
        return self.__state

    def consume(self, agrees: np.ndarray) -> Outcome:
        return self.__state
