"""
The `prefixforge.outcome.Outcome` of a check. Quantifiers stream it while a netlist is
simulated and `prefixforge.verify.EquivVerdict.outcome` carries the final one; solver consumers
report theirs the same way.

Checking a netlist against the reference adder yields one of

- `F?` (nothing checked yet),
- `T?` (every sampled vector agreed, but the input space was not covered),
- `F!` (some vector disagreed), or
- `T!` (every input combination agreed).

The two booleans `value` and `is_certain` encode these four options.
"""

from typing import Tuple


class Outcome:
    """
    The outcome of a check.

    Parameters
    ----------
    value
        Whether the check currently passes.
    is_certain
        Whether further vectors could change `value`.
    """

    def __init__(self, value: bool, is_certain: bool) -> None:
        self.__value = bool(value)
        self.__is_certain = bool(is_certain)

    def __repr__(self):
        name = self.__class__.__name__
        return f"{name}({self.__value}, {self.__is_certain})"

    def __str__(self):
        return "TF"[not self.__value] + "?!"[self.__is_certain]

    def __eq__(self, other):
        if not isinstance(other, Outcome):
            return NotImplemented
        return self.as_tuple() == other.as_tuple()

    def __hash__(self):
        return hash(self.as_tuple())

    def value(self) -> bool:
        """
        Returns whether the check currently passes.
        """

        return self.__value

    def is_certain(self) -> bool:
        """
        Returns whether this outcome is final.
        """

        return self.__is_certain

    def as_tuple(self) -> Tuple[bool, bool]:
        """
        Returns this outcome as a tuple `(value, is_certain)`.
        """

        return (self.__value, self.__is_certain)

    def is_certainly_true(self) -> bool:
        """
        Returns whether the check certainly passes.
        """

        return self.__is_certain and self.__value

    def is_certainly_false(self) -> bool:
        """
        Returns whether the check certainly fails.
        """

        return self.__is_certain and not self.__value
