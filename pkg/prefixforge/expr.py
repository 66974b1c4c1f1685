"""
The abstract class `prefixforge.expr.Expr` and the Boolean combinators extending it.

Expressions are symbolic carry/propagate functions over the named adder inputs (`a0`, `b0`,
..., `cin`). They evaluate on `0`/`1` integers or on `numpy` integer arrays holding one input
vector per entry, so a single call can sweep a whole truth table.
"""

from abc import ABC, abstractmethod
from typing import Iterable, Mapping, Set


class Expr(ABC):
    """
    A Boolean expression over named inputs.
    """

    @abstractmethod
    def evaluate(self, env: Mapping[str, object]):
        """
        Returns the value of this expression.

        Parameters
        ----------
        env
            Maps every variable name to `0`/`1` or to an integer array of `0`/`1`.

        Returns
        -------
        `0`/`1`, or an array when `env` holds arrays.
        """

    @abstractmethod
    def variables(self) -> Set[str]:
        """
        Returns the names of all variables occurring in this expression.
        """


class Var(Expr):
    """
    A named input.

    Parameters
    ----------
    name
        The input name, e.g. `a3`.
    """

    def __init__(self, name: str) -> None:
        self.__name = name

    def __repr__(self):
        return f"{self.__class__.__name__}(\"{self.__name}\")"

    def __str__(self):
        return self.__name

    def name(self) -> str:
        """
        Returns the variable name.
        """

        return self.__name

    def evaluate(self, env):
        return env[self.__name]

    def variables(self) -> Set[str]:
        return {self.__name}


class Const(Expr):
    """
    The constant `0` or `1`.
    """

    def __init__(self, value: bool) -> None:
        self.__value = int(bool(value))

    def __repr__(self):
        return f"{self.__class__.__name__}({self.__value})"

    def __str__(self):
        return str(self.__value)

    def evaluate(self, env):
        return self.__value

    def variables(self) -> Set[str]:
        return set()


class _Nary(Expr):
    symbol = "?"

    def __init__(self, *operands: Expr) -> None:
        if not operands:
            raise ValueError(f"{self.__class__.__name__} needs at least one operand")
        self._operands = tuple(operands)

    def __repr__(self):
        operands = ", ".join(repr(operand) for operand in self._operands)
        return f"{self.__class__.__name__}({operands})"

    def __str__(self):
        if len(self._operands) == 1:
            return str(self._operands[0])
        return "(" + f" {self.symbol} ".join(str(operand) for operand in self._operands) + ")"

    def operands(self):
        """
        Returns the operands of this expression.
        """

        return self._operands

    def variables(self) -> Set[str]:
        result = set()
        for operand in self._operands:
            result |= operand.variables()
        return result


class And(_Nary):
    """
    The conjunction of all `operands`.
    """

    symbol = "&"

    def evaluate(self, env):
        result = self._operands[0].evaluate(env)
        for operand in self._operands[1:]:
            result = result & operand.evaluate(env)
        return result


class Or(_Nary):
    """
    The disjunction of all `operands`.
    """

    symbol = "|"

    def evaluate(self, env):
        result = self._operands[0].evaluate(env)
        for operand in self._operands[1:]:
            result = result | operand.evaluate(env)
        return result


class Xor(_Nary):
    """
    The exclusive or of all `operands`.
    """

    symbol = "^"

    def evaluate(self, env):
        result = self._operands[0].evaluate(env)
        for operand in self._operands[1:]:
            result = result ^ operand.evaluate(env)
        return result


def conjunction(operands: Iterable[Expr]) -> Expr:
    """
    Returns the conjunction of `operands`, or the constant `1` if there are none.
    """

    operands = tuple(operands)
    if not operands:
        return Const(True)
    if len(operands) == 1:
        return operands[0]
    return And(*operands)
