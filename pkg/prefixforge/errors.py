"""
The exception hierarchy of `prefixforge`.

Every error raised on purpose by this package derives from `PrefixForgeError`.
Errors caused by the caller (bad widths, infeasible constraints, malformed inputs) derive from
`UserError`, errors that signal a broken invariant inside the pipeline derive from
`InternalError`. The command line maps them to the exit codes 1 and 2.
"""

from typing import Optional


class PrefixForgeError(Exception):
    """
    The base class of all errors raised by `prefixforge`.
    """

    exit_code = 2


class UserError(PrefixForgeError):
    """
    An error caused by the input of the caller.
    """

    exit_code = 1


class InternalError(PrefixForgeError):
    """
    An error indicating a violated invariant of the pipeline.
    """

    exit_code = 2


class UnsupportedWidth(UserError):
    """
    Raised for adder widths outside the supported range.
    """


class InfeasibleConstraints(UserError):
    """
    Raised if no prefix graph satisfies the given search constraints.
    """


class TimeBudgetExceeded(UserError):
    """
    Raised if a search budget ran out before any graph was found.
    """


class WidthTooLarge(UserError):
    """
    Raised if exhaustive enumeration is requested for a width that is too large.
    """


class InvalidConfig(UserError):
    """
    Raised for inconsistent exploration settings.
    """


class OutputError(UserError):
    """
    Raised if a report or netlist file cannot be written.
    """


class EmptyDesignSpace(UserError):
    """
    Raised if exploration produced no candidate.
    """


class KindMismatch(UserError):
    """
    Raised if an operation receives a node of the wrong kind.
    """


class LibraryError(UserError):
    """
    Raised for malformed cell libraries or a failed FO1 self-check.
    """


class UnmappedCell(UserError):
    """
    Raised if a cell name map lacks an entry for a used cell.
    """


class UnknownCell(UserError):
    """
    Raised if a parsed netlist instantiates a cell the library does not know.
    """


class MultipleDrivers(UserError):
    """
    Raised if a parsed netlist drives a net more than once.
    """


class NetlistSyntaxError(UserError):
    """
    Raised if a netlist text lies outside the accepted structural subset.

    Parameters
    ----------
    message
        The description of the problem.
    line
        The 1-based line of the problem.
    column
        The 1-based column of the problem.
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class UnmappableNode(InternalError):
    """
    Raised if a node has no cell realization under its polarity.
    """


class CycleDetected(InternalError):
    """
    Raised if a netlist contains a combinational cycle.
    """


class DanglingNet(InternalError):
    """
    Raised if a consumed net has no driver.
    """


class XState(InternalError):
    """
    Raised if simulation reaches a net without a value.
    """


class ClusterTooLarge(InternalError):
    """
    Raised in strict mode if a mismatch cluster exceeds the enumeration bound.
    """
