"""
Minimum-size prefix topology search under depth and fanout bounds, and the `clingo` based
enumerator that serves as its oracle on small widths.
"""

from dataclasses import dataclass, field
import logging
import time
from typing import Dict, List, Optional, Tuple

from .classical import Architecture, make_classical
from .consumer import Collect, Minimum
from .errors import InfeasibleConstraints, TimeBudgetExceeded, UnsupportedWidth, WidthTooLarge
from .graph import PrefixGraph, metrics, min_depth
from .solver import Clingo

log = logging.getLogger(__name__)

SpanKey = Tuple[int, int]

ENUMERATION_LIMIT = 12


@dataclass(frozen=True)
class SearchConstraints:
    """
    Bounds for the topology search.

    Parameters
    ----------
    width
        The number of bit columns.
    max_depth
        The level bound, `width - 1` if not given.
    max_fanout
        The bound on the consumers of any node, unbounded if `None`. Leaves count like prefix
        nodes, as in `prefixforge.graph.metrics`, so the 16-bit Kogge-Stone graph has fanout 4.
    node_budget
        The number of search expansions after which the best graph found so far is returned.
    time_budget
        An optional wall-clock cutoff in seconds.
    """

    width: int
    max_depth: Optional[int] = None
    max_fanout: Optional[int] = None
    node_budget: int = 200_000
    time_budget: Optional[float] = None

    def depth(self) -> int:
        """
        Returns the effective level bound.
        """

        if self.max_depth is None:
            return max(0, self.width - 1)
        return self.max_depth

    def check(self) -> None:
        """
        Raise if no prefix graph can satisfy these constraints.
        """

        if self.width < 1:
            raise UnsupportedWidth(f"adder width must be at least 1, got {self.width}")
        if self.depth() < min_depth(self.width):
            raise InfeasibleConstraints(
                f"depth {self.depth()} is below ceil(log2 {self.width}) = {min_depth(self.width)}"
            )
        if self.max_fanout is not None and self.max_fanout < 2:
            raise InfeasibleConstraints(f"fanout bound must be at least 2, got {self.max_fanout}")

    def admits(self, graph: PrefixGraph) -> bool:
        """
        Returns whether `graph` respects the depth and fanout bounds.
        """

        measured = metrics(graph)
        if measured.depth > self.depth():
            return False
        return self.max_fanout is None or measured.max_fanout <= self.max_fanout


@dataclass(frozen=True)
class SearchResult:
    """
    The outcome of `search_min_size`.

    `optimal` holds if the search space was exhausted, so no smaller graph exists.
    """

    graph: PrefixGraph
    optimal: bool
    expansions: int = field(default=0, compare=False)


def preference(graph: PrefixGraph) -> Tuple:
    """
    Returns the ordering key among graphs: size, then maximum fanout, then the sum of node
    levels, then the sorted spans.
    """

    internal = graph.internal_nodes()
    return (
        len(internal),
        metrics(graph).max_fanout,
        sum(node.level for node in internal),
        tuple(sorted((node.span.hi, node.span.lo, graph.split(node)) for node in internal)),
    )


def ripple(width: int) -> PrefixGraph:
    """
    Returns the serial chain `[1:0], [2:0], ...`, the smallest graph of any width.
    """

    return PrefixGraph.from_splits(width, {(column, 0): column - 1 for column in range(1, width)})


class _DepthFirst:
    """
    Depth-first search over split choices.

    Output spans start pending with the depth bound as their level budget. The longest pending
    span is decided next, so all its consumers are already decided and its budget and consumer
    count are final. Each child inherits the budget of its parent minus one.
    """

    def __init__(self, constraints: SearchConstraints, incumbent: Optional[PrefixGraph]) -> None:
        self.__width = constraints.width
        self.__fanout = constraints.max_fanout
        self.__node_budget = constraints.node_budget
        self.__deadline = None
        if constraints.time_budget is not None:
            self.__deadline = time.monotonic() + constraints.time_budget
        self.__best = incumbent
        self.__best_key = None if incumbent is None else preference(incumbent)
        self.__expansions = 0
        self.__stopped = False
        self.__decided: Dict[SpanKey, int] = {}
        self.__pending: Dict[SpanKey, int] = {
            (column, 0): constraints.depth() for column in range(1, self.__width)
        }
        self.__consumers: Dict[SpanKey, int] = {}

    def __bound(self) -> int:
        return self.__best_key[0] if self.__best_key is not None else self.__width * self.__width

    def run(self) -> None:
        self.__dfs()

    def best(self) -> Optional[PrefixGraph]:
        """
        Returns the preferred graph found so far.
        """

        return self.__best

    def expansions(self) -> int:
        return self.__expansions

    def stopped(self) -> bool:
        """
        Returns whether a budget cut the search short.
        """

        return self.__stopped

    def __out_of_budget(self) -> bool:
        if self.__expansions >= self.__node_budget:
            return True
        if self.__deadline is not None and self.__expansions % 256 == 0:
            return time.monotonic() > self.__deadline
        return False

    def __record(self) -> None:
        graph = PrefixGraph.from_splits(self.__width, self.__decided)
        key = preference(graph)
        if self.__best_key is None or key < self.__best_key:
            log.debug("search found size %d after %d expansions", key[0], self.__expansions)
            self.__best, self.__best_key = graph, key

    def __ordered_splits(self, span: SpanKey) -> List[int]:
        def score(split):
            children = ((span[0], split + 1), (split, span[1]))
            fresh = sum(
                1 for child in children
                if child[0] != child[1]
                and child not in self.__decided and child not in self.__pending
            )
            load = sum(self.__consumers.get(child, 0) for child in children)
            return (fresh, load, -split)

        return sorted(range(span[1], span[0]), key=score)

    def __dfs(self) -> None:
        if self.__stopped:
            return
        self.__expansions += 1
        if self.__out_of_budget():
            self.__stopped = True
            return
        if not self.__pending:
            self.__record()
            return

        span = max(self.__pending, key=lambda s: (s[0] - s[1], s[0]))
        budget = self.__pending.pop(span)

        for split in self.__ordered_splits(span):
            children = ((span[0], split + 1), (split, span[1]))
            if any(min_depth(child[0] - child[1] + 1) > budget - 1 for child in children):
                continue
            if self.__fanout is not None and any(
                    self.__consumers.get(child, 0) + 1 > self.__fanout for child in children):
                continue
            fresh = [
                child for child in children
                if child[0] != child[1] and child not in self.__pending
            ]
            if len(self.__decided) + 1 + len(self.__pending) + len(fresh) > self.__bound():
                continue

            saved = {child: self.__pending[child] for child in children if child in self.__pending}
            for child in children:
                self.__consumers[child] = self.__consumers.get(child, 0) + 1
                if child[0] != child[1]:
                    self.__pending[child] = min(self.__pending.get(child, budget - 1), budget - 1)
            self.__decided[span] = split

            self.__dfs()

            del self.__decided[span]
            for child in children:
                self.__consumers[child] -= 1
                if child in saved:
                    self.__pending[child] = saved[child]
                else:
                    self.__pending.pop(child, None)
            if self.__stopped:
                break

        self.__pending[span] = budget


def search_min_size(constraints: SearchConstraints) -> SearchResult:
    """
    Search a prefix graph of minimum size under `constraints`.

    The classical topologies and the serial chain that satisfy the bounds seed the incumbent.
    Among graphs of equal size the one with the smaller `preference` key wins, which makes the
    result deterministic.

    Raises
    ------
    UnsupportedWidth
        If the width is smaller than 1.
    InfeasibleConstraints
        If the depth bound is below `ceil(log2 width)`, the fanout bound is below 2, or no graph
        satisfies the bounds.
    TimeBudgetExceeded
        If a budget ran out before any graph was found.
    """

    constraints.check()
    if constraints.width == 1:
        return SearchResult(PrefixGraph.from_splits(1, {}), True, 0)

    seeds = [ripple(constraints.width)] + [
        make_classical(arch, constraints.width) for arch in Architecture
    ]
    admitted = [seed for seed in seeds if constraints.admits(seed)]
    incumbent = min(admitted, key=preference, default=None)

    search = _DepthFirst(constraints, incumbent)
    search.run()

    if search.best() is None:
        if search.stopped():
            raise TimeBudgetExceeded(
                f"no prefix graph of width {constraints.width} found within "
                f"{search.expansions()} expansions"
            )
        raise InfeasibleConstraints(
            f"no prefix graph of width {constraints.width} has depth <= {constraints.depth()} "
            f"and fanout <= {constraints.max_fanout}"
        )
    if search.stopped():
        log.warning("search budget exhausted after %d expansions, returning best found",
                    search.expansions())
    return SearchResult(search.best(), not search.stopped(), search.expansions())


def topology_program(constraints: SearchConstraints) -> str:
    """
    Returns the logic program whose answer sets, projected on `split/3`, are exactly the valid
    prefix graphs of `constraints` without dead nodes.
    """

    width, depth = constraints.width, constraints.depth()
    program = f"""
col(0..{width - 1}). lvl(1..{depth}).
span(I,J) :- col(I), col(J), J < I.
node(I,0) :- col(I), I > 0.
{{ node(I,J) }} :- span(I,J), J > 0.
1 {{ split(I,J,M) : col(M), J <= M, M < I }} 1 :- node(I,J).
present(I,I) :- col(I).
present(I,J) :- node(I,J).
child(I,J,I,M+1) :- split(I,J,M).
child(I,J,M,J) :- split(I,J,M).
:- child(I,J,A,B), not present(A,B).
used(A,B) :- child(_,_,A,B).
:- node(I,J), J > 0, not used(I,J).
within(I,I,L) :- col(I), L = 0..{depth}.
within(I,J,L) :- split(I,J,M), within(I,M+1,L-1), within(M,J,L-1), lvl(L).
:- node(I,J), not within(I,J,{depth}).
#show split/3.
"""
    if constraints.max_fanout is not None:
        program += (
            f":- present(A,B), #count{{ I,J : child(I,J,A,B) }} > {constraints.max_fanout}.\n"
        )
    return program


def _check_enumerable(constraints: SearchConstraints) -> None:
    constraints.check()
    if constraints.width > ENUMERATION_LIMIT:
        raise WidthTooLarge(
            f"enumeration supports widths up to {ENUMERATION_LIMIT}, got {constraints.width}"
        )


def enumerate_topologies(
    constraints: SearchConstraints,
    limit: Optional[int] = None,
) -> List[PrefixGraph]:
    """
    Enumerate distinct valid prefix graphs satisfying `constraints`.

    Parameters
    ----------
    constraints
        The width and bounds. Budgets are ignored.
    limit
        The maximum number of graphs, all graphs if `None`.

    Returns
    -------
    The graphs, sorted by their `PrefixGraph.key`.

    Raises
    ------
    WidthTooLarge
        If the width exceeds 12.
    """

    _check_enumerable(constraints)
    if constraints.width == 1:
        return [PrefixGraph.from_splits(1, {})][:limit]

    arguments = ["0" if limit is None else str(limit), "--project"]
    consumer = Collect(limit)
    Clingo(arguments, topology_program(constraints)).solve(consumer)

    graphs = {}
    for splits in consumer.models():
        graph = PrefixGraph.from_splits(constraints.width, splits)
        graphs[graph.key()] = graph
    log.debug("enumerated %d topologies of width %d", len(graphs), constraints.width)
    return [graphs[key] for key in sorted(graphs)]


def asp_min_size(constraints: SearchConstraints) -> int:
    """
    Returns the minimum size under `constraints` as proven by `clingo` optimization.

    Raises
    ------
    InfeasibleConstraints
        If no graph satisfies the bounds.
    WidthTooLarge
        If the width exceeds 12.
    """

    _check_enumerable(constraints)
    if constraints.width == 1:
        return 0

    program = topology_program(constraints) + "#minimize { 1,I,J : node(I,J) }.\n"
    consumer = Minimum()
    Clingo(["--opt-mode=opt"], program).solve(consumer)

    if consumer.best() is None:
        raise InfeasibleConstraints(f"no prefix graph satisfies {constraints}")
    return consumer.cost()[0]
