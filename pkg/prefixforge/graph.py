"""
The prefix-graph data model: `Span`, `PrefixNode`, `PrefixGraph`, structural validation and
metrics.

A prefix graph over `n` bit columns combines leaf signals (one per bit) into group signals over
contiguous bit spans. Node `[i:j]` with split `m` combines its hi child `[i:m+1]` and its lo
child `[m:j]`. Every column `c = 1..n` designates the node with span `[c-1:0]` as its carry
source, column `n` being the carry out. The carry in is folded into leaf 0.
"""

from dataclasses import dataclass
from enum import Enum
import json
import os
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx


class NodeKind(str, Enum):
    """
    The kind of signal a node produces.
    """

    LEAF = "leaf"
    PREFIX = "prefix"
    LING = "ling"


@dataclass(frozen=True, order=True)
class Span:
    """
    A contiguous, inclusive bit interval `[hi:lo]`.
    """

    hi: int
    lo: int

    def __post_init__(self):
        if self.lo < 0 or self.hi < self.lo:
            raise ValueError(f"invalid span [{self.hi}:{self.lo}]")

    def __str__(self):
        return f"[{self.hi}:{self.lo}]"

    def __len__(self):
        return self.hi - self.lo + 1

    @property
    def is_leaf(self) -> bool:
        return self.hi == self.lo


@dataclass(frozen=True)
class PrefixNode:
    """
    One node of a prefix graph. Leaves have neither children nor a split.
    """

    id: int
    span: Span
    kind: NodeKind
    hi_child: Optional[int]
    lo_child: Optional[int]
    level: int

    @property
    def is_leaf(self) -> bool:
        return self.kind == NodeKind.LEAF

    def __str__(self):
        return f"{self.kind.value}{self.span}#{self.id}"


SplitMap = Mapping[Tuple[int, int], int]


def min_depth(width: int) -> int:
    """
    Returns `ceil(log2 width)`, the smallest depth any prefix graph of `width` columns can have.
    """

    if width <= 1:
        return 0
    return (width - 1).bit_length()


class PrefixGraph:
    """
    An immutable prefix graph.

    The constructor does not check anything, so malformed graphs can be built and handed to
    `validate`. `PrefixGraph.from_splits` builds well-formed graphs.

    Parameters
    ----------
    width
        The number of bit columns.
    nodes
        All nodes, indexed by their id.
    outputs
        For every column `c = 1..width`, the id of the node with span `[c-1:0]`.
    """

    def __init__(self, width: int, nodes: Sequence[PrefixNode], outputs: Sequence[int]) -> None:
        self.__width = width
        self.__nodes = tuple(nodes)
        self.__outputs = tuple(outputs)
        self.__by_span: Optional[Dict[Span, int]] = None
        self.__consumers: Optional[Dict[int, Tuple[int, ...]]] = None

    @classmethod
    def from_splits(
        cls,
        width: int,
        splits: SplitMap,
        kinds: Optional[Mapping[Tuple[int, int], NodeKind]] = None,
    ) -> "PrefixGraph":
        """
        Build a graph from split points, keeping only the spans the outputs depend on.

        Parameters
        ----------
        width
            The number of bit columns.
        splits
            Maps a span `(hi, lo)` to its split `m`. Spans not needed by any output are ignored.
        kinds
            Optional node kinds per span, `NodeKind.PREFIX` by default.
        """

        kinds = {} if kinds is None else kinds
        reachable = set()
        stack = [(column, 0) for column in range(1, width)]
        while stack:
            span = stack.pop()
            if span[0] == span[1] or span in reachable:
                continue
            reachable.add(span)
            try:
                split = splits[span]
            except KeyError as error:
                raise ValueError(f"no split for span [{span[0]}:{span[1]}]") from error
            if not span[1] <= split < span[0]:
                raise ValueError(f"split {split} outside span [{span[0]}:{span[1]}]")
            stack.append((span[0], split + 1))
            stack.append((split, span[1]))

        levels: Dict[Tuple[int, int], int] = {}

        def level_of(span):
            if span[0] == span[1]:
                return 0
            if span not in levels:
                split = splits[span]
                levels[span] = 1 + max(level_of((span[0], split + 1)), level_of((split, span[1])))
            return levels[span]

        for span in sorted(reachable, key=lambda s: s[0] - s[1]):
            level_of(span)

        order = sorted(reachable, key=lambda s: (levels[s], s[1], s[0]))
        ids = {(bit, bit): bit for bit in range(width)}
        for offset, span in enumerate(order):
            ids[span] = width + offset

        nodes = [
            PrefixNode(bit, Span(bit, bit), NodeKind.LEAF, None, None, 0)
            for bit in range(width)
        ]
        for span in order:
            split = splits[span]
            nodes.append(PrefixNode(
                ids[span],
                Span(*span),
                kinds.get(span, NodeKind.PREFIX),
                ids[(span[0], split + 1)],
                ids[(split, span[1])],
                levels[span],
            ))
        outputs = [ids[(column - 1, 0)] for column in range(1, width + 1)]
        return cls(width, nodes, outputs)

    def __repr__(self):
        name = self.__class__.__name__
        return f"{name}(width={self.__width}, size={len(self.internal_nodes())})"

    def __str__(self):
        lines = [f"{self.__class__.__name__} of width {self.__width}"]
        for node in self.internal_nodes():
            lines.append(
                f"    {node.id:4d} {node.kind.value:6s} {node.span} "
                f"= #{node.hi_child} o #{node.lo_child} (level {node.level})"
            )
        return os.linesep.join(lines)

    def __eq__(self, other):
        if not isinstance(other, PrefixGraph):
            return NotImplemented
        return self.to_json() == other.to_json()

    def __hash__(self):
        return hash(self.key())

    @property
    def width(self) -> int:
        return self.__width

    @property
    def nodes(self) -> Tuple[PrefixNode, ...]:
        return self.__nodes

    @property
    def outputs(self) -> Tuple[int, ...]:
        return self.__outputs

    def node(self, node_id: int) -> PrefixNode:
        """
        Returns the node with id `node_id`.
        """

        return self.__nodes[node_id]

    def output(self, column: int) -> PrefixNode:
        """
        Returns the node whose signal feeds column `column` (1-based, `width` is the carry out).
        """

        return self.__nodes[self.__outputs[column - 1]]

    def internal_nodes(self) -> List[PrefixNode]:
        """
        Returns all non-leaf nodes in id order.
        """

        return [node for node in self.__nodes if not node.is_leaf]

    def find(self, hi: int, lo: int) -> Optional[PrefixNode]:
        """
        Returns the node with span `[hi:lo]`, if any.
        """

        if self.__by_span is None:
            self.__by_span = {node.span: node.id for node in self.__nodes}
        node_id = self.__by_span.get(Span(hi, lo))
        return None if node_id is None else self.__nodes[node_id]

    def split(self, node: PrefixNode) -> int:
        """
        Returns the split `m` of a non-leaf node, the highest bit of its lo child.
        """

        return self.__nodes[node.lo_child].span.hi

    def consumers(self, node_id: int) -> Tuple[int, ...]:
        """
        Returns the ids of all nodes using `node_id` as a child.
        """

        if self.__consumers is None:
            consumers: Dict[int, List[int]] = {node.id: [] for node in self.__nodes}
            for node in self.__nodes:
                if not node.is_leaf:
                    for child in {node.hi_child, node.lo_child}:
                        consumers.setdefault(child, []).append(node.id)
            self.__consumers = {key: tuple(value) for key, value in consumers.items()}
        return self.__consumers.get(node_id, ())

    def splits(self) -> Dict[Tuple[int, int], int]:
        """
        Returns the split point of every non-leaf span.
        """

        return {(node.span.hi, node.span.lo): self.split(node) for node in self.internal_nodes()}

    def kinds(self) -> Dict[Tuple[int, int], NodeKind]:
        """
        Returns the kind of every non-leaf span.
        """

        return {(node.span.hi, node.span.lo): node.kind for node in self.internal_nodes()}

    def with_kinds(self, kinds: Mapping[int, NodeKind]) -> "PrefixGraph":
        """
        Returns a copy in which the nodes named in `kinds` carry a new kind.
        """

        nodes = [
            PrefixNode(node.id, node.span, kinds.get(node.id, node.kind), node.hi_child,
                       node.lo_child, node.level)
            for node in self.__nodes
        ]
        return PrefixGraph(self.__width, nodes, self.__outputs)

    def key(self) -> Tuple:
        """
        Returns a hashable key identifying the structure and kinds of this graph.
        """

        return (self.__width, tuple(sorted(
            (node.span.hi, node.span.lo, self.split(node), node.kind.value)
            for node in self.internal_nodes()
        )))

    def to_json(self) -> dict:
        """
        Returns the JSON document `{width, nodes, outputs}` of this graph.
        """

        return {
            "width": self.__width,
            "nodes": [
                {
                    "id": node.id,
                    "hi": node.span.hi,
                    "lo": node.span.lo,
                    "kind": node.kind.value,
                    "hi_child": node.hi_child,
                    "lo_child": node.lo_child,
                }
                for node in self.__nodes
            ],
            "outputs": list(self.__outputs),
        }

    @classmethod
    def from_json(cls, document: Mapping) -> "PrefixGraph":
        """
        Reads a graph written by `PrefixGraph.to_json`. Levels are recomputed from the children;
        the result is not validated.
        """

        entries = sorted(document["nodes"], key=lambda entry: entry["id"])
        by_id = {entry["id"]: entry for entry in entries}
        levels: Dict[int, int] = {}

        def level_of(node_id, trail=()):
            if node_id in levels:
                return levels[node_id]
            entry = by_id.get(node_id)
            if entry is None or entry["hi_child"] is None or node_id in trail:
                return 0
            trail = trail + (node_id,)
            result = 1 + max(level_of(entry["hi_child"], trail), level_of(entry["lo_child"], trail))
            levels[node_id] = result
            return result

        nodes = [
            PrefixNode(
                entry["id"],
                Span(entry["hi"], entry["lo"]),
                NodeKind(entry["kind"]),
                entry["hi_child"],
                entry["lo_child"],
                level_of(entry["id"]),
            )
            for entry in entries
        ]
        return cls(document["width"], nodes, document["outputs"])

    def dumps(self) -> str:
        """
        Returns the JSON text of this graph.
        """

        return json.dumps(self.to_json(), indent=2) + "\n"


@dataclass(frozen=True)
class Violation:
    """
    A broken structural invariant found by `validate`.
    """

    message: str

    def __str__(self):
        return f"{self.__class__.__name__}: {self.message}"


class SpanMismatch(Violation):
    """
    A node whose children do not abut or do not cover its span.
    """


class MissingOutput(Violation):
    """
    A column without a node of span `[c-1:0]`.
    """


class Cycle(Violation):
    """
    A cyclic dependency between nodes.
    """


class LevelInconsistency(Violation):
    """
    A node whose level is not one more than its deepest child.
    """


class DeadNode(Violation):
    """
    A non-leaf node no output depends on.
    """


class ValidationReport:
    """
    The result of `validate`: ok iff `violations` is empty.
    """

    def __init__(self, violations: Iterable[Violation]) -> None:
        self.__violations = tuple(violations)

    def __repr__(self):
        return f"{self.__class__.__name__}({list(self.__violations)!r})"

    def __str__(self):
        if self.ok:
            return "ok"
        return os.linesep.join(str(violation) for violation in self.__violations)

    def __bool__(self):
        return self.ok

    @property
    def ok(self) -> bool:
        return not self.__violations

    @property
    def violations(self) -> Tuple[Violation, ...]:
        return self.__violations

    def of_type(self, kind: type) -> List[Violation]:
        """
        Returns the violations of one type.
        """

        return [violation for violation in self.__violations if isinstance(violation, kind)]


def _dependency_graph(graph: PrefixGraph) -> nx.DiGraph:
    dependencies = nx.DiGraph()
    dependencies.add_nodes_from(node.id for node in graph.nodes)
    for node in graph.nodes:
        for child in (node.hi_child, node.lo_child):
            if child is not None:
                dependencies.add_edge(child, node.id)
    return dependencies


def validate(graph: PrefixGraph) -> ValidationReport:
    """
    Check every structural invariant of `graph` and report all violations.
    """

    violations: List[Violation] = []
    by_id = {node.id: node for node in graph.nodes}

    for node in graph.nodes:
        span = node.span
        if span.hi >= graph.width:
            violations.append(SpanMismatch(f"{node} exceeds width {graph.width}"))
            continue
        if node.is_leaf:
            if not span.is_leaf or node.hi_child is not None or node.lo_child is not None:
                violations.append(SpanMismatch(f"{node} is a leaf but not a single bit"))
            if node.level != 0:
                violations.append(LevelInconsistency(f"{node} is a leaf at level {node.level}"))
            continue
        hi_child = by_id.get(node.hi_child)
        lo_child = by_id.get(node.lo_child)
        if hi_child is None or lo_child is None:
            violations.append(SpanMismatch(f"{node} refers to a missing child"))
            continue
        if hi_child.span.hi != span.hi or lo_child.span.lo != span.lo \
                or hi_child.span.lo != lo_child.span.hi + 1:
            violations.append(SpanMismatch(
                f"{node} is not the concatenation of {hi_child.span} and {lo_child.span}"
            ))

    dependencies = _dependency_graph(graph)
    acyclic = nx.is_directed_acyclic_graph(dependencies)
    if not acyclic:
        cycle = nx.find_cycle(dependencies)
        violations.append(Cycle(" -> ".join(f"#{edge[0]}" for edge in cycle)))
    else:
        for node in graph.nodes:
            if node.is_leaf or node.hi_child not in by_id or node.lo_child not in by_id:
                continue
            expected = 1 + max(by_id[node.hi_child].level, by_id[node.lo_child].level)
            if node.level != expected:
                violations.append(LevelInconsistency(
                    f"{node} has level {node.level}, expected {expected}"
                ))

    for column in range(1, graph.width + 1):
        if column > len(graph.outputs) or graph.outputs[column - 1] not in by_id \
                or by_id[graph.outputs[column - 1]].span != Span(column - 1, 0):
            violations.append(MissingOutput(f"column {column} has no node of span [{column - 1}:0]"))

    if acyclic:
        live = set()
        for output in graph.outputs:
            if output in by_id:
                live.add(output)
                live |= nx.ancestors(dependencies, output)
        for node in graph.nodes:
            if not node.is_leaf and node.id not in live:
                violations.append(DeadNode(f"{node} feeds no output"))

    return ValidationReport(violations)


@dataclass(frozen=True)
class GraphMetrics:
    """
    Size (non-leaf node count), depth (maximum level) and maximum fanout of a graph.
    """

    size: int
    depth: int
    max_fanout: int

    def to_json(self) -> dict:
        return {"size": self.size, "depth": self.depth, "max_fanout": self.max_fanout}


def metrics(graph: PrefixGraph) -> GraphMetrics:
    """
    Returns the `GraphMetrics` of a valid graph.

    Fanout counts the distinct prefix nodes consuming a node; sum taps are not counted.
    """

    internal = graph.internal_nodes()
    size = len(internal)
    depth = max((node.level for node in internal), default=0)
    max_fanout = max((len(graph.consumers(node.id)) for node in graph.nodes), default=0)
    return GraphMetrics(size, depth, max_fanout)
