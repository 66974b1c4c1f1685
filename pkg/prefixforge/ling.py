"""
Ling pseudo-carry nodes, mixed prefix/Ling composition and critical-path hybridization.

A Ling node over `[i:j]` produces a value `Y` with `t_i · Y = G_{i:j}`, where `t_i = a_i + b_i`
is the OR-form propagate. Prefix nodes produce the group generate `G_{i:j}` itself, with the
carry in folded into `g_0 = maj(a_0, b_0, cin)`.

Node `[i:j]` with hi child `[i:m+1]` and lo child `[m:j]` combines as `hi + M · lo`, where the
multiplier `M` is a group propagate whose span depends on the kinds involved:

- its upper bit is `i` for a prefix node and `i - 1` for a Ling node,
- its lower bit is `m + 1`, or `m` if the lo child is a Ling node.

A prefix node whose hi child is a Ling node recovers the hi term in place: `t_i · Y_hi + M · lo`.
"""

from dataclasses import dataclass
from enum import Enum
import json
import logging
from typing import AbstractSet, Dict, FrozenSet, Mapping, Optional, Tuple

from .errors import KindMismatch
from .expr import And, Expr, Or, Var, Xor, conjunction
from .graph import NodeKind, PrefixGraph, PrefixNode

log = logging.getLogger(__name__)

SLACK_TOLERANCE = 1e-9


class PFlavor(str, Enum):
    """
    The leaf propagate a group propagate is built from.
    """

    XOR = "x"
    OR = "o"


class Adapter(str, Enum):
    """
    The composition rule used where Ling and prefix nodes meet.
    """

    LING_INTO_PREFIX_LO = "ling-into-prefix-lo"
    LING_INTO_PREFIX_HI = "ling-into-prefix-hi"
    PREFIX_INTO_LING_LO = "prefix-into-ling-lo"
    PREFIX_INTO_LING_HI = "prefix-into-ling-hi"


@dataclass(frozen=True)
class Multiplier:
    """
    The group propagate `P_{hi:lo}` of one flavor multiplying the lo term of a node.
    """

    hi: int
    lo: int
    flavor: PFlavor

    def __len__(self):
        return self.hi - self.lo + 1

    def __str__(self):
        return f"P{self.flavor.value}[{self.hi}:{self.lo}]"


def is_fused(graph: PrefixGraph, node: PrefixNode) -> bool:
    """
    Returns whether `node` is a first-level Ling node `[i:i-1]`, `i >= 2`, computed straight from
    the primary inputs as `a_i b_i + a_{i-1} b_{i-1}`.
    """

    if node.kind != NodeKind.LING or node.span.hi - node.span.lo != 1 or node.span.lo == 0:
        return False
    return graph.node(node.hi_child).is_leaf and graph.node(node.lo_child).is_leaf


def multiplier(
    graph: PrefixGraph,
    node: PrefixNode,
    or_nodes: AbstractSet[int] = frozenset(),
) -> Optional[Multiplier]:
    """
    Returns the multiplier of a non-leaf `node`, or `None` if the node is a plain OR of its
    children (a Ling node whose hi child is a leaf and whose lo child is not a Ling node).

    Parameters
    ----------
    or_nodes
        Prefix nodes whose multiplier uses the OR-form propagate although XOR-form would do.
    """

    lo_child = graph.node(node.lo_child)
    split = lo_child.span.hi
    hi = node.span.hi - 1 if node.kind == NodeKind.LING else node.span.hi
    lo = split if lo_child.kind == NodeKind.LING else split + 1
    if hi < lo:
        return None
    if node.kind == NodeKind.LING or lo_child.kind == NodeKind.LING or node.id in or_nodes:
        return Multiplier(hi, lo, PFlavor.OR)
    return Multiplier(hi, lo, PFlavor.XOR)


def generate(bit: int) -> Expr:
    """
    Returns the leaf generate of `bit`; bit 0 absorbs the carry in.
    """

    a, b = Var(f"a{bit}"), Var(f"b{bit}")
    if bit == 0:
        return Or(And(a, b), And(Var("cin"), Xor(a, b)))
    return And(a, b)


def propagate(bit: int, flavor: PFlavor) -> Expr:
    """
    Returns the leaf propagate of `bit` in the given flavor.
    """

    a, b = Var(f"a{bit}"), Var(f"b{bit}")
    return Xor(a, b) if flavor == PFlavor.XOR else Or(a, b)


def group_propagate(span: Multiplier) -> Expr:
    """
    Returns the product of the leaf propagates of `span`.
    """

    return conjunction(propagate(bit, span.flavor) for bit in range(span.hi, span.lo - 1, -1))


def node_expression(
    graph: PrefixGraph,
    node_id: int,
    or_nodes: AbstractSet[int] = frozenset(),
) -> Expr:
    """
    Returns the expression computed by a node as the mapped netlist realizes it: the group
    generate for leaves and prefix nodes, the Ling value for Ling nodes.
    """

    memo: Dict[int, Expr] = {}

    def build(current: int) -> Expr:
        if current in memo:
            return memo[current]
        node = graph.node(current)
        if node.is_leaf:
            result = generate(node.span.hi)
        elif is_fused(graph, node):
            result = Or(generate(node.span.hi), generate(node.span.lo))
        else:
            hi_child = graph.node(node.hi_child)
            hi_term = build(hi_child.id)
            if node.kind == NodeKind.PREFIX and hi_child.kind == NodeKind.LING:
                hi_term = And(propagate(node.span.hi, PFlavor.OR), hi_term)
            lo_term = build(node.lo_child)
            factor = multiplier(graph, node, or_nodes)
            if factor is None:
                result = Or(hi_term, lo_term)
            else:
                result = Or(hi_term, And(group_propagate(factor), lo_term))
        memo[current] = result
        return result

    return build(node_id)


def ling_to_carry(
    graph: PrefixGraph,
    node_id: int,
    or_nodes: AbstractSet[int] = frozenset(),
) -> Expr:
    """
    Returns the group generate recovered from a Ling node as `t_i · Y`.

    Raises
    ------
    KindMismatch
        If the node is not a Ling node.
    """

    node = graph.node(node_id)
    if node.kind != NodeKind.LING:
        raise KindMismatch(f"{node} is not a Ling node")
    return And(propagate(node.span.hi, PFlavor.OR), node_expression(graph, node_id, or_nodes))


def carry_expression(
    graph: PrefixGraph,
    column: int,
    or_nodes: AbstractSet[int] = frozenset(),
) -> Expr:
    """
    Returns the true carry into column `column` (`width` is the carry out).
    """

    node = graph.output(column)
    if node.kind == NodeKind.LING:
        return ling_to_carry(graph, node.id, or_nodes)
    return node_expression(graph, node.id, or_nodes)


@dataclass(frozen=True)
class CoarseModel:
    """
    Per-kind stage delays in FO1 used before mapping.

    Parameters
    ----------
    leaf
        The delay of the generate and propagate leaves.
    prefix
        The delay of one prefix combination.
    ling
        The delay of one Ling combination.
    ling_first
        The arrival time of a Ling node computed straight from the primary inputs.
    """

    leaf: float = 4.0
    prefix: float = 3.5
    ling: float = 3.5
    ling_first: float = 4.0

    @classmethod
    def from_library(cls, library) -> "CoarseModel":
        """
        Derive the stage delays from `library`, each cell driving two AOI21 pins.
        """

        load = 2 * library.cell("AOI21").c_in(1)
        leaf = max(library.stage(name, 1, load) for name in ("NAND2", "NOR2", "XNOR2"))
        combine = library.stage("AOI21", 1, load)
        first = library.stage("AOI22", 1, load)
        return cls(leaf=leaf, prefix=combine, ling=combine, ling_first=max(leaf, first))

    def stage(self, graph: PrefixGraph, node: PrefixNode) -> float:
        if node.is_leaf:
            return self.leaf
        if is_fused(graph, node):
            return self.ling_first
        return self.ling if node.kind == NodeKind.LING else self.prefix


def arrival_estimate(graph: PrefixGraph, model: Optional[CoarseModel] = None) -> Dict[int, float]:
    """
    Returns the arrival time of every node under the coarse model.

    Leaves and Ling nodes read from the primary inputs arrive after their own stage, every other
    node one stage after its latest child.
    """

    if isinstance(graph, HybridGraph):
        graph = graph.graph
    model = CoarseModel() if model is None else model
    arrivals: Dict[int, float] = {}
    for node in sorted(graph.nodes, key=lambda n: (n.level, n.id)):
        if node.is_leaf or is_fused(graph, node):
            arrivals[node.id] = model.stage(graph, node)
        else:
            latest = max(arrivals[node.hi_child], arrivals[node.lo_child])
            arrivals[node.id] = latest + model.stage(graph, node)
    return arrivals


def slacks(graph: PrefixGraph, model: Optional[CoarseModel] = None) -> Dict[int, float]:
    """
    Returns the slack of every node against the latest output arrival.
    """

    model = CoarseModel() if model is None else model
    arrivals = arrival_estimate(graph, model)
    target = max(arrivals[output] for output in graph.outputs)
    required = {node.id: float("inf") for node in graph.nodes}
    for output in graph.outputs:
        required[output] = target
    for node in sorted(graph.nodes, key=lambda n: (-n.level, -n.id)):
        if node.is_leaf or is_fused(graph, node):
            continue
        upstream = required[node.id] - model.stage(graph, node)
        for child in (node.hi_child, node.lo_child):
            required[child] = min(required[child], upstream)
    return {node_id: required[node_id] - arrivals[node_id] for node_id in arrivals}


@dataclass(frozen=True)
class HybridGraph:
    """
    A prefix graph with Ling nodes and the record of its conversion.
    """

    graph: PrefixGraph
    converted: FrozenSet[int]
    adapters: Tuple[Tuple[int, int, Adapter], ...]
    critical: FrozenSet[int]

    def to_json(self) -> dict:
        document = self.graph.to_json()
        document["converted"] = sorted(self.converted)
        document["critical"] = sorted(self.critical)
        document["adapters"] = [
            {"node": node, "child": child, "form": form.value}
            for node, child, form in self.adapters
        ]
        return document

    @classmethod
    def from_json(cls, document: Mapping) -> "HybridGraph":
        graph = PrefixGraph.from_json(document)
        adapters = document.get("adapters")
        return cls(
            graph,
            frozenset(document.get("converted", ())),
            adapters_of(graph) if adapters is None else tuple(
                (entry["node"], entry["child"], Adapter(entry["form"])) for entry in adapters
            ),
            frozenset(document.get("critical", ())),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


def adapters_of(graph: PrefixGraph) -> Tuple[Tuple[int, int, Adapter], ...]:
    """
    Returns `(node, child, adapter)` for every edge between a Ling and a prefix node.
    """

    adapters = []
    for node in graph.internal_nodes():
        hi_child, lo_child = graph.node(node.hi_child), graph.node(node.lo_child)
        if node.kind == NodeKind.PREFIX:
            if hi_child.kind == NodeKind.LING:
                adapters.append((node.id, hi_child.id, Adapter.LING_INTO_PREFIX_HI))
            if lo_child.kind == NodeKind.LING:
                adapters.append((node.id, lo_child.id, Adapter.LING_INTO_PREFIX_LO))
        else:
            if hi_child.kind == NodeKind.PREFIX:
                adapters.append((node.id, hi_child.id, Adapter.PREFIX_INTO_LING_HI))
            if lo_child.kind == NodeKind.PREFIX:
                adapters.append((node.id, lo_child.id, Adapter.PREFIX_INTO_LING_LO))
    return tuple(adapters)


def hybridize(graph: PrefixGraph, model: Optional[CoarseModel] = None) -> HybridGraph:
    """
    Convert every non-leaf node with zero slack under `arrival_estimate` into a Ling node.
    Nodes off the critical path keep their kind.
    """

    model = CoarseModel() if model is None else model
    slack = slacks(graph, model)
    critical = frozenset(
        node.id for node in graph.internal_nodes() if slack[node.id] <= SLACK_TOLERANCE
    )
    converted = frozenset(
        node_id for node_id in critical if graph.node(node_id).kind == NodeKind.PREFIX
    )
    hybrid = graph.with_kinds({node_id: NodeKind.LING for node_id in converted})
    log.debug("converted %d of %d nodes to Ling form", len(converted), len(graph.internal_nodes()))
    return HybridGraph(hybrid, converted, adapters_of(hybrid), critical)
