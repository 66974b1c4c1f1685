"""
The logic network: the technology-independent gate DAG of an adder before cell selection.

Every `LogicNode` computes one true Boolean function of the adder inputs. Its polarity says
whether its output net carries that function (`+`) or its complement (`-`). Leaves and the
fused Ling nodes have a fixed polarity given by the cell that realizes them; the combining
nodes (`AND2`, `OR2`, `AO21`, `AO22`) may take either polarity by choosing between dual cells.
"""

from dataclasses import dataclass
from enum import Enum
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from .graph import NodeKind, PrefixGraph
from .ling import Multiplier, PFlavor
from .pnetwork import PNetwork, build_p_network

log = logging.getLogger(__name__)


class Polarity(str, Enum):
    POSITIVE = "+"
    NEGATIVE = "-"

    def flipped(self) -> "Polarity":
        return Polarity.NEGATIVE if self == Polarity.POSITIVE else Polarity.POSITIVE


class Op(str, Enum):
    """
    The function of a logic node. Inputs are listed in the order given here.
    """

    INPUT = "input"             # primary input
    GEN = "gen"                 # a_i b_i
    GEN0 = "gen0"               # a_0 b_0 + cin x_0 (a0, b0, cin, x0)
    XOR0 = "xor0"               # x_0
    PXOR = "pxor"               # x_i
    POR = "por"                 # t_i
    POR_SHARED = "por-shared"   # t_i = x_i + g_i (x_i, g_i)
    FUSED = "fused"             # a_i b_i + a_{i-1} b_{i-1}
    AND2 = "and2"               # p q
    OR2 = "or2"                 # hi + lo
    AO21 = "ao21"               # hi + M lo (hi, M, lo)
    AO22 = "ao22"               # t hi + M lo (t, hi, M, lo)
    SUM = "sum"                 # x c
    PORT = "port"               # primary output


FIXED_POLARITY = {
    Op.INPUT: Polarity.POSITIVE,
    Op.GEN: Polarity.NEGATIVE,
    Op.GEN0: Polarity.NEGATIVE,
    Op.XOR0: Polarity.POSITIVE,
    Op.PXOR: Polarity.NEGATIVE,
    Op.POR: Polarity.NEGATIVE,
    Op.POR_SHARED: Polarity.POSITIVE,
    Op.FUSED: Polarity.NEGATIVE,
    Op.SUM: Polarity.POSITIVE,
    Op.PORT: Polarity.POSITIVE,
}

FLIPPABLE = frozenset({Op.AND2, Op.OR2, Op.AO21, Op.AO22})

LEAF_OPS = frozenset({Op.GEN, Op.GEN0, Op.XOR0, Op.PXOR, Op.POR, Op.FUSED})


@dataclass(frozen=True)
class LogicNode:
    """
    One node of a `LogicNetwork`.

    Parameters
    ----------
    id
        The index of the node in its network.
    op
        The node function.
    inputs
        The driving node ids in pin order.
    role
        The provenance, e.g. `prefix:[7:0]` or `p:[5:2]x`.
    level
        The electrical level: leaves are level 0, every other gate one above its latest input.
    name
        The port name of `INPUT` and `PORT` nodes.
    """

    id: int
    op: Op
    inputs: Tuple[int, ...]
    role: str
    level: int
    name: Optional[str] = None

    @property
    def flippable(self) -> bool:
        return self.op in FLIPPABLE

    def baseline(self) -> Polarity:
        """
        Returns the fixed polarity, or for flippable nodes the polarity by level: odd levels are
        positive, even levels negative.
        """

        if self.op in FIXED_POLARITY:
            return FIXED_POLARITY[self.op]
        return Polarity.POSITIVE if self.level % 2 else Polarity.NEGATIVE


Edge = Tuple[int, int, int]


class LogicNetwork:
    """
    A gate DAG in topological id order.

    Parameters
    ----------
    width
        The adder width.
    nodes
        All nodes, indexed by id, every node after its inputs.
    """

    def __init__(self, width: int, nodes: Sequence[LogicNode]) -> None:
        self.__width = width
        self.__nodes = tuple(nodes)
        consumers: Dict[int, List[Tuple[int, int]]] = {node.id: [] for node in self.__nodes}
        for node in self.__nodes:
            for pin, driver in enumerate(node.inputs):
                consumers[driver].append((node.id, pin))
        self.__consumers = {key: tuple(value) for key, value in consumers.items()}

    def __repr__(self):
        return f"{self.__class__.__name__}(width={self.__width}, nodes={len(self.__nodes)})"

    def __len__(self):
        return len(self.__nodes)

    @property
    def width(self) -> int:
        return self.__width

    @property
    def nodes(self) -> Tuple[LogicNode, ...]:
        return self.__nodes

    def node(self, node_id: int) -> LogicNode:
        return self.__nodes[node_id]

    def consumers(self, node_id: int) -> Tuple[Tuple[int, int], ...]:
        """
        Returns the `(consumer, pin)` pairs reading node `node_id`.
        """

        return self.__consumers[node_id]

    def edges(self) -> List[Edge]:
        """
        Returns every `(driver, consumer, pin)` edge.
        """

        return [
            (driver, node.id, pin)
            for node in self.__nodes
            for pin, driver in enumerate(node.inputs)
        ]

    def required(self, consumer: LogicNode, polarity: Polarity) -> Optional[Polarity]:
        """
        Returns the polarity `consumer` needs on its inputs when it has `polarity`, or `None` if
        it takes either.

        Combining nodes are realized by inverting cells and need the opposite polarity, ports
        need the true signal. Sums absorb any polarity in the XOR2/XNOR2 choice and leaves read
        what they are built for.
        """

        if consumer.op in FLIPPABLE:
            return polarity.flipped()
        if consumer.op == Op.PORT:
            return Polarity.POSITIVE
        return None

    def baseline(self) -> Tuple[Polarity, ...]:
        return tuple(node.baseline() for node in self.__nodes)

    def mismatches(self, polarity: Sequence[Polarity]) -> List[Edge]:
        """
        Returns the edges whose driver polarity differs from what the consumer needs.
        """

        result = []
        for driver, consumer, pin in self.edges():
            needed = self.required(self.__nodes[consumer], polarity[consumer])
            if needed is not None and polarity[driver] != needed:
                result.append((driver, consumer, pin))
        return result


class _Builder:

    def __init__(self, graph: PrefixGraph, pnet: PNetwork) -> None:
        self.graph = graph
        self.pnet = pnet
        self.nodes: List[LogicNode] = []
        self.inputs: Dict[str, int] = {}
        self.g: Dict[int, int] = {}
        self.x: Dict[int, int] = {}
        self.t: Dict[int, int] = {}
        self.groups: Dict[Multiplier, int] = {}
        self.values: Dict[int, int] = {}
        self.parts = {group: (hi_part, lo_part) for group, hi_part, lo_part in pnet.groups}

    def add(self, op: Op, inputs: Sequence[int], role: str, name: Optional[str] = None) -> int:
        if op in LEAF_OPS:
            level = 0
        else:
            level = 1 + max((self.nodes[i].level for i in inputs), default=-1)
        node = LogicNode(len(self.nodes), op, tuple(inputs), role, level, name)
        self.nodes.append(node)
        return node.id

    def leaves(self) -> None:
        width = self.graph.width
        for operand in ("a", "b"):
            for bit in range(width):
                self.inputs[f"{operand}{bit}"] = self.add(Op.INPUT, (), "input",
                                                          f"{operand}[{bit}]")
        self.inputs["cin"] = self.add(Op.INPUT, (), "input", "cin")

        a0, b0 = self.inputs["a0"], self.inputs["b0"]
        self.x[0] = self.add(Op.XOR0, (a0, b0), "leaf:x[0]")
        self.g[0] = self.add(Op.GEN0, (a0, b0, self.inputs["cin"], self.x[0]), "leaf:g[0]")
        for bit in range(1, width):
            operands = (self.inputs[f"a{bit}"], self.inputs[f"b{bit}"])
            if bit in self.pnet.g_bits:
                self.g[bit] = self.add(Op.GEN, operands, f"leaf:g[{bit}]")
            self.x[bit] = self.add(Op.PXOR, operands, f"leaf:x[{bit}]")
        for bit in sorted(self.pnet.t_bits):
            operands = (self.inputs[f"a{bit}"], self.inputs[f"b{bit}"])
            if self.pnet.share_or and bit > 0:
                self.t[bit] = self.add(Op.POR_SHARED, (self.x[bit], self.g[bit]),
                                       f"leaf:t[{bit}]")
            else:
                self.t[bit] = self.add(Op.POR, operands, f"leaf:t[{bit}]")

    def propagate(self, group: Multiplier) -> int:
        if len(group) == 1:
            leaves = self.t if group.flavor == PFlavor.OR else self.x
            return leaves[group.hi]
        if group not in self.groups:
            hi_part, lo_part = self.parts[group]
            self.groups[group] = self.add(
                Op.AND2,
                (self.propagate(hi_part), self.propagate(lo_part)),
                f"p:[{group.hi}:{group.lo}]{group.flavor.value}",
            )
        return self.groups[group]

    def value(self, node_id: int) -> int:
        node = self.graph.node(node_id)
        if node.is_leaf:
            return self.g[node.span.hi]
        return self.values[node_id]

    def combine(self) -> None:
        for node in self.graph.internal_nodes():
            role = f"{node.kind.value}:{node.span}"
            hi, lo = node.span.hi, node.span.lo
            if node.id in self.pnet.fused:
                operands = (
                    self.inputs[f"a{hi}"], self.inputs[f"b{hi}"],
                    self.inputs[f"a{lo}"], self.inputs[f"b{lo}"],
                )
                self.values[node.id] = self.add(Op.FUSED, operands, role)
                continue
            hi_value, lo_value = self.value(node.hi_child), self.value(node.lo_child)
            factor = self.pnet.multipliers[node.id]
            if factor is None:
                self.values[node.id] = self.add(Op.OR2, (hi_value, lo_value), role)
                continue
            factor_value = self.propagate(factor)
            if node.kind == NodeKind.PREFIX and self.graph.node(node.hi_child).kind == NodeKind.LING:
                self.values[node.id] = self.add(
                    Op.AO22, (self.t[hi], hi_value, factor_value, lo_value), role)
            else:
                self.values[node.id] = self.add(Op.AO21, (hi_value, factor_value, lo_value), role)

    def outputs(self) -> None:
        width = self.graph.width
        carries = []
        for column in range(1, width + 1):
            node = self.graph.output(column)
            carry = self.value(node.id)
            if node.kind == NodeKind.LING:
                carry = self.add(Op.AND2, (self.t[column - 1], carry), f"recover:{node.span}")
            carries.append(carry)

        sums = [self.add(Op.SUM, (self.x[0], self.inputs["cin"]), "sum:[0]")]
        for bit in range(1, width):
            sums.append(self.add(Op.SUM, (self.x[bit], carries[bit - 1]), f"sum:[{bit}]"))
        for bit, driver in enumerate(sums):
            self.add(Op.PORT, (driver,), "output", f"sum[{bit}]")
        self.add(Op.PORT, (carries[width - 1],), "output", "cout")


def build_network(
    graph: PrefixGraph,
    pnet: Optional[PNetwork] = None,
    or_nodes=frozenset(),
    share_or: bool = False,
) -> LogicNetwork:
    """
    Lower a (hybrid) prefix graph to a logic network.

    Parameters
    ----------
    graph
        A valid graph.
    pnet
        The propagate network, derived from `graph` if not given.
    or_nodes, share_or
        Passed to `build_p_network` if `pnet` is not given.
    """

    if pnet is None:
        pnet = build_p_network(graph, or_nodes, share_or)
    builder = _Builder(graph, pnet)
    builder.leaves()
    builder.combine()
    builder.outputs()
    log.debug("logic network of width %d has %d nodes", graph.width, len(builder.nodes))
    return LogicNetwork(graph.width, builder.nodes)
