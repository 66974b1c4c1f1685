"""
Demand-driven construction of the group propagate network.

Only the multipliers the prefix and Ling nodes actually consume are instantiated, together with
the sub-products they decompose into. Leaf signals are demanded the same way.
"""

from dataclasses import dataclass
import logging
from typing import AbstractSet, Dict, FrozenSet, List, Optional, Tuple

from .graph import NodeKind, PrefixGraph
from .ling import Multiplier, PFlavor, is_fused, multiplier

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PNetwork:
    """
    The propagate demand of a graph.

    Parameters
    ----------
    multipliers
        The multiplier of every non-leaf, non-fused node, `None` for a plain OR.
    groups
        Every instantiated group propagate with its hi and lo part, parts before the products
        using them.
    g_bits, x_bits, t_bits
        The bits whose leaf generate, XOR-form and OR-form propagate are needed.
    fused
        The Ling nodes computed straight from the primary inputs.
    share_or
        Whether `t_i` is derived from `x_i` and `g_i` instead of the primary inputs.
    """

    multipliers: Dict[int, Optional[Multiplier]]
    groups: Tuple[Tuple[Multiplier, Multiplier, Multiplier], ...]
    g_bits: FrozenSet[int]
    x_bits: FrozenSet[int]
    t_bits: FrozenSet[int]
    fused: FrozenSet[int]
    share_or: bool = False

    def group_spans(self, flavor: Optional[PFlavor] = None) -> List[Tuple[int, int]]:
        """
        Returns the `(hi, lo)` spans of the instantiated group propagates.
        """

        return [
            (group.hi, group.lo) for group, _, _ in self.groups
            if flavor is None or group.flavor == flavor
        ]


def decompose(graph: PrefixGraph, group: Multiplier) -> Tuple[Multiplier, Multiplier]:
    """
    Returns the hi and lo part of a group propagate of length at least 2.

    The split follows the graph node of the same span if there is one, then the node shifted up
    by one bit (the span a Ling multiplier mirrors), and otherwise halves at a power of two.
    """

    node = graph.find(group.hi, group.lo)
    shifted = graph.find(group.hi + 1, group.lo + 1)
    if node is not None and not node.is_leaf:
        split = graph.split(node)
    elif shifted is not None and not shifted.is_leaf:
        split = graph.split(shifted) - 1
    else:
        length = len(group)
        split = group.hi - (1 << ((length - 1).bit_length() - 1))
    return (
        Multiplier(group.hi, split + 1, group.flavor),
        Multiplier(split, group.lo, group.flavor),
    )


def build_p_network(
    graph: PrefixGraph,
    or_nodes: AbstractSet[int] = frozenset(),
    share_or: bool = False,
) -> PNetwork:
    """
    Derive the propagate network a graph demands, walking from its output nodes.

    Parameters
    ----------
    graph
        A valid graph, possibly containing Ling nodes.
    or_nodes
        Prefix nodes that take OR-form multipliers.
    share_or
        Derive `t_i` from `x_i` and `g_i`.
    """

    multipliers: Dict[int, Optional[Multiplier]] = {}
    groups: Dict[Multiplier, Tuple[Multiplier, Multiplier]] = {}
    g_bits = {0}
    t_bits = set()
    fused = set()

    def demand(group: Multiplier) -> None:
        if len(group) == 1:
            if group.flavor == PFlavor.OR:
                t_bits.add(group.hi)
            return
        if group in groups:
            return
        hi_part, lo_part = decompose(graph, group)
        demand(hi_part)
        demand(lo_part)
        groups[group] = (hi_part, lo_part)

    for node in graph.internal_nodes():
        if is_fused(graph, node):
            fused.add(node.id)
            continue
        hi_child, lo_child = graph.node(node.hi_child), graph.node(node.lo_child)
        if hi_child.is_leaf:
            g_bits.add(hi_child.span.hi)
        if lo_child.is_leaf:
            g_bits.add(lo_child.span.hi)
        if node.kind == NodeKind.PREFIX and hi_child.kind == NodeKind.LING:
            t_bits.add(node.span.hi)
        factor = multiplier(graph, node, or_nodes)
        multipliers[node.id] = factor
        if factor is not None:
            demand(factor)

    for column in range(1, graph.width + 1):
        if graph.output(column).kind == NodeKind.LING:
            t_bits.add(column - 1)

    if share_or:
        g_bits |= t_bits

    log.debug("propagate network: %d groups, %d OR-form leaves", len(groups), len(t_bits))
    return PNetwork(
        multipliers,
        tuple((group, parts[0], parts[1]) for group, parts in groups.items()),
        frozenset(g_bits),
        frozenset(range(graph.width)),
        frozenset(t_bits),
        frozenset(fused),
        share_or,
    )
