"""
Technology mapping of a logic network under a polarity assignment onto library cells.
"""

import logging
from typing import Dict, List, Optional, Tuple

from .errors import UnmappableNode
from .library import CellLibrary
from .netlist import GateNetlist, Instance
from .network import LogicNetwork, LogicNode, Op, Polarity
from .polarity import PolarityAssignment

log = logging.getLogger(__name__)

# (op, polarity) -> (cell, pin order as indices into the node inputs)
CELLS: Dict[Tuple[Op, Polarity], Tuple[str, Tuple[int, ...]]] = {
    (Op.GEN, Polarity.NEGATIVE): ("NAND2", (0, 1)),
    (Op.GEN0, Polarity.NEGATIVE): ("AOI22", (0, 1, 2, 3)),
    (Op.XOR0, Polarity.POSITIVE): ("XOR2", (0, 1)),
    (Op.PXOR, Polarity.NEGATIVE): ("XNOR2", (0, 1)),
    (Op.POR, Polarity.NEGATIVE): ("NOR2", (0, 1)),
    (Op.POR_SHARED, Polarity.POSITIVE): ("NAND2", (0, 1)),
    (Op.FUSED, Polarity.NEGATIVE): ("AOI22", (0, 1, 2, 3)),
    (Op.AND2, Polarity.NEGATIVE): ("NAND2", (0, 1)),
    (Op.AND2, Polarity.POSITIVE): ("NOR2", (0, 1)),
    (Op.OR2, Polarity.NEGATIVE): ("NOR2", (0, 1)),
    (Op.OR2, Polarity.POSITIVE): ("NAND2", (0, 1)),
    (Op.AO21, Polarity.NEGATIVE): ("AOI21", (1, 2, 0)),
    (Op.AO21, Polarity.POSITIVE): ("OAI21", (1, 2, 0)),
    (Op.AO22, Polarity.NEGATIVE): ("AOI22", (0, 1, 2, 3)),
    (Op.AO22, Polarity.POSITIVE): ("OAI22", (0, 1, 2, 3)),
}


def cell_of(
    node: LogicNode,
    polarity: Polarity,
    input_polarity: List[Polarity],
) -> Tuple[str, Tuple[int, ...]]:
    """
    Returns the cell realizing `node` at `polarity` and the order its inputs go to the cell pins.

    Raises
    ------
    UnmappableNode
        If no cell realizes the node at that polarity.
    """

    if node.op == Op.SUM:
        matching = input_polarity[0] == input_polarity[1]
        return ("XOR2" if matching else "XNOR2", (0, 1))
    try:
        return CELLS[(node.op, polarity)]
    except KeyError as error:
        raise UnmappableNode(f"no cell realizes {node.role} ({node.op.value}) at "
                             f"polarity {polarity.value}") from error


def map_cells(
    network: LogicNetwork,
    assignment: PolarityAssignment,
    library: Optional[CellLibrary] = None,
    name: Optional[str] = None,
) -> GateNetlist:
    """
    Map every logic node to one ×1 cell and every inverter edge of `assignment` to one ×1 `INV`.

    Parameters
    ----------
    network
        The logic network.
    assignment
        A polarity assignment from `enumerate_inverter_candidates`.
    library
        The cell library, the default library if not given.
    name
        The module name.

    Raises
    ------
    UnmappableNode
        If a node has no realization, or the library lacks a needed cell.
    """

    library = CellLibrary.default() if library is None else library
    polarity = assignment.polarity

    port_of: Dict[int, str] = {}
    for node in network.nodes:
        if node.op == Op.PORT:
            port_of[node.inputs[0]] = node.name

    nets: Dict[int, str] = {}
    inverted: Dict[Tuple[int, int, int], str] = {}
    instances: List[Instance] = []
    counter = 0

    def fresh() -> str:
        nonlocal counter
        counter += 1
        return f"n{counter - 1}"

    def place(cell: str, inputs, output: str, provenance: str) -> None:
        if cell not in library:
            raise UnmappableNode(f"library has no cell {cell} needed for {provenance}")
        instances.append(Instance(len(instances), cell, 1, tuple(inputs), output, provenance))

    for node in network.nodes:
        if node.op == Op.INPUT:
            nets[node.id] = node.name
            continue
        if node.op == Op.PORT:
            continue

        input_polarity = [polarity[driver] for driver in node.inputs]
        cell, order = cell_of(node, polarity[node.id], input_polarity)
        edge_nets = [
            inverted.get((driver, node.id, pin), nets[driver])
            for pin, driver in enumerate(node.inputs)
        ]
        port_edges = [
            (node.id, consumer, pin) for consumer, pin in network.consumers(node.id)
            if network.node(consumer).op == Op.PORT
        ]
        drives_port_directly = any(edge not in assignment.inverters for edge in port_edges)
        output = port_of[node.id] if drives_port_directly else fresh()
        nets[node.id] = output
        place(cell, [edge_nets[index] for index in order], output, node.role)

        for consumer, pin in network.consumers(node.id):
            edge = (node.id, consumer, pin)
            if edge in assignment.inverters:
                consumer_node = network.node(consumer)
                target = consumer_node.name if consumer_node.op == Op.PORT else fresh()
                inverted[edge] = target
                place("INV", [output], target, f"inv:{node.role}")

    log.debug("mapped %d logic nodes to %d instances", len(network), len(instances))
    return GateNetlist(network.width, instances, name=name)
