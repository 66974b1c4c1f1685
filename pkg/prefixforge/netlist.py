"""
The gate-level netlist: `Instance` and `GateNetlist`.
"""

from dataclasses import dataclass, replace
import json
import logging
import os
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .errors import CycleDetected, DanglingNet, MultipleDrivers

log = logging.getLogger(__name__)


def adder_inputs(width: int) -> Tuple[str, ...]:
    return tuple(
        [f"a[{bit}]" for bit in range(width)] + [f"b[{bit}]" for bit in range(width)] + ["cin"]
    )


def adder_outputs(width: int) -> Tuple[str, ...]:
    return tuple([f"sum[{bit}]" for bit in range(width)] + ["cout"])


@dataclass(frozen=True)
class Instance:
    """
    One placed cell.

    Parameters
    ----------
    id
        The index of the instance in its netlist.
    cell
        The library cell name.
    size
        The drive size.
    inputs
        The input nets in the cell's pin order.
    output
        The output net.
    provenance
        The logic this instance implements, e.g. `ling:[7:0]` or `inv:prefix:[3:0]`.
    """

    id: int
    cell: str
    size: int
    inputs: Tuple[str, ...]
    output: str
    provenance: str = ""


class _Structure:

    def __init__(self, instances: Sequence[Instance], inputs: Sequence[str]) -> None:
        self.drivers: Dict[str, int] = {}
        self.conflicts: List[str] = []
        for instance in instances:
            if instance.output in self.drivers or instance.output in inputs:
                self.conflicts.append(instance.output)
            self.drivers[instance.output] = instance.id
        self.consumers: Dict[str, List[Tuple[int, int]]] = {}
        for instance in instances:
            for pin, net in enumerate(instance.inputs):
                self.consumers.setdefault(net, []).append((instance.id, pin))

        dependencies = nx.DiGraph()
        dependencies.add_nodes_from(instance.id for instance in instances)
        for instance in instances:
            for net in instance.inputs:
                if net in self.drivers:
                    dependencies.add_edge(self.drivers[net], instance.id)
        try:
            self.order: Optional[Tuple[int, ...]] = tuple(
                nx.lexicographical_topological_sort(dependencies)
            )
            self.cycle: Optional[list] = None
        except nx.NetworkXUnfeasible:
            self.order = None
            self.cycle = nx.find_cycle(dependencies)


class GateNetlist:
    """
    An immutable netlist of single-output cells.

    Parameters
    ----------
    width
        The adder width.
    instances
        The instances, indexed by id.
    inputs
        The primary input nets, those of a `width`-bit adder if not given.
    outputs
        The primary output nets, those of a `width`-bit adder if not given.
    name
        The module name.
    """

    def __init__(
        self,
        width: int,
        instances: Sequence[Instance],
        inputs: Optional[Sequence[str]] = None,
        outputs: Optional[Sequence[str]] = None,
        name: Optional[str] = None,
        _structure: Optional[_Structure] = None,
    ) -> None:
        self.__width = width
        self.__instances = tuple(instances)
        self.__inputs = adder_inputs(width) if inputs is None else tuple(inputs)
        self.__outputs = adder_outputs(width) if outputs is None else tuple(outputs)
        self.__name = f"adder{width}" if name is None else name
        self.__structure = _structure

    def __repr__(self):
        name = self.__class__.__name__
        return f"{name}({self.__name!r}, width={self.__width}, instances={len(self.__instances)})"

    def __str__(self):
        lines = [f"{self.__class__.__name__} {self.__name}"]
        for instance in self.__instances:
            lines.append(
                f"    {instance.id:4d} {instance.cell}x{instance.size} "
                f"({', '.join(instance.inputs)}) -> {instance.output}  {instance.provenance}"
            )
        return os.linesep.join(lines)

    def __eq__(self, other):
        if not isinstance(other, GateNetlist):
            return NotImplemented
        return self.to_json() == other.to_json()

    def __hash__(self):
        return hash((self.__name, self.__instances))

    @property
    def width(self) -> int:
        return self.__width

    @property
    def instances(self) -> Tuple[Instance, ...]:
        return self.__instances

    @property
    def inputs(self) -> Tuple[str, ...]:
        return self.__inputs

    @property
    def outputs(self) -> Tuple[str, ...]:
        return self.__outputs

    @property
    def name(self) -> str:
        return self.__name

    def instance(self, instance_id: int) -> Instance:
        return self.__instances[instance_id]

    def _structure(self) -> _Structure:
        if self.__structure is None:
            self.__structure = _Structure(self.__instances, self.__inputs)
        return self.__structure

    def drivers(self) -> Dict[str, int]:
        """
        Returns the driving instance of every driven net.
        """

        return self._structure().drivers

    def consumers(self, net: str) -> List[Tuple[int, int]]:
        """
        Returns the `(instance, pin)` pairs reading `net`.
        """

        return self._structure().consumers.get(net, [])

    def nets(self) -> List[str]:
        """
        Returns all nets: inputs first, then instance outputs in instance order.
        """

        return list(self.__inputs) + [instance.output for instance in self.__instances]

    def check(self) -> None:
        """
        Raise if the netlist is malformed.

        Raises
        ------
        MultipleDrivers
            If a net is driven twice or an input port is driven.
        DanglingNet
            If a consumed net or an output port has no driver.
        CycleDetected
            If the netlist contains a combinational cycle.
        """

        structure = self._structure()
        if structure.conflicts:
            conflicts = sorted(set(structure.conflicts))
            raise MultipleDrivers(f"nets with more than one driver: {conflicts}")
        sources = set(self.__inputs) | set(structure.drivers)
        undriven = sorted(
            net for net in set(structure.consumers) | set(self.__outputs) if net not in sources
        )
        if undriven:
            raise DanglingNet(f"nets without driver: {undriven}")
        if structure.order is None:
            raise CycleDetected(f"combinational cycle through instances {structure.cycle}")

    def order(self) -> Tuple[int, ...]:
        """
        Returns the instance ids in topological order.

        Raises
        ------
        CycleDetected
            If there is none.
        """

        structure = self._structure()
        if structure.order is None:
            raise CycleDetected(f"combinational cycle through instances {structure.cycle}")
        return structure.order

    def with_sizes(self, sizes: Mapping[int, int]) -> "GateNetlist":
        """
        Returns a copy in which the instances named in `sizes` have a new size.
        """

        instances = [
            replace(instance, size=sizes[instance.id]) if instance.id in sizes else instance
            for instance in self.__instances
        ]
        return GateNetlist(self.__width, instances, self.__inputs, self.__outputs, self.__name,
                           self.__structure)

    def same_structure(self, other: "GateNetlist") -> bool:
        """
        Returns whether `other` equals this netlist up to the names of internal nets.
        """

        if (self.__inputs, self.__outputs) != (other.inputs, other.outputs):
            return False
        if len(self.__instances) != len(other.instances):
            return False
        ports = set(self.__inputs) | set(self.__outputs)
        renaming: Dict[str, str] = {}
        for mine, theirs in zip(self.__instances, other.instances):
            if (mine.cell, mine.size, len(mine.inputs)) != \
                    (theirs.cell, theirs.size, len(theirs.inputs)):
                return False
            for net, counterpart in zip(mine.inputs + (mine.output,),
                                        theirs.inputs + (theirs.output,)):
                if net in ports or counterpart in ports:
                    if net != counterpart:
                        return False
                elif renaming.setdefault(net, counterpart) != counterpart:
                    return False
        return len(set(renaming.values())) == len(renaming)

    def to_json(self) -> dict:
        return {
            "name": self.__name,
            "width": self.__width,
            "inputs": list(self.__inputs),
            "outputs": list(self.__outputs),
            "instances": [
                {
                    "id": instance.id,
                    "cell": instance.cell,
                    "size": instance.size,
                    "inputs": list(instance.inputs),
                    "output": instance.output,
                    "provenance": instance.provenance,
                }
                for instance in self.__instances
            ],
        }

    @classmethod
    def from_json(cls, document: Mapping) -> "GateNetlist":
        instances = [
            Instance(
                entry["id"],
                entry["cell"],
                int(entry.get("size", 1)),
                tuple(entry["inputs"]),
                entry["output"],
                entry.get("provenance", ""),
            )
            for entry in sorted(document["instances"], key=lambda entry: entry["id"])
        ]
        return cls(document["width"], instances, document.get("inputs"), document.get("outputs"),
                   document.get("name"))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"
