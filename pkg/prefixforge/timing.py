"""
Static timing and area under the coarse gate delay model.

The stage delay of an instance is `p_par + r_dr(size) · C_load` divided by the FO1 reference,
where `C_load` sums the input capacitance of every driven pin plus one unit load per primary
output. Primary inputs are driven by an ideal ×1 reference inverter without parasitic delay.
"""

from dataclasses import dataclass
import json
import logging
import os
from typing import Dict, Mapping, Optional, Tuple

from .library import CellLibrary
from .netlist import GateNetlist

log = logging.getLogger(__name__)

OUTPUT_LOAD = 1.0


def net_loads(netlist: GateNetlist, library: CellLibrary) -> Dict[str, float]:
    """
    Returns the capacitive load of every net.
    """

    loads = {net: 0.0 for net in netlist.nets()}
    for instance in netlist.instances:
        cell = library.cell(instance.cell)
        for net in instance.inputs:
            loads[net] = loads.get(net, 0.0) + cell.c_in(instance.size)
    for net in netlist.outputs:
        loads[net] = loads.get(net, 0.0) + OUTPUT_LOAD
    return loads


@dataclass(frozen=True)
class TimingReport:
    """
    The result of `sta`.

    Parameters
    ----------
    arrivals
        The arrival time of every net in FO1.
    stages
        The stage delay of every instance.
    delay
        The latest arrival over all primary outputs.
    critical_path
        The instance ids of the critical path from input to output.
    slacks
        The slack of every instance.
    """

    arrivals: Mapping[str, float]
    stages: Mapping[int, float]
    delay: float
    critical_path: Tuple[int, ...]
    slacks: Mapping[int, float]

    def to_json(self) -> dict:
        return {
            "delay_fo1": round(self.delay, 6),
            "critical_path": list(self.critical_path),
            "arrivals": {net: round(value, 6) for net, value in sorted(self.arrivals.items())},
            "slacks": {str(key): round(value, 6) for key, value in sorted(self.slacks.items())},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    def text(self, netlist: GateNetlist) -> str:
        """
        Returns the critical path as a printable table.
        """

        lines = [f"critical path delay {self.delay:.3f} FO1"]
        for instance_id in self.critical_path:
            instance = netlist.instance(instance_id)
            lines.append(
                f"  {instance.cell + 'x' + str(instance.size):10s} {instance.output:12s} "
                f"{self.stages[instance_id]:7.3f} {self.arrivals[instance.output]:8.3f}  "
                f"{instance.provenance}"
            )
        return os.linesep.join(lines)


def sta(netlist: GateNetlist, library: Optional[CellLibrary] = None) -> TimingReport:
    """
    Propagate arrival times through `netlist` in topological order.

    Raises
    ------
    CycleDetected
        If the netlist has a combinational cycle.
    DanglingNet
        If a consumed net has no driver.
    """

    library = CellLibrary.default() if library is None else library
    netlist.check()
    loads = net_loads(netlist, library)
    drivers = netlist.drivers()

    arrivals: Dict[str, float] = {net: library.input_drive(loads[net]) for net in netlist.inputs}
    stages: Dict[int, float] = {}
    order = netlist.order()
    for instance_id in order:
        instance = netlist.instance(instance_id)
        stage = library.stage(instance.cell, instance.size, loads[instance.output])
        stages[instance_id] = stage
        latest = max((arrivals[net] for net in instance.inputs), default=0.0)
        arrivals[instance.output] = latest + stage

    delay = max((arrivals[net] for net in netlist.outputs), default=0.0)

    path = []
    ends = [net for net in netlist.outputs if arrivals[net] == delay]
    net = ends[0] if ends else None
    while net is not None and net in drivers:
        instance = netlist.instance(drivers[net])
        path.append(instance.id)
        net = max(instance.inputs, key=lambda n: arrivals[n], default=None)
    path.reverse()

    required: Dict[str, float] = {net: float("inf") for net in arrivals}
    for net in netlist.outputs:
        required[net] = delay
    slacks: Dict[int, float] = {}
    for instance_id in reversed(order):
        instance = netlist.instance(instance_id)
        slacks[instance_id] = required[instance.output] - arrivals[instance.output]
        upstream = required[instance.output] - stages[instance_id]
        for net in instance.inputs:
            required[net] = min(required[net], upstream)

    return TimingReport(arrivals, stages, delay, tuple(path), slacks)


def area(netlist: GateNetlist, library: Optional[CellLibrary] = None) -> int:
    """
    Returns the transistor count, each instance counting `t_count · size`.
    """

    library = CellLibrary.default() if library is None else library
    return sum(library.cell(instance.cell).t_count * instance.size
               for instance in netlist.instances)


@dataclass(frozen=True)
class EvalPoint:
    """
    The coarse evaluation of one candidate.
    """

    id: int
    area: int
    delay: float
    n_inverters: int = 0
    n_ling: int = 0

    @property
    def adp(self) -> float:
        return self.area * self.delay

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "area": self.area,
            "delay": self.delay,
            "n_inverters": self.n_inverters,
            "n_ling": self.n_ling,
        }


def evaluate(
    netlist: GateNetlist,
    library: Optional[CellLibrary] = None,
    candidate_id: int = 0,
) -> EvalPoint:
    """
    Returns the `EvalPoint` of `netlist`: `sta` delay, `area`, and the counts of inverter and
    Ling instances by provenance.
    """

    library = CellLibrary.default() if library is None else library
    report = sta(netlist, library)
    inverters = sum(1 for instance in netlist.instances if instance.provenance.startswith("inv:"))
    ling = sum(1 for instance in netlist.instances if instance.provenance.startswith("ling:"))
    return EvalPoint(candidate_id, area(netlist, library), report.delay, inverters, ling)
