"""
Discrete gate sizing of multi-fanout instances on the critical path.
"""

import logging
from typing import Optional

from .library import CellLibrary
from .netlist import GateNetlist
from .timing import net_loads, sta

log = logging.getLogger(__name__)

IMPROVEMENT = 1e-12


def _local_delay(
    netlist: GateNetlist,
    library: CellLibrary,
    instance_id: int,
    size: int,
    loads,
) -> float:
    """
    Returns the stage delay of an instance at `size` plus the stages of the drivers of its
    inputs, which see its input capacitance change.
    """

    instance = netlist.instance(instance_id)
    cell = library.cell(instance.cell)
    delta = cell.c_in(size) - cell.c_in(instance.size)
    drivers = netlist.drivers()
    total = library.stage(instance.cell, size, loads[instance.output])
    for net in set(instance.inputs):
        pins = sum(1 for pin_net in instance.inputs if pin_net == net)
        load = loads[net] + pins * delta
        if net in drivers:
            driver = netlist.instance(drivers[net])
            total += library.stage(driver.cell, driver.size, load)
        else:
            total += library.input_drive(load)
    return total


def size_gates(netlist: GateNetlist, library: Optional[CellLibrary] = None) -> GateNetlist:
    """
    Resize the multi-fanout instances on the critical path.

    Each pass visits them in topological order and gives each the size that minimizes its own
    stage plus the stages of its drivers, the smaller size on ties. A change is kept only if the
    netlist delay strictly decreases. Passes repeat until nothing changes, so the result is a
    fixpoint and sizing it again changes nothing.
    """

    library = CellLibrary.default() if library is None else library
    current = netlist
    delay = sta(current, library).delay
    passes = 0
    while True:
        passes += 1
        changed = False
        critical = set(sta(current, library).critical_path)
        for instance_id in current.order():
            instance = current.instance(instance_id)
            fanout = len(current.consumers(instance.output)) + \
                current.outputs.count(instance.output)
            if instance_id not in critical or fanout < 2:
                continue
            loads = net_loads(current, library)
            options = library.cell(instance.cell).sizes
            costs = [
                (_local_delay(current, library, instance_id, size, loads), size)
                for size in options
            ]
            best = min(costs)[1]
            if best == instance.size:
                continue
            trial = current.with_sizes({instance_id: best})
            trial_delay = sta(trial, library).delay
            if trial_delay < delay - IMPROVEMENT:
                log.debug("sized %s %d to x%d: %.3f -> %.3f FO1",
                          instance.cell, instance_id, best, delay, trial_delay)
                current, delay, changed = trial, trial_delay, True
        if not changed:
            break
    log.debug("sizing converged after %d passes at %.3f FO1", passes, delay)
    return current
