# pylint: disable=import-outside-toplevel
# pylint: disable=missing-module-docstring
# pylint: disable=missing-class-docstring
# pylint: disable=missing-function-docstring
import pytest


def _fanout_of_eight():
    from prefixforge.netlist import GateNetlist, Instance

    instances = [Instance(0, "INV", 1, ("x",), "n0")]
    instances += [Instance(index, "INV", 1, ("n0",), f"y{index}") for index in range(1, 9)]
    return GateNetlist(1, instances, inputs=["x"], outputs=[f"y{index}" for index in range(1, 9)])


def test_sizes_up_high_fanout_driver():
    from prefixforge.sizing import size_gates
    from prefixforge.timing import sta

    netlist = _fanout_of_eight()
    sized = size_gates(netlist)

    assert sized.instance(0).size == 2
    assert all(instance.size == 1 for instance in sized.instances[1:])
    assert sta(netlist).delay == pytest.approx(6.0)
    assert sta(sized).delay == pytest.approx(4.5)


def test_sizing_is_a_fixpoint():
    from prefixforge.sizing import size_gates

    sized = size_gates(_fanout_of_eight())
    assert size_gates(sized).to_json() == sized.to_json()


@pytest.mark.parametrize("arch", ["ks", "bk", "sk", "hc"])
def test_sizing_adders(arch):
    from prefixforge.classical import make_classical
    from prefixforge.network import build_network
    from prefixforge.polarity import enumerate_inverter_candidates
    from prefixforge.sizing import size_gates
    from prefixforge.techmap import map_cells
    from prefixforge.timing import sta
    from prefixforge.verify import check_equiv

    network = build_network(make_classical(arch, 8))
    netlist = map_cells(network, enumerate_inverter_candidates(network)[0])
    sized = size_gates(netlist)

    assert sta(sized).delay <= sta(netlist).delay
    assert size_gates(sized).to_json() == sized.to_json()
    check_equiv(sized).assert_()


def test_single_fanout_is_not_sized():
    from prefixforge.netlist import GateNetlist, Instance
    from prefixforge.sizing import size_gates

    instances = [
        Instance(0, "INV", 1, ("x",), "n0"),
        Instance(1, "INV", 1, ("n0",), "y"),
    ]
    netlist = GateNetlist(1, instances, inputs=["x"], outputs=["y"])
    assert size_gates(netlist).to_json() == netlist.to_json()
