# pylint: disable=import-outside-toplevel
# pylint: disable=missing-module-docstring
# pylint: disable=missing-class-docstring
# pylint: disable=missing-function-docstring
import pytest


def _mapped(graph, index=0, **options):
    from prefixforge.network import build_network
    from prefixforge.polarity import enumerate_inverter_candidates
    from prefixforge.techmap import map_cells

    network = build_network(graph, **options)
    space = enumerate_inverter_candidates(network)
    return map_cells(network, space[index])


@pytest.mark.parametrize("width", [1, 2, 3, 4, 5, 6])
@pytest.mark.parametrize("arch", ["ks", "bk", "sk", "hc"])
def test_mapped_classical_adders_add(arch, width):
    from prefixforge.classical import make_classical
    from prefixforge.verify import check_equiv

    netlist = _mapped(make_classical(arch, width))
    netlist.check()
    check_equiv(netlist).assert_()


@pytest.mark.parametrize("width", [4, 6, 8])
@pytest.mark.parametrize("arch", ["ks", "bk", "sk", "hc"])
def test_mapped_hybrid_adders_add(arch, width):
    from prefixforge.classical import make_classical
    from prefixforge.ling import hybridize
    from prefixforge.verify import check_equiv

    graph = hybridize(make_classical(arch, width)).graph
    check_equiv(_mapped(graph)).assert_()
    check_equiv(_mapped(graph, share_or=True)).assert_()


def test_every_candidate_adds():
    from prefixforge.classical import make_classical
    from prefixforge.ling import hybridize
    from prefixforge.network import build_network
    from prefixforge.polarity import enumerate_inverter_candidates
    from prefixforge.techmap import map_cells
    from prefixforge.verify import check_equiv

    for graph in (make_classical("bk", 6), hybridize(make_classical("sk", 6)).graph):
        network = build_network(graph)
        for assignment in enumerate_inverter_candidates(network, slack=1)[:24]:
            check_equiv(map_cells(network, assignment)).assert_()


def test_or_propagate_variant_adds():
    from prefixforge.classical import make_classical
    from prefixforge.verify import check_equiv

    graph = make_classical("ks", 8)
    or_nodes = {node.id for node in graph.internal_nodes()}
    check_equiv(_mapped(graph, or_nodes=or_nodes)).assert_()


def test_provenance_and_ports():
    from prefixforge.classical import make_classical
    from prefixforge.ling import hybridize

    netlist = _mapped(hybridize(make_classical("ks", 8)).graph)
    provenance = [instance.provenance for instance in netlist.instances]

    assert     any(entry.startswith("ling:") for entry in provenance)
    assert     any(entry.startswith("prefix:") or entry.startswith("recover:")
                   for entry in provenance)
    assert     set(netlist.outputs) <= set(netlist.drivers())
    assert     all(instance.size == 1 for instance in netlist.instances)
    assert     netlist.name == "adder8"


def test_leaf_cells():
    from prefixforge.classical import make_classical

    netlist = _mapped(make_classical("bk", 4))
    cells = {instance.provenance: instance.cell for instance in netlist.instances}

    assert cells["leaf:g[1]"] == "NAND2"
    assert cells["leaf:x[1]"] == "XNOR2"
    assert cells["leaf:x[0]"] == "XOR2"
    assert cells["leaf:g[0]"] == "AOI22"


def test_missing_cell():
    from prefixforge.classical import make_classical
    from prefixforge.errors import UnmappableNode
    from prefixforge.library import CellLibrary
    from prefixforge.network import build_network
    from prefixforge.polarity import enumerate_inverter_candidates
    from prefixforge.techmap import map_cells

    library = CellLibrary([cell for cell in CellLibrary.default() if cell.name != "AOI22"])
    network = build_network(make_classical("ks", 4))
    with pytest.raises(UnmappableNode):
        map_cells(network, enumerate_inverter_candidates(network)[0], library)


def test_netlist_json_and_structure():
    from prefixforge.classical import make_classical
    from prefixforge.netlist import GateNetlist

    netlist = _mapped(make_classical("sk", 8))
    loaded = GateNetlist.from_json(netlist.to_json())

    assert     loaded.same_structure(netlist)
    assert     loaded.to_json() == netlist.to_json()
    assert not loaded.same_structure(_mapped(make_classical("ks", 8)))
    assert     len(loaded.order()) == len(netlist.instances)
