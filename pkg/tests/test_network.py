# pylint: disable=import-outside-toplevel
# pylint: disable=missing-module-docstring
# pylint: disable=missing-class-docstring
# pylint: disable=missing-function-docstring
import pytest


def _hybrid(arch, width):
    from prefixforge.classical import make_classical
    from prefixforge.ling import hybridize

    return hybridize(make_classical(arch, width)).graph


def test_p_network_of_prefix_graph():
    from prefixforge.classical import make_classical
    from prefixforge.ling import PFlavor
    from prefixforge.pnetwork import build_p_network

    graph = make_classical("ks", 8)
    pnet = build_p_network(graph)

    assert     pnet.t_bits == frozenset()
    assert     pnet.fused == frozenset()
    assert     pnet.x_bits == frozenset(range(8))
    assert     all(factor is not None for factor in pnet.multipliers.values())
    assert     all(factor.flavor == PFlavor.XOR for factor in pnet.multipliers.values())
    assert     pnet.group_spans(PFlavor.OR) == []


def test_p_network_is_demand_driven():
    from prefixforge.classical import make_classical
    from prefixforge.pnetwork import build_p_network

    for arch in ("ks", "bk", "sk", "hc"):
        pnet = build_p_network(make_classical(arch, 16))
        used = {factor for factor in pnet.multipliers.values() if factor is not None}
        for group, hi_part, lo_part in pnet.groups:
            assert len(group) >= 2
            assert (hi_part.hi, hi_part.lo - 1, lo_part.lo) == (group.hi, lo_part.hi, group.lo)
            used |= {hi_part, lo_part}
        assert all(group in used for group, _, _ in pnet.groups)


def test_p_network_groups_precede_their_users():
    from prefixforge.classical import make_classical
    from prefixforge.pnetwork import build_p_network

    pnet = build_p_network(make_classical("bk", 16))
    seen = set()
    for group, hi_part, lo_part in pnet.groups:
        for part in (hi_part, lo_part):
            assert len(part) == 1 or part in seen
        seen.add(group)


def test_p_network_of_hybrid_graph():
    from prefixforge.graph import NodeKind
    from prefixforge.pnetwork import build_p_network

    graph = _hybrid("ks", 8)
    pnet = build_p_network(graph)
    ling_outputs = {
        column - 1 for column in range(1, 9) if graph.output(column).kind == NodeKind.LING
    }
    assert ling_outputs <= pnet.t_bits
    assert all(graph.node(node).kind == NodeKind.LING for node in pnet.fused)

    shared = build_p_network(graph, share_or=True)
    assert shared.t_bits <= shared.g_bits


def test_or_nodes_switch_flavor():
    from prefixforge.classical import make_classical
    from prefixforge.ling import PFlavor
    from prefixforge.pnetwork import build_p_network

    graph = make_classical("sk", 8)
    node = graph.find(7, 0)
    pnet = build_p_network(graph, or_nodes={node.id})
    assert pnet.multipliers[node.id].flavor == PFlavor.OR
    assert 7 in pnet.t_bits


def test_logic_network_shape():
    from prefixforge.classical import make_classical
    from prefixforge.network import Op, build_network

    network = build_network(make_classical("bk", 8))
    ports = [node for node in network.nodes if node.op == Op.PORT]
    inputs = [node for node in network.nodes if node.op == Op.INPUT]

    assert [node.name for node in ports] == [f"sum[{bit}]" for bit in range(8)] + ["cout"]
    assert len(inputs) == 17
    assert all(driver < node.id for node in network.nodes for driver in node.inputs)
    assert all(node.level == 0 for node in network.nodes if node.op in (Op.GEN, Op.PXOR))


@pytest.mark.parametrize("arch", ["ks", "bk", "sk", "hc"])
@pytest.mark.parametrize("hybrid", [False, True])
def test_cluster_resolutions_match_brute_force(arch, hybrid):
    from itertools import combinations
    from prefixforge.classical import make_classical
    from prefixforge.network import build_network
    from prefixforge.polarity import enumerate_inverter_candidates

    graph = _hybrid(arch, 8) if hybrid else make_classical(arch, 8)
    network = build_network(graph)
    space = enumerate_inverter_candidates(network)
    baseline = network.baseline()
    total = len(network.mismatches(baseline))

    for cluster in space.clusters:
        if len(cluster.nodes) > 10:
            continue
        others = total - len(cluster.edges)
        count = 0
        for size in range(len(cluster.nodes) + 1):
            for flips in combinations(cluster.nodes, size):
                polarity = [
                    value.flipped() if node_id in flips else value
                    for node_id, value in enumerate(baseline)
                ]
                if len(network.mismatches(polarity)) - others <= len(cluster.edges):
                    count += 1
        assert count == len(cluster.resolutions)


def test_candidates_are_mismatch_free():
    from prefixforge.classical import make_classical
    from prefixforge.network import build_network
    from prefixforge.polarity import enumerate_inverter_candidates

    for graph in (make_classical("bk", 8), _hybrid("hc", 8)):
        network = build_network(graph)
        space = enumerate_inverter_candidates(network)
        assert len(space) >= 1
        assert not space.truncated
        for assignment in space[:32]:
            assert assignment.is_mismatch_free(network)
        flips = {assignment.flips for assignment in space[:32]}
        assert len(flips) == len(space[:32])


def test_kogge_stone_has_one_candidate():
    from prefixforge.classical import make_classical
    from prefixforge.network import build_network
    from prefixforge.polarity import enumerate_inverter_candidates

    space = enumerate_inverter_candidates(build_network(make_classical("ks", 8)))
    assert len(space) == 1
    assert space[0].is_mismatch_free(space.network)


def test_inverter_slack_grows_the_space():
    from prefixforge.classical import make_classical
    from prefixforge.network import build_network
    from prefixforge.polarity import enumerate_inverter_candidates

    network = build_network(make_classical("bk", 8))
    tight = enumerate_inverter_candidates(network)
    loose = enumerate_inverter_candidates(network, slack=2)
    assert len(loose) >= len(tight)


def test_cluster_bound():
    from prefixforge.classical import make_classical
    from prefixforge.errors import ClusterTooLarge
    from prefixforge.network import build_network
    from prefixforge.polarity import enumerate_inverter_candidates

    network = build_network(make_classical("bk", 16))
    largest = max(len(cluster.resolutions)
                  for cluster in enumerate_inverter_candidates(network).clusters)
    if largest < 2:
        pytest.skip("no cluster with alternatives")

    space = enumerate_inverter_candidates(network, bound=1)
    assert space.truncated
    with pytest.raises(ClusterTooLarge):
        enumerate_inverter_candidates(network, bound=1, strict=True)
