# pylint: disable=import-outside-toplevel
# pylint: disable=missing-module-docstring
# pylint: disable=missing-class-docstring
# pylint: disable=missing-function-docstring
import pytest


@pytest.mark.parametrize("width", [4, 8, 16, 32])
@pytest.mark.parametrize("arch", ["ks", "bk", "sk", "hc"])
def test_classical_graphs_are_valid(arch, width):
    from prefixforge.classical import make_classical
    from prefixforge.graph import validate

    graph = make_classical(arch, width)
    report = validate(graph)
    assert report.ok, str(report)
    assert len(graph.outputs) == width


def test_kogge_stone_16():
    from prefixforge.classical import make_classical
    from prefixforge.graph import metrics

    measured = metrics(make_classical("ks", 16))
    assert measured.size  == 49
    assert measured.depth == 4


def test_brent_kung_16():
    from prefixforge.classical import make_classical
    from prefixforge.graph import metrics

    measured = metrics(make_classical("bk", 16))
    assert measured.size  == 26
    assert measured.depth == 6


def test_sklansky_depth_and_fanout():
    from prefixforge.classical import make_classical
    from prefixforge.graph import metrics

    measured = metrics(make_classical("sk", 16))
    assert measured.depth == 4
    assert measured.max_fanout == 8


def test_non_power_of_two_width():
    from prefixforge.classical import make_classical
    from prefixforge.graph import metrics, validate

    graph = make_classical("ks", 11)
    assert validate(graph).ok
    assert metrics(graph).depth == 4
    assert graph.output(11).span.hi == 10


def test_unsupported_width():
    from prefixforge.classical import make_classical
    from prefixforge.errors import UnsupportedWidth

    with pytest.raises(UnsupportedWidth):
        make_classical("bk", 0)


def test_width_one():
    from prefixforge.classical import make_classical
    from prefixforge.graph import metrics, validate

    graph = make_classical("ks", 1)
    assert validate(graph).ok
    assert metrics(graph).size == 0
    assert graph.output(1).is_leaf


def test_json_round_trip():
    from prefixforge.classical import make_classical
    from prefixforge.graph import PrefixGraph, validate

    graph = make_classical("hc", 16)
    loaded = PrefixGraph.from_json(graph.to_json())
    assert loaded == graph
    assert loaded.key() == graph.key()
    assert validate(loaded).ok


def test_validate_reports_violations():
    from prefixforge.graph import (
        DeadNode, MissingOutput, NodeKind, PrefixGraph, PrefixNode, Span, SpanMismatch, validate,
    )

    leaves = [PrefixNode(bit, Span(bit, bit), NodeKind.LEAF, None, None, 0) for bit in range(3)]
    good = PrefixNode(3, Span(1, 0), NodeKind.PREFIX, 1, 0, 1)
    bad = PrefixNode(4, Span(2, 0), NodeKind.PREFIX, 2, 1, 1)
    dead = PrefixNode(5, Span(2, 1), NodeKind.PREFIX, 2, 1, 1)

    report = validate(PrefixGraph(3, leaves + [good, bad, dead], [0, 3, 3]))
    assert not report.ok
    assert report.of_type(SpanMismatch)
    assert report.of_type(MissingOutput)
    assert report.of_type(DeadNode)


def test_validate_reports_cycle():
    from prefixforge.graph import Cycle, NodeKind, PrefixGraph, PrefixNode, Span, validate

    nodes = [
        PrefixNode(0, Span(0, 0), NodeKind.LEAF, None, None, 0),
        PrefixNode(1, Span(1, 1), NodeKind.LEAF, None, None, 0),
        PrefixNode(2, Span(1, 0), NodeKind.PREFIX, 3, 0, 1),
        PrefixNode(3, Span(1, 1), NodeKind.PREFIX, 2, 0, 2),
    ]
    report = validate(PrefixGraph(2, nodes, [0, 2]))
    assert report.of_type(Cycle)


def test_from_splits_drops_unused_spans():
    from prefixforge.graph import PrefixGraph, metrics

    graph = PrefixGraph.from_splits(3, {(1, 0): 0, (2, 0): 1, (2, 1): 1})
    assert metrics(graph).size == 2
    assert graph.find(2, 1) is None
    assert graph.split(graph.find(2, 0)) == 1
