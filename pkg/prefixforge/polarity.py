"""
Polarity assignment and cluster-wise enumeration of inverter insertions.

The baseline polarity follows the electrical level (odd positive, even negative). An edge is
mismatched when its driver does not deliver the polarity its consumer needs. Mismatches that
interact, because they share a flippable node or their flippable nodes are adjacent, form one
`MismatchCluster`. Each cluster is resolved independently: a resolution flips a subset of the
cluster's flippable nodes (choosing their dual cells) and puts an inverter on every edge that is
still mismatched afterwards. The candidates are the Cartesian product of the resolutions.
"""

from collections.abc import Sequence
from dataclasses import dataclass
import json
import logging
from math import prod
from typing import Dict, FrozenSet, List, Tuple

import networkx as nx

from .errors import ClusterTooLarge
from .network import Edge, LogicNetwork, Polarity

log = logging.getLogger(__name__)

CLUSTER_BOUND = 1 << 12


@dataclass(frozen=True)
class Resolution:
    """
    One feasible way to resolve a cluster.
    """

    flips: FrozenSet[int]
    inverters: FrozenSet[Edge]


@dataclass(frozen=True)
class MismatchCluster:
    """
    A group of interacting mismatched edges with all their feasible resolutions.

    Parameters
    ----------
    edges
        The mismatched edges of the baseline.
    nodes
        The flippable nodes at their ends.
    affected
        Every edge whose state a flip of `nodes` can change, including `edges`.
    resolutions
        The feasible resolutions, the unflipped one first.
    truncated
        Whether enumeration stopped at the bound.
    """

    edges: Tuple[Edge, ...]
    nodes: Tuple[int, ...]
    affected: Tuple[Edge, ...]
    resolutions: Tuple[Resolution, ...]
    truncated: bool = False

    def to_json(self) -> dict:
        return {
            "edges": [list(edge) for edge in self.edges],
            "nodes": list(self.nodes),
            "affected": len(self.affected),
            "resolutions": len(self.resolutions),
            "truncated": self.truncated,
        }


@dataclass(frozen=True)
class PolarityAssignment:
    """
    A complete polarity assignment: the polarity of every logic node and the edges that receive
    an inverter.
    """

    polarity: Tuple[Polarity, ...]
    inverters: FrozenSet[Edge]
    flips: FrozenSet[int]
    index: int = 0

    def is_mismatch_free(self, network: LogicNetwork) -> bool:
        """
        Returns whether every mismatched edge carries an inverter and no other edge does.
        """

        return set(network.mismatches(self.polarity)) == set(self.inverters)


def _clusters(network: LogicNetwork, baseline: Sequence[Polarity]) -> List[Tuple[list, list]]:
    mismatched = network.mismatches(baseline)
    conflicts = nx.Graph()
    flippable = set()
    for edge in mismatched:
        conflicts.add_node(("edge", edge))
        for endpoint in edge[:2]:
            if network.node(endpoint).flippable:
                flippable.add(endpoint)
                conflicts.add_edge(("edge", edge), ("node", endpoint))
    for node_id in flippable:
        neighbours = set(network.node(node_id).inputs)
        neighbours |= {consumer for consumer, _ in network.consumers(node_id)}
        for other in neighbours & flippable:
            conflicts.add_edge(("node", node_id), ("node", other))

    groups = []
    for component in nx.connected_components(conflicts):
        edges = sorted(item for kind, item in component if kind == "edge")
        nodes = sorted(item for kind, item in component if kind == "node")
        groups.append((edges, nodes))
    groups.sort(key=lambda group: group[0][0])
    return groups


def _affected(network: LogicNetwork, edges: Sequence[Edge], nodes: Sequence[int]) -> List[Edge]:
    affected = set(edges)
    for node_id in nodes:
        node = network.node(node_id)
        for pin, driver in enumerate(node.inputs):
            affected.add((driver, node_id, pin))
        for consumer, pin in network.consumers(node_id):
            if network.required(network.node(consumer), Polarity.POSITIVE) is not None:
                affected.add((node_id, consumer, pin))
    return sorted(affected)


def _resolve(
    edges: Sequence[Edge],
    nodes: Sequence[int],
    affected: Sequence[Edge],
    slack: int,
    bound: int,
) -> Tuple[List[Resolution], bool]:
    mismatched = set(edges)
    limit = len(edges) + slack
    position = {node_id: index for index, node_id in enumerate(nodes)}
    # edges grouped by the position after which both of their ends are decided
    final_at: Dict[int, List[Edge]] = {}
    for edge in affected:
        last = max((position[end] for end in edge[:2] if end in position), default=-1)
        final_at.setdefault(last, []).append(edge)

    resolutions: List[Resolution] = []
    flipped: List[int] = []
    truncated = False

    def state(edge: Edge, flips: set) -> bool:
        return (edge in mismatched) ^ (edge[0] in flips) ^ (edge[1] in flips)

    def count(stage: int, flips: set) -> int:
        return sum(1 for edge in final_at.get(stage, ()) if state(edge, flips))

    def search(index: int, inverters: int) -> None:
        nonlocal truncated
        if truncated:
            return
        if index == len(nodes):
            if len(resolutions) >= bound:
                truncated = True
                return
            flips = set(flipped)
            resolutions.append(Resolution(
                frozenset(flips),
                frozenset(edge for edge in affected if state(edge, flips)),
            ))
            return
        for flip in (False, True):
            if flip:
                flipped.append(nodes[index])
            total = inverters + count(index, set(flipped))
            if total <= limit:
                search(index + 1, total)
            if flip:
                flipped.pop()

    initial = count(-1, set())
    if initial <= limit:
        search(0, initial)
    return resolutions, truncated


class InverterSpace(Sequence):
    """
    The lazily indexed candidate polarity assignments of a network.

    Candidate `k` picks resolution `k mod r_0` of cluster 0, then `(k div r_0) mod r_1` of
    cluster 1, and so on.
    """

    def __init__(
        self,
        network: LogicNetwork,
        baseline: Sequence[Polarity],
        clusters: Sequence[MismatchCluster],
    ) -> None:
        self.__network = network
        self.__baseline = tuple(baseline)
        self.__clusters = tuple(clusters)
        self.__length = prod(len(cluster.resolutions) for cluster in self.__clusters)

    def __repr__(self):
        return f"{self.__class__.__name__}(clusters={len(self.__clusters)}, size={self.__length})"

    def __len__(self):
        return self.__length

    def __getitem__(self, index):
        if isinstance(index, slice):
            return [self[i] for i in range(*index.indices(self.__length))]
        if index < 0:
            index += self.__length
        if not 0 <= index < self.__length:
            raise IndexError(f"candidate {index} out of range")

        remainder = index
        flips = set()
        inverters = set()
        for cluster in self.__clusters:
            remainder, choice = divmod(remainder, len(cluster.resolutions))
            resolution = cluster.resolutions[choice]
            flips |= resolution.flips
            inverters |= resolution.inverters
        polarity = tuple(
            value.flipped() if node_id in flips else value
            for node_id, value in enumerate(self.__baseline)
        )
        return PolarityAssignment(polarity, frozenset(inverters), frozenset(flips), index)

    @property
    def network(self) -> LogicNetwork:
        return self.__network

    @property
    def clusters(self) -> Tuple[MismatchCluster, ...]:
        return self.__clusters

    @property
    def truncated(self) -> bool:
        return any(cluster.truncated for cluster in self.__clusters)

    def to_json(self) -> dict:
        return {
            "candidates": self.__length,
            "truncated": self.truncated,
            "clusters": [cluster.to_json() for cluster in self.__clusters],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


def enumerate_inverter_candidates(
    network: LogicNetwork,
    bound: int = CLUSTER_BOUND,
    slack: int = 0,
    strict: bool = False,
) -> InverterSpace:
    """
    Partition the baseline mismatches into clusters and enumerate the feasible resolutions of
    each.

    Parameters
    ----------
    network
        The logic network.
    bound
        The maximum number of resolutions per cluster.
    slack
        How many inverters a resolution may use beyond the cluster's baseline mismatch count.
    strict
        Raise instead of truncating a cluster at `bound`.

    Raises
    ------
    ClusterTooLarge
        In strict mode, if a cluster has more than `bound` resolutions.
    """

    baseline = network.baseline()
    clusters = []
    for edges, nodes in _clusters(network, baseline):
        affected = _affected(network, edges, nodes)
        resolutions, truncated = _resolve(edges, nodes, affected, slack, bound)
        if truncated:
            if strict:
                raise ClusterTooLarge(
                    f"cluster of {len(nodes)} nodes exceeds {bound} resolutions"
                )
            log.warning("cluster of %d nodes truncated at %d resolutions", len(nodes), bound)
        log.debug("cluster of %d edges, %d nodes: %d resolutions",
                  len(edges), len(nodes), len(resolutions))
        clusters.append(MismatchCluster(
            tuple(edges), tuple(nodes), tuple(affected), tuple(resolutions), truncated,
        ))
    return InverterSpace(network, baseline, clusters)
