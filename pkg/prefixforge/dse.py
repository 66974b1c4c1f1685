"""
Design-space exploration: candidate generation, evaluation, Pareto frontier and top-K selection.

A candidate is identified by its `Recipe`: the seed topology, the mode (prefix-only or hybrid),
the propagate-network variant, the inverter candidate index and whether it is sized. Candidates
keep only their recipe and evaluation; `CandidateSet.netlist` rebuilds a netlist on demand.
"""

from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import asdict, dataclass, field
import json
import logging
import os
from pathlib import Path
import time
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .classical import Architecture, make_classical
from .errors import (EmptyDesignSpace, InvalidConfig, OutputError, TimeBudgetExceeded,
                     UnsupportedWidth)
from .graph import NodeKind, PrefixGraph, metrics, min_depth
from .library import CellLibrary
from .ling import CoarseModel, PFlavor, hybridize, is_fused, multiplier
from .netlist import GateNetlist
from .network import build_network
from .polarity import CLUSTER_BOUND, enumerate_inverter_candidates
from .search import SearchConstraints, search_min_size
from .sizing import size_gates
from .techmap import map_cells
from .timing import EvalPoint, evaluate
from .verify import quick_check
from .verilog import emit_verilog

log = logging.getLogger(__name__)

PREFIX = "prefix"
HYBRID = "hybrid"
TOP_K_RANGE = (5, 20)
SIZINGS = {"none": (False,), "sized": (True,), "both": (False, True)}
SCATTER_COLUMNS = (
    "id", "area_transistors", "delay_fo1", "n_inverters", "n_ling", "on_frontier", "selected",
)
MANIFEST_FORMAT = 1


@dataclass(frozen=True)
class ExploreConfig:
    """
    The settings of one exploration run.

    Parameters
    ----------
    width
        The adder width.
    depth
        The level bound, `min(width - 1, ceil(log2 width) + 1)` if not given.
    fanout
        The fanout bound, unbounded if not given.
    hybrid
        Also explore the Ling hybrid of every seed.
    top_k
        The number of selected candidates, clamped to `[5, 20]`.
    cap
        The maximum number of candidates, split evenly over the (seed, mode) buckets.
    seed
        The random seed of propagate variants and verification vectors.
    output
        The directory `explore` writes its reports to, none if not given.
    sweep
        Additional depth bounds, each contributing its minimum-size seed.
    p_variants
        The number of propagate-network variants per bucket, the baseline included.
    sizing
        `none`, `sized` or `both` (every candidate before and after sizing).
    share_or
        Derive OR-form propagates from the XOR-form ones.
    cluster_bound
        The maximum number of resolutions per mismatch cluster.
    inverter_slack
        Extra inverters a cluster resolution may use.
    node_budget
        The expansion budget of the topology search.
    workers
        The number of worker processes; `AXON_THREADS` overrides it.
    library
        The path of a cell library JSON file, the default library if not given.
    """

    width: int
    depth: Optional[int] = None
    fanout: Optional[int] = None
    hybrid: bool = False
    top_k: int = 12
    cap: int = 50_000
    seed: int = 0
    output: Optional[str] = None
    sweep: Tuple[int, ...] = ()
    p_variants: int = 256
    sizing: str = "sized"
    share_or: bool = False
    cluster_bound: int = CLUSTER_BOUND
    inverter_slack: int = 0
    node_budget: int = 200_000
    workers: int = 1
    library: Optional[str] = None

    def __post_init__(self):
        low, high = TOP_K_RANGE
        object.__setattr__(self, "top_k", min(high, max(low, self.top_k)))
        object.__setattr__(self, "sweep", tuple(self.sweep))

    def effective_depth(self) -> int:
        if self.depth is not None:
            return self.depth
        return max(0, min(self.width - 1, min_depth(self.width) + 1))

    def check(self) -> None:
        """
        Raise if the settings are inconsistent.
        """

        if self.width < 1:
            raise UnsupportedWidth(f"adder width must be at least 1, got {self.width}")
        if self.cap < self.top_k:
            raise InvalidConfig(f"candidate cap {self.cap} is below top-k {self.top_k}")
        if self.sizing not in SIZINGS:
            raise InvalidConfig(f"sizing must be one of {', '.join(SIZINGS)}, got {self.sizing}")
        if self.p_variants < 1:
            raise InvalidConfig("at least one propagate variant is needed")

    def constraints(self, depth: Optional[int] = None) -> SearchConstraints:
        return SearchConstraints(
            self.width,
            self.effective_depth() if depth is None else depth,
            self.fanout,
            self.node_budget,
        )

    def to_json(self) -> dict:
        document = asdict(self)
        document["depth"] = self.effective_depth()
        document["sweep"] = list(self.sweep)
        return document


@dataclass(frozen=True)
class Recipe:
    """
    How to rebuild one candidate netlist from its seed topology.
    """

    seed: str
    mode: str
    variant: int
    or_nodes: Tuple[int, ...]
    inverters: int
    sized: bool

    def __str__(self):
        sizing = "sized" if self.sized else "unsized"
        return f"{self.seed}/{self.mode}/p{self.variant}/inv{self.inverters}/{sizing}"

    def to_json(self) -> dict:
        document = asdict(self)
        document["or_nodes"] = list(self.or_nodes)
        return document


@dataclass(frozen=True)
class Candidate:
    id: int
    recipe: Recipe
    point: EvalPoint


def realize(
    graph: PrefixGraph,
    recipe: Recipe,
    library: Optional[CellLibrary] = None,
    share_or: bool = False,
    cluster_bound: int = CLUSTER_BOUND,
    inverter_slack: int = 0,
    name: Optional[str] = None,
) -> GateNetlist:
    """
    Build the netlist `recipe` describes on the seed topology `graph`.
    """

    library = CellLibrary.default() if library is None else library
    if recipe.mode == HYBRID:
        graph = hybridize(graph, CoarseModel.from_library(library)).graph
    network = build_network(graph, or_nodes=frozenset(recipe.or_nodes), share_or=share_or)
    space = enumerate_inverter_candidates(network, cluster_bound, inverter_slack)
    netlist = map_cells(network, space[recipe.inverters], library, name)
    return size_gates(netlist, library) if recipe.sized else netlist


def propagate_variants(
    graph: PrefixGraph,
    count: int,
    rng: np.random.Generator,
) -> List[Tuple[int, ...]]:
    """
    Returns up to `count` sets of prefix nodes whose multiplier switches to OR-form, the empty
    set first.

    Only nodes with an XOR-form multiplier of at least two bits are eligible. All subsets are
    listed in mask order when they fit in `count`, seeded random distinct subsets otherwise.
    """

    eligible = []
    for node in graph.internal_nodes():
        if node.kind != NodeKind.PREFIX or is_fused(graph, node):
            continue
        factor = multiplier(graph, node)
        if factor is not None and len(factor) >= 2 and factor.flavor == PFlavor.XOR:
            eligible.append(node.id)

    variants: List[Tuple[int, ...]] = [()]
    if count <= 1 or not eligible:
        return variants
    if len(eligible) < 31 and 1 << len(eligible) <= count:
        for mask in range(1, 1 << len(eligible)):
            variants.append(tuple(node for bit, node in enumerate(eligible) if mask >> bit & 1))
        return variants

    seen = {()}
    attempts = 0
    while len(variants) < count and attempts < 64 * count:
        attempts += 1
        picks = rng.random(len(eligible)) < 0.5
        chosen = tuple(node for node, pick in zip(eligible, picks) if pick)
        if chosen not in seen:
            seen.add(chosen)
            variants.append(chosen)
    return variants


def seed_topologies(config: ExploreConfig) -> Dict[str, PrefixGraph]:
    """
    Returns the seed topologies by name: the minimum-size graph of every depth bound, then the
    classical graphs within the bounds, without duplicates.

    Raises
    ------
    InfeasibleConstraints
        If the depth or fanout bound cannot be met.
    """

    config.constraints().check()
    seeds: Dict[str, PrefixGraph] = {}
    keys = set()

    def add(name: str, graph: PrefixGraph) -> None:
        if graph.key() in keys:
            log.debug("seed %s duplicates an earlier seed", name)
            return
        keys.add(graph.key())
        seeds[name] = graph

    for depth in (config.effective_depth(),) + config.sweep:
        constraints = config.constraints(depth)
        try:
            result = search_min_size(constraints)
        except TimeBudgetExceeded as error:
            log.warning("no search seed for depth %d: %s", depth, error)
            continue
        add(f"min-d{constraints.depth()}", result.graph)

    constraints = config.constraints()
    for arch in Architecture:
        graph = make_classical(arch, config.width)
        if constraints.admits(graph):
            add(arch.value, graph)
        else:
            log.warning("classical seed %s exceeds the depth or fanout bound", arch.value)

    for name, graph in seeds.items():
        measured = metrics(graph)
        log.info("seed %s: size %d, depth %d, max fanout %d",
                 name, measured.size, measured.depth, measured.max_fanout)
    return seeds


@dataclass(frozen=True)
class _Job:
    bucket: int
    name: str
    graph: dict
    mode: str
    share: int
    library: dict
    seed: int
    p_variants: int
    sizings: Tuple[bool, ...]
    share_or: bool
    cluster_bound: int
    inverter_slack: int


@dataclass(frozen=True)
class _BucketResult:
    name: str
    mode: str
    entries: List[Tuple[Recipe, int, float, int, int]]
    clusters: dict
    rejected: int


def _explore_bucket(job: _Job) -> _BucketResult:
    library = CellLibrary.from_json(job.library)
    graph = PrefixGraph.from_json(job.graph)
    if job.mode == HYBRID:
        graph = hybridize(graph, CoarseModel.from_library(library)).graph
    rng = np.random.default_rng([job.seed, job.bucket])
    variants = propagate_variants(graph, job.p_variants, rng)
    per_variant = max(1, job.share // len(variants))

    entries: List[Tuple[Recipe, int, float, int, int]] = []
    clusters: dict = {}
    rejected = 0
    for variant, or_nodes in enumerate(variants):
        if len(entries) >= job.share:
            break
        network = build_network(graph, or_nodes=frozenset(or_nodes), share_or=job.share_or)
        space = enumerate_inverter_candidates(network, job.cluster_bound, job.inverter_slack)
        if variant == 0:
            clusters = space.to_json()
        taken = 0
        for index in range(len(space)):
            if taken >= per_variant or len(entries) >= job.share:
                break
            netlist = map_cells(network, space[index], library)
            if not quick_check(netlist, library, seed=job.seed):
                log.warning("%s/%s variant %d inverters %d fails verification, dropped",
                            job.name, job.mode, variant, index)
                rejected += 1
                continue
            for sized in job.sizings:
                if len(entries) >= job.share:
                    break
                final = size_gates(netlist, library) if sized else netlist
                point = evaluate(final, library)
                recipe = Recipe(job.name, job.mode, variant, or_nodes, index, sized)
                entries.append((recipe, point.area, point.delay, point.n_inverters, point.n_ling))
                taken += 1
    log.info("bucket %s/%s: %d candidates from %d propagate variants",
             job.name, job.mode, len(entries), len(variants))
    return _BucketResult(job.name, job.mode, entries, clusters, rejected)


def worker_count(config: ExploreConfig) -> int:
    """
    Returns the number of worker processes, `AXON_THREADS` taking precedence over the config.
    """

    override = os.environ.get("AXON_THREADS")
    if override:
        try:
            workers = int(override)
        except ValueError as error:
            raise InvalidConfig(f"AXON_THREADS must be an integer, got {override!r}") from error
        if workers < 1:
            raise InvalidConfig(f"AXON_THREADS must be positive, got {workers}")
        return workers
    return max(1, config.workers)


def pareto(points: Sequence[EvalPoint]) -> List[int]:
    """
    Returns the ids of the non-dominated points ordered by (delay, area, id).

    A point dominates another if neither its area nor its delay is larger and one is smaller.
    """

    if not points:
        return []
    delay = np.array([point.delay for point in points], dtype=float)
    area = np.array([point.area for point in points], dtype=float)
    ids = np.array([point.id for point in points])
    order = np.lexsort((ids, area, delay))

    frontier = []
    best_before = np.inf
    position = 0
    while position < len(order):
        end = position
        while end < len(order) and delay[order[end]] == delay[order[position]]:
            end += 1
        group_best = area[order[position]]
        for index in order[position:end]:
            if area[index] == group_best and area[index] < best_before:
                frontier.append(int(ids[index]))
        best_before = min(best_before, group_best)
        position = end
    return frontier


def select_topk(frontier: Sequence[EvalPoint], k: int) -> List[int]:
    """
    Returns the ids of the `k` frontier points with the smallest area-delay product, ties
    broken by id.
    """

    ranked = sorted(frontier, key=lambda point: (point.adp, point.id))
    return [point.id for point in ranked[:max(0, k)]]


def spread(values: Sequence[float]) -> float:
    """
    Returns `(max - min) / min`.
    """

    values = np.asarray(values, dtype=float)
    if values.size == 0 or values.min() <= 0:
        return 0.0
    return float((values.max() - values.min()) / values.min())


@dataclass(frozen=True)
class HybridComparison:
    """
    The prefix-only and the hybrid realization of one topology, each with inverter candidate 0,
    the baseline propagate network and sizing.
    """

    name: str
    prefix: EvalPoint
    hybrid: EvalPoint
    converted: int

    @staticmethod
    def change(before: float, after: float) -> float:
        return 100.0 * (after - before) / before if before else 0.0

    def to_json(self) -> dict:
        return {
            "topology": self.name,
            "converted": self.converted,
            "prefix": {"area": self.prefix.area, "delay": round(self.prefix.delay, 3),
                       "adp": round(self.prefix.adp, 3)},
            "hybrid": {"area": self.hybrid.area, "delay": round(self.hybrid.delay, 3),
                       "adp": round(self.hybrid.adp, 3)},
            "delay_change_pct": round(self.change(self.prefix.delay, self.hybrid.delay), 1),
            "area_change_pct": round(self.change(self.prefix.area, self.hybrid.area), 1),
            "adp_change_pct": round(self.change(self.prefix.adp, self.hybrid.adp), 1),
        }

    def text(self) -> str:
        document = self.to_json()
        return (
            f"{self.name}: prefix {self.prefix.delay:.3f} FO1 / {self.prefix.area} T, "
            f"hybrid {self.hybrid.delay:.3f} FO1 ({document['delay_change_pct']:+.1f}%) / "
            f"{self.hybrid.area} T ({document['area_change_pct']:+.1f}%), "
            f"{self.converted} nodes converted"
        )


def compare_hybrid(
    graph: PrefixGraph,
    library: Optional[CellLibrary] = None,
    name: str = "topology",
    share_or: bool = False,
) -> HybridComparison:
    """
    Map `graph` once as a pure prefix adder and once after hybridization, and evaluate both.
    """

    library = CellLibrary.default() if library is None else library
    converted = len(hybridize(graph, CoarseModel.from_library(library)).converted)
    points = []
    for mode in (PREFIX, HYBRID):
        netlist = realize(graph, Recipe(name, mode, 0, (), 0, True), library, share_or)
        points.append(evaluate(netlist, library))
    return HybridComparison(name, points[0], points[1], converted)


@dataclass(frozen=True)
class CandidateSet:
    """
    The result of `explore`.

    Parameters
    ----------
    config
        The run settings.
    seeds
        The seed topologies by name.
    candidates
        All candidates, indexed by id.
    frontier
        The ids of the Pareto frontier ordered by delay.
    selected
        The ids of the top-K frontier points by area-delay product.
    clusters
        The mismatch clusters of the baseline variant of every bucket.
    comparisons
        The prefix-only against hybrid comparison of every seed, hybrid runs only.
    rejected
        The number of netlists dropped by verification.
    elapsed
        The wall time in seconds.
    """

    config: ExploreConfig
    seeds: Dict[str, PrefixGraph]
    candidates: Tuple[Candidate, ...]
    frontier: Tuple[int, ...]
    selected: Tuple[int, ...]
    library: CellLibrary = field(repr=False, default_factory=CellLibrary.default)
    clusters: Dict[str, dict] = field(default_factory=dict)
    comparisons: Tuple[HybridComparison, ...] = ()
    rejected: int = 0
    elapsed: float = 0.0

    def __len__(self):
        return len(self.candidates)

    def candidate(self, candidate_id: int) -> Candidate:
        return self.candidates[candidate_id]

    def points(self) -> List[EvalPoint]:
        return [candidate.point for candidate in self.candidates]

    def netlist(self, candidate_id: int) -> GateNetlist:
        """
        Rebuild the netlist of a candidate.
        """

        recipe = self.candidate(candidate_id).recipe
        return realize(
            self.seeds[recipe.seed], recipe, self.library, self.config.share_or,
            self.config.cluster_bound, self.config.inverter_slack, f"cand_{candidate_id}",
        )

    def spreads(self) -> Dict[str, float]:
        """
        Returns the relative delay and area spread over all candidates.
        """

        points = self.points()
        return {
            "delay": spread([point.delay for point in points]),
            "area": spread([point.area for point in points]),
        }

    def topologies(self) -> List[dict]:
        summary = []
        for name, graph in self.seeds.items():
            document = {"name": name}
            document.update(metrics(graph).to_json())
            summary.append(document)
        return summary

    def manifest(self) -> dict:
        frontier = set(self.frontier)
        return {
            "format": MANIFEST_FORMAT,
            "config": self.config.to_json(),
            "seed": self.config.seed,
            "counts": {
                "topologies": len(self.seeds),
                "candidates": len(self.candidates),
                "frontier": len(self.frontier),
                "selected": len(self.selected),
                "rejected": self.rejected,
            },
            "wall_time_s": round(self.elapsed, 3),
            "topologies": self.topologies(),
            "spread": {key: round(value, 4) for key, value in self.spreads().items()},
            "frontier": list(self.frontier),
            "selected": [
                {
                    "id": candidate_id,
                    "file": f"netlists/cand_{candidate_id}.v",
                    "area": self.candidate(candidate_id).point.area,
                    "delay": round(self.candidate(candidate_id).point.delay, 3),
                    "adp": round(self.candidate(candidate_id).point.adp, 3),
                    "on_frontier": candidate_id in frontier,
                    "provenance": self.candidate(candidate_id).recipe.to_json(),
                }
                for candidate_id in self.selected
            ],
            "comparisons": [comparison.to_json() for comparison in self.comparisons],
        }


def explore(config: ExploreConfig) -> CandidateSet:
    """
    Generate, verify and evaluate the candidates of `config`, then extract the Pareto frontier
    and select the top-K candidates. Writes the reports if `config.output` is set.

    Raises
    ------
    InfeasibleConstraints
        If the bounds admit no topology.
    EmptyDesignSpace
        If no candidate survives.
    """

    config.check()
    started = time.perf_counter()
    library = CellLibrary.load(config.library)
    seeds = seed_topologies(config)

    modes = (PREFIX, HYBRID) if config.hybrid else (PREFIX,)
    buckets = [(name, mode) for name in seeds for mode in modes]
    share = max(1, config.cap // max(1, len(buckets)))
    jobs = [
        _Job(index, name, seeds[name].to_json(), mode, share, library.to_json(), config.seed,
             config.p_variants, SIZINGS[config.sizing], config.share_or, config.cluster_bound,
             config.inverter_slack)
        for index, (name, mode) in enumerate(buckets)
    ]

    workers = worker_count(config)
    if workers > 1 and len(jobs) > 1:
        log.info("exploring %d buckets on %d workers", len(jobs), workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_explore_bucket, jobs))
    else:
        results = [_explore_bucket(job) for job in jobs]

    candidates: List[Candidate] = []
    clusters: Dict[str, dict] = {}
    rejected = 0
    for result in results:
        clusters[f"{result.name}/{result.mode}"] = result.clusters
        rejected += result.rejected
        for recipe, area, delay, inverters, ling in result.entries:
            point = EvalPoint(len(candidates), area, delay, inverters, ling)
            candidates.append(Candidate(point.id, recipe, point))
    if not candidates:
        raise EmptyDesignSpace(f"no candidate of width {config.width} survived verification")

    points = [candidate.point for candidate in candidates]
    frontier = pareto(points)
    selected = select_topk([points[candidate_id] for candidate_id in frontier], config.top_k)
    comparisons = tuple(
        compare_hybrid(graph, library, name, config.share_or) for name, graph in seeds.items()
    ) if config.hybrid else ()
    log.info("%d candidates, %d on the frontier, %d selected",
             len(candidates), len(frontier), len(selected))

    result = CandidateSet(
        config, seeds, tuple(candidates), tuple(frontier), tuple(selected), library, clusters,
        comparisons, rejected, time.perf_counter() - started,
    )
    if config.output is not None:
        export_reports(result, config.output)
    return result


def export_reports(candidates: CandidateSet, directory) -> List[Path]:
    """
    Write `scatter.csv`, one Verilog netlist per selected candidate under `netlists/`,
    `clusters.json` and the run manifest `manifest.json`.

    Raises
    ------
    OutputError
        If a file cannot be written.
    """

    directory = Path(directory)
    frontier, selected = set(candidates.frontier), set(candidates.selected)
    written: List[Path] = []
    path = directory
    try:
        (directory / "netlists").mkdir(parents=True, exist_ok=True)

        path = directory / "scatter.csv"
        with open(path, "w", encoding="utf-8", newline="") as file:
            writer = csv.writer(file, lineterminator="\n")
            writer.writerow(SCATTER_COLUMNS)
            for candidate in candidates.candidates:
                point = candidate.point
                writer.writerow([
                    point.id, point.area, f"{point.delay:.3f}", point.n_inverters, point.n_ling,
                    int(point.id in frontier), int(point.id in selected),
                ])
        written.append(path)

        for candidate_id in candidates.selected:
            path = directory / "netlists" / f"cand_{candidate_id}.v"
            netlist = candidates.netlist(candidate_id)
            path.write_text(emit_verilog(netlist, candidates.library), encoding="utf-8")
            written.append(path)

        path = directory / "clusters.json"
        path.write_text(json.dumps(candidates.clusters, indent=2) + "\n", encoding="utf-8")
        written.append(path)

        path = directory / "manifest.json"
        path.write_text(json.dumps(candidates.manifest(), indent=2) + "\n", encoding="utf-8")
        written.append(path)
    except OSError as error:
        raise OutputError(f"cannot write {path}: {error.strerror or error}") from error
    log.info("wrote %d files to %s", len(written), directory)
    return written


def read_manifest(directory) -> dict:
    """
    Load the run manifest of an exploration output directory.

    Raises
    ------
    OutputError
        If the manifest is missing, malformed or of another format.
    """

    path = Path(directory) / "manifest.json"
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as error:
        raise OutputError(f"cannot read {path}: {error}") from error
    if document.get("format") != MANIFEST_FORMAT:
        raise OutputError(f"{path} has unsupported format {document.get('format')!r}")
    return document


def read_scatter(directory) -> List[dict]:
    """
    Load `scatter.csv` of an exploration output directory.
    """

    path = Path(directory) / "scatter.csv"
    try:
        with open(path, encoding="utf-8", newline="") as file:
            rows = list(csv.DictReader(file))
    except OSError as error:
        raise OutputError(f"cannot read {path}: {error.strerror or error}") from error
    return [
        {
            "id": int(row["id"]),
            "area": int(row["area_transistors"]),
            "delay": float(row["delay_fo1"]),
            "n_inverters": int(row["n_inverters"]),
            "n_ling": int(row["n_ling"]),
            "on_frontier": row["on_frontier"] == "1",
            "selected": row["selected"] == "1",
        }
        for row in rows
    ]
