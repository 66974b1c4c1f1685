"""
The `prefixforge` command line.

Exit codes: 0 on success, 1 for invalid flags, user errors and failed verification, 2 for
internal errors.
"""

import argparse
import json
import logging
import os
from pathlib import Path
import sys
from typing import List, Optional

from . import __version__
from .classical import Architecture, make_classical
from .dse import ExploreConfig, SIZINGS, compare_hybrid, explore
from .errors import InvalidConfig, OutputError, PrefixForgeError, UnsupportedWidth, UserError
from .graph import PrefixGraph, metrics, validate
from .library import CellLibrary
from .ling import CoarseModel, hybridize
from .netlist import GateNetlist
from .network import build_network
from .polarity import CLUSTER_BOUND, enumerate_inverter_candidates
from .report import render
from .search import ENUMERATION_LIMIT, SearchConstraints, asp_min_size, search_min_size
from .sizing import size_gates
from .techmap import map_cells
from .timing import sta
from .verify import RANDOM_VECTORS, check_equiv
from .verilog import emit_verilog, parse_netlist

log = logging.getLogger(__name__)

BENCHMARKS = (16, 23, 31, 32)
LOG_FORMAT = "%(asctime)s %(module)16s %(levelname)8s: %(message)s"


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _write(path, text: str) -> Path:
    path = Path(path)
    try:
        if path.parent != Path("."):
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as error:
        raise OutputError(f"cannot write {path}: {error.strerror or error}") from error
    log.info("wrote %s", path)
    return path


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise OutputError(f"cannot read {path}: {error.strerror or error}") from error


def _read_json(path) -> dict:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as error:
        raise OutputError(f"{path} is not valid JSON: {error}") from error


def _read_graph(path) -> PrefixGraph:
    try:
        graph = PrefixGraph.from_json(_read_json(path))
    except (KeyError, TypeError, ValueError) as error:
        raise InvalidConfig(f"{path} is not a prefix graph: {error}") from error
    report = validate(graph)
    if not report.ok:
        raise InvalidConfig(f"{path} holds an invalid prefix graph:{os.linesep}{report}")
    return graph


def _cell_map(path) -> Optional[dict]:
    return None if path is None else _read_json(path)


def _width(args) -> int:
    return args.bench if args.bench is not None else args.bits


def _emit_graph(args, graph: PrefixGraph, text: str) -> List[Path]:
    measured = metrics(graph)
    log.info("width %d: size %d, depth %d, max fanout %d",
             graph.width, measured.size, measured.depth, measured.max_fanout)
    if args.output is None:
        print(text, end="")
        return []
    return [_write(args.output, text)]


def _gen(args) -> List[Path]:
    graph = make_classical(Architecture(args.arch), _width(args))
    return _emit_graph(args, graph, graph.dumps())


def _search(args) -> List[Path]:
    constraints = SearchConstraints(
        _width(args), args.depth, args.fanout, args.node_budget, args.time_budget,
    )
    result = search_min_size(constraints)
    state = "optimal" if result.optimal else "best found"
    print(f"{state} after {result.expansions} expansions")
    if args.oracle:
        if constraints.width > ENUMERATION_LIMIT:
            log.warning("skipping the clingo oracle beyond width %d", ENUMERATION_LIMIT)
        else:
            minimum = asp_min_size(constraints)
            agrees = minimum == metrics(result.graph).size
            print(f"clingo minimum size {minimum} ({'agrees' if agrees else 'DIFFERS'})")
    return _emit_graph(args, result.graph, result.graph.dumps())


def _hybridize(args) -> List[Path]:
    library = CellLibrary.load(args.library)
    graph = _read_graph(args.graph)
    hybrid = hybridize(graph, CoarseModel.from_library(library))
    print(f"{len(hybrid.converted)} of {len(graph.internal_nodes())} nodes converted, "
          f"{len(hybrid.adapters)} adapters")
    if args.compare:
        print(compare_hybrid(graph, library, Path(args.graph).stem).text())
    if args.output is None:
        print(hybrid.dumps(), end="")
        return []
    return [_write(args.output, hybrid.dumps())]


def _explore(args) -> List[Path]:
    config = ExploreConfig(
        width=_width(args),
        depth=args.depth,
        fanout=args.fanout,
        hybrid=args.hybrid,
        top_k=args.top_k,
        cap=args.cap,
        seed=args.seed,
        output=args.output,
        sweep=tuple(args.sweep),
        p_variants=args.p_variants,
        sizing=args.sizing,
        share_or=args.share_or,
        inverter_slack=args.inverter_slack,
        node_budget=args.node_budget,
        workers=args.threads if args.threads is not None else (os.cpu_count() or 1),
        library=args.library,
    )
    result = explore(config)
    print(f"{len(result)} candidates, {len(result.frontier)} on the frontier, "
          f"selected {', '.join(str(candidate) for candidate in result.selected)}")
    return [Path(args.output) / "manifest.json"]


def _verify(args) -> int:
    library = CellLibrary.load(args.library)
    if args.netlist.endswith(".json"):
        netlist = GateNetlist.from_json(_read_json(args.netlist))
    else:
        netlist = parse_netlist(_read(args.netlist), library, _cell_map(args.cell_map))
    if args.bits is not None and args.bits != netlist.width:
        raise UnsupportedWidth(f"{args.netlist} is a {netlist.width}-bit adder, not {args.bits}")
    verdict = check_equiv(netlist, netlist.width, library, args.seed, args.vectors)
    print(verdict)
    return 0 if verdict.passed else 1


def _emit(args) -> List[Path]:
    library = CellLibrary.load(args.library)
    graph = _read_graph(args.graph)
    if args.hybrid:
        graph = hybridize(graph, CoarseModel.from_library(library)).graph
    network = build_network(graph, share_or=args.share_or)
    space = enumerate_inverter_candidates(network, args.cluster_bound)
    if not 0 <= args.inverters < len(space):
        raise InvalidConfig(
            f"inverter candidate {args.inverters} out of range 0..{len(space) - 1}"
        )
    netlist = map_cells(network, space[args.inverters], library, args.name)
    if args.size:
        netlist = size_gates(netlist, library)

    written = []
    if args.output is not None and args.output.endswith(".json"):
        written.append(_write(args.output, netlist.dumps()))
    else:
        text = emit_verilog(netlist, library, _cell_map(args.cell_map))
        if args.output is None:
            print(text, end="")
        else:
            written.append(_write(args.output, text))
    if args.timing is not None:
        report = sta(netlist, library)
        log.info("%s", report.text(netlist))
        written.append(_write(args.timing, report.dumps()))
    if args.clusters is not None:
        written.append(_write(args.clusters, space.dumps()))
    return written


def _report(args) -> List[Path]:
    print(render(args.input))
    return []


def _add_width(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--bits", type=int, metavar="N", help="adder width")
    group.add_argument("--bench", type=int, choices=BENCHMARKS,
                       help="benchmark width preset")


def _depths(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as error:
        raise argparse.ArgumentTypeError(f"expected comma separated depths, got {text!r}") \
            from error


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="show debug messages")
    common.add_argument("-q", "--quiet", action="store_true", help="show errors only")
    common.add_argument("--log", metavar="LOG_FILE", type=str, help="write the log to a file")
    common.add_argument("--manifest", metavar="FILE", type=str,
                        help="run manifest path, next to the output or in the working "
                             "directory by default")

    parser = _Parser(prog="prefixforge",
                     description="Parallel-prefix and hybrid Ling adder generation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    gen = commands.add_parser("gen", parents=[common], help="write a classical prefix graph")
    gen.add_argument("--arch", required=True, choices=[arch.value for arch in Architecture],
                     help="Kogge-Stone, Brent-Kung, Sklansky or Han-Carlson")
    _add_width(gen)
    gen.add_argument("-o", "--output", metavar="FILE", help="graph JSON, stdout if omitted")
    gen.set_defaults(handler=_gen)

    search = commands.add_parser("search", parents=[common],
                                 help="find a minimum-size prefix graph")
    _add_width(search)
    search.add_argument("--depth", type=int, help="level bound, width - 1 if omitted")
    search.add_argument("--fanout", type=int, help="fanout bound, unbounded if omitted")
    search.add_argument("--node-budget", type=int, default=200_000, metavar="N",
                        help="search expansions before returning the best graph found")
    search.add_argument("--time-budget", type=float, metavar="SECONDS",
                        help="wall-clock limit of the search")
    search.add_argument("--oracle", action="store_true",
                        help="cross-check the size with the clingo optimizer")
    search.add_argument("-o", "--output", metavar="FILE", help="graph JSON, stdout if omitted")
    search.set_defaults(handler=_search)

    hybrid = commands.add_parser("hybridize", parents=[common],
                                 help="convert the critical path to Ling form")
    hybrid.add_argument("--graph", required=True, metavar="FILE", help="prefix graph JSON")
    hybrid.add_argument("--compare", action="store_true",
                        help="print prefix-only against hybrid delay and area")
    hybrid.add_argument("--library", metavar="FILE", help="cell library JSON")
    hybrid.add_argument("-o", "--output", metavar="FILE", help="hybrid graph JSON")
    hybrid.set_defaults(handler=_hybridize)

    dse = commands.add_parser("explore", parents=[common], help="explore the design space")
    _add_width(dse)
    dse.add_argument("--depth", type=int, help="level bound, ceil(log2 n) + 1 if omitted")
    dse.add_argument("--fanout", type=int, help="fanout bound, unbounded if omitted")
    dse.add_argument("--hybrid", action="store_true", help="also explore Ling hybrids")
    dse.add_argument("--top-k", type=int, default=12, metavar="K",
                     help="selected candidates, clamped to 5..20")
    dse.add_argument("--cap", type=int, default=50_000, metavar="N", help="candidate cap")
    dse.add_argument("--seed", type=int, default=0, help="random seed")
    dse.add_argument("--sweep", type=_depths, default=[], metavar="D1,D2",
                     help="additional depth bounds")
    dse.add_argument("--p-variants", type=int, default=256, metavar="N",
                     help="propagate-network variants per topology and mode")
    dse.add_argument("--sizing", choices=list(SIZINGS), default="sized",
                     help="evaluate unsized, sized or both netlists")
    dse.add_argument("--share-or", action="store_true",
                     help="derive OR-form propagates from XOR-form ones")
    dse.add_argument("--inverter-slack", type=int, default=0, metavar="N",
                     help="extra inverters a cluster resolution may use")
    dse.add_argument("--node-budget", type=int, default=200_000, metavar="N",
                     help="topology search expansions")
    dse.add_argument("--threads", type=int, metavar="N",
                     help="worker processes, AXON_THREADS overrides")
    dse.add_argument("--library", metavar="FILE", help="cell library JSON")
    dse.add_argument("-o", "--output", required=True, metavar="DIR", help="output directory")
    dse.set_defaults(handler=_explore)

    verify = commands.add_parser("verify", parents=[common],
                                 help="check a netlist against integer addition")
    verify.add_argument("--netlist", required=True, metavar="FILE",
                        help="structural Verilog or netlist JSON")
    verify.add_argument("--bits", type=int, metavar="N", help="expected adder width")
    verify.add_argument("--seed", type=int, default=0, help="random vector seed")
    verify.add_argument("--vectors", type=int, default=RANDOM_VECTORS, metavar="N",
                        help="random vectors beyond the exhaustive width")
    verify.add_argument("--library", metavar="FILE", help="cell library JSON")
    verify.add_argument("--cell-map", metavar="FILE",
                        help="cell name map the netlist was written with")
    verify.set_defaults(handler=_verify)

    emit = commands.add_parser("emit", parents=[common], help="map a graph to a netlist")
    emit.add_argument("--graph", required=True, metavar="FILE", help="(hybrid) graph JSON")
    emit.add_argument("--hybrid", action="store_true", help="hybridize the graph first")
    emit.add_argument("--inverters", type=int, default=0, metavar="K",
                      help="inverter candidate index")
    emit.add_argument("--size", action="store_true", help="size the netlist")
    emit.add_argument("--share-or", action="store_true",
                      help="derive OR-form propagates from XOR-form ones")
    emit.add_argument("--cluster-bound", type=int, default=CLUSTER_BOUND, metavar="N",
                      help="resolutions per mismatch cluster")
    emit.add_argument("--name", metavar="MODULE", help="module name")
    emit.add_argument("--library", metavar="FILE", help="cell library JSON")
    emit.add_argument("--cell-map", metavar="FILE", help="cell and pin renaming JSON")
    emit.add_argument("--timing", metavar="FILE", help="write the timing report JSON")
    emit.add_argument("--clusters", metavar="FILE", help="write the mismatch clusters JSON")
    emit.add_argument("-o", "--output", metavar="FILE",
                      help=".v for Verilog, .json for netlist JSON, stdout if omitted")
    emit.set_defaults(handler=_emit)

    report = commands.add_parser("report", parents=[common],
                                 help="print the frontier and selection of an explore run")
    report.add_argument("--in", dest="input", required=True, metavar="DIR",
                        help="explore output directory")
    report.set_defaults(handler=_report)
    return parser


def _manifest_path(args) -> Path:
    if args.manifest is not None:
        return Path(args.manifest)
    output = getattr(args, "output", None)
    if output is None:
        return Path(f"prefixforge-{args.command}.manifest.json")
    output = Path(output)
    if not output.name:
        output = output.resolve()
    return output.with_name(output.name + ".manifest.json")


def _write_manifest(args, argv: List[str], status: int, outputs: List[Path]) -> None:
    path = _manifest_path(args)
    document = {
        "format": 1,
        "command": args.command,
        "argv": argv,
        "version": __version__,
        "status": status,
        "outputs": [str(output) for output in outputs],
    }
    _write(path, json.dumps(document, indent=2) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the command line on `argv`, `sys.argv[1:]` if not given, and return the exit code.
    """

    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)

    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    if args.quiet:
        level = logging.ERROR
    logging.basicConfig(format=LOG_FORMAT, level=level, filename=args.log, force=True)

    status = 0
    outputs: List[Path] = []
    try:
        result = args.handler(args)
        if isinstance(result, int):
            status = result
        else:
            outputs = result
    except UserError as error:
        log.error("%s", error)
        status = error.exit_code
    except PrefixForgeError as error:
        log.error("internal error: %s", error)
        status = error.exit_code

    try:
        _write_manifest(args, argv, status, outputs)
    except OutputError as error:
        log.error("%s", error)
        status = status or error.exit_code
    return status
