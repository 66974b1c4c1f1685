"""
Emission and parsing of the structural Verilog subset.

The subset holds one module with vector or scalar port declarations, scalar wire declarations
and cell instances with named pin connections. An optional attribute `(* size = k, src = "..." *)`
in front of an instance carries its drive size and provenance, so that `parse_netlist` inverts
`emit_verilog` exactly.
"""

from dataclasses import dataclass
import logging
import os
import re
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import pyparsing as pp

from .errors import MultipleDrivers, NetlistSyntaxError, UnmappedCell
from .library import CellLibrary
from .netlist import GateNetlist, Instance

log = logging.getLogger(__name__)

RESERVED = "module endmodule input output inout wire reg assign always initial begin end"

_BIT = re.compile(r"^(?P<base>[A-Za-z_][A-Za-z0-9_$]*)\[(?P<index>\d+)\]$")


def _cell_names(cell_name_map: Optional[Mapping[str, str]]) -> Tuple[Dict[str, str],
                                                                      Dict[Tuple[str, str], str]]:
    cells: Dict[str, str] = {}
    pins: Dict[Tuple[str, str], str] = {}
    for key, value in (cell_name_map or {}).items():
        if "." in key:
            cell, pin = key.split(".", 1)
            pins[(cell, pin)] = value
        else:
            cells[key] = value
    return cells, pins


def _buses(nets: Sequence[str]) -> List[Tuple[str, Optional[Tuple[int, int]]]]:
    """
    Groups bit-selected nets such as `a[0]`, `a[1]` into buses, in order of first appearance.
    """

    buses: Dict[str, Optional[List[int]]] = {}
    for net in nets:
        match = _BIT.match(net)
        if match is None:
            buses[net] = None
        else:
            buses.setdefault(match["base"], []).append(int(match["index"]))
    return [
        (base, None if indices is None else (max(indices), min(indices)))
        for base, indices in buses.items()
    ]


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_verilog(
    netlist: GateNetlist,
    library: Optional[CellLibrary] = None,
    cell_name_map: Optional[Mapping[str, str]] = None,
) -> str:
    """
    Returns the structural Verilog text of `netlist`, instances in id order.

    Parameters
    ----------
    netlist
        The netlist.
    library
        The library the netlist's cells come from, for their pin names.
    cell_name_map
        Renames cells (key `CELL`) and pins (key `CELL.PIN`). When given, every cell used must
        be renamed; the identity map keeps the library names.

    Raises
    ------
    UnmappedCell
        If `cell_name_map` is given and lacks a used cell.
    """

    library = CellLibrary.default() if library is None else library
    cells, pins = _cell_names(cell_name_map)
    if cell_name_map is not None:
        missing = sorted({instance.cell for instance in netlist.instances} - set(cells))
        if missing:
            raise UnmappedCell(f"cell name map has no entry for {', '.join(missing)}")

    inputs, outputs = _buses(netlist.inputs), _buses(netlist.outputs)
    ports = [base for base, _ in inputs + outputs]
    lines = [
        "// structural netlist written by prefixforge",
        f"module {netlist.name} ({', '.join(ports)});",
    ]
    for direction, buses in (("input", inputs), ("output", outputs)):
        for base, bits in buses:
            declared = f"[{bits[0]}:{bits[1]}] " if bits is not None else ""
            lines.append(f"  {direction} {declared}{base};")

    ports_nets = set(netlist.inputs) | set(netlist.outputs)
    for instance in netlist.instances:
        if instance.output not in ports_nets:
            lines.append(f"  wire {instance.output};")

    for instance in sorted(netlist.instances, key=lambda instance: instance.id):
        cell = library.cell(instance.cell)
        attributes = []
        if instance.size != 1:
            attributes.append(f"size = {instance.size}")
        if instance.provenance:
            attributes.append(f"src = {_quote(instance.provenance)}")
        if attributes:
            lines.append(f"  (* {', '.join(attributes)} *)")
        connections = [
            f".{pins.get((cell.name, pin), pin)}({net})"
            for pin, net in zip(cell.pins + (cell.output,), instance.inputs + (instance.output,))
        ]
        name = cells.get(cell.name, cell.name)
        lines.append(f"  {name} u{instance.id} ({', '.join(connections)});")
    lines.append("endmodule")
    return os.linesep.join(lines) + os.linesep


@dataclass(frozen=True)
class _Declaration:
    direction: str
    nets: Tuple[str, ...]


@dataclass(frozen=True)
class _Statement:
    cell: str
    name: str
    attributes: Tuple[Tuple[str, object], ...]
    connections: Tuple[Tuple[str, str], ...]
    line: int
    column: int


def _expand(tokens) -> Tuple[str, ...]:
    names = list(tokens.names)
    if "msb" not in tokens:
        return tuple(names)
    lo, hi = sorted((tokens.msb, tokens.lsb))
    return tuple(f"{name}[{bit}]" for name in names for bit in range(lo, hi + 1))


def _grammar() -> pp.ParserElement:
    lpar, rpar, lbrack, rbrack, semi, colon, dot, equals = map(pp.Suppress, "()[];:.=")
    reserved = pp.MatchFirst([pp.Keyword(word) for word in RESERVED.split()])
    identifier = pp.Combine(~reserved + pp.Regex(r"[A-Za-z_][A-Za-z0-9_$]*"))
    number = pp.Word(pp.nums).set_parse_action(lambda tokens: int(tokens[0]))
    net = pp.Combine(identifier + pp.Opt("[" + pp.Word(pp.nums) + "]"))
    bits = lbrack + number("msb") + colon + number("lsb") + rbrack

    port = (
        pp.one_of("input output", as_keyword=True)("direction")
        + pp.Opt(bits) + pp.Group(pp.DelimitedList(identifier))("names") + semi
    )
    port.set_parse_action(lambda tokens: _Declaration(tokens.direction, _expand(tokens)))
    wire = (
        pp.Keyword("wire") + pp.Opt(bits) + pp.Group(pp.DelimitedList(identifier))("names")
        + semi
    )
    wire.set_parse_action(lambda tokens: _Declaration("wire", _expand(tokens)))

    value = number | pp.QuotedString('"', esc_char="\\")
    attribute = pp.Group(identifier("key") + pp.Opt(equals + value("value")))
    attributes = pp.Suppress("(*") + pp.DelimitedList(attribute) + pp.Suppress("*)")
    connection = pp.Group(dot + identifier("pin") + lpar + net("net") + rpar)
    instance = (
        pp.Opt(pp.Group(attributes)("attributes")) + identifier("cell") + identifier("instance")
        + lpar + pp.Group(pp.DelimitedList(connection))("connections") + rpar + semi
    )

    def statement(string, location, tokens):
        found = tokens.attributes if "attributes" in tokens else []
        return _Statement(
            tokens.cell,
            tokens.instance,
            tuple((entry.key, entry.value if "value" in entry else 1) for entry in found),
            tuple((entry.pin, entry.net) for entry in tokens.connections),
            pp.lineno(location, string),
            pp.col(location, string),
        )

    instance.set_parse_action(statement)

    module = (
        pp.Keyword("module") + identifier("module")
        + pp.Opt(lpar + pp.Opt(pp.DelimitedList(identifier)) + rpar).suppress() + semi
        + pp.Group(pp.ZeroOrMore(port | wire | instance))("body")
        + pp.Keyword("endmodule")
    )
    module.ignore(pp.cpp_style_comment)
    return module


_GRAMMAR = _grammar()


def parse_netlist(
    text: str,
    library: Optional[CellLibrary] = None,
    cell_name_map: Optional[Mapping[str, str]] = None,
) -> GateNetlist:
    """
    Parse the structural Verilog subset written by `emit_verilog`.

    Parameters
    ----------
    text
        The Verilog text.
    library
        The library the cells are looked up in.
    cell_name_map
        The map the text was emitted with, inverted to recover library names.

    Raises
    ------
    NetlistSyntaxError
        If the text leaves the subset, or an instance misses or repeats a pin.
    UnknownCell
        If an instance names a cell outside the library.
    MultipleDrivers
        If a net is driven twice or an instance drives an input port.
    """

    library = CellLibrary.default() if library is None else library
    cells, pins = _cell_names(cell_name_map)
    cell_names = {renamed: cell for cell, renamed in cells.items()}
    pin_names = {(cell, renamed): pin for (cell, pin), renamed in pins.items()}

    try:
        result = _GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseException as error:
        raise NetlistSyntaxError(error.msg, error.lineno, error.col) from error

    inputs: List[str] = []
    outputs: List[str] = []
    instances: List[Instance] = []
    driven: Dict[str, int] = {}
    for item in result["body"]:
        if isinstance(item, _Declaration):
            if item.direction == "input":
                inputs.extend(item.nets)
            elif item.direction == "output":
                outputs.extend(item.nets)
            continue

        cell = library.cell(cell_names.get(item.cell, item.cell))
        connected: Dict[str, str] = {}
        for pin, net in item.connections:
            pin = pin_names.get((cell.name, pin), pin)
            if pin in connected:
                raise NetlistSyntaxError(f"pin {pin} of {item.name} connected twice",
                                         item.line, item.column)
            connected[pin] = net
        expected = cell.pins + (cell.output,)
        if set(connected) != set(expected):
            raise NetlistSyntaxError(
                f"{item.name} must connect pins {', '.join(expected)} of {cell.name}",
                item.line, item.column,
            )

        output = connected[cell.output]
        if output in driven or output in inputs:
            raise MultipleDrivers(f"net {output} driven again by {item.name} at line {item.line}")
        driven[output] = len(instances)
        attributes = dict(item.attributes)
        instances.append(Instance(
            len(instances),
            cell.name,
            int(attributes.get("size", 1)),
            tuple(connected[pin] for pin in cell.pins),
            output,
            str(attributes.get("src", "")),
        ))

    width = sum(1 for net in inputs if net.startswith("a["))
    log.debug("parsed module %s with %d instances", result["module"], len(instances))
    return GateNetlist(width, instances, inputs, outputs, result["module"])
