"""
Cell models and the generic cell library.

All electrical quantities are normalized: a cell of size `s` presents `g * s` unit loads on
each input pin and drives with resistance `r_unit / s`. Stage delays are reported in FO1, the
delay of a ×1 inverter driving one identical inverter.
"""

from dataclasses import dataclass, field
import json
import os
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import LibraryError, UnknownCell

DEFAULT_PINS = ("A", "B", "C", "D", "E", "F")

DUALS = {
    "AOI21": "OAI21",
    "OAI21": "AOI21",
    "AOI22": "OAI22",
    "OAI22": "AOI22",
    "NAND2": "NOR2",
    "NOR2": "NAND2",
    "XOR2": "XNOR2",
    "XNOR2": "XOR2",
}


def truth_table(inputs: int, function: Callable[..., bool]) -> str:
    """
    Returns the truth table string of `function`.
    Character `k` holds the output for the input combination whose pin `p` carries bit `p` of
    `k`, so the first pin is the least significant.
    """

    rows = []
    for index in range(1 << inputs):
        bits = [(index >> pin) & 1 for pin in range(inputs)]
        rows.append("1" if function(*bits) else "0")
    return "".join(rows)


@dataclass(frozen=True)
class CellModel:
    """
    A combinational single-output cell.

    Parameters
    ----------
    name
        The cell name, e.g. `AOI21`.
    inputs
        The number of input pins.
    function
        The truth table, see `truth_table`.
    inverting
        Whether the cell inverts (every static CMOS stage does).
    g
        The logical effort per input pin.
    p_par
        The parasitic delay in unit-inverter delays.
    t_count
        The transistor count of size ×1.
    sizes
        The available discrete sizes.
    pins
        The input pin names, `A`, `B`, ... by default.
    output
        The output pin name.
    r_unit
        The drive resistance of size ×1.
    """

    name: str
    inputs: int
    function: str
    inverting: bool
    g: float
    p_par: float
    t_count: int
    sizes: Tuple[int, ...] = (1, 2, 4, 8)
    pins: Tuple[str, ...] = field(default=())
    output: str = "Y"
    r_unit: float = 1.0

    def __post_init__(self):
        if not self.pins:
            object.__setattr__(self, "pins", DEFAULT_PINS[:self.inputs])
        object.__setattr__(self, "sizes", tuple(sorted(self.sizes)))
        object.__setattr__(self, "pins", tuple(self.pins))

    def c_in(self, size: int = 1) -> float:
        """
        Returns the input capacitance of one pin.
        """

        return self.g * size

    def r_dr(self, size: int = 1) -> float:
        """
        Returns the drive resistance.
        """

        return self.r_unit / size

    def evaluate(self, values: Sequence):
        """
        Evaluate the truth table on `values`, one `0`/`1` integer or integer array per pin.
        """

        table = np.array([int(bit) for bit in self.function], dtype=np.uint8)
        index = 0
        for pin, value in enumerate(values):
            index = index + (np.asarray(value, dtype=np.int64) << pin)
        return table[index]

    def problems(self) -> Iterable[str]:
        """
        Yields a description of every malformed field.
        """

        if self.inputs < 1:
            yield f"{self.name}: needs at least one input"
        if len(self.function) != 1 << self.inputs or set(self.function) - {"0", "1"}:
            yield f"{self.name}: function must be a 0/1 string of length {1 << self.inputs}"
        if self.t_count <= 0:
            yield f"{self.name}: t_count must be positive"
        if self.g <= 0 or self.p_par < 0 or self.r_unit <= 0:
            yield f"{self.name}: electrical parameters must be positive"
        if self.inputs > 1 and self.g < 1:
            yield f"{self.name}: logical effort below that of an inverter"
        if not self.sizes or min(self.sizes) < 1:
            yield f"{self.name}: sizes must be positive"
        if len(self.pins) != self.inputs or len(set(self.pins)) != self.inputs:
            yield f"{self.name}: needs {self.inputs} distinct pin names"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "inputs": self.inputs,
            "function": self.function,
            "inverting": self.inverting,
            "g": self.g,
            "p_par": self.p_par,
            "t_count": self.t_count,
            "sizes": list(self.sizes),
            "pins": list(self.pins),
            "output": self.output,
            "r_unit": self.r_unit,
        }

    @classmethod
    def from_json(cls, document: Mapping) -> "CellModel":
        try:
            return cls(
                name=document["name"],
                inputs=int(document["inputs"]),
                function=str(document["function"]),
                inverting=bool(document["inverting"]),
                g=float(document["g"]),
                p_par=float(document["p_par"]),
                t_count=int(document["t_count"]),
                sizes=tuple(int(size) for size in document.get("sizes", (1, 2, 4, 8))),
                pins=tuple(document.get("pins", ())),
                output=document.get("output", "Y"),
                r_unit=float(document.get("r_unit", 1.0)),
            )
        except (KeyError, TypeError, ValueError) as error:
            raise LibraryError(f"malformed cell entry {dict(document)!r}: {error}") from error


def _default_cells() -> Tuple[CellModel, ...]:
    return (
        CellModel("INV", 1, truth_table(1, lambda a: not a), True, 1.0, 1.0, 2),
        CellModel("NAND2", 2, truth_table(2, lambda a, b: not (a and b)), True, 4 / 3, 2.0, 4),
        CellModel("NOR2", 2, truth_table(2, lambda a, b: not (a or b)), True, 5 / 3, 2.0, 4),
        CellModel("AOI21", 3, truth_table(3, lambda a, b, c: not ((a and b) or c)),
                  True, 2.0, 3.0, 6),
        CellModel("OAI21", 3, truth_table(3, lambda a, b, c: not ((a or b) and c)),
                  True, 2.0, 3.0, 6),
        CellModel("AOI22", 4, truth_table(4, lambda a, b, c, d: not ((a and b) or (c and d))),
                  True, 7 / 3, 4.0, 8),
        CellModel("OAI22", 4, truth_table(4, lambda a, b, c, d: not ((a or b) and (c or d))),
                  True, 7 / 3, 4.0, 8),
        CellModel("XOR2", 2, truth_table(2, lambda a, b: a != b), False, 4.0, 4.0, 12),
        CellModel("XNOR2", 2, truth_table(2, lambda a, b: a == b), True, 4.0, 4.0, 12),
    )


class CellLibrary:
    """
    A set of cells with an FO1 reference cell.

    The FO1 self-check runs on construction: the reference cell of size ×1 driving one identical
    pin must take exactly one FO1.

    Parameters
    ----------
    cells
        The cell models.
    fo1_reference
        The name of the reference inverter.

    Raises
    ------
    LibraryError
        If a cell is malformed, names repeat, or the self-check fails.
    """

    def __init__(self, cells: Iterable[CellModel], fo1_reference: str = "INV") -> None:
        self.__cells: Dict[str, CellModel] = {}
        problems = []
        for cell in cells:
            if cell.name in self.__cells:
                problems.append(f"{cell.name}: defined twice")
            problems.extend(cell.problems())
            self.__cells[cell.name] = cell
        if fo1_reference not in self.__cells:
            problems.append(f"FO1 reference cell {fo1_reference} is missing")
        elif self.__cells[fo1_reference].inputs != 1:
            problems.append(f"FO1 reference cell {fo1_reference} must have one input")
        if problems:
            raise LibraryError("invalid cell library:" + os.linesep + os.linesep.join(problems))

        self.__reference = fo1_reference
        reference = self.__cells[fo1_reference]
        self.__fo1 = reference.p_par + reference.r_dr(1) * reference.c_in(1)
        calibrated = self.stage(fo1_reference, 1, reference.c_in(1))
        if self.__fo1 <= 0 or abs(calibrated - 1.0) > 1e-9:
            raise LibraryError(f"FO1 self-check failed: reference stage is {calibrated}")

    @classmethod
    def default(cls) -> "CellLibrary":
        """
        Returns the built-in generic library.
        """

        return cls(_default_cells(), "INV")

    def __repr__(self):
        return f"{self.__class__.__name__}({sorted(self.__cells)}, {self.__reference!r})"

    def __contains__(self, name: str) -> bool:
        return name in self.__cells

    def __iter__(self):
        return iter(self.__cells.values())

    @property
    def fo1_reference(self) -> str:
        return self.__reference

    def fo1(self) -> float:
        """
        Returns the FO1 delay in raw library units, the divisor of every stage delay.
        """

        return self.__fo1

    def cell(self, name: str) -> CellModel:
        """
        Returns the cell `name`.

        Raises
        ------
        UnknownCell
            If the library has no such cell.
        """

        try:
            return self.__cells[name]
        except KeyError as error:
            raise UnknownCell(f"cell {name} is not in the library") from error

    def stage(self, name: str, size: int, load: float) -> float:
        """
        Returns the stage delay in FO1 of cell `name` of `size` driving `load` unit loads.
        """

        cell = self.cell(name)
        return (cell.p_par + cell.r_dr(size) * load) / self.__fo1

    def input_drive(self, load: float) -> float:
        """
        Returns the arrival time of a primary input driving `load`, modelled as an ideal ×1
        reference inverter without parasitic delay.
        """

        return self.cell(self.__reference).r_dr(1) * load / self.__fo1

    def to_json(self) -> dict:
        return {
            "cells": [cell.to_json() for cell in self.__cells.values()],
            "fo1_reference": self.__reference,
        }

    @classmethod
    def from_json(cls, document: Mapping) -> "CellLibrary":
        if not isinstance(document, Mapping) or not isinstance(document.get("cells"), list):
            raise LibraryError("a cell library needs a list of cells")
        cells = [CellModel.from_json(entry) for entry in document["cells"]]
        return cls(cells, document.get("fo1_reference", "INV"))

    @classmethod
    def load(cls, path: Optional[str] = None) -> "CellLibrary":
        """
        Load a library from a JSON file, or the default library if `path` is `None`.
        """

        if path is None:
            return cls.default()
        try:
            with open(path, encoding="utf-8") as file:
                document = json.load(file)
        except (OSError, json.JSONDecodeError) as error:
            raise LibraryError(f"cannot read cell library {path}: {error}") from error
        return cls.from_json(document)
