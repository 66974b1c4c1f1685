# pylint: disable=import-outside-toplevel
# pylint: disable=missing-module-docstring
# pylint: disable=missing-class-docstring
# pylint: disable=missing-function-docstring
import pytest


def test_fo1_calibration():
    from prefixforge.library import CellLibrary
    library = CellLibrary.default()

    assert library.fo1_reference == "INV"
    assert library.fo1() == pytest.approx(2.0)
    assert library.stage("INV", 1, library.cell("INV").c_in(1)) == pytest.approx(1.0)
    assert library.stage("INV", 1, 4 * library.cell("INV").c_in(1)) == pytest.approx(2.5)
    assert library.stage("INV", 2, 4 * library.cell("INV").c_in(1)) == pytest.approx(1.5)


def test_truth_tables():
    from prefixforge.library import CellLibrary
    library = CellLibrary.default()

    assert library.cell("NAND2").function == "1110"
    assert library.cell("AOI21").evaluate([1, 1, 0]) == 0
    assert library.cell("AOI21").evaluate([0, 1, 0]) == 1
    assert library.cell("OAI22").evaluate([0, 0, 1, 1]) == 1
    assert library.cell("XNOR2").evaluate([1, 1]) == 1
    assert library.cell("XOR2").evaluate([[0, 1], [1, 1]]).tolist() == [1, 0]


def test_unknown_cell():
    from prefixforge.errors import UnknownCell
    from prefixforge.library import CellLibrary

    with pytest.raises(UnknownCell):
        CellLibrary.default().cell("MUX2")


def test_json_round_trip(tmp_path):
    import json
    from prefixforge.library import CellLibrary

    library = CellLibrary.default()
    path = tmp_path / "cells.json"
    path.write_text(json.dumps(library.to_json()), encoding="utf-8")

    loaded = CellLibrary.load(str(path))
    assert loaded.to_json() == library.to_json()
    assert "AOI22" in loaded


def test_malformed_library():
    from prefixforge.errors import LibraryError
    from prefixforge.library import CellLibrary, CellModel

    with pytest.raises(LibraryError):
        CellLibrary.from_json({"cells": "INV"})
    with pytest.raises(LibraryError):
        CellLibrary([CellModel("NAND2", 2, "1110", True, 4 / 3, 2.0, 4)])
    with pytest.raises(LibraryError):
        CellLibrary([CellModel("INV", 1, "101", True, 1.0, 1.0, 2)])


def test_missing_library_file(tmp_path):
    from prefixforge.errors import LibraryError
    from prefixforge.library import CellLibrary

    with pytest.raises(LibraryError):
        CellLibrary.load(str(tmp_path / "missing.json"))
