"""
Generators for the classical prefix topologies.

Each generator describes the power-of-two structure by its split points; widths that are not a
power of two take the next larger structure and keep only what the first `n` columns need.
"""

from enum import Enum
from typing import Callable, Dict, Tuple

from .errors import UnsupportedWidth
from .graph import PrefixGraph, min_depth


class Architecture(str, Enum):
    """
    The classical topologies, named by their command-line abbreviation.
    """

    KOGGE_STONE = "ks"
    BRENT_KUNG = "bk"
    SKLANSKY = "sk"
    HAN_CARLSON = "hc"


Splits = Dict[Tuple[int, int], int]


def _kogge_stone(size: int) -> Splits:
    splits: Splits = {}
    for level in range(1, min_depth(size) + 1):
        reach = 1 << (level - 1)
        for bit in range(reach, size):
            splits[(bit, max(0, bit - 2 * reach + 1))] = bit - reach
    return splits


def _sklansky(size: int) -> Splits:
    splits: Splits = {}
    for level in range(1, min_depth(size) + 1):
        half = 1 << (level - 1)
        for bit in range(size):
            if bit & half:
                base = (bit >> level) << level
                splits[(bit, base)] = ((bit >> (level - 1)) << (level - 1)) - 1
    return splits


def _brent_kung(size: int) -> Splits:
    splits: Splits = {}
    for level in range(1, min_depth(size) + 1):
        block = 1 << level
        for bit in range(block - 1, size, block):
            splits[(bit, bit - block + 1)] = bit - block // 2
    for bit in range(1, size):
        lowest = (bit + 1) & -(bit + 1)
        if lowest != bit + 1:
            splits[(bit, 0)] = bit - lowest
    return splits


def _han_carlson(size: int) -> Splits:
    splits: Splits = {}
    for bit in range(1, size, 2):
        splits[(bit, bit - 1)] = bit - 1
    for level in range(2, min_depth(size) + 1):
        reach = 1 << (level - 1)
        for bit in range(reach + 1, size, 2):
            splits[(bit, max(0, bit - 2 * reach + 1))] = bit - reach
    for bit in range(2, size, 2):
        splits[(bit, 0)] = bit - 1
    return splits


_GENERATORS: Dict[Architecture, Callable[[int], Splits]] = {
    Architecture.KOGGE_STONE: _kogge_stone,
    Architecture.BRENT_KUNG: _brent_kung,
    Architecture.SKLANSKY: _sklansky,
    Architecture.HAN_CARLSON: _han_carlson,
}


def make_classical(arch: Architecture, width: int) -> PrefixGraph:
    """
    Returns the classical prefix graph `arch` of `width` columns.

    Parameters
    ----------
    arch
        The topology, an `Architecture` or its abbreviation.
    width
        The number of bit columns, at least 1.

    Raises
    ------
    UnsupportedWidth
        If `width` is smaller than 1.
    """

    arch = Architecture(arch)
    if width < 1:
        raise UnsupportedWidth(f"adder width must be at least 1, got {width}")
    size = 1 << min_depth(width)
    return PrefixGraph.from_splits(width, _GENERATORS[arch](size))
