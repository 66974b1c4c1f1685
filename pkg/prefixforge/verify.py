"""
Functional verification of adder netlists against integer addition.

Operands travel as bit matrices, one row per vector and one column per bit, so adders of any
width are simulated and checked without fixed-width integer arithmetic.
`simulate` evaluates every instance's truth table over whole vectors of inputs at once.
`check_equiv` compares a netlist against integer addition, exhaustively for small widths and on
seeded random vectors plus a corner suite otherwise.
"""

from dataclasses import dataclass
import logging
import os
from textwrap import indent
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from .errors import XState
from .library import CellLibrary
from .netlist import GateNetlist
from .outcome import Outcome
from .quantifier import All, Finished

log = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 10
RANDOM_VECTORS = 100_000
MISMATCH_LIMIT = 10
BATCH = 1 << 16

Vectors = Tuple[np.ndarray, np.ndarray, np.ndarray]


def simulate_nets(
    netlist: GateNetlist,
    values: Mapping[str, np.ndarray],
    library: Optional[CellLibrary] = None,
) -> Dict[str, np.ndarray]:
    """
    Returns the value of every net given the values of the primary inputs.

    Raises
    ------
    XState
        If an instance reads a net that is neither an input nor driven.
    """

    library = CellLibrary.default() if library is None else library
    nets: Dict[str, np.ndarray] = {net: np.asarray(values[net], dtype=np.uint8)
                                   for net in netlist.inputs}
    for instance_id in netlist.order():
        instance = netlist.instance(instance_id)
        try:
            operands = [nets[net] for net in instance.inputs]
        except KeyError as error:
            raise XState(f"net {error.args[0]} read by instance {instance_id} has no value") \
                from error
        nets[instance.output] = library.cell(instance.cell).evaluate(operands)
    return nets


def to_bits(values, width: int) -> np.ndarray:
    """
    Returns the low `width` bits of unsigned integers as a `uint8` array with one more
    trailing axis than `values`, least significant bit first.
    """

    values = np.asarray(values, dtype=object)
    bits = np.zeros(values.shape + (width,), dtype=np.uint8)
    for index in np.ndindex(values.shape):
        value = int(values[index])
        for bit in range(width):
            bits[index + (bit,)] = (value >> bit) & 1
    return bits


def _wide(bits: np.ndarray) -> np.ndarray:
    weights = np.array([1 << bit for bit in range(bits.shape[-1])], dtype=object)
    return (bits.astype(object) * weights).sum(axis=-1)


def from_bits(bits: np.ndarray) -> np.ndarray:
    """
    Returns the unsigned integers encoded along the last axis of `bits`, least significant bit
    first. The result is `uint64` up to 64 bits and holds Python integers beyond.
    """

    bits = np.asarray(bits, dtype=np.uint8)
    width = bits.shape[-1]
    if width <= 64:
        weights = np.uint64(1) << np.arange(width, dtype=np.uint64)
        return (bits.astype(np.uint64) * weights).sum(axis=-1, dtype=np.uint64)
    return _wide(bits)


def simulate_bits(
    netlist: GateNetlist,
    a: np.ndarray,
    b: np.ndarray,
    cin: np.ndarray,
    library: Optional[CellLibrary] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Returns `(sum, cout)` of an adder netlist on operand bit matrices.

    Parameters
    ----------
    a, b
        Operand bits of shape `(..., width)`, least significant bit first.
    cin
        Carry-in bits of shape `(...)`.

    Returns
    -------
    The sum bits of shape `(..., width)` and the carry-out bits of shape `(...)`.
    """

    width = netlist.width
    values = {"cin": np.asarray(cin, dtype=np.uint8)}
    for bit in range(width):
        values[f"a[{bit}]"] = a[..., bit]
        values[f"b[{bit}]"] = b[..., bit]

    nets = simulate_nets(netlist, values, library)
    for port in netlist.outputs:
        if port not in nets:
            raise XState(f"output {port} is not driven")
    shape = np.broadcast(values["cin"], a[..., 0], b[..., 0]).shape
    total = np.stack([np.broadcast_to(nets[f"sum[{bit}]"], shape) for bit in range(width)],
                     axis=-1)
    return total, np.broadcast_to(nets["cout"], shape)


def simulate(
    netlist: GateNetlist,
    a,
    b,
    cin,
    library: Optional[CellLibrary] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Returns `(sum, cout)` of an adder netlist for operand vectors `a`, `b` and carry-in `cin`.
    Scalars and arrays of unsigned integers are accepted, Python integers for any width.
    """

    width = netlist.width
    total, cout = simulate_bits(netlist, to_bits(a, width), to_bits(b, width),
                                np.asarray(cin, dtype=np.uint8) & 1, library)
    return from_bits(total), cout


def reference_add(a: int, b: int, cin: int, width: int) -> Tuple[int, int]:
    """
    Returns `(sum, cout)` of `a + b + cin` on `width` bits.
    """

    total = a + b + cin
    return total & ((1 << width) - 1), total >> width


def reference_bits(
    a: np.ndarray,
    b: np.ndarray,
    cin: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Returns `(sum, cout)` of integer addition on operand bit matrices, shaped like
    `simulate_bits`. From 64 bits on the operands are added as Python integers.
    """

    width = a.shape[-1]
    if width < 64:
        # the sum stays below 2^64
        total = from_bits(a) + from_bits(b) + np.asarray(cin, dtype=np.uint64)
        shifts = np.arange(width + 1, dtype=np.uint64)
        bits = ((total[..., None] >> shifts) & np.uint64(1)).astype(np.uint8)
    else:
        total = _wide(a) + _wide(b) + np.asarray(cin, dtype=object)
        bits = np.stack([(total >> bit) & 1 for bit in range(width + 1)], axis=-1)
        bits = bits.astype(np.uint8)
    return bits[..., :width], bits[..., width]


def corner_vectors(width: int) -> Vectors:
    """
    Returns the corner suite as bit matrices: zeros, ones, alternating patterns, single-bit
    walks on either operand and carry-chain maximizers, each with both carry-in values.
    """

    mask = (1 << width) - 1
    alternating = int("10" * width, 2) & mask
    pairs = [
        (0, 0), (mask, mask), (mask, 0), (0, mask),
        (alternating, alternating ^ mask), (alternating ^ mask, alternating),
        (alternating, alternating), (mask, 1), (1, mask),
    ]
    for bit in range(width):
        pairs.append((1 << bit, 0))
        pairs.append((0, 1 << bit))
        pairs.append((1 << bit, mask))
    a = to_bits([pair[0] for pair in pairs] * 2, width)
    b = to_bits([pair[1] for pair in pairs] * 2, width)
    cin = np.array([0] * len(pairs) + [1] * len(pairs), dtype=np.uint8)
    return a, b, cin


def random_vectors(width: int, count: int, seed: int = 0) -> Vectors:
    """
    Returns `count` seeded random operand pairs as bit matrices and their carry-ins.
    Every bit is drawn independently and uniformly.
    """

    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, size=(count, width), dtype=np.uint8)
    b = rng.integers(0, 2, size=(count, width), dtype=np.uint8)
    cin = rng.integers(0, 2, size=count, dtype=np.uint8)
    return a, b, cin


def exhaustive_vectors(width: int) -> Iterator[Vectors]:
    """
    Yields all `2^(2 width + 1)` input combinations as bit matrices in batches.
    """

    total = 1 << (2 * width + 1)
    shifts = np.arange(2 * width + 1, dtype=np.uint64)
    for start in range(0, total, BATCH):
        index = np.arange(start, min(start + BATCH, total), dtype=np.uint64)
        bits = ((index[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
        yield bits[:, :width], bits[:, width:2 * width], bits[:, 2 * width]


def _value(bits: np.ndarray) -> int:
    return sum(int(bit) << index for index, bit in enumerate(bits))


@dataclass(frozen=True)
class Mismatch:
    """
    One vector on which a netlist disagrees with the reference adder.
    """

    a: int
    b: int
    cin: int
    expected_sum: int
    expected_cout: int
    sum: int
    cout: int

    def __str__(self):
        return (f"a={self.a:#x} b={self.b:#x} cin={self.cin}: expected sum={self.expected_sum:#x} "
                f"cout={self.expected_cout}, got sum={self.sum:#x} cout={self.cout}")


@dataclass(frozen=True)
class EquivVerdict:
    """
    The result of `check_equiv`.

    Parameters
    ----------
    mode
        `exhaustive` or `randomized`.
    vectors
        The number of vectors simulated.
    mismatches
        The first mismatches found, at most ten.
    outcome
        `T!` for an exhaustive pass, `T?` for a sampled pass and `F!` for any mismatch.
    """

    mode: str
    vectors: int
    mismatches: Tuple[Mismatch, ...]
    outcome: Outcome

    def __str__(self):
        lines = [f"[{self.outcome}] {self.mode} equivalence: "
                 f"{'pass' if self.passed else 'FAIL'} on {self.vectors} vectors"]
        lines.extend(indent(str(mismatch), 4 * " ") for mismatch in self.mismatches)
        return os.linesep.join(lines)

    @property
    def passed(self) -> bool:
        """
        Whether no mismatch was found.
        """

        return self.outcome.value()

    def assert_(self) -> None:
        """
        Raise an `AssertionError` unless the netlist passed.
        """

        if not self.passed:
            raise AssertionError("The following check has failed." + os.linesep
                                 + indent(str(self), 4 * " "))

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "vectors": self.vectors,
            "passed": self.passed,
            "outcome": str(self.outcome),
            "mismatches": [str(mismatch) for mismatch in self.mismatches],
        }


def _compare(
    netlist: GateNetlist,
    batches: Iterable[Vectors],
    library: Optional[CellLibrary],
    stop_early: bool,
) -> Tuple[All, List[Mismatch]]:
    mismatches: List[Mismatch] = []
    quantifier = All()
    for a, b, cin in batches:
        got_sum, got_cout = simulate_bits(netlist, a, b, cin, library)
        expected_sum, expected_cout = reference_bits(a, b, cin)
        agrees = (got_sum == expected_sum).all(axis=-1) & (got_cout == expected_cout)
        quantifier.consume(agrees)
        for index in np.flatnonzero(~agrees)[:MISMATCH_LIMIT - len(mismatches)]:
            mismatches.append(Mismatch(
                _value(a[index]), _value(b[index]), int(cin[index]),
                _value(expected_sum[index]), int(expected_cout[index]),
                _value(got_sum[index]), int(got_cout[index]),
            ))
        if stop_early and len(mismatches) >= MISMATCH_LIMIT:
            break
    log.debug("%s after %d vectors", quantifier, quantifier.seen())
    return quantifier, mismatches


def _batched(vectors: Vectors, size: int = BATCH) -> Iterator[Vectors]:
    a, b, cin = vectors
    for start in range(0, len(cin), size):
        yield a[start:start + size], b[start:start + size], cin[start:start + size]


def check_equiv(
    netlist: GateNetlist,
    width: Optional[int] = None,
    library: Optional[CellLibrary] = None,
    seed: int = 0,
    vectors: int = RANDOM_VECTORS,
    stop_early: bool = True,
) -> EquivVerdict:
    """
    Compare `netlist` with integer addition.

    Widths up to 10 are checked on all `2^(2n+1)` inputs, wider adders on `vectors` seeded
    random vectors plus `corner_vectors`. Any width is supported.

    Parameters
    ----------
    netlist
        The adder netlist.
    width
        The adder width, that of the netlist if not given.
    seed
        The random vector seed.
    vectors
        The number of random vectors.
    stop_early
        Stop once ten mismatches are recorded.
    """

    width = netlist.width if width is None else width
    if width <= EXHAUSTIVE_LIMIT:
        quantifier, mismatches = _compare(netlist, exhaustive_vectors(width), library, stop_early)
        outcome = Finished(quantifier).outcome()
        return EquivVerdict("exhaustive", quantifier.seen(), tuple(mismatches), outcome)

    batches: List[Vectors] = [corner_vectors(width)]
    batches.extend(_batched(random_vectors(width, vectors, seed)))
    quantifier, mismatches = _compare(netlist, batches, library, stop_early)
    return EquivVerdict("randomized", quantifier.seen(), tuple(mismatches), quantifier.outcome())


def quick_check(
    netlist: GateNetlist,
    library: Optional[CellLibrary] = None,
    seed: int = 0,
    vectors: int = 256,
) -> bool:
    """
    Returns whether `netlist` agrees with integer addition on the corner suite and `vectors`
    seeded random vectors.
    """

    batches = [corner_vectors(netlist.width), random_vectors(netlist.width, vectors, seed)]
    quantifier, _ = _compare(netlist, batches, library, True)
    return not quantifier.outcome().is_certainly_false()
