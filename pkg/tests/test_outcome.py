# pylint: disable=import-outside-toplevel
# pylint: disable=missing-module-docstring
# pylint: disable=missing-class-docstring
# pylint: disable=missing-function-docstring
import pytest


@pytest.mark.parametrize("value,is_certain,text", [
    (False, False, "F?"),
    (False, True,  "F!"),
    (True,  False, "T?"),
    (True,  True,  "T!"),
])
def test_encoding(value, is_certain, text):
    from prefixforge.outcome import Outcome
    outcome = Outcome(value, is_certain)

    assert outcome.as_tuple() == (value, is_certain)
    assert str(outcome) == text
    assert outcome.is_certainly_true()  == (value and is_certain)
    assert outcome.is_certainly_false() == (is_certain and not value)
    assert outcome == Outcome(value, is_certain)
    assert len({outcome, Outcome(value, is_certain)}) == 1


def test_sampling_never_proves_a_pass():
    import numpy as np
    from prefixforge.quantifier import All

    quantifier = All()
    for _ in range(4):
        outcome = quantifier.consume(np.ones(1000, dtype=bool))
        assert not outcome.is_certain()
    assert str(outcome) == "T?"

    assert quantifier.consume(np.array([True, False])).is_certainly_false()
    assert quantifier.consume(np.ones(10, dtype=bool)).is_certainly_false()


def test_verdicts_carry_the_streamed_outcome():
    from prefixforge.classical import make_classical
    from prefixforge.network import build_network
    from prefixforge.outcome import Outcome
    from prefixforge.polarity import enumerate_inverter_candidates
    from prefixforge.techmap import map_cells
    from prefixforge.verify import check_equiv

    def adder(width):
        network = build_network(make_classical("sk", width))
        return map_cells(network, enumerate_inverter_candidates(network)[0])

    narrow = check_equiv(adder(3))
    assert narrow.outcome == Outcome(True, True)
    assert narrow.passed

    wide = check_equiv(adder(12), vectors=64)
    assert wide.outcome == Outcome(True, False)
    assert wide.passed
    assert str(wide).startswith("[T?] randomized equivalence: pass")


def test_solver_consumers_start_undecided():
    from prefixforge.consumer import Collect, Minimum

    assert str(Minimum().outcome()) == "F?"
    assert str(Collect(3).outcome()) == "F?"
    assert str(Collect(0).outcome()) == "F!"
