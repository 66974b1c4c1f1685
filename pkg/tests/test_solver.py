# pylint: disable=import-outside-toplevel
# pylint: disable=missing-module-docstring
# pylint: disable=missing-class-docstring
# pylint: disable=missing-function-docstring


def test_clingo_collect():
    from prefixforge.consumer import Collect
    from prefixforge.solver import Clingo

    solver = Clingo(["0"], "split(2,0,1). split(1,0,0). other(1).")
    consumer = Collect()

    solver.solve(consumer)
    assert consumer.outcome().is_certainly_true()
    assert consumer.models() == [{(2, 0): 1, (1, 0): 0}]


def test_clingo_collect_all():
    from prefixforge.consumer import Collect
    from prefixforge.solver import Clingo

    solver = Clingo(["0"], "{ split(1,0,0) }. #show split/3.")
    consumer = Collect()

    solver.solve(consumer)
    assert consumer.outcome().is_certainly_true()
    assert sorted(consumer.models(), key=len) == [{}, {(1, 0): 0}]


def test_clingo_collect_limit():
    from prefixforge.consumer import Collect
    from prefixforge.solver import Clingo

    solver = Clingo(["0"], "{ split(1,0,0); split(2,0,1) }.")
    consumer = Collect(1)

    solver.solve(consumer)
    assert consumer.outcome().is_certainly_true()
    assert len(consumer.models()) == 1


def test_clingo_collect_nothing():
    from prefixforge.consumer import Collect
    from prefixforge.solver import Clingo

    consumer = Collect(0)
    assert consumer.outcome().is_certainly_false()

    Clingo(["0"], "split(1,0,0).").solve(consumer)
    assert consumer.models() == []


def test_clingo_unsatisfiable():
    from prefixforge.consumer import Collect
    from prefixforge.solver import Clingo

    consumer = Collect()
    Clingo(["0"], "a. :- a.").solve(consumer)
    assert consumer.outcome().is_certainly_false()


def test_clingo_minimum():
    from prefixforge.consumer import Minimum
    from prefixforge.solver import Clingo

    program = """
        1 { split(1,0,0); split(2,0,1); split(3,0,2) }.
        #minimize { 1,H,L: split(H,L,M) }.
        #show split/3.
    """
    consumer = Minimum()
    Clingo(["--opt-mode=opt"], program).solve(consumer)

    assert consumer.outcome().is_certainly_true()
    assert consumer.cost() == [1]
    assert len(consumer.best()) == 1
