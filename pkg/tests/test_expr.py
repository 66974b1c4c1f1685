# pylint: disable=import-outside-toplevel
# pylint: disable=missing-module-docstring
# pylint: disable=missing-class-docstring
# pylint: disable=missing-function-docstring


def test_scalar_evaluation():
    from prefixforge.expr import And, Const, Or, Var, Xor

    a, b = Var("a"), Var("b")
    env = {"a": 1, "b": 0}
    assert And(a, b).evaluate(env) == 0
    assert Or(a, b).evaluate(env) == 1
    assert Xor(a, b, Const(True)).evaluate(env) == 0
    assert Xor(a, b).evaluate(env) == 1


def test_vector_evaluation():
    import numpy as np
    from prefixforge.expr import And, Or, Var, Xor

    env = {"a": np.array([0, 0, 1, 1]), "b": np.array([0, 1, 0, 1])}
    a, b = Var("a"), Var("b")
    assert And(a, b).evaluate(env).tolist() == [0, 0, 0, 1]
    assert Or(a, b).evaluate(env).tolist() == [0, 1, 1, 1]
    assert Xor(a, b).evaluate(env).tolist() == [0, 1, 1, 0]


def test_variables_and_str():
    from prefixforge.expr import And, Or, Var, Xor

    expr = Or(Var("g1"), And(Var("p1"), Xor(Var("a0"), Var("b0"))))
    assert expr.variables() == {"g1", "p1", "a0", "b0"}
    assert str(expr) == "(g1 | (p1 & (a0 ^ b0)))"
    assert Var("x").name() == "x"


def test_conjunction():
    from prefixforge.expr import And, Var, conjunction

    assert conjunction([]).evaluate({}) == 1
    assert str(conjunction([Var("a")])) == "a"
    assert isinstance(conjunction([Var("a"), Var("b")]), And)
