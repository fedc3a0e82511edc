"""Exact linear algebra over series-valued vectors and maps."""

import pytest

from nvaw.linalg import (
    Inconsistent, SeriesMap, SeriesVector, Space, UniqueSolution,
    Underdetermined, basis_tuples, matrix_inverse, matrix_rank, solve_linear,
)
from nvaw.series import DEFAULT_RANGE, LinExpr, Q, Series

A = Space("A", ("a1", "a2"))
B = Space("B", ("b1", "b2", "b3"))


def test_basis_tuples():
    assert len(basis_tuples((A, B))) == 6
    assert basis_tuples((A,))[0] == ("a1",)


def test_vector_arithmetic():
    v = SeriesVector.basis((A,), ("a1",))
    w = SeriesVector.basis((A,), ("a2",))
    s = v + w.scale(Q(2))
    assert s.get(("a1",)).coeff(()) == 1
    assert s.get(("a2",)).coeff(()) == 2
    assert (s - s).is_zero()


def test_tensor_and_permute():
    v = SeriesVector.basis((A,), ("a1",))
    w = SeriesVector.basis((B,), ("b2",))
    t = v.tensor(w)
    assert t.spaces == (A, B)
    p = t.permute((1, 0))
    assert p.spaces == (B, A)
    assert not p.get(("b2", "a1")).is_zero() if hasattr(
        p.get(("b2", "a1")), "is_zero") else p.get(("b2", "a1")).coeff(()) == 1


def test_map_apply_on_legs():
    flip = SeriesMap.flip(A, B)
    vec = SeriesVector.basis((A, B, A), ("a1", "b1", "a2"))
    out = flip.apply(vec, (0, 1))
    assert out.spaces == (B, A, A)
    assert out.get(("b1", "a1", "a2")).coeff(()) == 1


def test_map_compose_identity():
    ident = SeriesMap.identity((A,))
    flipAB = SeriesMap.flip(A, A)
    assert flipAB.compose(flipAB).columns.keys() == \
        SeriesMap.identity((A, A)).columns.keys()


def test_on_legs_extends_with_identity():
    m = SeriesMap.flip(A, A)
    ext = m.on_legs((A, A, B), (0, 1))
    vec = SeriesVector.basis((A, A, B), ("a1", "a2", "b1"))
    out = ext.apply(vec)
    assert out.get(("a2", "a1", "b1")).coeff(()) == 1


def test_solve_linear_unique():
    # x + y == 3, x - y == 1 encoded through series coefficients
    sp = (A,)
    x, y = LinExpr.sym("x"), LinExpr.sym("y")
    lhs1 = SeriesVector(sp, {("a1",): Series.const(1).scale(x + y)})
    rhs1 = SeriesVector(sp, {("a1",): Series.const(3)})
    lhs2 = SeriesVector(sp, {("a1",): Series.const(1).scale(x - y)})
    rhs2 = SeriesVector(sp, {("a1",): Series.const(1)})
    sol = solve_linear([(lhs1, rhs1), (lhs2, rhs2)], ["x", "y"])
    assert isinstance(sol, UniqueSolution)
    assert sol.assignment == {"x": Q(2), "y": Q(1)}


def test_solve_linear_underdetermined_and_inconsistent():
    sp = (A,)
    x = LinExpr.sym("x")
    lhs = SeriesVector(sp, {("a1",): Series.const(1).scale(x)})
    rhs = SeriesVector(sp, {("a1",): Series.const(1)})
    under = solve_linear([(lhs, rhs)], ["x", "y"])
    assert isinstance(under, Underdetermined)
    assert under.free == ["y"]
    zero = SeriesVector(sp, {("a1",): Series.const(0).scale(x)})
    bad = solve_linear([(zero, rhs)], ["x"])
    assert isinstance(bad, Inconsistent)


def test_matrix_rank_and_inverse():
    assert matrix_rank([[1, 2], [2, 4]]) == 1
    inv = matrix_inverse([[2, 0], [0, 4]])
    assert inv == [[Q(1, 2), 0], [0, Q(1, 4)]]
    assert matrix_inverse([[1, 1], [1, 1]]) is None
