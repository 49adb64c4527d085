from fractions import Fraction

import pytest

from betti_regions.exceptions import DimensionMismatchError, InputDocumentError
from betti_regions.polyhedral.exactlinalg import (
    IntegerMatrix,
    Lattice,
    determinant,
    hnf,
    integer_nullspace,
    lattice_intersection,
    primitive,
    rational_inverse,
    rational_rank,
    rational_solve,
    solve_integer,
)


def test_integer_matrix_shapes():
    matrix = IntegerMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert matrix.rows == 2
    assert matrix.cols == 3
    assert matrix.column(1) == (2, 5)
    assert matrix.transpose().entries == ((1, 4), (2, 5), (3, 6))
    assert matrix.apply((1, 0, -1)) == (-2, -2)
    assert IntegerMatrix.from_columns([], nrows=3).cols == 0


def test_integer_matrix_invalid():
    with pytest.raises(DimensionMismatchError):
        IntegerMatrix.from_rows([])
    with pytest.raises(DimensionMismatchError):
        IntegerMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(DimensionMismatchError):
        IntegerMatrix.identity(2).apply((1, 2, 3))
    with pytest.raises(DimensionMismatchError):
        IntegerMatrix.identity(2).matmul(IntegerMatrix.identity(3))


def test_integer_matrix_document(example_matrix):
    document = example_matrix.to_dict()
    assert document["entries"][0] == ["3", "5", "8", "9"]
    assert IntegerMatrix.from_dict(document) == example_matrix


def test_integer_matrix_document_invalid():
    with pytest.raises(InputDocumentError):
        IntegerMatrix.from_dict({"rows": "2", "cols": "2", "entries": [["1", "2"]]})
    with pytest.raises(InputDocumentError):
        IntegerMatrix.from_dict({"rows": "1", "cols": "1"})


def test_hnf_example_matrix(example_matrix):
    result = hnf(example_matrix)

    assert result.h.entries == ((1, 0, 0, 0), (0, 1, 0, 0))
    assert example_matrix.matmul(result.u) == result.h
    assert abs(determinant(result.u)) == 1
    assert result.rank == 2
    assert result.pivot_rows() == [0, 1]


@pytest.mark.parametrize(
    "rows",
    [
        [[4, 6]],
        [[2, 4, 6], [1, 1, 1]],
        [[1, 2], [2, 4]],
        [[0, 0, 0]],
        [[6, 10, 15], [0, 3, 7], [1, 1, 1]],
    ],
    ids=["gcd_row", "wide", "rank_deficient", "zero", "square"],
)
def test_hnf_properties(rows):
    a = IntegerMatrix.from_rows(rows)
    result = hnf(a)

    assert a.matmul(result.u) == result.h
    assert abs(determinant(result.u)) == 1
    for column, row in enumerate(result.pivot_rows()):
        pivot = result.h.entries[row][column]
        assert pivot > 0
        assert all(0 <= result.h.entries[row][k] < pivot for k in range(column))
    assert all(not any(result.h.column(k)) for k in range(result.rank, a.cols))


def test_hnf_gcd_row():
    assert hnf(IntegerMatrix.from_rows([[4, 6]])).h.entries == ((2, 0),)


def test_integer_nullspace_is_saturated(example_matrix):
    kernel = integer_nullspace(example_matrix)

    assert (kernel.rows, kernel.cols) == (4, 2)
    for column in kernel.columns():
        assert example_matrix.apply(column) == (0, 0)

    lattice = Lattice.from_generators(4, kernel.columns())
    assert lattice.contains((2, -3, 0, 1))
    assert lattice.contains((3, -5, 2, 0))


def test_integer_nullspace_of_invertible_matrix():
    kernel = integer_nullspace(IntegerMatrix.from_rows([[2, 1], [1, 1]]))
    assert (kernel.rows, kernel.cols) == (2, 0)


def test_solve_integer():
    a = IntegerMatrix.from_rows([[2, 4]])
    assert solve_integer(a, (3,)) is None

    solution = solve_integer(a, (6,))
    assert a.apply(solution) == (6,)


def test_solve_integer_example(example_matrix):
    solution = solve_integer(example_matrix, (30, 5))
    assert example_matrix.apply(solution) == (30, 5)


def test_solve_integer_inconsistent_rows():
    a = IntegerMatrix.from_rows([[1, 1], [2, 2]])
    assert solve_integer(a, (1, 3)) is None
    assert a.apply(solve_integer(a, (1, 2))) == (1, 2)


def test_solve_integer_wrong_rhs(example_matrix):
    with pytest.raises(DimensionMismatchError):
        solve_integer(example_matrix, (1,))


def test_determinant():
    assert determinant(IntegerMatrix.from_rows([[2, 1], [1, 1]])) == 1
    assert determinant(IntegerMatrix.from_rows([[3, 5], [1, 1]])) == -2
    assert determinant(IntegerMatrix.from_rows([[1, 2], [2, 4]])) == 0
    with pytest.raises(DimensionMismatchError):
        determinant(IntegerMatrix.from_rows([[1, 2]]))


def test_rational_rank_and_solve():
    rows = [[1, 1], [1, 2], [1, 3]]
    assert rational_rank(rows, 2) == 2
    assert rational_rank([], 2) == 0

    assert rational_solve(rows, [1, 2, 3], 2) == (Fraction(0), Fraction(1))
    assert rational_solve(rows, [1, 2, 4], 2) is None
    assert rational_solve([[2, 0], [0, 3]], [1, 1], 2) == (Fraction(1, 2), Fraction(1, 3))


def test_rational_inverse():
    assert rational_inverse([[2, 0], [0, 4]]) == [
        [Fraction(1, 2), Fraction(0)],
        [Fraction(0), Fraction(1, 4)],
    ]
    assert rational_inverse([[1, 2], [2, 4]]) is None
    with pytest.raises(DimensionMismatchError):
        rational_inverse([[1, 2]])


def test_primitive():
    assert primitive((4, -6)) == (2, -3)
    assert primitive((0, 0)) == (0, 0)
    assert primitive((3, 5)) == (3, 5)


def test_lattice_pair():
    lattice = Lattice.from_generators(2, [(3, 1), (5, 1)])

    assert lattice.is_full_rank
    assert lattice.determinant == 2
    assert lattice.contains((3, 1))
    assert lattice.contains((2, 0))
    assert not lattice.contains((1, 0))
    assert lattice.reduce((1, 0)) == (0, 1)
    assert lattice.reduce((3, 1)) == (0, 0)
    assert list(lattice.coset_representatives()) == [(0, 0), (0, 1)]


def test_lattice_is_canonical():
    assert Lattice.from_generators(2, [(3, 1), (5, 1)]) == Lattice.from_generators(
        2, [(2, 0), (1, 1), (3, 1)]
    )
    assert Lattice.from_generators(2, [(2, 1), (3, 1)]) == Lattice.full(2)


def test_lattice_rank_deficient():
    lattice = Lattice.from_generators(2, [(1, 1), (2, 2)])
    assert lattice.rank == 1
    assert lattice.determinant == 0
    assert lattice.contains((3, 3))
    assert not lattice.contains((1, 0))
    with pytest.raises(DimensionMismatchError):
        lattice.reduce((1, 0))

    zero = Lattice.from_generators(2, [])
    assert zero.contains((0, 0))
    assert not zero.contains((0, 1))


def test_lattice_intersection():
    evens = Lattice.from_generators(2, [(2, 0), (0, 1)])
    triples = Lattice.from_generators(2, [(1, 0), (0, 3)])

    both = lattice_intersection(evens, triples)

    assert both == Lattice.from_generators(2, [(2, 0), (0, 3)])
    assert both.determinant == 6


def test_lattice_intersection_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        lattice_intersection(Lattice.full(2), Lattice.full(3))
