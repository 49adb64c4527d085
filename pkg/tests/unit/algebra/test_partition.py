from fractions import Fraction

import pytest

from betti_regions.algebra.partition import (
    MU,
    T,
    WeightSystem,
    chamber_complex,
    default_fit_window,
    evaluate,
    evaluate_poly,
    fit_quasi_polynomial,
    global_lattice,
    hilbert_function_weighted,
    hilbert_series,
    monomial_basis,
    pair_lattice,
    poly_degree,
    poly_from_coefficients,
    poly_to_list,
    select_fit_points,
)
from betti_regions.exceptions import DegenerateInputError, InputDocumentError, InterpolationError
from betti_regions.polyhedral.exactlinalg import Lattice
from betti_regions.polyhedral.polyhedra import enumerate_lattice_points, fiber_polytope


@pytest.mark.parametrize(
    "mu,t,expected",
    [(30, 5, 2), (0, 0, 1), (1, 5, 0), (15, 5, 1), (45, 5, 1), (46, 5, 0), (30, -1, 0)],
    ids=["example", "origin", "below_support", "low_ray", "high_ray", "above_support", "neg_t"],
)
def test_evaluate(example_weights, mu, t, expected):
    assert evaluate(example_weights, mu, t) == expected
    assert hilbert_function_weighted(example_weights, mu, t) == expected


def test_evaluate_matches_fiber_enumeration(example_weights, example_matrix):
    for t in range(0, 7):
        for mu in range(3 * t - 2, 9 * t + 3):
            points = enumerate_lattice_points(fiber_polytope(example_matrix, (mu, t)))
            assert evaluate(example_weights, mu, t) == len(points)


def test_evaluate_ignores_degree_order():
    assert WeightSystem(degrees=(9, 3, 8, 5)) == WeightSystem(degrees=(3, 5, 8, 9))
    assert evaluate(WeightSystem(degrees=(9, 8, 5, 3)), 30, 5) == 2


def test_evaluate_repeated_degrees():
    # x1 + x2 + x3 == t w/ all degrees 1: compositions of t into three parts
    w = WeightSystem(degrees=(1, 1, 1))
    assert [evaluate(w, t, t) for t in range(5)] == [1, 3, 6, 10, 15]
    assert evaluate(w, 3, 2) == 0


def test_weight_system_properties(example_weights):
    assert example_weights.r == 4
    assert example_weights.rank == 2
    assert example_weights.degree_bound == 2
    assert example_weights.matrix.entries == ((3, 5, 8, 9), (1, 1, 1, 1))
    assert WeightSystem(degrees=(2, 2)).degree_bound == 1
    assert WeightSystem(degrees=(2, 3, 3)).distinct_degrees == (2, 3)
    assert example_weights.to_dict() == {"degrees": ["3", "5", "8", "9"]}


@pytest.mark.parametrize("degrees", [(), (0, 3), (-1,)], ids=["empty", "zero", "negative"])
def test_weight_system_invalid(degrees):
    with pytest.raises(DegenerateInputError):
        WeightSystem(degrees=degrees)


def test_weight_system_document():
    assert WeightSystem.from_dict({"degrees": ["3", "5", "7", "9"]}).degrees == (3, 5, 7, 9)
    with pytest.raises(InputDocumentError):
        WeightSystem.from_dict({"degrees": ["0"]})
    with pytest.raises(InputDocumentError):
        WeightSystem.from_dict({"weights": [1]})


def test_hilbert_series():
    assert hilbert_series(WeightSystem(degrees=(1, 1)), 2) == {(0, 0): 1, (1, 1): 2, (2, 2): 3}
    series = hilbert_series(WeightSystem(degrees=(2, 3)), 2)
    assert series == {(0, 0): 1, (2, 1): 1, (3, 1): 1, (4, 2): 1, (5, 2): 1, (6, 2): 1}


def test_pair_and_global_lattice(example_weights):
    assert pair_lattice(3, 5).determinant == 2
    assert pair_lattice(3, 5).contains((3, 1))
    assert global_lattice(WeightSystem(degrees=(2, 3))) == Lattice.full(2)
    assert global_lattice(WeightSystem(degrees=(4, 4))) == Lattice.full(2)

    lattice = global_lattice(example_weights)
    assert lattice.determinant == 180
    for degree in example_weights.degrees:
        assert lattice.contains((degree * 180, 180))


def test_chamber_complex(example_weights):
    chambers = chamber_complex(example_weights)

    assert [(c.low_ray, c.high_ray) for c in chambers] == [
        ((3, 1), (5, 1)),
        ((5, 1), (8, 1)),
        ((8, 1), (9, 1)),
    ]
    assert all(c.global_lattice.determinant == 180 for c in chambers)
    assert chambers[0].contains(20, 5)
    assert chambers[0].contains(25, 5)
    assert not chambers[0].contains(25, 5, interior=True)
    assert not chambers[0].contains(26, 5)
    assert chambers[0].points(2, interior=True) == [(7, 2), (8, 2), (9, 2)]


def test_chamber_complex_degenerate():
    chambers = chamber_complex(WeightSystem(degrees=(3, 3)))

    assert len(chambers) == 1
    assert chambers[0].is_degenerate
    assert chambers[0].points(4) == [(12, 4)]
    assert chambers[0].contains(12, 4)
    assert not chambers[0].contains(13, 4)


def test_monomial_basis():
    assert monomial_basis(1) == [(0, 0), (1, 0), (0, 1)]
    assert len(monomial_basis(2)) == 6
    assert monomial_basis(2, degenerate=True) == [(0, 0), (0, 1), (0, 2)]


def test_select_fit_points_reaches_full_rank():
    basis = monomial_basis(1)
    candidates = [(mu, t) for t in range(1, 6) for mu in range(t, 3 * t + 1)]
    chosen = select_fit_points(candidates, pair_lattice(1, 3), basis, extra=2)

    assert len(chosen) == 2
    assert all(len(points) == 5 for points in chosen.values())


def test_default_fit_window(example_weights):
    assert default_fit_window(example_weights, global_lattice(example_weights)) == (40, 760)


def test_poly_helpers():
    poly = poly_from_coefficients({(0, 0): Fraction(1), (0, 1): Fraction(3), (1, 0): Fraction(0)})

    assert poly.as_expr() == 3 * T + 1
    assert evaluate_poly(poly, 7, 2) == 7
    assert poly_degree(poly) == 1
    assert sorted(poly_to_list(poly)) == [["1", "1", 0, 0], ["3", "1", 0, 1]]
    assert poly_degree(poly_from_coefficients({})) == 0
    half = poly_from_coefficients({(1, 0): Fraction(1, 2)})
    assert half.as_expr() == MU / 2
    assert evaluate_poly(half, 3, 0) == Fraction(3, 2)


def test_fit_quasi_polynomial_one_two_three():
    w = WeightSystem(degrees=(1, 2, 3))
    chambers = chamber_complex(w)

    for chamber in chambers:
        quasi = fit_quasi_polynomial(w, chamber)
        assert quasi.degree <= w.degree_bound
        assert len(quasi.coset_polys) == 2
        for t in range(0, 15):
            for mu, _ in chamber.points(t):
                assert quasi.evaluate(mu, t) == evaluate(w, mu, t)


def test_fit_quasi_polynomial_degenerate():
    w = WeightSystem(degrees=(1, 1))
    quasi = fit_quasi_polynomial(w, chamber_complex(w)[0], (4, 8), (1, 3))

    assert all(quasi.evaluate(t, t) == t + 1 for t in range(0, 12))
    document = quasi.to_dict()
    assert document["degree"] == 1
    assert len(document["cosets"]) == 1


def test_fit_quasi_polynomial_starved_window():
    w = WeightSystem(degrees=(1, 2, 3))
    with pytest.raises(InterpolationError):
        fit_quasi_polynomial(w, chamber_complex(w)[0], (6, 6), (1, 5))


@pytest.mark.slow
@pytest.mark.parametrize("degrees", [(3, 5, 8, 9), (3, 5, 7, 9)], ids=["3589", "3579"])
def test_fit_quasi_polynomial_certified(degrees):
    w = WeightSystem(degrees=degrees)
    chambers = chamber_complex(w)
    fits = []
    for chamber in chambers:
        lattice = chamber.global_lattice
        fit_window = (41, 41 + 4 * lattice.determinant)
        quasi = fit_quasi_polynomial(w, chamber, fit_window, (31, 40))
        assert quasi.degree <= w.r - 2
        fits.append(quasi)

    # neighbouring chambers agree w/ each other and w/ phi on their shared ray
    for index in range(len(chambers) - 1):
        degree = chambers[index].high_ray[0]
        for t in range(0, 25):
            value = evaluate(w, degree * t, t)
            assert fits[index].evaluate(degree * t, t) == value
            assert fits[index + 1].evaluate(degree * t, t) == value
