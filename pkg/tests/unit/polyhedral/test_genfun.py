from fractions import Fraction

import pytest

from betti_regions.exceptions import DegenerateInputError, NotExpandableError
from betti_regions.polyhedral.genfun import (
    GenFunTerm,
    RationalGenFun,
    TruncatedSeries,
    brion_check,
    polygon_genfun,
    simplicial_cone_genfun,
    triangulate_cone,
    truncate,
    vertex_cones,
)

UNIT_SQUARE = [[0, 0], [1, 0], [1, 1], [0, 1]]
TRIANGLE = [[0, 0], [2, 0], [0, 2]]


def test_simplicial_cone_unimodular():
    g = simplicial_cone_genfun((0, 0), [(1, 0), (0, 1)])
    assert g.terms == (GenFunTerm(sign=1, numerator=((0, 0),), denominator=((1, 0), (0, 1))),)


def test_simplicial_cone_parallelepiped():
    g = simplicial_cone_genfun((0, 0), [(1, 0), (1, 2)])
    assert g.terms[0].numerator == ((0, 0), (1, 1))


def test_simplicial_cone_rational_apex():
    assert simplicial_cone_genfun((Fraction(1, 2),), [(1,)]).terms[0].numerator == ((1,),)
    assert simplicial_cone_genfun((Fraction(1, 2),), []).terms[0].numerator == ()
    assert simplicial_cone_genfun((3,), []).terms[0].numerator == ((3,),)


@pytest.mark.parametrize(
    "rays",
    [[(1, 0), (2, 0)], [(0, 0)], [(1, 0, 0)]],
    ids=["dependent", "zero", "wrong_dimension"],
)
def test_simplicial_cone_degenerate(rays):
    with pytest.raises(DegenerateInputError):
        simplicial_cone_genfun((0, 0), rays)


def test_truncate_forward_ray():
    series = truncate(simplicial_cone_genfun((0,), [(1,)]), [(-2, 4)])
    assert series.coefficients == {(k,): 1 for k in range(0, 5)}


def test_truncate_flips_backward_ray():
    # 1 / (1 - x^-1) == -x / (1 - x)
    series = truncate(simplicial_cone_genfun((0,), [(-1,)]), [(-3, 3)])
    assert series.coefficients == {(1,): -1, (2,): -1, (3,): -1}


def test_truncate_direction():
    series = truncate(simplicial_cone_genfun((0,), [(1,)]), [(-3, 3)], direction=(-1,))
    assert series.coefficients == {(-1,): -1, (-2,): -1, (-3,): -1}


def test_truncate_orthogonal_direction():
    with pytest.raises(NotExpandableError):
        truncate(simplicial_cone_genfun((0, 0), [(1, 0)]), [(0, 2), (0, 2)], direction=(0, 1))


def test_truncate_dependent_rays():
    g = RationalGenFun(terms=(GenFunTerm(sign=1, numerator=((0,),), denominator=((1,), (2,))),))
    with pytest.raises(NotExpandableError):
        truncate(g, [(0, 3)])


def test_truncate_empty():
    assert truncate(RationalGenFun(), [(0, 3)]).coefficients == {}


def test_truncated_series_cancels():
    series = TruncatedSeries(box=((0, 2),))
    series.add((1,), 1)
    series.add((1,), -1)
    assert series.coefficients == {}
    assert series.coefficient((1,)) == 0


def test_vertex_cones_unit_square():
    cones = vertex_cones(UNIT_SQUARE)

    assert [cone.apex for cone in cones] == [
        (Fraction(0), Fraction(0)),
        (Fraction(1), Fraction(0)),
        (Fraction(1), Fraction(1)),
        (Fraction(0), Fraction(1)),
    ]
    assert cones[0].rays == ((0, 1), (1, 0))
    assert cones[2].rays == ((0, -1), (-1, 0))


def test_vertex_cones_primitive_rays():
    cones = vertex_cones(TRIANGLE)
    assert cones[1].rays == ((-1, 0), (-1, 1))


def test_vertex_cones_from_edges():
    vertices = [[0, 0], [1, 1], [1, 0], [0, 1]]
    cones = vertex_cones(vertices, edges=[(0, 2), (2, 1), (1, 3), (3, 0)])
    assert sorted(cone.apex for cone in cones) == sorted(
        tuple(Fraction(value) for value in vertex) for vertex in UNIT_SQUARE
    )


def test_vertex_cones_segment_and_point():
    segment = vertex_cones([[0], [5]])
    assert [cone.rays for cone in segment] == [((1,),), ((-1,),)]
    assert vertex_cones([[2, 3]])[0].rays == ()


@pytest.mark.parametrize(
    "vertices",
    [
        [[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]],
        [[0, 0], [1, 0], [2, 0], [1, 1]],
        [[1, 1], [1, 1]],
    ],
    ids=["l_shape", "collinear_vertex", "coincident"],
)
def test_vertex_cones_degenerate(vertices):
    with pytest.raises(DegenerateInputError):
        vertex_cones(vertices)


def test_triangulate_cone():
    assert triangulate_cone([(1, 0), (1, 1), (0, 1)]) == [
        (1, ((1, 0), (1, 1))),
        (1, ((1, 1), (0, 1))),
        (-1, ((1, 1),)),
    ]
    assert triangulate_cone([(1, 0), (0, 1)]) == [(1, ((1, 0), (0, 1)))]


def test_triangulate_cone_series_matches_cone():
    rays = [(1, 0), (1, 1), (0, 1)]
    total = RationalGenFun()
    for sign, piece in triangulate_cone(rays):
        piece_genfun = simplicial_cone_genfun((0, 0), piece)
        total = total + (piece_genfun if sign > 0 else piece_genfun.negated())

    series = truncate(total, [(0, 4), (0, 4)])
    assert series.coefficients == {(x, y): 1 for x in range(5) for y in range(5)}


@pytest.mark.parametrize(
    "rays",
    [[(0, 1), (1, 1), (1, 0)], [(1, 0), (0, 1), (-1, 0)]],
    ids=["clockwise", "not_pointed"],
)
def test_triangulate_cone_degenerate(rays):
    with pytest.raises(DegenerateInputError):
        triangulate_cone(rays)


def test_polygon_genfun_terms():
    g = polygon_genfun(TRIANGLE)
    assert len(g.terms) == 3
    assert len(g.to_dict()) == 3
    assert g.to_dict()[0]["sign"] == 1


@pytest.mark.parametrize(
    "polygon,box",
    [
        (UNIT_SQUARE, [(-2, 3), (-2, 3)]),
        (TRIANGLE, [(-1, 3), (-1, 3)]),
        ([[0], [5]], [(-3, 8)]),
        ([[1, 2]], [(0, 3), (0, 3)]),
    ],
    ids=["unit_square", "triangle", "segment", "point"],
)
def test_brion_check(polygon, box):
    assert brion_check(polygon, box)


def test_brion_check_direction():
    assert brion_check(UNIT_SQUARE, [(-2, 3), (-2, 3)], direction=(2, 1))
    assert brion_check(TRIANGLE, [(-1, 3), (-1, 3)], direction=(1, 2))


def test_brion_series_is_indicator():
    series = truncate(polygon_genfun(TRIANGLE), [(-1, 3), (-1, 3)])
    assert series.coefficients == {
        (0, 0): 1,
        (0, 1): 1,
        (0, 2): 1,
        (1, 0): 1,
        (1, 1): 1,
        (2, 0): 1,
    }
