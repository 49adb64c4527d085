import pytest

from betti_regions.algebra.betti import (
    SimplicialComplexQ,
    betti_family,
    graded_betti,
    hilbert_function_from_betti,
    lcm_lattice,
    multigraded_betti,
    reduced_homology_dims,
    taylor_betti_oracle,
    upper_koszul_complex,
)
from betti_regions.algebra.monomial import (
    Filtration,
    FiltrationKind,
    MonomialIdeal,
    hilbert_function,
    power,
)
from betti_regions.config import Settings
from betti_regions.exceptions import BoundExceededError


def ideal(*generators):
    return MonomialIdeal(nvars=len(generators[0]), generators=tuple(generators))


MAXIMAL_2 = ideal((1, 0), (0, 1))
MAXIMAL_3 = ideal((1, 0, 0), (0, 1, 0), (0, 0, 1))

IDEALS = {
    "m": MAXIMAL_2,
    "m2": power(MAXIMAL_2, 2),
    "m3": power(MAXIMAL_2, 3),
    "m5": power(MAXIMAL_2, 5),
    "ci23": ideal((2, 0), (0, 3)),
    "ci23_squared": power(ideal((2, 0), (0, 3)), 2),
    "ci23_cubed": power(ideal((2, 0), (0, 3)), 3),
    "quartic": ideal((4, 0), (3, 1), (1, 3), (0, 4)),
    "mixed_2": ideal((2, 1), (1, 2)),
    "staircase": ideal((5, 0), (3, 1), (2, 3), (0, 4)),
    "principal": ideal((2, 3)),
    "xyz": MAXIMAL_3,
    "xyz_squared": power(MAXIMAL_3, 2),
    "edges": ideal((1, 1, 0), (0, 1, 1), (1, 0, 1)),
    "squares": ideal((2, 0, 0), (0, 2, 0), (0, 0, 2)),
    "path": ideal((1, 1, 0), (0, 1, 1)),
    "mixed_3": ideal((2, 0, 0), (1, 1, 0), (0, 2, 0), (0, 0, 1)),
    "scarf": ideal((2, 1, 0), (0, 2, 1), (1, 0, 2)),
}


@pytest.mark.parametrize(
    "facets,nvertices,expected",
    [
        ((), 2, []),
        ((0,), 2, [1]),
        ((1,), 1, [0, 0]),
        ((1, 2), 2, [0, 1]),
        ((3, 5, 6), 3, [0, 0, 1]),
        ((7,), 3, [0, 0, 0, 0]),
    ],
    ids=["void", "empty_face", "point", "two_points", "hollow_triangle", "solid_triangle"],
)
def test_reduced_homology_dims(facets, nvertices, expected):
    k = SimplicialComplexQ(nvertices=nvertices, facets=facets)
    assert reduced_homology_dims(k) == expected


def test_simplicial_complex_faces():
    k = SimplicialComplexQ(nvertices=3, facets=(3, 4))

    assert k.faces() == {0: [0], 1: [1, 2, 4], 2: [3]}
    assert k.dimension == 1
    assert SimplicialComplexQ(nvertices=3).dimension == -1


def test_reduced_homology_vertex_bound():
    with pytest.raises(BoundExceededError):
        reduced_homology_dims(SimplicialComplexQ(nvertices=21, facets=(1,)))


def test_lcm_lattice(ci23):
    assert lcm_lattice(MAXIMAL_2) == [(0, 1), (1, 0), (1, 1)]
    assert lcm_lattice(ci23) == [(0, 3), (2, 0), (2, 3)]
    with pytest.raises(BoundExceededError):
        lcm_lattice(MAXIMAL_3, Settings(lcm_lattice_bound=2))


def test_upper_koszul_complex(ci23):
    assert upper_koszul_complex(ci23, (2, 3)).facets == (0, 1, 2)
    assert upper_koszul_complex(ci23, (0, 3)).facets == (0,)
    assert upper_koszul_complex(ci23, (1, 1)).facets == ()


def test_multigraded_betti_complete_intersection(ci23):
    assert multigraded_betti(ci23) == {(0, (0, 3)): 1, (0, (2, 0)): 1, (1, (2, 3)): 1}
    assert multigraded_betti(MonomialIdeal.zero(2)) == {}


@pytest.mark.parametrize("name", sorted(IDEALS), ids=sorted(IDEALS))
def test_multigraded_betti_matches_taylor(name):
    i = IDEALS[name]
    assert multigraded_betti(i) == taylor_betti_oracle(i)


def test_taylor_generator_bound():
    with pytest.raises(BoundExceededError):
        taylor_betti_oracle(IDEALS["m3"], Settings(taylor_generator_bound=2))


@pytest.mark.parametrize("name", sorted(IDEALS), ids=sorted(IDEALS))
def test_betti_table_rebuilds_hilbert_function(name):
    i = IDEALS[name]
    table = graded_betti(i)
    for degree in range(0, 21):
        assert hilbert_function_from_betti(table, degree) == hilbert_function(i, degree)


def test_graded_betti_koszul():
    table = graded_betti(MAXIMAL_3)

    assert table.entries == {(0, 1): 3, (1, 2): 3, (2, 3): 1}
    assert table.projective_dimension == 2
    assert table.degrees(1) == [2]
    assert table.beta(1, 3) == 0


def test_betti_table_render():
    table = graded_betti(power(MAXIMAL_2, 2))

    assert table.render() == "       0 1\ntotal: 3 2\n    2: 3 2\n"
    assert graded_betti(MonomialIdeal.zero(2)).render() == "(zero ideal)\n"
    assert table.to_csv_rows() == [[0, 2, 3], [1, 3, 2]]
    assert table.to_dict()["entries"][0] == {"i": 0, "mu": "2", "beta": "3"}


def test_betti_family():
    f = Filtration(kind=FiltrationKind.POWERS, base=MAXIMAL_2, horizon=3)
    family = betti_family(f)

    assert family.t_range == (1, 3)
    assert [family.beta(0, t, t) for t in range(1, 4)] == [2, 3, 4]
    assert family.support(1, 2) == [3]
    assert family.to_csv_rows()[0] == [1, 0, 1, 2]
    assert sorted(family.to_dict()["tables"]) == ["1", "2", "3"]
