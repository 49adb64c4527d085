import pytest

from betti_regions.algebra.monomial import (
    Filtration,
    FiltrationKind,
    MonomialIdeal,
    add,
    colon,
    filtration_leq,
    good_filtration_check,
    hilbert_function,
    hilbert_function_ring,
    integral_closure_power,
    intersect,
    is_filtration_reduction,
    is_reduction,
    monomials_of_degree,
    multiply,
    power,
    ratliff_rush,
    render_monomial,
)
from betti_regions.exceptions import (
    ContainmentViolationError,
    DegenerateInputError,
    DimensionMismatchError,
    HorizonError,
    InputDocumentError,
    NotContainedError,
)


def ideal(*generators):
    return MonomialIdeal(nvars=len(generators[0]), generators=tuple(generators))


def test_ideal_minimalizes_generators():
    assert ideal((1, 0), (2, 0), (1, 1)).generators == ((1, 0),)
    assert ideal((0, 3), (2, 0), (0, 3)) == ideal((2, 0), (0, 3))
    assert MonomialIdeal.unit(2).is_unit
    assert MonomialIdeal.zero(2).is_zero


def test_ideal_render(ci23):
    assert str(ci23) == "(y^3, x^2)"
    assert str(MonomialIdeal.zero(3)) == "(0)"
    assert render_monomial((0, 0, 0)) == "1"
    assert render_monomial((1, 0, 2, 1)) == "x1*x3^2*x4"


@pytest.mark.parametrize(
    "nvars,generators",
    [(0, ()), (2, ((1, 0, 0),)), (2, ((-1, 2),))],
    ids=["no_variables", "wrong_length", "negative_exponent"],
)
def test_ideal_invalid(nvars, generators):
    with pytest.raises(DimensionMismatchError):
        MonomialIdeal(nvars=nvars, generators=generators)


def test_ideal_document(ci23):
    assert MonomialIdeal.from_dict({"nvars": "2", "generators": [["2", "0"], [0, 3]]}) == ci23
    assert MonomialIdeal.from_dict(ci23.to_dict()) == ci23
    with pytest.raises(InputDocumentError):
        MonomialIdeal.from_dict({"nvars": 2, "generators": [[1, 2, 3]]})
    with pytest.raises(InputDocumentError):
        MonomialIdeal.from_dict({"nvars": 2, "generators": "x^2"})


def test_ideal_operations(maximal_ideal, ci23):
    assert power(maximal_ideal, 2) == ideal((2, 0), (1, 1), (0, 2))
    assert power(maximal_ideal, 0) == MonomialIdeal.unit(2)
    assert intersect(ideal((2, 0)), ideal((1, 1))) == ideal((2, 1))
    assert colon(ci23, ideal((1, 0))) == ideal((1, 0), (0, 3))
    assert colon(ci23, MonomialIdeal.zero(2)) == MonomialIdeal.unit(2)
    assert add(ci23, maximal_ideal) == maximal_ideal
    assert multiply(ci23, maximal_ideal) == ideal((3, 0), (2, 1), (1, 3), (0, 4))
    assert ci23.issubset(maximal_ideal)
    assert not maximal_ideal.issubset(ci23)


def test_ideal_operations_mismatch(maximal_ideal):
    with pytest.raises(DimensionMismatchError):
        multiply(maximal_ideal, ideal((1, 0, 0)))
    with pytest.raises(DegenerateInputError) as exc:
        power(maximal_ideal, -1)
    assert exc.value.witness == -1


def test_is_reduction(maximal_ideal):
    square = power(maximal_ideal, 2)

    assert is_reduction(ideal((2, 0), (0, 2)), square, 3) == 1
    assert is_reduction(square, square, 3) == 0
    assert is_reduction(ideal((2, 0)), square, 6) is None


def test_is_reduction_not_contained(maximal_ideal):
    with pytest.raises(NotContainedError) as exc:
        is_reduction(ideal((1, 0), (0, 2)), power(maximal_ideal, 2), 3)
    assert exc.value.witness == [1, 0]


@pytest.mark.parametrize("t", [1, 2, 3], ids=["first", "second", "third"])
def test_integral_closure_of_cube_powers(cube_powers, maximal_ideal, t):
    assert integral_closure_power(cube_powers, t) == power(maximal_ideal, 3 * t)


def test_integral_closure_edge_cases(ci23, maximal_ideal):
    assert integral_closure_power(ci23, 0) == MonomialIdeal.unit(2)
    assert integral_closure_power(maximal_ideal, 4) == power(maximal_ideal, 4)
    # x^3 * y^5 is integral over (x^2, y^3)^3 but not in it
    closure = integral_closure_power(ci23, 3)
    assert closure.contains_monomial((3, 5))
    assert not power(ci23, 3).contains_monomial((3, 5))
    assert closure.contains_monomial((6, 0))
    assert not closure.contains_monomial((2, 3))


def test_ratliff_rush(maximal_ideal):
    i = ideal((4, 0), (3, 1), (1, 3), (0, 4))
    result = ratliff_rush(i)

    assert result.stabilized
    assert result.ideal.contains_monomial((2, 2))
    assert result.ideal == power(maximal_ideal, 4)
    assert result.to_dict()["status"] == "stabilized"


def test_ratliff_rush_closed_ideal(ci23):
    result = ratliff_rush(ci23)

    assert result.stabilized
    assert result.ideal == ci23


@pytest.mark.parametrize(
    "generators",
    [((1, 0),), ((2, 0), (0, 2))],
    ids=["principal", "squares"],
)
def test_ratliff_rush_fixed(generators):
    i = ideal(*generators)
    result = ratliff_rush(i, horizon=6)

    assert result.stabilized
    assert result.ideal == i
    # two consecutive unions have to agree
    assert result.steps == 2
    assert colon(power(result.ideal, 3), power(result.ideal, 2)) == i


def test_ratliff_rush_horizon_too_short():
    result = ratliff_rush(ideal((1, 0)), horizon=1)

    assert not result.stabilized
    assert result.ideal == ideal((1, 0))
    assert result.to_dict()["status"] == "horizon-truncated"


def test_ratliff_rush_trivial():
    assert ratliff_rush(MonomialIdeal.zero(2)).steps == 0


def test_filtration_kinds(maximal_ideal, cube_powers):
    powers = Filtration(kind=FiltrationKind.POWERS, base=maximal_ideal, horizon=4)
    closures = Filtration(kind=FiltrationKind.INTEGRAL_CLOSURE, base=cube_powers, horizon=3)

    assert powers.term(0) == MonomialIdeal.unit(2)
    assert powers.term(3) == power(maximal_ideal, 3)
    assert closures.term(1) == power(maximal_ideal, 3)
    assert len(powers.materialize()) == 5


def test_filtration_explicit(maximal_ideal):
    explicit = Filtration(
        kind=FiltrationKind.EXPLICIT,
        base=maximal_ideal,
        horizon=2,
        explicit_terms={1: maximal_ideal, 2: power(maximal_ideal, 2)},
    )

    assert explicit.term(2) == power(maximal_ideal, 2)
    with pytest.raises(HorizonError):
        explicit.term(3)
    assert Filtration.from_dict(explicit.to_dict()).term(1) == maximal_ideal


def test_filtration_document_errors(maximal_ideal):
    with pytest.raises(InputDocumentError):
        Filtration.from_dict({"kind": "symbolic", "ideal": maximal_ideal.to_dict(), "horizon": 3})
    with pytest.raises(InputDocumentError):
        Filtration.from_dict({"kind": "explicit", "ideal": maximal_ideal.to_dict(), "horizon": 3})


def test_good_filtration_check(maximal_ideal, cube_powers):
    powers = Filtration(kind=FiltrationKind.POWERS, base=maximal_ideal, horizon=4)
    closures = Filtration(kind=FiltrationKind.INTEGRAL_CLOSURE, base=cube_powers, horizon=8)

    assert good_filtration_check(powers, maximal_ideal).n0 == 0
    report = good_filtration_check(closures, cube_powers)
    assert report.stable
    assert report.n0 == 1
    assert report.to_dict()["status"] == "good"


def test_good_filtration_check_violation(maximal_ideal):
    broken = Filtration(
        kind=FiltrationKind.EXPLICIT,
        base=maximal_ideal,
        horizon=1,
        explicit_terms={1: ideal((2, 0))},
    )

    with pytest.raises(ContainmentViolationError) as exc:
        good_filtration_check(broken, maximal_ideal)
    assert exc.value.witness["t"] == 0


def test_filtration_leq(maximal_ideal):
    small = Filtration(kind=FiltrationKind.POWERS, base=power(maximal_ideal, 2), horizon=3)
    large = Filtration(kind=FiltrationKind.POWERS, base=maximal_ideal, horizon=3)

    assert filtration_leq(small, large, 3) is None
    assert filtration_leq(large, small, 3) == 1


def test_is_filtration_reduction(maximal_ideal):
    square = power(maximal_ideal, 2)
    j = Filtration(kind=FiltrationKind.POWERS, base=ideal((2, 0), (0, 2)), horizon=4)
    i = Filtration(kind=FiltrationKind.POWERS, base=square, horizon=4)

    assert is_filtration_reduction(j, i, 1, 4)
    assert not is_filtration_reduction(j, i, 0, 4)
    assert not is_filtration_reduction(i, j, 1, 4)


def test_hilbert_function(ci23):
    assert list(monomials_of_degree(2, 2)) == [(2, 0), (1, 1), (0, 2)]
    assert hilbert_function(ci23, 3) == 3
    assert hilbert_function(ci23, 1) == 0
    assert hilbert_function(ci23, -1) == 0
    assert hilbert_function_ring(2, 3) == 4
    assert hilbert_function_ring(3, 2) == 6


def test_good_filtration_check_ratliff_rush(maximal_ideal):
    i = ideal((4, 0), (3, 1), (1, 3), (0, 4))
    f = Filtration(kind=FiltrationKind.RATLIFF_RUSH, base=i, horizon=4)

    assert f.term(1) == power(maximal_ideal, 4)
    assert good_filtration_check(f, i).n0 == 1
