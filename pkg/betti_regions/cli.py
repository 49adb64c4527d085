"""betti_regions.cli"""

import argparse
import re
import sys
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from betti_regions import __version__
from betti_regions.algebra.asymptotics import (
    RegionDescription,
    certify_ci_bridge,
    detect_regions,
    predict,
)
from betti_regions.algebra.betti import (
    BettiTable,
    betti_family,
    collapse_multigraded,
    graded_betti,
    taylor_betti_oracle,
)
from betti_regions.algebra.monomial import (
    Filtration,
    FiltrationKind,
    MonomialIdeal,
    add,
    colon,
    good_filtration_check,
    hilbert_function,
    integral_closure_power,
    intersect,
    is_filtration_reduction,
    is_reduction,
    multiply,
    power,
    ratliff_rush,
)
from betti_regions.algebra.partition import (
    WeightSystem,
    chamber_complex,
    evaluate,
    fit_quasi_polynomial,
    hilbert_series,
)
from betti_regions.config import Settings, load_settings
from betti_regions.documents import (
    dump_csv,
    dump_json,
    load_document,
    parse_integer_list,
    write_output,
)
from betti_regions.exceptions import BettiRegionsException, InputDocumentError
from betti_regions.logging import enable_logging, logger
from betti_regions.polyhedral.exactlinalg import IntegerMatrix, hnf
from betti_regions.polyhedral.genfun import brion_check, polygon_genfun, truncate
from betti_regions.polyhedral.polyhedra import (
    Polyhedron,
    count_lattice_points,
    enumerate_lattice_points,
    fiber_polytope,
    reduce_polyhedron,
    reduce_to_full_dim,
)

Window = Tuple[int, int]

WINDOW_PATTERN = re.compile(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")
NEGATIVE_VALUE_PATTERN = re.compile(r"^-\d[\d\s.,;-]*$")
FORMATS = ("json", "csv", "table")
EXAMPLE_MATRIX = IntegerMatrix.from_rows([[3, 5, 8, 9], [1, 1, 1, 1]])


class UsageError(Exception):
    """Exception for flag combinations argparse cannot see"""


@dataclass(frozen=True)
class Report:
    # json payload plus optional csv and aligned table renderings of the same result
    payload: Any
    header: Optional[Sequence[str]] = None
    rows: Optional[List[List[Any]]] = None
    table: Optional[str] = None

    def render(self, fmt: str) -> str:
        """
        Render the report in the requested output format

        Args:
            fmt: json, csv or table

        Returns:
            str: rendered text

        Raises:
            UsageError: if the result has no csv form

        """
        if fmt == "csv":
            if self.rows is None:
                raise UsageError("this result has no csv form, use --format json or table")
            return dump_csv(self.header or (), self.rows)
        if fmt == "table" and self.table is not None:
            return self.table if self.table.endswith("\n") else self.table + "\n"
        return dump_json(self.payload)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    output: Optional[str]
    fmt: str
    horizon: Optional[int]
    fit: Optional[Window]
    validate: Optional[Window]
    selftest: bool
    settings: Settings
    options: argparse.Namespace

    @classmethod
    def from_namespace(cls, options: argparse.Namespace) -> "RunConfig":
        """
        Build the run config from parsed arguments

        Args:
            options: parsed argparse namespace

        Returns:
            RunConfig: the run config

        Raises:
            UsageError: if a window or the horizon is not positive
            InputDocumentError: propagated from load_settings

        """
        for name in ("fit", "validate"):
            window = getattr(options, name, None)
            if window is not None and window[0] < 1:
                raise UsageError(f"--{name} window must be positive, got {window[0]}..{window[1]}")
        horizon = getattr(options, "horizon", None)
        if horizon is not None and horizon < 1:
            raise UsageError(f"--horizon must be positive, got {horizon}")

        return cls(
            subcommand=options.subcommand,
            output=options.output,
            fmt=options.format,
            horizon=horizon,
            fit=getattr(options, "fit", None),
            validate=getattr(options, "validate", None),
            selftest=options.selftest,
            settings=load_settings(options.config),
            options=options,
        )


def _window(value: str) -> Window:
    match = WINDOW_PATTERN.match(value)
    if not match:
        raise argparse.ArgumentTypeError(f"expected a window like 3..9, got {value!r}")
    low, high = int(match.group(1)), int(match.group(2))
    if low > high:
        raise argparse.ArgumentTypeError(f"window {value!r} is empty")
    return low, high


def _nonnegative(value: str) -> int:
    try:
        number = int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}") from exc
    if number < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value!r}")
    return number


def _integers(value: str) -> List[int]:
    try:
        return parse_integer_list(value)
    except InputDocumentError as exc:
        raise argparse.ArgumentTypeError(exc.message) from exc


def _points(value: str) -> List[List[int]]:
    return [_integers(part) for part in value.split(";") if part.strip()]


def _box(value: str) -> List[Window]:
    return [_window(part) for part in value.split(",")]


def _weights(config: RunConfig) -> WeightSystem:
    options = config.options
    if options.weights is not None:
        return WeightSystem.from_dict(load_document(options.weights))
    if options.degrees is None:
        raise UsageError("one of --degrees or --weights is required")
    return WeightSystem(degrees=tuple(options.degrees))


def _ideal(path: Optional[str], flag: str = "--ideal") -> MonomialIdeal:
    if path is None:
        raise UsageError(f"{flag} is required")
    return MonomialIdeal.from_dict(load_document(path))


def _filtration(config: RunConfig, default_horizon: int) -> Filtration:
    options = config.options
    if options.document is not None:
        return Filtration.from_dict(load_document(options.document), settings=config.settings)
    return Filtration(
        kind=FiltrationKind(options.filtration),
        base=_ideal(options.ideal),
        horizon=config.horizon or default_horizon,
        settings=config.settings,
    )


def _polyhedron(config: RunConfig) -> Tuple[Polyhedron, Optional[IntegerMatrix]]:
    options = config.options
    if options.polyhedron is not None:
        return Polyhedron.from_dict(load_document(options.polyhedron)), None
    if options.matrix is None or options.rhs is None:
        raise UsageError("give either --polyhedron or both --matrix and --rhs")
    matrix = IntegerMatrix.from_dict(load_document(options.matrix))
    return fiber_polytope(matrix, options.rhs), matrix


def _matrix_table(name: str, matrix: IntegerMatrix) -> List[str]:
    width = max((len(str(value)) for row in matrix.entries for value in row), default=1)
    return [f"{name} ="] + [
        "  " + " ".join(str(value).rjust(width) for value in row) for row in matrix.entries
    ]


def run_hnf(config: RunConfig) -> Report:
    matrix = IntegerMatrix.from_dict(load_document(_require(config.options.matrix, "--matrix")))
    result = hnf(matrix)
    return Report(
        payload=result.to_dict(),
        table="\n".join(_matrix_table("H", result.h) + _matrix_table("U", result.u)),
    )


def run_reduce(config: RunConfig) -> Report:
    polyhedron, matrix = _polyhedron(config)
    if matrix is not None:
        reduced = reduce_to_full_dim(matrix, config.options.rhs)
    else:
        reduced = reduce_polyhedron(polyhedron)
    if reduced is None:
        return Report(payload={"feasible": False}, table="no integer solution")
    return Report(payload={"feasible": True, "reduced": reduced.to_dict()})


def run_count(config: RunConfig) -> Report:
    polyhedron, _ = _polyhedron(config)
    if not config.options.points:
        count = count_lattice_points(polyhedron)
        return Report(
            payload={"count": str(count)}, header=("count",), rows=[[count]], table=str(count)
        )

    points = enumerate_lattice_points(polyhedron)
    return Report(
        payload={
            "count": str(len(points)),
            "points": [[str(value) for value in point] for point in points],
        },
        header=[f"x{index + 1}" for index in range(polyhedron.dim)],
        rows=[list(point) for point in points],
        table=str(len(points)),
    )


def run_vpf(config: RunConfig) -> Report:
    w = _weights(config)
    options = config.options
    if options.series is not None:
        series = hilbert_series(w, options.series)
        return Report(
            payload={
                "degrees": [str(degree) for degree in w.degrees],
                "series": [
                    {"mu": str(mu), "t": str(t), "value": str(value)}
                    for (mu, t), value in series.items()
                ],
            },
            header=("mu", "t", "value"),
            rows=[[mu, t, value] for (mu, t), value in series.items()],
        )
    if options.at is None or len(options.at) != 2:
        raise UsageError("vpf needs --at mu,t or --series T")

    mu, t = options.at
    value = evaluate(w, mu, t)
    return Report(
        payload={
            "degrees": [str(degree) for degree in w.degrees],
            "mu": str(mu),
            "t": str(t),
            "value": str(value),
        },
        header=("mu", "t", "value"),
        rows=[[mu, t, value]],
        table=str(value),
    )


def run_chambers(config: RunConfig) -> Report:
    w = _weights(config)
    chambers = chamber_complex(w)
    return Report(
        payload={
            "degrees": [str(degree) for degree in w.degrees],
            "chambers": [chamber.to_dict() for chamber in chambers],
        },
        table="\n".join(
            f"chamber {c.index}: rays {list(c.low_ray)} {list(c.high_ray)}, "
            f"lattice det {c.lattice.determinant}"
            for c in chambers
        ),
    )


def run_fit(config: RunConfig) -> Report:
    w = _weights(config)
    chambers = chamber_complex(w)
    if config.options.chamber is not None:
        chambers = [c for c in chambers if c.index == config.options.chamber]
        if not chambers:
            raise UsageError(f"no chamber {config.options.chamber} for degrees {list(w.degrees)}")

    fitted = []
    for chamber in chambers:
        quasi = fit_quasi_polynomial(w, chamber, config.fit, config.validate, config.settings)
        fitted.append({**chamber.to_dict(), **quasi.to_dict()})
    return Report(payload={"degrees": [str(d) for d in w.degrees], "chambers": fitted})


def run_ideal(config: RunConfig) -> Report:
    options = config.options
    ideal = _ideal(options.ideal)
    operation = options.op

    result: Any
    if operation == "show":
        result = ideal
    elif operation == "power":
        result = power(ideal, options.t)
    elif operation == "closure":
        result = integral_closure_power(ideal, options.t)
    elif operation == "ratliff-rush":
        closure = ratliff_rush(ideal, config.horizon, config.settings)
        return Report(payload=closure.to_dict(), table=str(closure.ideal))
    elif operation == "hilbert":
        value = hilbert_function(ideal, options.degree)
        return Report(
            payload={"degree": str(options.degree), "value": str(value)}, table=str(value)
        )
    else:
        other = _ideal(options.other, "--other")
        if operation == "reduction":
            r = is_reduction(other, ideal, config.horizon or config.settings.ratliff_rush_horizon)
            return Report(
                payload={"reduction_number": None if r is None else str(r)},
                table="none within horizon" if r is None else str(r),
            )
        combine: Dict[str, Callable[[MonomialIdeal, MonomialIdeal], MonomialIdeal]] = {
            "sum": add,
            "intersect": intersect,
            "product": multiply,
            "colon": colon,
        }
        result = combine[operation](ideal, other)

    return Report(
        payload=result.to_dict(),
        header=[f"e{index + 1}" for index in range(result.nvars)],
        rows=[list(generator) for generator in result.generators],
        table=str(result),
    )


def run_filtration(config: RunConfig) -> Report:
    options = config.options
    f = _filtration(config, default_horizon=5)
    terms = f.materialize()
    payload: Dict[str, Any] = {
        "filtration": f.to_dict(),
        "terms": {str(t): term.to_dict() for t, term in enumerate(terms)},
        "good": good_filtration_check(f, f.base).to_dict(),
    }
    if options.reduction_ideal is not None:
        j = Filtration(
            kind=FiltrationKind.POWERS,
            base=_ideal(options.reduction_ideal, "--reduction-ideal"),
            horizon=f.horizon,
            settings=config.settings,
        )
        payload["reduction"] = is_filtration_reduction(j, f, options.reduction_degree, f.horizon)

    return Report(
        payload=payload, table="\n".join(f"J_{t} = {term}" for t, term in enumerate(terms))
    )


def _betti_rows(table: BettiTable) -> List[List[Any]]:
    return [list(row) for row in table.to_csv_rows()]


def run_betti(config: RunConfig) -> Report:
    options = config.options
    if options.filtration is not None or options.document is not None:
        family = betti_family(
            _filtration(config, default_horizon=5), settings=config.settings
        )
        return Report(
            payload=family.to_dict(),
            header=("t", "i", "mu", "beta"),
            rows=family.to_csv_rows(),
            table="\n".join(
                f"t = {t}\n{table.render()}" for t, table in sorted(family.tables.items())
            ),
        )

    ideal = power(_ideal(options.ideal), options.power)
    if options.oracle:
        table = collapse_multigraded(ideal, taylor_betti_oracle(ideal, config.settings))
    else:
        table = graded_betti(ideal, config.settings)
    return Report(
        payload=table.to_dict(),
        header=("i", "mu", "beta"),
        rows=_betti_rows(table),
        table=table.render(),
    )


def run_regions(config: RunConfig) -> Report:
    options = config.options
    if config.fit is None or config.validate is None:
        raise UsageError("regions needs both --fit and --validate")
    last = max(config.fit[1], config.validate[1])
    f = _filtration(config, default_horizon=last)
    w = WeightSystem(degrees=tuple(f.base.generator_degrees()))
    family = betti_family(f, (1, last), config.settings)
    description = detect_regions(
        family, options.i, w, config.fit, config.validate, options.degree_cap, config.settings
    )

    payload = description.to_dict()
    if options.predict is not None:
        mu, t = options.predict
        beta = predict(description, mu, t)
        payload["prediction"] = {"mu": str(mu), "t": str(t), "beta": str(beta)}
    return Report(payload=payload, table=_regions_table(description))


def _regions_table(description: RegionDescription) -> str:
    lines = [f"tor_{description.i}: t0 = {description.t0}, D = {description.period}"]
    lines.extend(f"  L_{k}(t) = {line.a} t + {line.b}" for k, line in enumerate(description.lines))
    lines.extend(
        f"  region {region}, j = {j}: {poly.as_expr()}"
        for (region, j), poly in sorted(description.polys.items())
    )
    return "\n".join(lines)


def run_brion(config: RunConfig) -> Report:
    options = config.options
    if options.polygon is None or options.box is None:
        raise UsageError("brion needs --polygon and --box")
    genfun = polygon_genfun(options.polygon)
    series = truncate(genfun, options.box, options.direction)
    holds = brion_check(options.polygon, options.box, options.direction)
    return Report(
        payload={"holds": holds, "genfun": genfun.to_dict(), "series": series.to_dict()},
        header=[f"x{index + 1}" for index in range(len(options.box))] + ["coefficient"],
        rows=series.to_csv_rows(),
        table=f"brion identity holds: {holds}",
    )


def run_certify_ci(config: RunConfig) -> Report:
    options = config.options
    if options.degrees is None:
        raise UsageError("certify-ci needs --degrees")
    report = certify_ci_bridge(options.degrees, options.t_max, config.settings)
    return Report(payload=report.to_dict(), table=f"bridge holds: {report.holds}")


def _require(value: Optional[str], flag: str) -> str:
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


Check = Tuple[str, bool]


def _selftest_hnf() -> List[Check]:
    result = hnf(EXAMPLE_MATRIX)
    return [
        ("h of the example matrix", result.h.entries == ((1, 0, 0, 0), (0, 1, 0, 0))),
        ("a * u == h", EXAMPLE_MATRIX.matmul(result.u) == result.h),
    ]


def _selftest_reduce() -> List[Check]:
    reduced = reduce_to_full_dim(EXAMPLE_MATRIX, (30, 5))
    infeasible = reduce_to_full_dim(IntegerMatrix.from_rows([[2]]), (3,))
    return [
        ("fiber (30, 5) reduces to two dimensions", reduced is not None and reduced.q.dim == 2),
        ("2x = 3 has no integer solution", infeasible is None),
    ]


def _selftest_count() -> List[Check]:
    def _fiber_count(rhs: Tuple[int, int]) -> int:
        return count_lattice_points(fiber_polytope(EXAMPLE_MATRIX, rhs))

    return [
        ("fiber (30, 5) has 2 points", _fiber_count((30, 5)) == 2),
        ("fiber (0, 0) has 1 point", _fiber_count((0, 0)) == 1),
    ]


def _selftest_vpf() -> List[Check]:
    w = WeightSystem(degrees=(3, 5, 8, 9))
    return [
        ("phi(30, 5) == 2", evaluate(w, 30, 5) == 2),
        ("phi(0, 0) == 1", evaluate(w, 0, 0) == 1),
        ("phi(1, 5) == 0", evaluate(w, 1, 5) == 0),
    ]


def _selftest_chambers() -> List[Check]:
    def _chamber_count(*degrees: int) -> int:
        return len(chamber_complex(WeightSystem(degrees=degrees)))

    return [
        ("degrees 2, 3 give one chamber", _chamber_count(2, 3) == 1),
        ("degrees 3, 5, 8, 9 give three chambers", _chamber_count(3, 5, 8, 9) == 3),
    ]


def _selftest_fit() -> List[Check]:
    w = WeightSystem(degrees=(1, 1))
    quasi = fit_quasi_polynomial(w, chamber_complex(w)[0], (4, 8), (1, 3))
    return [
        ("phi of degrees 1, 1 is t + 1", all(quasi.evaluate(t, t) == t + 1 for t in range(1, 10)))
    ]


def _selftest_ideal() -> List[Check]:
    maximal = MonomialIdeal(nvars=2, generators=((1, 0), (0, 1)))
    squares = MonomialIdeal(nvars=2, generators=((2, 0), (0, 2)))
    return [
        ("(x, y)^2 has 3 generators", len(power(maximal, 2).generators) == 3),
        ("(x^2, y^2) is a reduction of (x, y)^2", is_reduction(squares, power(maximal, 2), 6) == 1),
    ]


def _selftest_filtration() -> List[Check]:
    maximal = MonomialIdeal(nvars=2, generators=((1, 0), (0, 1)))
    f = Filtration(kind=FiltrationKind.POWERS, base=maximal, horizon=3)
    return [("powers of (x, y) are good from n0 = 0", good_filtration_check(f, maximal).n0 == 0)]


def _selftest_betti() -> List[Check]:
    table = graded_betti(MonomialIdeal(nvars=2, generators=((1, 0), (0, 1))))
    return [
        ("(x, y) has beta_0,1 = 2", table.beta(0, 1) == 2),
        ("(x, y) has beta_1,2 = 1", table.beta(1, 2) == 1),
    ]


def _selftest_regions() -> List[Check]:
    ideal = MonomialIdeal(nvars=2, generators=((2, 0), (0, 3)))
    family = betti_family(Filtration(kind=FiltrationKind.POWERS, base=ideal, horizon=7))
    description = detect_regions(family, 0, WeightSystem(degrees=(2, 3)), (3, 5), (6, 7))
    lines = [(line.a, line.b) for line in description.lines]
    return [
        ("tor_0 of (x^2, y^3)^t lies between 2t and 3t", lines == [(2, 0), (3, 0)]),
        ("beta_0,15(J_6) == 1", predict(description, 15, 6) == 1),
    ]


def _selftest_brion() -> List[Check]:
    return [
        ("unit square", brion_check([[0, 0], [1, 0], [1, 1], [0, 1]], [(-1, 3), (-1, 3)])),
        ("segment 0..5", brion_check([[0], [5]], [(-2, 7)])),
    ]


def _selftest_certify_ci() -> List[Check]:
    return [("(x^2, y^3) up to t = 3", certify_ci_bridge((2, 3), 3).holds)]


Handler = Callable[[RunConfig], Report]
SUBCOMMANDS: Dict[str, Tuple[Handler, Callable[[], List[Check]], str]] = {
    "hnf": (run_hnf, _selftest_hnf, "hermite normal form of an integer matrix"),
    "reduce": (run_reduce, _selftest_reduce, "full dimensional reduction of a fiber polytope"),
    "count": (run_count, _selftest_count, "count (or list) lattice points of a polytope"),
    "vpf": (run_vpf, _selftest_vpf, "vector partition function values and series"),
    "chambers": (run_chambers, _selftest_chambers, "chamber complex of a weight system"),
    "fit": (run_fit, _selftest_fit, "certified chamber quasi-polynomials"),
    "ideal": (run_ideal, _selftest_ideal, "monomial ideal operations"),
    "filtration": (run_filtration, _selftest_filtration, "filtration terms and goodness"),
    "betti": (run_betti, _selftest_betti, "graded betti tables"),
    "regions": (run_regions, _selftest_regions, "asymptotic betti regions along a filtration"),
    "brion": (run_brion, _selftest_brion, "brion identity for a lattice polygon"),
    "certify-ci": (run_certify_ci, _selftest_certify_ci, "complete intersection bridge"),
}


def _add_subcommand_arguments(name: str, parser: argparse.ArgumentParser) -> None:
    if name in ("hnf", "reduce", "count"):
        parser.add_argument("--matrix", help="integer matrix document")
    if name in ("reduce", "count"):
        parser.add_argument("--rhs", type=_integers, help="right hand side, e.g. 30,5")
        parser.add_argument("--polyhedron", help="polyhedron document")
    if name == "count":
        parser.add_argument("--points", action="store_true", help="list the points as well")
    if name in ("vpf", "chambers", "fit", "certify-ci"):
        parser.add_argument("--degrees", type=_integers, help="degrees, e.g. 3,5,8,9")
    if name in ("vpf", "chambers", "fit"):
        parser.add_argument("--weights", help='weight system document {"degrees": [...]}')
    if name == "vpf":
        parser.add_argument("--at", type=_integers, help="point mu,t")
        parser.add_argument("--series", type=_nonnegative, help="hilbert series up to this t")
    if name == "fit":
        parser.add_argument("--chamber", type=_nonnegative, help="only fit this chamber")
    if name in ("fit", "regions"):
        parser.add_argument("--fit", type=_window, help="fit window, e.g. 3..9")
        parser.add_argument("--validate", type=_window, help="validation window, e.g. 10..12")
    if name in ("ideal", "filtration", "betti", "regions"):
        parser.add_argument("--ideal", help="monomial ideal document")
        parser.add_argument(
            "--horizon", type=_nonnegative, help="horizon for closures and filtrations"
        )
    if name in ("filtration", "betti", "regions"):
        parser.add_argument(
            "--filtration",
            choices=[kind.value for kind in FiltrationKind if kind is not FiltrationKind.EXPLICIT],
            default="powers" if name != "betti" else None,
            help="filtration kind built from --ideal",
        )
        parser.add_argument("--document", help="filtration document (any kind)")
    if name == "ideal":
        parser.add_argument(
            "--op",
            default="show",
            choices=(
                "show",
                "power",
                "closure",
                "ratliff-rush",
                "hilbert",
                "sum",
                "intersect",
                "product",
                "colon",
                "reduction",
            ),
        )
        parser.add_argument("--other", help="second ideal document")
        parser.add_argument("--t", type=_nonnegative, default=1, help="power index")
        parser.add_argument("--degree", type=int, default=0, help="degree for hilbert")
    if name == "filtration":
        parser.add_argument("--reduction-ideal", help="check powers of this ideal as a reduction")
        parser.add_argument("--reduction-degree", type=_nonnegative, default=1)
    if name == "betti":
        parser.add_argument(
            "--power", type=_nonnegative, default=1, help="betti table of the ideal^power"
        )
        parser.add_argument("--oracle", action="store_true", help="use the taylor complex")
    if name == "regions":
        parser.add_argument("--i", type=_nonnegative, default=0, help="homological degree")
        parser.add_argument("--degree-cap", type=_nonnegative, help="region polynomial degree cap")
        parser.add_argument("--predict", type=_integers, help="also predict at mu,t")
    if name == "brion":
        parser.add_argument("--polygon", type=_points, help="vertices, e.g. 0,0;2,0;0,2")
        parser.add_argument("--box", type=_box, help="box, e.g. -1..3,-1..3")
        parser.add_argument("--direction", type=_integers, help="expansion direction")
    if name == "certify-ci":
        parser.add_argument("--t-max", type=_nonnegative, default=4, help="largest power checked")


def build_parser() -> argparse.ArgumentParser:
    """
    Build the argument parser w/ one sub parser per subcommand

    Args:
        N/A

    Returns:
        ArgumentParser: the parser

    Raises:
        N/A

    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--config", help="settings document (yaml or json)")
    common.add_argument("--log-level", default="warning", help="log level for stderr logging")
    common.add_argument("--selftest", action="store_true", help="run built in examples only")

    parser = argparse.ArgumentParser(prog="betti-regions", description="Exact betti regions")
    parser.add_argument("--version", action="version", version=__version__)
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for name, (_, _, help_text) in SUBCOMMANDS.items():
        subparser = subparsers.add_parser(name, parents=[common], help=help_text)
        _add_subcommand_arguments(name, subparser)
    return parser


def _selftest_report(name: str) -> Tuple[Report, bool]:
    checks = SUBCOMMANDS[name][1]()
    passed = all(ok for _, ok in checks)
    payload = {
        "subcommand": name,
        "passed": passed,
        "checks": [{"name": check, "ok": ok} for check, ok in checks],
    }
    table = "\n".join(f"{'ok  ' if ok else 'FAIL'} {check}" for check, ok in checks)
    return (
        Report(
            payload=payload,
            header=("check", "ok"),
            rows=[[check, ok] for check, ok in checks],
            table=table,
        ),
        passed,
    )


def _attach_negative_values(argv: Sequence[str]) -> List[str]:
    # argparse reads "-1..3" or "-1,0;2,0" as a flag, so glue it onto the option before it
    args: List[str] = []
    for arg in argv:
        previous = args[-1] if args else ""
        if (
            previous.startswith("--")
            and previous != "--"
            and "=" not in previous
            and NEGATIVE_VALUE_PATTERN.match(arg)
        ):
            args[-1] = f"{previous}={arg}"
        else:
            args.append(arg)
    return args


def run(argv: Sequence[str]) -> int:
    """
    Run one subcommand

    Args:
        argv: arguments w/o the program name

    Returns:
        int: 0 on success, 1 on domain/input errors (error json on stderr), 2 on usage errors

    Raises:
        N/A

    """
    parser = build_parser()
    try:
        options = parser.parse_args(_attach_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)

    handler = enable_logging(options.log_level, context=options.subcommand)
    try:
        config = RunConfig.from_namespace(options)
        logger.debug(f"running {config.subcommand} w/ settings {config.settings.to_dict()}")
        if config.selftest:
            report, passed = _selftest_report(config.subcommand)
            write_output(report.render(config.fmt), config.output)
            return 0 if passed else 1

        report = SUBCOMMANDS[config.subcommand][0](config)
        write_output(report.render(config.fmt), config.output)
        return 0
    except UsageError as exc:
        sys.stderr.write(f"betti-regions {options.subcommand}: error: {exc}\n")
        return 2
    except BettiRegionsException as exc:
        sys.stderr.write(dump_json(exc.to_dict()))
        return 1
    finally:
        logger.removeHandler(handler)


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)
