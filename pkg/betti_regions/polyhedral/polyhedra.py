"""betti_regions.polyhedral.polyhedra"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor, gcd
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from betti_regions.documents import parse_integer_list, require_keys
from betti_regions.exceptions import (
    DegenerateInputError,
    DimensionMismatchError,
    InputDocumentError,
    RankDeficientError,
    UnboundedPolyhedronError,
)
from betti_regions.logging import logger
from betti_regions.polyhedral.exactlinalg import (
    HnfResult,
    IntegerMatrix,
    Vector,
    hnf,
    solve_with_hnf,
)

# a.x <= b with exact rational coefficients
Constraint = Tuple[Tuple[Fraction, ...], Fraction]


@dataclass(frozen=True)
class Polyhedron:
    """
    Rational polyhedron {x : eq_rows.x == eq_rhs, ineq_rows.x <= ineq_rhs}

    May be empty or unbounded; boundedness is queried, never assumed

    """

    dim: int
    eq_rows: Tuple[Vector, ...] = ()
    eq_rhs: Vector = ()
    ineq_rows: Tuple[Vector, ...] = ()
    ineq_rhs: Vector = ()

    def __post_init__(self) -> None:
        if len(self.eq_rows) != len(self.eq_rhs) or len(self.ineq_rows) != len(self.ineq_rhs):
            raise DimensionMismatchError("constraint rows and right hand sides differ in length")
        if any(len(row) != self.dim for row in self.eq_rows + self.ineq_rows):
            raise DimensionMismatchError(f"all constraint rows must have {self.dim} columns")

    @property
    def equalities(self) -> Optional[Tuple[IntegerMatrix, Vector]]:
        if not self.eq_rows:
            return None
        return IntegerMatrix.from_rows(self.eq_rows), self.eq_rhs

    @property
    def inequalities(self) -> Optional[Tuple[IntegerMatrix, Vector]]:
        if not self.ineq_rows:
            return None
        return IntegerMatrix.from_rows(self.ineq_rows), self.ineq_rhs

    def with_inequality(self, row: Sequence[int], rhs: int) -> "Polyhedron":
        """
        Copy of the polyhedron w/ one more inequality row.x <= rhs

        Args:
            row: coefficient row
            rhs: bound

        Returns:
            Polyhedron: the cut polyhedron

        Raises:
            N/A

        """
        return Polyhedron(
            dim=self.dim,
            eq_rows=self.eq_rows,
            eq_rhs=self.eq_rhs,
            ineq_rows=self.ineq_rows + (tuple(row),),
            ineq_rhs=self.ineq_rhs + (rhs,),
        )

    def contains(self, point: Sequence[int]) -> bool:
        """
        Exact point membership

        Args:
            point: point to test

        Returns:
            bool: True if every constraint holds

        Raises:
            N/A

        """
        return all(
            sum(a * x for a, x in zip(row, point)) == rhs
            for row, rhs in zip(self.eq_rows, self.eq_rhs)
        ) and all(
            sum(a * x for a, x in zip(row, point)) <= rhs
            for row, rhs in zip(self.ineq_rows, self.ineq_rhs)
        )

    def to_dict(self) -> Dict[str, Any]:
        def _block(rows: Tuple[Vector, ...], rhs: Vector) -> Optional[Dict[str, Any]]:
            if not rows:
                return None
            return {
                "matrix": IntegerMatrix.from_rows(rows).to_dict(),
                "rhs": [str(value) for value in rhs],
            }

        return {
            "dim": self.dim,
            "eq": _block(self.eq_rows, self.eq_rhs),
            "ineq": _block(self.ineq_rows, self.ineq_rhs),
        }

    @classmethod
    def from_dict(cls, document: Any) -> "Polyhedron":
        """
        Load a polyhedron from its json document

        Args:
            document: {"dim": n, "eq": {"matrix": ..., "rhs": [...]} | null, "ineq": ... }

        Returns:
            Polyhedron: the polyhedron

        Raises:
            InputDocumentError: if the document is malformed

        """
        require_keys(document, ("dim",), "polyhedron")
        blocks = {}
        for key in ("eq", "ineq"):
            block = document.get(key)
            if block is None:
                blocks[key] = ((), ())
                continue
            require_keys(block, ("matrix", "rhs"), f"polyhedron {key}")
            matrix = IntegerMatrix.from_dict(block["matrix"])
            blocks[key] = (matrix.entries, tuple(parse_integer_list(block["rhs"], f"{key} rhs")))
        try:
            return cls(
                dim=int(document["dim"]),
                eq_rows=blocks["eq"][0],
                eq_rhs=blocks["eq"][1],
                ineq_rows=blocks["ineq"][0],
                ineq_rhs=blocks["ineq"][1],
            )
        except DimensionMismatchError as exc:
            raise InputDocumentError(exc.message) from exc


@dataclass(frozen=True)
class ReducedPolytope:
    # full dimensional polyhedron in the kernel coordinates
    q: Polyhedron
    x0: Vector
    generators: IntegerMatrix

    def lift(self, point: Sequence[int]) -> Vector:
        """
        Map a point of q to the source polyhedron, x = x0 + generators * point

        Args:
            point: integer point of q

        Returns:
            Vector: the corresponding source point

        Raises:
            N/A

        """
        if self.generators.cols == 0:
            return self.x0
        offset = self.generators.apply(point)
        return tuple(a + b for a, b in zip(self.x0, offset))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q.to_dict(),
            "x0": [str(value) for value in self.x0],
            "generators": self.generators.to_dict(),
        }


def fiber_polytope(a: IntegerMatrix, b: Sequence[int]) -> Polyhedron:
    """
    The fiber {x : a.x == b, x >= 0}

    Args:
        a: integer matrix
        b: right hand side, length rows(a)

    Returns:
        Polyhedron: the fiber polytope, written w/ inequalities -x <= 0

    Raises:
        DimensionMismatchError: if len(b) != rows(a)

    """
    if len(b) != a.rows:
        raise DimensionMismatchError(f"right hand side of length {len(b)} for {a.rows} rows")
    return Polyhedron(
        dim=a.cols,
        eq_rows=a.entries,
        eq_rhs=tuple(b),
        ineq_rows=tuple(
            tuple(-1 if i == j else 0 for j in range(a.cols)) for i in range(a.cols)
        ),
        ineq_rhs=tuple(0 for _ in range(a.cols)),
    )


@lru_cache(maxsize=256)
def _cached_hnf(a: IntegerMatrix) -> HnfResult:
    return hnf(a)


def reduce_polyhedron(p: Polyhedron) -> Optional[ReducedPolytope]:
    """
    Trade the equalities of p for kernel coordinates

    Substitutes the general integer solution x = x0 + G.lambda of the equalities into the
    inequalities, giving a full dimensional system whose integer points are in bijection with
    those of p. A polyhedron w/out equalities maps to itself (x0 = 0, G = identity).

    Args:
        p: polyhedron

    Returns:
        ReducedPolytope: the reduced system, or None if the equalities have no integer solution

    Raises:
        N/A

    """
    if not p.eq_rows:
        return ReducedPolytope(
            q=Polyhedron(dim=p.dim, ineq_rows=p.ineq_rows, ineq_rhs=p.ineq_rhs),
            x0=tuple(0 for _ in range(p.dim)),
            generators=IntegerMatrix.identity(p.dim),
        )

    result = _cached_hnf(IntegerMatrix.from_rows(p.eq_rows))
    x0 = solve_with_hnf(result, p.eq_rhs)
    if x0 is None:
        logger.debug("equalities have no integer solution, fiber has no lattice points")
        return None

    kernel = [result.u.column(index) for index in range(result.rank, p.dim)]
    generators = IntegerMatrix.from_columns(kernel, nrows=p.dim)

    rows = []
    rhs = []
    for row, bound in zip(p.ineq_rows, p.ineq_rhs):
        rows.append(tuple(sum(a * g for a, g in zip(row, column)) for column in kernel))
        rhs.append(bound - sum(a * x for a, x in zip(row, x0)))

    return ReducedPolytope(
        q=Polyhedron(dim=len(kernel), ineq_rows=tuple(rows), ineq_rhs=tuple(rhs)),
        x0=x0,
        generators=generators,
    )


def reduce_to_full_dim(a: IntegerMatrix, b: Sequence[int]) -> Optional[ReducedPolytope]:
    """
    Full dimensional reduction of the fiber polytope of (a, b)

    Args:
        a: full row rank integer matrix
        b: right hand side

    Returns:
        ReducedPolytope: reduced system, or None when a.x == b has no integer solution

    Raises:
        RankDeficientError: if a does not have full row rank

    """
    rank = _cached_hnf(a).rank
    if rank != a.rows:
        msg = f"matrix has rank {rank} but {a.rows} rows, fiber reduction needs full row rank"
        logger.critical(msg)
        raise RankDeficientError(msg)
    return reduce_polyhedron(fiber_polytope(a, b))


def _tidy(constraints: Sequence[Constraint]) -> Optional[List[Constraint]]:
    # scale rows so the leading nonzero coefficient is +-1, keep the tightest rhs per row
    tightest: Dict[Tuple[Fraction, ...], Fraction] = {}
    for coefficients, rhs in constraints:
        lead = next((value for value in coefficients if value), None)
        if lead is None:
            if rhs < 0:
                return None
            continue
        scale = abs(lead)
        coefficients = tuple(value / scale for value in coefficients)
        rhs = rhs / scale
        if coefficients not in tightest or rhs < tightest[coefficients]:
            tightest[coefficients] = rhs
    return list(tightest.items())


def _eliminate(constraints: Sequence[Constraint], index: int) -> Optional[List[Constraint]]:
    # fourier-motzkin: combine every upper bound on x_index w/ every lower bound
    upper = [c for c in constraints if c[0][index] > 0]
    lower = [c for c in constraints if c[0][index] < 0]
    combined = [c for c in constraints if c[0][index] == 0]
    for up_coefficients, up_rhs in upper:
        for low_coefficients, low_rhs in lower:
            up_scale = -low_coefficients[index]
            low_scale = up_coefficients[index]
            combined.append(
                (
                    tuple(
                        up_scale * u + low_scale * v
                        for u, v in zip(up_coefficients, low_coefficients)
                    ),
                    up_scale * up_rhs + low_scale * low_rhs,
                )
            )
    return _tidy(combined)


def _constraints(p: Polyhedron) -> Optional[List[Constraint]]:
    rows: List[Constraint] = []
    for row, rhs in zip(p.ineq_rows, p.ineq_rhs):
        rows.append((tuple(Fraction(value) for value in row), Fraction(rhs)))
    for row, rhs in zip(p.eq_rows, p.eq_rhs):
        rows.append((tuple(Fraction(value) for value in row), Fraction(rhs)))
        rows.append((tuple(Fraction(-value) for value in row), Fraction(-rhs)))
    return _tidy(rows)


def _single_variable_bounds(
    constraints: Sequence[Constraint], index: int
) -> Tuple[Optional[Fraction], Optional[Fraction]]:
    low: Optional[Fraction] = None
    high: Optional[Fraction] = None
    for coefficients, rhs in constraints:
        value = coefficients[index]
        if value > 0:
            bound = rhs / value
            high = bound if high is None else min(high, bound)
        elif value < 0:
            bound = rhs / value
            low = bound if low is None else max(low, bound)
    return low, high


def _project(
    constraints: Sequence[Constraint], dim: int, index: int
) -> Optional[Tuple[Optional[Fraction], Optional[Fraction]]]:
    remaining: Optional[List[Constraint]] = list(constraints)
    for other in range(dim):
        if other == index:
            continue
        remaining = _eliminate(remaining, other)  # type: ignore[arg-type]
        if remaining is None:
            return None
    low, high = _single_variable_bounds(remaining, index)  # type: ignore[arg-type]
    if low is not None and high is not None and low > high:
        return None
    return low, high


def rational_feasible(p: Polyhedron) -> bool:
    """
    Exact rational feasibility by eliminating every variable

    Args:
        p: polyhedron

    Returns:
        bool: True iff p contains a rational point

    Raises:
        N/A

    """
    constraints = _constraints(p)
    for index in range(p.dim):
        if constraints is None:
            return False
        constraints = _eliminate(constraints, index)
    return constraints is not None


def coordinate_bounds(p: Polyhedron) -> Optional[List[Tuple[Fraction, Fraction]]]:
    """
    Exact per coordinate bounds of a polyhedron, by projecting onto each axis

    Args:
        p: polyhedron

    Returns:
        list: (low, high) per coordinate, or None if p is empty

    Raises:
        UnboundedPolyhedronError: if some coordinate is unbounded

    """
    constraints = _constraints(p)
    if constraints is None:
        return None

    bounds = []
    for index in range(p.dim):
        projected = _project(constraints, p.dim, index)
        if projected is None:
            return None
        low, high = projected
        if low is None or high is None:
            msg = f"polyhedron is unbounded along coordinate {index}"
            logger.critical(msg)
            raise UnboundedPolyhedronError(msg, witness=index)
        bounds.append((low, high))
    return bounds


def _substitute(constraints: Sequence[Constraint], value: int) -> Optional[List[Constraint]]:
    return _tidy(
        [(coefficients[1:], rhs - coefficients[0] * value) for coefficients, rhs in constraints]
    )


def _walk(constraints: List[Constraint], dim: int, prefix: Vector) -> Iterator[Vector]:
    if dim == 0:
        yield prefix
        return

    if dim == 1:
        low, high = _single_variable_bounds(constraints, 0)
        for value in range(ceil(low), floor(high) + 1):  # type: ignore[arg-type]
            yield prefix + (value,)
        return

    projected = _project(constraints, dim, 0)
    if projected is None:
        return
    low, high = projected
    for value in range(ceil(low), floor(high) + 1):  # type: ignore[arg-type]
        remaining = _substitute(constraints, value)
        if remaining is not None:
            yield from _walk(remaining, dim - 1, prefix + (value,))


def _count(constraints: List[Constraint], dim: int) -> int:
    if dim == 0:
        return 1

    if dim == 1:
        low, high = _single_variable_bounds(constraints, 0)
        return max(0, floor(high) - ceil(low) + 1)  # type: ignore[arg-type]

    projected = _project(constraints, dim, 0)
    if projected is None:
        return 0
    low, high = projected
    total = 0
    for value in range(ceil(low), floor(high) + 1):  # type: ignore[arg-type]
        remaining = _substitute(constraints, value)
        if remaining is not None:
            total += _count(remaining, dim - 1)
    return total


def _full_dimensional_start(p: Polyhedron) -> Optional[Tuple[ReducedPolytope, List[Constraint]]]:
    reduced = reduce_polyhedron(p)
    if reduced is None:
        return None
    if coordinate_bounds(reduced.q) is None:
        return None
    constraints = _constraints(reduced.q)
    if constraints is None:
        return None
    return reduced, constraints


def enumerate_lattice_points(p: Polyhedron) -> List[Vector]:
    """
    Exact list of the integer points of a bounded polyhedron

    Equalities are first traded for kernel coordinates, then each coordinate is walked between
    the ceil/floor of its exact fourier-motzkin bounds.

    Args:
        p: polyhedron

    Returns:
        list: duplicate free, lexicographically sorted integer points

    Raises:
        UnboundedPolyhedronError: if p is unbounded (and nonempty over the rationals)

    """
    start = _full_dimensional_start(p)
    if start is None:
        return []
    reduced, constraints = start
    points = sorted(reduced.lift(point) for point in _walk(constraints, reduced.q.dim, ()))
    logger.debug(f"enumerated {len(points)} lattice points in dimension {p.dim}")
    return points


def count_lattice_points(p: Polyhedron) -> int:
    """
    Number of integer points of a bounded polyhedron

    Same walk as enumerate_lattice_points but the last coordinate is counted by interval length

    Args:
        p: polyhedron

    Returns:
        int: point count

    Raises:
        UnboundedPolyhedronError: if p is unbounded (and nonempty over the rationals)

    """
    start = _full_dimensional_start(p)
    if start is None:
        return 0
    reduced, constraints = start
    return _count(constraints, reduced.q.dim)


def _cross(o: Sequence[int], a: Sequence[int], b: Sequence[int]) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p: Sequence[int], q: Sequence[int], r: Sequence[int]) -> bool:
    return min(p[0], r[0]) <= q[0] <= max(p[0], r[0]) and min(p[1], r[1]) <= q[1] <= max(
        p[1], r[1]
    )


def _segments_intersect(
    p1: Sequence[int], p2: Sequence[int], p3: Sequence[int], p4: Sequence[int]
) -> bool:
    d1 = _cross(p3, p4, p1)
    d2 = _cross(p3, p4, p2)
    d3 = _cross(p1, p2, p3)
    d4 = _cross(p1, p2, p4)
    if ((d1 > 0 > d2) or (d1 < 0 < d2)) and ((d3 > 0 > d4) or (d3 < 0 < d4)):
        return True
    return (
        (d1 == 0 and _on_segment(p3, p1, p4))
        or (d2 == 0 and _on_segment(p3, p2, p4))
        or (d3 == 0 and _on_segment(p1, p3, p2))
        or (d4 == 0 and _on_segment(p1, p4, p2))
    )


def _check_simple_polygon(vertices: Sequence[Vector]) -> int:
    count = len(vertices)
    if count < 3:
        raise DegenerateInputError(f"a polygon needs at least 3 vertices, got {count}")

    twice_area = 0
    for i in range(count):
        (x0, y0), (x1, y1) = vertices[i], vertices[(i + 1) % count]
        twice_area += x0 * y1 - x1 * y0
    if twice_area == 0:
        raise DegenerateInputError("polygon has zero area", witness=[list(v) for v in vertices])

    edges = [(vertices[i], vertices[(i + 1) % count]) for i in range(count)]
    for i in range(count):
        for j in range(i + 1, count):
            adjacent = j == i + 1 or (i == 0 and j == count - 1)
            if not adjacent:
                if _segments_intersect(*edges[i], *edges[j]):
                    raise DegenerateInputError(
                        "polygon edges intersect", witness=[list(edges[i][0]), list(edges[j][0])]
                    )
                continue
            # adjacent edges may only share their common vertex, never fold back over each other
            shared = edges[i][1] if j == i + 1 else edges[i][0]
            other_i = edges[i][0] if j == i + 1 else edges[i][1]
            other_j = edges[j][1] if j == i + 1 else edges[j][0]
            if _cross(shared, other_i, other_j) == 0:
                dot = (other_i[0] - shared[0]) * (other_j[0] - shared[0]) + (
                    other_i[1] - shared[1]
                ) * (other_j[1] - shared[1])
                if dot > 0:
                    raise DegenerateInputError(
                        "polygon edges overlap", witness=[list(shared)]
                    )
    return twice_area


def pick_count(vertices: Sequence[Sequence[int]]) -> int:
    """
    Lattice point count of a simple lattice polygon from pick's formula

    |P cap Z^2| = area + boundary / 2 + 1, w/ the area from the shoelace formula and the
    boundary count from edge gcds

    Args:
        vertices: cyclically ordered integer vertices

    Returns:
        int: number of lattice points in the closed polygon

    Raises:
        DegenerateInputError: for zero area or self intersecting input

    """
    points = [tuple(vertex) for vertex in vertices]
    twice_area = abs(_check_simple_polygon(points))
    boundary = 0
    for i in range(len(points)):
        (x0, y0), (x1, y1) = points[i], points[(i + 1) % len(points)]
        boundary += gcd(abs(x1 - x0), abs(y1 - y0))
    return (twice_area + boundary) // 2 + 1


def convex_hull_2d(points: Sequence[Sequence[int]]) -> List[Vector]:
    """
    Counter clockwise convex hull, collinear boundary points dropped (monotone chain)

    Args:
        points: integer points

    Returns:
        list: hull vertices in counter clockwise order

    Raises:
        N/A

    """
    unique = sorted(set(tuple(point) for point in points))
    if len(unique) <= 2:
        return unique

    lower: List[Vector] = []
    for point in unique:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], point) <= 0:
            lower.pop()
        lower.append(point)
    upper: List[Vector] = []
    for point in reversed(unique):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], point) <= 0:
            upper.pop()
        upper.append(point)
    return lower[:-1] + upper[:-1]


def polygon_polyhedron(vertices: Sequence[Sequence[int]]) -> Polyhedron:
    """
    H-representation of a convex lattice polygon, a lattice segment or a single point

    Args:
        vertices: one vertex (point, any dimension), two vertices (segment in dimension 1 or 2) or
            at least three cyclically ordered vertices of a convex polygon

    Returns:
        Polyhedron: the polytope

    Raises:
        DegenerateInputError: for non convex or zero area polygons

    """
    points = [tuple(int(value) for value in vertex) for vertex in vertices]
    if not points:
        raise DegenerateInputError("no vertices given")
    dim = len(points[0])

    if len(points) == 1:
        return Polyhedron(
            dim=dim,
            eq_rows=tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)),
            eq_rhs=points[0],
        )

    if len(points) == 2:
        start, end = points
        direction = tuple(b - a for a, b in zip(start, end))
        if not any(direction):
            raise DegenerateInputError("segment endpoints coincide")
        eq_rows: Tuple[Vector, ...] = ()
        eq_rhs: Vector = ()
        if dim == 2:
            normal = (-direction[1], direction[0])
            eq_rows = (normal,)
            eq_rhs = (normal[0] * start[0] + normal[1] * start[1],)
        elif dim != 1:
            raise DegenerateInputError(f"segments are supported in dimension 1 or 2, got {dim}")
        along = lambda point: sum(d * x for d, x in zip(direction, point))  # noqa: E731
        return Polyhedron(
            dim=dim,
            eq_rows=eq_rows,
            eq_rhs=eq_rhs,
            ineq_rows=(direction, tuple(-d for d in direction)),
            ineq_rhs=(along(end), -along(start)),
        )

    twice_area = _check_simple_polygon(points)
    if twice_area < 0:
        points = list(reversed(points))
    count = len(points)
    for i in range(count):
        if _cross(points[i], points[(i + 1) % count], points[(i + 2) % count]) <= 0:
            raise DegenerateInputError(
                "polygon is not strictly convex", witness=list(points[(i + 1) % count])
            )

    rows = []
    rhs = []
    for i in range(count):
        start, end = points[i], points[(i + 1) % count]
        dx, dy = end[0] - start[0], end[1] - start[1]
        # interior lies to the left of each counter clockwise edge
        rows.append((dy, -dx))
        rhs.append(dy * start[0] - dx * start[1])
    return Polyhedron(dim=2, ineq_rows=tuple(rows), ineq_rhs=tuple(rhs))
