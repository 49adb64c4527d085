"""betti_regions.polyhedral.genfun"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import ceil, floor, lcm
from typing import Any, Dict, List, Optional, Sequence, Tuple

from betti_regions.exceptions import DegenerateInputError, NotExpandableError
from betti_regions.logging import logger
from betti_regions.polyhedral.exactlinalg import (
    RationalVector,
    Vector,
    primitive,
    rational_inverse,
    rational_rank,
)
from betti_regions.polyhedral.polyhedra import enumerate_lattice_points, polygon_polyhedron

Box = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class GenFunTerm:
    # sign * (sum of x^p over numerator) / prod over denominator of (1 - x^r)
    sign: int
    numerator: Tuple[Vector, ...]
    denominator: Tuple[Vector, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sign": self.sign,
            "numerator": [[str(value) for value in point] for point in self.numerator],
            "denominator": [[str(value) for value in ray] for ray in self.denominator],
        }


@dataclass(frozen=True)
class RationalGenFun:
    """Signed sum of simplicial rational generating function terms"""

    terms: Tuple[GenFunTerm, ...] = ()

    def __add__(self, other: "RationalGenFun") -> "RationalGenFun":
        return RationalGenFun(terms=self.terms + other.terms)

    def negated(self) -> "RationalGenFun":
        return RationalGenFun(
            terms=tuple(
                GenFunTerm(sign=-term.sign, numerator=term.numerator, denominator=term.denominator)
                for term in self.terms
            )
        )

    def to_dict(self) -> List[Dict[str, Any]]:
        return [term.to_dict() for term in self.terms]


@dataclass
class TruncatedSeries:
    """
    Exact coefficients of a formal laurent series restricted to a box

    Only nonzero coefficients are stored, so two series over the same box compare equal exactly
    when all their coefficients agree.

    """

    box: Box
    coefficients: Dict[Vector, int] = field(default_factory=dict)

    def add(self, point: Vector, value: int) -> None:
        total = self.coefficients.get(point, 0) + value
        if total:
            self.coefficients[point] = total
        else:
            self.coefficients.pop(point, None)

    def coefficient(self, point: Sequence[int]) -> int:
        return self.coefficients.get(tuple(point), 0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "box": [[str(low), str(high)] for low, high in self.box],
            "coefficients": [
                {"point": [str(value) for value in point], "value": str(value)}
                for point, value in sorted(self.coefficients.items())
            ],
        }

    def to_csv_rows(self) -> List[List[Any]]:
        return [list(point) + [value] for point, value in sorted(self.coefficients.items())]


@dataclass(frozen=True)
class VertexCone:
    apex: RationalVector
    rays: Tuple[Vector, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "apex": [str(value) for value in self.apex],
            "rays": [[str(value) for value in ray] for ray in self.rays],
        }


def _as_rational(vertex: Sequence[Any]) -> RationalVector:
    return tuple(Fraction(value) for value in vertex)


def _integral_direction(start: RationalVector, end: RationalVector) -> Vector:
    difference = [b - a for a, b in zip(start, end)]
    scale = lcm(*(value.denominator for value in difference))
    return primitive([int(value * scale) for value in difference])


def _cyclic_order(count: int, edges: Sequence[Tuple[int, int]]) -> List[int]:
    neighbors: Dict[int, List[int]] = {index: [] for index in range(count)}
    for a, b in edges:
        neighbors[a].append(b)
        neighbors[b].append(a)
    if any(len(adjacent) != 2 for adjacent in neighbors.values()):
        raise DegenerateInputError("polygon edges must give every vertex exactly two neighbors")

    order = [0]
    previous, current = None, 0
    while True:
        following = [index for index in neighbors[current] if index != previous][0]
        if following == 0:
            break
        order.append(following)
        previous, current = current, following
    if len(order) != count:
        raise DegenerateInputError("polygon edges do not form a single cycle")
    return order


def vertex_cones(
    vertices: Sequence[Sequence[Any]], edges: Optional[Sequence[Tuple[int, int]]] = None
) -> List[VertexCone]:
    """
    Tangent cone of each vertex of a convex polygon, segment or point

    Args:
        vertices: rational vertices; for three or more they must be cyclically ordered unless
            edges are given
        edges: optional vertex adjacency as index pairs, used to recover the cyclic order

    Returns:
        list: one VertexCone per vertex, rays primitive integer vectors (prev - v, next - v)

    Raises:
        DegenerateInputError: for non convex input or coincident vertices

    """
    points = [_as_rational(vertex) for vertex in vertices]
    if not points:
        raise DegenerateInputError("no vertices given")

    if len(points) == 1:
        return [VertexCone(apex=points[0], rays=())]

    if len(points) == 2:
        if points[0] == points[1]:
            raise DegenerateInputError(
                "segment endpoints coincide", witness=[str(value) for value in points[0]]
            )
        return [
            VertexCone(apex=points[0], rays=(_integral_direction(points[0], points[1]),)),
            VertexCone(apex=points[1], rays=(_integral_direction(points[1], points[0]),)),
        ]

    if edges is not None:
        points = [points[index] for index in _cyclic_order(len(points), edges)]

    count = len(points)
    orientation = 0
    for index in range(count):
        a, b, c = points[index - 1], points[index], points[(index + 1) % count]
        cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        sign = (cross > 0) - (cross < 0)
        if sign == 0 or (orientation and sign != orientation):
            msg = "polygon is not strictly convex"
            logger.critical(msg)
            raise DegenerateInputError(msg, witness=[str(value) for value in b])
        orientation = sign

    cones = [
        VertexCone(
            apex=points[index],
            rays=(
                _integral_direction(points[index], points[index - 1]),
                _integral_direction(points[index], points[(index + 1) % count]),
            ),
        )
        for index in range(count)
    ]
    logger.debug(f"built {len(cones)} vertex cones")
    return cones


def _corner_box(apex: RationalVector, rays: Sequence[Vector]) -> List[range]:
    lows = list(apex)
    highs = list(apex)
    for ray in rays:
        for k, value in enumerate(ray):
            if value < 0:
                lows[k] += value
            else:
                highs[k] += value
    return [range(ceil(low), floor(high) + 1) for low, high in zip(lows, highs)]


def _ray_coordinates(
    rays: Sequence[Vector], dim: int
) -> Tuple[List[int], List[List[Fraction]]]:
    # pick independent rows of the ray matrix so points can be solved for ray coordinates
    chosen: List[int] = []
    for row in range(dim):
        candidate = chosen + [row]
        if rational_rank([[ray[k] for ray in rays] for k in candidate], len(rays)) == len(
            candidate
        ):
            chosen = candidate
        if len(chosen) == len(rays):
            break
    inverse = rational_inverse([[ray[k] for ray in rays] for k in chosen])
    return chosen, inverse or []


def _solve_ray_coordinates(
    rays: Sequence[Vector],
    rows: List[int],
    inverse: List[List[Fraction]],
    offset: Sequence[Fraction],
) -> Optional[List[Fraction]]:
    coordinates = [sum(entry * offset[k] for entry, k in zip(line, rows)) for line in inverse]
    for k, value in enumerate(offset):
        if sum(c * ray[k] for c, ray in zip(coordinates, rays)) != value:
            return None
    return coordinates


def _check_independent(rays: Sequence[Vector], dim: int) -> None:
    if any(not any(ray) for ray in rays):
        raise DegenerateInputError("cone rays must be nonzero")
    if any(len(ray) != dim for ray in rays):
        raise DegenerateInputError(f"cone rays must have dimension {dim}")
    if rays and rational_rank([list(ray) for ray in rays], dim) != len(rays):
        msg = "cone rays are linearly dependent"
        logger.critical(msg)
        raise DegenerateInputError(msg, witness=[list(ray) for ray in rays])


def simplicial_cone_genfun(apex: Sequence[Any], rays: Sequence[Sequence[int]]) -> RationalGenFun:
    """
    Generating function of apex + cone(rays) for linearly independent rays

    The numerator holds the lattice points of the half open fundamental parallelepiped
    {apex + sum c_i r_i : 0 <= c_i < 1}; for a rational apex these are the minimal lattice points
    of the shifted cone.

    Args:
        apex: rational apex
        rays: linearly independent integer rays

    Returns:
        RationalGenFun: a single term

    Raises:
        DegenerateInputError: if the rays are zero or dependent

    """
    origin = _as_rational(apex)
    integer_rays = tuple(tuple(int(value) for value in ray) for ray in rays)
    _check_independent(integer_rays, len(origin))

    if not integer_rays:
        numerator: Tuple[Vector, ...] = ()
        if all(value.denominator == 1 for value in origin):
            numerator = (tuple(int(value) for value in origin),)
        return RationalGenFun(terms=(GenFunTerm(sign=1, numerator=numerator, denominator=()),))

    rows, inverse = _ray_coordinates(integer_rays, len(origin))
    points = []
    for candidate in product(*_corner_box(origin, integer_rays)):
        offset = [Fraction(value) - base for value, base in zip(candidate, origin)]
        coordinates = _solve_ray_coordinates(integer_rays, rows, inverse, offset)
        if coordinates is not None and all(0 <= value < 1 for value in coordinates):
            points.append(tuple(candidate))

    return RationalGenFun(
        terms=(GenFunTerm(sign=1, numerator=tuple(sorted(points)), denominator=integer_rays),)
    )


def triangulate_cone(rays: Sequence[Sequence[int]]) -> List[Tuple[int, Tuple[Vector, ...]]]:
    """
    Signed fan triangulation of a pointed 2-d cone

    The closed cone is the union of the cones on consecutive ray pairs, which overlap along the
    interior rays; those rays are subtracted once each so the signed indicator sum is exact.

    Args:
        rays: counter clockwise ordered rays spanning a pointed cone

    Returns:
        list: (sign, rays) pieces, each piece simplicial

    Raises:
        DegenerateInputError: if the rays are not strictly counter clockwise or span a half plane

    """
    ordered = [tuple(int(value) for value in ray) for ray in rays]
    if len(ordered) <= 2:
        return [(1, tuple(ordered))]

    def _cross(a: Vector, b: Vector) -> int:
        return a[0] * b[1] - a[1] * b[0]

    for first, second in zip(ordered, ordered[1:]):
        if _cross(first, second) <= 0:
            raise DegenerateInputError(
                "cone rays are not in strictly counter clockwise order", witness=[list(first)]
            )
    if _cross(ordered[0], ordered[-1]) <= 0:
        raise DegenerateInputError("cone is not pointed", witness=[list(ray) for ray in ordered])

    pieces: List[Tuple[int, Tuple[Vector, ...]]] = [
        (1, (first, second)) for first, second in zip(ordered, ordered[1:])
    ]
    pieces.extend((-1, (ray,)) for ray in ordered[1:-1])
    return pieces


def _lex_negative(ray: Vector) -> bool:
    return next(value for value in ray if value) < 0


def _expansion_term(term: GenFunTerm, direction: Optional[Sequence[int]]) -> GenFunTerm:
    # 1 / (1 - x^r) == -x^-r / (1 - x^-r): flip every ray that points backwards
    sign = term.sign
    shift = [0] * (len(term.numerator[0]) if term.numerator else 0)
    rays = []
    for ray in term.denominator:
        if direction is None:
            backwards = _lex_negative(ray)
        else:
            weight = sum(a * b for a, b in zip(direction, ray))
            if weight == 0:
                msg = f"ray {list(ray)} is orthogonal to the expansion direction"
                logger.critical(msg)
                raise NotExpandableError(msg, witness=list(ray))
            backwards = weight < 0
        if backwards:
            sign = -sign
            shift = [s - value for s, value in zip(shift, ray)]
            rays.append(tuple(-value for value in ray))
        else:
            rays.append(ray)
    numerator = tuple(tuple(p + s for p, s in zip(point, shift)) for point in term.numerator)
    return GenFunTerm(sign=sign, numerator=numerator, denominator=tuple(rays))


def truncate(
    g: RationalGenFun, box: Sequence[Tuple[int, int]], direction: Optional[Sequence[int]] = None
) -> TruncatedSeries:
    """
    Expand a rational generating function as a formal series and keep the coefficients in a box

    Every term is expanded in the same direction: rays pointing backwards (lexicographically
    negative, or negative against `direction` when one is given) are flipped first, so each
    factor is a geometric series in a forward pointing ray and the expansion is a ring
    homomorphism on the sum.

    Args:
        g: generating function
        box: inclusive (low, high) bounds per coordinate
        direction: optional linear functional fixing the expansion direction

    Returns:
        TruncatedSeries: exact coefficients inside the box

    Raises:
        NotExpandableError: if a term has zero or dependent rays, or a ray orthogonal to direction

    """
    bounds: Box = tuple((int(low), int(high)) for low, high in box)
    series = TruncatedSeries(box=bounds)
    if not g.terms:
        return series

    dim = len(bounds)
    points = list(product(*(range(low, high + 1) for low, high in bounds)))

    for term in g.terms:
        if not term.numerator:
            continue
        if any(not any(ray) for ray in term.denominator) or (
            term.denominator
            and rational_rank([list(ray) for ray in term.denominator], dim) != len(term.denominator)
        ):
            msg = "term has zero or dependent rays, its expansion is not finite on a box"
            logger.critical(msg)
            raise NotExpandableError(msg, witness=[list(ray) for ray in term.denominator])

        expanded = _expansion_term(term, direction)
        if not expanded.denominator:
            for numerator_point in expanded.numerator:
                if all(low <= value <= high for value, (low, high) in zip(numerator_point, bounds)):
                    series.add(numerator_point, expanded.sign)
            continue

        rows, inverse = _ray_coordinates(expanded.denominator, dim)
        for numerator_point in expanded.numerator:
            for point in points:
                offset = [Fraction(value - base) for value, base in zip(point, numerator_point)]
                coordinates = _solve_ray_coordinates(expanded.denominator, rows, inverse, offset)
                if coordinates is None:
                    continue
                if all(value >= 0 and value.denominator == 1 for value in coordinates):
                    series.add(point, expanded.sign)

    return series


def polygon_genfun(vertices: Sequence[Sequence[Any]]) -> RationalGenFun:
    """
    Sum of the (triangulated) vertex cone generating functions of a convex polygon

    Args:
        vertices: cyclically ordered vertices of a convex polygon, a segment or a point

    Returns:
        RationalGenFun: brion side of the identity

    Raises:
        DegenerateInputError: for non convex input

    """
    total = RationalGenFun()
    for cone in vertex_cones(vertices):
        for sign, piece in triangulate_cone(cone.rays):
            piece_genfun = simplicial_cone_genfun(cone.apex, piece)
            total = total + (piece_genfun if sign > 0 else piece_genfun.negated())
    return total


def brion_check(
    polygon: Sequence[Sequence[int]],
    box: Sequence[Tuple[int, int]],
    direction: Optional[Sequence[int]] = None,
) -> bool:
    """
    Verify that the vertex cone series of a polygon sum to its lattice point indicator on a box

    Args:
        polygon: cyclically ordered lattice vertices of a convex polygon, a segment or a point
        box: inclusive (low, high) bounds per coordinate
        direction: optional expansion direction, lexicographic when omitted

    Returns:
        bool: True iff the coefficients agree exactly on the box

    Raises:
        NotExpandableError: propagated from truncate
        DegenerateInputError: for non convex input

    """
    cone_series = truncate(polygon_genfun(polygon), box, direction)

    indicator = TruncatedSeries(box=cone_series.box)
    for point in enumerate_lattice_points(polygon_polyhedron(polygon)):
        if all(low <= value <= high for value, (low, high) in zip(point, cone_series.box)):
            indicator.add(point, 1)

    holds = cone_series.coefficients == indicator.coefficients
    logger.info(f"brion identity on {len(polygon)} vertices holds: {holds}")
    return holds
