"""betti_regions.algebra.partition"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import QQ, Poly, Rational, symbols

from betti_regions.config import Settings, parallel_map, resolve_settings
from betti_regions.documents import parse_integer_list, require_keys
from betti_regions.exceptions import (
    DegenerateInputError,
    InputDocumentError,
    InterpolationError,
    ValidationMismatchError,
)
from betti_regions.logging import logger
from betti_regions.polyhedral.exactlinalg import (
    IntegerMatrix,
    Lattice,
    Vector,
    lattice_intersection,
    rational_rank,
    rational_solve,
)
from betti_regions.polyhedral.polyhedra import count_lattice_points, fiber_polytope

MU, T = symbols("mu t")

Window = Tuple[int, int]
Monomial = Tuple[int, int]


@dataclass(frozen=True)
class WeightSystem:
    """
    Degrees d_1 <= ... <= d_r of the bigraded ring k[T_1, ..., T_r], deg T_i = (d_i, 1)

    Repeated degrees are allowed; they count as separate columns but share a single ray.

    """

    degrees: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.degrees:
            raise DegenerateInputError("a weight system needs at least one degree")
        if any(degree < 1 for degree in self.degrees):
            raise DegenerateInputError(
                "weight system degrees must be positive", witness=list(self.degrees)
            )
        object.__setattr__(self, "degrees", tuple(sorted(int(d) for d in self.degrees)))

    @classmethod
    def from_dict(cls, document: Any) -> "WeightSystem":
        require_keys(document, ("degrees",), "weight system")
        try:
            return cls(degrees=tuple(parse_integer_list(document["degrees"], "degrees")))
        except DegenerateInputError as exc:
            raise InputDocumentError(exc.message, witness=exc.witness) from exc

    @property
    def r(self) -> int:
        return len(self.degrees)

    @property
    def distinct_degrees(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.degrees)))

    @property
    def matrix(self) -> IntegerMatrix:
        return IntegerMatrix.from_rows([list(self.degrees), [1] * self.r])

    @property
    def rank(self) -> int:
        return 1 if len(self.distinct_degrees) == 1 else 2

    @property
    def degree_bound(self) -> int:
        # dimension of a generic fiber polytope
        return self.r - self.rank

    def to_dict(self) -> Dict[str, Any]:
        return {"degrees": [str(degree) for degree in self.degrees]}


@lru_cache(maxsize=65536)
def evaluate(w: WeightSystem, mu: int, t: int) -> int:
    """
    Vector partition function: number of x in N^r w/ sum x_i d_i == mu and sum x_i == t

    Args:
        w: weight system
        mu: first grading
        t: second grading

    Returns:
        int: the count, 0 off the support

    Raises:
        N/A

    """
    if t < 0 or mu < w.degrees[0] * t or mu > w.degrees[-1] * t:
        return 0
    if t == 0:
        return 1
    return count_lattice_points(fiber_polytope(w.matrix, (mu, t)))


def hilbert_function_weighted(w: WeightSystem, mu: int, t: int) -> int:
    """
    Hilbert function of k[T_1, ..., T_r] graded by w, which is the partition function of w

    Args:
        w: weight system
        mu: first grading
        t: second grading

    Returns:
        int: dim_k of the (mu, t) graded piece

    Raises:
        N/A

    """
    return evaluate(w, mu, t)


def hilbert_series(w: WeightSystem, t_max: int) -> Dict[Tuple[int, int], int]:
    """
    Truncated bigraded hilbert series of k[T_1, ..., T_r]

    Args:
        w: weight system
        t_max: largest second grading kept

    Returns:
        dict: (mu, t) -> coefficient, nonzero coefficients only, sorted by (t, mu)

    Raises:
        N/A

    """
    series = {}
    for t in range(t_max + 1):
        for mu in range(w.degrees[0] * t, w.degrees[-1] * t + 1):
            value = evaluate(w, mu, t)
            if value:
                series[(mu, t)] = value
    return series


def pair_lattice(low: int, high: int) -> Lattice:
    """
    Lattice spanned by the rays (low, 1) and (high, 1)

    Args:
        low: smaller degree
        high: larger degree

    Returns:
        Lattice: full rank lattice of determinant high - low

    Raises:
        N/A

    """
    return Lattice.from_generators(2, [(low, 1), (high, 1)])


def _intersect_all(lattices: Iterable[Lattice]) -> Lattice:
    result = Lattice.full(2)
    for lattice in lattices:
        result = lattice_intersection(result, lattice)
    return result


@dataclass(frozen=True)
class Chamber:
    index: int
    low_ray: Vector
    high_ray: Vector
    # intersection of the pair lattices whose rays straddle this chamber
    lattice: Lattice
    # intersection over all pairs, used as the period lattice
    global_lattice: Lattice

    @property
    def is_degenerate(self) -> bool:
        return self.low_ray == self.high_ray

    def contains(self, mu: int, t: int, interior: bool = False) -> bool:
        """
        Membership in the closed (or open) chamber

        Args:
            mu: first grading
            t: second grading
            interior: require distance >= 1 from both rays

        Returns:
            bool: True if (mu, t) is in the chamber

        Raises:
            N/A

        """
        low, high = self.low_ray[0], self.high_ray[0]
        if t < 0:
            return False
        if self.is_degenerate:
            return mu == low * t
        if interior:
            return low * t < mu < high * t
        return low * t <= mu <= high * t

    def points(self, t: int, interior: bool = False) -> List[Tuple[int, int]]:
        if self.is_degenerate:
            return [(self.low_ray[0] * t, t)]
        start, stop = self.low_ray[0] * t, self.high_ray[0] * t
        if interior:
            start, stop = start + 1, stop - 1
        return [(mu, t) for mu in range(start, stop + 1)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "rays": [[str(value) for value in ray] for ray in (self.low_ray, self.high_ray)],
            "lattice": self.lattice.to_dict(),
            "global_lattice": self.global_lattice.to_dict(),
        }


def global_lattice(w: WeightSystem) -> Lattice:
    """
    Intersection of the pair lattices over all pairs of distinct degrees

    Args:
        w: weight system

    Returns:
        Lattice: the period lattice, Z^2 when there is a single distinct degree

    Raises:
        N/A

    """
    return _intersect_all(pair_lattice(a, b) for a, b in combinations(w.distinct_degrees, 2))


def chamber_complex(w: WeightSystem) -> List[Chamber]:
    """
    Chambers between consecutive distinct degree rays, with their lattices

    Args:
        w: weight system

    Returns:
        list: chambers in increasing slope order; a single degenerate ray chamber when all
            degrees agree

    Raises:
        N/A

    """
    distinct = w.distinct_degrees
    full = global_lattice(w)

    if len(distinct) == 1:
        ray = (distinct[0], 1)
        return [Chamber(index=0, low_ray=ray, high_ray=ray, lattice=full, global_lattice=full)]

    chambers = []
    for index in range(len(distinct) - 1):
        straddling = (
            pair_lattice(distinct[i], distinct[j])
            for i in range(index + 1)
            for j in range(index + 1, len(distinct))
        )
        chambers.append(
            Chamber(
                index=index,
                low_ray=(distinct[index], 1),
                high_ray=(distinct[index + 1], 1),
                lattice=_intersect_all(straddling),
                global_lattice=full,
            )
        )

    logger.debug(
        f"chamber complex of {list(w.degrees)} has {len(chambers)} chambers, "
        f"period lattice determinant {full.determinant}"
    )
    return chambers


def poly_from_coefficients(coefficients: Dict[Monomial, Fraction]) -> Poly:
    """
    Build an exact bivariate polynomial in (mu, t) from monomial coefficients

    Args:
        coefficients: (exp_mu, exp_t) -> coefficient

    Returns:
        Poly: polynomial over QQ

    Raises:
        N/A

    """
    terms = {
        monomial: Rational(value.numerator, value.denominator)
        for monomial, value in coefficients.items()
        if value
    }
    return Poly.from_dict(terms or {(0, 0): 0}, MU, T, domain=QQ)


def poly_terms(poly: Poly) -> List[Tuple[Fraction, int, int]]:
    """
    Exact (coefficient, exp_mu, exp_t) triples of a polynomial, in sympy's term order

    Args:
        poly: polynomial in (mu, t)

    Returns:
        list: nonzero terms

    Raises:
        N/A

    """
    terms = []
    for (exp_mu, exp_t), coefficient in poly.terms():
        value = Rational(coefficient)
        if value:
            terms.append((Fraction(int(value.p), int(value.q)), exp_mu, exp_t))
    return terms


def evaluate_poly(poly: Poly, mu: int, t: int) -> Fraction:
    return sum(
        (coefficient * mu**exp_mu * t**exp_t for coefficient, exp_mu, exp_t in poly_terms(poly)),
        Fraction(0),
    )


def poly_to_list(poly: Poly) -> List[List[Any]]:
    return [
        [str(coefficient.numerator), str(coefficient.denominator), exp_mu, exp_t]
        for coefficient, exp_mu, exp_t in poly_terms(poly)
    ]


def poly_degree(poly: Poly) -> int:
    terms = poly_terms(poly)
    if not terms:
        return 0
    return max(exp_mu + exp_t for _, exp_mu, exp_t in terms)


@dataclass(frozen=True)
class QuasiPolynomial:
    """
    One polynomial in (mu, t) per coset of a period lattice

    Cosets are keyed by the canonical representative of Lattice.reduce.

    """

    lattice: Lattice
    coset_polys: Dict[Vector, Poly]

    def poly_for(self, mu: int, t: int) -> Poly:
        return self.coset_polys[self.lattice.reduce((mu, t))]

    def evaluate(self, mu: int, t: int) -> Fraction:
        """
        Evaluate the polynomial of the coset holding (mu, t)

        Args:
            mu: first grading
            t: second grading

        Returns:
            Fraction: exact value

        Raises:
            N/A

        """
        return evaluate_poly(self.poly_for(mu, t), mu, t)

    @property
    def degree(self) -> int:
        return max((poly_degree(poly) for poly in self.coset_polys.values()), default=0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lattice": self.lattice.to_dict(),
            "degree": self.degree,
            "cosets": [
                {"rep": [str(value) for value in rep], "poly": poly_to_list(poly)}
                for rep, poly in sorted(self.coset_polys.items())
            ],
        }


def monomial_basis(degree: int, degenerate: bool = False) -> List[Monomial]:
    """
    Exponents (exp_mu, exp_t) of all monomials of total degree <= degree

    Args:
        degree: total degree cap
        degenerate: only powers of t (points on a single ray, where mu is a multiple of t)

    Returns:
        list: exponent pairs

    Raises:
        N/A

    """
    if degenerate:
        return [(0, k) for k in range(degree + 1)]
    return [(i, total - i) for total in range(degree + 1) for i in range(total, -1, -1)]


def monomial_row(basis: Sequence[Monomial], mu: int, t: int) -> List[int]:
    return [mu**exp_mu * t**exp_t for exp_mu, exp_t in basis]


def select_fit_points(
    candidates: Iterable[Tuple[int, int]],
    lattice: Lattice,
    basis: Sequence[Monomial],
    extra: int,
) -> Dict[Vector, List[Tuple[int, int]]]:
    """
    Choose, per coset of lattice, points making the interpolation matrix full rank plus extras

    Candidates are consumed in order, so passing them sorted by t keeps fit points as close to
    the apex as the window allows.

    Args:
        candidates: points to choose from
        lattice: period lattice
        basis: monomial basis
        extra: points to add per coset after full rank is reached

    Returns:
        dict: coset representative -> chosen points (may be short for starved cosets)

    Raises:
        N/A

    """
    wanted = len(basis)
    chosen: Dict[Vector, List[Tuple[int, int]]] = {
        rep: [] for rep in lattice.coset_representatives()
    }
    ranks = {rep: 0 for rep in chosen}
    open_cosets = len(chosen)

    for mu, t in candidates:
        rep = lattice.reduce((mu, t))
        points = chosen[rep]
        if ranks[rep] == wanted and len(points) >= wanted + extra:
            continue
        if ranks[rep] < wanted:
            rank = rational_rank(
                [monomial_row(basis, *point) for point in points] + [monomial_row(basis, mu, t)],
                len(basis),
            )
            if rank == ranks[rep]:
                continue
            ranks[rep] = rank
        points.append((mu, t))
        if ranks[rep] == wanted and len(points) == wanted + extra:
            open_cosets -= 1
            if open_cosets == 0:
                break

    return chosen


def default_fit_window(w: WeightSystem, lattice: Lattice) -> Window:
    start = 10 * w.r
    return start, start + 4 * max(lattice.determinant, 1)


def _fit_coset(
    basis: Sequence[Monomial], points: Sequence[Tuple[int, int]], values: Sequence[int]
) -> Optional[Dict[Monomial, Fraction]]:
    rows = [monomial_row(basis, mu, t) for mu, t in points]
    solution = rational_solve(rows, values, len(basis))
    if solution is None:
        return None
    return dict(zip(basis, solution))


def fit_quasi_polynomial(
    w: WeightSystem,
    c: Chamber,
    fit_window: Optional[Window] = None,
    validate_window: Optional[Window] = None,
    settings: Optional[Settings] = None,
) -> QuasiPolynomial:
    """
    Fit and certify the quasi-polynomial of the partition function on a chamber

    Per coset of the global period lattice the polynomial of total degree <= r - rank(A) is
    interpolated from chamber interior points of the fit window (overdetermined by
    settings.extra_fit_points), then checked for exact equality with the partition function on
    every chamber interior point of the validation window.

    Args:
        w: weight system
        c: chamber of w
        fit_window: inclusive t range for fit points, default [10r, 10r + 4 det(lattice)]
        validate_window: inclusive t range for validation, default the ten t values below the
            fit window
        settings: settings, defaults when None

    Returns:
        QuasiPolynomial: the certified quasi-polynomial

    Raises:
        InterpolationError: if some coset does not get enough points in general position
        ValidationMismatchError: if the fitted data is inconsistent or a validation point differs

    """
    settings = resolve_settings(settings)
    lattice = c.global_lattice
    basis = monomial_basis(w.degree_bound, degenerate=c.is_degenerate)
    fit_lo, fit_hi = fit_window or default_fit_window(w, lattice)
    validate_lo, validate_hi = validate_window or (max(1, fit_lo - 10), max(1, fit_lo - 1))

    candidates = (point for t in range(fit_lo, fit_hi + 1) for point in c.points(t, interior=True))
    chosen = select_fit_points(candidates, lattice, basis, settings.extra_fit_points)

    for rep, points in chosen.items():
        if rational_rank([monomial_row(basis, *point) for point in points], len(basis)) < len(
            basis
        ):
            msg = (
                f"coset {list(rep)} of chamber {c.index} has too few fit points in general "
                f"position in t window {fit_lo}..{fit_hi}"
            )
            logger.critical(msg)
            raise InterpolationError(msg, witness=list(rep))

    flat = [point for points in chosen.values() for point in points]
    values = dict(zip(flat, parallel_map(lambda point: evaluate(w, *point), flat, settings)))

    coset_polys = {}
    for rep, points in chosen.items():
        coefficients = _fit_coset(basis, points, [values[point] for point in points])
        if coefficients is None:
            msg = f"partition function is not a polynomial of degree <= {w.degree_bound} on coset"
            logger.critical(msg)
            raise ValidationMismatchError(msg, witness=list(rep))
        coset_polys[rep] = poly_from_coefficients(coefficients)

    quasi = QuasiPolynomial(lattice=lattice, coset_polys=coset_polys)
    logger.debug(f"fitted {len(coset_polys)} coset polynomials on chamber {c.index}")

    validation = [
        point for t in range(validate_lo, validate_hi + 1) for point in c.points(t, interior=True)
    ]
    observed = parallel_map(lambda point: evaluate(w, *point), validation, settings)
    for point, value in zip(validation, observed):
        if quasi.evaluate(*point) != value:
            msg = f"fitted quasi-polynomial disagrees with the partition function at {point}"
            logger.critical(msg)
            raise ValidationMismatchError(msg, witness=list(point))

    logger.info(
        f"chamber {c.index} certified on {len(validation)} points, t in "
        f"{validate_lo}..{validate_hi}"
    )
    return quasi
