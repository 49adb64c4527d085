"""betti_regions.algebra.monomial"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import product
from math import comb
from threading import Lock
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from betti_regions.config import Settings, resolve_settings
from betti_regions.documents import parse_integer, require_keys
from betti_regions.exceptions import (
    ContainmentViolationError,
    DegenerateInputError,
    DimensionMismatchError,
    HorizonError,
    InputDocumentError,
    NotContainedError,
)
from betti_regions.logging import logger
from betti_regions.polyhedral.exactlinalg import Vector
from betti_regions.polyhedral.polyhedra import Polyhedron, rational_feasible


def divides(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _minimalize(generators: Sequence[Vector]) -> Tuple[Vector, ...]:
    kept: List[Vector] = []
    for candidate in sorted(set(generators), key=lambda g: (sum(g), g)):
        if not any(divides(existing, candidate) for existing in kept):
            kept.append(candidate)
    return tuple(sorted(kept))


def variable_names(nvars: int) -> List[str]:
    if nvars <= 3:
        return ["x", "y", "z"][:nvars]
    return [f"x{index + 1}" for index in range(nvars)]


def render_monomial(exponents: Sequence[int]) -> str:
    factors = []
    for name, power in zip(variable_names(len(exponents)), exponents):
        if power == 1:
            factors.append(name)
        elif power > 1:
            factors.append(f"{name}^{power}")
    return "*".join(factors) or "1"


@dataclass(frozen=True)
class MonomialIdeal:
    """
    Monomial ideal of k[x_1, ..., x_n] given by exponent vectors

    Generators are minimalized and sorted on construction, so two ideals are equal exactly when
    their dataclasses compare equal. No generators means the zero ideal, the zero vector as a
    generator means the unit ideal.

    """

    nvars: int
    generators: Tuple[Vector, ...] = ()

    def __post_init__(self) -> None:
        if self.nvars < 1:
            raise DimensionMismatchError("a polynomial ring needs at least one variable")
        generators = tuple(tuple(int(value) for value in g) for g in self.generators)
        if any(len(g) != self.nvars for g in generators):
            raise DimensionMismatchError(f"all generators must have {self.nvars} exponents")
        if any(value < 0 for g in generators for value in g):
            raise DimensionMismatchError("exponents must be nonnegative")
        object.__setattr__(self, "generators", _minimalize(generators))

    @classmethod
    def unit(cls, nvars: int) -> "MonomialIdeal":
        return cls(nvars=nvars, generators=(tuple(0 for _ in range(nvars)),))

    @classmethod
    def zero(cls, nvars: int) -> "MonomialIdeal":
        return cls(nvars=nvars)

    @classmethod
    def from_dict(cls, document: Any) -> "MonomialIdeal":
        """
        Load an ideal from its json document

        Args:
            document: {"nvars": n, "generators": [[e_1, ..., e_n], ...]}

        Returns:
            MonomialIdeal: the ideal

        Raises:
            InputDocumentError: if the document is malformed

        """
        require_keys(document, ("nvars", "generators"), "ideal")
        generators = document["generators"]
        if not isinstance(generators, list) or any(not isinstance(g, list) for g in generators):
            raise InputDocumentError("ideal generators must be a list of exponent lists")
        try:
            return cls(
                nvars=parse_integer(document["nvars"], "nvars"),
                generators=tuple(
                    tuple(parse_integer(value, "exponent") for value in g) for g in generators
                ),
            )
        except DimensionMismatchError as exc:
            raise InputDocumentError(exc.message) from exc

    def to_dict(self) -> Dict[str, Any]:
        return {"nvars": self.nvars, "generators": [list(g) for g in self.generators]}

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def is_unit(self) -> bool:
        return any(not any(g) for g in self.generators)

    def contains_monomial(self, exponents: Sequence[int]) -> bool:
        return any(divides(g, exponents) for g in self.generators)

    def issubset(self, other: "MonomialIdeal") -> bool:
        _check_nvars(self, other)
        return all(other.contains_monomial(g) for g in self.generators)

    def generator_degrees(self) -> List[int]:
        return [sum(g) for g in self.generators]

    def __str__(self) -> str:
        if self.is_zero:
            return "(0)"
        return "(" + ", ".join(render_monomial(g) for g in self.generators) + ")"


def _check_nvars(a: MonomialIdeal, b: MonomialIdeal) -> None:
    if a.nvars != b.nvars:
        msg = f"ideals live in rings with {a.nvars} and {b.nvars} variables"
        logger.critical(msg)
        raise DimensionMismatchError(msg)


def add(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    _check_nvars(a, b)
    return MonomialIdeal(nvars=a.nvars, generators=a.generators + b.generators)


def intersect(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    _check_nvars(a, b)
    return MonomialIdeal(
        nvars=a.nvars,
        generators=tuple(
            tuple(max(x, y) for x, y in zip(g, h)) for g in a.generators for h in b.generators
        ),
    )


def multiply(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    """
    Product of two monomial ideals

    Args:
        a: first factor
        b: second factor

    Returns:
        MonomialIdeal: minimal generators of a * b

    Raises:
        DimensionMismatchError: if the variable counts differ

    """
    _check_nvars(a, b)
    return MonomialIdeal(
        nvars=a.nvars,
        generators=tuple(
            tuple(x + y for x, y in zip(g, h)) for g in a.generators for h in b.generators
        ),
    )


@lru_cache(maxsize=1024)
def power(a: MonomialIdeal, t: int) -> MonomialIdeal:
    """
    t-th power of a monomial ideal

    Args:
        a: ideal
        t: exponent >= 0

    Returns:
        MonomialIdeal: a^t, the unit ideal for t == 0

    Raises:
        DegenerateInputError: if t is negative

    """
    if t < 0:
        msg = f"ideal powers need a nonnegative exponent, got {t}"
        logger.critical(msg)
        raise DegenerateInputError(msg, witness=t)
    if t == 0:
        return MonomialIdeal.unit(a.nvars)
    if t == 1:
        return a
    return multiply(power(a, t - 1), a)


def colon(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    """
    Colon ideal (a : b) = intersection over generators g of b of (a : x^g)

    Args:
        a: ideal
        b: ideal

    Returns:
        MonomialIdeal: the colon ideal, the unit ideal when b is zero

    Raises:
        DimensionMismatchError: if the variable counts differ

    """
    _check_nvars(a, b)
    result = MonomialIdeal.unit(a.nvars)
    for g in b.generators:
        quotient = MonomialIdeal(
            nvars=a.nvars,
            generators=tuple(tuple(max(x - y, 0) for x, y in zip(u, g)) for u in a.generators),
        )
        result = intersect(result, quotient)
    return result


def is_reduction(j: MonomialIdeal, i: MonomialIdeal, max_r: int) -> Optional[int]:
    """
    Smallest r <= max_r with j * i^r == i^(r+1)

    Args:
        j: candidate reduction
        i: ideal
        max_r: largest r tried

    Returns:
        int: reduction number, or None if none is found within max_r

    Raises:
        NotContainedError: if j is not contained in i

    """
    if not j.issubset(i):
        witness = next(g for g in j.generators if not i.contains_monomial(g))
        msg = f"{j} is not contained in {i}"
        logger.critical(msg)
        raise NotContainedError(msg, witness=list(witness))

    for r in range(max_r + 1):
        if multiply(j, power(i, r)) == power(i, r + 1):
            logger.debug(f"{j} is a reduction of {i} w/ reduction number {r}")
            return r
    return None


def _in_scaled_newton_polyhedron(i: MonomialIdeal, exponents: Vector, t: int) -> bool:
    # exists lambda >= 0, sum lambda == t, sum lambda_g * g <= exponents
    count = len(i.generators)
    negative_identity = tuple(
        tuple(-1 if k == m else 0 for m in range(count)) for k in range(count)
    )
    rows = tuple(tuple(g[k] for g in i.generators) for k in range(i.nvars))
    polyhedron = Polyhedron(
        dim=count,
        eq_rows=(tuple(1 for _ in range(count)),),
        eq_rhs=(t,),
        ineq_rows=rows + negative_identity,
        ineq_rhs=tuple(exponents) + tuple(0 for _ in range(count)),
    )
    return rational_feasible(polyhedron)


@lru_cache(maxsize=256)
def integral_closure_power(i: MonomialIdeal, t: int) -> MonomialIdeal:
    """
    Integral closure of i^t: monomials whose exponents lie in t times the newton polyhedron

    Candidates are scanned in the box bounded by t times the componentwise max of the
    generators; membership is exact rational feasibility.

    Args:
        i: ideal
        t: power >= 0

    Returns:
        MonomialIdeal: minimal generators of the closure

    Raises:
        N/A

    """
    if t == 0 or i.is_unit:
        return MonomialIdeal.unit(i.nvars)
    if i.is_zero:
        return i

    target = power(i, t)
    top = [t * max(g[k] for g in i.generators) for k in range(i.nvars)]
    least_degree = t * min(i.generator_degrees())
    found: List[Vector] = []

    # lexicographic order visits every divisor of a candidate before the candidate itself
    for candidate in product(*(range(bound + 1) for bound in top)):
        if sum(candidate) < least_degree or any(divides(g, candidate) for g in found):
            continue
        if target.contains_monomial(candidate) or _in_scaled_newton_polyhedron(i, candidate, t):
            found.append(candidate)

    closure = MonomialIdeal(nvars=i.nvars, generators=tuple(found))
    logger.debug(f"integral closure of {i}^{t} has {len(closure.generators)} generators")
    return closure


@dataclass(frozen=True)
class RatliffRushResult:
    ideal: MonomialIdeal
    stabilized: bool
    # largest n whose colon (i^(n+1) : i^n) was added
    steps: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ideal": self.ideal.to_dict(),
            "status": "stabilized" if self.stabilized else "horizon-truncated",
            "steps": self.steps,
        }


def ratliff_rush(
    i: MonomialIdeal, horizon: Optional[int] = None, settings: Optional[Settings] = None
) -> RatliffRushResult:
    """
    Ratliff-Rush closure, the union of the colons (i^(n+1) : i^n)

    Stops as soon as two consecutive unions agree; otherwise the union up to the horizon is
    returned and flagged as truncated.

    Args:
        i: ideal
        horizon: largest n used, defaults to settings.ratliff_rush_horizon
        settings: settings, defaults when None

    Returns:
        RatliffRushResult: the closure and its stabilization flag

    Raises:
        N/A

    """
    settings = resolve_settings(settings)
    horizon = horizon if horizon is not None else settings.ratliff_rush_horizon

    if i.is_zero or i.is_unit:
        return RatliffRushResult(ideal=i, stabilized=True, steps=0)

    union = i
    for n in range(1, horizon + 1):
        grown = add(union, colon(power(i, n + 1), power(i, n)))
        if grown == union and n > 1:
            return RatliffRushResult(ideal=union, stabilized=True, steps=n)
        union = grown

    logger.warning(f"ratliff-rush closure of {i} did not stabilize within horizon {horizon}")
    return RatliffRushResult(ideal=union, stabilized=False, steps=horizon)


class FiltrationKind(Enum):
    POWERS = "powers"
    INTEGRAL_CLOSURE = "integral_closure"
    RATLIFF_RUSH = "ratliff_rush"
    EXPLICIT = "explicit"


@dataclass
class Filtration:
    """
    Sequence t -> J_t of ideals w/ J_0 the unit ideal

    Computed kinds build their terms from base on demand and cache them; explicit filtrations
    only know the terms they were given, up to horizon.

    """

    kind: FiltrationKind
    base: MonomialIdeal
    horizon: int
    explicit_terms: Dict[int, MonomialIdeal] = field(default_factory=dict)
    settings: Optional[Settings] = None
    _cache: Dict[int, MonomialIdeal] = field(default_factory=dict, init=False, repr=False)
    _lock: Lock = field(default_factory=Lock, init=False, repr=False)

    @classmethod
    def from_dict(cls, document: Any, settings: Optional[Settings] = None) -> "Filtration":
        """
        Load a filtration from its json document

        Args:
            document: {"kind": ..., "ideal": {...}, "horizon": T, "terms": {"1": {...}, ...}};
                terms only for the explicit kind
            settings: settings, defaults when None

        Returns:
            Filtration: the filtration

        Raises:
            InputDocumentError: if the document is malformed

        """
        require_keys(document, ("kind", "ideal", "horizon"), "filtration")
        try:
            kind = FiltrationKind(document["kind"])
        except ValueError as exc:
            raise InputDocumentError(f"unknown filtration kind {document['kind']!r}") from exc
        base = MonomialIdeal.from_dict(document["ideal"])
        horizon = parse_integer(document["horizon"], "horizon")

        terms = {}
        if kind is FiltrationKind.EXPLICIT:
            raw_terms = document.get("terms")
            if not isinstance(raw_terms, dict):
                raise InputDocumentError("explicit filtrations need a terms mapping")
            terms = {
                parse_integer(index, "term index"): MonomialIdeal.from_dict(term)
                for index, term in raw_terms.items()
            }
        return cls(kind=kind, base=base, horizon=horizon, explicit_terms=terms, settings=settings)

    def _compute(self, t: int) -> MonomialIdeal:
        if t == 0:
            return MonomialIdeal.unit(self.base.nvars)
        if self.kind is FiltrationKind.POWERS:
            return power(self.base, t)
        if self.kind is FiltrationKind.INTEGRAL_CLOSURE:
            return integral_closure_power(self.base, t)
        if self.kind is FiltrationKind.RATLIFF_RUSH:
            return ratliff_rush(power(self.base, t), settings=self.settings).ideal
        if t > self.horizon or t not in self.explicit_terms:
            msg = f"explicit filtration has no term {t} (horizon {self.horizon})"
            logger.critical(msg)
            raise HorizonError(msg, witness=t)
        return self.explicit_terms[t]

    def term(self, t: int) -> MonomialIdeal:
        """
        The term J_t, cached after the first computation

        Args:
            t: index >= 0

        Returns:
            MonomialIdeal: J_t

        Raises:
            HorizonError: for explicit filtrations asked for a term they do not hold

        """
        with self._lock:
            if t not in self._cache:
                self._cache[t] = self._compute(t)
            return self._cache[t]

    def materialize(self) -> List[MonomialIdeal]:
        return [self.term(t) for t in range(self.horizon + 1)]

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "kind": self.kind.value,
            "ideal": self.base.to_dict(),
            "horizon": self.horizon,
        }
        if self.kind is FiltrationKind.EXPLICIT:
            payload["terms"] = {
                str(index): term.to_dict() for index, term in sorted(self.explicit_terms.items())
            }
        return payload


@dataclass(frozen=True)
class GoodFiltrationReport:
    horizon: int
    # least n0 w/ J_(n+1) == I * J_n for all n0 <= n < horizon, None if J_horizon != I * J_(h-1)
    n0: Optional[int]

    @property
    def stable(self) -> bool:
        return self.n0 is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "containment": True,
            "horizon": self.horizon,
            "n0": self.n0,
            "status": "good" if self.stable else "not yet stable at horizon",
        }


def good_filtration_check(f: Filtration, i: MonomialIdeal) -> GoodFiltrationReport:
    """
    Check that f is an i-good filtration up to its horizon

    Args:
        f: filtration
        i: ideal

    Returns:
        GoodFiltrationReport: the stabilization index n0 (None when not stable at the horizon)

    Raises:
        ContainmentViolationError: if some i * J_t is not contained in J_(t+1); witness holds t
            and the offending generator

    """
    terms = f.materialize()
    products = [multiply(i, term) for term in terms[:-1]]

    for t, product_ideal in enumerate(products):
        for generator in product_ideal.generators:
            if not terms[t + 1].contains_monomial(generator):
                msg = f"I * J_{t} is not contained in J_{t + 1}"
                logger.critical(msg)
                raise ContainmentViolationError(msg, witness={"t": t, "generator": list(generator)})

    n0: Optional[int] = None
    for n in range(len(products) - 1, -1, -1):
        if products[n] != terms[n + 1]:
            break
        n0 = n

    if n0 is None:
        logger.warning(f"filtration is not stable at horizon {f.horizon}")
    else:
        logger.info(f"filtration is {i}-good up to horizon {f.horizon} w/ n0 = {n0}")
    return GoodFiltrationReport(horizon=f.horizon, n0=n0)


def filtration_leq(f: Filtration, g: Filtration, horizon: int) -> Optional[int]:
    """
    Check f_n is contained in g_n for all n <= horizon

    Args:
        f: smaller filtration
        g: larger filtration
        horizon: largest index checked

    Returns:
        int: first n where containment fails, None if it holds throughout

    Raises:
        N/A

    """
    for n in range(horizon + 1):
        if not f.term(n).issubset(g.term(n)):
            return n
    return None


def is_filtration_reduction(j: Filtration, i: Filtration, d: int, horizon: int) -> bool:
    """
    Check that j is a reduction of the filtration i: j <= i and i_n == sum_k j_(n-k) * i_k

    The sum runs over 0 <= k <= min(d, n) and is checked for 1 <= n <= horizon.

    Args:
        j: candidate reduction
        i: filtration
        d: length of the sum
        horizon: largest n checked

    Returns:
        bool: True if j reduces i up to the horizon

    Raises:
        N/A

    """
    if filtration_leq(j, i, horizon) is not None:
        return False
    for n in range(1, horizon + 1):
        total = MonomialIdeal.zero(i.base.nvars)
        for k in range(min(d, n) + 1):
            total = add(total, multiply(j.term(n - k), i.term(k)))
        if total != i.term(n):
            logger.debug(f"filtration reduction fails at n = {n}")
            return False
    return True


def monomials_of_degree(nvars: int, degree: int) -> Iterator[Vector]:
    """
    Yield every exponent vector of the given total degree

    Args:
        nvars: variable count
        degree: total degree

    Yields:
        Vector: exponent vectors, lexicographically decreasing

    Raises:
        N/A

    """
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - first):
            yield (first,) + rest


def hilbert_function_ring(nvars: int, degree: int) -> int:
    if degree < 0:
        return 0
    return comb(degree + nvars - 1, nvars - 1)


def hilbert_function(i: MonomialIdeal, degree: int) -> int:
    """
    Number of monomials of the given degree lying in i

    Args:
        i: ideal
        degree: total degree

    Returns:
        int: dim_k of the degree piece of i

    Raises:
        N/A

    """
    if degree < 0:
        return 0
    return sum(1 for m in monomials_of_degree(i.nvars, degree) if i.contains_monomial(m))
