"""betti_regions.algebra.asymptotics"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import QQ, Poly, Rational, symbols

from betti_regions.algebra.betti import BettiFamily, graded_betti
from betti_regions.algebra.monomial import MonomialIdeal, power
from betti_regions.algebra.partition import (
    MU,
    T,
    WeightSystem,
    evaluate,
    evaluate_poly,
    global_lattice,
    poly_degree,
    poly_to_list,
)
from betti_regions.config import Settings, resolve_settings
from betti_regions.documents import parse_integer, parse_integer_list, require_keys
from betti_regions.exceptions import (
    InputDocumentError,
    IntegralityError,
    RegionDetectionError,
    ThresholdError,
    ValidationMismatchError,
)
from betti_regions.logging import logger
from betti_regions.polyhedral.exactlinalg import rational_rank, rational_solve

# offset above the lower line of a region, s = mu - L(t)
S = symbols("s")

Window = Tuple[int, int]


@dataclass(frozen=True, order=True)
class Line:
    """L(t) = a * t + b"""

    a: int
    b: int

    def __call__(self, t: int) -> int:
        return self.a * t + self.b

    def to_dict(self) -> Dict[str, str]:
        return {"a": str(self.a), "b": str(self.b)}


@dataclass(frozen=True)
class RegionDescription:
    """
    Piecewise quasi-polynomial description of mu -> beta_(i, mu)(J_t) for t >= t0

    Region k is L_k(t) <= mu < L_(k+1)(t), the last region also holding its upper line. Inside
    region k the value is the polynomial keyed by (k, (a_k * t - mu) mod period); outside
    [L_0(t), L_m(t)] it is zero.

    """

    i: int
    t0: int
    lines: Tuple[Line, ...]
    period: int
    polys: Dict[Tuple[int, int], Poly] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def region_count(self) -> int:
        return max(len(self.lines) - 1, 0)

    def region_of(self, mu: int, t: int) -> Optional[int]:
        """
        Index of the region holding (mu, t)

        Args:
            mu: internal degree
            t: filtration index

        Returns:
            int: region index, None outside [L_0(t), L_m(t)]

        Raises:
            N/A

        """
        if not self.lines or mu < self.lines[0](t) or mu > self.lines[-1](t):
            return None
        for k in range(self.region_count - 1, -1, -1):
            if mu >= self.lines[k](t):
                return k
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "i": self.i,
            "t0": str(self.t0),
            "D": str(self.period),
            "lines": [line.to_dict() for line in self.lines],
            "polys": [
                {"region": region, "j": str(j), "poly": poly_to_list(poly)}
                for (region, j), poly in sorted(self.polys.items())
            ],
            "metadata": self.metadata,
        }


def predict(r: RegionDescription, mu: int, t: int) -> int:
    """
    Betti number predicted by a region description

    Args:
        r: region description
        mu: internal degree
        t: filtration index

    Returns:
        int: predicted beta_(i, mu)(J_t)

    Raises:
        ThresholdError: if t < r.t0
        IntegralityError: if the region polynomial gives a negative or fractional value

    """
    if t < r.t0:
        msg = f"t = {t} is below the stability threshold t0 = {r.t0}"
        logger.critical(msg)
        raise ThresholdError(msg, witness=[r.i, mu, t])

    region = r.region_of(mu, t)
    if region is None:
        return 0

    j = (r.lines[region].a * t - mu) % r.period
    poly = r.polys.get((region, j))
    value = Fraction(0) if poly is None else evaluate_poly(poly, mu, t)
    if value < 0 or value.denominator != 1:
        msg = f"region polynomial evaluates to {value} at (mu, t) = ({mu}, {t})"
        logger.critical(msg)
        raise IntegralityError(msg, witness=[r.i, mu, t])
    return int(value)


def _support(fam: BettiFamily, i: int, ts: Sequence[int]) -> Dict[int, Tuple[int, int]]:
    support = {}
    for t in ts:
        degrees = fam.support(i, t)
        if degrees:
            support[t] = (degrees[0], degrees[-1])
    return support


def fit_boundary_line(points: Dict[int, int], slopes: Sequence[int]) -> Optional[Line]:
    """
    Exact line through (t, mu) boundary points w/ slope from an admissible set

    Args:
        points: t -> boundary degree
        slopes: admissible slopes

    Returns:
        Line: the fitting line w/ the smallest |b| on ties, None if no slope fits

    Raises:
        N/A

    """
    fitting = []
    for a in sorted(set(slopes)):
        intercepts = {mu - a * t for t, mu in points.items()}
        if len(intercepts) == 1:
            fitting.append(Line(a=a, b=intercepts.pop()))
    if not fitting:
        return None
    return min(fitting, key=lambda line: (abs(line.b), line.a))


def _region_points(
    lower: Line, upper: Line, closed: bool, ts: Sequence[int]
) -> List[Tuple[int, int]]:
    points = []
    for t in ts:
        top = upper(t) if closed else upper(t) - 1
        points.extend((mu, t) for mu in range(lower(t), top + 1))
    return points


def _offset_basis(degree: int, max_s_degree: Optional[int]) -> List[Tuple[int, int]]:
    return [
        (i, total - i)
        for total in range(degree + 1)
        for i in range(total, -1, -1)
        if max_s_degree is None or i <= max_s_degree
    ]


def _to_mu_t(coefficients: Dict[Tuple[int, int], Fraction], lower: Line) -> Poly:
    expression = sum(
        (
            Rational(value.numerator, value.denominator) * S**exp_s * T**exp_t
            for (exp_s, exp_t), value in coefficients.items()
            if value
        ),
        Rational(0),
    )
    return Poly(expression.subs(S, MU - lower.a * T - lower.b), MU, T, domain=QQ)


def _fit_residue(
    points: Sequence[Tuple[int, int]],
    values: Sequence[int],
    lower: Line,
    degree_cap: int,
    max_s_degree: Optional[int],
) -> Optional[Poly]:
    # lowest degree w/ a consistent, fully determined interpolation wins
    for degree in range(degree_cap + 1):
        basis = _offset_basis(degree, max_s_degree)
        rows = [[(mu - lower(t)) ** e_s * t**e_t for e_s, e_t in basis] for mu, t in points]
        if rational_rank(rows, len(basis)) < len(basis):
            continue
        solution = rational_solve(rows, values, len(basis))
        if solution is not None:
            return _to_mu_t(dict(zip(basis, solution)), lower)
    return None


def _fit_region(
    fam: BettiFamily,
    i: int,
    lower: Line,
    upper: Line,
    closed: bool,
    ts: Sequence[int],
    period: int,
    degree_cap: int,
) -> Optional[Dict[int, Poly]]:
    points = _region_points(lower, upper, closed, ts)
    by_residue: Dict[int, List[Tuple[int, int]]] = {j: [] for j in range(period)}
    for mu, t in points:
        by_residue[(lower.a * t - mu) % period].append((mu, t))

    max_s_degree = None
    if lower.a == upper.a:
        # parallel lines only leave finitely many offsets s to interpolate over
        max_s_degree = upper.b - lower.b - (0 if closed else 1)

    polys = {}
    for j, residue_points in by_residue.items():
        if not residue_points:
            polys[j] = Poly(0, MU, T, domain=QQ)
            continue
        values = [fam.beta(i, mu, t) for mu, t in residue_points]
        poly = _fit_residue(residue_points, values, lower, degree_cap, max_s_degree)
        if poly is None:
            return None
        polys[j] = poly
    return polys


def _candidate_lines(
    lower: Line, top: Line, slopes: Sequence[int], ts: Sequence[int]
) -> List[Line]:
    # lines strictly between lower and top on the window and eventually ordered w/ both
    candidates = []
    for a in sorted(set(slopes)):
        if a < lower.a or a > top.a:
            continue
        low_b = max(lower(t) - a * t for t in ts) + 1
        high_b = min(top(t) - a * t for t in ts) - 1
        for b in range(low_b, high_b + 1):
            line = Line(a=a, b=b)
            if lower < line < top:
                candidates.append(line)
    return candidates


def _first_mismatch(
    description: RegionDescription, fam: BettiFamily, ts: Sequence[int]
) -> Optional[Tuple[int, int, int]]:
    for t in ts:
        observed = fam.support(description.i, t)
        low = min([description.lines[0](t)] + observed[:1])
        high = max([description.lines[-1](t)] + observed[-1:])
        for mu in range(low, high + 1):
            try:
                predicted = predict(description, mu, t)
            except IntegralityError:
                return description.i, mu, t
            if predicted != fam.beta(description.i, mu, t):
                return description.i, mu, t
    return None


def _first_support_escape(
    description: RegionDescription, fam: BettiFamily
) -> Optional[Tuple[int, int, int]]:
    # a nonzero degree outside [L_0(t), L_m(t)] at some computed t >= t0
    for t in sorted(fam.tables):
        if t < description.t0:
            continue
        for mu in fam.support(description.i, t):
            if not description.lines or not (
                description.lines[0](t) <= mu <= description.lines[-1](t)
            ):
                return description.i, mu, t
    return None


def _check_support(description: RegionDescription, fam: BettiFamily) -> RegionDescription:
    escape = _first_support_escape(description, fam)
    if escape is not None:
        i, mu, t = escape
        msg = f"tor_{i} is nonzero outside its boundary lines at (mu, t) = ({mu}, {t})"
        logger.critical(msg)
        raise ValidationMismatchError(msg, witness=list(escape))
    return description


def _search_regions(
    fam: BettiFamily,
    i: int,
    bottom: Line,
    top: Line,
    slopes: Sequence[int],
    fit_ts: Sequence[int],
    period: int,
    degree_cap: int,
    max_regions: int,
) -> Optional[Tuple[List[Line], Dict[Tuple[int, int], Poly]]]:
    lines = [bottom]
    polys: Dict[Tuple[int, int], Poly] = {}
    current = bottom

    while len(lines) <= max_regions:
        closing = _fit_region(fam, i, current, top, True, fit_ts, period, degree_cap)
        if closing is not None:
            region = len(lines) - 1
            polys.update({(region, j): poly for j, poly in closing.items()})
            return lines + [top], polys

        # breakpoint: the highest line below which a single polynomial per residue still fits
        best: Optional[Tuple[Line, Dict[int, Poly]]] = None
        for candidate in _candidate_lines(current, top, slopes, fit_ts):
            fitted = _fit_region(fam, i, current, candidate, False, fit_ts, period, degree_cap)
            if fitted is None:
                continue
            if best is None or (candidate(fit_ts[-1]), -abs(candidate.b)) > (
                best[0](fit_ts[-1]),
                -abs(best[0].b),
            ):
                best = (candidate, fitted)
        if best is None:
            return None

        region = len(lines) - 1
        polys.update({(region, j): poly for j, poly in best[1].items()})
        lines.append(best[0])
        current = best[0]
        logger.debug(f"region {region} of tor_{i} closes at line {best[0]}")

    return None


def _crossing_threshold(lines: Sequence[Line]) -> int:
    # least t from which consecutive lines are ordered
    threshold = 0
    for lower, upper in zip(lines, lines[1:]):
        if upper.a > lower.a:
            threshold = max(threshold, (lower.b - upper.b) // (upper.a - lower.a) + 1)
    return threshold


def detect_regions(
    fam: BettiFamily,
    i: int,
    w: WeightSystem,
    fit_range: Window,
    validate_range: Window,
    degree_cap: Optional[int] = None,
    settings: Optional[Settings] = None,
) -> RegionDescription:
    """
    Detect the boundary lines, period and region polynomials of tor_i along a filtration

    The lower and upper support boundaries are fitted to lines w/ slopes among the generator
    degrees. The period starts at det of the weight system's period lattice; per region and
    residue class a polynomial is interpolated on fit_range, breakpoint lines are inserted
    where a single polynomial does not fit, and the whole description is certified by exact
    agreement on validate_range. On failure the period is doubled up to settings.period_cap.
    Vanishing outside the outer lines is then checked on every computed t from t0 on.

    Args:
        fam: betti family covering both windows
        i: homological degree
        w: weight system of the generator degrees
        fit_range: inclusive t window for interpolation
        validate_range: inclusive t window for certification
        degree_cap: total degree cap of the region polynomials, default r - rank
        settings: settings, defaults when None

    Returns:
        RegionDescription: the certified description

    Raises:
        RegionDetectionError: if a support boundary admits no line w/ an admissible slope
        ValidationMismatchError: if no period up to the cap certifies, or tor_i is nonzero outside
            the outer lines at some computed t >= t0; witness (i, mu, t)

    """
    settings = resolve_settings(settings)
    cap = w.degree_bound if degree_cap is None else degree_cap
    fit_ts = list(range(fit_range[0], fit_range[1] + 1))
    validate_ts = list(range(validate_range[0], validate_range[1] + 1))
    all_ts = sorted(set(fit_ts) | set(validate_ts))
    base_period = max(global_lattice(w).determinant, 1)
    metadata: Dict[str, Any] = {
        "period_rule": "det(lattice)",
        "period_lattice_determinant": str(base_period),
        "fit": [str(value) for value in fit_range],
        "validate": [str(value) for value in validate_range],
    }

    support = _support(fam, i, all_ts)
    if not support:
        logger.info(f"tor_{i} vanishes on the whole window")
        return _check_support(
            RegionDescription(
                i=i, t0=min(all_ts), lines=(), period=1, polys={}, metadata=metadata
            ),
            fam,
        )
    if len(support) != len(all_ts):
        missing = [t for t in all_ts if t not in support]
        msg = f"tor_{i} vanishes at t = {missing} but not on the whole window"
        logger.critical(msg)
        raise RegionDetectionError(msg, witness={"t": missing})

    slopes = list(w.distinct_degrees)
    bottom = fit_boundary_line({t: low for t, (low, _) in support.items()}, slopes)
    top = fit_boundary_line({t: high for t, (_, high) in support.items()}, slopes)
    if bottom is None or top is None:
        msg = f"support boundary of tor_{i} admits no line w/ slope in {slopes}"
        logger.critical(msg)
        raise RegionDetectionError(
            msg, witness={str(t): [str(low), str(high)] for t, (low, high) in support.items()}
        )

    first_failure: Optional[Tuple[int, int, int]] = None
    period = base_period
    while True:
        found = _search_regions(
            fam, i, bottom, top, slopes, fit_ts, period, cap, settings.max_regions
        )
        if found is not None:
            lines, polys = found
            description = RegionDescription(
                i=i, t0=fit_ts[0], lines=tuple(lines), period=period, polys=polys
            )
            mismatch = _first_mismatch(description, fam, validate_ts)
            if mismatch is None:
                break
            first_failure = first_failure or mismatch
        if period * 2 > settings.period_cap:
            msg = f"no region description of tor_{i} certifies up to period {period}"
            logger.critical(msg)
            raise ValidationMismatchError(msg, witness=list(first_failure or (i, None, None)))
        period *= 2
        metadata["period_rule"] = "det(lattice) doubled"
        logger.debug(f"retrying tor_{i} regions w/ period {period}")

    t0 = max(fit_ts[0], _crossing_threshold(lines))
    for t in range(t0 - 1, -1, -1):
        if t not in fam.tables or t < _crossing_threshold(lines):
            break
        earlier = RegionDescription(
            i=i, t0=t, lines=description.lines, period=period, polys=description.polys
        )
        if _first_mismatch(earlier, fam, [t]) is not None:
            break
        t0 = t

    description = RegionDescription(
        i=i,
        t0=t0,
        lines=description.lines,
        period=period,
        polys=description.polys,
        metadata=metadata,
    )
    _check_support(description, fam)
    logger.info(
        f"tor_{i}: {description.region_count} regions, period {period}, t0 {t0}, max degree "
        f"{max((poly_degree(poly) for poly in polys.values()), default=0)}"
    )
    return description


@dataclass(frozen=True)
class Twist:
    # free summand B(-a, -b) w/ multiplicity beta
    a: int
    b: int
    beta: int


@dataclass(frozen=True)
class BigradedTwists:
    weights: WeightSystem
    twists: Dict[int, Tuple[Twist, ...]]

    @classmethod
    def from_dict(cls, document: Any) -> "BigradedTwists":
        """
        Load twist data of a bigraded free resolution over k[T_1, ..., T_r]

        Args:
            document: {"degrees": [...], "twists": {"p": [[a, b, beta], ...], ...}}

        Returns:
            BigradedTwists: the twists

        Raises:
            InputDocumentError: if the document is malformed

        """
        require_keys(document, ("degrees", "twists"), "twists")
        weights = WeightSystem.from_dict(document)
        raw = document["twists"]
        if not isinstance(raw, dict):
            raise InputDocumentError("twists must map homological index to twist lists")
        twists = {}
        for p, entries in raw.items():
            if not isinstance(entries, list):
                raise InputDocumentError(f"twists of index {p} must be a list")
            parsed = []
            for entry in entries:
                values = parse_integer_list(entry, "twist")
                if len(values) != 3:
                    raise InputDocumentError(f"twist {entry!r} must be [a, b, beta]")
                parsed.append(Twist(*values))
            twists[parse_integer(p, "homological index")] = tuple(parsed)
        return cls(weights=weights, twists=twists)


def hilbert_from_twists(tw: BigradedTwists, mu: int, t: int) -> int:
    """
    Hilbert function of a module from the twists of its free resolution

    H(mu, t) = sum_p (-1)^p sum over B(-a, -b)^beta of beta * phi(mu - a, t - b)

    Args:
        tw: twist data
        mu: first grading
        t: second grading

    Returns:
        int: the alternating sum

    Raises:
        N/A

    """
    return sum(
        (-1) ** p * twist.beta * evaluate(tw.weights, mu - twist.a, t - twist.b)
        for p, twists in tw.twists.items()
        for twist in twists
    )


@dataclass(frozen=True)
class CiBridgeReport:
    degrees: Tuple[int, ...]
    t_max: int
    checked: int
    # first (mu, t, betti, partition) disagreement
    discrepancy: Optional[Tuple[int, int, int, int]] = None

    @property
    def holds(self) -> bool:
        return self.discrepancy is None

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "degrees": [str(degree) for degree in self.degrees],
            "t_max": str(self.t_max),
            "checked": str(self.checked),
            "holds": self.holds,
        }
        if self.discrepancy is not None:
            mu, t, beta, phi = self.discrepancy
            payload["discrepancy"] = {
                "mu": str(mu),
                "t": str(t),
                "betti": str(beta),
                "partition": str(phi),
            }
        return payload


def pure_power_ideal(degrees: Sequence[int]) -> MonomialIdeal:
    nvars = len(degrees)
    return MonomialIdeal(
        nvars=nvars,
        generators=tuple(
            tuple(degree if k == index else 0 for k in range(nvars))
            for index, degree in enumerate(degrees)
        ),
    )


def certify_ci_bridge(
    degrees: Sequence[int], t_max: int, settings: Optional[Settings] = None
) -> CiBridgeReport:
    """
    Compare beta_(0, mu) of powers of (x_1^d_1, ..., x_r^d_r) w/ the partition function

    Args:
        degrees: pure power degrees, one variable each
        t_max: largest power checked
        settings: settings, defaults when None

    Returns:
        CiBridgeReport: number of (mu, t) compared and the first discrepancy, if any

    Raises:
        N/A

    """
    w = WeightSystem(degrees=tuple(degrees))
    ideal = pure_power_ideal(w.degrees)
    checked = 0
    for t in range(t_max + 1):
        table = graded_betti(power(ideal, t), settings)
        mus = set(range(w.degrees[0] * t, w.degrees[-1] * t + 1)) | set(table.degrees(0))
        for mu in sorted(mus):
            beta, phi = table.beta(0, mu), evaluate(w, mu, t)
            checked += 1
            if beta != phi:
                logger.warning(f"bridge fails at (mu, t) = ({mu}, {t}): {beta} != {phi}")
                return CiBridgeReport(
                    degrees=w.degrees, t_max=t_max, checked=checked, discrepancy=(mu, t, beta, phi)
                )
    logger.info(f"bridge holds for {list(w.degrees)} up to t = {t_max} ({checked} points)")
    return CiBridgeReport(degrees=w.degrees, t_max=t_max, checked=checked)
