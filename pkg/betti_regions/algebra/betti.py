"""betti_regions.algebra.betti"""

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

from betti_regions.algebra.monomial import Filtration, MonomialIdeal, hilbert_function_ring
from betti_regions.config import Settings, parallel_map, resolve_settings
from betti_regions.exceptions import BoundExceededError
from betti_regions.logging import logger
from betti_regions.polyhedral.exactlinalg import Vector, rational_rank

# (homological degree i, multidegree alpha) -> beta
MultigradedBetti = Dict[Tuple[int, Vector], int]


@dataclass(frozen=True)
class SimplicialComplexQ:
    """
    Simplicial complex on vertices 0..nvertices-1 given by facets as bit sets

    Faces are every subset of a facet. No facets is the void complex (no faces at all); the
    facet 0 is the complex holding only the empty face, whose reduced homology sits in degree -1.

    """

    nvertices: int
    facets: Tuple[int, ...] = ()

    def faces(self) -> Dict[int, List[int]]:
        """
        Faces grouped by size (a face of size s has dimension s - 1)

        Args:
            N/A

        Returns:
            dict: size -> sorted bit sets

        Raises:
            N/A

        """
        seen = set()
        for facet in self.facets:
            subset = facet
            while True:
                seen.add(subset)
                if subset == 0:
                    break
                subset = (subset - 1) & facet
        grouped: Dict[int, List[int]] = defaultdict(list)
        for face in sorted(seen):
            grouped[bin(face).count("1")].append(face)
        return dict(grouped)

    @property
    def dimension(self) -> int:
        return max((bin(facet).count("1") for facet in self.facets), default=0) - 1


def _boundary_rank(larger: List[int], smaller: List[int]) -> int:
    if not larger or not smaller:
        return 0
    index = {face: position for position, face in enumerate(smaller)}
    rows = [[0] * len(larger) for _ in smaller]
    for column, face in enumerate(larger):
        sign = 1
        for vertex in range(face.bit_length()):
            if face >> vertex & 1:
                rows[index[face & ~(1 << vertex)]][column] = sign
                sign = -sign
    return rational_rank(rows, len(larger))


def reduced_homology_dims(
    k: SimplicialComplexQ, settings: Optional[Settings] = None
) -> List[int]:
    """
    Dimensions of the reduced homology groups over the rationals

    Args:
        k: simplicial complex
        settings: settings, defaults when None

    Returns:
        list: dim H~_j for j = -1 .. dim(k); empty for the void complex

    Raises:
        BoundExceededError: if k has more vertices than settings.homology_vertex_bound

    """
    settings = resolve_settings(settings)
    if k.nvertices > settings.homology_vertex_bound:
        msg = (
            f"complex has {k.nvertices} vertices, bound is {settings.homology_vertex_bound}"
        )
        logger.critical(msg)
        raise BoundExceededError(msg, witness=k.nvertices)

    faces = k.faces()
    if not faces:
        return []

    top = max(faces)
    ranks = [
        _boundary_rank(faces.get(size, []), faces.get(size - 1, [])) for size in range(top + 2)
    ]
    return [len(faces.get(size, [])) - ranks[size] - ranks[size + 1] for size in range(top + 1)]


def _lcm(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(max(x, y) for x, y in zip(a, b))


def lcm_lattice(i: MonomialIdeal, settings: Optional[Settings] = None) -> List[Vector]:
    """
    Join closure of the minimal generators: the lcm of every nonempty generator subset

    Args:
        i: ideal
        settings: settings, defaults when None

    Returns:
        list: distinct lcms, sorted

    Raises:
        BoundExceededError: if more than settings.lcm_lattice_bound lcms show up

    """
    settings = resolve_settings(settings)
    closure = set(i.generators)
    frontier = set(i.generators)
    while frontier:
        grown = {_lcm(a, g) for a in frontier for g in i.generators} - closure
        closure |= grown
        if len(closure) > settings.lcm_lattice_bound:
            msg = f"lcm lattice of {i} exceeds {settings.lcm_lattice_bound} elements"
            logger.critical(msg)
            raise BoundExceededError(msg, witness=len(closure))
        frontier = grown
    logger.debug(f"lcm lattice of {i} has {len(closure)} elements")
    return sorted(closure)


def upper_koszul_complex(i: MonomialIdeal, alpha: Vector) -> SimplicialComplexQ:
    """
    K^alpha(i): squarefree sigma w/ x^(alpha - sigma) in i, as a complex on the variables

    Args:
        i: ideal
        alpha: multidegree

    Returns:
        SimplicialComplexQ: the complex, every face listed as a facet

    Raises:
        N/A

    """
    faces = []
    for mask in range(1 << i.nvars):
        shifted = tuple(value - (mask >> k & 1) for k, value in enumerate(alpha))
        if min(shifted) >= 0 and i.contains_monomial(shifted):
            faces.append(mask)
    return SimplicialComplexQ(nvertices=i.nvars, facets=tuple(faces))


def multigraded_betti(i: MonomialIdeal, settings: Optional[Settings] = None) -> MultigradedBetti:
    """
    Multigraded betti numbers beta_(j, alpha)(i) = dim H~_(j-1)(K^alpha(i))

    Only multidegrees of the lcm lattice can carry nonzero betti numbers, so only those are
    visited.

    Args:
        i: ideal
        settings: settings, defaults when None

    Returns:
        dict: (j, alpha) -> beta, nonzero entries only

    Raises:
        BoundExceededError: for an oversized lcm lattice or too many variables

    """
    settings = resolve_settings(settings)
    if i.is_zero:
        return {}

    alphas = lcm_lattice(i, settings)

    def _homology(alpha: Vector) -> List[int]:
        return reduced_homology_dims(upper_koszul_complex(i, alpha), settings)

    betti: MultigradedBetti = {}
    for alpha, dims in zip(alphas, parallel_map(_homology, alphas, settings)):
        for j, dim in enumerate(dims):
            if dim:
                betti[(j, alpha)] = dim
    return betti


def taylor_betti_oracle(
    i: MonomialIdeal, settings: Optional[Settings] = None
) -> MultigradedBetti:
    """
    Multigraded betti numbers from the taylor complex tensored w/ the residue field

    After tensoring, the differential keeps the entry +-1 from e_S to e_(S - g) exactly when
    dropping g leaves the lcm of S unchanged, so every lcm multidegree splits off its own complex.

    Args:
        i: ideal
        settings: settings, defaults when None

    Returns:
        dict: (j, alpha) -> beta, nonzero entries only

    Raises:
        BoundExceededError: if i has more than settings.taylor_generator_bound generators

    """
    settings = resolve_settings(settings)
    generators = i.generators
    if len(generators) > settings.taylor_generator_bound:
        msg = (
            f"taylor complex of {len(generators)} generators exceeds bound "
            f"{settings.taylor_generator_bound}"
        )
        logger.critical(msg)
        raise BoundExceededError(msg, witness=len(generators))

    by_degree: Dict[Vector, Dict[int, List[Tuple[int, ...]]]] = defaultdict(
        lambda: defaultdict(list)
    )
    for size in range(1, len(generators) + 1):
        for subset in combinations(range(len(generators)), size):
            alpha = generators[subset[0]]
            for index in subset[1:]:
                alpha = _lcm(alpha, generators[index])
            by_degree[alpha][size].append(subset)

    def _rank(larger: List[Tuple[int, ...]], smaller: List[Tuple[int, ...]]) -> int:
        if not larger or not smaller:
            return 0
        position = {subset: row for row, subset in enumerate(smaller)}
        rows = [[0] * len(larger) for _ in smaller]
        for column, subset in enumerate(larger):
            for k in range(len(subset)):
                face = subset[:k] + subset[k + 1 :]
                if face in position:
                    rows[position[face]][column] = (-1) ** k
        return rational_rank(rows, len(larger))

    betti: MultigradedBetti = {}
    for alpha, cells in sorted(by_degree.items()):
        top = max(cells)
        ranks = {
            size: _rank(cells.get(size, []), cells.get(size - 1, []))
            for size in range(2, top + 2)
        }
        for size in range(1, top + 1):
            dim = len(cells.get(size, [])) - ranks.get(size, 0) - ranks.get(size + 1, 0)
            if dim:
                betti[(size - 1, alpha)] = dim
    return betti


@dataclass
class BettiTable:
    """
    Z-graded betti numbers beta_(i, mu) of an ideal, nonzero entries only

    """

    nvars: int
    entries: Dict[Tuple[int, int], int] = field(default_factory=dict)
    ideal: Optional[MonomialIdeal] = None

    def beta(self, i: int, mu: int) -> int:
        return self.entries.get((i, mu), 0)

    def degrees(self, i: int) -> List[int]:
        return sorted(mu for (j, mu) in self.entries if j == i)

    @property
    def projective_dimension(self) -> int:
        return max((i for i, _ in self.entries), default=0)

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {}
        if self.ideal is not None:
            payload["ideal"] = self.ideal.to_dict()
        payload["entries"] = [
            {"i": i, "mu": str(mu), "beta": str(beta)}
            for (i, mu), beta in sorted(self.entries.items())
        ]
        return payload

    def to_csv_rows(self) -> List[List[int]]:
        return [[i, mu, beta] for (i, mu), beta in sorted(self.entries.items())]

    def render(self) -> str:
        """
        Conventional betti diagram: column i, row mu - i, "." for zero

        Args:
            N/A

        Returns:
            str: the diagram w/ a trailing total row

        Raises:
            N/A

        """
        if not self.entries:
            return "(zero ideal)\n"

        columns = range(self.projective_dimension + 1)
        rows = sorted({mu - i for i, mu in self.entries})
        cells = [
            [str(row) + ":"] + [str(self.beta(i, row + i) or ".") for i in columns] for row in rows
        ]
        totals = ["total:"] + [
            str(sum(beta for (j, _), beta in self.entries.items() if j == i)) for i in columns
        ]
        header = [""] + [str(i) for i in columns]
        width = max(len(cell) for line in cells + [totals, header] for cell in line[1:])
        label = max(len(line[0]) for line in cells + [totals])

        lines = []
        for line in [header, totals] + cells:
            lines.append(
                line[0].rjust(label) + " " + " ".join(cell.rjust(width) for cell in line[1:])
            )
        return "\n".join(lines) + "\n"


def graded_betti(i: MonomialIdeal, settings: Optional[Settings] = None) -> BettiTable:
    """
    Collapse multigraded betti numbers to total degree

    Args:
        i: ideal
        settings: settings, defaults when None

    Returns:
        BettiTable: beta_(j, mu) = sum of beta_(j, alpha) over |alpha| == mu

    Raises:
        BoundExceededError: propagated from multigraded_betti

    """
    return collapse_multigraded(i, multigraded_betti(i, settings))


def collapse_multigraded(i: MonomialIdeal, betti: MultigradedBetti) -> BettiTable:
    entries: Dict[Tuple[int, int], int] = defaultdict(int)
    for (j, alpha), beta in betti.items():
        entries[(j, sum(alpha))] += beta
    return BettiTable(nvars=i.nvars, entries=dict(entries), ideal=i)


def hilbert_function_from_betti(table: BettiTable, degree: int) -> int:
    """
    Degree piece dimension of the ideal rebuilt from its betti table

    sum_i (-1)^i sum_mu beta_(i, mu) * HF_S(degree - mu)

    Args:
        table: betti table
        degree: total degree

    Returns:
        int: dim_k of the degree piece

    Raises:
        N/A

    """
    return sum(
        (-1) ** i * beta * hilbert_function_ring(table.nvars, degree - mu)
        for (i, mu), beta in table.entries.items()
    )


@dataclass
class BettiFamily:
    t_range: Tuple[int, int]
    tables: Dict[int, BettiTable] = field(default_factory=dict)

    def beta(self, i: int, mu: int, t: int) -> int:
        return self.tables[t].beta(i, mu)

    def support(self, i: int, t: int) -> List[int]:
        return self.tables[t].degrees(i)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t_range": list(self.t_range),
            "tables": {str(t): table.to_dict() for t, table in sorted(self.tables.items())},
        }

    def to_csv_rows(self) -> List[List[int]]:
        return [
            [t] + row for t, table in sorted(self.tables.items()) for row in table.to_csv_rows()
        ]


def betti_family(
    f: Filtration,
    t_range: Optional[Tuple[int, int]] = None,
    settings: Optional[Settings] = None,
) -> BettiFamily:
    """
    Betti table of every filtration term J_t for t in an inclusive range

    Args:
        f: filtration
        t_range: inclusive (low, high), default 1..horizon
        settings: settings, defaults when None

    Returns:
        BettiFamily: the tables

    Raises:
        BoundExceededError: propagated from graded_betti
        HorizonError: propagated from the filtration

    """
    low, high = t_range or (1, f.horizon)
    family = BettiFamily(t_range=(low, high))
    for t in range(low, high + 1):
        family.tables[t] = graded_betti(f.term(t), settings)
        logger.debug(f"betti table of J_{t} has {len(family.tables[t].entries)} entries")
    return family
