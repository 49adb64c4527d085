"""betti_regions.polyhedral.exactlinalg"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from betti_regions.documents import parse_integer, require_keys
from betti_regions.exceptions import DimensionMismatchError, InputDocumentError
from betti_regions.logging import logger

Vector = Tuple[int, ...]
RationalVector = Tuple[Fraction, ...]


@dataclass(frozen=True)
class IntegerMatrix:
    """
    Immutable arbitrary precision integer matrix

    Entries are stored row-major. A matrix always has at least one row; zero columns are allowed
    so that e.g. the null-space of an invertible matrix is representable (n x 0).

    """

    rows: int
    cols: int
    entries: Tuple[Vector, ...]

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 0:
            raise DimensionMismatchError(f"invalid matrix shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise DimensionMismatchError(
                f"entry count does not match declared shape {self.rows}x{self.cols}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntegerMatrix":
        """
        Build a matrix from a sequence of rows

        Args:
            rows: integer rows, all of the same length

        Returns:
            IntegerMatrix: the matrix

        Raises:
            DimensionMismatchError: if there are no rows or rows are ragged

        """
        if not rows:
            raise DimensionMismatchError("a matrix needs at least one row")
        return cls(
            rows=len(rows),
            cols=len(rows[0]),
            entries=tuple(tuple(int(value) for value in row) for row in rows),
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntegerMatrix":
        """
        Build a matrix from a sequence of columns

        Args:
            columns: integer columns, each of length nrows
            nrows: row count (needed when there are no columns)

        Returns:
            IntegerMatrix: the matrix

        Raises:
            DimensionMismatchError: if a column has the wrong length

        """
        if any(len(column) != nrows for column in columns):
            raise DimensionMismatchError(f"all columns must have length {nrows}")
        return cls(
            rows=nrows,
            cols=len(columns),
            entries=tuple(tuple(int(column[i]) for column in columns) for i in range(nrows)),
        )

    @classmethod
    def identity(cls, size: int) -> "IntegerMatrix":
        """
        Identity matrix

        Args:
            size: dimension

        Returns:
            IntegerMatrix: size x size identity

        Raises:
            N/A

        """
        return cls.from_rows([[int(i == j) for j in range(size)] for i in range(size)])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def column(self, index: int) -> Vector:
        return tuple(row[index] for row in self.entries)

    def columns(self) -> List[Vector]:
        return [self.column(index) for index in range(self.cols)]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix.from_columns(list(self.entries), nrows=self.cols)

    def apply(self, vector: Sequence[int]) -> Vector:
        """
        Matrix-vector product

        Args:
            vector: integer vector of length cols

        Returns:
            Vector: product of length rows

        Raises:
            DimensionMismatchError: if the vector length does not match the column count

        """
        if len(vector) != self.cols:
            raise DimensionMismatchError(
                f"vector of length {len(vector)} does not match {self.cols} columns"
            )
        return tuple(sum(a * b for a, b in zip(row, vector)) for row in self.entries)

    def matmul(self, other: "IntegerMatrix") -> "IntegerMatrix":
        """
        Matrix-matrix product

        Args:
            other: right hand factor

        Returns:
            IntegerMatrix: self * other

        Raises:
            DimensionMismatchError: if inner dimensions disagree

        """
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        return IntegerMatrix.from_columns(
            [self.apply(column) for column in other.columns()], nrows=self.rows
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[str(value) for value in row] for row in self.entries],
        }

    @classmethod
    def from_dict(cls, document: Any) -> "IntegerMatrix":
        """
        Load a matrix from its json document

        Args:
            document: {"rows": n, "cols": m, "entries": [["decimal-string", ...], ...]}

        Returns:
            IntegerMatrix: the matrix

        Raises:
            InputDocumentError: if the document is malformed

        """
        require_keys(document, ("rows", "cols", "entries"), "matrix")
        rows = parse_integer(document["rows"], "rows")
        cols = parse_integer(document["cols"], "cols")
        entries = document["entries"]
        if not isinstance(entries, list) or any(not isinstance(row, list) for row in entries):
            raise InputDocumentError("matrix entries must be a list of rows")
        try:
            return cls(
                rows=rows,
                cols=cols,
                entries=tuple(
                    tuple(parse_integer(value, "matrix entry") for value in row) for row in entries
                ),
            )
        except DimensionMismatchError as exc:
            raise InputDocumentError(exc.message) from exc


@dataclass(frozen=True)
class HnfResult:
    # column style hermite normal form, a * u == h
    h: IntegerMatrix
    u: IntegerMatrix

    @property
    def rank(self) -> int:
        return sum(1 for column in self.h.columns() if any(column))

    def pivot_rows(self) -> List[int]:
        """
        Row index of the pivot of each nonzero column of h

        Args:
            N/A

        Returns:
            list: pivot row per pivot column

        Raises:
            N/A

        """
        return [
            next(index for index, value in enumerate(self.h.column(column)) if value)
            for column in range(self.rank)
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {"h": self.h.to_dict(), "u": self.u.to_dict()}


def _extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quotient = old_r // r
        old_r, r = r, old_r - quotient * r
        old_s, s = s, old_s - quotient * s
        old_t, t = t, old_t - quotient * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf(a: IntegerMatrix) -> HnfResult:
    """
    Column style hermite normal form

    Reduces a by unimodular column operations to [L | 0] with L lower triangular (staircase for
    rank deficient input), positive pivots and the entries left of each pivot reduced into
    [0, pivot). The same column operations are applied to the identity, giving u.

    Args:
        a: any integer matrix

    Returns:
        HnfResult: h and u with a * u == h and |det(u)| == 1

    Raises:
        N/A

    """
    h = [list(row) for row in a.entries]
    u = [[int(i == j) for j in range(a.cols)] for i in range(a.cols)]
    pivot = 0

    for i in range(a.rows):
        if pivot >= a.cols:
            break

        for j in range(pivot + 1, a.cols):
            if h[i][j] == 0:
                continue
            g, x, y = _extended_gcd(h[i][pivot], h[i][j])
            pivot_quotient, other_quotient = h[i][pivot] // g, h[i][j] // g
            for matrix in (h, u):
                for row in matrix:
                    left, right = row[pivot], row[j]
                    row[pivot] = x * left + y * right
                    row[j] = pivot_quotient * right - other_quotient * left

        if h[i][pivot] == 0:
            continue

        if h[i][pivot] < 0:
            for matrix in (h, u):
                for row in matrix:
                    row[pivot] = -row[pivot]

        for k in range(pivot):
            quotient = h[i][k] // h[i][pivot]
            if quotient:
                for matrix in (h, u):
                    for row in matrix:
                        row[k] -= quotient * row[pivot]

        pivot += 1

    logger.debug(f"hnf of {a.rows}x{a.cols} matrix has rank {pivot}")

    return HnfResult(h=IntegerMatrix.from_rows(h), u=IntegerMatrix.from_rows(u))


def integer_nullspace(a: IntegerMatrix) -> IntegerMatrix:
    """
    Basis of the saturated integer kernel of a

    The trailing columns of the unimodular transform of the hnf span exactly the integer vectors
    sent to zero.

    Args:
        a: integer matrix

    Returns:
        IntegerMatrix: cols(a) x (cols(a) - rank) basis, possibly with zero columns

    Raises:
        N/A

    """
    result = hnf(a)
    return IntegerMatrix.from_columns(
        [result.u.column(index) for index in range(result.rank, a.cols)], nrows=a.cols
    )


def solve_integer(a: IntegerMatrix, b: Sequence[int]) -> Optional[Vector]:
    """
    Find an integer solution of a * x == b

    Forward substitution on the hnf, then x = u * y.

    Args:
        a: integer matrix
        b: right hand side, length rows(a)

    Returns:
        Vector: some integer solution, or None if none exists

    Raises:
        DimensionMismatchError: if len(b) != rows(a)

    """
    if len(b) != a.rows:
        raise DimensionMismatchError(f"right hand side of length {len(b)} for {a.rows} rows")
    return solve_with_hnf(hnf(a), b)


def solve_with_hnf(result: HnfResult, b: Sequence[int]) -> Optional[Vector]:
    """
    Integer solve against an already computed hnf (lets callers cache the hnf of a fixed matrix)

    Args:
        result: hnf of the coefficient matrix
        b: right hand side

    Returns:
        Vector: some integer solution, or None if none exists

    Raises:
        N/A

    """
    h = result.h.entries
    ncols = result.h.cols
    pivot_of_row = {row: column for column, row in enumerate(result.pivot_rows())}
    y = [0] * ncols

    for i in range(result.h.rows):
        residual = b[i] - sum(h[i][k] * y[k] for k in range(result.rank))
        column = pivot_of_row.get(i)
        if column is None:
            if residual:
                return None
            continue
        if residual % h[i][column]:
            return None
        y[column] = residual // h[i][column]

    return result.u.apply(y)


def determinant(a: IntegerMatrix) -> int:
    """
    Exact determinant (fraction free elimination over the integers)

    Args:
        a: square integer matrix

    Returns:
        int: the determinant

    Raises:
        DimensionMismatchError: if a is not square

    """
    if not a.is_square:
        msg = f"determinant needs a square matrix, got {a.rows}x{a.cols}"
        logger.critical(msg)
        raise DimensionMismatchError(msg)
    matrix = DomainMatrix([[ZZ(value) for value in row] for row in a.entries], (a.rows, a.cols), ZZ)
    return int(matrix.det())


def _to_fraction(value: Any) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _to_rational(value: Any) -> Any:
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _rational_matrix(rows: Sequence[Sequence[Any]], ncols: int) -> DomainMatrix:
    return DomainMatrix(
        [[_to_rational(value) for value in row] for row in rows], (len(rows), ncols), QQ
    )


def rational_rank(rows: Sequence[Sequence[Any]], ncols: int) -> int:
    """
    Exact rank over the rationals

    Args:
        rows: matrix rows (ints or Fractions)
        ncols: column count (needed for empty inputs)

    Returns:
        int: rank

    Raises:
        N/A

    """
    if not rows or ncols == 0:
        return 0
    return int(_rational_matrix(rows, ncols).rank())


def rational_solve(
    rows: Sequence[Sequence[Any]], rhs: Sequence[Any], ncols: int
) -> Optional[RationalVector]:
    """
    Exact solution of a (possibly non square) linear system over the rationals

    Free variables are set to zero.

    Args:
        rows: coefficient rows
        rhs: right hand side
        ncols: number of unknowns

    Returns:
        RationalVector: a solution, or None if the system is inconsistent

    Raises:
        N/A

    """
    if not rows:
        return tuple(Fraction(0) for _ in range(ncols))

    augmented = [list(row) + [value] for row, value in zip(rows, rhs)]
    reduced, pivots = _rational_matrix(augmented, ncols + 1).rref()
    if ncols in pivots:
        return None

    entries = reduced.to_list()
    solution = [Fraction(0)] * ncols
    for row_index, column in enumerate(pivots):
        solution[column] = _to_fraction(entries[row_index][ncols])
    return tuple(solution)


def rational_inverse(rows: Sequence[Sequence[Any]]) -> Optional[List[List[Fraction]]]:
    """
    Exact inverse of a square rational matrix

    Args:
        rows: square matrix rows (ints or Fractions)

    Returns:
        list: inverse rows as Fractions, or None if the matrix is singular

    Raises:
        DimensionMismatchError: if the matrix is not square

    """
    size = len(rows)
    if any(len(row) != size for row in rows):
        raise DimensionMismatchError("inverse needs a square matrix")
    if size == 0:
        return []
    matrix = _rational_matrix(rows, size)
    if int(matrix.rank()) < size:
        return None
    return [[_to_fraction(value) for value in row] for row in matrix.inv().to_list()]


def primitive(vector: Sequence[int]) -> Vector:
    """
    Divide an integer vector by the gcd of its entries

    Args:
        vector: integer vector

    Returns:
        Vector: primitive vector (zero stays zero)

    Raises:
        N/A

    """
    divisor = reduce(gcd, (abs(value) for value in vector), 0)
    if divisor <= 1:
        return tuple(vector)
    return tuple(value // divisor for value in vector)


@dataclass(frozen=True)
class Lattice:
    """
    Sublattice of Z^dim stored by its hnf basis, so equal lattices compare equal

    determinant is |det(basis)| for full rank lattices and 0 otherwise

    """

    dim: int
    basis: IntegerMatrix
    determinant: int

    @classmethod
    def from_generators(cls, dim: int, generators: Sequence[Sequence[int]]) -> "Lattice":
        """
        Lattice spanned by integer generators

        Args:
            dim: ambient dimension
            generators: spanning vectors (may be dependent)

        Returns:
            Lattice: hnf normalized lattice

        Raises:
            DimensionMismatchError: if a generator has the wrong length

        """
        if any(len(generator) != dim for generator in generators):
            raise DimensionMismatchError(f"all generators must have length {dim}")
        if not generators:
            return cls(dim=dim, basis=IntegerMatrix.from_columns([], nrows=dim), determinant=0)

        result = hnf(IntegerMatrix.from_columns(generators, nrows=dim))
        basis = IntegerMatrix.from_columns(
            [result.h.column(index) for index in range(result.rank)], nrows=dim
        )
        det = 0
        if result.rank == dim:
            det = 1
            for index in range(dim):
                det *= basis.entries[index][index]
        return cls(dim=dim, basis=basis, determinant=det)

    @classmethod
    def full(cls, dim: int) -> "Lattice":
        return cls.from_generators(dim, IntegerMatrix.identity(dim).columns())

    @property
    def rank(self) -> int:
        return self.basis.cols

    @property
    def is_full_rank(self) -> bool:
        return self.rank == self.dim

    def contains(self, vector: Sequence[int]) -> bool:
        """
        Lattice membership

        Args:
            vector: integer vector

        Returns:
            bool: True if vector lies in the lattice

        Raises:
            N/A

        """
        if self.rank == 0:
            return not any(vector)
        return solve_integer(self.basis, vector) is not None

    def reduce(self, vector: Sequence[int]) -> Vector:
        """
        Canonical coset representative: the unique r == vector mod lattice w/ 0 <= r_k < b_kk

        Args:
            vector: integer vector

        Returns:
            Vector: representative

        Raises:
            DimensionMismatchError: if the lattice is not full rank

        """
        if not self.is_full_rank:
            raise DimensionMismatchError("coset representatives need a full rank lattice")
        reduced = list(vector)
        entries = self.basis.entries
        for k in range(self.dim):
            quotient = reduced[k] // entries[k][k]
            if quotient:
                for i in range(k, self.dim):
                    reduced[i] -= quotient * entries[i][k]
        return tuple(reduced)

    def coset_representatives(self) -> Iterator[Vector]:
        """
        Yield the canonical representative of every coset of Z^dim / lattice

        Args:
            N/A

        Yields:
            Vector: representative, in lexicographic order

        Raises:
            DimensionMismatchError: if the lattice is not full rank

        """
        if not self.is_full_rank:
            raise DimensionMismatchError("coset representatives need a full rank lattice")
        yield from product(*(range(self.basis.entries[k][k]) for k in range(self.dim)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "basis": self.basis.to_dict(),
            "determinant": str(self.determinant),
        }


def lattice_intersection(l1: Lattice, l2: Lattice) -> Lattice:
    """
    Intersection of two lattices

    Solves b1 * p == b2 * q over the integers via the saturated kernel of [b1 | -b2]

    Args:
        l1: first lattice
        l2: second lattice

    Returns:
        Lattice: vectors lying in both

    Raises:
        DimensionMismatchError: if the ambient dimensions differ

    """
    if l1.dim != l2.dim:
        msg = f"cannot intersect lattices in dimensions {l1.dim} and {l2.dim}"
        logger.critical(msg)
        raise DimensionMismatchError(msg)

    if l1.rank == 0 or l2.rank == 0:
        return Lattice.from_generators(l1.dim, [])

    stacked = IntegerMatrix.from_columns(
        l1.basis.columns() + [tuple(-value for value in column) for column in l2.basis.columns()],
        nrows=l1.dim,
    )
    kernel = integer_nullspace(stacked)
    generators = [l1.basis.apply(column[: l1.rank]) for column in kernel.columns()]
    return Lattice.from_generators(l1.dim, generators)
