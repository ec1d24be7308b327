"""Exact dense linear algebra over the rationals.

Entries are kept as Python ``int`` when integral and as reduced
``fractions.Fraction`` otherwise, so integer matrices multiply at native
big-integer speed and equal matrices hash identically.

    >>> u = Matrix([[1, 1], [0, 1]])
    >>> mat_pow(u, 5)
    Matrix([[1, 5], [0, 1]])
    >>> print(char_poly(Matrix([[1, 1], [1, 0]])))
    x^2 - x - 1
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .polynomial import Polynomial, _q

__all__ = [
    "DimensionError",
    "NotInvariantError",
    "Matrix",
    "Subspace",
    "mat_mul",
    "mat_pow",
    "char_poly",
    "span_closure",
    "restrict",
    "quotient",
    "block_decompose",
    "norm",
    "rref",
]

NORM_KINDS = ("inf_operator", "frobenius_sq")


class DimensionError(ValueError):
    pass


class NotInvariantError(ValueError):
    """Raised when a subspace is not mapped into itself; ``witness`` is a
    basis vector whose image leaves the subspace."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class Matrix:
    """Immutable dense matrix of exact rationals, stored row-major."""

    __slots__ = ("rows", "cols", "entries", "_hash", "_int")

    def __init__(self, data=None, rows: int | None = None, cols: int | None = None):
        if rows is not None and cols is not None:
            entries = tuple(_q(x) for x in (data if data is not None else [0] * (rows * cols)))
            if len(entries) != rows * cols:
                raise DimensionError(f"{len(entries)} entries do not fill a {rows}x{cols} matrix")
        else:
            data = [list(r) for r in data]
            rows = len(data)
            cols = len(data[0]) if rows else (cols or 0)
            if any(len(r) != cols for r in data):
                raise DimensionError("ragged rows")
            entries = tuple(_q(x) for r in data for x in r)
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self._hash = None
        self._int = None

    @classmethod
    def _raw(cls, rows, cols, entries, integral=None):
        m = cls.__new__(cls)
        m.rows, m.cols, m.entries, m._hash, m._int = rows, cols, entries, None, integral
        return m

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls._raw(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> Matrix:
        cols = rows if cols is None else cols
        return cls._raw(rows, cols, (0,) * (rows * cols))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> Matrix:
        if not columns:
            return cls.zeros(rows or 0, 0)
        r = len(columns[0])
        return cls([[columns[j][i] for j in range(len(columns))] for i in range(r)])

    @classmethod
    def block(cls, blocks: Sequence[Sequence[Matrix]]) -> Matrix:
        """Assemble a block matrix; every block row must agree in height."""
        out = []
        for brow in blocks:
            h = brow[0].rows
            for i in range(h):
                row = []
                for b in brow:
                    if b.rows != h:
                        raise DimensionError("block heights differ within a block row")
                    row.extend(b.entries[i * b.cols:(i + 1) * b.cols])
                out.append(row)
        width = sum(b.cols for b in blocks[0]) if blocks else 0
        return cls._raw(len(out), width, tuple(x for r in out for x in r))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_integral(self) -> bool:
        if self._int is None:
            self._int = all(type(x) is int for x in self.entries)
        return self._int

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def to_lists(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> Matrix:
        return Matrix._raw(self.cols, self.rows,
                           tuple(self.entries[i * self.cols + j]
                                 for j in range(self.cols) for i in range(self.rows)))

    T = property(transpose)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> Matrix:
        return Matrix._raw(r1 - r0, c1 - c0,
                           tuple(self.entries[i * self.cols + j]
                                 for i in range(r0, r1) for j in range(c0, c1)))

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product ``self @ v`` for a column vector given as a sequence."""
        if len(v) != self.cols:
            raise DimensionError(f"cannot apply {self.rows}x{self.cols} matrix to vector of length {len(v)}")
        c = self.cols
        e = self.entries
        return tuple(_q(sum(e[i * c + k] * v[k] for k in range(c))) for i in range(self.rows))

    def rapply(self, u: Sequence) -> tuple:
        """Row-vector product ``u^T @ self``."""
        if len(u) != self.rows:
            raise DimensionError(f"cannot apply row vector of length {len(u)} to {self.rows}x{self.cols} matrix")
        c = self.cols
        e = self.entries
        return tuple(_q(sum(u[k] * e[k * c + j] for k in range(self.rows))) for j in range(c))

    def __matmul__(self, other: Matrix) -> Matrix:
        return mat_mul(self, other)

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return Matrix._raw(self.rows, self.cols,
                           tuple(_q(a + b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {other.shape} from {self.shape}")
        return Matrix._raw(self.rows, self.cols,
                           tuple(_q(a - b) for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> Matrix:
        return Matrix._raw(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> Matrix:
        c = _q(c)
        return Matrix._raw(self.rows, self.cols, tuple(_q(c * a) for a in self.entries))

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Matrix:
        return mat_pow(self, n)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.entries))
        return self._hash

    def __lt__(self, other: Matrix):
        return (self.rows, self.cols, self.entries) < (other.rows, other.cols, other.entries)

    def __repr__(self):
        return f"Matrix({self.to_lists()!r})"

    def trace(self):
        return _q(sum(self.entries[i * self.cols + i] for i in range(min(self.rows, self.cols))))

    def inverse(self) -> Matrix:
        """Gauss-Jordan inverse; raises ``ZeroDivisionError`` when singular."""
        if not self.is_square():
            raise DimensionError(f"cannot invert non-square {self.rows}x{self.cols} matrix")
        n = self.rows
        aug = [[Fraction(x) for x in self.row(i)] + [Fraction(int(i == j)) for j in range(n)]
               for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
            if piv is None:
                raise ZeroDivisionError("matrix is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            p = aug[col][col]
            aug[col] = [x / p for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        return Matrix([row[n:] for row in aug])


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    n, k, m = a.rows, a.cols, b.cols
    ae, be = a.entries, b.entries
    bcols = [be[j::m] for j in range(m)] if m else []
    out = []
    for i in range(n):
        arow = ae[i * k:(i + 1) * k]
        for col in bcols:
            out.append(sum(x * y for x, y in zip(arow, col)))
    integral = a.is_integral() and b.is_integral()
    if not integral:
        out = [_q(x) for x in out]
    return Matrix._raw(n, m, tuple(out), integral or None)


def mat_pow(a: Matrix, n: int) -> Matrix:
    if not a.is_square():
        raise DimensionError(f"cannot raise non-square {a.rows}x{a.cols} matrix to a power")
    if n < 0:
        raise ValueError("negative exponent")
    result, base = Matrix.identity(a.rows), a
    while n:
        if n & 1:
            result = mat_mul(result, base)
        n >>= 1
        if n:
            base = mat_mul(base, base)
    return result


def char_poly(a: Matrix) -> Polynomial:
    """``det(xI - a)`` by Bareiss fraction-free elimination over Q[x].

    The k-th pivot is the leading principal minor ``det(xI - a[:k,:k])``,
    which is monic of degree k, so no pivoting is ever needed and each
    Bareiss division is exact in Q[x].
    """
    if not a.is_square():
        raise DimensionError(f"characteristic polynomial needs a square matrix, got {a.rows}x{a.cols}")
    n = a.rows
    if n == 0:
        return Polynomial((1,))
    x = Polynomial.x()
    M = [[(x if i == j else Polynomial()) - a[i, j] for j in range(n)] for i in range(n)]
    prev = Polynomial((1,))
    for k in range(n - 1):
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (pivot * M[i][j] - M[i][k] * M[k][j]).exact_div(prev)
        prev = pivot
    return M[n - 1][n - 1]


def norm(a: Matrix, kind: str = "inf_operator"):
    """Exact size of a matrix used to tabulate maximal product norms.

    ``inf_operator`` is the induced infinity norm (max absolute row sum).
    ``frobenius_sq`` is the trace of ``a a^T``; it is submultiplicative but
    not homogeneous of degree one, so strictly it is the square of a norm.
    """
    if kind == "inf_operator":
        if a.rows == 0:
            return 0
        return _q(max(sum(abs(x) for x in a.row(i)) for i in range(a.rows)))
    if kind == "frobenius_sq":
        return _q(sum(x * x for x in a.entries))
    raise ValueError(f"unknown norm kind {kind!r}; expected one of {NORM_KINDS}")


def rref(vectors: Iterable[Sequence], dim: int) -> tuple[list[tuple], list[int]]:
    """Reduced row echelon form of the given vectors (as rows).

    Returns the nonzero rows and their pivot columns, pivots strictly increasing.
    """
    rows = [[Fraction(x) for x in v] for v in vectors]
    for r in rows:
        if len(r) != dim:
            raise DimensionError(f"vector of length {len(r)} in ambient dimension {dim}")
    pivots = []
    r = 0
    for c in range(dim):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        if p != 1:
            rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return [tuple(_q(x) for x in row) for row in rows[:r]], pivots


class Subspace:
    """A subspace of Q^d held by its canonical reduced echelon basis.

    Basis vector ``i`` has a 1 at ``pivots[i]`` and zeros at every other
    pivot, so coordinates of a member vector are read off at the pivots and
    equal subspaces compare equal as plain tuples.
    """

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        basis, pivots = rref(vectors, ambient_dim)
        self.ambient_dim = ambient_dim
        self.basis: tuple[tuple, ...] = tuple(basis)
        self.pivots: tuple[int, ...] = tuple(pivots)

    @classmethod
    def zero(cls, d: int) -> Subspace:
        return cls(d)

    @classmethod
    def full(cls, d: int) -> Subspace:
        return cls(d, [tuple(int(i == j) for j in range(d)) for i in range(d)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return self.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis={[list(b) for b in self.basis]})"

    def reduce(self, v: Sequence) -> tuple:
        """Residue of ``v`` after eliminating the pivot coordinates."""
        r = [Fraction(x) for x in v]
        for b, p in zip(self.basis, self.pivots):
            c = r[p]
            if c:
                r = [x - c * y for x, y in zip(r, b)]
        return tuple(r)

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    __contains__ = contains

    def coordinates(self, v: Sequence) -> tuple:
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return tuple(_q(v[p]) for p in self.pivots)

    def from_coordinates(self, coords: Sequence) -> tuple:
        out = [0] * self.ambient_dim
        for c, b in zip(coords, self.basis):
            if c:
                out = [x + c * y for x, y in zip(out, b)]
        return tuple(_q(x) for x in out)

    def __add__(self, other: Subspace) -> Subspace:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError("subspaces live in different ambient spaces")
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def extend(self, vectors: Iterable[Sequence]) -> Subspace:
        return Subspace(self.ambient_dim, list(self.basis) + list(vectors))

    def issubspace(self, other: Subspace) -> bool:
        return all(other.contains(b) for b in self.basis)

    def complement_basis(self) -> list[tuple]:
        """Unit vectors at the non-pivot positions; together with ``basis``
        they form a basis of the ambient space."""
        pset = set(self.pivots)
        d = self.ambient_dim
        return [tuple(int(i == j) for i in range(d)) for j in range(d) if j not in pset]

    def as_matrix(self) -> Matrix:
        """The d x e matrix whose columns are the basis vectors."""
        return Matrix.from_columns(self.basis) if self.basis else Matrix.zeros(self.ambient_dim, 0)

    def in_coordinates_of(self, outer: Subspace) -> Subspace:
        """This subspace expressed in the basis coordinates of ``outer``."""
        return Subspace(outer.dim, [outer.coordinates(b) for b in self.basis])

    def is_invariant(self, a: Matrix) -> bool:
        return all(self.contains(a.apply(b)) for b in self.basis)


def _check_dim(vectors, generators, d):
    for g in generators:
        if g.shape != (d, d):
            raise DimensionError(f"generator of shape {g.shape} in ambient dimension {d}")
    for v in vectors:
        if len(v) != d:
            raise DimensionError(f"vector of length {len(v)} in ambient dimension {d}")


def span_closure(seed: Sequence[Sequence], generators: Sequence[Matrix], d: int | None = None) -> Subspace:
    """Smallest subspace containing ``seed`` and mapped into itself by every generator."""
    if d is None:
        if seed:
            d = len(seed[0])
        elif generators:
            d = generators[0].rows
        else:
            raise DimensionError("cannot infer ambient dimension from empty input")
    _check_dim(seed, generators, d)
    w = Subspace(d, seed)
    frontier = list(w.basis)
    # each round either stops or raises the dimension, so at most d rounds
    while frontier:
        images = [g.apply(b) for b in frontier for g in generators]
        new = w.extend(images)
        if new.dim == w.dim:
            break
        frontier = [b for b in new.basis]
        w = new
    return w


def block_decompose(a: Matrix, w: Subspace):
    """Change of basis adapted to an ``a``-invariant subspace ``w``.

    Returns ``(U, B, D, C)`` with ``U^{-1} a U == [[B, D], [0, C]]``; the
    first ``w.dim`` columns of ``U`` are the basis of ``w``.
    """
    if a.shape != (w.ambient_dim, w.ambient_dim):
        raise DimensionError(f"matrix {a.shape} does not act on ambient dimension {w.ambient_dim}")
    for b in w.basis:
        img = a.apply(b)
        if not w.contains(img):
            raise NotInvariantError("subspace is not invariant: a maps a basis vector outside it", witness=b)
    d, e = w.ambient_dim, w.dim
    U = Matrix.from_columns(list(w.basis) + w.complement_basis(), rows=d) if d else Matrix.zeros(0)
    T = U.inverse() @ a @ U
    B = T.submatrix(0, e, 0, e)
    D = T.submatrix(0, e, e, d)
    C = T.submatrix(e, d, e, d)
    return U, B, D, C


def restrict(a: Matrix, w: Subspace) -> Matrix:
    """Action of ``a`` on the invariant subspace ``w`` in its basis coordinates."""
    if a.shape != (w.ambient_dim, w.ambient_dim):
        raise DimensionError(f"matrix {a.shape} does not act on ambient dimension {w.ambient_dim}")
    cols = []
    for b in w.basis:
        img = a.apply(b)
        if not w.contains(img):
            raise NotInvariantError("subspace is not invariant: a maps a basis vector outside it", witness=b)
        cols.append(w.coordinates(img))
    if not cols:
        return Matrix.zeros(0)
    return Matrix.from_columns(cols)


def quotient(a: Matrix, w: Subspace) -> Matrix:
    """Induced action of ``a`` on ``Q^d / w``."""
    return block_decompose(a, w)[3]
