"""Tameness of matrices and generator sets.

A square matrix is tame when every eigenvalue is zero or a root of unity.
For rational matrices of size at most ``d`` the admissible roots of unity
have order ``m`` with ``phi(m) <= d``, so raising to the power
``B(d) = lcm{m : phi(m) <= d}`` sends every such eigenvalue to 1.  A matrix
``x`` is therefore tame exactly when ``x^{2B} - x^B`` is nilpotent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

from .linalg import Matrix, DimensionError, Subspace, block_decompose, char_poly, mat_pow, span_closure
from .polynomial import Polynomial, squarefree_part

__all__ = [
    "CycloBound",
    "TamenessVerdict",
    "BlockTriangularization",
    "NotTameError",
    "euler_phi",
    "cyclo_exponent",
    "is_tame_matrix",
    "is_tame_charpoly",
    "block_triangularize",
]


def euler_phi(n: int) -> int:
    result, p, m = n, 2, n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@dataclass(frozen=True)
class CycloBound:
    d: int
    B: int
    orders: tuple[int, ...] = ()


@lru_cache(maxsize=None)
def cyclo_exponent(d: int) -> CycloBound:
    """Uniform exponent killing every root of unity of degree at most ``d``.

    ``phi(m) >= sqrt(m/2)`` so only ``m <= 2 d^2`` need checking.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    orders = tuple(m for m in range(1, 2 * d * d + 1) if euler_phi(m) <= d)
    return CycloBound(d=d, B=math.lcm(*orders), orders=orders)


@dataclass(frozen=True)
class TamenessVerdict:
    tame: bool
    matrix: Optional[Matrix] = None
    charpoly: Optional[Polynomial] = None
    word: Optional[tuple[int, ...]] = None

    def __bool__(self):
        return self.tame


class NotTameError(ValueError):
    def __init__(self, msg, verdict: TamenessVerdict):
        super().__init__(msg)
        self.verdict = verdict


def _nilpotent(y: Matrix) -> bool:
    return mat_pow(y, y.rows).is_zero()


def is_tame_matrix(x: Matrix, d: int | None = None) -> TamenessVerdict:
    if not x.is_square():
        raise DimensionError(f"tameness needs a square matrix, got {x.rows}x{x.cols}")
    d = x.rows if d is None else d
    if x.rows > d:
        raise DimensionError(f"matrix of size {x.rows} exceeds dimension bound {d}")
    if x.rows == 0:
        return TamenessVerdict(True)
    B = cyclo_exponent(d).B
    xb = mat_pow(x, B)
    if _nilpotent(xb @ xb - xb):
        return TamenessVerdict(True)
    return TamenessVerdict(False, matrix=x, charpoly=char_poly(x))


def is_tame_charpoly(p: Polynomial, d: int | None = None) -> bool:
    """True iff every root of monic ``p`` is zero or a root of unity of
    order dividing ``B(d)``."""
    if not p.is_monic():
        raise ValueError(f"expected a monic polynomial, got {p}")
    d = max(p.degree, 1) if d is None else d
    if p.degree > d:
        raise ValueError(f"degree {p.degree} exceeds dimension bound {d}")
    if p.degree == 0:
        return True
    B = cyclo_exponent(d).B
    s = squarefree_part(p)
    x = Polynomial.x()
    # x * (x^B - 1) mod s
    r = (x * (x.powmod(B, s) - 1)) % s
    return r.is_zero()


@dataclass(frozen=True)
class BlockTriangularization:
    U: Matrix
    e: int
    subspace: Subspace
    B: tuple[Matrix, ...]
    C: tuple[Matrix, ...]
    D: tuple[Matrix, ...]

    def assembled(self, i: int) -> Matrix:
        d = self.U.rows
        return Matrix.block([[self.B[i], self.D[i]],
                             [Matrix.zeros(d - self.e, self.e), self.C[i]]])


def products_up_to(matrices: Sequence[Matrix], max_len: int, include_identity: bool = True):
    """Distinct products of at most ``max_len`` factors, with a word for each.

    Returns a list of ``(word, matrix)`` in breadth-first order; each matrix
    appears once, with the first word that reached it.
    """
    d = matrices[0].rows
    ident = Matrix.identity(d)
    seen = {ident: ()}
    out = [((), ident)] if include_identity else []
    frontier = [((), ident)]
    for _ in range(max_len):
        nxt = []
        for word, p in frontier:
            for i, g in enumerate(matrices, start=1):
                q = g @ p
                if q not in seen:
                    w = (i,) + word
                    seen[q] = w
                    nxt.append((w, q))
        nxt.sort(key=lambda t: (t[0], t[1]))
        out.extend(nxt)
        frontier = nxt
        if not frontier:
            break
    return out


def block_triangularize(gens, budget: int | None = None, d: int | None = None):
    """Common block upper-triangular form for a tame generator set.

    Seeds a subspace with the columns of ``X^{2a} - X^a`` for distinct
    products ``X`` of length at most ``budget`` (default ``2d``) and closes
    it under the generators.  Returns a :class:`BlockTriangularization` when
    that subspace is proper and nonzero, else ``None``.
    """
    matrices = list(getattr(gens, "matrices", gens))
    if not matrices:
        raise ValueError("empty generator set")
    n = matrices[0].rows
    d = n if d is None else d
    if n < 2:
        raise ValueError("block triangularization needs dimension at least 2")
    for i, g in enumerate(matrices, start=1):
        v = is_tame_matrix(g, d)
        if not v:
            raise NotTameError(f"generator {i} is not tame (char poly {v.charpoly})",
                               TamenessVerdict(False, g, v.charpoly, (i,)))
    budget = 2 * n if budget is None else budget
    a = cyclo_exponent(d).B
    seed = []
    for _, x in products_up_to(matrices, budget):
        xa = mat_pow(x, a)
        seed.extend((xa @ xa - xa).columns())
    w = span_closure(seed, matrices, n)
    if w.dim == 0 or w.dim == n:
        return None
    parts = [block_decompose(g, w) for g in matrices]
    U = parts[0][0]
    return BlockTriangularization(
        U=U, e=w.dim, subspace=w,
        B=tuple(p[1] for p in parts),
        C=tuple(p[3] for p in parts),
        D=tuple(p[2] for p in parts),
    )
