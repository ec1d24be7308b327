"""Growth of maximal product norms for finite sets of integer matrices.

For a finite set ``A`` of d x d integer matrices let ``m_n`` be the largest
norm of a product of exactly ``n`` generators.  Either ``m_n`` is eventually
zero (degenerate), or it grows like ``n^(k-1)`` for an integer ``1 <= k <= d``,
or some product has an eigenvalue of modulus > 1 and growth is exponential.

The polynomial degree is computed exactly from a chain of invariant
subspaces ``V = V_0 > V_1 > ... > V_k = 0`` where ``V_{j+1}`` is the smallest
invariant subspace containing ``(X^{2a} - X^a) V_j`` for all products ``X``;
the chain length is ``k``.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .linalg import Matrix, DimensionError, Subspace, mat_pow, norm, quotient, restrict, span_closure
from .polynomial import Polynomial, _q
from .tameness import NotTameError, TamenessVerdict, cyclo_exponent, is_tame_matrix

__all__ = [
    "GeneratorSet",
    "MnTable",
    "Filtration",
    "Verdict",
    "GrowthReport",
    "SemigroupClosure",
    "BudgetExhausted",
    "InvariantViolation",
    "mn_bruteforce",
    "detect_degenerate",
    "detect_exponential",
    "semigroup_closure",
    "filtration",
    "growth_degree",
    "verify_telescoping",
    "poly_progression_check",
    "empirical_slope",
]

THREADS_ENV = "SEMIGROWTH_THREADS"
DEFAULT_MAX_N = 32
DEFAULT_CLOSURE_CAP = 10**6
DEFAULT_FRONTIER_BUDGET = 200_000


class BudgetExhausted(RuntimeError):
    """A decision-path budget ran out; carries the name of the budget."""

    def __init__(self, budget: str, msg: str = ""):
        super().__init__(msg or f"budget exhausted: {budget}")
        self.budget = budget


class InvariantViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class GeneratorSet:
    matrices: tuple[Matrix, ...]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        mats = tuple(m if isinstance(m, Matrix) else Matrix(m) for m in self.matrices)
        object.__setattr__(self, "matrices", mats)
        if not mats:
            raise ValueError("a generator set needs at least one matrix")
        d = mats[0].rows
        for i, m in enumerate(mats, start=1):
            if m.shape != (d, d):
                raise DimensionError(f"generator {i} has shape {m.shape}, expected {(d, d)}")
        if d < 1:
            raise DimensionError("generators must be at least 1x1")
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != len(mats):
                raise ValueError(f"{len(labels)} labels for {len(mats)} matrices")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def of(cls, *matrices, labels=None) -> GeneratorSet:
        return cls(tuple(Matrix(m) if not isinstance(m, Matrix) else m for m in matrices), labels)

    @property
    def d(self) -> int:
        return self.matrices[0].rows

    @property
    def m(self) -> int:
        return len(self.matrices)

    def is_integral(self) -> bool:
        return all(g.is_integral() for g in self.matrices)

    def product(self, word: Sequence[int]) -> Matrix:
        """``A_{i1} ... A_{is}`` for the 1-based word ``i1 ... is``."""
        p = Matrix.identity(self.d)
        for i in reversed(word):
            if not 1 <= i <= self.m:
                raise ValueError(f"symbol {i} outside alphabet 1..{self.m}")
            p = self.matrices[i - 1] @ p
        return p

    def conjugate(self, u: Matrix) -> GeneratorSet:
        ui = u.inverse()
        return GeneratorSet(tuple(ui @ g @ u for g in self.matrices), self.labels)


def _threads(threads: Optional[int]) -> int:
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    return max(1, threads)


def _expand(frontier, matrices, threads):
    """All ``g @ p`` for ``p`` in the frontier, deduplicated; each product is
    tagged with its lexicographically smallest word."""

    def work(chunk):
        out = {}
        for word, p in chunk:
            for i, g in enumerate(matrices, start=1):
                q = g @ p
                w = (i,) + word
                old = out.get(q)
                if old is None or w < old:
                    out[q] = w
        return out

    if threads <= 1 or len(frontier) < 64:
        parts = [work(frontier)]
    else:
        size = -(-len(frontier) // threads)
        chunks = [frontier[i:i + size] for i in range(0, len(frontier), size)]
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(work, chunks))
    merged = parts[0]
    for part in parts[1:]:
        for q, w in part.items():
            old = merged.get(q)
            if old is None or w < old:
                merged[q] = w
    return merged


def _expand_set(frontier, matrices, threads):
    """Distinct ``g @ p`` over the frontier, sorted by entries."""

    def work(chunk):
        return {g @ p for p in chunk for g in matrices}

    if threads <= 1 or len(frontier) < 64:
        out = work(frontier)
    else:
        size = -(-len(frontier) // threads)
        chunks = [frontier[i:i + size] for i in range(0, len(frontier), size)]
        with ThreadPoolExecutor(max_workers=threads) as ex:
            out = set().union(*ex.map(work, chunks))
    return sorted(out, key=lambda q: q.entries)


@dataclass(frozen=True)
class MnTable:
    norm_kind: str
    values: tuple
    frontier_sizes: tuple[int, ...]
    truncated_at: Optional[int] = None

    @property
    def N(self) -> int:
        return len(self.values) - 1

    @property
    def truncated(self) -> bool:
        return self.truncated_at is not None

    @property
    def reliable_until(self) -> int:
        """Largest n whose value is exact."""
        return self.N if self.truncated_at is None else self.truncated_at - 1

    def is_submultiplicative(self) -> bool:
        top = self.reliable_until
        v = self.values
        return all(v[i + j] <= v[i] * v[j]
                   for i in range(top + 1) for j in range(top + 1 - i))


def mn_bruteforce(gens: GeneratorSet, N: int, norm_kind: str = "inf_operator",
                  budget: int = DEFAULT_FRONTIER_BUDGET, threads: Optional[int] = None) -> MnTable:
    """Exact ``m_0 .. m_N`` by deduplicated breadth-first product enumeration.

    When a length has more than ``budget`` distinct products, only the first
    ``budget`` (in sorted order) are scanned, the value recorded for that
    length is a lower bound, ``truncated_at`` records it and enumeration
    stops there.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    threads = _threads(threads)
    ident = Matrix.identity(gens.d)
    frontier = [ident]
    values = [norm(ident, norm_kind)]
    sizes = [1]
    truncated_at = None
    for n in range(1, N + 1):
        nxt = _expand_set(frontier, gens.matrices, threads)
        sizes.append(len(nxt))
        if len(nxt) > budget:
            # later lengths would only be lower bounds; stop here
            truncated_at = n
            nxt = nxt[:budget]
        values.append(max(norm(q, norm_kind) for q in nxt) if nxt else 0)
        if truncated_at is not None:
            break
        frontier = nxt
    return MnTable(norm_kind, tuple(values), tuple(sizes), truncated_at)


def detect_degenerate(gens: GeneratorSet) -> bool:
    """True iff every product of length d vanishes.

    If all products of some length vanish, every element of the semigroup
    without identity is nilpotent, so by Levitzki's theorem the generators
    are simultaneously strictly upper triangularizable and all length-d
    products vanish.  The check tracks the linear span of length-n products,
    which is enough since a span is zero iff all its members are.
    """
    d = gens.d
    span = Subspace(d * d, [Matrix.identity(d).entries])
    for _ in range(d):
        if span.dim == 0:
            return True
        mats = [Matrix(b, d, d) for b in span.basis]
        span = Subspace(d * d, [(g @ p).entries for p in mats for g in gens.matrices])
    return span.dim == 0


def detect_exponential(gens: GeneratorSet, max_word_len: Optional[int] = None,
                       threads: Optional[int] = None) -> Optional[TamenessVerdict]:
    """First product (by length, then word) that is not tame, or ``None``.

    For integer matrices a non-tame product has an eigenvalue of modulus
    greater than one (Kronecker), which certifies exponential growth.
    """
    max_word_len = 2 * gens.d if max_word_len is None else max_word_len
    threads = _threads(threads)
    ident = Matrix.identity(gens.d)
    seen = {ident}
    frontier = [((), ident)]
    for _ in range(max_word_len):
        new = [(w, q) for q, w in _expand(frontier, gens.matrices, threads).items() if q not in seen]
        new.sort()
        for w, q in new:
            v = is_tame_matrix(q, gens.d)
            if not v:
                return TamenessVerdict(False, matrix=q, charpoly=v.charpoly, word=w)
        seen.update(q for _, q in new)
        frontier = new
        if not frontier:
            break
    return None


@dataclass(frozen=True)
class SemigroupClosure:
    finite: bool
    elements: tuple[Matrix, ...]
    cap: int

    def __len__(self):
        return len(self.elements)


def semigroup_closure(matrices, cap: int = DEFAULT_CLOSURE_CAP) -> SemigroupClosure:
    """Breadth-first closure of the monoid generated by ``matrices``.

    ``finite`` is False when more than ``cap`` elements were found; the
    elements collected so far are returned either way.
    """
    matrices = list(getattr(matrices, "matrices", matrices))
    d = matrices[0].rows if matrices else 0
    ident = Matrix.identity(d)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in matrices:
                q = g @ p
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
                    if len(seen) > cap:
                        return SemigroupClosure(False, tuple(sorted(seen)), cap)
        frontier = nxt
    return SemigroupClosure(True, tuple(sorted(seen)), cap)


@dataclass(frozen=True)
class Filtration:
    a: int
    chain: tuple[Subspace, ...]
    quotient_sizes: tuple[int, ...]
    word_lengths: tuple[int, ...] = ()

    @property
    def k(self) -> int:
        return len(self.chain) - 1

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.chain)


class _Products:
    """Lazily extended list of distinct products with their ``X^{2a} - X^a``."""

    def __init__(self, matrices, a, threads, budget):
        self.matrices = matrices
        self.a = a
        self.threads = threads
        self.budget = budget
        ident = Matrix.identity(matrices[0].rows)
        self.seen = {ident}
        self.frontier = [((), ident)]
        self.levels = [[self._diff(ident)]]

    def _diff(self, x):
        xa = mat_pow(x, self.a)
        return xa @ xa - xa

    def upto(self, L):
        while len(self.levels) <= L:
            new = [(w, q) for q, w in _expand(self.frontier, self.matrices, self.threads).items()
                   if q not in self.seen]
            if len(new) > self.budget:
                raise BudgetExhausted("frontier_budget",
                                      f"more than {self.budget} distinct products of length {len(self.levels)}")
            new.sort()
            self.seen.update(q for _, q in new)
            self.frontier = new
            self.levels.append([self._diff(q) for _, q in new])
        return self.levels[L]


def filtration(gens: GeneratorSet, word_budget: Optional[int] = None,
               closure_cap: int = DEFAULT_CLOSURE_CAP, threads: Optional[int] = None,
               frontier_budget: int = DEFAULT_FRONTIER_BUDGET, max_word_len: Optional[int] = None) -> Filtration:
    """Chain of invariant subspaces whose length is the growth exponent plus one.

    Products ``X`` range over distinct products of at most ``word_budget``
    generators (default ``2d``).  A level is accepted once enlarging the
    budget twice in a row leaves it unchanged.  The action on each quotient
    ``V_j / V_{j+1}`` must generate a finite semigroup; that is checked
    with :func:`semigroup_closure` and a failure raises
    :class:`BudgetExhausted`.
    """
    mats = gens.matrices
    d = gens.d
    for i, g in enumerate(mats, start=1):
        v = is_tame_matrix(g, d)
        if not v:
            raise NotTameError(f"generator {i} is not tame (char poly {v.charpoly})",
                               TamenessVerdict(False, g, v.charpoly, (i,)))
    a = cyclo_exponent(d).B
    budget = 2 * d if word_budget is None else word_budget
    max_len = budget + 3 * d + 2 if max_word_len is None else max_word_len
    prods = _Products(mats, a, _threads(threads), frontier_budget)

    current = Subspace.full(d)
    chain = [current]
    sizes = []
    lengths = []
    while current.dim > 0:
        basis = current.basis
        seeds = [D.apply(b) for L in range(budget + 1) for D in prods.upto(L) for b in basis]
        nxt = span_closure(seeds, mats, d)
        L, stable = budget, 0
        while stable < 2:
            L += 1
            if L > max_len:
                raise BudgetExhausted("word_budget", f"level {len(chain)} did not stabilize by length {max_len}")
            grown = span_closure(list(nxt.basis) + [D.apply(b) for D in prods.upto(L) for b in basis], mats, d)
            if grown == nxt:
                stable += 1
            else:
                nxt, stable = grown, 0
        if nxt == current:
            raise BudgetExhausted("tameness", "filtration stalled: the semigroup is not tame")
        inner = nxt.in_coordinates_of(current)
        acts = [quotient(restrict(g, current), inner) for g in mats]
        closure = semigroup_closure(acts, closure_cap)
        if not closure.finite:
            raise BudgetExhausted("closure_cap",
                                  f"quotient semigroup at level {len(chain) - 1} exceeds {closure_cap} elements")
        sizes.append(len(closure))
        lengths.append(L)
        chain.append(nxt)
        current = nxt
    return Filtration(a=a, chain=tuple(chain), quotient_sizes=tuple(sizes), word_lengths=tuple(lengths))


class Verdict(str, enum.Enum):
    DEGENERATE = "Degenerate"
    POLYNOMIAL = "Polynomial"
    EXPONENTIAL = "Exponential"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class GrowthReport:
    verdict: Verdict
    degree: Optional[int] = None
    filtration: Optional[Filtration] = None
    witness_word: Optional[tuple[int, ...]] = None
    witness_charpoly: Optional[Polynomial] = None
    mn_table: Optional[MnTable] = None
    empirical_slope: Optional[float] = None
    fit_range: Optional[tuple[int, int]] = None
    c1: Optional[Fraction] = None
    c2: Optional[Fraction] = None
    exhausted_budget: Optional[str] = None
    budgets: dict = field(default_factory=dict)

    @property
    def spectral_radius(self) -> str:
        """Joint spectral radius, qualitatively."""
        return {Verdict.DEGENERATE: "0", Verdict.POLYNOMIAL: "1",
                Verdict.EXPONENTIAL: ">1"}.get(self.verdict, "unknown")


def empirical_slope(values: Sequence, lo: int, hi: int) -> Optional[float]:
    """Least-squares slope of ``log m_n`` against ``log n`` for ``lo <= n <= hi``."""
    pts = [(n, values[n]) for n in range(max(lo, 1), hi + 1) if values[n] > 0]
    if len(pts) < 2:
        return None
    x = np.log([float(n) for n, _ in pts])
    y = np.log([float(v) for _, v in pts])
    return float(np.polyfit(x, y, 1)[0])


def _sandwich(table: MnTable, degree: int):
    top = table.reliable_until
    ratios = [Fraction(table.values[n]) / n**degree for n in range(1, top + 1)]
    if not ratios:
        return None, None
    return _q(min(ratios)), _q(max(ratios))


def growth_degree(gens: GeneratorSet, norm_kind: str = "inf_operator", max_n: int = DEFAULT_MAX_N,
                  word_budget: Optional[int] = None, closure_cap: int = DEFAULT_CLOSURE_CAP,
                  frontier_budget: int = DEFAULT_FRONTIER_BUDGET, threads: Optional[int] = None) -> GrowthReport:
    """Classify the growth of ``m_n`` for ``gens``.

    Degenerate sets are detected first, then a non-tame product of length
    at most ``word_budget`` certifies exponential growth; otherwise the
    filtration length gives the exact polynomial degree.  A brute-force
    ``m_n`` table up to ``max_n`` is attached as corroborating evidence.
    """
    wb = 2 * gens.d if word_budget is None else word_budget
    budgets = {"max_n": max_n, "word_budget": wb, "closure_cap": closure_cap,
               "frontier_budget": frontier_budget, "norm": norm_kind}
    table = mn_bruteforce(gens, max_n, norm_kind, frontier_budget, threads)
    top = table.reliable_until
    lo = max(1, top // 2)
    slope = empirical_slope(table.values, lo, top)
    common = dict(mn_table=table, empirical_slope=slope, fit_range=(lo, top), budgets=budgets)

    if detect_degenerate(gens):
        return GrowthReport(Verdict.DEGENERATE, **common)

    if gens.is_integral():
        bad = [n for n in range(top + 1) if table.values[n] < 1]
        if bad:
            raise InvariantViolation(f"non-degenerate integer set has m_n < 1 at n = {bad}")

    witness = detect_exponential(gens, wb, threads)
    if witness is not None:
        return GrowthReport(Verdict.EXPONENTIAL, witness_word=witness.word,
                            witness_charpoly=witness.charpoly, **common)
    try:
        filt = filtration(gens, wb, closure_cap, threads, frontier_budget)
    except BudgetExhausted as exc:
        return GrowthReport(Verdict.INCONCLUSIVE, exhausted_budget=exc.budget, **common)
    degree = filt.k - 1
    c1, c2 = _sandwich(table, degree)
    return GrowthReport(Verdict.POLYNOMIAL, degree=degree, filtration=filt, c1=c1, c2=c2, **common)


def verify_telescoping(x: Matrix, a: int, n: int) -> bool:
    """Check ``X^{na} - X^a`` against its expansion in powers of ``D = X^{2a} - X^a``:

        D^2 * sum_{i=0}^{n-4} (n-3-i) X^{ai} + n (X^{3a} - X^{2a}) - D (2 X^a - I)
    """
    if n < 4:
        raise ValueError("identity needs n >= 4")
    if not x.is_square():
        raise DimensionError(f"expected a square matrix, got {x.rows}x{x.cols}")
    I = Matrix.identity(x.rows)
    xa = mat_pow(x, a)
    x2a = xa @ xa
    x3a = x2a @ xa
    D = x2a - xa
    acc = Matrix.zeros(x.rows)
    p = I
    for i in range(n - 3):
        acc = acc + p.scale(n - 3 - i)
        p = p @ xa
    lhs = mat_pow(x, n * a) - xa
    rhs = D @ D @ acc + (x3a - x2a).scale(n) - D @ (xa.scale(2) - I)
    return lhs == rhs


def _differences(vals, order):
    for _ in range(order):
        vals = [b - a for a, b in zip(vals, vals[1:])]
    return vals


def poly_progression_check(pairs: Sequence[tuple[Matrix, Matrix]], v: Sequence, w: Sequence,
                           s: Optional[int] = None, d: Optional[int] = None) -> bool:
    """Check that ``g(n) = w^T (prod_i X_i^n Z_i) v`` is a polynomial along
    every residue class modulo ``s`` (default ``B(d)``).

    Each factor contributes degree below ``d``, so along ``s n + l`` the
    ``(d * len(pairs) + 1)``-th finite differences must vanish; they are
    sampled on ``n = d .. d + d * len(pairs) + 2``.
    """
    d = pairs[0][0].rows if d is None else d
    s = cyclo_exponent(d).B if s is None else s
    D = d * len(pairs)
    ns = range(d, d + D + 3)

    def g(t):
        row = tuple(w)
        for X, Z in pairs:
            row = (mat_pow(X, t) @ Z).rapply(row)
        return _q(sum(r * c for r, c in zip(row, v)))

    for ell in range(s):
        vals = [g(s * n + ell) for n in ns]
        if any(_differences(vals, D + 1)):
            return False
    return True
