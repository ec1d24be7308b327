"""Linear representations of regular sequences on words.

A sequence ``f`` on words over the alphabet ``{1, ..., m}`` is given by a
row vector ``w``, one d x d matrix per symbol and a column vector ``v``:

    f(i1 i2 ... is) = w^T A_{i1} A_{i2} ... A_{is} v

so the leftmost symbol is applied first to ``w``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .growth import (
    DEFAULT_CLOSURE_CAP,
    DEFAULT_FRONTIER_BUDGET,
    GeneratorSet,
    GrowthReport,
    Verdict,
    detect_degenerate,
    empirical_slope,
    growth_degree,
)
from .linalg import DimensionError, Matrix, Subspace, restrict, span_closure
from .polynomial import _q

__all__ = [
    "AlphabetMismatch",
    "LinRep",
    "Dfao",
    "SeqVerdict",
    "SeqGrowthReport",
    "parse_word",
    "format_word",
    "all_words",
    "add",
    "convolve",
    "minimize",
    "from_dfao",
    "growth_degree_seq",
    "conv_oracle",
    "seq_max_table",
    "one",
    "epsilon_indicator",
    "digit_sum",
    "thue_morse",
    "thue_morse_dfao",
]


class AlphabetMismatch(ValueError):
    pass


def parse_word(text: str, m: int, alphabet: Optional[Sequence[str]] = None) -> tuple[int, ...]:
    """Parse a word given as text.

    With ``alphabet`` (e.g. ``("0", "1")``) each character is looked up and
    mapped to its 1-based position.  Without it the characters are symbol
    numbers; a comma-separated list allows symbols above 9.  ``""`` and
    ``"ε"`` denote the empty word.
    """
    text = text.strip()
    if text in ("", "ε", "eps"):
        return ()
    if alphabet is not None:
        index = {a: i for i, a in enumerate(alphabet, start=1)}
        try:
            word = tuple(index[ch] for ch in text)
        except KeyError as exc:
            raise ValueError(f"character {exc.args[0]!r} not in alphabet {list(alphabet)}") from None
    else:
        parts = text.split(",") if "," in text else list(text)
        try:
            word = tuple(int(p) for p in parts)
        except ValueError:
            raise ValueError(f"cannot parse word {text!r}") from None
    for s in word:
        if not 1 <= s <= m:
            raise ValueError(f"symbol {s} outside alphabet 1..{m}")
    return word


def format_word(word: Sequence[int]) -> str:
    if any(s > 9 for s in word):
        return ",".join(str(s) for s in word)
    return "".join(str(s) for s in word)


def all_words(m: int, max_len: int):
    """Every word of length ``0 .. max_len`` in shortlex order."""
    level = [()]
    for _ in range(max_len + 1):
        yield from level
        level = [w + (i,) for w in level for i in range(1, m + 1)]


@dataclass(frozen=True)
class LinRep:
    w: tuple
    matrices: tuple[Matrix, ...]
    v: tuple
    alphabet: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        mats = tuple(a if isinstance(a, Matrix) else Matrix(a) for a in self.matrices)
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "w", tuple(_q(x) for x in self.w))
        object.__setattr__(self, "v", tuple(_q(x) for x in self.v))
        if not mats:
            raise ValueError("a linear representation needs at least one symbol")
        d = len(self.w)
        if d < 1:
            raise DimensionError("dimension must be at least 1")
        if len(self.v) != d:
            raise DimensionError(f"row vector has {d} entries but column vector has {len(self.v)}")
        for i, a in enumerate(mats, start=1):
            if a.shape != (d, d):
                raise DimensionError(f"matrix for symbol {i} has shape {a.shape}, expected {(d, d)}")
        if self.alphabet is not None:
            alph = tuple(self.alphabet)
            if len(alph) != len(mats):
                raise AlphabetMismatch(f"alphabet {list(alph)} does not have {len(mats)} symbols")
            object.__setattr__(self, "alphabet", alph)

    @property
    def m(self) -> int:
        return len(self.matrices)

    @property
    def d(self) -> int:
        return len(self.w)

    def __call__(self, word) -> Fraction:
        return eval_rep(self, word)

    def word(self, text: str) -> tuple[int, ...]:
        return parse_word(text, self.m, self.alphabet)

    def row(self, word: Sequence[int]) -> tuple:
        r = self.w
        for s in word:
            if not 1 <= s <= self.m:
                raise ValueError(f"symbol {s} outside alphabet 1..{self.m}")
            r = self.matrices[s - 1].rapply(r)
        return r


def eval_rep(rep: LinRep, word) -> Fraction:
    if isinstance(word, str):
        word = rep.word(word)
    r = rep.row(word)
    return _q(sum(a * b for a, b in zip(r, rep.v)))


def _check_alphabets(f: LinRep, g: LinRep):
    if f.m != g.m or (f.alphabet and g.alphabet and f.alphabet != g.alphabet):
        fa = list(f.alphabet) if f.alphabet else list(range(1, f.m + 1))
        ga = list(g.alphabet) if g.alphabet else list(range(1, g.m + 1))
        raise AlphabetMismatch(f"alphabet mismatch: {fa} (size {f.m}) vs {ga} (size {g.m})")


def _direct_sum(a: Matrix, b: Matrix, top_right: Optional[Matrix] = None) -> Matrix:
    tr = top_right if top_right is not None else Matrix.zeros(a.rows, b.cols)
    return Matrix.block([[a, tr], [Matrix.zeros(b.rows, a.cols), b]])


def add(f: LinRep, g: LinRep, scalar=1) -> LinRep:
    """Representation of ``f + scalar * g`` (block diagonal)."""
    _check_alphabets(f, g)
    lam = _q(scalar)
    return LinRep(
        w=f.w + g.w,
        matrices=tuple(_direct_sum(a, b) for a, b in zip(f.matrices, g.matrices)),
        v=f.v + tuple(lam * x for x in g.v),
        alphabet=f.alphabet or g.alphabet,
    )


def convolve(f: LinRep, g: LinRep) -> LinRep:
    """Representation of the convolution ``(f * g)(u) = sum over splits u = xy of f(x) g(y)``.

    Symbol ``i`` acts by ``[[A_i, v_f w_g^T B_i], [0, B_i]]`` with row
    vector ``[w_f, 0]`` and column vector ``[g(ε) v_f, v_g]``.  The block
    sums the per-symbol constructions ``C_{i,j}`` over ``j`` and the
    column vector adds the ``g(ε) f`` split.
    """
    _check_alphabets(f, g)
    vf = Matrix.from_columns([f.v])
    wg = Matrix([list(g.w)])
    outer = vf @ wg
    g_eps = eval_rep(g, ())
    return LinRep(
        w=f.w + (0,) * g.d,
        matrices=tuple(_direct_sum(a, b, outer @ b) for a, b in zip(f.matrices, g.matrices)),
        v=tuple(g_eps * x for x in f.v) + g.v,
        alphabet=f.alphabet or g.alphabet,
    )


def _zero_rep(m: int, alphabet=None) -> LinRep:
    return LinRep((0,), tuple(Matrix([[0]]) for _ in range(m)), (0,), alphabet)


def minimize(rep: LinRep) -> LinRep:
    """Equivalent representation of minimal dimension over Q.

    First restricts to the reachable space ``span{A_u v}``, then quotients
    to the observable space ``span{w^T A_u}``.  Both spaces use canonical
    echelon bases, so the output is determined by the input; a different
    pivot order would give a conjugate representation.  The zero sequence
    is returned as a 1-dimensional all-zero representation.
    """
    d, mats = rep.d, rep.matrices
    reach = span_closure([rep.v], mats, d)
    if reach.dim == 0:
        return _zero_rep(rep.m, rep.alphabet)
    r_mats = [restrict(a, reach) for a in mats]
    r_v = reach.coordinates(rep.v)
    r_w = tuple(_q(sum(x * y for x, y in zip(rep.w, b))) for b in reach.basis)

    obs = span_closure([r_w], [a.transpose() for a in r_mats], reach.dim)
    if obs.dim == 0:
        return _zero_rep(rep.m, rep.alphabet)
    o_mats = tuple(Matrix([list(obs.coordinates(a.rapply(l))) for l in obs.basis]) for a in r_mats)
    o_w = obs.coordinates(r_w)
    o_v = tuple(_q(sum(x * y for x, y in zip(l, r_v))) for l in obs.basis)
    return LinRep(o_w, o_mats, o_v, rep.alphabet)


def reachable_space(rep: LinRep) -> Subspace:
    return span_closure([rep.v], rep.matrices, rep.d)


def observable_space(rep: LinRep) -> Subspace:
    return span_closure([rep.w], [a.transpose() for a in rep.matrices], rep.d)


@dataclass(frozen=True)
class Dfao:
    """Deterministic finite automaton with output.

    ``transitions[i][q]`` is the state reached from ``q`` on symbol ``i + 1``.
    """

    states: int
    initial: int
    transitions: tuple[tuple[int, ...], ...]
    output: tuple
    alphabet: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "transitions", tuple(tuple(t) for t in self.transitions))
        object.__setattr__(self, "output", tuple(_q(x) for x in self.output))
        if self.alphabet is not None:
            object.__setattr__(self, "alphabet", tuple(self.alphabet))
            if len(self.alphabet) != len(self.transitions):
                raise AlphabetMismatch(f"alphabet {list(self.alphabet)} does not match "
                                       f"{len(self.transitions)} transition maps")
        if self.states < 1:
            raise ValueError("a DFAO needs at least one state")
        if not 0 <= self.initial < self.states:
            raise ValueError(f"initial state {self.initial} out of range")
        if not self.transitions:
            raise ValueError("a DFAO needs at least one symbol")
        if len(self.output) != self.states:
            raise ValueError(f"{len(self.output)} outputs for {self.states} states")
        for i, t in enumerate(self.transitions, start=1):
            if len(t) != self.states:
                raise ValueError(f"transition map for symbol {i} is not total")
            for q in t:
                if not 0 <= q < self.states:
                    raise ValueError(f"transition for symbol {i} targets unknown state {q}")

    @property
    def m(self) -> int:
        return len(self.transitions)

    def run(self, word: Sequence[int]):
        q = self.initial
        for s in word:
            q = self.transitions[s - 1][q]
        return self.output[q]


def from_dfao(a: Dfao) -> LinRep:
    """State-indicator representation: ``A_i[p][q] = 1`` iff symbol ``i`` moves ``p`` to ``q``."""
    n = a.states
    mats = []
    for t in a.transitions:
        rows = [[0] * n for _ in range(n)]
        for p, q in enumerate(t):
            rows[p][q] = 1
        mats.append(Matrix(rows))
    w = tuple(int(q == a.initial) for q in range(n))
    return LinRep(w, tuple(mats), a.output, a.alphabet)


def conv_oracle(f: Callable, g: Callable, word: Sequence[int]):
    """Convolution computed straight from its definition."""
    word = tuple(word)
    return _q(sum(Fraction(f(word[:j])) * Fraction(g(word[j:])) for j in range(len(word) + 1)))


def seq_max_table(rep: LinRep, N: int, budget: int = DEFAULT_FRONTIER_BUDGET):
    """``max |f(w)|`` over words of each length ``0 .. N``.

    Tracks the distinct row vectors ``w^T A_u`` per length rather than the
    words themselves.  Returns ``(values, truncated_at)``.
    """
    frontier = {rep.w}
    values = [abs(_q(sum(a * b for a, b in zip(rep.w, rep.v))))]
    truncated_at = None
    for n in range(1, N + 1):
        nxt = {a.rapply(r) for r in frontier for a in rep.matrices}
        if len(nxt) > budget:
            truncated_at = n
            break
        values.append(max(abs(_q(sum(a * b for a, b in zip(r, rep.v)))) for r in nxt))
        frontier = nxt
    return tuple(values), truncated_at


class SeqVerdict(str, enum.Enum):
    DEGENERATE = "Degenerate"
    FINITE_DEGREE = "FiniteDegree"
    INFINITE = "Infinite"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class SeqGrowthReport:
    verdict: SeqVerdict
    grdeg: Optional[int]
    in_r0: str
    minimized_dim: int
    growth: Optional[GrowthReport] = None
    max_table: tuple = ()
    empirical_slope: Optional[float] = None
    fit_range: Optional[tuple[int, int]] = None
    bound_c: Optional[Fraction] = None


def growth_degree_seq(rep: LinRep, max_n: int = 16, word_budget: Optional[int] = None,
                      closure_cap: int = DEFAULT_CLOSURE_CAP,
                      frontier_budget: int = DEFAULT_FRONTIER_BUDGET,
                      norm_kind: str = "inf_operator", threads: Optional[int] = None) -> SeqGrowthReport:
    """Growth degree of a regular sequence via its minimized matrices.

    ``GrDeg(f)`` is the matrix growth degree of the minimal representation;
    the brute-force ``max |f(w)|`` table up to ``max_n`` is evidence only.
    """
    mrep = minimize(rep)
    table, trunc = seq_max_table(mrep, max_n, frontier_budget)
    top = len(table) - 1
    lo = max(1, top // 2)
    slope = empirical_slope(table, lo, top)
    common = dict(minimized_dim=mrep.d, max_table=table, empirical_slope=slope, fit_range=(lo, top))

    gens = GeneratorSet(mrep.matrices)
    if not any(mrep.w) or detect_degenerate(gens):
        return SeqGrowthReport(SeqVerdict.DEGENERATE, None, "yes", **common)
    report = growth_degree(gens, norm_kind=norm_kind, max_n=max_n, word_budget=word_budget,
                           closure_cap=closure_cap, frontier_budget=frontier_budget, threads=threads)
    if report.verdict is Verdict.POLYNOMIAL:
        k = report.degree
        ratios = [Fraction(table[n]) / n**k for n in range(1, top + 1)]
        c = _q(max(ratios)) if ratios else None
        return SeqGrowthReport(SeqVerdict.FINITE_DEGREE, k, "yes", growth=report, bound_c=c, **common)
    if report.verdict is Verdict.EXPONENTIAL:
        return SeqGrowthReport(SeqVerdict.INFINITE, None, "no", growth=report, **common)
    if report.verdict is Verdict.DEGENERATE:
        return SeqGrowthReport(SeqVerdict.DEGENERATE, None, "yes", growth=report, **common)
    return SeqGrowthReport(SeqVerdict.INCONCLUSIVE, None, "inconclusive", growth=report, **common)


# A small zoo of standard sequences over a binary alphabet.

def _digits(m: int):
    return tuple(str(i) for i in range(m)) if m <= 10 else None


def one(m: int = 2) -> LinRep:
    """The constant sequence 1."""
    return LinRep((1,), tuple(Matrix([[1]]) for _ in range(m)), (1,), _digits(m))


def epsilon_indicator(m: int = 2) -> LinRep:
    """1 on the empty word, 0 elsewhere; the unit for convolution."""
    return LinRep((1,), tuple(Matrix([[0]]) for _ in range(m)), (1,), _digits(m))


def digit_sum(m: int = 2) -> LinRep:
    """Sum of digits, symbol ``i`` standing for digit ``i - 1`` in base ``m``."""
    mats = tuple(Matrix([[1, 0], [i - 1, 1]]) for i in range(1, m + 1))
    return LinRep((0, 1), mats, (1, 0), _digits(m))


def thue_morse_dfao() -> Dfao:
    return Dfao(states=2, initial=0, transitions=((0, 1), (1, 0)), output=(0, 1), alphabet=("0", "1"))


def thue_morse() -> LinRep:
    """Parity of the number of 1 bits (symbol 2)."""
    return from_dfao(thue_morse_dfao())
