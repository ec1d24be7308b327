"""Shared strategies and brute-force oracles."""

import itertools
from fractions import Fraction

import sympy
from hypothesis import strategies as st

from semigrowth import Matrix, Polynomial


def int_matrices(d, lo=-3, hi=3):
    return st.lists(st.lists(st.integers(lo, hi), min_size=d, max_size=d), min_size=d, max_size=d).map(Matrix)


def square_matrices(max_d=4, lo=-3, hi=3):
    return st.integers(1, max_d).flatmap(lambda d: int_matrices(d, lo, hi))


def rationals(lo=-5, hi=5):
    return st.fractions(min_value=lo, max_value=hi, max_denominator=6)


def unimodular(d):
    """Random product of elementary integer matrices; determinant +-1."""
    def build(ops):
        u = Matrix.identity(d)
        for i, j, c in ops:
            if i == j:
                continue
            e = Matrix.identity(d).to_lists()
            e[i][j] = c
            u = u @ Matrix(e)
        return u
    op = st.tuples(st.integers(0, d - 1), st.integers(0, d - 1), st.integers(-2, 2))
    return st.lists(op, max_size=6).map(build)


def to_sympy(a: Matrix):
    return sympy.Matrix(a.to_lists())


def sympy_charpoly(a: Matrix) -> Polynomial:
    x = sympy.Symbol("x")
    p = sympy.Poly(to_sympy(a).charpoly(x).as_expr(), x)
    return Polynomial(Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs()))


def sympy_is_tame(a: Matrix) -> bool:
    """Every irreducible factor of the char poly is x or cyclotomic."""
    x = sympy.Symbol("x")
    p = to_sympy(a).charpoly(x).as_expr()
    for f, _ in sympy.factor_list(p, x)[1]:
        f = sympy.Poly(f, x).monic().all_coeffs()
        if f == [1, 0]:
            continue
        n = len(f) - 1
        # cyclotomic Phi_m has degree phi(m) and phi(m) >= sqrt(m / 2)
        if not any(sympy.Poly(sympy.cyclotomic_poly(m, x), x).all_coeffs() == f
                   for m in range(1, 2 * n * n + 3) if sympy.totient(m) == n):
            return False
    return True


def word_product(mats, word):
    p = Matrix.identity(mats[0].rows)
    for i in word:
        p = p @ mats[i - 1]
    return p


def brute_mn(mats, n, kind="inf_operator"):
    """max norm over all m^n words, no deduplication."""
    from semigrowth import norm
    return max(norm(word_product(mats, w), kind) for w in itertools.product(range(1, len(mats) + 1), repeat=n))


def words(m, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(range(1, m + 1), repeat=n)


def direct_eval(rep, word):
    """w^T A_{u1} ... A_{us} v by explicit matrix products."""
    p = word_product(rep.matrices, word) if word else Matrix.identity(rep.d)
    col = p.apply(rep.v)
    return sum(Fraction(a) * b for a, b in zip(rep.w, col))
