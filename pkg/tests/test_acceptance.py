"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (shown in the terminal summary) before
asserting.  Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import random
import subprocess
import sys
import time
from pathlib import Path

from semigrowth import (GeneratorSet, Matrix, SeqVerdict, Verdict, add, char_poly, conv_oracle, convolve,
                        cyclo_exponent, digit_sum, epsilon_indicator, eval_rep, growth_degree,
                        growth_degree_seq, is_tame_charpoly, is_tame_matrix, minimize, one,
                        semigroup_closure, thue_morse, verify_telescoping)
from semigrowth.growth import empirical_slope
from semigrowth.linalg import NORM_KINDS
from helpers import brute_mn, words

INSTANCES = Path(__file__).resolve().parent.parent / "instances"

U = Matrix([[1, 1], [0, 1]])
H1 = Matrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
H2 = Matrix([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
DOUBLE = Matrix([[2]])
FIB = Matrix([[1, 1], [1, 0]])
NIL = Matrix([[0, 1], [0, 0]])
SWAP = Matrix([[0, 1], [1, 0]])


def _timed(f, *a, **kw):
    t = time.perf_counter()
    out = f(*a, **kw)
    return out, time.perf_counter() - t


def test_c01_unipotent(record):
    r, dt = _timed(growth_degree, GeneratorSet.of(U), max_n=64)
    mn_ok = r.mn_table.values == tuple(n + 1 for n in range(65))
    ok = (r.verdict is Verdict.POLYNOMIAL and r.degree == 1 and mn_ok
          and r.filtration.dims == (2, 1, 0) and dt < 1)
    record("1 unipotent", ok, f"{r.verdict.value} deg {r.degree}, m_n=n+1 to 64: {mn_ok}, "
                              f"dims {r.filtration.dims}, {dt:.3f}s")
    assert ok


def test_c02_heisenberg(record):
    r, dt = _timed(growth_degree, GeneratorSet.of(H1, H2), max_n=32)
    m8, oracle = r.mn_table.values[8], brute_mn([H1, H2], 8)
    slope = empirical_slope(r.mn_table.values, 16, 32)
    ok = (r.verdict is Verdict.POLYNOMIAL and r.degree == 2 and m8 == oracle == 21
          and abs(slope - 2) <= 0.25 and r.filtration.dims == (3, 2, 1, 0) and dt < 30
          and not r.mn_table.truncated)
    record("2 Heisenberg", ok, f"{r.verdict.value} deg {r.degree}, m_8={m8} (all 2^8 words: {oracle}), "
                               f"slope[16,32]={slope:.3f}, dims {r.filtration.dims}, {dt:.2f}s")
    assert ok


def test_c03_exponential_witnesses(record):
    details, ok = [], True
    for a in (DOUBLE, FIB):
        g = GeneratorSet.of(a)
        r, dt = _timed(growth_degree, g)
        w = r.witness_word
        cp = char_poly(g.product(w)) if w else None
        this = (r.verdict is Verdict.EXPONENTIAL and w is not None and len(w) == 1
                and not is_tame_charpoly(cp) and cp == r.witness_charpoly and dt < 1)
        ok &= this
        details.append(f"{a.to_lists()} -> {r.verdict.value} word {w} charpoly {cp} {dt:.3f}s")
    record("3 exponential witnesses", ok, "; ".join(details))
    assert ok


def test_c04_degenerate(record):
    r = growth_degree(GeneratorSet.of(NIL))
    ok = r.verdict is Verdict.DEGENERATE and r.mn_table.values[2] == 0
    record("4 degenerate", ok, f"{r.verdict.value}, m_2={r.mn_table.values[2]}")
    assert ok


def test_c05_finite_semigroup(record):
    r = growth_degree(GeneratorSet.of(SWAP))
    c = semigroup_closure([SWAP])
    ok = r.verdict is Verdict.POLYNOMIAL and r.degree == 0 and c.finite and len(c.elements) == 2
    record("5 finite semigroup", ok, f"{r.verdict.value} deg {r.degree}, closure finite={c.finite} "
                                     f"size {len(c.elements)}")
    assert ok


def test_c06_tameness_cross_check(record):
    rng = random.Random(20240601)
    t = time.perf_counter()
    n = agree = tame = 0
    for _ in range(400):
        d = rng.randint(1, 4)
        x = Matrix([[rng.randint(-3, 3) for _ in range(d)] for _ in range(d)])
        a = bool(is_tame_matrix(x, d))
        b = is_tame_charpoly(char_poly(x), d)
        n += 1
        agree += a == b
        tame += a
    dt = time.perf_counter() - t
    ok = n >= 200 and agree == n and dt < 10
    record("6 tameness cross-check", ok, f"{agree}/{n} agree ({tame} tame), {dt:.2f}s")
    assert ok


def test_c07_telescoping(record):
    rng = random.Random(7)
    n_ok = total = 0
    for _ in range(60):
        d = rng.randint(1, 4)
        x = Matrix([[rng.randint(-3, 3) for _ in range(d)] for _ in range(d)])
        n = rng.randint(4, 12)
        total += 1
        n_ok += verify_telescoping(x, cyclo_exponent(d).B, n)
    ok = total >= 50 and n_ok == total
    record("7 telescoping identity", ok, f"{n_ok}/{total} exact")
    assert ok


ZOO = {"one": one(), "thue-morse": thue_morse(), "s2": digit_sum()}


def test_c08_convolution_oracle(record):
    t = time.perf_counter()
    checked = bad = 0
    for f in ZOO.values():
        for g in ZOO.values():
            c = convolve(f, g)
            for u in words(2, 8):
                checked += 1
                bad += eval_rep(c, u) != conv_oracle(f, g, u)
    dt = time.perf_counter() - t
    ok = bad == 0 and checked == 9 * 511 and dt < 30
    record("8 convolution oracle", ok, f"{checked} evaluations, {bad} mismatches, {dt:.2f}s")
    assert ok


def test_c09_minimization(record):
    reps = dict(ZOO)
    reps["eps"] = epsilon_indicator()
    names = list(ZOO)
    for a in names:
        for b in names:
            reps[f"{a}+{b}"] = add(ZOO[a], ZOO[b])
            reps[f"{a}-{b}"] = add(ZOO[a], ZOO[b], -1)
            reps[f"{a}*{b}"] = convolve(ZOO[a], ZOO[b])
    bad, dims = [], []
    for name, rep in reps.items():
        m = minimize(rep)
        dims.append((name, rep.d, m.d))
        if m.d > rep.d or any(eval_rep(m, u) != eval_rep(rep, u) for u in words(2, 8)):
            bad.append(name)
    ok = not bad
    record("9 minimization soundness", ok, f"{len(reps)} reps, failures {bad}, "
                                           f"s2*s2 {[x for x in dims if x[0] == 's2*s2'][0][1:]}")
    assert ok


def test_c10_sequence_growth(record):
    tm = growth_degree_seq(thue_morse(), max_n=16)
    s2 = growth_degree_seq(digit_sum(), max_n=16)
    cc = growth_degree_seq(convolve(digit_sum(), digit_sum()), max_n=16)
    # brute force: max |f| over words of length n
    tm_bounded = set(tm.max_table[1:]) == {1}
    s2_linear = s2.max_table == tuple(range(17))
    ok = (tm.verdict is SeqVerdict.FINITE_DEGREE and tm.grdeg == 0 and tm_bounded
          and s2.verdict is SeqVerdict.FINITE_DEGREE and s2.grdeg == 1 and s2_linear
          and cc.verdict is SeqVerdict.FINITE_DEGREE and abs(cc.empirical_slope - cc.grdeg) <= 0.3)
    record("10 sequence growth degrees", ok,
           f"TM {tm.verdict.value} {tm.grdeg} (max|f|=1: {tm_bounded}); "
           f"s2 {s2.verdict.value} {s2.grdeg} (max|f|=n: {s2_linear}); "
           f"s2*s2 {cc.verdict.value} {cc.grdeg} slope {cc.empirical_slope:.3f}")
    assert ok


def test_c11_norm_independence(record):
    suite = {"unipotent": [U], "heisenberg": [H1, H2], "double": [DOUBLE], "fib": [FIB],
             "nilpotent": [NIL], "swap": [SWAP]}
    diffs = []
    for name, mats in suite.items():
        out = {k: growth_degree(GeneratorSet(tuple(mats)), norm_kind=k) for k in NORM_KINDS}
        pairs = {(r.verdict, r.degree) for r in out.values()}
        if len(pairs) != 1:
            diffs.append(name)
    ok = not diffs
    record("11 norm independence", ok, f"{len(suite)} instances x {list(NORM_KINDS)}, differing: {diffs}")
    assert ok


def test_c12_determinism(record):
    outs = []
    for threads in ("1", "4"):
        p = subprocess.run([sys.executable, "-m", "semigrowth.cli", "analyze", str(INSTANCES / "heisenberg.json"),
                            "--reproducible", "--threads", threads], capture_output=True, check=True)
        outs.append(p.stdout)
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    record("12 determinism", ok, f"threads 1 vs 4: {len(outs[0])} bytes, identical={outs[0] == outs[1]}")
    assert ok
