# Regular sequences on binary words: evaluate, combine, minimize and
# read off the growth degree.
from semigrowth import (add, convolve, digit_sum, eval_rep, growth_degree_seq, minimize, one,
                        thue_morse)

s2, tm, ones = digit_sum(), thue_morse(), one()

for word in ["", "1", "11", "1011", "111111"]:
    print(f"{word!r:10} s2={eval_rep(s2, word)}  tm={eval_rep(tm, word)}")

# (1 * 1)(u) counts the ways to split u, so it is |u| + 1
c = convolve(ones, ones)
print("(1*1)('0101') =", eval_rep(c, "0101"))

twice = add(s2, s2)
print("2 s2: dim", twice.d, "-> minimized", minimize(twice).d)

for name, rep in [("thue-morse", tm), ("s2", s2), ("s2 * s2", convolve(s2, s2))]:
    r = growth_degree_seq(rep, max_n=14)
    print(f"{name:10s} {r.verdict.value} {r.grdeg}  in R0: {r.in_r0}  "
          f"max|f| up to 14: {[int(v) for v in r.max_table]}")
