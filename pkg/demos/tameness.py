# How often is a small random integer matrix tame?  Two independent tests
# (matrix nilpotency, char poly divisibility) must agree.
import random
from collections import Counter

from semigrowth import Matrix, char_poly, cyclo_exponent, is_tame_charpoly, is_tame_matrix

for d in range(1, 9):
    print(f"B({d}) = {cyclo_exponent(d).B}")

rng = random.Random(1)
count = Counter()
for _ in range(500):
    d = rng.randint(1, 4)
    x = Matrix([[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)])
    a = bool(is_tame_matrix(x))
    assert a == is_tame_charpoly(char_poly(x), d)
    count[d, a] += 1

for d in range(1, 5):
    tame, wild = count[d, True], count[d, False]
    print(f"d={d}: {tame} tame out of {tame + wild}")
