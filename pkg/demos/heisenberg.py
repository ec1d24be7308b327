# The Heisenberg pair grows quadratically.  The filtration shows why:
# three nested invariant subspaces, each step contributing one power of n.
import numpy as np

from semigrowth import GeneratorSet, Matrix, filtration, growth_degree, mn_bruteforce

A = Matrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
B = Matrix([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
gens = GeneratorSet.of(A, B)

f = filtration(gens)
print("a =", f.a)
for level, space in enumerate(f.chain):
    print(f"V{level}: dim {space.dim}  basis {[list(map(int, b)) for b in space.basis]}")

t = mn_bruteforce(gens, 32)
n = np.arange(1, 33)
m = np.array([float(v) for v in t.values[1:]])
print("m_n / n^2 for n = 8, 16, 32:", [round(float(m[k - 1]) / k**2, 4) for k in (8, 16, 32)])
print("distinct products per length:", t.frontier_sizes[:10], "...")

r = growth_degree(gens)
print(r.verdict.value, "degree", r.degree, "slope", round(r.empirical_slope, 3), "over", r.fit_range)
