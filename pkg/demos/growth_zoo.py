# Classify a handful of small matrix sets and print what each report says.
from semigrowth import GeneratorSet, Matrix, growth_degree

zoo = {
    "unipotent": [[[1, 1], [0, 1]]],
    "doubling": [[[2]]],
    "fibonacci": [[[1, 1], [1, 0]]],
    "nilpotent": [[[0, 1], [0, 0]]],
    "swap": [[[0, 1], [1, 0]]],
    "swap + unipotent": [[[0, 1], [1, 0]], [[1, 1], [0, 1]]],
    "E12, E21": [[[0, 1], [0, 0]], [[0, 0], [1, 0]]],
    "jordan 3": [[[1, 1, 0], [0, 1, 1], [0, 0, 1]]],
}

for name, mats in zoo.items():
    gens = GeneratorSet(tuple(Matrix(m) for m in mats))
    r = growth_degree(gens, max_n=16)
    line = f"{name:18s} {r.verdict.value:12s}"
    if r.degree is not None:
        line += f" degree {r.degree}  dims {r.filtration.dims}  C1={r.c1} C2={r.c2}"
    if r.witness_word is not None:
        line += f" witness {r.witness_word} charpoly {r.witness_charpoly}"
    print(line)
    print(" " * 18, "m_0..m_8 =", [int(v) for v in r.mn_table.values[:9]])
