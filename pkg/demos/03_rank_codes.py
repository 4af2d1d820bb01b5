"""From subspaces to rank-metric codes: distances, duals, MRD checks.

Run with: python demos/03_rank_codes.py
"""

from rankscatter import (
    code_from_system,
    create_field,
    direct_sum,
    dual_code,
    is_mrd,
    min_distance,
    pseudoregulus_subspace,
    rank_weight,
)

F16 = create_field(2, 1, 4)
F8 = create_field(2, 1, 3)

# ---------------------------------------------------------------
# 1. Rank weight: the F_q-dimension spanned by a word's coordinates.
# ---------------------------------------------------------------
g = F8.p
print("rank_weight (1,1,1)    =", rank_weight(F8, (1, 1, 1)))
print("rank_weight (1,g,g^2)  =", rank_weight(F8, (1, g, F8.mul(g, g))))

# ---------------------------------------------------------------
# 2. The pseudoregulus {(x, x^q)} in F_16^2 gives a [4,2] code with
#    minimum rank distance n - h = 3: an MRD code.  The projective
#    sweep visits one codeword per scalar class (17 of them).
# ---------------------------------------------------------------
code = code_from_system(pseudoregulus_subspace(F16, 1))
d = min_distance(code, "projective")
print(f"\n[4,2] code: d = {d.value} from {d.codewords_checked} classes")
print("MRD:", is_mrd(code, d))

dual = dual_code(code)
dd = min_distance(dual, "projective")
print("dual code d =", dd.value, " MRD:", is_mrd(dual, dd))

# ---------------------------------------------------------------
# 3. Direct sums: two copies of the [3,2] pseudoregulus code over F_8
#    give a [6,4,2] code, again meeting the Singleton-like bound.
# ---------------------------------------------------------------
ps = pseudoregulus_subspace(F8, 1)
cds = code_from_system(direct_sum([ps, ps]))
dds = min_distance(cds, "projective")
print(f"\ndirect sum: [{cds.t},{cds.k},{dds.value}]  MRD: {is_mrd(cds, dds)}")

# ---------------------------------------------------------------
# 4. Exhaustive and projective sweeps must agree; exhaustive is kept
#    as the oracle.
# ---------------------------------------------------------------
assert min_distance(cds, "exhaustive").value == dds.value
print("exhaustive oracle agrees:", dds.value)
