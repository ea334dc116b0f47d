"""
What a restart cycle costs: Hessenberg vs Arnoldi arithmetic
============================================================

Every restarted Krylov method pays 2*nnz flops per product with A plus
orthogonalization (or elimination) work that grows with the basis size
m.  The closed-form per-cycle counts make the trade explicit before any
code runs.
"""

from shiftkrylov import predicted_flops

# A medium sparse operator: n unknowns, about seven nonzeros per row.
n = 100_000
nnz = 7 * n

print(f"per-cycle flops, n = {n:,}, nnz = {nnz:,}\n")
print(f"{'m':>4} {'hessenberg':>14} {'arnoldi':>14} {'weighted':>14} {'saving':>8}")
for m in (10, 20, 30, 50, 80):
    h = predicted_flops("hessenberg", m, n, nnz)
    a = predicted_flops("arnoldi", m, n, nnz)
    w = predicted_flops("weighted_arnoldi", m, n, nnz)
    print(f"{m:4d} {h:14,} {a:14,} {w:14,} {1 - h / a:7.0%}")

# The pivoted Hessenberg process eliminates each new column against a
# unit triangular basis instead of orthogonalizing it, cutting the
# m-dependent term roughly in half.  At m = 30 the whole cycle costs
# about a third less than Arnoldi; weighting (as in weighted FOM
# variants) moves the trade the other way.
#
# The model is exact, not asymptotic: the acceptance tests check these
# integers against an independent per-step accumulation.
