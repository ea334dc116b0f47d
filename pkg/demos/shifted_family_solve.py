"""
Solving a whole family of shifted systems from one Krylov basis
===============================================================

A frequency sweep, a quadrature rule, or a parameter study often needs
x_i = (A - sigma_i I)^{-1} b for many shifts sigma_i.  Because the
Krylov space of A - sigma I does not depend on sigma, one basis can
serve every shift; only the small projected solves differ.
"""

import numpy as np

from shiftkrylov import (
    SolverConfig,
    attach_costs,
    gen_convdiff3d,
    solve_shifted_fom,
    solve_shifted_hessen,
    true_relative_residual,
)

# A convection-diffusion-reaction operator on a 9x9x9 interior grid,
# upwinded so the strong convection keeps the discretization stable.
beta = (0.0, 250.0 / np.sqrt(5.0), 500.0 / np.sqrt(5.0))
A = gen_convdiff3d(9, 1.0, beta, 400.0)
n = A.shape[0]
print(f"operator: n = {n}, nnz = {A.nnz}")

# Eight shifts marching away from the origin, one right-hand side.
shifts = [-(j + 1) * 1e-3 for j in range(8)]
b = np.ones(n)
cfg = SolverConfig(m=30, tol=1e-8, max_mvps=4000)

# The pivoted Hessenberg solver builds a non-orthogonal basis with cheap
# column updates; the FOM baseline orthogonalizes every column.
for name, solver in (("sHessen", solve_shifted_hessen), ("sFOM", solve_shifted_fom)):
    xs, report = solver(A, b, shifts, cfg)
    attach_costs(report)
    print(f"\n{name}: {report.num_converged}/{len(shifts)} shifts converged "
          f"in {report.cycles} cycle(s), {report.total_mvps} products, "
          f"~{report.predicted_flops:,} flops")
    for sigma, x, hist in zip(shifts, xs, report.shifts):
        true = true_relative_residual(A, sigma, x, b)
        print(f"  sigma = {sigma:+.3f}:  estimate {hist.final_relative_residual:.2e}, "
              f"true {true:.2e}")

# The residual estimates cost nothing extra: each shifted residual stays
# collinear with the one extra basis vector, so a scalar recurrence
# tracks every norm.  The confirmations above are the only additional
# products the solver spends.
