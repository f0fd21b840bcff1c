"""One symmetric parameter set for convex-nonconcave, nonconvex-concave,
and nonconvex-nonconcave problems.

The universal rule sets r1 = r2, c = alpha, beta = mu from the gradient
modulus alone.  A feasibility scan over the reduced pair (t1, t2) with
r = t2 L and c = 1/(t1 r) shows how much slack the rule has.
"""

# %% Auto-selected universal parameters pass the descent admissibility check

from dsgda import check_descent_params, universal_params

for L in (0.1, 1.0, 10.0):
    par = universal_params(L)
    report = check_descent_params(L, 1.0, par)
    print(f"L={L:<5g} r={par.r1:.3f}  c=alpha={par.c:.3e}  "
          f"beta=mu={par.beta:.3e}  admissible={report.passed}")

# %% The feasible (t1, t2) region is a broad band, not a needle

import numpy as np

from dsgda import feasibility_scan

scan = feasibility_scan(L=1.0, beta=1 / 5000, mu=1 / 5000, grid_steps=51)
rows = ["".join("#" if scan.feasible[i, j] else "." for j in range(51))
        for i in range(51)]
print(f"feasible cells: {int(scan.feasible.sum())} of {scan.feasible.size}")
print("t1 down, t2 right (0..100, # = feasible):")
for row in rows[::4]:
    print(" ", row)

# %% Symmetric parameters solve the KL-nonconcave example from anywhere

from dsgda import AlgoParams, SmoothedState, StoppingRule, builtin, run

kl = builtin("kl_nonconcave")
par = AlgoParams(c=0.04, alpha=0.04, beta=0.8, mu=0.8, r1=0.125, r2=0.125)
lattice = kl.box_x.interior_lattice(3)[:, 0]
for x0 in lattice:
    for y0 in lattice:
        t = run(kl, par, SmoothedState.from_xy(x0, y0),
                StoppingRule(tol=1e-6, max_iters=10**6))
        print(f"start ({x0:+.2f}, {y0:+.2f}) -> "
              f"({t.xs[-1, 0]:+.2e}, {t.ys[-1, 0]:+.2e}) "
              f"in {t.iterations} iterations")
