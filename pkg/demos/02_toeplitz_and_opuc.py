# %% [markdown]
# # Nested Toeplitz solves and orthogonal polynomials
#
# The recovery algorithm needs `S_n`, the sum of the entries of the inverse
# of the Toeplitz matrix `J_n` with first row `(a_0, a_1/2, ..., a_n/2)`.
# A Levinson recursion produces every order in O(n^2) total.

# %%
import math

import numpy as np

from canonsys import (MeasureSpec, builtin, compute_moments, dense_oracle_solve, solve_nested,
                      szego_from_moments, verify_step_identity)

m = compute_moments(MeasureSpec((), builtin("one_plus_cos")), math.pi, 7)
nested = solve_nested(m)
print("S_n        :", nested.sums.round(6))
print("S_n-S_{n-1}:", nested.steps.round(6))

# %% [markdown]
# A dense Cholesky solve is the oracle for every order.

# %%
worst = max(abs(nested.sums[n] - dense_oracle_solve(m, n)[1]) for n in range(8))
print("max |Levinson - Cholesky| =", worst)

# %% [markdown]
# The same increments are the squared values at `z = 1` of the orthonormal
# polynomials on the unit circle for the moment sequence.

# %%
m = compute_moments(MeasureSpec((), "1 + sin(x)/x"), 2 * math.pi, 100)
report = verify_step_identity(szego_from_moments(m), solve_nested(m))
print("max relative deviation, n <= 100:", report.max_rel_dev)

# %% [markdown]
# Finitely supported measures give singular Toeplitz matrices; the solver
# stops and reports where.

# %%
from canonsys import ToeplitzBreakdown

try:
    solve_nested(compute_moments(MeasureSpec(((-0.5, 1.0), (0.5, 1.0))), math.pi, 5))
except ToeplitzBreakdown as exc:
    print(exc)
