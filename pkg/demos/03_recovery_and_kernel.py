# %% [markdown]
# # Recovering the Hamiltonian
#
# For a 2T-periodic even measure, `h11` is a step function on pieces of width
# `pi / (2T)`, and `h22 = 1 / h11`.

# %%
import math

import numpy as np

from canonsys import (MeasureSpec, builtin, compute_moments, convolution_residual, h11_from_kernel, h22,
                      kernel_transform, kernel_value_at_zero, recover_hamiltonian)

cos_measure = MeasureSpec((), builtin("one_plus_cos"))
h = recover_hamiltonian(cos_measure, math.pi, 4.0)
print("h11 on (0, 4]:", h.values[:8].round(6))
print("h22          :", h22(h).values[:8].round(6))

# %% [markdown]
# The kernel transform `f_t` is piecewise constant on `[-t, t]` and solves a
# discrete convolution equation. Its residual is the correctness check.

# %%
m = compute_moments(cos_measure, math.pi, 10)
for t in (0.75, 2.85, 3.0):
    f = kernel_transform(m, t)
    print(f"t = {t}: pieces {len(f.values)}, residual {convolution_residual(f, m):.1e}, "
          f"K(0) = {kernel_value_at_zero(f):.6f}")

# %% [markdown]
# Differentiating the integral of `f_t` in `t` gives `h11` again.

# %%
print(np.abs(h11_from_kernel(m, [3.0]).values - h.values[:6]).max())

# %% [markdown]
# Scaling the measure by `c` scales `h11` by `1 / c`.

# %%
print(recover_hamiltonian(cos_measure.scaled(2.0), math.pi, 2.0).values / h.values[:5])
