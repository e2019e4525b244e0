# %% [markdown]
# # Measures and their trigonometric moments
#
# A spectral measure is described by atoms plus a density. Densities are
# either builtins (with closed-form cosine integrals where available) or
# expressions in `x`.

# %%
import math

import numpy as np

from canonsys import MeasureSpec, builtin, compute_moments, parse_density, validate_even_positive

cos_measure = MeasureSpec((), builtin("one_plus_cos"))
sinc_measure = MeasureSpec((), "1 + sin(x)/x")
delta_measure = MeasureSpec(((0.0, math.sqrt(2 * math.pi)),), builtin("constant", 1 / math.sqrt(2 * math.pi)))

# %% [markdown]
# Expressions are parsed once and evaluated on numpy arrays.

# %%
expr = parse_density("1 + abs(x)^0.5")
print(expr(np.array([0.0, 1.0, 4.0, 9.0])))

# %% [markdown]
# Only even, positive measures are accepted. The validator reports what is
# wrong rather than raising.

# %%
print(validate_even_positive(cos_measure, math.pi).passed)
print(validate_even_positive(MeasureSpec((), "1 + 0.5*sin(x)"), math.pi).messages)

# %% [markdown]
# The moments `a_n` of the 2T-periodization. For `1 + cos x` with `T = pi`
# they are `(1, 1, 0, ...)`; with `T = 2 pi` the cosine sits at `n = 2`.

# %%
print(compute_moments(cos_measure, math.pi, 4).values.round(12))
print(compute_moments(cos_measure, 2 * math.pi, 4).values.round(12))

# %% [markdown]
# Closed forms and adaptive Gauss-Legendre quadrature agree.

# %%
closed = compute_moments(MeasureSpec((), builtin("one_plus_sinc")), 8 * math.pi, 40)
quad = compute_moments(sinc_measure, 8 * math.pi, 40)
print("max |closed - quadrature| =", np.abs(closed.values - quad.values).max())
print(compute_moments(delta_measure, math.pi, 3).values)
