# %% [markdown]
# # Periodization ladders and weak-star convergence
#
# Point mass `sqrt(2 pi)` at 0 plus Lebesgue measure over `sqrt(2 pi)` has
# `h11(t) = sqrt(2 pi) / (2t + 1)^2`. Its periodizations are recovered for
# `T = pi, 2 pi, 4 pi, 8 pi` and compared through interval and hat integrals.

# %%
import math

from canonsys import REFERENCES, HatFunction, MeasureSpec, builtin, psi_T, recover_hamiltonian, run_ladder

SQRT_2PI = math.sqrt(2 * math.pi)
spec = MeasureSpec(((0.0, SQRT_2PI),), builtin("constant", 1 / SQRT_2PI))
ladder = [math.pi, 2 * math.pi, 4 * math.pi, 8 * math.pi]
report = run_ladder(spec, ladder, 1.0, [(0.0, 1.0), (0.1, 0.7)], [HatFunction(0, 0.5, 1)],
                    reference=REFERENCES["one_plus_delta"])
print(report.to_csv())

# %% [markdown]
# On `[0, 1]` every periodization integrates exactly to the limit, so the
# deviations there are rounding noise. The interval `[0.1, 0.7]` shows the
# convergence.

# %%
for T, dev in zip(ladder, report.deviations(0.1, 0.7)):
    print(f"T = {T / math.pi:.0f} pi: |deviation| = {dev:.4f}")

# %% [markdown]
# The closed-form curve `psi_T` is the step formula with `n` replaced by
# `2 T t / pi + 1`.

# %%
T = 8 * math.pi
steps = recover_hamiltonian(spec, T, 1.0).values
for n in (1, 5, 10):
    print(n, steps[n], psi_T(T, (n - 1) * math.pi / (2 * T)))
