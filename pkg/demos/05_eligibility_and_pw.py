# %% [markdown]
# # Which measures converge under periodization?
#
# The harness labels measures by the kind of convergence result that applies:
# Paley-Wiener (`pw`), decaying windowed mass (`decay`) or polynomial growth
# (`poly_growth_times_decay`). The labels are spot checks, never proofs.

# %%
import math

from canonsys import MeasureSpec, builtin, eligibility, pw_diagnostic

cases = {
    "1 + sin(x)/x": MeasureSpec((), "1 + sin(x)/x"),
    "1 + sin(x^2)": MeasureSpec((), builtin("one_plus_chirp")),
    "1 + |x|^(1/2)": MeasureSpec((), builtin("one_plus_abs_pow", 0.5)),
    "(1 + |x|)^(1/4) + point mass": MeasureSpec(((0.0, 1.0),), "(1 + abs(x))^0.25"),
    "1 / (1 + x^2)": MeasureSpec((), builtin("poisson_like")),
}
for name, spec in cases.items():
    report = eligibility(spec)
    print(f"{name:32s} {report.label:25s} c = {report.c}")

# %% [markdown]
# The Paley-Wiener diagnostic counts disjoint (mu, delta)-intervals per
# window. Far from the origin a decaying density has none.

# %%
for name in ("1 + sin(x)/x", "1 / (1 + x^2)"):
    diag = pw_diagnostic(cases[name], 60, 0.5, 1.0)
    print(name, "sup unit mass", round(diag.sup_unit_mass, 4), "counts at the edges",
          diag.interval_counts[:3], "in the middle", diag.interval_counts[58:62])
print(diag.label)
