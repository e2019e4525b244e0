"""Oracle cross-checks run by ``canonsys selftest``."""

from __future__ import annotations

import math

import numpy as np

from .convergence import example_delta_plus_lebesgue, lebesgue_measure, one_plus_cos_measure, one_plus_cos_step
from .moments import MomentSequence, compute_moments
from .opuc import szego_from_moments, verify_step_identity
from .recovery import convolution_residual, kernel_transform, recover_hamiltonian
from .toeplitz import dense_oracle_solve, solve_nested


def random_trig_moments(rng, order: int, degree: int = 12, margin: float = 0.9) -> MomentSequence:
    """Moments (T = pi) of 1 + sum c_k cos(kx) with sum |c_k| = margin < 1, hence positive."""
    c = rng.uniform(-1.0, 1.0, degree)
    c *= margin / np.abs(c).sum()
    a = np.zeros(order + 1)
    a[0] = 1.0
    a[1:degree + 1] = c[:order]
    return MomentSequence.from_values(a)


def _levinson_vs_dense(moments, order):
    nested = solve_nested(moments, order)
    worst = 0.0
    for n in range(order + 1):
        x, s = dense_oracle_solve(moments, n)
        worst = max(worst, float(np.max(np.abs(nested.solution(n) - x)) / np.max(np.abs(x))),
                    abs(nested.sums[n] - s) / abs(s))
    return worst


def run_selftest(seed: int = 20240601):
    results = []
    rng = np.random.default_rng(seed)

    cos_m = compute_moments(one_plus_cos_measure(), math.pi, 200)
    worst = _levinson_vs_dense(cos_m, 60)
    for _ in range(3):
        worst = max(worst, _levinson_vs_dense(random_trig_moments(rng, 200), 200))
    results.append(("levinson vs dense Cholesky", worst <= 1e-10, f"max rel dev {worst:.2e}"))

    worst = 0.0
    cases = [cos_m, compute_moments(lebesgue_measure(), math.pi, 100),
             compute_moments(example_delta_plus_lebesgue(), 2 * math.pi, 100)]
    cases += [random_trig_moments(rng, 100) for _ in range(3)]
    for m in cases:
        report = verify_step_identity(szego_from_moments(m, 100), solve_nested(m, 100))
        worst = max(worst, report.max_rel_dev)
    results.append(("phi_n(1)^2 = S_n - S_{n-1}", worst <= 1e-9, f"max rel dev {worst:.2e}"))

    worst = 0.0
    for t in (0.75, 2.5, 2.6, 2.75, 2.85, 3.0):
        worst = max(worst, convolution_residual(kernel_transform(cos_m, t), cos_m, 101))
    results.append(("convolution identity", worst < 1e-9, f"max residual {worst:.2e}"))

    steps = recover_hamiltonian(one_plus_cos_measure(), math.pi, 4.0).values[:8]
    dev = float(np.max(np.abs(steps / one_plus_cos_step(math.pi, np.arange(8)) - 1.0)))
    results.append(("1 + cos x step table", dev <= 1e-10, f"max rel dev {dev:.2e}"))
    return results
