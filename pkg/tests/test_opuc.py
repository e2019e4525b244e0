import math

import numpy as np
import pytest

from canonsys.convergence import (delta_plus_lebesgue_step, example_delta_plus_lebesgue, lebesgue_measure,
                                  one_plus_cos_measure)
from canonsys.moments import MomentSequence, compute_moments
from canonsys.opuc import szego_from_moments, verify_step_identity
from canonsys.toeplitz import ToeplitzBreakdown, solve_nested


def test_one_plus_cos():
    m = compute_moments(one_plus_cos_measure(), math.pi, 20)
    report = verify_step_identity(szego_from_moments(m), solve_nested(m))
    assert report.max_rel_dev < 1e-10


def test_lebesgue_exact():
    m = compute_moments(lebesgue_measure(), math.pi, 10)
    sz = szego_from_moments(m)
    assert np.all(sz.phi1_sq == 1.0) and np.all(sz.verblunsky == 0.0)
    assert np.all(verify_step_identity(sz, solve_nested(m)).toeplitz_steps == 1.0)


def test_delta_plus_lebesgue_closed_form():
    T = 2 * math.pi
    m = compute_moments(example_delta_plus_lebesgue(), T, 50)
    sz = szego_from_moments(m)
    want = delta_plus_lebesgue_step(T, np.arange(51))
    np.testing.assert_allclose(sz.phi1_sq, want, rtol=1e-9)
    np.testing.assert_allclose(solve_nested(m).steps, want, rtol=1e-9)


def test_polynomial_orthogonality():
    """Phi_N is orthogonal to 1, z, ..., z^{N-1} in the moment inner product."""
    m = compute_moments(one_plus_cos_measure(), 2 * math.pi, 8)
    sz = szego_from_moments(m)
    c = np.r_[m.values[0], 0.5 * m.values[1:]]
    N = len(sz.coefficients) - 1
    for j in range(N):
        inner = sum(sz.coefficients[k] * c[abs(k - j)] for k in range(N + 1))
        assert abs(inner) < 1e-13
    assert sz.coefficients[-1] == 1.0
    assert sz.monic_at_one[-1] == pytest.approx(sz.coefficients.sum())


def test_verblunsky_match_levinson_reflections():
    m = MomentSequence.from_values(np.r_[1.0, 0.5 ** np.arange(1, 20)])
    np.testing.assert_allclose(szego_from_moments(m).verblunsky, solve_nested(m).reflections,
                               rtol=1e-12, atol=1e-18)


def test_breakdown():
    with pytest.raises(ToeplitzBreakdown):
        szego_from_moments(MomentSequence.from_values([1.0, 2.0, 2.0]))
