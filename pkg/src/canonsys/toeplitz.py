"""Nested solves of the symmetric Toeplitz family built from trigonometric moments.

``J`` has ``a_0`` on the diagonal and ``a_k / 2`` on the k-th off-diagonals;
``J_n`` is its leading ``(n+1) x (n+1)`` block. The Levinson recursion below
produces, for every order ``n``, the solution of ``J_n x = 1`` and the sum
``S_n = 1^T x_n`` (the sum of all entries of ``J_n^{-1}``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .moments import MomentSequence

__all__ = [
    "BREAKDOWN_TOL",
    "ToeplitzBreakdown",
    "ToeplitzFamily",
    "NestedToeplitzSolve",
    "solve_nested",
    "dense_oracle_solve",
    "toeplitz_matrix",
]

BREAKDOWN_TOL = 1e-12


class ToeplitzBreakdown(ArithmeticError):
    """``J_order`` is numerically singular or indefinite.

    ``partial`` holds the solve for orders ``0 ... order - 1``.
    """

    def __init__(self, order: int, variance: float, partial=None):
        super().__init__(f"Toeplitz family breaks down at order {order} "
                         f"(prediction-error variance {variance:.3e}); "
                         "the periodized measure is not sampling at this order")
        self.order = order
        self.variance = variance
        self.partial = partial


@dataclass(frozen=True)
class ToeplitzFamily:
    first_row: np.ndarray
    max_order: int

    @classmethod
    def from_moments(cls, moments: MomentSequence, max_order: int | None = None):
        a = moments.values
        max_order = len(a) - 1 if max_order is None else max_order
        if max_order + 1 > len(a):
            raise ValueError(f"order {max_order} needs {max_order + 1} moments, have {len(a)}")
        row = np.concatenate([a[:1], 0.5 * a[1:max_order + 1]])
        if not row[0] > 0:
            raise ValueError("a_0 must be positive")
        return cls(row, max_order)

    def matrix(self, order: int) -> np.ndarray:
        return scipy.linalg.toeplitz(self.first_row[:order + 1])


def toeplitz_matrix(moments: MomentSequence, order: int) -> np.ndarray:
    return ToeplitzFamily.from_moments(moments, order).matrix(order)


@dataclass
class NestedToeplitzSolve:
    """Per-order results of the Levinson recursion.

    ``steps[n]`` is ``S_n - S_{n-1}`` (with ``S_{-1} = 0``), accumulated
    directly from the recursion rather than by subtracting the sums.
    """

    solutions: list
    sums: np.ndarray
    steps: np.ndarray
    variances: np.ndarray
    reflections: np.ndarray
    well_conditioned: bool = True
    breakdown: ToeplitzBreakdown | None = field(default=None, repr=False)

    @property
    def max_order(self) -> int:
        return len(self.sums) - 1

    def solution(self, n: int) -> np.ndarray:
        return self.solutions[n]

    def sum(self, n: int) -> float:
        """``S_n``, with ``S_{-1} = 0``."""
        return 0.0 if n < 0 else float(self.sums[n])


def solve_nested(moments: MomentSequence, max_order: int | None = None, *,
                 tol: float = BREAKDOWN_TOL, keep_solutions: bool = True,
                 partial: bool = False) -> NestedToeplitzSolve:
    """Levinson recursion for ``J_n x_n = 1``, ``n = 0 ... max_order``.

    Raises :class:`ToeplitzBreakdown` once a prediction-error variance drops
    to ``tol * a_0`` or below, unless ``partial`` is set, in which case the
    orders solved so far are returned with ``well_conditioned=False``.
    """
    family = ToeplitzFamily.from_moments(moments, max_order)
    r = family.first_row
    order = family.max_order
    floor = tol * r[0]

    variance = r[0]
    f = np.array([1.0 / r[0]])  # J_n^{-1} e_0
    x = np.array([1.0 / r[0]])  # J_n^{-1} 1
    solutions = [x] if keep_solutions else []
    sums = [x[0]]
    steps = [x[0]]
    variances = [variance]
    reflections = []

    for n in range(order):
        lag = r[n + 1:0:-1]
        eps = float(lag @ f)
        shrink = 1.0 - eps * eps
        new_variance = variance * shrink
        if not new_variance > floor:
            result = NestedToeplitzSolve(solutions, np.array(sums), np.array(steps),
                                         np.array(variances), np.array(reflections), False)
            err = ToeplitzBreakdown(n + 1, new_variance, result)
            result.breakdown = err
            if partial:
                return result
            raise err
        f_ext = np.append(f, 0.0)
        f = (f_ext - eps * f_ext[::-1]) / shrink
        b = f[::-1]
        theta = float(lag @ x)
        gain = 1.0 - theta
        x = np.append(x, 0.0) + gain * b
        variance = new_variance
        if keep_solutions:
            solutions.append(x)
        step = gain * float(b.sum())
        steps.append(step)
        sums.append(float(x.sum()))
        variances.append(variance)
        reflections.append(eps)

    return NestedToeplitzSolve(solutions, np.array(sums), np.array(steps),
                               np.array(variances), np.array(reflections), True)


class NotPositiveDefiniteError(np.linalg.LinAlgError):
    pass


def dense_oracle_solve(moments: MomentSequence, order: int):
    """Solve ``J_order x = 1`` by a dense Cholesky factorisation; return ``(x, sum(x))``."""
    if order > len(moments) - 1:
        raise ValueError(f"order {order} needs {order + 1} moments, have {len(moments)}")
    J = toeplitz_matrix(moments, order)
    try:
        factor = scipy.linalg.cho_factor(J, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(f"J_{order} is not positive definite") from exc
    x = scipy.linalg.cho_solve(factor, np.ones(order + 1))
    return x, float(x.sum())
