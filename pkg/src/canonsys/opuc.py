"""Orthogonal polynomials on the unit circle for a periodized even measure.

The circle measure has moments ``c_0 = a_0`` and ``c_k = a_k / 2``. Monic
polynomials follow the Szego recursion

    Phi_{n+1}(z) = z Phi_n(z) - alpha_n Phi_n^*(z),
    ||Phi_{n+1}||^2 = ||Phi_n||^2 (1 - alpha_n^2),

with real Verblunsky coefficients ``alpha_n`` because the measure is even.
The n-th step of h11 equals ``phi_n(1)^2 = Phi_n(1)^2 / ||Phi_n||^2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .moments import MomentSequence
from .toeplitz import BREAKDOWN_TOL, NestedToeplitzSolve, ToeplitzBreakdown

__all__ = ["SzegoData", "StepIdentityReport", "szego_from_moments", "verify_step_identity"]


@dataclass(frozen=True)
class SzegoData:
    verblunsky: np.ndarray  # alpha_0 ... alpha_{N-1}
    norms_sq: np.ndarray  # ||Phi_n||^2, n = 0 ... N
    monic_at_one: np.ndarray  # Phi_n(1)
    coefficients: np.ndarray  # ascending coefficients of Phi_N

    @property
    def phi_at_one(self) -> np.ndarray:
        return self.monic_at_one / np.sqrt(self.norms_sq)

    @property
    def phi1_sq(self) -> np.ndarray:
        return self.monic_at_one ** 2 / self.norms_sq


def szego_from_moments(moments: MomentSequence, max_order: int | None = None, *,
                       tol: float = BREAKDOWN_TOL) -> SzegoData:
    a = np.asarray(moments.values)
    if np.iscomplexobj(a) or not np.all(np.isfinite(a)):
        raise ValueError("moments of an even measure must be finite reals")
    max_order = len(a) - 1 if max_order is None else max_order
    if max_order + 1 > len(a):
        raise ValueError(f"order {max_order} needs {max_order + 1} moments, have {len(a)}")
    c = np.concatenate([a[:1], 0.5 * a[1:max_order + 1]])

    coeffs = np.array([1.0])
    norm_sq = c[0]
    at_one = 1.0
    alphas, norms, values = [], [norm_sq], [at_one]
    for n in range(max_order):
        alpha = float(coeffs @ c[1:n + 2]) / norm_sq
        next_norm = norm_sq * (1.0 - alpha * alpha)
        if not next_norm > tol * c[0]:
            raise ToeplitzBreakdown(n + 1, next_norm)
        coeffs = np.append(0.0, coeffs) - alpha * np.append(coeffs[::-1], 0.0)
        norm_sq = next_norm
        at_one *= 1.0 - alpha
        alphas.append(alpha)
        norms.append(norm_sq)
        values.append(at_one)
    return SzegoData(np.array(alphas), np.array(norms), np.array(values), coeffs)


@dataclass(frozen=True)
class StepIdentityReport:
    phi1_sq: np.ndarray
    toeplitz_steps: np.ndarray
    rel_dev: np.ndarray

    @property
    def max_rel_dev(self) -> float:
        return float(self.rel_dev.max()) if len(self.rel_dev) else 0.0


def verify_step_identity(szego: SzegoData, nested: NestedToeplitzSolve) -> StepIdentityReport:
    """Compare ``phi_n(1)^2`` with ``S_n - S_{n-1}`` order by order."""
    count = min(len(szego.norms_sq), len(nested.sums))
    phi = szego.phi1_sq[:count]
    sums = nested.sums[:count]
    steps = np.diff(np.concatenate([[0.0], sums]))
    rel = np.abs(phi - steps) / np.abs(steps)
    return StepIdentityReport(phi, steps, rel)
