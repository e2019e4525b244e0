"""Trigonometric moments of the 2T-periodization of a measure.

For a measure ``mu`` restricted to ``[-T, T]`` and extended periodically::

    a_0 = mu([-T, T]) / (2T)
    a_n = (1/T) * integral of cos(n pi x / T) d mu(x)   over [-T, T]
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measure import MeasureError, MeasureSpec, eval_density, validate_even_positive, InvalidMeasureError
from .quadrature import quadrature

__all__ = [
    "CLOSED_FORM",
    "QUADRATURE",
    "AtomOnBoundaryError",
    "MomentSequence",
    "compute_moments",
    "moment_count",
]

CLOSED_FORM = "closed-form"
QUADRATURE = "quadrature"
EXACT = "exact"


class AtomOnBoundaryError(MeasureError):
    """An atom sits at +-T, where the periodization would count it twice."""


@dataclass(frozen=True)
class MomentSequence:
    """Moments ``a_0 ... a_N`` of a 2T-periodic even measure."""

    T: float
    values: np.ndarray
    provenance: tuple = ()

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or len(values) == 0:
            raise ValueError("moments must be a non-empty 1-d sequence")
        if not self.T > 0:
            raise ValueError("half-period T must be positive")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        prov = tuple(self.provenance) or (EXACT,) * len(values)
        if len(prov) != len(values):
            raise ValueError("one provenance tag per moment")
        object.__setattr__(self, "provenance", prov)

    @classmethod
    def from_values(cls, values, T: float = math.pi) -> "MomentSequence":
        return cls(T, values)

    def __len__(self):
        return len(self.values)

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def scaled(self, c: float) -> "MomentSequence":
        return MomentSequence(self.T, c * self.values, self.provenance)

    def truncated(self, N: int) -> "MomentSequence":
        return MomentSequence(self.T, self.values[:N + 1], self.provenance[:N + 1])


def moment_count(T: float, t_max: float) -> int:
    """Number of moments needed to recover h11 of period 2T on ``(0, t_max]``."""
    return int(math.ceil(2.0 * T * t_max / math.pi - 1e-9)) + 1


def compute_moments(spec: MeasureSpec, T: float, N: int, *, method: str = "auto",
                    validate: bool = True) -> MomentSequence:
    """Moments ``a_0 ... a_N`` of the 2T-periodization of ``spec``.

    ``method`` is ``"auto"`` (closed form when the density has one, quadrature
    otherwise), ``"quadrature"`` or ``"closed-form"``.
    """
    if not T > 0:
        raise ValueError("T must be positive")
    if N < 0:
        raise ValueError("N must be non-negative")
    if method not in ("auto", QUADRATURE, CLOSED_FORM):
        raise ValueError(f"unknown method {method!r}")
    for x, _ in spec.atoms:
        if math.isclose(abs(x), T, rel_tol=1e-14, abs_tol=0.0):
            raise AtomOnBoundaryError(f"atom at {x} lies on the periodization boundary |x| = T")
    if validate:
        report = validate_even_positive(spec, T)
        if not report.passed:
            raise InvalidMeasureError("; ".join(report.messages))

    density = spec.density
    closed = (density is not None and method != QUADRATURE
              and getattr(density, "has_closed_form", False))
    if method == CLOSED_FORM and density is not None and not closed:
        raise MeasureError("density has no closed-form moments")

    inside = [(x, m) for x, m in spec.atoms if abs(x) < T]
    values = np.empty(N + 1)
    provenance = []
    for n in range(N + 1):
        omega = n * math.pi / T
        atom_part = math.fsum(m * math.cos(omega * x) for x, m in inside)
        if density is None:
            dens_part, tag = 0.0, EXACT
        else:
            dens_part = density.cos_integral(T, n) if closed else None
            tag = CLOSED_FORM
            if dens_part is None:
                if method == CLOSED_FORM:
                    raise MeasureError(f"no closed form for moment {n}")
                dens_part = quadrature(
                    lambda x, w=omega: np.cos(w * x) * eval_density(spec, x), -T, T, n)
                tag = QUADRATURE
        total = atom_part + dens_part
        values[n] = total / (2.0 * T) if n == 0 else total / T
        provenance.append(tag)
    return MomentSequence(T, values, tuple(provenance))
