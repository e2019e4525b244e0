"""Periodization ladders: how h11 of the 2T-periodization approaches h11 of the measure.

Weak-star convergence is measured the way it is defined: through integrals
of h11^T over intervals and against continuous compactly supported test
functions (hat functions here, integrated exactly against the steps).
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .measure import BuiltinDensity, BUILTINS, MeasureSpec, builtin, windowed_mass
from .quadrature import quadrature
from .recovery import StepFunction, recover_hamiltonian

__all__ = [
    "ReferenceSolution",
    "HatFunction",
    "LadderEntry",
    "ConvergenceReport",
    "EligibilityReport",
    "REFERENCES",
    "example_delta_plus_lebesgue",
    "lebesgue_measure",
    "one_plus_cos_measure",
    "psi_T",
    "psi_step_index",
    "delta_plus_lebesgue_step",
    "one_plus_cos_step",
    "eligibility",
    "run_ladder",
    "ALMOST_EVERYWHERE_NOTE",
]

SQRT_2PI = math.sqrt(2.0 * math.pi)

ALMOST_EVERYWHERE_NOTE = (
    "kernel convergence is only needed for almost every t; a finite set of "
    "sampled intervals cannot see null sets")


# -- reference catalog -------------------------------------------------------

def example_delta_plus_lebesgue() -> MeasureSpec:
    """sqrt(2 pi) * (point mass at 0) + Lebesgue / sqrt(2 pi)."""
    return MeasureSpec(((0.0, SQRT_2PI),), builtin("constant", 1.0 / SQRT_2PI))


def lebesgue_measure() -> MeasureSpec:
    return MeasureSpec((), builtin("constant", 1.0))


def one_plus_cos_measure() -> MeasureSpec:
    return MeasureSpec((), builtin("one_plus_cos"))


def delta_plus_lebesgue_step(T: float, n):
    """n-th step of h11^T for the point-mass-plus-Lebesgue example."""
    n = np.asarray(n, dtype=float)
    return SQRT_2PI * T * T / ((n * math.pi + T) * (n * math.pi + T + math.pi))


def one_plus_cos_step(T: float, n):
    """Step table for (1 + cos x) dx at T = pi: 1, 1/3, 2/3, 2/5, 3/5, ..."""
    if not math.isclose(T, math.pi, rel_tol=1e-15):
        raise ValueError("the 1 + cos x step table is known for T = pi only")
    n = np.asarray(n)
    m = (n + 1) // 2
    return np.where(n % 2 == 0, (m + 1) / (2.0 * m + 1), m / (2.0 * m + 1))


def psi_T(T: float, t):
    """Closed-form curve through the steps of the point-mass-plus-Lebesgue example.

    Equal to the step formula with ``n`` replaced by ``2 T t / pi + 1``; its
    limit as ``T -> infinity`` is ``sqrt(2 pi) / (2t + 1)^2``.
    """
    if not T > 0:
        raise ValueError("T must be positive")
    t = np.asarray(t, dtype=float)
    pi = math.pi
    out = SQRT_2PI * T * T / (4 * t * t * T * T + 4 * t * T * T + 6 * pi * t * T
                              + T * T + 3 * pi * T + 2 * pi * pi)
    return out if out.ndim else float(out)


def psi_step_index(T: float, t):
    return 2.0 * T * np.asarray(t, dtype=float) / math.pi + 1.0


@dataclass(frozen=True)
class ReferenceSolution:
    name: str
    h11: Optional[Callable] = None
    integral: Optional[Callable] = None  # closed form of the integral of h11 over [a, b]
    step: Optional[Callable] = None  # (T, n) -> n-th step of h11^T
    psi: Optional[Callable] = None
    measure: Optional[Callable] = None

    def interval_integral(self, a: float, b: float) -> Optional[float]:
        if self.integral is not None:
            return float(self.integral(a, b))
        if self.h11 is not None:
            return quadrature(lambda t: self.h11(t), a, b)
        return None

    def hat_integral(self, hat: "HatFunction") -> Optional[float]:
        if self.h11 is None:
            return None
        return (quadrature(lambda t: self.h11(t) * hat(t), hat.left, hat.peak)
                + quadrature(lambda t: self.h11(t) * hat(t), hat.peak, hat.right))


REFERENCES = {
    "lebesgue": ReferenceSolution(
        "lebesgue",
        h11=lambda t: np.ones_like(np.asarray(t, dtype=float)),
        integral=lambda a, b: b - a,
        step=lambda T, n: np.ones_like(np.asarray(n, dtype=float)),
        measure=lebesgue_measure,
    ),
    "one_plus_delta": ReferenceSolution(
        "one_plus_delta",
        h11=lambda t: SQRT_2PI / (2.0 * np.asarray(t, dtype=float) + 1.0) ** 2,
        integral=lambda a, b: 0.5 * SQRT_2PI * (1.0 / (2 * a + 1) - 1.0 / (2 * b + 1)),
        step=delta_plus_lebesgue_step,
        psi=psi_T,
        measure=example_delta_plus_lebesgue,
    ),
    "one_plus_cos": ReferenceSolution(
        "one_plus_cos", step=one_plus_cos_step, measure=one_plus_cos_measure),
}


# -- test functions ----------------------------------------------------------

@dataclass(frozen=True)
class HatFunction:
    left: float
    peak: float
    right: float

    def __post_init__(self):
        if not (0 <= self.left <= self.peak <= self.right and self.left < self.right):
            raise ValueError("hat needs 0 <= left <= peak <= right and left < right")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        up = np.where(self.peak > self.left, (t - self.left) / max(self.peak - self.left, 1e-300), 1.0)
        down = np.where(self.right > self.peak, (self.right - t) / max(self.right - self.peak, 1e-300), 1.0)
        return np.clip(np.minimum(up, down), 0.0, 1.0) * ((t >= self.left) & (t <= self.right))


# -- eligibility -------------------------------------------------------------

@dataclass
class EligibilityReport:
    label: str  # pw | decay | poly_growth_times_decay | unknown
    c: Optional[float] = None  # window step for decay-type ladders
    c_free: bool = False  # windowed mass non-increasing for every tested c
    declared: Optional[str] = None
    notes: list = field(default_factory=list)


_C_CANDIDATES = (1.0, 0.25, 0.5, 2.0, 4.0)


def _non_increasing(values, tol=1e-9):
    scale = max(1.0, float(np.max(np.abs(values))))
    return bool(np.all(np.diff(values) <= tol * scale))


def _non_decreasing(values, tol=1e-9):
    scale = max(1.0, float(np.max(np.abs(values))))
    return bool(np.all(np.diff(values) >= -tol * scale))


def eligibility(spec: MeasureSpec, *, range_: float = 50.0, step: float = 1.0 / 32) -> EligibilityReport:
    """Classify ``spec`` for the periodization ladder.

    Labels: ``decay`` (windowed mass ``mu((x, x+c])`` non-increasing on the
    positive axis), ``pw`` (unit-window masses bounded and short-window
    masses bounded below), ``poly_growth_times_decay`` (non-decreasing
    windowed mass with at most polynomial growth) or ``unknown``. Builtin
    densities without atoms use their declared class; the numeric checks
    are spot checks on ``[0, range_]`` and never block a run.
    """
    notes = []
    x = np.arange(0.0, range_ + step / 2, step)
    monotone = {}
    for c in _C_CANDIDATES:
        monotone[c] = _non_increasing(windowed_mass(spec, x, c))
    decay_c = next((c for c in _C_CANDIDATES if monotone[c]), None)
    c_free = all(monotone.values())

    near = (np.arange(256) + 0.5) / 128.0 - 1.0  # avoids x = 0
    infinite_support = bool(np.any(spec.density_values(near) > 0)) if spec.density is not None else False

    unit = windowed_mass(spec, np.concatenate([-x[::-1], x]), 1.0)
    inner = unit[np.abs(np.concatenate([-x[::-1], x])) <= range_ / 2].max()
    outer = unit.max()
    short = windowed_mass(spec, np.concatenate([-x[::-1], x]), 0.5)
    bounded = outer <= 1.05 * inner
    below = short.min() > 1e-3
    pos_unit = windowed_mass(spec, x, 1.0)
    growing = _non_decreasing(pos_unit)
    half = pos_unit[np.searchsorted(x, range_ / 2)]
    polynomial = half > 0 and pos_unit[-2] / half <= 2.0 ** 8

    if decay_c is not None and infinite_support:
        numeric = "decay"
    elif bounded and below:
        numeric = "pw"
    elif growing and polynomial and infinite_support:
        numeric = "poly_growth_times_decay"
    else:
        numeric = "unknown"

    declared = None
    if isinstance(spec.density, BuiltinDensity):
        declared = BUILTINS[spec.density.name].declared_class
    label = declared if declared is not None and not spec.atoms else numeric
    if declared is not None and declared != numeric:
        notes.append(f"declared class {declared!r}, numeric spot check says {numeric!r}")
    if label == "decay":
        c = decay_c if decay_c is not None else 1.0
    else:
        c = None
        c_free = False
    notes.append(f"spot checks on [0, {range_}] with step {step}")
    return EligibilityReport(label, c, c_free if label == "decay" else False, declared, notes)


# -- ladders -----------------------------------------------------------------

@dataclass
class LadderEntry:
    T: float
    step: Optional[StepFunction] = None
    error: Optional[str] = None
    interval_integrals: dict = field(default_factory=dict)  # (a, b) -> integral
    hat_integrals: dict = field(default_factory=dict)  # HatFunction -> integral


@dataclass
class ConvergenceReport:
    entries: list
    intervals: list
    hats: list
    references: dict  # (a, b) -> reference integral, or None
    hat_references: dict
    label: str = "unknown"
    notes: list = field(default_factory=list)

    def deviations(self, a: float, b: float) -> list:
        ref = self.references.get((a, b))
        out = []
        for e in self.entries:
            val = e.interval_integrals.get((a, b))
            out.append(None if ref is None or val is None else abs(val - ref))
        return out

    def monotone_summary(self) -> dict:
        summary = {}
        for a, b in self.intervals:
            devs = [d for d in self.deviations(a, b) if d is not None]
            summary[f"{a}:{b}"] = bool(devs) and all(y <= x for x, y in zip(devs, devs[1:]))
        return summary

    def csv_rows(self):
        for e in self.entries:
            for a, b in self.intervals:
                val = e.interval_integrals.get((a, b))
                ref = self.references.get((a, b))
                dev = None if val is None or ref is None else abs(val - ref)
                yield e.T, a, b, val, ref, dev

    def to_csv(self) -> str:
        lines = ["T,a,b,integral,reference,abs_dev"]
        for row in self.csv_rows():
            lines.append(",".join(_fmt(v) for v in row))
        return "\n".join(lines) + "\n"

    def summary(self) -> dict:
        return {
            "label": self.label,
            "Ts": [e.T for e in self.entries],
            "errors": {_fmt(e.T): e.error for e in self.entries if e.error},
            "intervals": [
                {"a": a, "b": b, "reference": self.references.get((a, b)),
                 "integrals": [e.interval_integrals.get((a, b)) for e in self.entries],
                 "abs_dev": self.deviations(a, b)}
                for a, b in self.intervals
            ],
            "hats": [
                {"left": h.left, "peak": h.peak, "right": h.right,
                 "reference": self.hat_references.get(h),
                 "integrals": [e.hat_integrals.get(h) for e in self.entries]}
                for h in self.hats
            ],
            "deviation_non_increasing": self.monotone_summary(),
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True, default=_json_default)


def _fmt(v) -> str:
    if v is None:
        return ""
    return format(float(v), ".17g")


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON serialisable: {obj!r}")


def _is_multiple(T: float, c: float) -> bool:
    k = round(T / c)
    return k >= 1 and math.isclose(k * c, T, rel_tol=1e-12)


def run_ladder(spec: MeasureSpec, Ts, t_max: float, intervals=(), test_functions=(), *,
               reference: ReferenceSolution | None = None, c: float | None = None,
               workers: int = 1) -> ConvergenceReport:
    """Recover h11^T for every ``T`` in ``Ts`` and integrate over intervals and hats.

    ``c`` forces every period to be an integer multiple of ``c`` (the decay
    setting). Without it, decay-class measures whose windowed mass is not
    monotone for every window length default to ``c = 1``.
    """
    Ts = [float(T) for T in Ts]
    if not Ts:
        raise ValueError("empty T ladder")
    if any(T <= 0 for T in Ts) or any(b <= a for a, b in zip(Ts, Ts[1:])):
        raise ValueError("Ts must be positive and strictly increasing")
    intervals = [(float(a), float(b)) for a, b in intervals]
    for a, b in intervals:
        if not 0 <= a < b:
            raise ValueError(f"bad interval [{a}, {b}]")
    hats = list(test_functions)
    reach = max([t_max] + [b for _, b in intervals] + [h.right for h in hats])

    elig = eligibility(spec)
    notes = list(elig.notes) + [ALMOST_EVERYWHERE_NOTE]
    if c is None and elig.label == "decay" and not elig.c_free:
        c = elig.c or 1.0
    if c is not None:
        bad = [T for T in Ts if not _is_multiple(T, c)]
        if bad:
            raise ValueError(f"periods {bad} are not integer multiples of c = {c}")
        notes.append(f"periods restricted to multiples of c = {c}")

    def one(T):
        entry = LadderEntry(T)
        try:
            entry.step = recover_hamiltonian(spec, T, reach)
        except (ArithmeticError, ValueError) as exc:
            entry.error = str(exc)
            return entry
        for a, b in intervals:
            entry.interval_integrals[(a, b)] = entry.step.integrate(a, b)
        for h in hats:
            entry.hat_integrals[h] = entry.step.integrate_hat(h.left, h.peak, h.right)
        return entry

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(one, Ts))
    else:
        entries = [one(T) for T in Ts]

    refs = {iv: (reference.interval_integral(*iv) if reference else None) for iv in intervals}
    hat_refs = {h: (reference.hat_integral(h) if reference else None) for h in hats}
    return ConvergenceReport(entries, intervals, hats, refs, hat_refs, elig.label, notes)
