"""Recovered Hamiltonians and the kernel transforms behind them.

For a 2T-periodic even measure, h11 is constant on each right-closed piece
``(n w, (n+1) w]`` with ``w = pi / (2T)``, taking the value ``S_n - S_{n-1}``
where ``S_n`` sums the entries of ``J_n^{-1}``; ``h22 = 1 / h11``.

The kernel transform ``f_t`` (Fourier transform of the reproducing kernel at
0) is piecewise constant on ``[-t, t]`` and solves the discrete convolution
equation

    sum_k w_k f_t(x - k pi / T) = 1   on [-t, t],
    w_0 = sqrt(2 pi) a_0,   w_{+-k} = sqrt(pi / 2) a_k.

The 2T-periodic problem at time ``t`` is the 2 pi-periodic one at time
``tau = t T / pi`` with the axis scaled by ``pi / T``; the amplitude of
``f_t`` is unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measure import MeasureSpec
from .moments import MomentSequence, compute_moments
from .toeplitz import NestedToeplitzSolve, ToeplitzBreakdown, solve_nested

__all__ = [
    "SQRT_2PI",
    "RecoveryBreakdown",
    "StepFunction",
    "PiecewiseConstant",
    "piece_count",
    "recover_hamiltonian",
    "recover_from_moments",
    "h22",
    "kernel_transform",
    "kernel_value_at_zero",
    "convolution_residual",
    "h11_from_kernel",
]

SQRT_2PI = math.sqrt(2.0 * math.pi)
_SNAP = 1e-12


class RecoveryBreakdown(ToeplitzBreakdown):
    """Toeplitz breakdown labelled with the time at which recovery stops."""

    def __init__(self, cause: ToeplitzBreakdown, T: float):
        self.t = cause.order * math.pi / (2.0 * T)
        ArithmeticError.__init__(
            self, f"recovery breaks down at order {cause.order} (t = {self.t:.6g}, T = {T:.6g}): "
                  f"prediction-error variance {cause.variance:.3e}")
        self.order = cause.order
        self.variance = cause.variance
        self.partial = cause.partial
        self.T = T


def _piece_index(u: float) -> int:
    """Index n of the right-closed piece (n, n+1] containing ``u`` (0 for u <= 1)."""
    k = math.ceil(u)
    if abs(u - round(u)) <= _SNAP * max(1.0, abs(u)):
        k = round(u)
    return max(0, int(k) - 1)


@dataclass(frozen=True)
class StepFunction:
    """Values ``v_n`` on ``(n w, (n+1) w]``, ``w = pi / (2T)``; the value at 0 is ``v_0``."""

    T: float
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or len(values) == 0:
            raise ValueError("a step function needs at least one value")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def width(self) -> float:
        return math.pi / (2.0 * self.T)

    @property
    def t_max(self) -> float:
        return len(self.values) * self.width

    @property
    def edges(self) -> np.ndarray:
        return self.width * np.arange(len(self.values) + 1)

    def __len__(self):
        return len(self.values)

    def index(self, t: float) -> int:
        if t < 0:
            raise ValueError("step functions live on t >= 0")
        n = _piece_index(t / self.width)
        if n >= len(self.values):
            raise ValueError(f"t = {t} is beyond the recovered range (0, {self.t_max}]")
        return n

    def __call__(self, t):
        if np.ndim(t):
            return np.array([self.values[self.index(float(s))] for s in np.ravel(t)]).reshape(np.shape(t))
        return float(self.values[self.index(float(t))])

    def antiderivative(self, t: float) -> float:
        """Integral of the step function over ``[0, t]``."""
        if t < 0:
            raise ValueError("step functions live on t >= 0")
        w = self.width
        u = t / w
        if u > len(self.values) * (1 + _SNAP):
            raise ValueError(f"t = {t} is beyond the recovered range (0, {self.t_max}]")
        m = min(int(math.floor(u)), len(self.values))
        if abs(u - round(u)) <= _SNAP * max(1.0, u):
            m = min(int(round(u)), len(self.values))
            return w * math.fsum(self.values[:m])
        return w * math.fsum(self.values[:m]) + self.values[m] * (t - m * w)

    def integrate(self, a: float, b: float) -> float:
        return self.antiderivative(b) - self.antiderivative(a)

    def integrate_hat(self, left: float, peak: float, right: float) -> float:
        """Exact integral against the hat function rising on [left, peak], falling on [peak, right]."""
        total = 0.0
        for lo, hi, up in ((left, peak, True), (peak, right, False)):
            if hi <= lo:
                continue
            span = hi - lo
            cuts = np.concatenate([[lo], self.edges[(self.edges > lo) & (self.edges < hi)], [hi]])
            for a, b in zip(cuts[:-1], cuts[1:]):
                v = self.values[self.index(0.5 * (a + b))]
                # integral of the linear ramp over [a, b]
                ramp = ((b - lo) ** 2 - (a - lo) ** 2) / (2 * span) if up else \
                    ((hi - a) ** 2 - (hi - b) ** 2) / (2 * span)
                total += v * ramp
        return float(total)

    def reciprocal(self) -> "StepFunction":
        return StepFunction(self.T, 1.0 / self.values)


def h22(step: StepFunction) -> StepFunction:
    if np.any(step.values <= 0):
        raise ValueError("h11 must be positive to invert")
    return step.reciprocal()


def piece_count(T: float, t_max: float) -> int:
    """Highest piece index ``ceil(2 T t_max / pi)`` used for recovery up to ``t_max``."""
    return int(math.ceil(2.0 * T * t_max / math.pi - 1e-9))


def recover_from_moments(moments: MomentSequence, n_max: int | None = None) -> StepFunction:
    n_max = len(moments) - 1 if n_max is None else n_max
    try:
        nested = solve_nested(moments, n_max, keep_solutions=False)
    except ToeplitzBreakdown as exc:
        raise RecoveryBreakdown(exc, moments.T) from exc
    return StepFunction(moments.T, nested.steps)


def recover_hamiltonian(spec: MeasureSpec, T: float, t_max: float, *,
                        moments: MomentSequence | None = None) -> StepFunction:
    """h11 of the 2T-periodization of ``spec`` on pieces ``0 ... ceil(2 T t_max / pi)``."""
    if not (T > 0 and t_max > 0):
        raise ValueError("T and t_max must be positive")
    n_max = piece_count(T, t_max)
    if moments is None:
        moments = compute_moments(spec, T, n_max)
    elif len(moments) < n_max + 1:
        raise ValueError(f"need {n_max + 1} moments, have {len(moments)}")
    return recover_from_moments(moments, n_max)


# -- kernel transform --------------------------------------------------------

@dataclass(frozen=True)
class PiecewiseConstant:
    """The kernel transform ``f_t``: ``2n + 1`` pieces alternating I_0, I~_0, I_1, ..., I_n.

    ``rates`` holds d(length)/dt for each piece: +2 on the I pieces, -2 on
    the complementary ones.
    """

    edges: np.ndarray
    values: np.ndarray
    rates: np.ndarray
    t: float
    T: float
    n: int

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        idx = np.searchsorted(self.edges, s, side="right") - 1
        inside = (s >= self.edges[0]) & (s <= self.edges[-1])
        idx = np.clip(idx, 0, len(self.values) - 1)
        out = np.where(inside, self.values[idx], 0.0)
        return out if out.ndim else float(out)

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.edges)

    def integral(self) -> float:
        return math.fsum(self.values * self.lengths)

    @property
    def alpha(self) -> np.ndarray:
        return self.values[0::2]

    @property
    def beta(self) -> np.ndarray:
        return self.values[1::2]


def kernel_transform(moments: MomentSequence, t: float,
                     nested: NestedToeplitzSolve | None = None) -> PiecewiseConstant:
    if not t > 0:
        raise ValueError("t must be positive")
    T = moments.T
    scale = math.pi / T
    tau = t / scale
    n = _piece_index(2.0 * tau)
    if nested is None or nested.max_order < n or not nested.solutions:
        if len(moments) < n + 1:
            raise ValueError(f"t = {t} needs {n + 1} moments, have {len(moments)}")
        try:
            nested = solve_nested(moments, n)
        except ToeplitzBreakdown as exc:
            raise RecoveryBreakdown(exc, T) from exc
    alpha = nested.solution(n) / SQRT_2PI
    beta = nested.solution(n - 1) / SQRT_2PI if n > 0 else np.empty(0)

    half = min(max(tau - 0.5 * n, 0.0), 0.5)
    centers = -0.5 * n + np.arange(n + 1)
    edges = np.empty(2 * n + 2)
    edges[0::2] = centers - half
    edges[1::2] = centers + half
    edges *= scale
    edges[0], edges[-1] = -t, t
    values = np.empty(2 * n + 1)
    values[0::2] = alpha
    values[1::2] = beta
    rates = np.where(np.arange(2 * n + 1) % 2 == 0, 2.0, -2.0)
    return PiecewiseConstant(edges, values, rates, float(t), float(T), n)


def kernel_value_at_zero(f: PiecewiseConstant) -> float:
    """``K_0^t(0)``: the inverse Fourier transform of ``f_t`` at 0."""
    return f.integral() / SQRT_2PI


def _sample_points(f: PiecewiseConstant, samples: int) -> np.ndarray:
    t = f.t
    x = -t + (np.arange(samples) + 0.5) * (2.0 * t / samples)
    edges = f.edges
    idx = np.clip(np.searchsorted(edges, x, side="right") - 1, 0, len(f.values) - 1)
    gap = np.minimum(np.abs(x - edges[idx]), np.abs(edges[idx + 1] - x))
    near = gap <= 1e-9 * max(1.0, t)
    x[near] = 0.5 * (edges[idx[near]] + edges[idx[near] + 1])
    keep = edges[idx + 1] > edges[idx]
    return x[keep]


def convolution_residual(f: PiecewiseConstant, moments: MomentSequence,
                         samples: int = 101) -> float:
    """Largest deviation from 1 of ``f_t`` convolved with the transformed periodic measure.

    Sample points sit inside the pieces; any that land on a breakpoint are
    moved to the middle of their piece.
    """
    if samples < 3:
        raise ValueError("need at least 3 samples")
    if moments.T != f.T:
        raise ValueError("moments and kernel transform use different periods")
    a = moments.values
    shift = math.pi / moments.T
    reach = int(math.ceil(2.0 * f.t / shift - 1e-12)) - 1
    if reach > len(a) - 1:
        raise ValueError(f"need moments up to a_{reach}, have up to a_{len(a) - 1}")
    x = _sample_points(f, samples)
    total = SQRT_2PI * a[0] * f(x)
    for k in range(1, reach + 1):
        if a[k] != 0.0:
            total = total + math.sqrt(math.pi / 2.0) * a[k] * (f(x - k * shift) + f(x + k * shift))
    return float(np.max(np.abs(total - 1.0)))


def h11_from_kernel(moments: MomentSequence, t_grid) -> StepFunction:
    """h11 from the growth of the integral of ``f_t``, one evaluation per piece.

    Inside a piece the lengths of the pieces of ``f_t`` are affine in ``t``,
    so the derivative of the integral is the sum of value times length rate.
    """
    t_top = float(np.max(np.asarray(t_grid, dtype=float)))
    T = moments.T
    w = math.pi / (2.0 * T)
    n_max = _piece_index(t_top / w)
    try:
        nested = solve_nested(moments, n_max)
    except ToeplitzBreakdown as exc:
        raise RecoveryBreakdown(exc, T) from exc
    values = np.empty(n_max + 1)
    for n in range(n_max + 1):
        f = kernel_transform(moments, (n + 0.5) * w, nested)
        growth = math.fsum(f.values * f.rates)
        values[n] = math.sqrt(math.pi / 2.0) * growth
    return StepFunction(T, values)
