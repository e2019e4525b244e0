"""Even positive measures on the line: atoms plus an optional density.

A measure is described by a :class:`MeasureSpec`. Densities are either
parsed expressions (:class:`~canonsys.expr.DensityExpr`) or one of the
builtin families in :data:`BUILTINS`, which additionally know closed-form
cosine integrals over symmetric intervals.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import special

from .expr import DensityExpr, EvaluationError, parse_density
from .quadrature import gauss_legendre

__all__ = [
    "MeasureError",
    "InvalidMeasureError",
    "BuiltinDensity",
    "ScaledDensity",
    "MeasureSpec",
    "ValidationReport",
    "PWDiagnostic",
    "BUILTINS",
    "MEASURE_JSON_GRAMMAR",
    "builtin",
    "eval_density",
    "validate_even_positive",
    "pw_diagnostic",
    "cumulative_mass",
    "windowed_mass",
    "measure_from_dict",
    "measure_to_dict",
    "load_measure",
]

NEGATIVITY_TOL = 1e-12
EVENNESS_TOL = 1e-12
GRID_POINTS = 1024
PW_LABEL = "heuristic diagnostic over a finite range - not a proof"

MEASURE_JSON_GRAMMAR = """\
measure JSON:
  {"even": true,
   "atoms": [{"x": <number>, "mass": <positive number>}, ...],
   "density": {"kind": "expr", "source": "<expression in x>"}
            | {"kind": "builtin", "name": "<builtin>", "params": [<number>, ...]}
            | null}
builtins: constant(c=1), one_plus_cos, one_plus_sinc, one_plus_chirp,
          one_plus_abs_pow(q), poisson_like(scale=1)
expression grammar: numbers, x, + - * / ^ (right-assoc), unary -,
                    sin cos abs sqrt exp"""


class MeasureError(ValueError):
    """Malformed measure description."""


class InvalidMeasureError(MeasureError):
    """The measure is not positive (or not even) where it has to be."""


# -- builtin densities -------------------------------------------------------

def _ci_constant(params, T, n):
    (c,) = params
    return 2.0 * T * c if n == 0 else 0.0


def _ci_one_plus_cos(params, T, n):
    if n == 0:
        return 2.0 * T + 2.0 * math.sin(T)
    sign = -1.0 if n % 2 else 1.0
    s = math.sin(T)
    u_minus = n * math.pi - T
    u_plus = n * math.pi + T
    # sin(n pi -+ T) = -+ (-1)^n sin T, kept exact instead of going through n*pi
    i_minus = 2.0 * T if u_minus == 0.0 else 2.0 * T * (-sign * s) / u_minus
    i_plus = 2.0 * T * (sign * s) / u_plus
    return 0.5 * (i_minus + i_plus)


def _ci_one_plus_sinc(params, T, n):
    w = n * math.pi / T
    base = 2.0 * T if n == 0 else 0.0
    si_plus, _ = special.sici((1.0 + w) * T)
    si_minus, _ = special.sici((1.0 - w) * T)
    return base + float(si_plus + si_minus)


def _fresnel_sin_cos(u):
    """Integrals of sin(s^2) and cos(s^2) over [0, u]."""
    k = math.sqrt(math.pi / 2.0)
    s, c = special.fresnel(u / k)
    return k * float(s), k * float(c)


def _ci_one_plus_chirp(params, T, n):
    w = n * math.pi / T
    base = 2.0 * T if n == 0 else 0.0
    # sin(x^2) cos(wx) integrates like sin((x + w/2)^2 - w^2/4) on [-T, T]
    shift = w / 2.0
    phase = w * w / 4.0
    s_hi, c_hi = _fresnel_sin_cos(T + shift)
    s_lo, c_lo = _fresnel_sin_cos(-T + shift)
    return base + math.cos(phase) * (s_hi - s_lo) - math.sin(phase) * (c_hi - c_lo)


def _ci_one_plus_abs_pow(params, T, n):
    import mpmath

    (q,) = params
    base = 2.0 * T if n == 0 else 0.0
    # integral of x^q cos(n pi x / T) over [0, T] is a 1F2; extra digits absorb its cancellation
    with mpmath.workdps(30 + 2 * n):
        arg = -(mpmath.mpf(n) * mpmath.pi) ** 2 / 4
        half = mpmath.mpf(q + 1) / 2
        power = mpmath.mpf(T) ** (q + 1) / (q + 1)
        value = 2 * power * mpmath.hyp1f2(half, mpmath.mpf(1) / 2, half + 1, arg)
    return base + float(value)


def _ev_constant(params, x):
    (c,) = params
    return np.full_like(np.asarray(x, dtype=float), c)


def _ev_one_plus_cos(params, x):
    return 1.0 + np.cos(x)


def _ev_one_plus_sinc(params, x):
    # np.sinc(u) = sin(pi u)/(pi u) with the continuous extension at 0
    return 1.0 + np.sinc(np.asarray(x, dtype=float) / np.pi)


def _ev_one_plus_chirp(params, x):
    x = np.asarray(x, dtype=float)
    return 1.0 + np.sin(x * x)


def _ev_one_plus_abs_pow(params, x):
    (q,) = params
    return 1.0 + np.abs(np.asarray(x, dtype=float)) ** q


def _ev_poisson_like(params, x):
    (scale,) = params
    x = np.asarray(x, dtype=float)
    return 1.0 / (1.0 + (x / scale) ** 2)


@dataclass(frozen=True)
class _BuiltinKind:
    evaluate: object
    cos_integral: object  # None when no closed form is known
    defaults: tuple
    declared_class: str
    c_free: bool = False  # windowed mass non-increasing for every window length


BUILTINS = {
    "constant": _BuiltinKind(_ev_constant, _ci_constant, (1.0,), "decay", True),
    "one_plus_cos": _BuiltinKind(_ev_one_plus_cos, _ci_one_plus_cos, (), "pw"),
    "one_plus_sinc": _BuiltinKind(_ev_one_plus_sinc, _ci_one_plus_sinc, (), "pw"),
    "one_plus_chirp": _BuiltinKind(_ev_one_plus_chirp, _ci_one_plus_chirp, (), "pw"),
    "one_plus_abs_pow": _BuiltinKind(_ev_one_plus_abs_pow, _ci_one_plus_abs_pow, (0.5,),
                                     "poly_growth_times_decay"),
    "poisson_like": _BuiltinKind(_ev_poisson_like, None, (1.0,), "decay", True),
}


@dataclass(frozen=True)
class BuiltinDensity:
    name: str
    params: tuple = ()

    def __post_init__(self):
        if self.name not in BUILTINS:
            raise MeasureError(f"unknown builtin density {self.name!r}; "
                               f"expected one of {sorted(BUILTINS)}")
        kind = BUILTINS[self.name]
        params = tuple(float(p) for p in self.params) or kind.defaults
        if len(params) != len(kind.defaults):
            raise MeasureError(f"builtin {self.name!r} takes {len(kind.defaults)} "
                               f"parameter(s), got {len(params)}")
        if self.name == "one_plus_abs_pow" and params[0] <= 0:
            raise MeasureError("one_plus_abs_pow needs q > 0")
        if self.name == "poisson_like" and params[0] <= 0:
            raise MeasureError("poisson_like needs a positive scale")
        object.__setattr__(self, "params", params)

    def __call__(self, x):
        return BUILTINS[self.name].evaluate(self.params, x)

    @property
    def has_closed_form(self) -> bool:
        return BUILTINS[self.name].cos_integral is not None

    def cos_integral(self, T: float, n: int):
        """Closed form of the integral of cos(n pi x / T) * density over [-T, T], or None."""
        fn = BUILTINS[self.name].cos_integral
        return None if fn is None else fn(self.params, T, n)


@dataclass(frozen=True)
class ScaledDensity:
    """``factor`` times another density."""

    base: object
    factor: float

    def __call__(self, x):
        return self.factor * np.asarray(self.base(x), dtype=float)

    @property
    def has_closed_form(self) -> bool:
        return getattr(self.base, "has_closed_form", False)

    def cos_integral(self, T, n):
        value = self.base.cos_integral(T, n) if self.has_closed_form else None
        return None if value is None else self.factor * value


def builtin(name: str, *params: float) -> BuiltinDensity:
    return BuiltinDensity(name, tuple(params))


# -- the measure -------------------------------------------------------------

@dataclass(frozen=True)
class MeasureSpec:
    """Atoms ``(position, mass)`` plus an optional density."""

    atoms: tuple = ()
    density: object = None
    even: bool = True

    def __post_init__(self):
        if not self.even:
            raise MeasureError("only even measures are supported")
        atoms = tuple((float(x), float(m)) for x, m in self.atoms)
        for x, m in atoms:
            if not (math.isfinite(x) and math.isfinite(m)):
                raise MeasureError(f"atom ({x}, {m}) is not finite")
            if m <= 0:
                raise MeasureError(f"atom at {x} has non-positive mass {m}")
        positions = [x for x, _ in atoms]
        if len(set(positions)) != len(positions):
            raise MeasureError("atom positions must be pairwise distinct")
        object.__setattr__(self, "atoms", tuple(sorted(atoms)))
        if isinstance(self.density, str):
            object.__setattr__(self, "density", parse_density(self.density))

    def scaled(self, c: float) -> "MeasureSpec":
        """The measure ``c * mu``."""
        if c <= 0:
            raise MeasureError("scale factor must be positive")
        density = None if self.density is None else ScaledDensity(self.density, float(c))
        return MeasureSpec(tuple((x, c * m) for x, m in self.atoms), density)

    def density_values(self, x):
        """Raw density values (zeros when there is no density part)."""
        x = np.asarray(x, dtype=float)
        if self.density is None:
            return np.zeros_like(x)
        return np.asarray(self.density(x), dtype=float)


def eval_density(spec: MeasureSpec, x):
    """Density of ``spec`` at ``x``, clipped to zero within the negativity tolerance."""
    if spec.density is None:
        raise MeasureError("measure has no density part")
    values = spec.density_values(x)
    if np.any(values < -NEGATIVITY_TOL):
        bad = np.ravel(np.asarray(x, dtype=float) * np.ones_like(values))[np.ravel(values) < -NEGATIVITY_TOL]
        raise InvalidMeasureError(f"density is negative at x={bad[0]!r}")
    values = np.maximum(values, 0.0)
    return values if values.ndim else float(values)


# -- validation --------------------------------------------------------------

@dataclass
class ValidationReport:
    passed: bool
    evenness_residual: float
    min_density: float
    negative_points: list = field(default_factory=list)
    asymmetric_atoms: list = field(default_factory=list)
    messages: list = field(default_factory=list)


def validate_even_positive(spec: MeasureSpec, range_: float) -> ValidationReport:
    """Check evenness and positivity of ``spec`` on a symmetric grid over [-range_, range_]."""
    if range_ <= 0:
        raise ValueError("range must be positive")
    messages = []
    residual = 0.0
    min_density = math.inf
    negative = []
    if spec.density is not None:
        h = range_ / GRID_POINTS
        x = (np.arange(GRID_POINTS) + 0.5) * h
        try:
            plus = spec.density_values(x)
            minus = spec.density_values(-x)
        except EvaluationError as exc:
            messages.append(f"density evaluation failed: {exc}")
        else:
            residual = float(np.max(np.abs(plus - minus) / (1.0 + np.abs(plus))))
            if residual > EVENNESS_TOL:
                messages.append(f"density is not even (residual {residual:.3e})")
            both = np.concatenate([-x[::-1], x])
            values = np.concatenate([minus[::-1], plus])
            min_density = float(values.min())
            negative = both[values < -NEGATIVITY_TOL].tolist()
            if negative:
                messages.append(f"density negative at {len(negative)} grid point(s)")

    asymmetric = []
    for x, m in spec.atoms:
        partner = [mm for xx, mm in spec.atoms if abs(xx + x) <= EVENNESS_TOL * (1.0 + abs(x))]
        if not partner or abs(partner[0] - m) > EVENNESS_TOL * m:
            asymmetric.append((x, m))
    if asymmetric:
        messages.append(f"{len(asymmetric)} atom(s) without a mirror partner of equal mass")

    return ValidationReport(not messages, residual, min_density, negative, asymmetric, messages)


# -- masses of intervals -----------------------------------------------------

def cumulative_mass(spec: MeasureSpec, grid) -> np.ndarray:
    """``mu([grid[0], grid[i]])`` for an increasing grid (atoms counted right-closed)."""
    grid = np.asarray(grid, dtype=float)
    masses = np.zeros(len(grid))
    if spec.density is not None and len(grid) > 1:
        nodes, weights = gauss_legendre(16)
        left, width = grid[:-1], np.diff(grid)
        pts = left[:, None] + 0.5 * width[:, None] * (nodes[None, :] + 1.0)
        cells = 0.5 * width * (np.maximum(spec.density_values(pts), 0.0) @ weights)
        masses[1:] = np.cumsum(cells)
    for x, m in spec.atoms:
        masses[grid >= x] += m
        if x == grid[0]:
            masses -= m  # keep F(grid[0]) = 0; the atom at the left end is outside (grid[0], ...]
    return masses


def windowed_mass(spec: MeasureSpec, starts, length: float) -> np.ndarray:
    """``mu((s, s + length])`` for every ``s`` in ``starts``."""
    starts = np.asarray(starts, dtype=float)
    grid = np.unique(np.concatenate([starts, starts + length]))
    cum = cumulative_mass(spec, grid)
    lo = np.searchsorted(grid, starts)
    hi = np.searchsorted(grid, starts + length)
    return cum[hi] - cum[lo]


@dataclass
class PWDiagnostic:
    label: str
    sup_unit_mass: float
    window_starts: list
    interval_counts: list
    window_is_interval: list
    delta: float
    window: float

    @property
    def min_count_density(self) -> float:
        if not self.interval_counts:
            return 0.0
        return min(self.interval_counts) / self.window


def _earliest_end(grid, cum, floor, e_min, e_max, max_len, delta):
    """Smallest ``e >= e_min`` ending a (mu, delta)-interval ``(s, e]`` with
    ``s >= floor``, ``e <= e_max`` and length at most ``max_len``; returns
    ``(e, s)`` with the latest admissible start, or None."""
    ends = np.arange(e_min, min(e_max, len(grid) - 1) + 1)
    if not len(ends):
        return None
    s = np.maximum(floor, np.searchsorted(grid, grid[ends] - max_len - 1e-12))
    ok = (grid[ends] - grid[s] > delta) & (cum[ends] - cum[s] > delta)
    hit = np.flatnonzero(ok)
    if not len(hit):
        return None
    return int(ends[hit[0]]), int(s[hit[0]])


def pw_diagnostic(spec: MeasureSpec, range_: float, delta: float, window: float,
                  step: float | None = None) -> PWDiagnostic:
    """Grid-based check of the two Paley-Wiener sampling conditions.

    Reports the largest mass of a unit interval ``(x, x+1]`` over
    ``x in [-range_, range_]`` and, for consecutive windows of length
    ``window`` tiling the range, how many disjoint (mu, delta)-intervals
    (length and mass both above ``delta``) intersect the window. Candidate
    intervals are at most ``window`` long, so a single long interval cannot
    make a window with little mass look populated. The count comes from a
    greedy earliest-end scan, which is optimal for disjoint interval
    selection.
    """
    if min(range_, delta, window) <= 0:
        raise ValueError("range, delta and window must be positive")
    h = step or min(delta / 8.0, window / 64.0, 1.0 / 64.0)
    n_cells = int(math.ceil((2.0 * range_ + 1.0) / h))
    grid = -range_ + h * np.arange(n_cells + 1)
    cum = cumulative_mass(spec, grid)

    k = int(round(1.0 / h))
    inside = grid <= range_ + 1e-12
    idx = np.nonzero(inside)[0]
    idx = idx[idx + k < len(grid)]
    unit = cum[idx + k] - cum[idx]
    sup_unit = float(unit.max()) if len(unit) else 0.0

    starts, counts, whole = [], [], []
    n_windows = int(math.floor(2.0 * range_ / window + 1e-9))
    for j in range(n_windows):
        w0 = -range_ + j * window
        w1 = w0 + window
        lo = int(np.searchsorted(grid, w0 - 1e-12))
        hi = int(np.searchsorted(grid, w1 + 1e-12, side="right")) - 1
        e_max = int(np.searchsorted(grid, w1 + window + 1e-12, side="right"))
        count, floor, e_min = 0, 0, lo + 1
        while True:
            e = _earliest_end(grid, cum, floor, e_min, e_max, window, delta)
            if e is None or grid[e[1]] >= w1 - 1e-12:
                break
            count += 1
            floor = e_min = e[0]
        starts.append(w0)
        counts.append(count)
        whole.append(bool(window > delta and cum[hi] - cum[lo] > delta))
    return PWDiagnostic(PW_LABEL, sup_unit, starts, counts, whole, delta, window)


# -- JSON --------------------------------------------------------------------

def measure_from_dict(data: dict) -> MeasureSpec:
    if not isinstance(data, dict):
        raise MeasureError("measure description must be a JSON object")
    unknown = set(data) - {"even", "atoms", "density"}
    if unknown:
        raise MeasureError(f"unknown measure keys: {sorted(unknown)}")
    if data.get("even", True) is not True:
        raise MeasureError('"even" must be true')
    atoms = []
    for atom in data.get("atoms", []) or []:
        try:
            atoms.append((float(atom["x"]), float(atom["mass"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise MeasureError(f"bad atom entry {atom!r}") from exc
    density = data.get("density")
    if density is not None:
        kind = density.get("kind") if isinstance(density, dict) else None
        if kind == "expr":
            density = parse_density(str(density.get("source", "")))
        elif kind == "builtin":
            density = BuiltinDensity(str(density.get("name")), tuple(density.get("params", [])))
        else:
            raise MeasureError(f"density kind must be 'expr' or 'builtin', got {kind!r}")
    return MeasureSpec(tuple(atoms), density)


def measure_to_dict(spec: MeasureSpec) -> dict:
    density = spec.density
    if density is None:
        dens = None
    elif isinstance(density, DensityExpr):
        dens = {"kind": "expr", "source": density.source}
    elif isinstance(density, BuiltinDensity):
        dens = {"kind": "builtin", "name": density.name, "params": list(density.params)}
    else:
        raise MeasureError(f"density {density!r} has no JSON form")
    return {"even": True, "atoms": [{"x": x, "mass": m} for x, m in spec.atoms], "density": dens}


def load_measure(path) -> MeasureSpec:
    with open(Path(path), encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MeasureError(f"{path}: invalid JSON ({exc})") from exc
    return measure_from_dict(data)
