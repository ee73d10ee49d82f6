"""Physical model: equation of state, geometry, scenarios, weight functions.

The fluid is an isentropic gas with pressure P = K * rho**gamma carrying a
constant far-field state (rho_bar, 0).  Initial data are compactly
supported C1 bump perturbations of that state, so every disturbance lives
inside the sound cone r <= R + sigma*t of the background sound speed
sigma.  Scenarios bundle the gas, the geometry (1-D slab or radially
symmetric in N dimensions), the bump amplitudes and the discretization,
and are the single currency passed between the solver, the analytical
blowup criteria and the verification checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .quadrature import QuadratureRule, SIMPSON, integrate_fn

# ---------------------------------------------------------------------------
# Equation of state


@dataclass(frozen=True)
class EosParams:
    """Polytropic equation of state P = K * rho**gamma with background rho_bar."""

    K: float
    gamma: float
    rho_bar: float

    def __post_init__(self) -> None:
        if not self.K > 0:
            raise ValueError("K must be positive")
        if not self.gamma >= 1:
            raise ValueError("gamma must be >= 1")
        if not self.rho_bar > 0:
            raise ValueError("rho_bar must be positive (non-vacuum background)")


def pressure(eos: EosParams, rho):
    """Pressure K * rho**gamma; rejects negative density."""
    r = np.asarray(rho, dtype=float)
    if np.any(r < 0):
        raise ValueError("density must be non-negative")
    p = eos.K * r ** eos.gamma
    return float(p) if np.isscalar(rho) else p


def sound_speed(eos: EosParams) -> float:
    """Background sound speed sqrt(K * gamma * rho_bar**(gamma-1)); needs gamma > 1."""
    if not eos.gamma > 1:
        raise ValueError("sound speed of the background state requires gamma > 1")
    return math.sqrt(eos.K * eos.gamma * eos.rho_bar ** (eos.gamma - 1.0))


def riemann_variable(eos: EosParams, rho):
    """Riemann-type variable 2/(gamma-1) * (sqrt(P'(rho)) - sigma).

    Vanishes identically at the background state and inherits its sign
    from rho - rho_bar.
    """
    if not eos.gamma > 1:
        raise ValueError("riemann variable requires gamma > 1")
    r = np.asarray(rho, dtype=float)
    if np.any(r < 0):
        raise ValueError("density must be non-negative")
    sigma = sound_speed(eos)
    local = np.sqrt(eos.K * eos.gamma * r ** (eos.gamma - 1.0))
    v = 2.0 / (eos.gamma - 1.0) * (local - sigma)
    return float(v) if np.isscalar(rho) else v


# ---------------------------------------------------------------------------
# Geometry and grid


@dataclass(frozen=True)
class Geometry:
    """Either a 1-D slab on [-L, L] or radial symmetry in N >= 1 dimensions."""

    kind: str
    ndim: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ("cartesian1d", "radial"):
            raise ValueError(f"unknown geometry kind {self.kind!r}")
        if self.kind == "cartesian1d" and self.ndim != 1:
            raise ValueError("the 1-D slab geometry has ndim = 1")
        if self.ndim < 1:
            raise ValueError("ndim must be >= 1")

    @staticmethod
    def cartesian1d() -> "Geometry":
        return Geometry("cartesian1d", 1)

    @staticmethod
    def radial(ndim: int) -> "Geometry":
        return Geometry("radial", int(ndim))

    @property
    def is_radial(self) -> bool:
        return self.kind == "radial"

    def label(self) -> str:
        return f"radial{self.ndim}" if self.is_radial else "cartesian1d"


@dataclass(frozen=True)
class GridSpec:
    """Uniform cell-centered grid: [0, extent] radial, [-extent, extent] 1-D."""

    extent: float
    cells: int

    def __post_init__(self) -> None:
        if not self.extent > 0:
            raise ValueError("grid extent must be positive")
        if self.cells < 16:
            raise ValueError("need at least 16 cells")

    def spacing(self, geometry: Geometry) -> float:
        width = self.extent if geometry.is_radial else 2.0 * self.extent
        return width / self.cells

    def centers(self, geometry: Geometry) -> np.ndarray:
        dx = self.spacing(geometry)
        left = 0.0 if geometry.is_radial else -self.extent
        return left + (np.arange(self.cells) + 0.5) * dx


# ---------------------------------------------------------------------------
# Initial data


@dataclass(frozen=True)
class BumpProfile:
    """Quartic C1 bump amp*(1-(x/R)**2)**2 on |x| <= R, odd-extended for velocity."""

    amp: float
    R: float
    odd: bool = False

    def __call__(self, x):
        xs = np.asarray(x, dtype=float)
        y = xs / self.R
        inside = np.abs(y) <= 1.0
        shape = (1.0 - y ** 2) ** 2
        if self.odd:
            shape = y * shape
        vals = np.where(inside, self.amp * shape, 0.0)
        return float(vals) if np.isscalar(x) else vals


@dataclass(frozen=True)
class DetectorParams:
    """Blowup proxy thresholds for the solver.

    ``slope_factor`` scales the background sound speed into a per-cell
    velocity jump that flags gradient blowup; ``dt_floor`` flags stalled
    time stepping; ``sample_interval`` spaces the functional time series.
    """

    slope_factor: float = 0.2
    dt_floor: float = 1e-10
    sample_interval: float = 0.01

    def __post_init__(self) -> None:
        if not 0 < self.slope_factor <= 1:
            raise ValueError("slope_factor must lie in (0, 1]")
        if not self.dt_floor > 0:
            raise ValueError("dt_floor must be positive")
        if not self.sample_interval > 0:
            raise ValueError("sample_interval must be positive")


@dataclass(frozen=True)
class Scenario:
    """Complete description of one run: gas, geometry, bump data, grid."""

    eos: EosParams
    geometry: Geometry
    R: float
    rho0: BumpProfile
    v0: BumpProfile
    grid: GridSpec
    detector: DetectorParams = field(default_factory=DetectorParams)

    @property
    def amp_rho(self) -> float:
        return self.rho0.amp

    @property
    def amp_v(self) -> float:
        return self.v0.amp

    def label(self) -> str:
        return (
            f"{self.geometry.label()}-R{self.R:g}-ar{self.amp_rho:g}"
            f"-av{self.amp_v:g}-c{self.grid.cells}"
        )


def make_bump_scenario(
    eos: EosParams,
    geometry: Geometry,
    R: float,
    amp_rho: float,
    amp_v: float,
    grid: GridSpec,
    detector: DetectorParams | None = None,
) -> Scenario:
    """Build and validate a quartic-bump scenario.

    Rejects initial vacuum (rho_bar + amp_rho <= 0), grids that do not
    contain the bump, and grids with fewer than 16 cells across [0, R].
    """
    if not R > 0:
        raise ValueError("bump radius R must be positive")
    if eos.rho_bar + min(amp_rho, 0.0) <= 0:
        raise ValueError("initial data touch vacuum: rho_bar + amp_rho must be positive")
    if not grid.extent > R:
        raise ValueError("grid extent must exceed the bump radius R")
    if R / grid.spacing(geometry) < 16:
        raise ValueError("grid too coarse: fewer than 16 cells across [0, R]")
    return Scenario(
        eos=eos,
        geometry=geometry,
        R=R,
        rho0=BumpProfile(amp_rho, R, odd=False),
        v0=BumpProfile(amp_v, R, odd=True),
        grid=grid,
        detector=detector if detector is not None else DetectorParams(),
    )


# ---------------------------------------------------------------------------
# Testing (weight) functions for the momentum functionals

RADIAL_VANISHING = "radial_vanishing"
NONNEG_INCREASING = "nonneg_increasing"
POWER_LAW = "power_law"
LINEAR = "linear"

# which weight classes may feed the general radial / 1-D criteria
RADIAL_CLASSES = (RADIAL_VANISHING, POWER_LAW, LINEAR)
CARTESIAN_CLASSES = (NONNEG_INCREASING,)

_VALIDATION_POINTS = 1000
_VALIDATION_SPAN = 10.0
_CROSS_CHECK_RULE = QuadratureRule(SIMPSON, 8192)


@dataclass(frozen=True)
class TestingFunction:
    """Strictly increasing weight f with derivative and optional closed-form B.

    ``cls`` records which admissibility class the function certifies:
    weights vanishing at the origin for radial criteria, non-negative
    increasing weights for 1-D ones, and the two concrete families
    (powers and the identity) used by the sharp theorems.  ``analytic_B``
    maps (R, sigma, t, geometry) to the weight integral of f**2/f' over
    the sound cone and is cross-checked against quadrature on
    construction.
    """

    f: Callable
    f_prime: Callable
    cls: str
    power: float | None = None
    analytic_B: Callable | None = None
    name: str = ""

    def weight_integrand(self, x):
        """f**2/f' with the removable 0/0 at zeros of f evaluated as 0."""
        xs = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            num = np.asarray(self.f(xs), dtype=float) ** 2
            den = np.asarray(self.f_prime(xs), dtype=float)
            g = num / den
        g = np.where(num == 0.0, 0.0, g)
        return float(g) if np.isscalar(x) else g


def _sample_domain(cls: str) -> np.ndarray:
    if cls in RADIAL_CLASSES:
        return np.linspace(_VALIDATION_SPAN / _VALIDATION_POINTS, _VALIDATION_SPAN, _VALIDATION_POINTS)
    return np.linspace(-_VALIDATION_SPAN, _VALIDATION_SPAN, _VALIDATION_POINTS)


def _validate_testing_function(tf: TestingFunction) -> None:
    xs = _sample_domain(tf.cls)
    fp = np.asarray(tf.f_prime(xs), dtype=float)
    if not np.all(np.isfinite(fp)) or not np.all(fp > 0):
        raise ValueError(f"testing function {tf.name or tf.cls}: f' must be positive")
    fv = np.asarray(tf.f(xs), dtype=float)
    if not np.all(np.isfinite(fv)):
        raise ValueError(f"testing function {tf.name or tf.cls}: f must be finite")
    if tf.cls in (RADIAL_VANISHING, POWER_LAW, LINEAR):
        if abs(float(tf.f(0.0))) > 1e-12:
            raise ValueError(f"testing function {tf.name or tf.cls}: f(0) must vanish")
    if tf.cls == NONNEG_INCREASING and np.any(fv < 0):
        raise ValueError(f"testing function {tf.name or tf.cls}: f must be non-negative")
    if tf.analytic_B is not None:
        _cross_check_analytic_B(tf)


def _cross_check_analytic_B(tf: TestingFunction) -> None:
    geoms = []
    if tf.cls in RADIAL_CLASSES:
        geoms.append(Geometry.radial(3))
    if tf.cls in CARTESIAN_CLASSES or tf.cls == LINEAR:
        geoms.append(Geometry.cartesian1d())
    R, sigma = 1.0, math.sqrt(2.0)
    for geom in geoms:
        for t in (0.0, 0.7):
            upper = R + sigma * t
            lower = 0.0 if geom.is_radial else -upper
            numeric = integrate_fn(tf.weight_integrand, lower, upper, _CROSS_CHECK_RULE)
            closed = float(tf.analytic_B(R, sigma, t, geom))
            scale = max(abs(closed), 1e-30)
            if abs(closed - numeric) > 1e-8 * scale:
                raise ValueError(
                    f"testing function {tf.name or tf.cls}: analytic_B disagrees with "
                    f"quadrature ({closed!r} vs {numeric!r} at t={t}, {geom.label()})"
                )


def _build(tf: TestingFunction) -> TestingFunction:
    _validate_testing_function(tf)
    return tf


def power_law(n: float) -> TestingFunction:
    """Weight f(r) = r**n for the radial momentum functionals."""
    if n <= 0:
        raise ValueError("power-law exponent must be positive")

    def f(x):
        return np.asarray(x, dtype=float) ** n

    def f_prime(x):
        return n * np.asarray(x, dtype=float) ** (n - 1.0)

    def analytic_B(R, sigma, t, geometry):
        from .quadrature import power_law_B

        return power_law_B(n, R, sigma, t, geometry)

    return _build(
        TestingFunction(f, f_prime, POWER_LAW, power=float(n), analytic_B=analytic_B, name=f"r^{n:g}")
    )


def linear() -> TestingFunction:
    """The identity weight, admissible in both geometries."""

    def f(x):
        return np.asarray(x, dtype=float) + 0.0

    def f_prime(x):
        return np.ones_like(np.asarray(x, dtype=float))

    def analytic_B(R, sigma, t, geometry):
        upper = R + sigma * t
        if getattr(geometry, "is_radial", False):
            return upper ** 3 / 3.0
        return 2.0 * upper ** 3 / 3.0

    return _build(TestingFunction(f, f_prime, LINEAR, power=1.0, analytic_B=analytic_B, name="x"))


def exponential(beta: float = 1.0) -> TestingFunction:
    """Weight f(x) = exp(beta*x), a positive increasing weight for 1-D criteria."""
    if beta <= 0:
        raise ValueError("beta must be positive")

    def f(x):
        return np.exp(beta * np.asarray(x, dtype=float))

    def f_prime(x):
        return beta * np.exp(beta * np.asarray(x, dtype=float))

    def analytic_B(R, sigma, t, geometry):
        if getattr(geometry, "is_radial", False):
            raise ValueError("exponential weight is for the 1-D geometry")
        upper = R + sigma * t
        return 2.0 * math.sinh(beta * upper) / beta ** 2

    return _build(
        TestingFunction(f, f_prime, NONNEG_INCREASING, analytic_B=analytic_B, name=f"exp({beta:g}x)")
    )


def radial_vanishing(f: Callable, f_prime: Callable, analytic_B: Callable | None = None, name: str = "") -> TestingFunction:
    """Wrap a custom strictly increasing weight with f(0) = 0 for radial use."""
    return _build(TestingFunction(f, f_prime, RADIAL_VANISHING, analytic_B=analytic_B, name=name))


def nonneg_increasing(f: Callable, f_prime: Callable, analytic_B: Callable | None = None, name: str = "") -> TestingFunction:
    """Wrap a custom non-negative strictly increasing weight for 1-D use."""
    return _build(TestingFunction(f, f_prime, NONNEG_INCREASING, analytic_B=analytic_B, name=name))
