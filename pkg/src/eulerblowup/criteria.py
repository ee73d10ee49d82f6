"""Analytical blowup criteria for compactly supported non-vacuum bump data.

Each check compares an initial weighted momentum H(0) against a finite
threshold built from the gas constants, the bump radius R, the background
sound speed and a time horizon tau.  A satisfied criterion certifies that
the smooth solution breaks down before tau (or in finite time for the
horizon-free variant).  Thresholds come in two flavors: closed forms for
the concrete weights (powers of r, the identity) and quadrature-based
ones for general strictly increasing weights.

Comparisons are exact float comparisons with the strictness each
criterion actually claims; margins are always reported so near-boundary
cases are visible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .functionals import (
    FieldSnapshot,
    SeriesRecorder,
    initial_snapshot,
    mass_functional,
    momentum_functional,
    weight_functional_B,
)
from .model import (
    CARTESIAN_CLASSES,
    RADIAL_CLASSES,
    EosParams,
    Geometry,
    Scenario,
    TestingFunction,
    linear,
    power_law,
    sound_speed,
)
from .quadrature import QuadratureRule, SIMPSON, integrate_fn

# resolved theorem families
GENERAL_RADIAL = "general_radial"
GENERAL_1D = "general_1d"
POWER_RADIAL_CASE1 = "power_radial_case1"
POWER_RADIAL_CASE2 = "power_radial_case2"
LINEAR_1D_INFINITE = "linear_1d_infinite"
LINEAR_1D_TAU_CASE1 = "linear_1d_tau_case1"
LINEAR_1D_TAU_CASE2 = "linear_1d_tau_case2"

# family groups accepted by minimal_tau and the CLI
FAMILY_GENERAL_RADIAL = "general-radial"
FAMILY_GENERAL_1D = "general-1d"
FAMILY_POWER_RADIAL = "power-radial"
FAMILY_LINEAR_1D_TAU = "linear-1d-tau"
FAMILY_LINEAR_1D = "linear-1d"
FAMILIES = (
    FAMILY_GENERAL_RADIAL,
    FAMILY_GENERAL_1D,
    FAMILY_POWER_RADIAL,
    FAMILY_LINEAR_1D_TAU,
    FAMILY_LINEAR_1D,
)

_HORIZON_RULE = QuadratureRule(SIMPSON, 2048)


class NonMonotoneVerdictError(RuntimeError):
    """The verdict flips more than once along the scanned horizon grid."""


@dataclass(frozen=True)
class Condition:
    """One inequality of a criterion, compared exactly as claimed."""

    name: str
    lhs: float
    rhs: float
    op: str  # ">" or ">="

    @property
    def satisfied(self) -> bool:
        return self.lhs > self.rhs if self.op == ">" else self.lhs >= self.rhs

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "op": self.op,
            "satisfied": self.satisfied,
            "margin": self.margin,
        }


@dataclass(frozen=True)
class Verdict:
    kind: str  # "blowup_before" | "blowup_finite" | "inconclusive"
    tau: float | None = None
    reason: str | None = None

    @staticmethod
    def blowup_before(tau: float) -> "Verdict":
        return Verdict("blowup_before", tau=float(tau))

    @staticmethod
    def blowup_finite() -> "Verdict":
        return Verdict("blowup_finite")

    @staticmethod
    def inconclusive(reason: str) -> "Verdict":
        return Verdict("inconclusive", reason=reason)

    @property
    def certifies_blowup(self) -> bool:
        return self.kind in ("blowup_before", "blowup_finite")

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.tau is not None:
            d["tau"] = self.tau
        if self.reason is not None:
            d["reason"] = self.reason
        return d


@dataclass
class CriterionReport:
    theorem: str
    inputs: dict
    conditions: list
    verdict: Verdict
    notes: list = dc_field(default_factory=list)

    @property
    def margins(self) -> dict:
        return {c.name: c.margin for c in self.conditions}

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "inputs": self.inputs,
            "conditions": [c.to_dict() for c in self.conditions],
            "verdict": self.verdict.to_dict(),
            "margins": self.margins,
            "notes": list(self.notes),
        }

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


# ---------------------------------------------------------------------------
# Closed-form thresholds and root constants


def power_radial_case1_threshold(N: int, R: float, sigma: float, tau: float) -> float:
    """Strict H threshold for the power-weight radial criterion, non-negative mass."""
    U = R + sigma * tau
    return 2.0 * sigma * R ** (N + 1) * U ** (N + 1) / (N * (U ** (N + 1) - R ** (N + 1)))


def power_radial_case2_a(N: int, K: float, m1_0: float, R: float, sigma: float, tau: float) -> float:
    """Root constant a > 2 balancing the negative-mass drag for the radial case."""
    U = R + sigma * tau
    gap = U ** (N + 1) - R ** (N + 1)
    rad = 1.0 - 4.0 * N ** 2 * K * m1_0 * gap ** 2 / ((N + 1) * sigma ** 2 * R ** (2 * N + 2) * U ** N)
    return 1.0 + math.sqrt(rad)


def power_radial_case2_threshold(a: float, N: int, R: float, sigma: float, tau: float) -> float:
    return 0.5 * a * power_radial_case1_threshold(N, R, sigma, tau)


def power_radial_root_residual(
    a: float, N: int, K: float, m1_0: float, R: float, sigma: float, tau: float
) -> float:
    """Relative residual of the equation the case-2 root constant solves."""
    U = R + sigma * tau
    lhs = power_radial_case2_threshold(a, N, R, sigma, tau)
    rhs = math.sqrt(-4.0 * a * K * m1_0 * U ** (N + 2) / ((a - 2.0) * (N + 1)))
    return (lhs - rhs) / rhs


def linear_1d_threshold(R: float, sigma: float) -> float:
    """Strict H threshold for the horizon-free 1-D criterion."""
    return 8.0 * sigma * R ** 2 / 3.0


def linear_tau_case1_threshold(R: float, sigma: float, tau: float) -> float:
    U = R + sigma * tau
    return 8.0 * R ** 2 * U ** 2 / (3.0 * tau * (2.0 * R + sigma * tau))


def linear_tau_case2_a(K: float, m2_0: float, R: float, sigma: float, tau: float) -> float:
    """Root constant a > 4/3 balancing the negative-mass drag in 1-D."""
    U = R + sigma * tau
    rad = 4.0 / 9.0 - 6.0 * K * m2_0 * tau ** 2 * (2.0 * R + sigma * tau) ** 2 / (9.0 * R ** 4 * U)
    return 2.0 / 3.0 + math.sqrt(rad)


def linear_tau_case2_threshold(a: float, R: float, sigma: float, tau: float) -> float:
    U = R + sigma * tau
    return 2.0 * a * R ** 2 * U ** 2 / (tau * (2.0 * R + sigma * tau))


def linear_tau_root_residual(
    a: float, K: float, m2_0: float, R: float, sigma: float, tau: float
) -> float:
    U = R + sigma * tau
    lhs = linear_tau_case2_threshold(a, R, sigma, tau)
    rhs = math.sqrt(-8.0 * a * K * m2_0 * U ** 3 / (3.0 * a - 4.0))
    return (lhs - rhs) / rhs


def general_condition_thresholds(
    f: TestingFunction,
    a: float,
    eos: EosParams,
    R: float,
    tau: float,
    geometry: Geometry,
    rule: QuadratureRule = _HORIZON_RULE,
) -> tuple[float, float]:
    """(strict, horizon) H(0) thresholds of the general-weight criterion.

    The strict threshold makes the pressure-barrier inequality hold; the
    horizon threshold is the reciprocal of the time integral of 1/(a*B).
    """
    sigma = sound_speed(eos)
    U = R + sigma * tau
    B_tau = weight_functional_B(f, R, sigma, tau, geometry, rule)
    barrier = eos.K * eos.gamma / (eos.gamma - 1.0) * eos.rho_bar ** (eos.gamma - 1.0)
    strict = math.sqrt(2.0 * a / (a - 2.0) * B_tau * barrier * float(f.f(U)))

    def inv_aB(s):
        ss = np.atleast_1d(np.asarray(s, dtype=float))
        vals = np.array([1.0 / (a * weight_functional_B(f, R, sigma, float(t), geometry, rule)) for t in ss])
        return vals if np.ndim(s) else float(vals[0])

    horizon_integral = integrate_fn(inv_aB, 0.0, tau, _HORIZON_RULE)
    return strict, 1.0 / horizon_integral


# ---------------------------------------------------------------------------
# Criterion checks


def _initial_upper(scenario: Scenario) -> float:
    return scenario.R + 3.0 * scenario.grid.spacing(scenario.geometry)


def check_general(
    scenario: Scenario,
    f: TestingFunction,
    a: float = 4.0,
    tau: float = 1.0,
    rule: QuadratureRule = _HORIZON_RULE,
) -> CriterionReport:
    """General-weight criterion: certify breakdown before tau.

    Needs gamma > 1, a > 2, a weight admissible for the geometry, and a
    positive initial weighted momentum.
    """
    eos = scenario.eos
    if not eos.gamma > 1:
        raise ValueError("the general criterion requires gamma > 1")
    if not a > 2:
        raise ValueError("the trade-off constant a must exceed 2")
    if not tau > 0:
        raise ValueError("the horizon tau must be positive")
    geom = scenario.geometry
    admissible = RADIAL_CLASSES if geom.is_radial else CARTESIAN_CLASSES
    if f.cls not in admissible:
        raise ValueError(
            f"weight class {f.cls!r} is not admissible for {geom.label()} geometry"
        )
    theorem = GENERAL_RADIAL if geom.is_radial else GENERAL_1D
    sigma = sound_speed(eos)
    snap = initial_snapshot(scenario)
    H0 = momentum_functional(snap, f, geom, upper=_initial_upper(scenario))
    B_tau = weight_functional_B(f, scenario.R, sigma, tau, geom, rule)
    strict_thr, horizon_thr = general_condition_thresholds(f, a, eos, scenario.R, tau, geom, rule)

    conds = [
        Condition("initial_momentum_positive", H0, 0.0, ">"),
        Condition("pressure_barrier_strict", H0, strict_thr, ">"),
        Condition("horizon_budget", H0, horizon_thr, ">="),
    ]
    inputs = {
        "geometry": geom.label(),
        "weight": f.name or f.cls,
        "a": a,
        "tau": tau,
        "sigma": sigma,
        "H0": H0,
        "B_tau": B_tau,
        "strict_threshold": strict_thr,
        "horizon_threshold": horizon_thr,
        "combined_threshold": max(strict_thr, horizon_thr),
    }
    if not conds[0].satisfied:
        verdict = Verdict.inconclusive("initial weighted momentum is not positive")
    elif conds[1].satisfied and conds[2].satisfied:
        verdict = Verdict.blowup_before(tau)
    else:
        failed = next(c.name for c in conds if not c.satisfied)
        verdict = Verdict.inconclusive(f"condition {failed} not met")
    return CriterionReport(theorem, inputs, conds, verdict)


def check_power_radial(scenario: Scenario, tau: float = 1.0) -> CriterionReport:
    """Power-weight radial criterion: certify breakdown before tau.

    Case 1 needs gamma >= 2 with non-negative perturbed mass; case 2
    covers gamma = 2 with negative perturbed mass through the root
    constant a.
    """
    eos = scenario.eos
    geom = scenario.geometry
    if not geom.is_radial:
        raise ValueError("the power-weight criterion applies to radial geometry")
    if not eos.gamma >= 2:
        raise ValueError("the power-weight criterion requires gamma >= 2")
    if not tau > 0:
        raise ValueError("the horizon tau must be positive")
    N = geom.ndim
    sigma = sound_speed(eos)
    snap = initial_snapshot(scenario)
    f = power_law(N)
    H0 = momentum_functional(snap, f, geom, upper=_initial_upper(scenario))
    m1_0 = mass_functional(snap, eos, geom)
    inputs = {
        "geometry": geom.label(),
        "N": N,
        "tau": tau,
        "sigma": sigma,
        "H0": H0,
        "m0": m1_0,
    }
    notes: list[str] = []

    if m1_0 >= 0.0:
        thr = power_radial_case1_threshold(N, scenario.R, sigma, tau)
        inputs["threshold"] = thr
        conds = [Condition("initial_momentum_exceeds_threshold", H0, thr, ">")]
        if H0 == thr:
            notes.append(
                "H(0) sits exactly on the threshold: the strict form does not certify, "
                "the non-strict variant would"
            )
        verdict = (
            Verdict.blowup_before(tau)
            if conds[0].satisfied
            else Verdict.inconclusive("initial momentum does not exceed the threshold")
        )
        return CriterionReport(POWER_RADIAL_CASE1, inputs, conds, verdict, notes)

    if eos.gamma != 2.0:
        inputs["threshold"] = float("nan")
        return CriterionReport(
            POWER_RADIAL_CASE2,
            inputs,
            [],
            Verdict.inconclusive(
                "negative perturbed mass is only covered for gamma = 2"
            ),
            notes,
        )
    a = power_radial_case2_a(N, eos.K, m1_0, scenario.R, sigma, tau)
    thr = power_radial_case2_threshold(a, N, scenario.R, sigma, tau)
    inputs["a"] = a
    inputs["threshold"] = thr
    conds = [
        Condition("root_constant_admissible", a, 2.0, ">"),
        Condition("initial_momentum_exceeds_threshold", H0, thr, ">"),
    ]
    if a == 2.0:
        notes.append("root constant degenerates to the admissibility boundary a = 2")
    if H0 == thr:
        notes.append(
            "H(0) sits exactly on the threshold: the strict form does not certify, "
            "the non-strict variant would"
        )
    verdict = (
        Verdict.blowup_before(tau)
        if all(c.satisfied for c in conds)
        else Verdict.inconclusive("negative-mass threshold not exceeded")
    )
    return CriterionReport(POWER_RADIAL_CASE2, inputs, conds, verdict, notes)


def check_linear_1d(scenario: Scenario) -> CriterionReport:
    """Horizon-free 1-D criterion: certify breakdown in finite time."""
    eos = scenario.eos
    geom = scenario.geometry
    if geom.is_radial:
        raise ValueError("the horizon-free criterion applies to the 1-D geometry")
    if not eos.gamma >= 2:
        raise ValueError("the horizon-free criterion requires gamma >= 2")
    sigma = sound_speed(eos)
    snap = initial_snapshot(scenario)
    H0 = momentum_functional(snap, linear(), geom, upper=_initial_upper(scenario))
    m2_0 = mass_functional(snap, eos, geom)
    thr = linear_1d_threshold(scenario.R, sigma)
    inputs = {
        "geometry": geom.label(),
        "sigma": sigma,
        "H0": H0,
        "m0": m2_0,
        "threshold": thr,
    }
    conds = [
        Condition("perturbed_mass_nonnegative", m2_0, 0.0, ">="),
        Condition("initial_momentum_exceeds_threshold", H0, thr, ">"),
    ]
    notes: list[str] = []
    if H0 == thr:
        notes.append("H(0) sits exactly on the strict threshold")
    verdict = (
        Verdict.blowup_finite()
        if all(c.satisfied for c in conds)
        else Verdict.inconclusive(
            "requires non-negative perturbed mass and momentum above the threshold"
        )
    )
    return CriterionReport(LINEAR_1D_INFINITE, inputs, conds, verdict, notes)


def check_linear_1d_tau(scenario: Scenario, tau: float = 1.0) -> CriterionReport:
    """Horizon 1-D criterion: certify breakdown before tau.

    Case 1 (non-negative perturbed mass, gamma >= 2) uses a non-strict
    comparison; case 2 (gamma = 2, negative mass) is strict with the root
    constant a.
    """
    eos = scenario.eos
    geom = scenario.geometry
    if geom.is_radial:
        raise ValueError("the horizon criterion applies to the 1-D geometry")
    if not eos.gamma >= 2:
        raise ValueError("the horizon criterion requires gamma >= 2")
    if not tau > 0:
        raise ValueError("the horizon tau must be positive")
    sigma = sound_speed(eos)
    snap = initial_snapshot(scenario)
    H0 = momentum_functional(snap, linear(), geom, upper=_initial_upper(scenario))
    m2_0 = mass_functional(snap, eos, geom)
    inputs = {
        "geometry": geom.label(),
        "tau": tau,
        "sigma": sigma,
        "H0": H0,
        "m0": m2_0,
    }
    notes: list[str] = []

    if m2_0 >= 0.0:
        thr = linear_tau_case1_threshold(scenario.R, sigma, tau)
        _self_check_linear_reciprocity(scenario.R, sigma, tau, thr)
        inputs["threshold"] = thr
        conds = [Condition("initial_momentum_meets_threshold", H0, thr, ">=")]
        verdict = (
            Verdict.blowup_before(tau)
            if conds[0].satisfied
            else Verdict.inconclusive("initial momentum below the horizon threshold")
        )
        return CriterionReport(LINEAR_1D_TAU_CASE1, inputs, conds, verdict, notes)

    if eos.gamma != 2.0:
        inputs["threshold"] = float("nan")
        return CriterionReport(
            LINEAR_1D_TAU_CASE2,
            inputs,
            [],
            Verdict.inconclusive("negative perturbed mass is only covered for gamma = 2"),
            notes,
        )
    a = linear_tau_case2_a(eos.K, m2_0, scenario.R, sigma, tau)
    resid = linear_tau_root_residual(a, eos.K, m2_0, scenario.R, sigma, tau)
    if abs(resid) > 1e-9:
        raise RuntimeError(f"root constant fails its defining equation (residual {resid:g})")
    thr = linear_tau_case2_threshold(a, scenario.R, sigma, tau)
    inputs["a"] = a
    inputs["threshold"] = thr
    conds = [
        Condition("root_constant_admissible", a, 4.0 / 3.0, ">"),
        Condition("initial_momentum_exceeds_threshold", H0, thr, ">"),
    ]
    if H0 == thr:
        notes.append("H(0) sits exactly on the strict threshold")
    verdict = (
        Verdict.blowup_before(tau)
        if all(c.satisfied for c in conds)
        else Verdict.inconclusive("negative-mass threshold not exceeded")
    )
    return CriterionReport(LINEAR_1D_TAU_CASE2, inputs, conds, verdict, notes)


def _self_check_linear_reciprocity(R: float, sigma: float, tau: float, thr: float) -> None:
    # the closed form must equal the reciprocal horizon integral it came from;
    # integrate on a log-radius grid so horizons of any length stay resolved
    w_hi = math.log((R + sigma * tau) / R)
    integral = integrate_fn(
        lambda w: 3.0 * np.exp(-2.0 * np.asarray(w, dtype=float)) / (4.0 * sigma * R ** 2),
        0.0,
        w_hi,
        QuadratureRule(SIMPSON, 512),
    )
    if abs(thr * integral - 1.0) > 1e-6:
        raise RuntimeError("horizon threshold fails its reciprocity identity")


# ---------------------------------------------------------------------------
# Minimal certifying horizon


def minimal_tau(
    scenario: Scenario,
    family: str,
    f: TestingFunction | None = None,
    a: float = 4.0,
    tau_lo: float = 1e-3,
    tau_hi: float = 1e3,
    rtol: float = 1e-6,
    scan_points: int = 64,
) -> float | None:
    """Smallest horizon in [tau_lo, tau_hi] the family certifies, or None.

    Scans a log-spaced grid, requires the positive verdicts to form one
    contiguous upper tail (otherwise raises
    :class:`NonMonotoneVerdictError`), then bisects the first sign change
    to relative precision ``rtol``.
    """
    if family not in (FAMILY_GENERAL_RADIAL, FAMILY_GENERAL_1D, FAMILY_POWER_RADIAL, FAMILY_LINEAR_1D_TAU):
        raise ValueError(f"family {family!r} does not take a horizon")

    def positive(tau: float) -> bool:
        return _family_check(scenario, family, tau, f, a).verdict.certifies_blowup

    grid = np.geomspace(tau_lo, tau_hi, scan_points)
    verdicts = [positive(float(t)) for t in grid]
    if not any(verdicts):
        return None
    first = verdicts.index(True)
    if not all(verdicts[first:]):
        flips = [float(grid[i]) for i in range(first, len(grid) - 1) if verdicts[i] != verdicts[i + 1]]
        raise NonMonotoneVerdictError(
            f"verdict is not monotone in the horizon; flips near {flips}"
        )
    if first == 0:
        return float(grid[0])
    lo, hi = float(grid[first - 1]), float(grid[first])
    while (hi - lo) > rtol * hi:
        mid = 0.5 * (lo + hi)
        if positive(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _family_check(
    scenario: Scenario, family: str, tau: float, f: TestingFunction | None, a: float
) -> CriterionReport:
    if family in (FAMILY_GENERAL_RADIAL, FAMILY_GENERAL_1D):
        if f is None:
            raise ValueError("the general families need an explicit weight function")
        return check_general(scenario, f, a=a, tau=tau)
    if family == FAMILY_POWER_RADIAL:
        return check_power_radial(scenario, tau)
    if family == FAMILY_LINEAR_1D_TAU:
        return check_linear_1d_tau(scenario, tau)
    if family == FAMILY_LINEAR_1D:
        return check_linear_1d(scenario)
    raise ValueError(f"unknown criterion family {family!r}")


def run_family_check(
    scenario: Scenario,
    family: str,
    tau: float = 1.0,
    f: TestingFunction | None = None,
    a: float = 4.0,
) -> CriterionReport:
    """Dispatch one of the named criterion families."""
    return _family_check(scenario, family, tau, f, a)


# ---------------------------------------------------------------------------
# Theorem context: the differential inequality a certified run must obey


@dataclass
class TheoremContext:
    """Monitored form dH/dt >= coeff(t) * H**2 + G(t) of one resolved criterion.

    Built from a scenario plus family; exposes the series callables the
    recorder needs and the hypothesis check used to gate monitoring.
    """

    scenario: Scenario
    family: str
    report: CriterionReport
    f: TestingFunction
    a: float
    tau: float

    def __post_init__(self) -> None:
        self.sigma = sound_speed(self.scenario.eos)

    # -- series callables -------------------------------------------------
    def H(self, snap: FieldSnapshot) -> float:
        upper = self.scenario.R + self.sigma * snap.t + 3.0 * snap.spacing
        upper = min(upper, float(snap.centers[-1]) + 0.5 * snap.spacing)
        return momentum_functional(snap, self.f, self.scenario.geometry, upper=upper)

    def B(self, t: float) -> float:
        return weight_functional_B(
            self.f, self.scenario.R, self.sigma, t, self.scenario.geometry
        )

    def m(self, snap: FieldSnapshot) -> float:
        return mass_functional(snap, self.scenario.eos, self.scenario.geometry)

    def _pressure_slack(self, snap: FieldSnapshot) -> float:
        # weighted integral of the perturbed pressure-law term over the cone
        eos = self.scenario.eos
        geom = self.scenario.geometry
        upper = min(
            self.scenario.R + self.sigma * snap.t + 3.0 * snap.spacing,
            float(snap.centers[-1]) + 0.5 * snap.spacing,
        )
        mask = (
            snap.centers <= upper if geom.is_radial else np.abs(snap.centers) <= upper
        )
        diff = snap.rho[mask] ** (eos.gamma - 1.0) - eos.rho_bar ** (eos.gamma - 1.0)
        if geom.is_radial and geom.ndim > 1:
            diff = diff * snap.centers[mask] ** (geom.ndim - 1)
        from .quadrature import integrate_samples

        integral = integrate_samples(diff, snap.spacing)
        scale = eos.K * eos.gamma / (eos.gamma - 1.0)
        if geom.is_radial:
            scale *= geom.ndim
        return scale * integral

    def riccati_coeff(self, t: float) -> float:
        R, sigma = self.scenario.R, self.sigma
        U = R + sigma * t
        N = self.scenario.geometry.ndim
        if self.family in (GENERAL_RADIAL, GENERAL_1D):
            return 1.0 / (self.a * self.B(t))
        if self.family == POWER_RADIAL_CASE1:
            return N * (N + 1) / (2.0 * U ** (N + 2))
        if self.family == POWER_RADIAL_CASE2:
            return N * (N + 1) / (self.a * U ** (N + 2))
        if self.family in (LINEAR_1D_INFINITE, LINEAR_1D_TAU_CASE1):
            return 3.0 / (4.0 * U ** 3)
        if self.family == LINEAR_1D_TAU_CASE2:
            return 1.0 / (self.a * U ** 3)
        raise ValueError(f"unknown family {self.family!r}")

    def G(self, t: float, H: float, m0: float, snap: FieldSnapshot) -> float:
        eos = self.scenario.eos
        R, sigma = self.scenario.R, self.sigma
        N = self.scenario.geometry.ndim
        U_tau = R + sigma * self.tau
        if self.family in (GENERAL_RADIAL, GENERAL_1D):
            barrier = eos.K * eos.gamma / (eos.gamma - 1.0) * eos.rho_bar ** (eos.gamma - 1.0)
            return (self.a - 2.0) * H ** 2 / (2.0 * self.a * self.B(self.tau)) - barrier * float(
                self.f.f(U_tau)
            )
        if self.family == POWER_RADIAL_CASE1:
            return self._pressure_slack(snap)
        if self.family == POWER_RADIAL_CASE2:
            return (self.a - 2.0) * N * (N + 1) * H ** 2 / (
                2.0 * self.a * U_tau ** (N + 2)
            ) + 2.0 * eos.K * N * m0
        if self.family in (LINEAR_1D_INFINITE, LINEAR_1D_TAU_CASE1):
            return self._pressure_slack(snap)
        if self.family == LINEAR_1D_TAU_CASE2:
            return (3.0 * self.a - 4.0) * H ** 2 / (
                4.0 * self.a * U_tau ** 3
            ) + 2.0 * eos.K * m0
        raise ValueError(f"unknown family {self.family!r}")

    def hypotheses_hold(self) -> bool:
        return self.report.verdict.certifies_blowup

    def recorder(self) -> SeriesRecorder:
        return SeriesRecorder(H=self.H, B=self.B, m=self.m, G=self.G, theorem=self.family)


def theorem_context(
    scenario: Scenario,
    family: str,
    tau: float = 1.0,
    f: TestingFunction | None = None,
    a: float = 4.0,
) -> TheoremContext:
    """Resolve a family on a scenario and package its monitored inequality."""
    report = _family_check(scenario, family, tau, f, a)
    resolved = report.theorem
    if resolved in (POWER_RADIAL_CASE1, POWER_RADIAL_CASE2):
        weight = power_law(scenario.geometry.ndim)
        a_eff = report.inputs.get("a", 2.0)
    elif resolved in (LINEAR_1D_INFINITE, LINEAR_1D_TAU_CASE1, LINEAR_1D_TAU_CASE2):
        weight = linear()
        a_eff = report.inputs.get("a", 4.0 / 3.0)
    else:
        weight = f  # type: ignore[assignment]
        a_eff = a
    return TheoremContext(scenario, resolved, report, weight, float(a_eff), float(tau))
