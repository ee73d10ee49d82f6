"""Frozen scenario presets: gentle reference bumps and certified blowup data.

The reference bumps are small perturbations used to exercise the
conservation, propagation and cone-energy checks in the smooth regime.
The certified scenarios are built backwards from the criteria: the
velocity amplitude is chosen so the initial weighted momentum lands at a
fixed margin (default 1.5x) above the relevant closed-form or
quadrature threshold, which certifies breakdown before the preset
horizon and makes the runs end in a detector event.

Quartic-bump shape integrals used to convert H(0) into an amplitude:
with g(y) = y (1 - y^2)^2,
    int_{-1}^{1} y g(y) dy          = 16/105   (1-D identity weight)
    int_0^1 y^2 g(y) dy             = 8/315    (radial cubic weight)
    int_0^1 y g(y) dy               = 8/105    (radial identity weight)
and for the exponential weight the shape integral is evaluated by
Simpson quadrature at build time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .criteria import (
    FAMILY_GENERAL_1D,
    FAMILY_GENERAL_RADIAL,
    FAMILY_LINEAR_1D,
    FAMILY_LINEAR_1D_TAU,
    FAMILY_POWER_RADIAL,
    general_condition_thresholds,
    linear_1d_threshold,
    linear_tau_case1_threshold,
    power_radial_case1_threshold,
)
from .model import (
    DetectorParams,
    EosParams,
    Geometry,
    GridSpec,
    Scenario,
    TestingFunction,
    exponential,
    linear,
    make_bump_scenario,
    sound_speed,
)
from .quadrature import QuadratureRule, SIMPSON, integrate_fn

_SHAPE_RULE = QuadratureRule(SIMPSON, 512)

# exact quartic-bump shape integrals (see module docstring)
SHAPE_1D_LINEAR = 16.0 / 105.0
SHAPE_RADIAL_CUBIC = 8.0 / 315.0
SHAPE_RADIAL_LINEAR = 8.0 / 105.0

REFERENCE_CELLS = 4096
CERTIFIED_MARGIN = 1.5

# certified runs detect at per-cell velocity jumps of half a sound speed;
# the tighter factor keeps the detection time stable under refinement
CERTIFIED_DETECTOR = DetectorParams(slope_factor=0.5, sample_interval=1e-3)


def reference_eos() -> EosParams:
    return EosParams(K=1.0, gamma=2.0, rho_bar=1.0)


def reference_scenario(geometry: Geometry | None = None, cells: int = REFERENCE_CELLS) -> Scenario:
    """Gentle bump (amp_rho 0.01, amp_v 0.02) on a cone-containing grid."""
    geom = geometry if geometry is not None else Geometry.radial(3)
    return make_bump_scenario(
        eos=reference_eos(),
        geometry=geom,
        R=1.0,
        amp_rho=0.01,
        amp_v=0.02,
        grid=GridSpec(extent=2.2, cells=cells),
    )


def constant_scenario(geometry: Geometry | None = None, cells: int = 256) -> Scenario:
    """Pure background state: both bump amplitudes zero."""
    geom = geometry if geometry is not None else Geometry.cartesian1d()
    return make_bump_scenario(
        eos=reference_eos(),
        geometry=geom,
        R=1.0,
        amp_rho=0.0,
        amp_v=0.0,
        grid=GridSpec(extent=2.2, cells=cells),
    )


@dataclass(frozen=True)
class CertifiedCase:
    """A preset scenario together with the criterion that certifies it."""

    name: str
    scenario: Scenario
    family: str
    tau: float
    f: TestingFunction | None = None
    a: float = 4.0


def bump_momentum_amplitude(target_H0: float, R: float, shape: float) -> float:
    """Velocity amplitude giving the quartic bump the target initial momentum."""
    return target_H0 / shape


def certified_linear_tau_case(cells: int = REFERENCE_CELLS, margin: float = CERTIFIED_MARGIN) -> CertifiedCase:
    """1-D identity-weight horizon criterion, case 1, at tau = 1."""
    eos = reference_eos()
    sigma = sound_speed(eos)
    R, tau = 1.0, 1.0
    thr = linear_tau_case1_threshold(R, sigma, tau)
    amp_v = margin * thr / (SHAPE_1D_LINEAR * R ** 2)
    scen = make_bump_scenario(
        eos=eos,
        geometry=Geometry.cartesian1d(),
        R=R,
        amp_rho=0.0,
        amp_v=amp_v,
        grid=GridSpec(extent=2.6, cells=cells),
        detector=CERTIFIED_DETECTOR,
    )
    return CertifiedCase("cert-linear-tau-1d", scen, FAMILY_LINEAR_1D_TAU, tau)


def certified_linear_infinite_case(cells: int = REFERENCE_CELLS, margin: float = CERTIFIED_MARGIN) -> CertifiedCase:
    """1-D identity-weight horizon-free criterion (finite-time verdict)."""
    eos = reference_eos()
    sigma = sound_speed(eos)
    R = 1.0
    thr = linear_1d_threshold(R, sigma)
    amp_v = margin * thr / (SHAPE_1D_LINEAR * R ** 2)
    scen = make_bump_scenario(
        eos=eos,
        geometry=Geometry.cartesian1d(),
        R=R,
        amp_rho=0.0,
        amp_v=amp_v,
        grid=GridSpec(extent=2.6, cells=cells),
        detector=CERTIFIED_DETECTOR,
    )
    return CertifiedCase("cert-linear-infinite-1d", scen, FAMILY_LINEAR_1D, tau=1.0)


def certified_power_radial_case(cells: int = REFERENCE_CELLS, margin: float = CERTIFIED_MARGIN) -> CertifiedCase:
    """Radial cubic-weight criterion, case 1, N = 3, at tau = 1."""
    eos = reference_eos()
    sigma = sound_speed(eos)
    R, tau, N = 1.0, 1.0, 3
    thr = power_radial_case1_threshold(N, R, sigma, tau)
    amp_v = margin * thr / (SHAPE_RADIAL_CUBIC * R ** 4)
    scen = make_bump_scenario(
        eos=eos,
        geometry=Geometry.radial(N),
        R=R,
        amp_rho=0.0,
        amp_v=amp_v,
        grid=GridSpec(extent=2.6, cells=cells),
        detector=CERTIFIED_DETECTOR,
    )
    return CertifiedCase("cert-power-radial-n3", scen, FAMILY_POWER_RADIAL, tau)


def certified_general_radial_case(cells: int = REFERENCE_CELLS, margin: float = CERTIFIED_MARGIN) -> CertifiedCase:
    """General radial criterion with the identity weight, N = 1, a = 4."""
    eos = EosParams(K=0.5, gamma=2.0, rho_bar=0.5)
    R, tau, a = 1.0, 1.0, 4.0
    geom = Geometry.radial(1)
    f = linear()
    strict, horizon = general_condition_thresholds(f, a, eos, R, tau, geom)
    target = margin * max(strict, horizon)
    amp_v = target / (SHAPE_RADIAL_LINEAR * R ** 2)
    scen = make_bump_scenario(
        eos=eos,
        geometry=geom,
        R=R,
        amp_rho=0.0,
        amp_v=amp_v,
        grid=GridSpec(extent=2.0, cells=cells),
        detector=CERTIFIED_DETECTOR,
    )
    return CertifiedCase("cert-general-radial-n1", scen, FAMILY_GENERAL_RADIAL, tau, f=f, a=a)


def certified_general_1d_case(cells: int = REFERENCE_CELLS, margin: float = CERTIFIED_MARGIN) -> CertifiedCase:
    """General 1-D criterion with an exponential weight.

    beta and a sit near the minimizer of the combined threshold divided
    by the bump shape integral, which keeps the certified amplitude (and
    so the Mach number of the run) as small as the criterion allows.
    """
    eos = EosParams(K=0.25, gamma=2.0, rho_bar=0.5)
    R, tau, a, beta = 1.0, 1.0, 3.5, 2.0
    geom = Geometry.cartesian1d()
    f = exponential(beta)
    strict, horizon = general_condition_thresholds(f, a, eos, R, tau, geom)
    target = margin * max(strict, horizon)
    # H(0) = amp_v * R * 2 int_0^1 g(y) sinh(beta R y) dy for the odd bump
    shape = 2.0 * integrate_fn(
        lambda y: y * (1.0 - y ** 2) ** 2 * math.sinh(beta * R * y), 0.0, 1.0, _SHAPE_RULE
    ) * R
    amp_v = target / shape
    scen = make_bump_scenario(
        eos=eos,
        geometry=geom,
        R=R,
        amp_rho=0.0,
        amp_v=amp_v,
        grid=GridSpec(extent=2.0, cells=cells),
        detector=CERTIFIED_DETECTOR,
    )
    return CertifiedCase("cert-general-1d-exp", scen, FAMILY_GENERAL_1D, tau, f=f, a=a)


def certified_suite(cells: int = REFERENCE_CELLS) -> list[CertifiedCase]:
    """Every certified preset shipped with the package."""
    return [
        certified_linear_tau_case(cells),
        certified_linear_infinite_case(cells),
        certified_power_radial_case(cells),
        certified_general_radial_case(cells),
        certified_general_1d_case(cells),
    ]


PRESETS = {
    "ref-radial3": lambda cells=REFERENCE_CELLS: reference_scenario(Geometry.radial(3), cells),
    "ref-radial1": lambda cells=REFERENCE_CELLS: reference_scenario(Geometry.radial(1), cells),
    "ref-1d": lambda cells=REFERENCE_CELLS: reference_scenario(Geometry.cartesian1d(), cells),
    "constant-1d": lambda cells=256: constant_scenario(Geometry.cartesian1d(), cells),
    "constant-radial3": lambda cells=256: constant_scenario(Geometry.radial(3), cells),
    "cert-linear-tau-1d": lambda cells=REFERENCE_CELLS: certified_linear_tau_case(cells).scenario,
    "cert-linear-infinite-1d": lambda cells=REFERENCE_CELLS: certified_linear_infinite_case(cells).scenario,
    "cert-power-radial-n3": lambda cells=REFERENCE_CELLS: certified_power_radial_case(cells).scenario,
    "cert-general-radial-n1": lambda cells=REFERENCE_CELLS: certified_general_radial_case(cells).scenario,
    "cert-general-1d-exp": lambda cells=REFERENCE_CELLS: certified_general_1d_case(cells).scenario,
}
