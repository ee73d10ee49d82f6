import math

import numpy as np
import pytest

from eulerblowup.model import (
    BumpProfile,
    DetectorParams,
    EosParams,
    Geometry,
    GridSpec,
    LINEAR,
    NONNEG_INCREASING,
    POWER_LAW,
    exponential,
    linear,
    make_bump_scenario,
    nonneg_increasing,
    power_law,
    pressure,
    radial_vanishing,
    riemann_variable,
    sound_speed,
)

SQRT2 = math.sqrt(2.0)


class TestEos:
    def test_validation(self):
        with pytest.raises(ValueError):
            EosParams(0.0, 2.0, 1.0)
        with pytest.raises(ValueError):
            EosParams(1.0, 0.9, 1.0)
        with pytest.raises(ValueError):
            EosParams(1.0, 2.0, 0.0)

    def test_pressure_closed_form(self):
        eos = EosParams(2.0, 1.4, 1.0)
        assert pressure(eos, 1.5) == pytest.approx(3.5282370675740204, rel=1e-14)

    def test_pressure_rejects_negative_density(self):
        with pytest.raises(ValueError):
            pressure(EosParams(1.0, 2.0, 1.0), -0.1)

    def test_pressure_vectorizes(self):
        eos = EosParams(1.0, 2.0, 1.0)
        rho = np.array([0.0, 1.0, 2.0])
        np.testing.assert_allclose(pressure(eos, rho), rho**2)

    def test_sound_speed_value(self):
        assert sound_speed(EosParams(1.0, 2.0, 1.0)) == pytest.approx(SQRT2, rel=1e-15)
        assert sound_speed(EosParams(0.5, 2.0, 0.5)) == pytest.approx(math.sqrt(0.5), rel=1e-15)

    def test_sound_speed_needs_gamma_above_one(self):
        with pytest.raises(ValueError):
            sound_speed(EosParams(1.0, 1.0, 1.0))


class TestRiemannVariable:
    def test_vanishes_at_background(self):
        eos = EosParams(1.3, 1.7, 0.8)
        assert riemann_variable(eos, eos.rho_bar) == pytest.approx(0.0, abs=1e-15)

    def test_gamma_two_value(self):
        # v = 2*(sqrt(2*rho) - sqrt(2)) for K=1, gamma=2, rho_bar=1
        eos = EosParams(1.0, 2.0, 1.0)
        assert riemann_variable(eos, 2.0) == pytest.approx(1.1715728752538097, rel=1e-14)

    def test_general_gamma_value(self):
        eos = EosParams(1.0, 1.4, 1.0)
        assert riemann_variable(eos, 1.5) == pytest.approx(0.49974173782532105, rel=1e-13)

    def test_sign_follows_density_perturbation(self):
        eos = EosParams(1.0, 2.0, 1.0)
        vals = riemann_variable(eos, np.array([0.5, 1.0, 1.5]))
        assert vals[0] < 0 < vals[2]
        assert vals[1] == pytest.approx(0.0, abs=1e-15)

    def test_requires_gamma_above_one(self):
        with pytest.raises(ValueError):
            riemann_variable(EosParams(1.0, 1.0, 1.0), 1.0)


class TestGeometryAndGrid:
    def test_labels_and_flags(self):
        r3 = Geometry.radial(3)
        assert r3.is_radial and r3.ndim == 3 and r3.label() == "radial3"
        c = Geometry.cartesian1d()
        assert not c.is_radial and c.ndim == 1 and c.label() == "cartesian1d"

    def test_invalid_geometry(self):
        with pytest.raises(ValueError):
            Geometry("spherical", 3)
        with pytest.raises(ValueError):
            Geometry("cartesian1d", 2)
        with pytest.raises(ValueError):
            Geometry.radial(0)

    def test_radial_grid(self):
        grid = GridSpec(2.0, 100)
        geom = Geometry.radial(2)
        assert grid.spacing(geom) == pytest.approx(0.02)
        centers = grid.centers(geom)
        assert centers[0] == pytest.approx(0.01)
        assert centers[-1] == pytest.approx(1.99)

    def test_cartesian_grid_spans_symmetric_interval(self):
        grid = GridSpec(2.0, 100)
        geom = Geometry.cartesian1d()
        assert grid.spacing(geom) == pytest.approx(0.04)
        centers = grid.centers(geom)
        assert centers[0] == pytest.approx(-1.98)
        assert centers[-1] == pytest.approx(1.98)
        np.testing.assert_allclose(centers, -centers[::-1], atol=1e-15)

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            GridSpec(0.0, 64)
        with pytest.raises(ValueError):
            GridSpec(1.0, 8)


class TestBumpProfile:
    def test_even_bump_peak_and_support(self):
        bump = BumpProfile(0.3, 2.0)
        assert bump(0.0) == pytest.approx(0.3)
        assert bump(2.0) == 0.0
        assert bump(2.5) == 0.0
        assert bump(-1.0) == bump(1.0)

    def test_c1_join_at_support_edge(self):
        bump = BumpProfile(1.0, 1.0)
        eps = 1e-6
        # value and one-sided slope both vanish at the edge
        assert bump(1.0 - eps) == pytest.approx(0.0, abs=1e-11)
        assert (bump(1.0) - bump(1.0 - eps)) / eps == pytest.approx(0.0, abs=1e-5)

    def test_odd_bump_antisymmetric(self):
        bump = BumpProfile(2.0, 1.5, odd=True)
        xs = np.linspace(-1.5, 1.5, 31)
        np.testing.assert_allclose(bump(xs), -bump(-xs), atol=1e-15)

    def test_odd_bump_extremum(self):
        # max of y*(1-y^2)^2 on [0,1] sits at y = 1/sqrt(5), value 16/(25*sqrt(5))
        bump = BumpProfile(1.0, 1.0, odd=True)
        y = 1.0 / math.sqrt(5.0)
        assert bump(y) == pytest.approx(16.0 / (25.0 * math.sqrt(5.0)), rel=1e-14)
        xs = np.linspace(0.0, 1.0, 20001)
        assert np.max(bump(xs)) <= bump(y) + 1e-9


class TestDetectorParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            DetectorParams(slope_factor=0.0)
        with pytest.raises(ValueError):
            DetectorParams(slope_factor=1.5)
        with pytest.raises(ValueError):
            DetectorParams(dt_floor=0.0)
        with pytest.raises(ValueError):
            DetectorParams(sample_interval=-1.0)


class TestScenarioConstruction:
    eos = EosParams(1.0, 2.0, 1.0)

    def test_round_trip_amplitudes(self):
        scen = make_bump_scenario(
            self.eos, Geometry.radial(3), 1.0, 0.1, -0.2, GridSpec(2.0, 256)
        )
        assert scen.amp_rho == pytest.approx(0.1)
        assert scen.amp_v == pytest.approx(-0.2)
        assert not scen.rho0.odd and scen.v0.odd
        assert "radial3" in scen.label()

    def test_rejects_vacuum(self):
        with pytest.raises(ValueError, match="vacuum"):
            make_bump_scenario(
                self.eos, Geometry.cartesian1d(), 1.0, -1.0, 0.0, GridSpec(2.0, 256)
            )

    def test_rejects_grid_smaller_than_bump(self):
        with pytest.raises(ValueError, match="extent"):
            make_bump_scenario(
                self.eos, Geometry.radial(1), 1.5, 0.1, 0.0, GridSpec(1.0, 256)
            )

    def test_rejects_coarse_grid(self):
        with pytest.raises(ValueError, match="coarse"):
            make_bump_scenario(
                self.eos, Geometry.radial(1), 0.05, 0.1, 0.0, GridSpec(2.0, 256)
            )

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(ValueError):
            make_bump_scenario(
                self.eos, Geometry.radial(1), 0.0, 0.1, 0.0, GridSpec(2.0, 256)
            )


class TestTestingFunctions:
    def test_power_law_basics(self):
        f = power_law(2.0)
        assert f.cls == POWER_LAW and f.power == 2.0
        assert f.f(3.0) == pytest.approx(9.0)
        assert f.f_prime(3.0) == pytest.approx(6.0)
        # f^2/f' = r^3/2
        assert f.weight_integrand(2.0) == pytest.approx(4.0)

    def test_weight_integrand_removable_zero(self):
        f = power_law(3.0)
        assert f.weight_integrand(0.0) == 0.0

    def test_linear_closed_forms(self):
        f = linear()
        assert f.cls == LINEAR
        U = 1.0 + SQRT2
        assert f.analytic_B(1.0, SQRT2, 1.0, Geometry.radial(3)) == pytest.approx(U**3 / 3.0)
        assert f.analytic_B(1.0, SQRT2, 1.0, Geometry.cartesian1d()) == pytest.approx(
            2.0 * U**3 / 3.0
        )

    def test_exponential_is_cartesian_only(self):
        f = exponential(2.0)
        assert f.cls == NONNEG_INCREASING
        U = 1.0 + SQRT2
        assert f.analytic_B(1.0, SQRT2, 1.0, Geometry.cartesian1d()) == pytest.approx(
            2.0 * math.sinh(2.0 * U) / 4.0
        )
        with pytest.raises(ValueError):
            f.analytic_B(1.0, SQRT2, 1.0, Geometry.radial(3))

    def test_factory_parameter_validation(self):
        with pytest.raises(ValueError):
            power_law(0.0)
        with pytest.raises(ValueError):
            exponential(0.0)

    def test_decreasing_weight_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            radial_vanishing(lambda x: -np.asarray(x), lambda x: -np.ones_like(np.asarray(x)))

    def test_radial_weight_must_vanish_at_origin(self):
        with pytest.raises(ValueError, match="vanish"):
            radial_vanishing(
                lambda x: np.asarray(x) + 1.0, lambda x: np.ones_like(np.asarray(x))
            )

    def test_cartesian_weight_must_be_nonnegative(self):
        with pytest.raises(ValueError, match="non-negative"):
            nonneg_increasing(lambda x: np.asarray(x), lambda x: np.ones_like(np.asarray(x)))

    def test_wrong_analytic_form_caught(self):
        with pytest.raises(ValueError, match="disagrees"):
            radial_vanishing(
                lambda x: np.asarray(x, dtype=float) ** 2,
                lambda x: 2.0 * np.asarray(x, dtype=float),
                analytic_B=lambda R, sigma, t, geom: 999.0,
            )

    def test_custom_weight_accepted(self):
        f = radial_vanishing(
            lambda x: np.sinh(np.asarray(x, dtype=float)),
            lambda x: np.cosh(np.asarray(x, dtype=float)),
            name="sinh",
        )
        assert f.weight_integrand(1.0) == pytest.approx(
            math.sinh(1.0) ** 2 / math.cosh(1.0), rel=1e-14
        )
