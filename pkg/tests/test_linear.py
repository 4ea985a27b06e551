import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcskew.linear import (
    BeltramiParams,
    K_of_sigma,
    extremal_directions,
    kappa_at,
    linear_skew,
    mu_from_skew,
    oracle_max_ratio,
    ratio_at,
)

MU_GRID = [0.05 * k for k in range(1, 20)]


class TestBeltramiParams:
    def test_nu(self):
        assert BeltramiParams(0.5).nu == pytest.approx(2.5)
        assert BeltramiParams(0.0).nu == math.inf
        assert all(BeltramiParams(m).nu > 2.0 for m in np.linspace(0.01, 0.99, 50))

    def test_validation(self):
        with pytest.raises(ValueError):
            BeltramiParams(1.0)


class TestLinearSkew:
    def test_conformal_case(self):
        assert linear_skew(0.0) == 1.0

    def test_against_brute_force(self):
        # the brute-force maximizer is the independent route
        for mu in (0.1, 0.5, 0.9):
            assert linear_skew(mu) == pytest.approx(oracle_max_ratio(mu, 10**6), rel=1e-9)

    def test_strictly_increasing(self):
        vals = [linear_skew(mu) for mu in np.linspace(0.005, 0.995, 100)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_range_validation(self):
        for bad in (-0.1, 1.0, 1.5):
            with pytest.raises(ValueError):
                linear_skew(bad)


class TestMuFromSkew:
    def test_conformal_limit(self):
        assert mu_from_skew(1.0) == 0.0

    def test_tau_two_closed_form(self):
        # mu(2) = (sqrt(21) - 2 sqrt(3)) / 3, from the defining quadratic
        expect = (math.sqrt(21.0) - 2.0 * math.sqrt(3.0)) / 3.0
        assert mu_from_skew(2.0) == pytest.approx(expect, rel=1e-12)

    def test_printed_form_agrees(self):
        # rationalized arrangement vs the direct formula, away from tau = 1
        for tau in (1.5, 2.0, 5.0, 20.0):
            direct = (math.sqrt(tau**4 + tau**2 + 1.0) - math.sqrt(3.0) * tau) / (tau**2 - 1.0)
            assert mu_from_skew(tau) == pytest.approx(direct, rel=1e-12)

    def test_roundtrip(self):
        for mu in np.linspace(0.01, 0.99, 99):
            assert mu_from_skew(linear_skew(mu)) == pytest.approx(mu, abs=1e-9)

    def test_validation(self):
        with pytest.raises(ValueError):
            mu_from_skew(0.999)


class TestKOfSigma:
    def test_endpoint(self):
        assert K_of_sigma(1.0) == pytest.approx(1.0, abs=1e-12)

    def test_sigma_two(self):
        assert K_of_sigma(2.0) == pytest.approx((3.0 + math.sqrt(21.0)) / (2.0 * math.sqrt(3.0)), rel=1e-12)

    def test_dilatation_of_half(self):
        assert K_of_sigma(linear_skew(0.5)) == pytest.approx(3.0, rel=1e-6)

    def test_consistency_identity(self):
        for mu in MU_GRID:
            assert K_of_sigma(linear_skew(mu)) == pytest.approx((1.0 + mu) / (1.0 - mu), abs=1e-9, rel=1e-9)

    def test_strictly_increasing(self):
        grid = np.linspace(1.0, 10.0, 1000)
        vals = [K_of_sigma(s) for s in grid]
        assert vals[0] == pytest.approx(1.0, abs=1e-12)
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert all(v >= 1.0 for v in vals)

    def test_validation(self):
        with pytest.raises(ValueError):
            K_of_sigma(0.5)


class TestExtremalDirections:
    @pytest.mark.parametrize("mu", [0.1, 0.5, 0.9])
    def test_unit_modulus(self, mu):
        zmax, zmin = extremal_directions(mu)
        assert abs(zmax) == pytest.approx(1.0, abs=1e-12)
        assert abs(zmin) == pytest.approx(1.0, abs=1e-12)

    def test_half_case_coordinates(self):
        # nu = 2.5: cos x = -0.4 and |z| = 1 identically
        zmax, zmin = extremal_directions(0.5)
        assert zmax.real == pytest.approx(-0.4, rel=1e-12)
        assert zmin.real == pytest.approx(-0.4, rel=1e-12)
        assert zmin == zmax.conjugate()

    def test_maximizer_beats_random_probes(self, rng):
        mu = 0.37
        zmax, _ = extremal_directions(mu)
        kmax = kappa_at(mu, zmax)
        angles = rng.uniform(0.0, 2.0 * math.pi, 10**4)
        probes = np.exp(1j * angles)
        assert all(kappa_at(mu, complex(z)) <= kmax * (1.0 + 1e-12) for z in probes)

    @pytest.mark.parametrize("mu", [0.05, 0.3, 0.5, 0.8, 0.95])
    def test_critical_values_reciprocal(self, mu):
        zmax, zmin = extremal_directions(mu)
        assert kappa_at(mu, zmax) * kappa_at(mu, zmin) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("mu", [0.2, 0.5, 0.9])
    def test_kappa_real_at_critical_directions(self, mu):
        # the complex form of the objective has vanishing imaginary part there
        nu = mu + 1.0 / mu
        alpha = cmath.exp(1j * math.pi / 3.0)
        for z in extremal_directions(mu):
            val = (nu + alpha * z + (alpha * z).conjugate()) / (nu + alpha.conjugate() * z + (alpha.conjugate() * z).conjugate())
            assert abs(val.imag) < 1e-14

    def test_max_kappa_is_skew_squared(self):
        mu = 0.5
        zmax, _ = extremal_directions(mu)
        assert kappa_at(mu, zmax) == pytest.approx(linear_skew(mu) ** 2, rel=1e-12)


class TestOracle:
    def test_conformal(self):
        assert oracle_max_ratio(0.0, 1000) == 1.0

    def test_sweep_matches_closed_form(self):
        for mu in MU_GRID:
            c = linear_skew(mu)
            assert abs(oracle_max_ratio(mu, 10**5) - c) / c <= 1e-6

    def test_validation(self):
        with pytest.raises(ValueError):
            oracle_max_ratio(1.0)
        with pytest.raises(ValueError):
            oracle_max_ratio(0.5, 2)

    @given(st.floats(0.01, 0.99), st.floats(0.0, 2.0 * math.pi))
    @settings(max_examples=200)
    def test_reflection_symmetry(self, mu, ang):
        # the ratio at z and at conj(z) e^{-i pi/3} are exact reciprocals,
        # which is why the two critical values multiply to 1
        z = cmath.exp(1j * ang)
        mirrored = z.conjugate() * cmath.exp(-1j * math.pi / 3.0)
        assert ratio_at(mu, z) * ratio_at(mu, mirrored) == pytest.approx(1.0, rel=1e-9)
