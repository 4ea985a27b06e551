import math
from fractions import Fraction

import numpy as np
import pytest

from qcskew.constants import (
    Rt3,
    SQRT3_HI,
    SQRT3_LO,
    constant_chain,
    decimal_from_log,
    log_H_direct,
    verify_static_geometry,
)


class TestEnclosure:
    def test_certified(self):
        assert SQRT3_LO**2 < 3 < SQRT3_HI**2
        assert SQRT3_HI - SQRT3_LO == Fraction(1, 10**7)


class TestRt3:
    def test_product(self):
        # (1 + sqrt3)(2 - sqrt3) = -1 + sqrt3
        got = Rt3.of(1, 1) * Rt3.of(2, -1)
        assert got == Rt3.of(-1, 1)

    def test_signs(self):
        assert Rt3.of(0, 1).certified_sign() == 1
        assert Rt3.of(Fraction(-17, 10), 1).certified_sign() == 1
        assert Rt3.of(Fraction(-18, 10), 1).certified_sign() == -1
        assert Rt3.of(0, 0).certified_sign() == 0
        assert float(Rt3.of(0, 1)) == pytest.approx(math.sqrt(3.0), abs=1e-7)

    def test_sign_needs_wider_enclosure(self):
        # a value within the enclosure width of zero cannot be signed
        with pytest.raises(ArithmeticError):
            Rt3.of(-SQRT3_LO - Fraction(1, 10**9), 1).certified_sign()

    def test_bounds_directed(self):
        lo, hi = Rt3.of(1, -2).bounds()
        assert lo < hi
        assert lo == 1 - 2 * SQRT3_HI and hi == 1 - 2 * SQRT3_LO


class TestConstantChain:
    def test_minimal_chain(self):
        cc = constant_chain(1.0, 1)
        assert math.exp(cc.log_C) == pytest.approx(3.0, rel=1e-12)
        assert math.exp(cc.log_c) == pytest.approx(1.0, rel=1e-12)
        assert math.exp(cc.log_alpha) == pytest.approx(1.0 / 9.0, rel=1e-12)
        assert cc.H_float == pytest.approx(81.0, rel=1e-12)
        assert cc.C == 3.0

    def test_full_chain_at_sigma_one(self):
        cc = constant_chain(1.0, 2**18)
        # c = 2^-18, C = 3, alpha = 1/(9 * 2^18), H = 81 * 2^36
        want = math.log(81.0) + 36.0 * math.log(2.0)
        assert cc.log_H == pytest.approx(want, abs=1e-9, rel=1e-9)
        assert cc.H_decimal == "5.566277616e+12"
        assert cc.H_float == pytest.approx(81.0 * 2.0**36, rel=1e-12)

    def test_invariant_links(self):
        for sigma in (1.0, 1.3, 2.0, 7.5):
            cc = constant_chain(sigma, 2**18)
            assert cc.log_alpha == pytest.approx(cc.log_c - math.log(2 * sigma + 1) - cc.log_C, abs=1e-12)
            assert cc.log_H == -2.0 * cc.log_alpha

    @pytest.mark.parametrize("sigma", [1.0, 1.01, 1.5, 2.0, 5.0, 10.0])
    @pytest.mark.parametrize("N", [1, 64, 2**18])
    def test_two_evaluation_orders(self, sigma, N):
        cc = constant_chain(sigma, N)
        alt = log_H_direct(sigma, N)
        assert cc.log_H == pytest.approx(alt, abs=1e-9, rel=1e-9)

    def test_monotone_in_sigma_and_n(self):
        sigmas = np.linspace(1.0, 6.0, 40)
        vals = [constant_chain(s, 2**18).log_H for s in sigmas]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        ns = [1, 2, 16, 1024, 2**18]
        vals_n = [constant_chain(1.5, n).log_H for n in ns]
        assert all(b > a for a, b in zip(vals_n, vals_n[1:]))

    def test_validation(self):
        with pytest.raises(ValueError):
            constant_chain(0.99)
        with pytest.raises(ValueError):
            constant_chain(1.0, 0)

    def test_huge_sigma_renders(self):
        cc = constant_chain(2.0, 2**18)
        assert not math.isfinite(cc.H_float) or cc.H_float == math.inf
        mant, exp = cc.H_decimal.split("e")
        assert int(exp) == 157841
        assert 1.0 <= float(mant) < 10.0


class TestDecimalFromLog:
    def test_small_value(self):
        assert decimal_from_log(math.log(81.0)) == "8.100000000e+1"

    def test_carry(self):
        # mantissa that rounds up to 10 must carry into the exponent
        assert decimal_from_log(math.log(9.9999999999), digits=3).startswith("1.000e+1")


@pytest.fixture(scope="module")
def report():
    return verify_static_geometry()


class TestStaticGeometry:
    def test_all_pass(self, report):
        assert report.passed
        assert len(report.checks) >= 15

    def test_inequalities_have_positive_margin(self, report):
        for chk in report.checks:
            if chk.relation != "==":
                assert chk.margin > 0.0, chk.name

    def test_identities_exact(self, report):
        eq = [c for c in report.checks if c.relation == "=="]
        assert len(eq) >= 6
        for chk in eq:
            assert chk.passed and chk.margin == 0.0, chk.name

    def test_boundary_distance_values(self, report):
        chk = next(c for c in report.checks if c.name == "dist(p, boundary) > 1/4 + 2^-6")
        assert chk.lhs == pytest.approx(85 * math.sqrt(3) / 512, abs=1e-7)
        assert chk.rhs == 0.265625
        assert chk.margin == pytest.approx(0.02192, abs=1e-4)

    def test_centroid_offset_value(self, report):
        chk = next(c for c in report.checks if "xi - p" in c.name)
        assert chk.lhs == pytest.approx(math.sqrt(3) / 1536, abs=1e-9)
