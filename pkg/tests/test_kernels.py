import math

import numpy as np
import pytest

from qcskew import _kernels_py
from qcskew.kernels import BACKEND, available_backends

try:
    from qcskew import _kernels_cy
except ImportError:
    _kernels_cy = None

BACKENDS = [_kernels_py] + ([_kernels_cy] if _kernels_cy else [])


@pytest.fixture
def tri_data(rng):
    n = 5000
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    b = a + rng.standard_normal(n) * 0.5 + 1j * rng.standard_normal(n) * 0.5
    c = a + rng.standard_normal(n) * 0.5 + 1j * rng.standard_normal(n) * 0.5
    return a, b, c


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.BACKEND)
class TestEachBackend:
    def test_skew_batch_against_direct(self, impl, tri_data):
        a, b, c = tri_data
        out = impl.skew_batch(a, b, c)
        for i in (0, 17, 4999):
            sides = sorted((abs(a[i] - b[i]), abs(b[i] - c[i]), abs(c[i] - a[i])))
            assert out[i] == pytest.approx(sides[2] / sides[0], rel=1e-12)

    def test_skew_batch_degenerate(self, impl):
        a = np.array([1 + 1j])
        out = impl.skew_batch(a, a.copy(), np.array([2 + 2j]))
        assert np.isinf(out[0])

    def test_circle_minmax(self, impl):
        pts = np.array([3 + 0j, 0 + 4j, 1 + 0j, 0 - 2j])
        dmin, dmax, imin, imax = impl.circle_minmax(0j, pts)
        assert (dmin, dmax, imin, imax) == (1.0, 4.0, 2, 1)

    def test_ratio_scan_conformal(self, impl):
        best, theta, idx = impl.ratio_scan(0.0, 1000)
        assert best == pytest.approx(1.0)

    def test_polygon_square(self, impl):
        sq = np.array([0j, 1 + 0j, 1 + 1j, 1j])
        assert impl.polygon_area_signed(sq) == pytest.approx(1.0)
        diam, i, j = impl.polygon_diameter(sq)
        assert diam == pytest.approx(math.sqrt(2.0))
        assert (i, j) in {(0, 2), (1, 3)}

    def test_polygon_orientation_sign(self, impl):
        sq = np.array([0j, 1j, 1 + 1j, 1 + 0j])  # clockwise
        assert impl.polygon_area_signed(sq) == pytest.approx(-1.0)


@pytest.mark.skipif(_kernels_cy is None, reason="compiled backend not built")
class TestBackendParity:
    def test_available(self):
        assert available_backends() == ["cython", "python"]
        assert BACKEND in ("cython", "python")

    def test_skew_batch(self, tri_data):
        a, b, c = tri_data
        np.testing.assert_allclose(_kernels_cy.skew_batch(a, b, c),
                                   _kernels_py.skew_batch(a, b, c), rtol=1e-13)

    def test_circle_minmax(self, rng):
        pts = rng.standard_normal(4096) + 1j * rng.standard_normal(4096)
        got_c = _kernels_cy.circle_minmax(0.1 + 0.2j, pts)
        got_p = _kernels_py.circle_minmax(0.1 + 0.2j, pts)
        assert got_c[2:] == got_p[2:]
        np.testing.assert_allclose(got_c[:2], got_p[:2], rtol=1e-14)

    @pytest.mark.parametrize("mu", [0.05, 0.5, 0.95])
    def test_ratio_scan(self, mu):
        rc = _kernels_cy.ratio_scan(mu, 10**5)
        rp = _kernels_py.ratio_scan(mu, 10**5)
        assert rc[2] == rp[2]
        assert rc[0] == pytest.approx(rp[0], rel=1e-13)

    def test_polygon_diameter(self, rng):
        pts = rng.standard_normal(2000) + 1j * rng.standard_normal(2000)
        dc = _kernels_cy.polygon_diameter(pts)
        dp = _kernels_py.polygon_diameter(pts)
        assert dc[1:] == dp[1:]
        assert dc[0] == pytest.approx(dp[0], rel=1e-14)

    def test_polygon_area(self, rng):
        pts = np.exp(1j * np.sort(rng.uniform(0, 2 * math.pi, 3000)))
        ac = _kernels_cy.polygon_area_signed(pts)
        ap = _kernels_py.polygon_area_signed(pts)
        assert ac == pytest.approx(ap, rel=1e-12)
