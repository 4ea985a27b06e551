"""NumPy implementations of the hot kernels.

Fallback backend used when the compiled extension is unavailable (or when
QCSKEW_PURE_PYTHON is set).  Formulas mirror the compiled versions
operation-for-operation so the two backends agree to rounding noise.
"""

import math

import numpy as np

BACKEND = "python"


def skew_batch(a, b, c):
    """Longest/shortest side ratio per vertex triple; inf where degenerate."""
    dab = np.sqrt((a.real - b.real) ** 2 + (a.imag - b.imag) ** 2)
    dbc = np.sqrt((b.real - c.real) ** 2 + (b.imag - c.imag) ** 2)
    dca = np.sqrt((c.real - a.real) ** 2 + (c.imag - a.imag) ** 2)
    hi = np.maximum(np.maximum(dab, dbc), dca)
    lo = np.minimum(np.minimum(dab, dbc), dca)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(lo > 0.0, hi / lo, np.inf)
    return out


def circle_minmax(base, pts):
    """(dmin, dmax, imin, imax) of |pts[i] - base|, first index on ties."""
    d = np.sqrt((pts.real - base.real) ** 2 + (pts.imag - base.imag) ** 2)
    imin = int(np.argmin(d))
    imax = int(np.argmax(d))
    return float(d[imin]), float(d[imax]), imin, imax


def ratio_scan(mu, n):
    """Grid pass of max |z + mu*conj(z)| / |w + mu*conj(w)|, w = z*e^{i pi/3},
    over n equally spaced unit z.  Returns (best_ratio, best_theta, best_index).
    """
    step = 2.0 * math.pi / n
    theta = step * np.arange(n)
    ap = (1.0 + mu) ** 2
    bm = (1.0 - mu) ** 2
    num = ap * np.cos(theta) ** 2 + bm * np.sin(theta) ** 2
    ts = theta + math.pi / 3.0
    den = ap * np.cos(ts) ** 2 + bm * np.sin(ts) ** 2
    r2 = num / den
    i = int(np.argmax(r2))
    return float(math.sqrt(r2[i])), float(theta[i]), i


def polygon_diameter(pts):
    """Max pairwise distance of a point sequence; returns (diam, i, j) with
    i < j, first pair in row-major upper-triangle order on ties."""
    n = pts.shape[0]
    x = pts.real
    y = pts.imag
    best = -1.0
    bi = 0
    bj = 0
    for i in range(n - 1):
        d2 = (x[i + 1 :] - x[i]) ** 2 + (y[i + 1 :] - y[i]) ** 2
        k = int(np.argmax(d2))
        if d2[k] > best:
            best = float(d2[k])
            bi = i
            bj = i + 1 + k
    return math.sqrt(best) if best > 0.0 else 0.0, bi, bj


def polygon_area_signed(pts):
    """Shoelace signed area of the closed polygon pts[0..n-1]."""
    x = pts.real
    y = pts.imag
    xn = np.roll(x, -1)
    yn = np.roll(y, -1)
    return float(0.5 * np.sum(x * yn - xn * y))
