"""Closed forms for the normalized linear map f(z) = z + mu * conj(z).

For 0 <= mu < 1 the map is an orientation-preserving linear homeomorphism.
Writing nu = mu + 1/mu, its maximal image skew over equilateral triangles is

    tau^2 = (nu^2 - 1 + sqrt(3 (nu^2 - 1))) / (nu^2 - 1 - sqrt(3 (nu^2 - 1)))

attained along an explicit pair of critical directions, and the dilatation of
a map with equilateral skew bound sigma is

    K(sigma) = (sigma^2 - 1 + sqrt(sigma^4 + sigma^2 + 1)) / (sqrt(3) sigma).

``oracle_max_ratio`` maximizes the defining ratio by brute force on the unit
circle and is the independent cross-check for ``linear_skew``; the two must
agree to 1e-6 relative across the working range of mu.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .kernels import ratio_scan

_ROT3 = cmath.exp(1j * math.pi / 3.0)
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _validate_mu_open(mu: float) -> None:
    if not (0.0 < mu < 1.0):
        raise ValueError(f"mu must lie in (0, 1), got {mu}")


@dataclass(frozen=True)
class BeltramiParams:
    """Stretch parameter of the normalized linear map and its companion
    nu = mu + 1/mu (> 2 whenever 0 < mu < 1)."""

    mu: float

    def __post_init__(self):
        if not (0.0 <= self.mu < 1.0):
            raise ValueError(f"mu must lie in [0, 1), got {self.mu}")

    @property
    def nu(self) -> float:
        if self.mu == 0.0:
            return math.inf
        return self.mu + 1.0 / self.mu


def linear_skew(mu: float) -> float:
    """Maximal image skew tau of z + mu*conj(z) over equilateral triangles.

    mu = 0 is the conformal case and returns exactly 1; mu must satisfy
    0 <= mu < 1.
    """
    if mu == 0.0:
        return 1.0
    _validate_mu_open(mu)
    nu = mu + 1.0 / mu
    y = math.sqrt((nu * nu - 1.0) / 3.0)
    return math.sqrt((y + 1.0) / (y - 1.0))


def mu_from_skew(tau: float) -> float:
    """Stretch parameter mu of the normalized linear map with skew tau.

    Evaluates (tau^2-1) / (sqrt(tau^4+tau^2+1) + sqrt(3) tau), the
    cancellation-free arrangement of
    (sqrt(tau^4+tau^2+1) - sqrt(3) tau) / (tau^2-1); tau = 1 returns 0.
    """
    if not (tau >= 1.0):
        raise ValueError(f"tau must be >= 1, got {tau}")
    if tau == 1.0:
        return 0.0
    t2 = tau * tau
    return (t2 - 1.0) / (math.sqrt(t2 * t2 + t2 + 1.0) + math.sqrt(3.0) * tau)


def K_of_sigma(sigma: float) -> float:
    """Dilatation bound K(sigma) for maps of equilateral image skew <= sigma."""
    if not (sigma >= 1.0):
        raise ValueError(f"sigma must be >= 1, got {sigma}")
    s2 = sigma * sigma
    return (s2 - 1.0 + math.sqrt(s2 * s2 + s2 + 1.0)) / (math.sqrt(3.0) * sigma)


def ratio_at(mu: float, z: complex) -> float:
    """|f(z)| / |f(z e^{i pi/3})| for f(z) = z + mu*conj(z), any z != 0."""
    w = z * _ROT3
    return abs(z + mu * z.conjugate()) / abs(w + mu * w.conjugate())


def kappa_at(mu: float, z: complex) -> float:
    """Squared-direction objective whose critical points give the extremal
    skew: kappa(z) = (nu + 2 Re(a z)) / (nu + 2 Re(conj(a) z)) with
    a = e^{i pi/3} and z on the unit circle (z is the squared direction
    variable, z = w^2)."""
    _validate_mu_open(mu)
    nu = BeltramiParams(mu).nu
    num = nu + 2.0 * (_ROT3 * z).real
    den = nu + 2.0 * (_ROT3.conjugate() * z).real
    return num / den


def extremal_directions(mu: float) -> tuple[complex, complex]:
    """The two unit critical directions of ``kappa_at`` in the squared
    variable: z = (-1 +- i sqrt(nu^2 - 1)) / nu.

    Returns (maximizer, minimizer); the minus-sign root maximizes kappa, and
    the two critical values are exact reciprocals.
    """
    _validate_mu_open(mu)
    nu = BeltramiParams(mu).nu
    s = math.sqrt(nu * nu - 1.0)
    z_max = complex(-1.0, -s) / nu
    z_min = complex(-1.0, s) / nu
    return z_max, z_min


def _golden_max(f, a: float, b: float, tol: float = 1e-13) -> float:
    """Golden-section maximizer of a unimodal f on [a, b]; returns max value."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc = f(c)
    fd = f(d)
    while (b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return max(fc, fd, f(0.5 * (a + b)))


def oracle_max_ratio(mu: float, grid: int = 10**6) -> float:
    """Brute-force maximum of |f(z)| / |f(z e^{i pi/3})| over |z| = 1.

    Scans ``grid`` equally spaced angles, then refines with one golden-section
    pass on the bracketing interval around the grid argmax.  Independent of the
    closed form in ``linear_skew``.
    """
    if not (0.0 <= mu < 1.0):
        raise ValueError(f"mu must lie in [0, 1), got {mu}")
    if grid < 3:
        raise ValueError(f"grid must be >= 3, got {grid}")
    if mu == 0.0:
        return 1.0
    best, theta, _ = ratio_scan(mu, grid)
    step = 2.0 * math.pi / grid
    ap = (1.0 + mu) ** 2
    bm = (1.0 - mu) ** 2

    def g(t: float) -> float:
        num = ap * math.cos(t) ** 2 + bm * math.sin(t) ** 2
        ts = t + math.pi / 3.0
        den = ap * math.cos(ts) ** 2 + bm * math.sin(ts) ** 2
        return math.sqrt(num / den)

    refined = _golden_max(g, theta - step, theta + step)
    return max(best, refined)
