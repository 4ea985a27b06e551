"""The explicit constant pipeline behind the dilatation bound, evaluated in
natural-log space, and a certified checker for the static geometric
inequalities the construction rests on.

The pipeline for a skew bound sigma over a tiling of N tiles:

    C     = sigma * (1 + 2 sigma^3)        (curve excursion factor)
    c     = 1 / (N sigma^N)                (reference-edge lower bound)
    alpha = c / ((2 sigma + 1) C)          (inner-disk radius factor)
    H     = alpha^-2                       (final dilatation bound)

N sigma^N overflows any native float as soon as sigma > 1 at N = 2^18, so the
chain lives in logs; decimal renderings carry an explicit exponent instead.

Static geometry is decided in Q[sqrt(3)]: every quantity is an exact
a + b*sqrt(3) with Fraction coefficients, equalities are coefficient
comparisons, and strict inequalities are signed through the certified
enclosure 1.7320508 < sqrt(3) < 1.7320509 (no float roundoff can flip them).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .reports import BoundCheck, BoundReport

#: Certified enclosure of sqrt(3): SQRT3_LO**2 < 3 < SQRT3_HI**2 exactly.
SQRT3_LO = Fraction(17320508, 10**7)
SQRT3_HI = Fraction(17320509, 10**7)

_LN10 = math.log(10.0)


# ---------------------------------------------------------------------------
# Exact arithmetic in Q[sqrt(3)]

@dataclass(frozen=True)
class Rt3:
    """Exact element a + b*sqrt(3) with rational coefficients."""

    a: Fraction
    b: Fraction = Fraction(0)

    @staticmethod
    def of(a, b=0) -> "Rt3":
        return Rt3(Fraction(a), Fraction(b))

    def __add__(self, other: "Rt3") -> "Rt3":
        return Rt3(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Rt3") -> "Rt3":
        return Rt3(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "Rt3":
        return Rt3(-self.a, -self.b)

    def __mul__(self, other: "Rt3") -> "Rt3":
        return Rt3(self.a * other.a + 3 * self.b * other.b,
                   self.a * other.b + self.b * other.a)

    def scaled(self, q) -> "Rt3":
        q = Fraction(q)
        return Rt3(self.a * q, self.b * q)

    def bounds(self) -> tuple[Fraction, Fraction]:
        """Directed rational enclosure of the value."""
        if self.b >= 0:
            return (self.a + self.b * SQRT3_LO, self.a + self.b * SQRT3_HI)
        return (self.a + self.b * SQRT3_HI, self.a + self.b * SQRT3_LO)

    def certified_sign(self) -> int:
        """-1, 0 or +1, certified by the enclosure (0 only for the exact
        rational zero)."""
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        lo, hi = self.bounds()
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        raise ArithmeticError(f"enclosure cannot sign {self}; widen the interval")

    def __float__(self) -> float:
        lo, hi = self.bounds()
        return float((lo + hi) / 2)


# ---------------------------------------------------------------------------
# Constant chain

@dataclass(frozen=True)
class ConstantChain:
    """Log-space record of the pipeline constants for one (sigma, N)."""

    sigma: float
    N: int
    log_c: float
    log_C: float
    log_alpha: float
    log_H: float

    @property
    def C(self) -> float:
        return self.sigma * (1.0 + 2.0 * self.sigma**3)

    @property
    def H_float(self) -> float:
        """exp(log_H); inf when it exceeds the float range."""
        try:
            return math.exp(self.log_H)
        except OverflowError:
            return math.inf

    @property
    def C_decimal(self) -> str:
        return decimal_from_log(self.log_C)

    @property
    def inv_alpha_decimal(self) -> str:
        return decimal_from_log(-self.log_alpha)

    @property
    def H_decimal(self) -> str:
        return decimal_from_log(self.log_H)

    def to_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "N": self.N,
            "log_c": self.log_c,
            "log_C": self.log_C,
            "log_alpha": self.log_alpha,
            "log_H": self.log_H,
            "C": self.C,
            "C_decimal": self.C_decimal,
            "inv_alpha_decimal": self.inv_alpha_decimal,
            "H_decimal": self.H_decimal,
            "H_float": self.H_float if math.isfinite(self.H_float) else None,
        }


def constant_chain(sigma: float, N: int = 2**18) -> ConstantChain:
    """Evaluate the pipeline in natural logs for a skew bound sigma >= 1 over
    N tiles."""
    if not (sigma >= 1.0 and math.isfinite(sigma)):
        raise ValueError(f"sigma must be a finite real >= 1, got {sigma}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    log_C = math.log(sigma) + math.log1p(2.0 * sigma**3)
    log_c = -(math.log(N) + N * math.log(sigma))
    log_alpha = log_c - math.log(2.0 * sigma + 1.0) - log_C
    return ConstantChain(sigma=float(sigma), N=int(N), log_c=log_c, log_C=log_C,
                         log_alpha=log_alpha, log_H=-2.0 * log_alpha)


def log_H_direct(sigma: float, N: int) -> float:
    """Independent arrangement of log H, expanded term by term; guards the
    chained evaluation in ``constant_chain`` against transcription slips."""
    return 2.0 * (
        math.log(N)
        + N * math.log(sigma)
        + math.log(2.0 * sigma + 1.0)
        + math.log(sigma * (1.0 + 2.0 * sigma**3))
    )


def decimal_from_log(ln_value: float, digits: int = 9) -> str:
    """Decimal string m.mmm...e+E for exp(ln_value), valid far beyond the
    float exponent range."""
    if ln_value == -math.inf:
        return "0"
    log10 = ln_value / _LN10
    exp10 = math.floor(log10)
    mant = 10.0 ** (log10 - exp10)
    if round(mant, digits) >= 10.0:
        mant /= 10.0
        exp10 += 1
    return f"{mant:.{digits}f}e{exp10:+d}"


# ---------------------------------------------------------------------------
# Static geometry

def _dist_p_to_sides() -> tuple[Rt3, Rt3, Rt3]:
    """Exact distances from p to the three sides of the unit triangle.

    p = 1/2 + (85/512) sqrt(3) i.  Distance from (x, y) to the line through
    the origin at angle t is |x sin t - y cos t|; the bottom side is the real
    segment, the left side leaves 0 at 60 degrees, the right side leaves 1 at
    120 degrees.
    """
    px = Rt3.of(Fraction(1, 2))
    py = Rt3.of(0, Fraction(85, 512))
    sin60 = Rt3.of(0, Fraction(1, 2))
    cos60 = Rt3.of(Fraction(1, 2))
    sin120 = sin60
    cos120 = -cos60
    d_bottom = py
    d_left = px * sin60 - py * cos60
    d_right = (px - Rt3.of(1)) * sin120 - py * cos120
    if d_left.certified_sign() < 0:
        d_left = -d_left
    if d_right.certified_sign() < 0:
        d_right = -d_right
    return d_bottom, d_left, d_right


def _exact_check(report: BoundReport, name: str, lhs: Rt3, rhs: Rt3, relation: str,
                 note: str = "") -> None:
    """Append a certified comparison of two Q[sqrt(3)] values."""
    diff = lhs - rhs
    if relation == "==":
        passed = diff.a == 0 and diff.b == 0
        margin = 0.0 if passed else -abs(float(diff))
    elif relation in (">", ">="):
        lo, _ = diff.bounds()
        passed = diff.certified_sign() > 0 if relation == ">" else diff.certified_sign() >= 0
        margin = float(lo)
    elif relation in ("<", "<="):
        lo, _ = (-diff).bounds()
        passed = diff.certified_sign() < 0 if relation == "<" else diff.certified_sign() <= 0
        margin = float(lo)
    else:
        raise ValueError(relation)
    report.checks.append(
        BoundCheck(name, float(lhs), float(rhs), relation, margin, bool(passed), note=note)
    )


def verify_static_geometry() -> BoundReport:
    """Certify every static numeric fact the planar construction relies on.

    Equalities are verified exactly in Q[sqrt(3)] (margin 0); strict
    inequalities report a certified positive rational lower bound on their
    slack.
    """
    report = BoundReport(title="static geometry")
    half = Fraction(1, 2)

    d_bottom, d_left, d_right = _dist_p_to_sides()
    d_min = d_bottom  # certified below
    _exact_check(report, "dist(p, bottom side) <= dist(p, left side)", d_bottom, d_left, "<=",
                 note="bottom side realizes the boundary distance")
    _exact_check(report, "dist(p, bottom side) <= dist(p, right side)", d_bottom, d_right, "<=")
    _exact_check(report, "dist(p, boundary) == (85/512) sqrt(3)", d_min,
                 Rt3.of(0, Fraction(85, 512)), "==")
    _exact_check(report, "dist(p, boundary) > 1/4 + 2^-6", d_min,
                 Rt3.of(Fraction(1, 4) + Fraction(1, 64)), ">",
                 note="the working disk D(p, 1/4 + 2^-6) is interior to the triangle")

    # Centroid offset: xi - p is purely imaginary, (1/6 - 85/512) sqrt(3) i.
    xi_minus_p = Rt3.of(0, Fraction(1, 6) - Fraction(85, 512))
    _exact_check(report, "|xi - p| == sqrt(3)/1536", xi_minus_p,
                 Rt3.of(0, Fraction(1, 1536)), "==",
                 note="p sits sqrt(3)/1536 below the centroid")

    pq = Rt3.of(Fraction(1, 512))
    _exact_check(report, "|p - q| == 2^-9", pq, Rt3.of(Fraction(1, 512)), "==")
    _exact_check(report, "|p - q| < sqrt(3) * 2^-8", pq, Rt3.of(0, Fraction(1, 256)), "<")
    _exact_check(report, "2 |p - q| < sqrt(3) * 2^-7", pq + pq, Rt3.of(0, Fraction(1, 128)), "<",
                 note="the enlarged disk about q stays inside D(p, 1/4 + sqrt(3) 2^-7)")

    _exact_check(report, "cos(pi/6) * 2^-6 == sqrt(3) * 2^-7",
                 Rt3.of(0, half).scaled(Fraction(1, 64)), Rt3.of(0, Fraction(1, 128)), "==",
                 note="cos(pi/6) = sqrt(3)/2; clearance of the middle sector endpoint")

    # cos over [pi/3 - 1/8, pi/3 + 1/8]: cos(pi/3 + 1/8) >= (1/2)(1 - 1/128)
    # - (sqrt(3)/2)(1/8) via cos x >= 1 - x^2/2 and sin x <= x.
    cos_lower = Rt3.of(half * (1 - Fraction(1, 128)), -half * Fraction(1, 8))
    _exact_check(report, "cos(pi/3 + 1/8) >= 1/4 (certified lower bound)", cos_lower,
                 Rt3.of(Fraction(1, 4)), ">",
                 note="hence cos(theta+-) >= 1/2 - 1/4 on the admissible angle band")
    _exact_check(report, "1/2 - 1/4 > 1/8", Rt3.of(Fraction(1, 4)), Rt3.of(Fraction(1, 8)), ">")

    lhs_tan = (Rt3.of(0, half) - Rt3.of(Fraction(1, 4))).scaled(Fraction(4, 3))
    rhs_tan = Rt3.of(-Fraction(1, 3), Fraction(2, 3))
    _exact_check(report, "(sqrt(3)/2 - 1/4)/(3/4) == (2 sqrt(3) - 1)/3", lhs_tan, rhs_tan, "==")
    _exact_check(report, "(2 sqrt(3) - 1)/3 > 2/3", rhs_tan, Rt3.of(Fraction(2, 3)), ">")
    _exact_check(report, "2/3 > tan(pi/6) = sqrt(3)/3", Rt3.of(Fraction(2, 3)),
                 Rt3.of(0, Fraction(1, 3)), ">")

    _exact_check(report, "2 * 2^-6 / (1/4) == 1/8", Rt3.of(Fraction(2, 64) * 4),
                 Rt3.of(Fraction(1, 8)), "==",
                 note="worst-case angle perturbation when endpoints move within the small disks")
    _exact_check(report, "|p - q| / (1/4) == 2^-7", Rt3.of(Fraction(1, 512) * 4),
                 Rt3.of(Fraction(1, 128)), "==")
    _exact_check(report, "2^-7 < 1/8", Rt3.of(Fraction(1, 128)), Rt3.of(Fraction(1, 8)), "<")

    _exact_check(report, "sqrt(3) > 8/5", Rt3.of(0, 1), Rt3.of(Fraction(8, 5)), ">")

    return report
