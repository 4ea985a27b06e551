"""Planar primitives: points as complex numbers, triangles, disks, the
sixth-turn rotations about a point, and the subtended-angle bound used by the
chain construction.

A point of the plane is a Python ``complex``; ``OMEGA`` is the unit rotation
by pi/3, so the triangle (0, 1, OMEGA) is the unit equilateral triangle all
the lattice machinery is built on.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DegenerateTriangleError, DomainError

#: Unit rotation by pi/3: 1/2 + (sqrt(3)/2) i.
OMEGA = complex(0.5, math.sqrt(3.0) / 2.0)

Point2 = complex


def _check_finite(*zs: complex) -> None:
    for z in zs:
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError(f"non-finite point {z!r}")


@dataclass(frozen=True)
class Triangle2:
    """Ordered vertex triple in the plane.

    Degenerate triples (a repeated vertex) are representable; ``skew`` refuses
    them with :class:`DegenerateTriangleError`.
    """

    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        _check_finite(self.a, self.b, self.c)

    @property
    def vertices(self) -> tuple[complex, complex, complex]:
        return (self.a, self.b, self.c)

    def sides(self) -> tuple[float, float, float]:
        """Lengths (|a-b|, |b-c|, |c-a|)."""
        return (abs(self.a - self.b), abs(self.b - self.c), abs(self.c - self.a))

    def longest(self) -> float:
        return max(self.sides())

    def shortest(self) -> float:
        return min(self.sides())

    def skew(self) -> float:
        return skew(self)

    def is_equilateral(self, tol: float = 1e-12) -> bool:
        """True when all sides agree to relative tolerance ``tol``."""
        hi = self.longest()
        lo = self.shortest()
        return hi > 0.0 and (hi - lo) <= tol * hi

    def translated(self, v: complex) -> "Triangle2":
        return Triangle2(self.a + v, self.b + v, self.c + v)


@dataclass(frozen=True)
class Disk:
    """Closed disk {w : |w - center| <= radius}."""

    center: complex
    radius: float

    def __post_init__(self):
        _check_finite(self.center)
        if not (math.isfinite(self.radius) and self.radius >= 0.0):
            raise ValueError(f"disk radius must be a finite nonnegative real, got {self.radius}")

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) <= self.radius


def skew(t: Triangle2) -> float:
    """Longest pairwise vertex distance over shortest; >= 1 for nondegenerate
    triples.  The trivial triple with repeated vertices has no defined skew and
    is refused.
    """
    hi = t.longest()
    lo = t.shortest()
    if lo == 0.0:
        raise DegenerateTriangleError(f"triangle with repeated vertex: {t}")
    return hi / lo


def equilateral_from(center: complex, circumradius: float, orientation: float) -> Triangle2:
    """Equilateral triangle with the given circumcenter, circumradius and
    orientation of the first vertex."""
    _check_finite(center)
    if not (circumradius > 0.0 and math.isfinite(circumradius)):
        raise ValueError(f"circumradius must be positive, got {circumradius}")
    verts = [center + circumradius * cmath.exp(1j * (orientation + 2.0 * math.pi * j / 3.0)) for j in range(3)]
    return Triangle2(*verts)


def rotate_about(x: complex, z: complex, sign: int) -> complex:
    """Rotate ``z`` about ``x`` by sign * pi/3 (sign must be +1 or -1)."""
    _check_finite(x, z)
    if sign == 1:
        return x + (z - x) * OMEGA
    if sign == -1:
        return x + (z - x) * OMEGA.conjugate()
    raise ValueError(f"sign must be +1 or -1, got {sign!r}")


# Admissibility slack: generated boundary-of-region samples survive rounding.
_GEO_EPS = 1e-12


def geo_lemma_angle(z: complex, theta_plus: float, theta_minus: float) -> float:
    """Angle at ``z`` subtended by e^{i theta_plus} and e^{i theta_minus},
    measured across the positive real axis.

    Admissible inputs: |z| <= 1/8, |theta_plus - pi/3| <= 1/8 and
    |theta_minus + pi/3| <= 1/8.  On that set both chords make opposite-sign
    principal arguments, and the returned angle lies in the open interval
    (pi/3, pi).  Outside the admissible set the guarantee does not apply and a
    DomainError is raised.
    """
    _check_finite(z)
    third = math.pi / 3.0
    if abs(z) > 0.125 + _GEO_EPS:
        raise DomainError(f"|z| = {abs(z)} exceeds 1/8")
    if abs(theta_plus - third) > 0.125 + _GEO_EPS:
        raise DomainError(f"theta_plus = {theta_plus} not within 1/8 of pi/3")
    if abs(theta_minus + third) > 0.125 + _GEO_EPS:
        raise DomainError(f"theta_minus = {theta_minus} not within 1/8 of -pi/3")
    up = cmath.exp(1j * theta_plus) - z
    um = cmath.exp(1j * theta_minus) - z
    ap = cmath.phase(up)
    am = cmath.phase(um)
    # The admissible set forces ap in (0, pi/2) and am in (-pi/2, 0), so the
    # angle crossing the positive real axis is their principal-argument gap.
    if not (ap > 0.0 > am):
        raise DomainError("chord arguments do not straddle the positive real axis")
    return ap - am
