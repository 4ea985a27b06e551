"""Equilateral-triangle distortion machinery in dimension n >= 3.

Given a homeomorphism whose image skew over equilateral triangles is at most
sigma, the planar-style circle distortion bound improves to sigma^3 in
dimension three and higher: any unit sphere point a' can be reached from the
minimizing point m' through at most three equilateral-triangle sides, built
from the explicit apex

    b = (1/2, (1 - a1)/(2 a2), sqrt(3/4 - [(1 - a1)/(2 a2)]^2))

in a frame normalized so the sphere has unit radius, m' = e1, and
a' = a1 e1 + a2 e2 with a2 >= 0.  The apex formula satisfies the three unit
distance identities |b| = |b - e1| = |b - a'| = 1 only for unit radius (the
printed general-radius form does not scale), so frames are normalized to
r = 1 first and scaled back.

``estimate_sigma_and_H_3d`` samples both sides of the bound: the image-skew
supremum over random equilateral triangles and the sphere-image distortion of
the map, and checks H_hat <= sigma_hat^3 with a small sampling slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, NonInjectiveImageError
from .metrics import SamplingPlan
from .reports import BoundReport

_TWO_THIRDS_PI = 2.0 * math.pi / 3.0


@dataclass(frozen=True)
class TriangleN:
    """Ordered vertex triple in R^n, vertices as a (3, n) array."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        if v.shape[0] != 3 or v.ndim != 2:
            raise ValueError(f"expected (3, n) vertex array, got shape {v.shape}")
        object.__setattr__(self, "vertices", v)

    def sides(self) -> tuple[float, float, float]:
        v = self.vertices
        return (
            float(np.linalg.norm(v[0] - v[1])),
            float(np.linalg.norm(v[1] - v[2])),
            float(np.linalg.norm(v[2] - v[0])),
        )

    def skew(self) -> float:
        s = self.sides()
        lo = min(s)
        if lo == 0.0:
            from .errors import DegenerateTriangleError

            raise DegenerateTriangleError(f"repeated vertex in {self.vertices}")
        return max(s) / lo

    def is_equilateral(self, tol: float = 1e-12) -> bool:
        s = self.sides()
        return min(s) > 0.0 and (max(s) - min(s)) <= tol * max(s)


@dataclass(frozen=True)
class BallDomain:
    center: np.ndarray
    radius: float

    def contains_ball(self, center: np.ndarray, r: float) -> bool:
        return float(np.linalg.norm(np.asarray(center) - self.center)) + r <= self.radius

    def describe(self) -> str:
        return f"ball(r={self.radius:g})"


@dataclass(frozen=True)
class WholeSpace:
    def contains_ball(self, center, r) -> bool:
        return True

    def describe(self) -> str:
        return "space"


@dataclass
class SpaceMap:
    """Deterministic map of R^n points; the evaluator is vectorized over
    (M, n) arrays."""

    name: str
    dim: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    domain: object = field(default_factory=WholeSpace)
    known_K: float | None = None

    def eval_many(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=np.float64)
        out = np.asarray(self.evaluator(pts), dtype=np.float64)
        if out.shape != pts.shape:
            raise ValueError(f"evaluator of '{self.name}' changed shape")
        return out


def identity_nd(dim: int = 3) -> SpaceMap:
    return SpaceMap("id3" if dim == 3 else f"id{dim}", dim, lambda p: p.copy(), known_K=1.0)


def diag_map(diag) -> SpaceMap:
    """Linear map with the given positive diagonal; its sphere distortion is
    the ratio of extreme entries at every point."""
    d = np.asarray(list(diag), dtype=np.float64)
    if d.ndim != 1 or d.size < 3:
        raise ValueError("need at least 3 diagonal entries")
    if np.any(d <= 0):
        raise ValueError("diagonal entries must be positive")
    name = "diag:" + ",".join(f"{x:g}" for x in d)
    return SpaceMap(name, d.size, lambda p, _d=d: p * _d, known_K=float(d.max() / d.min()))


# ---------------------------------------------------------------------------
# Frame normalization and the explicit apex

@dataclass(frozen=True)
class FrameTransform:
    """Similarity x -> Q (x - shift) with Q orthogonal (det = +-1)."""

    Q: np.ndarray
    shift: np.ndarray

    def apply(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=np.float64) - self.shift) @ self.Q.T

    def invert(self, y: np.ndarray) -> np.ndarray:
        return np.asarray(y, dtype=np.float64) @ self.Q + self.shift


def _complete_basis(rows: list[np.ndarray], dim: int) -> np.ndarray:
    """Extend orthonormal rows to a full basis by Gram-Schmidt over the
    standard basis, scanned in index order."""
    basis = list(rows)
    for i in range(dim):
        if len(basis) == dim:
            break
        v = np.zeros(dim)
        v[i] = 1.0
        for u in basis:
            v = v - np.dot(v, u) * u
        norm = np.linalg.norm(v)
        if norm > 1e-9:
            basis.append(v / norm)
    if len(basis) != dim:
        raise ArithmeticError("failed to complete an orthonormal basis")
    return np.stack(basis)


def normalize_frame(p: np.ndarray, m: np.ndarray, a: np.ndarray,
                    tol: float = 1e-9) -> tuple[FrameTransform, float, float, float]:
    """Isometry sending p to 0, m to r*e1, and a into the e1-e2 plane with
    nonnegative second coordinate; returns (transform, a1, a2, r).

    Requires |a - p| = |m - p| = r > 0 (relative tolerance ``tol``); a2 = 0 is
    a valid degenerate output when p, m, a are collinear.
    """
    p = np.asarray(p, dtype=np.float64)
    m = np.asarray(m, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    dim = p.size
    if dim < 3:
        raise ValueError("frames require dimension >= 3")
    rm = float(np.linalg.norm(m - p))
    ra = float(np.linalg.norm(a - p))
    if rm == 0.0:
        raise ValueError("r = |m - p| must be positive")
    if abs(ra - rm) > tol * rm:
        raise ValueError(f"|a - p| = {ra} and |m - p| = {rm} differ beyond tolerance")
    u1 = (m - p) / rm
    w = (a - p) - np.dot(a - p, u1) * u1
    a2 = float(np.linalg.norm(w))
    if a2 > tol * rm:
        u2 = w / a2
        rows = [u1, u2]
    else:
        a2 = 0.0
        rows = [u1]
    Q = _complete_basis(rows, dim)
    a1 = float(np.dot(a - p, u1))
    return FrameTransform(Q=Q, shift=p.copy()), a1, a2, rm


def construct_b(a1: float, a2: float) -> np.ndarray:
    """Apex of the two unit equilateral triangles joining e1 to the unit
    vector (a1, a2, 0): b = (1/2, (1-a1)/(2 a2), sqrt(3/4 - [(1-a1)/(2 a2)]^2)).

    Valid in the unit-radius frame, for a2 > 0 and angle(a', e1) <= 2*pi/3
    (equivalently a1 >= -1/2, which keeps the radicand nonnegative).  Then
    |b| = |b - e1| = |b - a'| = 1.
    """
    if not (a2 > 0.0):
        raise ValueError("a2 must be positive; a2 = 0 cases use the degenerate paths")
    if abs(a1 * a1 + a2 * a2 - 1.0) > 1e-9:
        raise ValueError(f"(a1, a2) must be a unit vector, got norm^2 = {a1*a1 + a2*a2}")
    t = (1.0 - a1) / (2.0 * a2)
    rad = 0.75 - t * t
    if rad < -1e-12:
        raise ValueError(
            f"radicand {rad} negative: angle(a', e1) exceeds 2*pi/3, use the rotation reduction"
        )
    return np.array([0.5, t, math.sqrt(max(rad, 0.0))])


def case2_reflect_to_case1(a: np.ndarray) -> np.ndarray:
    """Rotate a vector of the e1-e2 plane at angle > 2*pi/3 from e1 clockwise
    by pi/3, landing at angle <= 2*pi/3; (0, a, result) is equilateral.

    The antipodal degenerate input (angle exactly pi, so a2 = 0) has no
    rotation plane of its own; the e1-e3 plane is used, deterministically.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.size < 3 or np.any(np.abs(a[2:]) > 1e-12 * max(1.0, float(np.linalg.norm(a)))):
        raise ValueError("a must lie in the e1-e2 plane of an n >= 3 frame")
    a1, a2 = float(a[0]), float(a[1])
    if a2 < 0.0:
        raise ValueError("a2 must be nonnegative")
    c = 0.5
    s = math.sqrt(3.0) / 2.0
    out = a.copy()
    if a2 == 0.0:
        if a1 >= 0.0:
            raise ValueError("angle(a, e1) <= 2*pi/3: already reducible without rotation")
        out[0] = a1 * c
        out[2] = -a1 * s
        return out
    if math.atan2(a2, a1) <= _TWO_THIRDS_PI:
        raise ValueError("angle(a, e1) <= 2*pi/3: already reducible without rotation")
    out[0] = a1 * c + a2 * s
    out[1] = -a1 * s + a2 * c
    return out


# ---------------------------------------------------------------------------
# Sampled sigma^3 check

def _random_unit(rng, dim, count):
    g = rng.standard_normal((count, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _random_2frames(rng, dim, count):
    """Orthonormal (u, v) pairs via Gram-Schmidt on Gaussian vectors."""
    u = _random_unit(rng, dim, count)
    g = rng.standard_normal((count, dim))
    g = g - np.sum(g * u, axis=1, keepdims=True) * u
    n = np.linalg.norm(g, axis=1, keepdims=True)
    # Degenerate draws (measure zero) would need a redraw; fail loudly instead.
    if np.any(n < 1e-12):
        raise ArithmeticError("degenerate Gaussian 2-frame draw")
    return u, g / n


def _sphere_points(count: int, dim: int) -> np.ndarray:
    """Deterministic well-spread unit vectors; Fibonacci sphere for n = 3."""
    if dim == 3:
        i = np.arange(count)
        z = 1.0 - (2.0 * i + 1.0) / count
        phi = i * math.pi * (3.0 - math.sqrt(5.0))
        rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=0, spawn_key=(dim,)))
    return _random_unit(rng, dim, count)


def estimate_sigma_and_H_3d(sm: SpaceMap, center, plan: SamplingPlan,
                            eps_tol: float = 0.02) -> BoundReport:
    """Sample sigma_hat (image-skew supremum over random equilateral triangles
    in balls around ``center``) and H_hat (max/min sphere-image distance ratio
    at ``center``), and check H_hat <= sigma_hat^3 * (1 + eps_tol).

    Triangles use seeded random orthonormal 2-frames; sphere probes use a
    deterministic well-spread point set.  H_hat takes the max over the smaller
    half of the usable ladder, sigma_hat the max over all of it.
    """
    center = np.asarray(center, dtype=np.float64)
    if center.size != sm.dim:
        raise ValueError(f"center has dimension {center.size}, map is {sm.dim}-dimensional")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(plan.seed), spawn_key=(7,)))
    count = plan.triangle_count * plan.orientation_count
    sphere = _sphere_points(plan.circle_samples, sm.dim)
    f_center = sm.eval_many(center[None, :])[0]

    sigma_hat = 1.0
    sigma_witness = None
    ratios = []
    dropped = []
    for r in plan.scale_ladder:
        if not sm.domain.contains_ball(center, r * (1.0 + 1e-9)):
            dropped.append(r)
            continue
        # Image skew over sampled triangles inside the ball of radius r.
        u, v = _random_2frames(rng, sm.dim, count)
        offsets = _random_unit(rng, sm.dim, count)
        rho = 0.98 * r * rng.random(count) ** (1.0 / 3.0)
        sizes = (r * (1.0 - 1e-9) - rho) * (0.05 + 0.95 * rng.random(count))
        centers = center[None, :] + offsets * rho[:, None]
        verts = np.empty((3, count, sm.dim))
        for t in range(3):
            ang = _TWO_THIRDS_PI * t
            verts[t] = centers + sizes[:, None] * (math.cos(ang) * u + math.sin(ang) * v)
        imgs = sm.eval_many(verts.reshape(-1, sm.dim)).reshape(3, count, sm.dim)
        d01 = np.linalg.norm(imgs[0] - imgs[1], axis=1)
        d12 = np.linalg.norm(imgs[1] - imgs[2], axis=1)
        d20 = np.linalg.norm(imgs[2] - imgs[0], axis=1)
        lo = np.minimum(np.minimum(d01, d12), d20)
        hi = np.maximum(np.maximum(d01, d12), d20)
        if np.any(lo == 0.0):
            raise NonInjectiveImageError(f"map '{sm.name}' degenerates a sampled triangle")
        skews = hi / lo
        i = int(np.argmax(skews))
        if float(skews[i]) > sigma_hat:
            sigma_hat = float(skews[i])
            sigma_witness = {"scale": r, "vertices": verts[:, i, :].tolist(),
                             "value": sigma_hat}
        # Sphere-image distortion at this radius.
        d = np.linalg.norm(sm.eval_many(center[None, :] + r * sphere) - f_center, axis=1)
        dmin = float(np.min(d))
        dmax = float(np.max(d))
        if dmin == 0.0:
            raise NonInjectiveImageError(f"map '{sm.name}' collapses a sphere point at r={r}")
        ratios.append((r, dmax / dmin))
    if not ratios:
        raise DomainError(f"no ladder radius fits the domain {sm.domain.describe()}")
    window = ratios[len(ratios) // 2 :]
    h_hat = max(v for (_, v) in window)
    report = BoundReport(
        title=f"dimension-{sm.dim} distortion bound, map {sm.name}",
        extras={
            "sigma_hat": sigma_hat,
            "H_hat": h_hat,
            "sigma_witness": sigma_witness,
            "per_scale_H": [[r, v] for (r, v) in ratios],
            "limsup_window": [r for (r, _) in window],
            "dropped_scales": dropped,
            "triangles_per_scale": count,
            "sphere_samples": plan.circle_samples,
        },
    )
    report.add("H_hat <= sigma_hat^3 * (1 + eps)", h_hat,
               sigma_hat**3 * (1.0 + eps_tol), "<=",
               note="sphere distortion against the cubed triangle-skew bound")
    return report
