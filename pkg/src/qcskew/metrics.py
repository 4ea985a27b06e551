"""Sampled distortion estimators.

Suprema over "all equilateral triangles" and limits r -> 0 are not computable;
every estimator here replaces them with extrema over a deterministic, seeded
sample family and exposes the per-scale values so callers can assert trends
instead of limits:

* ``estimate_skew_sup``   max image skew over triangles sampled in a region
                          (sup proxy).
* ``estimate_skew_at``    per-radius suprema of image skew over triangles
                          inside D(z, r), then the minimum over the scale
                          ladder (liminf proxy).
* ``estimate_H``          circle max/min distance ratios per radius, then the
                          maximum over the smaller half of the ladder
                          (limsup proxy).
* ``estimate_kf``         diameter^2 / enclosed area of circle images per
                          radius, minimum over the ladder (liminf proxy).

Reports are bit-reproducible for a fixed plan: sampling is seeded and
low-discrepancy, evaluation may fan out over threads but chunks are
reassembled in sample order before any reduction, and argmax ties break on
the first-encountered sample.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, NonInjectiveImageError
from .geometry import Disk, Triangle2
from .maps import PlanarMap
from .reports import DistortionReport
from .sampling import HaltonStream, disk_points, orientation_angles

DEFAULT_LADDER = tuple(2.0 ** -k for k in range(1, 11))

_CENTER_STREAM = 0
_ORIENT_STREAM = 1
_LOCAL_STREAM = 2

# Relative shrink applied when checking that probe geometry stays strictly
# inside a declared domain.
_CLIP = 1e-9


@dataclass(frozen=True)
class SamplingPlan:
    """Deterministic sampling configuration shared by all estimators."""

    seed: int = 0
    triangle_count: int = 2000
    orientation_count: int = 32
    scale_ladder: tuple[float, ...] = DEFAULT_LADDER
    circle_samples: int = 4096

    def __post_init__(self):
        if self.triangle_count < 1 or self.orientation_count < 1 or self.circle_samples < 1:
            raise ValueError("sample counts must be >= 1")
        ladder = tuple(float(r) for r in self.scale_ladder)
        if not ladder:
            raise ValueError("scale_ladder must be nonempty")
        if any(r <= 0.0 or not math.isfinite(r) for r in ladder):
            raise ValueError("scale_ladder entries must be positive and finite")
        if any(a <= b for a, b in zip(ladder, ladder[1:])):
            raise ValueError("scale_ladder must be strictly decreasing")
        object.__setattr__(self, "scale_ladder", ladder)

    def describe(self) -> dict:
        return {
            "seed": self.seed,
            "triangle_count": self.triangle_count,
            "orientation_count": self.orientation_count,
            "scale_ladder": list(self.scale_ladder),
            "circle_samples": self.circle_samples,
        }


def resolve_threads(threads: int | None = None) -> int:
    """Explicit argument, else QCSKEW_THREADS, else available parallelism."""
    if threads is None:
        env = os.environ.get("QCSKEW_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def _eval_parallel(pm: PlanarMap, pts: np.ndarray, threads: int) -> np.ndarray:
    """Evaluate a flat point array, fanning chunks out over a thread pool and
    concatenating in sample order (results independent of the chunking)."""
    if threads <= 1 or pts.size < 65536:
        return pm.eval_many(pts)
    parts = np.array_split(pts, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        outs = list(pool.map(pm.eval_many, parts))
    return np.concatenate(outs)


def image_skew(pm: PlanarMap, t: Triangle2) -> float:
    """Skew of the image vertex triple (f(a), f(b), f(c))."""
    fa, fb, fc = pm.eval_many(np.array(t.vertices, dtype=np.complex128))
    sides = (abs(fa - fb), abs(fb - fc), abs(fc - fa))
    lo = min(sides)
    if lo == 0.0:
        raise NonInjectiveImageError(
            f"image triangle of {t} degenerate: map '{pm.name}' not injective at this resolution"
        )
    return max(sides) / lo


def _centers_for_scale(pm, region, scale, plan, stream):
    """First triangle_count stream points usable as triangle centers at this
    scale: the triangle must fit inside the region and the map domain."""
    reff = region.radius - scale
    if reff <= 0.0:
        return None
    need = plan.triangle_count
    got = []
    total = 0
    start = 0
    budget = max(64 * need, 4096)
    batch = max(need, 512)
    while total < need and start < budget:
        u = stream.take(start, batch)
        start += batch
        cand = disk_points(u, region.center, reff * (1.0 - 1e-12))
        keep = _contains_disk_many(pm.domain, cand, scale * (1.0 + _CLIP))
        cand = cand[keep]
        if cand.size:
            got.append(cand)
            total += cand.size
    if total == 0:
        return None
    return np.concatenate(got)[:need]


def _contains_disk_many(domain, centers: np.ndarray, r: float) -> np.ndarray:
    name = type(domain).__name__
    if name == "WholePlane":
        return np.ones(centers.shape, dtype=bool)
    if name == "DiskDomain":
        return np.abs(centers - domain.center) + r <= domain.radius
    if name == "RectDomain":
        return (
            (centers.real - r >= domain.x0)
            & (centers.real + r <= domain.x1)
            & (centers.imag - r >= domain.y0)
            & (centers.imag + r <= domain.y1)
        )
    return np.array([domain.contains_disk(c, r) for c in centers], dtype=bool)


def _triangle_batch_skew(pm, centers, sizes, phis, threads):
    """Image skews of the (center x orientation) triangle family.

    Returns (skews, verts); verts is (3, nc, no) and skews is indexed by the
    raveled (nc, no) layout.
    """
    rot = np.exp(1j * (phis[None, :] + (2.0 * np.pi / 3.0) * np.arange(3.0)[:, None, None]))
    verts = centers[None, :, None] + sizes[None, :, None] * rot  # (3, nc, no)
    flat = verts.reshape(3, -1)
    imgs = _eval_parallel(pm, flat.reshape(-1), threads).reshape(3, -1)
    skews = kernels.skew_batch(imgs[0], imgs[1], imgs[2])
    if not np.all(np.isfinite(skews)):
        bad = int(np.argmax(~np.isfinite(skews)))
        tri = flat[:, bad]
        raise NonInjectiveImageError(
            f"degenerate image triangle for map '{pm.name}' at vertices {list(tri)}"
        )
    return skews, verts


def _witness_triangle(verts3, flat_index, scale, value):
    a, b, c = (verts3[t].reshape(-1)[flat_index] for t in range(3))
    return {
        "scale": scale,
        "value": value,
        "vertices": [[a.real, a.imag], [b.real, b.imag], [c.real, c.imag]],
    }


def estimate_skew_sup(pm: PlanarMap, region: Disk, plan: SamplingPlan,
                      threads: int | None = None) -> DistortionReport:
    """Max image skew over the sampled equilateral-triangle family of a disk
    region: seeded low-discrepancy centers, seeded orientations in
    [0, 2*pi/3), sizes from the plan's scale ladder."""
    threads = resolve_threads(threads)
    phis = orientation_angles(plan.seed, plan.orientation_count, stream_id=_ORIENT_STREAM)
    per_scale = []
    dropped = []
    best = -math.inf
    witness = {}
    n_sampled = 0
    for scale in plan.scale_ladder:
        stream = HaltonStream(plan.seed, 2, stream_id=_CENTER_STREAM)
        centers = _centers_for_scale(pm, region, scale, plan, stream)
        if centers is None:
            dropped.append(scale)
            continue
        sizes = np.full(centers.shape, scale)
        skews, verts = _triangle_batch_skew(pm, centers, sizes, phis, threads)
        n_sampled += skews.size
        i = int(np.argmax(skews))
        smax = float(skews[i])
        per_scale.append((scale, smax))
        if smax > best:
            best = smax
            witness = _witness_triangle(verts, i, scale, smax)
    if not per_scale:
        raise DomainError(
            f"no triangles fit region {region} inside domain {pm.domain.describe()} at any ladder scale"
        )
    return DistortionReport(
        kind="skew_sup",
        estimate=best,
        witness=witness,
        per_scale=per_scale,
        samples={"triangles_requested_per_scale": plan.triangle_count * plan.orientation_count,
                 "triangles_total": n_sampled, "plan": plan.describe()},
        dropped_scales=dropped,
    )


def estimate_skew_at(pm: PlanarMap, z: complex, plan: SamplingPlan,
                     threads: int | None = None) -> DistortionReport:
    """Per-radius suprema of image skew over triangles inside D(z, r), with the
    minimum over the ladder as the small-scale (liminf) proxy.

    The per-radius families are similar copies of one another (same unit
    shapes scaled by r), so linear maps give identical per-radius values.
    """
    threads = resolve_threads(threads)
    phis = orientation_angles(plan.seed, plan.orientation_count, stream_id=_ORIENT_STREAM)
    per_scale = []
    dropped = []
    best_min = math.inf
    witness = {}
    n_sampled = 0
    for r in plan.scale_ladder:
        if not pm.domain.contains_disk(z, r * (1.0 + _CLIP)):
            dropped.append(r)
            continue
        stream = HaltonStream(plan.seed, 3, stream_id=_LOCAL_STREAM)
        u = stream.take(0, plan.triangle_count)
        rho = 0.98 * r * np.sqrt(u[:, 0])
        centers = z + rho * np.exp(2j * np.pi * u[:, 1])
        sizes = (r * (1.0 - _CLIP) - rho) * (0.05 + 0.95 * u[:, 2])
        skews, verts = _triangle_batch_skew(pm, centers, sizes, phis, threads)
        n_sampled += skews.size
        i = int(np.argmax(skews))
        smax = float(skews[i])
        per_scale.append((r, smax))
        if smax < best_min:
            best_min = smax
            witness = _witness_triangle(verts, i, r, smax)
    if not per_scale:
        raise DomainError(
            f"point {z} too close to the boundary of {pm.domain.describe()} for every ladder radius"
        )
    return DistortionReport(
        kind="skew_at",
        estimate=best_min,
        witness=witness,
        per_scale=per_scale,
        samples={"triangles_requested_per_scale": plan.triangle_count * plan.orientation_count,
                 "triangles_total": n_sampled, "plan": plan.describe(), "z": [z.real, z.imag]},
        dropped_scales=dropped,
    )


def _circle_extremes(pm, z, r, n, threads):
    if n < 3:
        raise ValueError(f"need at least 3 circle samples, got {n}")
    if not pm.domain.contains_disk(z, r * (1.0 + _CLIP)):
        raise DomainError(f"disk D({z}, {r}) not inside domain {pm.domain.describe()}")
    theta = (2.0 * np.pi / n) * np.arange(n)
    pts = z + r * np.exp(1j * theta)
    batch = np.concatenate(([z], pts))
    imgs = _eval_parallel(pm, batch, threads)
    fz = imgs[0]
    fw = imgs[1:]
    dmin, dmax, imin, imax = kernels.circle_minmax(fz, fw)
    if dmin == 0.0:
        raise NonInjectiveImageError(
            f"zero minimum circle distance for '{pm.name}' at z={z}, r={r}: "
            "not injective at this resolution"
        )
    return dmin, dmax, imin, imax, pts, fw


def dilatation_ratio(pm: PlanarMap, z: complex, r: float, n: int,
                     threads: int | None = None) -> float:
    """Max over n equally spaced points w of |f(z) - f(w)|, |z - w| = r,
    divided by the min over the same points."""
    if not (r > 0.0 and math.isfinite(r)):
        raise ValueError(f"radius must be positive, got {r}")
    threads = resolve_threads(threads)
    dmin, dmax, _, _, _, _ = _circle_extremes(pm, z, r, n, threads)
    return dmax / dmin


def estimate_H(pm: PlanarMap, z: complex, plan: SamplingPlan,
               threads: int | None = None) -> DistortionReport:
    """Circle distance ratios across the scale ladder; the estimate is the
    maximum over the smaller half of the usable rungs (limsup proxy)."""
    threads = resolve_threads(threads)
    per_scale = []
    dropped = []
    details = []
    for r in plan.scale_ladder:
        try:
            dmin, dmax, imin, imax, pts, _ = _circle_extremes(pm, z, r, plan.circle_samples, threads)
        except DomainError:
            dropped.append(r)
            continue
        ratio = dmax / dmin
        per_scale.append((r, ratio))
        details.append((r, ratio, pts[imax], pts[imin]))
    if not per_scale:
        raise DomainError(
            f"point {z} too close to the boundary of {pm.domain.describe()} for every ladder radius"
        )
    window = details[len(details) // 2 :]
    best = max(window, key=lambda rec: rec[1])
    r_best, ratio_best, wmax, wmin = best
    return DistortionReport(
        kind="dilatation",
        estimate=ratio_best,
        witness={
            "scale": r_best,
            "value": ratio_best,
            "max_point": [wmax.real, wmax.imag],
            "min_point": [wmin.real, wmin.imag],
        },
        per_scale=per_scale,
        samples={"circle_samples": plan.circle_samples, "plan": plan.describe(),
                 "z": [z.real, z.imag], "limsup_window": [r for (r, *_rest) in window]},
        dropped_scales=dropped,
    )


def estimate_kf(pm: PlanarMap, z: complex, plan: SamplingPlan,
                threads: int | None = None) -> DistortionReport:
    """Diameter-squared over enclosed area of small circle images, minimum
    over the ladder (planar case of the diameter-to-measure ratio).

    The image of the disk under a homeomorphism fills the Jordan interior of
    the image curve, so the enclosed shoelace area of the sampled image
    polygon stands in for the image measure.  A rung whose image polygon does
    not close up with winding +-1 is flagged as unreliable.
    """
    threads = resolve_threads(threads)
    per_scale = []
    dropped = []
    flags = []
    best = math.inf
    witness = {}
    for r in plan.scale_ladder:
        try:
            _, _, _, _, _, fw = _circle_extremes(pm, z, r, plan.circle_samples, threads)
        except DomainError:
            dropped.append(r)
            continue
        diam, i, j = kernels.polygon_diameter(fw)
        area = abs(kernels.polygon_area_signed(fw))
        if diam == 0.0 or area == 0.0:
            raise NonInjectiveImageError(
                f"degenerate circle image for '{pm.name}' at z={z}, r={r}"
            )
        edges = np.diff(np.concatenate((fw, fw[:1])))
        turns = np.diff(np.angle(np.concatenate((edges, edges[:1]))))
        turning = float(np.sum((turns + np.pi) % (2.0 * np.pi) - np.pi) / (2.0 * np.pi))
        value = diam * diam / area
        if abs(abs(turning) - 1.0) > 0.25:
            flags.append(f"self-intersection suspected at r={r:g} (turning {turning:.3f})")
        per_scale.append((r, value))
        if value < best:
            best = value
            witness = {
                "scale": r,
                "value": value,
                "diameter_endpoints": [[fw[i].real, fw[i].imag], [fw[j].real, fw[j].imag]],
                "diameter": diam,
                "area": area,
            }
    if not per_scale:
        raise DomainError(
            f"point {z} too close to the boundary of {pm.domain.describe()} for every ladder radius"
        )
    return DistortionReport(
        kind="kf",
        estimate=best,
        witness=witness,
        per_scale=per_scale,
        samples={"circle_samples": plan.circle_samples, "plan": plan.describe(),
                 "z": [z.real, z.imag]},
        flags=flags,
        dropped_scales=dropped,
    )
