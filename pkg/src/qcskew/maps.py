"""Map abstraction consumed by every estimator, the built-in zoo, and
file-backed grid maps.

A :class:`PlanarMap` bundles a vectorized evaluator (complex ndarray in,
complex ndarray out), a declared domain, and optional known-distortion
metadata.  Evaluating outside the declared domain is an error; estimators
shrink their sampling regions so every probe point stays inside.

Zoo conventions
---------------
``affine:mu``   z + mu*conj(z) on the whole plane, dilatation (1+mu)/(1-mu)
                everywhere.
``radial:K``    radial stretch w = z - RADIAL_CENTER about RADIAL_CENTER = -1:
                z maps to RADIAL_CENTER + w |w|^(K-1).  The stretch is centered
                away from the origin on purpose: at its own center a radial
                stretch sends concentric circles to circles and so shows
                dilatation 1 there, while every other point has metric
                dilatation exactly K.  Centering at -1 makes the conventional
                probe point 0 a regular point with dilatation K.
``square``      z^2 on a closed disk that touches 0 on its boundary (convex
                and 0 not interior, hence injective) and contains the unit
                equilateral triangle (0, 1, OMEGA).
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import DomainError, GridFormatError


# ---------------------------------------------------------------------------
# Domains

@dataclass(frozen=True)
class WholePlane:
    def contains(self, z):
        return np.ones(np.shape(z), dtype=bool) if np.ndim(z) else True

    def contains_disk(self, center: complex, r: float) -> bool:
        return True

    def describe(self) -> str:
        return "plane"


@dataclass(frozen=True)
class DiskDomain:
    center: complex
    radius: float

    def contains(self, z):
        return np.abs(np.asarray(z) - self.center) <= self.radius

    def contains_disk(self, center: complex, r: float) -> bool:
        return abs(center - self.center) + r <= self.radius

    def describe(self) -> str:
        return f"disk({self.center.real:g},{self.center.imag:g};{self.radius:g})"


@dataclass(frozen=True)
class RectDomain:
    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError("rectangle bounds must satisfy x0 < x1 and y0 < y1")

    def contains(self, z):
        z = np.asarray(z)
        return (
            (z.real >= self.x0)
            & (z.real <= self.x1)
            & (z.imag >= self.y0)
            & (z.imag <= self.y1)
        )

    def contains_disk(self, center: complex, r: float) -> bool:
        return (
            center.real - r >= self.x0
            and center.real + r <= self.x1
            and center.imag - r >= self.y0
            and center.imag + r <= self.y1
        )

    def describe(self) -> str:
        return f"rect({self.x0:g},{self.y0:g},{self.x1:g},{self.y1:g})"


Domain = Union[WholePlane, DiskDomain, RectDomain]


# ---------------------------------------------------------------------------
# PlanarMap

@dataclass
class PlanarMap:
    """Deterministic pointwise map of a planar domain.

    ``evaluator`` must be pure, reentrant and vectorized over complex arrays;
    the library may call it from several threads at once.
    """

    name: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    domain: Domain
    known_K: float | None = None
    known_skew: float | None = None
    orientation_preserving: bool | None = None
    extras: dict = field(default_factory=dict)

    def eval_many(self, pts: np.ndarray, check: bool = True) -> np.ndarray:
        pts = np.asarray(pts, dtype=np.complex128)
        if check:
            inside = self.domain.contains(pts)
            if not np.all(inside):
                bad = pts[~np.asarray(inside)].ravel()
                raise DomainError(
                    f"{bad.size} point(s) outside domain {self.domain.describe()} "
                    f"of map '{self.name}', e.g. {bad[0]!r}"
                )
        out = np.asarray(self.evaluator(pts), dtype=np.complex128)
        if out.shape != pts.shape:
            raise ValueError(f"evaluator of '{self.name}' changed shape {pts.shape} -> {out.shape}")
        return out


def eval_map(pm: PlanarMap, z: complex) -> complex:
    """Evaluate at a single point, enforcing the declared domain."""
    return complex(pm.eval_many(np.asarray([z]))[0])


# ---------------------------------------------------------------------------
# Zoo

def identity_map() -> PlanarMap:
    return PlanarMap("identity", lambda z: z.copy(), WholePlane(), known_K=1.0, known_skew=1.0,
                     orientation_preserving=True)


def make_affine(mu: float) -> PlanarMap:
    """Normalized linear map z + mu*conj(z); requires 0 <= mu < 1.

    General affine maps are similarities composed with this family, and
    similarities leave skew invariant, so the zoo exposes only the normalized
    form.  Metadata dilatation is (1+mu)/(1-mu).
    """
    if not (0.0 <= mu < 1.0):
        raise ValueError(f"mu must lie in [0, 1) for an orientation-preserving map, got {mu}")

    def ev(z, _mu=mu):
        return z + _mu * np.conj(z)

    return PlanarMap(f"affine:{mu:g}", ev, WholePlane(), known_K=(1.0 + mu) / (1.0 - mu),
                     orientation_preserving=True)


#: Center of the zoo's radial stretch; see the module docstring.
RADIAL_CENTER = complex(-1.0, 0.0)


def make_radial_stretch(K: float, center: complex = RADIAL_CENTER) -> PlanarMap:
    """Radial stretch of dilatation K about ``center``: w -> w |w|^(K-1) in
    coordinates centered there.  Requires K >= 1.

    Every point other than ``center`` has metric dilatation exactly K; the
    default center -1 keeps the origin a regular point so that probing the
    dilatation at 0 reads K.
    """
    if not (K >= 1.0):
        raise ValueError(f"K must be >= 1, got {K}")

    if K == 1.0:
        def ev(z):
            return z.copy()
    else:
        def ev(z, _K=K, _c=center):
            w = z - _c
            r = np.abs(w)
            return _c + w * r ** (_K - 1.0)

    return PlanarMap(f"radial:{K:g}", ev, WholePlane(), known_K=K, orientation_preserving=True,
                     extras={"center": [center.real, center.imag]})


#: Domain of the square map: convex, 0 on its boundary (so z^2 is injective),
#: containing the unit equilateral triangle and a neighborhood of z = 1.  The
#: radius is abs(center) as computed so that 0 passes the containment test.
_SQUARE_CENTER = 1.5 * cmath.exp(1j * math.pi / 6.0)
SQUARE_DOMAIN = DiskDomain(_SQUARE_CENTER, abs(_SQUARE_CENTER))


def make_square_map() -> PlanarMap:
    return PlanarMap("square", lambda z: z * z, SQUARE_DOMAIN, known_K=1.0, known_skew=1.0,
                     orientation_preserving=True)


# ---------------------------------------------------------------------------
# Grid maps

@dataclass
class GridMap:
    """Map given by image points on a regular grid over a rectangle, evaluated
    by bilinear interpolation.

    Bilinear interpolation reproduces real-affine maps exactly and is the
    simplest choice that keeps moderate-resolution homeomorphisms usable;
    non-injectivity of a supplied grid is not detected.
    """

    x0: float
    y0: float
    x1: float
    y1: float
    nx: int
    ny: int
    points: np.ndarray  # complex, shape (ny, nx), row-major with y slowest

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise GridFormatError(f"grid dimensions must be >= 2, got nx={self.nx} ny={self.ny}")
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise GridFormatError("domain bounds must satisfy x0 < x1 and y0 < y1")
        pts = np.asarray(self.points, dtype=np.complex128)
        if pts.shape != (self.ny, self.nx):
            raise GridFormatError(
                f"points shape {pts.shape} does not match ny={self.ny}, nx={self.nx}"
            )
        if not np.all(np.isfinite(pts.real) & np.isfinite(pts.imag)):
            raise GridFormatError("grid contains non-finite image points")
        object.__setattr__(self, "points", pts)

    @property
    def domain(self) -> RectDomain:
        return RectDomain(self.x0, self.y0, self.x1, self.y1)

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128)
        dx = (self.x1 - self.x0) / (self.nx - 1)
        dy = (self.y1 - self.y0) / (self.ny - 1)
        fx = (z.real - self.x0) / dx
        fy = (z.imag - self.y0) / dy
        ix = np.clip(np.floor(fx).astype(np.int64), 0, self.nx - 2)
        iy = np.clip(np.floor(fy).astype(np.int64), 0, self.ny - 2)
        tx = fx - ix
        ty = fy - iy
        p = self.points
        return (
            p[iy, ix] * (1.0 - tx) * (1.0 - ty)
            + p[iy, ix + 1] * tx * (1.0 - ty)
            + p[iy + 1, ix] * (1.0 - tx) * ty
            + p[iy + 1, ix + 1] * tx * ty
        )

    def orientation_sample(self, max_cells: int = 256) -> float:
        """Fraction of sampled grid cells whose diagonal cross product is
        positive.  A spot check only; nothing is enforced."""
        step_y = max(1, (self.ny - 1) // int(math.sqrt(max_cells)))
        step_x = max(1, (self.nx - 1) // int(math.sqrt(max_cells)))
        pos = tot = 0
        for iy in range(0, self.ny - 1, step_y):
            for ix in range(0, self.nx - 1, step_x):
                du = self.points[iy, ix + 1] - self.points[iy, ix]
                dv = self.points[iy + 1, ix] - self.points[iy, ix]
                cross = du.real * dv.imag - du.imag * dv.real
                tot += 1
                if cross > 0:
                    pos += 1
        return pos / tot if tot else float("nan")


def grid_to_planar_map(gm: GridMap, name: str = "grid") -> PlanarMap:
    frac = gm.orientation_sample()
    return PlanarMap(
        name,
        gm.evaluate,
        gm.domain,
        orientation_preserving=True if frac == 1.0 else (False if frac == 0.0 else None),
        extras={"grid": gm, "orientation_positive_fraction": frac},
    )


def load_grid_map(source) -> PlanarMap:
    """Parse a grid-map document and return the interpolating map.

    ``source`` may be bytes, text, or a readable file object.  The document is
    a JSON object with fields ``domain`` = [x0, y0, x1, y1], ``nx``, ``ny``
    and ``points`` = nx*ny pairs [X, Y] in row-major order with y varying
    slowest.
    """
    if hasattr(source, "read"):
        raw = source.read()
    else:
        raw = source
    if isinstance(raw, (bytes, bytearray)):
        raw = raw.decode("utf-8", errors="strict")
    try:
        doc = json.loads(raw)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise GridFormatError(f"not a valid grid-map document: {exc}") from exc
    if not isinstance(doc, dict):
        raise GridFormatError("grid-map document must be a JSON object")
    missing = [k for k in ("domain", "nx", "ny", "points") if k not in doc]
    if missing:
        raise GridFormatError(f"grid-map document missing fields: {missing}")
    dom = doc["domain"]
    if not (isinstance(dom, list) and len(dom) == 4):
        raise GridFormatError("'domain' must be a 4-element array [x0, y0, x1, y1]")
    try:
        nx = int(doc["nx"])
        ny = int(doc["ny"])
        pts = np.asarray(doc["points"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise GridFormatError(f"bad grid payload: {exc}") from exc
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise GridFormatError("'points' must be an array of [X, Y] pairs")
    if pts.shape[0] != nx * ny:
        raise GridFormatError(f"expected nx*ny = {nx * ny} points, got {pts.shape[0]}")
    grid = pts[:, 0] + 1j * pts[:, 1]
    gm = GridMap(float(dom[0]), float(dom[1]), float(dom[2]), float(dom[3]),
                 nx, ny, grid.reshape(ny, nx))
    return grid_to_planar_map(gm)


def grid_from_map(pm: PlanarMap, bounds: tuple[float, float, float, float],
                  nx: int, ny: int) -> GridMap:
    """Sample ``pm`` on a regular nx-by-ny grid over ``bounds``."""
    x0, y0, x1, y1 = bounds
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    zz = xs[None, :] + 1j * ys[:, None]
    vals = pm.eval_many(zz.ravel()).reshape(ny, nx)
    return GridMap(x0, y0, x1, y1, nx, ny, vals)


def save_grid_map(gm: GridMap) -> str:
    """Serialize to the grid-map document format accepted by load_grid_map."""
    pts = gm.points.reshape(-1)
    doc = {
        "domain": [gm.x0, gm.y0, gm.x1, gm.y1],
        "nx": gm.nx,
        "ny": gm.ny,
        "points": [[float(p.real), float(p.imag)] for p in pts],
    }
    return json.dumps(doc)
