"""Exact arithmetic on the triangular lattice Z + Z*omega, tilings of the unit
equilateral triangle at dyadic scales, chain distances between tile edges, and
empirical verification of the chain propagation bounds.

Coordinates are integer pairs (m, n) meaning (m + n*omega) / 2^k at scale k,
with omega = e^{i pi/3}.  The squared length of m + n*omega is the quadratic
form m^2 + m*n + n^2, so every length assertion about lattice points reduces
to integer (or Fraction) arithmetic.  No floating point enters any of the
exactness checks.

The chain bound: within one tiled equilateral triangle whose image skew is at
most sigma, any two image edge lengths differ by a factor at most sigma.
Walking a chain of tiles that share edges multiplies the factor once per
step, so edges at chain distance n satisfy
|f(v)-f(w)| <= sigma^n |f(v')-f(w')|.  Chain distance is the BFS distance in
the graph whose nodes are tile edges and whose adjacency is co-membership in
a tile (distance 0 for identical edges).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import NonInjectiveImageError
from .maps import PlanarMap
from .reports import BoundReport

SQRT3 = math.sqrt(3.0)

#: Memory guard for tiling construction.
DEFAULT_MAX_K = 10


@dataclass(frozen=True)
class LatticeCoord:
    """Exact lattice point (m + n*omega) / 2^k."""

    m: int
    n: int
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("scale k must be nonnegative")

    def value(self) -> complex:
        scale = 2.0 ** -self.k
        return complex((self.m + 0.5 * self.n) * scale, (SQRT3 / 2.0) * self.n * scale)

    def rescaled(self, k2: int) -> "LatticeCoord":
        """Same point expressed at a finer scale k2 >= k."""
        if k2 < self.k:
            raise ValueError(f"cannot rescale from k={self.k} to coarser k={k2}")
        f = 2 ** (k2 - self.k)
        return LatticeCoord(self.m * f, self.n * f, k2)

    def norm_sq(self) -> Fraction:
        """Exact squared modulus, (m^2 + m n + n^2) / 4^k."""
        return Fraction(self.m * self.m + self.m * self.n + self.n * self.n, 4**self.k)

    def __sub__(self, other: "LatticeCoord") -> "LatticeCoord":
        k = max(self.k, other.k)
        a = self.rescaled(k)
        b = other.rescaled(k)
        return LatticeCoord(a.m - b.m, a.n - b.n, k)


def _vertex_xy(m, n, s):
    """Float coordinates of (m + n*omega)/s for integer arrays m, n."""
    return (m + 0.5 * n) / s + 1j * ((SQRT3 / 2.0) * n / s)


class TilingK:
    """The 4^k lattice triangles of side 2^-k tiling the closed unit triangle
    with corners 0, 1 and omega.

    Triangles and edges are stored as integer (m, n) coordinate arrays at
    scale k; edges are canonicalized with the smaller vertex id first and are
    sorted by encoded id, which fixes deterministic indices.
    """

    def __init__(self, k: int, max_k: int = DEFAULT_MAX_K):
        if k < 0:
            raise ValueError("k must be nonnegative")
        if k > max_k:
            raise ValueError(f"k={k} above the configured cap {max_k}")
        self.k = k
        s = 2**k
        self.s = s
        mm, nn = np.meshgrid(np.arange(s, dtype=np.int64), np.arange(s, dtype=np.int64),
                             indexing="ij")
        up = mm + nn <= s - 1
        mu, nu = mm[up], nn[up]
        up_tris = np.stack(
            [np.stack([mu, nu], 1), np.stack([mu + 1, nu], 1), np.stack([mu, nu + 1], 1)], axis=1
        )
        down = mm + nn <= s - 2
        md, nd = mm[down], nn[down]
        down_tris = np.stack(
            [np.stack([md + 1, nd], 1), np.stack([md, nd + 1], 1), np.stack([md + 1, nd + 1], 1)],
            axis=1,
        )
        self.triangles = np.concatenate([up_tris, down_tris])  # (N, 3, 2)
        n_tris = self.triangles.shape[0]

        vids = self.triangles[:, :, 0] * (s + 1) + self.triangles[:, :, 1]  # (N, 3)
        pair_a = np.stack([vids[:, 0], vids[:, 1], vids[:, 2]], 1).ravel()
        pair_b = np.stack([vids[:, 1], vids[:, 2], vids[:, 0]], 1).ravel()
        lo = np.minimum(pair_a, pair_b)
        hi = np.maximum(pair_a, pair_b)
        keys = lo * np.int64((s + 1) * (s + 1)) + hi
        self._edge_keys, inverse = np.unique(keys, return_inverse=True)
        self.tri_edges = inverse.reshape(n_tris, 3)
        elo = self._edge_keys // ((s + 1) * (s + 1))
        ehi = self._edge_keys % ((s + 1) * (s + 1))
        self.edges = np.stack(
            [np.stack([elo // (s + 1), elo % (s + 1)], 1), np.stack([ehi // (s + 1), ehi % (s + 1)], 1)],
            axis=1,
        )  # (E, 2, 2)
        self._edge_tri_count = np.bincount(self.tri_edges.ravel(), minlength=self.edge_count)

    @property
    def triangle_count(self) -> int:
        return int(self.triangles.shape[0])

    @property
    def edge_count(self) -> int:
        return int(self._edge_keys.shape[0])

    def edge_incidence(self) -> np.ndarray:
        """Number of tiles containing each edge (2 interior, 1 boundary)."""
        return self._edge_tri_count

    def boundary_edge_counts(self) -> dict[str, int]:
        """Edges lying on each side of the unit triangle."""
        a, b = self.edges[:, 0], self.edges[:, 1]
        bottom = (a[:, 1] == 0) & (b[:, 1] == 0)
        left = (a[:, 0] == 0) & (b[:, 0] == 0)
        hyp = (a.sum(1) == self.s) & (b.sum(1) == self.s)
        return {"bottom": int(bottom.sum()), "left": int(left.sum()), "hyp": int(hyp.sum())}

    def edge_id(self, v1: tuple[int, int], v2: tuple[int, int]) -> int:
        """Index of the edge with the given endpoint coordinates (scale-k
        integers); raises ValueError when not an edge of the tiling."""
        s = self.s
        ia = v1[0] * (s + 1) + v1[1]
        ib = v2[0] * (s + 1) + v2[1]
        if not (0 <= v1[0] <= s and 0 <= v1[1] <= s and 0 <= v2[0] <= s and 0 <= v2[1] <= s):
            raise ValueError(f"edge {v1}-{v2} not in the k={self.k} tiling")
        key = min(ia, ib) * np.int64((s + 1) * (s + 1)) + max(ia, ib)
        pos = int(np.searchsorted(self._edge_keys, key))
        if pos >= self.edge_count or self._edge_keys[pos] != key:
            raise ValueError(f"edge {v1}-{v2} not in the k={self.k} tiling")
        return pos

    def has_vertex(self, m: int, n: int) -> bool:
        return 0 <= m and 0 <= n and m + n <= self.s

    def is_interior_vertex(self, m: int, n: int) -> bool:
        return 0 < m and 0 < n and m + n < self.s

    def triangle_vertex_values(self) -> np.ndarray:
        """Complex vertex coordinates of every tile, shape (N, 3)."""
        t = self.triangles
        return _vertex_xy(t[:, :, 0], t[:, :, 1], self.s)

    def unique_vertices(self) -> tuple[np.ndarray, np.ndarray]:
        """(vertex ids sorted, complex values) over all tile corners."""
        vids = np.unique(self.triangles[:, :, 0] * (self.s + 1) + self.triangles[:, :, 1])
        m = vids // (self.s + 1)
        n = vids % (self.s + 1)
        return vids, _vertex_xy(m, n, self.s)

    def chain_graph(self) -> "ChainGraph":
        return ChainGraph(self)


def build_tiling(k: int, max_k: int = DEFAULT_MAX_K) -> TilingK:
    """Enumerate the scale-k tiling (4^k tiles); k above ``max_k`` is refused
    as a memory guard."""
    return TilingK(k, max_k=max_k)


class ChainGraph:
    """Edges of a tiling, adjacent iff they bound a common tile."""

    def __init__(self, tiling: TilingK):
        self.tiling = tiling
        order = np.argsort(tiling.tri_edges.ravel(), kind="stable")
        tri_of = order // 3
        counts = tiling.edge_incidence()
        starts = np.concatenate(([0], np.cumsum(counts)))
        self._edge_tris = [tri_of[starts[e] : starts[e + 1]] for e in range(tiling.edge_count)]

    def neighbors(self, eid: int):
        out = []
        for t in self._edge_tris[eid]:
            for other in self.tiling.tri_edges[t]:
                if other != eid:
                    out.append(int(other))
        return out

    def distances_from(self, eid: int) -> np.ndarray:
        """BFS distances from one edge to every edge (-1 if unreachable)."""
        dist = np.full(self.tiling.edge_count, -1, dtype=np.int64)
        dist[eid] = 0
        q = deque([eid])
        while q:
            e = q.popleft()
            d = dist[e] + 1
            for nb in self.neighbors(e):
                if dist[nb] < 0:
                    dist[nb] = d
                    q.append(nb)
        return dist


def chain_distance(graph: ChainGraph, e1, e2) -> int:
    """Minimal number of shared-tile steps between two edges (0 iff equal).

    Edges are given as ((m1, n1), (m2, n2)) endpoint pairs at the tiling's
    scale, or as integer edge indices.
    """
    eid1 = e1 if isinstance(e1, (int, np.integer)) else graph.tiling.edge_id(*e1)
    eid2 = e2 if isinstance(e2, (int, np.integer)) else graph.tiling.edge_id(*e2)
    if not (0 <= eid1 < graph.tiling.edge_count and 0 <= eid2 < graph.tiling.edge_count):
        raise ValueError("edge index out of range")
    if eid1 == eid2:
        return 0
    dist = graph.distances_from(eid1)
    d = int(dist[eid2])
    if d < 0:
        raise ValueError("edges not connected (cannot happen in a tiling)")
    return d


# Distinguished interior edge of the scale-9 tiling.  The left endpoint is
# 1/2 - 85/512 + (170/512) omega = 1/2 + (85 sqrt(3)/512) i, one lattice step
# left of the midpoint row closest to the centroid; the right endpoint is one
# unit step along the real direction.
P_COORD = LatticeCoord(171, 170, 9)
Q_COORD = LatticeCoord(172, 170, 9)


def locate_pq(k: int = 9, tiling: TilingK | None = None) -> tuple[LatticeCoord, LatticeCoord]:
    """The distinguished horizontal edge [p, q] of the scale-9 tiling, with
    every exactness assertion checked in integer/Fraction arithmetic:

    * p and q are lattice vertices, interior to the unit triangle;
    * [p, q] is an edge of the tiling and |p - q| = 2^-9 exactly;
    * the centroid xi = (1 + omega)/3 satisfies |xi - p|^2 = 1/(3*4^9),
      i.e. |xi - p| = sqrt(3)/1536.
    """
    if k != 9:
        raise ValueError("the distinguished pair is defined at scale k=9 only")
    if tiling is None:
        tiling = build_tiling(9)
    p, q = P_COORD, Q_COORD
    s = tiling.s
    if not (tiling.has_vertex(p.m, p.n) and tiling.has_vertex(q.m, q.n)):
        raise AssertionError("p, q are not vertices of the scale-9 lattice")
    if not (tiling.is_interior_vertex(p.m, p.n) and tiling.is_interior_vertex(q.m, q.n)):
        raise AssertionError("p, q are not interior to the unit triangle")
    tiling.edge_id((p.m, p.n), (q.m, q.n))  # raises if absent
    if (q - p).norm_sq() != Fraction(1, 4**9):
        raise AssertionError("|p - q| != 2^-9")
    # |xi - p|^2 with xi = (s/3, s/3) in scale-9 coordinates.
    dm = Fraction(p.m) - Fraction(s, 3)
    dn = Fraction(p.n) - Fraction(s, 3)
    if (dm * dm + dm * dn + dn * dn) / 4**9 != Fraction(1, 3 * 4**9):
        raise AssertionError("|xi - p|^2 != 1/(3*4^9)")
    return p, q


def central_horizontal_edge(tiling: TilingK) -> tuple[tuple[int, int], tuple[int, int]]:
    """The horizontal edge whose midpoint is nearest the centroid, ties broken
    lexicographically on (m, n); at scale 9 this role is played by the
    distinguished pair instead."""
    a, b = tiling.edges[:, 0], tiling.edges[:, 1]
    horiz = (a[:, 1] == b[:, 1]) & (np.abs(a[:, 0] - b[:, 0]) == 1)
    hm = np.minimum(a[horiz, 0], b[horiz, 0])
    hn = a[horiz, 1]
    s = tiling.s
    # Squared centroid distance of midpoints (m + 1/2, n), exact up to the
    # common 1/(4 s^2) factor: f(m, n) = (6m+3-2s)^2 + (6m+3-2s)(6n-2s)*... use
    # the quadratic form on (m + 1/2 - s/3, n - s/3) scaled by 36:
    x = 6 * hm + 3 - 2 * s
    y = 6 * hn - 2 * s
    q = x * x + x * y + y * y
    best = np.min(q)
    cand = np.nonzero(q == best)[0]
    pick = cand[np.lexsort((hn[cand], hm[cand]))[0]]
    m, n = int(hm[pick]), int(hn[pick])
    return (m, n), (m + 1, n)


def measured_sigma(pm: PlanarMap, tiling: TilingK) -> float:
    """Max image skew over the tiling's triangles under ``pm``."""
    imgs = _vertex_images(pm, tiling)
    tri_imgs = imgs[_triangle_vertex_indices(tiling)]
    skews = kernels.skew_batch(tri_imgs[:, 0], tri_imgs[:, 1], tri_imgs[:, 2])
    if not np.all(np.isfinite(skews)):
        raise NonInjectiveImageError(f"map '{pm.name}' degenerates a tile of the k={tiling.k} tiling")
    return float(np.max(skews))


def _triangle_vertex_indices(tiling: TilingK) -> np.ndarray:
    """Indices of each tile corner in the sorted unique-vertex array."""
    vids, _ = tiling.unique_vertices()
    tri_vids = tiling.triangles[:, :, 0] * (tiling.s + 1) + tiling.triangles[:, :, 1]
    return np.searchsorted(vids, tri_vids)


def _vertex_images(pm: PlanarMap, tiling: TilingK) -> np.ndarray:
    _, vals = tiling.unique_vertices()
    return pm.eval_many(vals)


def _edge_image_lengths(pm: PlanarMap, tiling: TilingK) -> np.ndarray:
    vids, _ = tiling.unique_vertices()
    imgs = _vertex_images(pm, tiling)
    s = tiling.s
    ia = np.searchsorted(vids, tiling.edges[:, 0, 0] * (s + 1) + tiling.edges[:, 0, 1])
    ib = np.searchsorted(vids, tiling.edges[:, 1, 0] * (s + 1) + tiling.edges[:, 1, 1])
    lengths = np.abs(imgs[ia] - imgs[ib])
    if np.any(lengths == 0.0):
        raise NonInjectiveImageError(
            f"map '{pm.name}' collapses an edge of the k={tiling.k} tiling"
        )
    return lengths


def verify_chain_inequality(pm: PlanarMap, k: int, sigma_hat: float | None = None,
                            pairs: int = 1000, seed: int = 0, eps_tol: float = 0.01,
                            tiling: TilingK | None = None) -> BoundReport:
    """Sample edge pairs and check
    log|f(v)-f(w)| <= n log(sigma_hat (1+eps_tol)) + log|f(v')-f(w')| with n
    the chain distance; reports the worst margin over the sample.

    ``sigma_hat`` defaults to the measured image-skew supremum over the
    tiling's own triangles, which is exactly the constant the chain steps use.
    """
    if tiling is None:
        tiling = build_tiling(k)
    if sigma_hat is None:
        sigma_hat = measured_sigma(pm, tiling)
    lengths = _edge_image_lengths(pm, tiling)
    log_len = np.log(lengths)
    graph = tiling.chain_graph()
    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(11,)))
    e1s = rng.integers(0, tiling.edge_count, size=pairs)
    e2s = rng.integers(0, tiling.edge_count, size=pairs)
    log_sig = math.log(sigma_hat * (1.0 + eps_tol))
    worst = -math.inf
    worst_rec = None
    dist_cache: dict[int, np.ndarray] = {}
    for e1, e2 in zip(e1s, e2s):
        e1 = int(e1)
        e2 = int(e2)
        if e1 not in dist_cache:
            dist_cache[e1] = graph.distances_from(e1)
        n = int(dist_cache[e1][e2])
        excess = log_len[e1] - n * log_sig - log_len[e2]
        if excess > worst:
            worst = excess
            worst_rec = {
                "edge": [tiling.edges[e1, 0].tolist(), tiling.edges[e1, 1].tolist()],
                "against": [tiling.edges[e2, 0].tolist(), tiling.edges[e2, 1].tolist()],
                "chain_distance": n,
                "log_excess": float(excess),
            }
    report = BoundReport(
        title=f"chain inequality, k={k}, map {pm.name}",
        extras={
            "sigma_hat": float(sigma_hat),
            "eps_tol": eps_tol,
            "pairs": int(pairs),
            "seed": int(seed),
            "worst_pair": worst_rec,
        },
    )
    report.add(
        "max over pairs of log|f(e1)| - n*log(sigma_hat*(1+eps)) - log|f(e2)|",
        worst, 0.0, "<=", unit="log",
        note="chain propagation bound over sampled edge pairs",
        tol=1e-12,
    )
    return report


def verify_side_bound(pm: PlanarMap, k: int, tiling: TilingK | None = None) -> BoundReport:
    """Check log L(f(T)) <= log N + N log(sigma_hat) + log|f(p)-f(q)| in log
    space, with N = 4^k tiles, sigma_hat the measured per-tiling skew, and
    [p, q] the distinguished edge (scale 9) or the central horizontal edge."""
    if tiling is None:
        tiling = build_tiling(k)
    sigma_hat = measured_sigma(pm, tiling)
    if k == 9:
        p, q = locate_pq(9, tiling)
        v1, v2 = (p.m, p.n), (q.m, q.n)
    else:
        v1, v2 = central_horizontal_edge(tiling)
    corners = np.array([0.0 + 0.0j, 1.0 + 0.0j, complex(0.5, SQRT3 / 2.0)])
    f_corners = pm.eval_many(corners)
    big_l = max(
        abs(f_corners[0] - f_corners[1]),
        abs(f_corners[1] - f_corners[2]),
        abs(f_corners[2] - f_corners[0]),
    )
    ends = pm.eval_many(np.array([_vertex_xy(v1[0], v1[1], tiling.s),
                                  _vertex_xy(v2[0], v2[1], tiling.s)]))
    ref = abs(ends[0] - ends[1])
    if ref == 0.0:
        raise NonInjectiveImageError(f"map '{pm.name}' collapses the reference edge {v1}-{v2}")
    n_tiles = tiling.triangle_count
    lhs = math.log(big_l)
    rhs = math.log(n_tiles) + n_tiles * math.log(sigma_hat) + math.log(ref)
    report = BoundReport(
        title=f"side bound, k={k}, map {pm.name}",
        extras={
            "sigma_hat": float(sigma_hat),
            "N": n_tiles,
            "edge": [list(v1), list(v2)],
            "L_f_T": float(big_l),
            "ref_edge_image_length": float(ref),
        },
    )
    report.add("log L(f(T))", lhs, rhs, "<=", unit="log",
               note="longest image side vs N*sigma^N times the reference edge image",
               tol=1e-12)
    return report
