"""Seeded low-discrepancy streams shared by the sampled estimators.

Radical-inverse (van der Corput / Halton) sequences with a seeded rotation
offset: the seed shifts every coordinate modulo 1, so distinct seeds give
distinct but equally well-spread families, while for a fixed seed the first n
samples are always a prefix of the first m > n.  That prefix property is what
makes sampled suprema monotone in the sample counts.
"""

from __future__ import annotations

import numpy as np


def radical_inverse(indices: np.ndarray, base: int) -> np.ndarray:
    """Van der Corput radical inverse of each index in the given base."""
    idx = np.asarray(indices, dtype=np.int64).copy()
    out = np.zeros(idx.shape, dtype=np.float64)
    denom = np.float64(base)
    while np.any(idx > 0):
        out += (idx % base) / denom
        idx //= base
        denom *= base
    return out


class HaltonStream:
    """Seed-rotated Halton points in [0, 1)^d, one prime base per dimension."""

    _BASES = (2, 3, 5, 7, 11, 13)

    def __init__(self, seed: int, dims: int, stream_id: int = 0):
        if dims > len(self._BASES):
            raise ValueError(f"at most {len(self._BASES)} dimensions supported")
        self.dims = dims
        ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream_id),))
        self._offsets = np.random.default_rng(ss).random(dims)

    def take(self, start: int, count: int) -> np.ndarray:
        """Samples with indices [start, start + count), shape (count, dims).
        Index 0 of the raw sequence is skipped (it is the all-zeros point)."""
        idx = np.arange(start + 1, start + count + 1, dtype=np.int64)
        cols = [
            (radical_inverse(idx, self._BASES[d]) + self._offsets[d]) % 1.0
            for d in range(self.dims)
        ]
        return np.stack(cols, axis=1)


def disk_points(u: np.ndarray, center: complex, radius: float) -> np.ndarray:
    """Map unit-square samples (u1, u2) to area-uniform points of a disk."""
    rho = radius * np.sqrt(u[:, 0])
    phi = 2.0 * np.pi * u[:, 1]
    return center + rho * np.exp(1j * phi)


def orientation_angles(seed: int, count: int, stream_id: int = 1) -> np.ndarray:
    """First ``count`` seeded orientations in [0, 2*pi/3).

    An equilateral vertex set is invariant under rotation by 2*pi/3 and its
    reflections are rotations of each other, so this range covers every
    equilateral triangle of given center and size exactly once.
    """
    stream = HaltonStream(seed, 1, stream_id=stream_id)
    return (2.0 * np.pi / 3.0) * stream.take(0, count)[:, 0]
