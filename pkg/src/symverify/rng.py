"""Deterministic counter-based random streams.

Every (seed, stream) pair names an independent substream whose draws are a
pure function of (seed, stream, draw index).  Trials of a Monte Carlo run
use their trial index as the stream, so randomness cannot be reordered by
chunking, worker count, or backend choice.
"""

from __future__ import annotations

import numpy as np

from . import _kernels


class CounterStream:
    """Sequential view over one substream: uniform() advances a draw cursor."""

    def __init__(self, seed: int, stream: int = 0):
        if seed < 0 or seed >= 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        self.seed = int(seed)
        self.stream = int(stream)
        self.cursor = 0

    def uniform(self, size: int | None = None):
        """One float in [0, 1), or an array of `size` consecutive draws."""
        n = 1 if size is None else int(size)
        out = _kernels.stream_uniforms(self.seed, self.stream, self.cursor, n)
        self.cursor += n
        return float(out[0]) if size is None else out

    def spawn(self, stream: int) -> "CounterStream":
        """Fresh stream under the same seed (cursor at zero)."""
        return CounterStream(self.seed, stream)

    def __repr__(self):
        return f"CounterStream(seed={self.seed}, stream={self.stream}, cursor={self.cursor})"


def sample_discrete(cdf: np.ndarray, u) -> np.ndarray | int:
    """Inverse-CDF lookup: first index with cdf[idx] > u.

    `cdf` must be a nondecreasing array whose last entry is exactly 1.0
    (see `make_cdf`), so every u in [0, 1) maps to a valid index and
    zero-probability cells are never selected.
    """
    idx = np.searchsorted(cdf, u, side="right")
    return idx if np.ndim(u) else int(idx)


def make_cdf(weights: np.ndarray) -> np.ndarray:
    """Normalized cumulative distribution with the last entry pinned to 1.0."""
    w = np.asarray(weights, dtype=np.float64)
    total = w.sum()
    if not total > 0:
        raise ValueError("weights must have positive total mass")
    cdf = np.cumsum(w / total)
    cdf[-1] = 1.0
    return cdf
