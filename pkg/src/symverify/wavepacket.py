"""Momentum-grid mode distributions and their position-space transforms.

A single-particle multimode state is represented by a complex amplitude
f(p) tabulated on a uniform momentum grid, normalized under the left-point
quadrature rule sum |f(p_k)|^2 dp = 1.  Position-space amplitudes use the
plane-wave kernel (2 pi)^(-1/2) exp(i p r) with hbar = 1; all integrals are
left Riemann sums on uniform grids so that closed forms, brute-force
oracles and the implementation share one quadrature convention.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    DegenerateGrid,
    GridMismatch,
    NormalizationError,
    TruncationError,
)

NORM_TOL = 1e-10
BOUNDARY_DENSITY_TOL = 1e-8
SPACING_REL_TOL = 1e-9


def _check_grid(lo: float, hi: float, count: int, label: str) -> None:
    if count < 8:
        raise DegenerateGrid(f"{label}: need at least 8 points, got {count}")
    if not hi > lo:
        raise DegenerateGrid(f"{label}: upper bound {hi} must exceed lower bound {lo}")


@dataclass(frozen=True)
class MomentumGrid:
    """Uniform grid p_k = p_min + k*dp, k = 0..n-1 (natural units, hbar=1)."""

    p_min: float
    p_max: float
    n: int

    def __post_init__(self):
        _check_grid(self.p_min, self.p_max, self.n, "MomentumGrid")

    @property
    def spacing(self) -> float:
        return (self.p_max - self.p_min) / (self.n - 1)

    @cached_property
    def points(self) -> np.ndarray:
        p = self.p_min + self.spacing * np.arange(self.n)
        p.setflags(write=False)
        return p


@dataclass(frozen=True)
class PositionGrid:
    """Uniform grid of detector locations r_j = r_min + j*dr, j = 0..m-1."""

    r_min: float
    r_max: float
    m: int

    def __post_init__(self):
        _check_grid(self.r_min, self.r_max, self.m, "PositionGrid")

    @property
    def spacing(self) -> float:
        return (self.r_max - self.r_min) / (self.m - 1)

    @cached_property
    def points(self) -> np.ndarray:
        r = self.r_min + self.spacing * np.arange(self.m)
        r.setflags(write=False)
        return r


@dataclass(frozen=True)
class ModeDistribution:
    """Complex amplitude f(p_k) on a momentum grid, unit norm under quadrature.

    Instances are immutable; the amplitude array is marked read-only.
    Construct with :meth:`from_amplitudes` unless the input is already
    normalized to within NORM_TOL.
    """

    grid: MomentumGrid
    amp: np.ndarray

    def __post_init__(self):
        amp = np.ascontiguousarray(self.amp, dtype=np.complex128)
        if amp.shape != (self.grid.n,):
            raise ValueError(f"amplitude shape {amp.shape} does not match grid n={self.grid.n}")
        nrm = np.sum(np.abs(amp) ** 2) * self.grid.spacing
        if abs(nrm - 1.0) > NORM_TOL:
            raise NormalizationError(f"quadrature norm^2 = {nrm!r}, expected 1 within {NORM_TOL}")
        amp.setflags(write=False)
        object.__setattr__(self, "amp", amp)

    @classmethod
    def from_amplitudes(cls, grid: MomentumGrid, amp: np.ndarray) -> "ModeDistribution":
        """Build a distribution from arbitrary amplitudes, renormalizing on the grid."""
        amp = np.asarray(amp, dtype=np.complex128)
        nrm_sq = np.sum(np.abs(amp) ** 2) * grid.spacing
        if nrm_sq <= 0.0:
            raise NormalizationError("cannot normalize identically zero amplitudes")
        return cls(grid, amp / np.sqrt(nrm_sq))


@dataclass(frozen=True)
class SpatialAmplitude:
    """psi(r_j) on a position grid, with a truncation flag.

    truncation_warning is set when the boundary density |psi|^2 at either
    grid end exceeds BOUNDARY_DENSITY_TOL, signalling that the window is too
    narrow and Parseval-level accuracy is degraded (the result is still
    usable; accuracy claims are relaxed).
    """

    grid: PositionGrid
    amp: np.ndarray
    truncation_warning: bool = field(default=False)

    def __post_init__(self):
        amp = np.ascontiguousarray(self.amp, dtype=np.complex128)
        if amp.shape != (self.grid.m,):
            raise ValueError(f"amplitude shape {amp.shape} does not match grid m={self.grid.m}")
        amp.setflags(write=False)
        object.__setattr__(self, "amp", amp)

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.amp) ** 2


def make_gaussian(grid: MomentumGrid, p0: float, sigma: float, x0: float) -> ModeDistribution:
    """Gaussian wavepacket amp_k ~ exp(-(p_k-p0)^2/(4 sigma^2)) exp(-i p_k x0).

    The |amp|^2 density has standard deviation sigma; x0 sets the position
    of the packet center (a pure phase in momentum space).  Requires the
    5-sigma support [p0 - 5 sigma, p0 + 5 sigma] to fit inside the grid.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if p0 - 5 * sigma < grid.p_min or p0 + 5 * sigma > grid.p_max:
        raise TruncationError(
            f"5-sigma support [{p0 - 5 * sigma}, {p0 + 5 * sigma}] exceeds grid "
            f"[{grid.p_min}, {grid.p_max}]"
        )
    p = grid.points
    amp = np.exp(-((p - p0) ** 2) / (4.0 * sigma**2)) * np.exp(-1j * p * x0)
    return ModeDistribution.from_amplitudes(grid, amp)


def superpose(f: ModeDistribution, g: ModeDistribution, c_f: complex, c_g: complex) -> ModeDistribution:
    """Normalized linear combination c_f*f + c_g*g on the shared grid.

    Handy for engineering spatial nodes (e.g. an odd combination of two
    position-offset Gaussians has an exact zero of psi at the midpoint).
    """
    if f.grid != g.grid:
        raise GridMismatch("superpose requires a shared momentum grid")
    return ModeDistribution.from_amplitudes(f.grid, c_f * f.amp + c_g * g.amp)


def position_amplitude(f: ModeDistribution, R: float) -> complex:
    """psi_f(R) = sum_k (2 pi)^(-1/2) exp(i p_k R) f(p_k) dp."""
    p = f.grid.points
    return complex(np.sum(np.exp(1j * p * R) * f.amp) * f.grid.spacing / np.sqrt(2.0 * np.pi))


def overlap(f: ModeDistribution, g: ModeDistribution) -> complex:
    """One-particle overlap <1_g|1_f> = sum_k g*(p_k) f(p_k) dp."""
    if f.grid != g.grid:
        raise GridMismatch("overlap requires a shared momentum grid")
    return complex(np.sum(np.conj(g.amp) * f.amp) * f.grid.spacing)


def transform_matrix(out: PositionGrid, grid: MomentumGrid) -> np.ndarray:
    """Plane-wave kernel matrix K[j, k] = (2 pi)^(-1/2) exp(i p_k r_j) dp.

    to_position(f) is K @ f.amp; exposed so batch evaluations (detector
    tables, marginal models) reuse one matrix.
    """
    return (
        np.exp(1j * np.outer(out.points, grid.points))
        * grid.spacing
        / np.sqrt(2.0 * np.pi)
    )


def to_position(f: ModeDistribution, out: PositionGrid) -> SpatialAmplitude:
    """Transform a mode distribution to the position grid.

    Pointwise identical to position_amplitude at every grid node.  Sets the
    truncation flag if the boundary density exceeds BOUNDARY_DENSITY_TOL.
    """
    amp = transform_matrix(out, f.grid) @ f.amp
    boundary = max(abs(amp[0]) ** 2, abs(amp[-1]) ** 2)
    return SpatialAmplitude(out, amp, truncation_warning=bool(boundary >= BOUNDARY_DENSITY_TOL))


def save_mode_distribution(f: ModeDistribution, path) -> None:
    """Write a `p,re,im` CSV with 17 significant digits per field."""
    with open(path, "w", newline="") as fh:
        fh.write("p,re,im\n")
        for p, a in zip(f.grid.points, f.amp):
            fh.write(f"{p:.17g},{a.real:.17g},{a.imag:.17g}\n")


def load_mode_distribution(path) -> ModeDistribution:
    """Load a tabulated `p,re,im` CSV; validates uniform spacing, renormalizes."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header] != ["p", "re", "im"]:
            raise ValueError(f"{path}: expected header 'p,re,im', got {header}")
        rows = [(float(a), float(b), float(c)) for a, b, c in reader]
    if len(rows) < 8:
        raise DegenerateGrid(f"{path}: need at least 8 rows, got {len(rows)}")
    p = np.array([row[0] for row in rows])
    amp = np.array([complex(row[1], row[2]) for row in rows])
    steps = np.diff(p)
    dp = (p[-1] - p[0]) / (len(p) - 1)
    if dp <= 0 or np.any(np.abs(steps - dp) > SPACING_REL_TOL * abs(dp)):
        raise ValueError(f"{path}: grid spacing is not uniform within {SPACING_REL_TOL} relative")
    grid = MomentumGrid(float(p[0]), float(p[-1]), len(p))
    return ModeDistribution.from_amplitudes(grid, amp)
