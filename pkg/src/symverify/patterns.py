"""Detector-array patterns under the competing hypotheses.

The surviving particle lands on a downstream detector array.  If the
two-particle source was (anti)symmetrized, the array sees the pure-state
density |alpha_f psi_g(r) + s alpha_g psi_f(r)|^2, interference term
included.  If it was not, the array sees the incoherent mixture
|psi_f(R)|^2 |psi_g(r)|^2 + |psi_g(R)|^2 |psi_f(r)|^2.  Distinguishing the
two is the whole verification game; total variation distance quantifies
"coincide or not" and log-likelihood drives sign inference.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch, ModelDegenerate, NodalPointUndefined, NODAL_EPS
from .wavepacket import (
    ModeDistribution,
    PositionGrid,
    overlap,
    position_amplitude,
    to_position,
)

PATTERN_NORM_TOL = 1e-9
DEGENERATE_TV = 1e-8
SIGN_GAP_NATS = 3.0
_LOG_FLOOR = 1e-300


class PatternKind(enum.Enum):
    PURE_MODEL = "pure"
    MIXTURE_MODEL = "mixture"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class DetectionPattern:
    """Probability density over a detector-array grid.

    density integrates to 1 under the array quadrature (exactly, by
    construction, for empirical histograms).  `counts` carries the raw
    per-node event counts for empirical patterns and is None for models.
    `meta` is a free-form provenance record (source, R, sign, sample count).
    """

    grid: PositionGrid
    density: np.ndarray
    kind: PatternKind
    meta: dict = field(default_factory=dict)
    counts: np.ndarray | None = None

    def __post_init__(self):
        dens = np.ascontiguousarray(self.density, dtype=np.float64)
        if dens.shape != (self.grid.m,):
            raise ValueError(f"density shape {dens.shape} does not match grid m={self.grid.m}")
        if np.any(dens < 0):
            raise ValueError("density must be nonnegative")
        total = np.sum(dens) * self.grid.spacing
        if abs(total - 1.0) > PATTERN_NORM_TOL:
            raise ValueError(f"density integrates to {total!r}, expected 1 within {PATTERN_NORM_TOL}")
        dens.setflags(write=False)
        object.__setattr__(self, "density", dens)
        if self.counts is not None:
            cnt = np.ascontiguousarray(self.counts, dtype=np.int64)
            cnt.setflags(write=False)
            object.__setattr__(self, "counts", cnt)

    @property
    def total_counts(self) -> int:
        return 0 if self.counts is None else int(np.sum(self.counts))


def _normalized(raw: np.ndarray, dr: float) -> np.ndarray:
    total = np.sum(raw) * dr
    if total <= 0:
        raise ValueError("pattern has no probability mass on the array")
    return raw / total


def pure_pattern(outcome, array: PositionGrid) -> DetectionPattern:
    """Array density for the surviving particle in the pure-superposition case.

    density(r) ~ |a_f|^2 |psi_g(r)|^2 + |a_g|^2 |psi_f(r)|^2
                 + s * 2 Re(a_f* psi_g*(r) a_g psi_f(r)),
    normalized over the array.  Pointwise consistent with |to_position(h)|^2.
    """
    state = outcome.state
    sp_f = to_position(state.f, array)
    sp_g = to_position(state.g, array)
    a_f, a_g, s = outcome.alpha_f, outcome.alpha_g, outcome.sign_used
    raw = (
        abs(a_f) ** 2 * np.abs(sp_g.amp) ** 2
        + abs(a_g) ** 2 * np.abs(sp_f.amp) ** 2
        + s * 2.0 * np.real(np.conj(a_f) * np.conj(sp_g.amp) * a_g * sp_f.amp)
    )
    # The cross term can push individual nodes a hair below zero in floating
    # point when the density has exact zeros; clamp the rounding dust.
    raw = np.maximum(raw, 0.0)
    return DetectionPattern(
        array,
        _normalized(raw, array.spacing),
        PatternKind.PURE_MODEL,
        meta={
            "R": outcome.R,
            "sign": s,
            "truncation_warning": sp_f.truncation_warning or sp_g.truncation_warning,
        },
    )


def mixture_pattern(
    f: ModeDistribution, g: ModeDistribution, R: float, array: PositionGrid
) -> DetectionPattern:
    """Array density when the surviving particle is a classical mixture.

    density(r) ~ |psi_f(R)|^2 |psi_g(r)|^2 + |psi_g(R)|^2 |psi_f(r)|^2,
    weights normalized by |psi_f(R)|^2 + |psi_g(R)|^2 and the whole density
    by the array quadrature.  Identical to the non-symmetrized two-detector
    case averaged over which detector fired.
    """
    w_f = abs(position_amplitude(f, R)) ** 2
    w_g = abs(position_amplitude(g, R)) ** 2
    if w_f + w_g < NODAL_EPS:
        raise NodalPointUndefined(f"both spatial amplitudes vanish at R={R}")
    sp_f = to_position(f, array)
    sp_g = to_position(g, array)
    raw = w_f * np.abs(sp_g.amp) ** 2 + w_g * np.abs(sp_f.amp) ** 2
    return DetectionPattern(
        array,
        _normalized(raw, array.spacing),
        PatternKind.MIXTURE_MODEL,
        meta={
            "R": R,
            "truncation_warning": sp_f.truncation_warning or sp_g.truncation_warning,
        },
    )


def pattern_distance(a: DetectionPattern, b: DetectionPattern) -> float:
    """Total variation distance 0.5 * sum |a_j - b_j| dr, in [0, 1]."""
    if a.grid != b.grid:
        raise GridMismatch("pattern_distance requires a shared array grid")
    return float(0.5 * np.sum(np.abs(a.density - b.density)) * a.grid.spacing)


@dataclass(frozen=True)
class SignInference:
    """Outcome of the exchange-sign likelihood test.

    sign is +1, -1, or None (inconclusive); gap is the log-likelihood margin
    of the winning sign in nats.
    """

    sign: int | None
    gap: float
    log_likelihood_plus: float
    log_likelihood_minus: float


def _log_likelihood(counts: np.ndarray, model: DetectionPattern) -> float:
    probs = model.density * model.grid.spacing
    return float(np.sum(counts * np.log(np.maximum(probs, _LOG_FLOOR))))


def _sign_from_models(
    counts: np.ndarray,
    model_plus: DetectionPattern,
    model_minus: DetectionPattern,
    threshold: float,
) -> SignInference:
    if pattern_distance(model_plus, model_minus) < DEGENERATE_TV:
        raise ModelDegenerate(
            "sign models differ by less than "
            f"{DEGENERATE_TV} in total variation; sign is unidentifiable"
        )
    ll_p = _log_likelihood(counts, model_plus)
    ll_m = _log_likelihood(counts, model_minus)
    gap = abs(ll_p - ll_m)
    if gap <= threshold:
        return SignInference(None, gap, ll_p, ll_m)
    return SignInference(1 if ll_p > ll_m else -1, gap, ll_p, ll_m)


def infer_sign(
    empirical: DetectionPattern,
    f: ModeDistribution,
    g: ModeDistribution,
    R: float,
    threshold: float = SIGN_GAP_NATS,
) -> SignInference:
    """Recover the exchange sign from empirical counts at known f, g, R.

    Evaluates the multinomial log-likelihood of the counts under the pure
    model with s = +1 and s = -1 and returns the better sign when the gap
    exceeds `threshold` nats (default 3.0, ~e^3 likelihood ratio).
    """
    if empirical.counts is None or empirical.total_counts < 100:
        raise ValueError("sign inference needs an empirical pattern with >= 100 counts")
    # Late import: fock depends on this module, not vice versa.
    from .fock import Statistics, TwoParticleState, collapse

    models = {}
    for stats in (Statistics.BOSON, Statistics.FERMION):
        try:
            models[stats.sign] = pure_pattern(
                collapse(TwoParticleState(f, g, stats), R), empirical.grid
            )
        except NodalPointUndefined:
            # N^2 vanishes at R for this sign only: a detection happened
            # there, so this sign is ruled out outright.
            models[stats.sign] = None
    if models[1] is None and models[-1] is None:
        raise NodalPointUndefined(f"both sign models are undefined at R={R}")
    if models[1] is None or models[-1] is None:
        winner = 1 if models[-1] is None else -1
        return SignInference(winner, float("inf"), 0.0, 0.0)
    return _sign_from_models(empirical.counts, models[1], models[-1], threshold)


def save_pattern(pattern: DetectionPattern, path) -> None:
    """Write an `r,density` CSV preceded by a `# meta:` provenance line."""
    meta = pattern.meta
    parts = [f"kind={pattern.kind.value}"]
    if "R" in meta:
        parts.append(f"R={meta['R']:.17g}" if meta["R"] is not None else "R=marginal")
    if "sign" in meta and meta["sign"] is not None:
        parts.append(f"sign={meta['sign']:+d}")
    if pattern.counts is not None:
        parts.append(f"counts={pattern.total_counts}")
    with open(path, "w", newline="") as fh:
        fh.write("# meta: " + " ".join(parts) + "\n")
        fh.write("r,density\n")
        for r, d in zip(pattern.grid.points, pattern.density):
            fh.write(f"{r:.17g},{d:.17g}\n")
