"""Monte Carlo simulation of the two-stage verification scheme.

Stage one: the pair interacts with the main detector; one-detection events
are postselected (ideal one/two-event discrimination, so every trial is a
valid event).  The detection position R is drawn from the Born-rule density
of the unnormalized collapsed state, N^2(R).  Stage two: the survivor flies
to a downstream detector array and lands at r, drawn from the survivor's
spatial density.  Under the non-symmetrized truth the survivor is instead a
classical branch (f or g) chosen by the weights at R.

The accumulated array histogram is then tested against both analytic
hypotheses (pure superposition vs mixture) with chi-square goodness of fit
and a log-likelihood ratio, yielding a verdict and, when the pure model
wins, the exchange sign.

Randomness is counter-based: each trial consumes draws from its own
(seed, trial-index) substream, so event streams are reproducible and
independent of worker count.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.signal import find_peaks
from scipy.stats import chi2

from . import _kernels
from .errors import (
    ConfigError,
    EmptySupport,
    ModelDegenerate,
    NodalPointUndefined,
    NullStateError,
    RedrawCapExceeded,
    SeparationTooSmall,
    NODAL_EPS,
)
from .fock import (
    CollapseOutcome,
    Statistics,
    TwoParticleState,
    collapse,
    collapse_norm_sq_profile,
    detection_density,
)
from .patterns import (
    DEGENERATE_TV,
    SIGN_GAP_NATS,
    DetectionPattern,
    PatternKind,
    SignInference,
    _log_likelihood,
    _normalized,
    _sign_from_models,
    pattern_distance,
)
from .rng import CounterStream, make_cdf, sample_discrete
from .wavepacket import (
    ModeDistribution,
    MomentumGrid,
    PositionGrid,
    make_gaussian,
    overlap,
    position_amplitude,
    transform_matrix,
)

DEFAULT_ALPHA = 1e-3
MIN_COUNTS = 100
MAX_REDRAWS_PER_TRIAL = 100
MIN_SEPARATION_FACTOR = 8.0
PEAK_REL_HEIGHT = 1e-3
_SPATIAL_AMP_EPS = 1e-12


class Truth(enum.Enum):
    """Which generative model produces the synthetic data."""

    SYMMETRIZED = "symmetrized"
    NOT_SYMMETRIZED = "not_symmetrized"


class Conditioning(enum.Enum):
    """First-detection handling: clamp R or draw it from its density."""

    FIXED_R = "fixed_r"
    MARGINALIZE_R = "marginalize_r"


@dataclass(frozen=True)
class ExperimentConfig:
    state: TwoParticleState
    region: PositionGrid
    array: PositionGrid
    trials: int
    seed: int
    truth: Truth
    conditioning: Conditioning
    fixed_r: float | None = None
    alpha: float = DEFAULT_ALPHA
    sign_threshold: float = SIGN_GAP_NATS
    workers: int = 1
    max_redraws: int = MAX_REDRAWS_PER_TRIAL

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.conditioning is Conditioning.FIXED_R:
            if self.fixed_r is None:
                raise ConfigError("fixed_r conditioning requires a fixed_r value")
            if not self.region.r_min <= self.fixed_r <= self.region.r_max:
                raise ConfigError(
                    f"fixed_r={self.fixed_r} outside region [{self.region.r_min}, {self.region.r_max}]"
                )
        if self.state.stats.sign is None and self.truth is Truth.SYMMETRIZED:
            raise ConfigError("symmetrized truth requires boson or fermion statistics")


@dataclass(frozen=True)
class EventRecord:
    """One postselected trial: first detection at R, array detection at r.

    branch labels the surviving distribution ('f' or 'g') and is populated
    only under the non-symmetrized truth.
    """

    trial: int
    R: float
    r: float
    branch: str | None = None


@dataclass(frozen=True)
class TrialRunResult:
    config: ExperimentConfig
    records: list[EventRecord]
    empirical: DetectionPattern
    redraws: int

    @property
    def redraw_fraction(self) -> float:
        return self.redraws / self.config.trials


class ChiSquareResult(NamedTuple):
    statistic: float
    dof: int
    p_value: float


@dataclass(frozen=True)
class DiscriminationReport:
    counts: int
    tv_distance_to_pure: float
    tv_distance_to_mixture: float
    log_likelihood_ratio: float
    p_value_chi2_pure: float
    p_value_chi2_mixture: float
    verdict: str  # symmetrized | not_symmetrized | inconclusive
    inferred_sign: int | None
    sign_gap: float | None
    pure_sign_used: int
    degenerate: bool
    alpha: float
    notes: tuple[str, ...] = field(default=())


# ---------------------------------------------------------------------------
# model tables


def _spatial_profiles(f: ModeDistribution, g: ModeDistribution, grid: PositionGrid):
    kernel = transform_matrix(grid, f.grid)
    return kernel @ f.amp, kernel @ g.amp


def _pure_rows(
    f: ModeDistribution,
    g: ModeDistribution,
    sign: int,
    R_values: np.ndarray,
    array: PositionGrid,
) -> tuple[np.ndarray, np.ndarray]:
    """(N^2 profile over R_values, per-R normalized array densities).

    Row i is the pure-state array density after collapse at R_values[i]:
    |psi_f(R_i) psi_g(r) + s psi_g(R_i) psi_f(r)|^2 / N_i^2, renormalized
    over the array.  Rows at nodal R_i (N^2 < NODAL_EPS) are zeroed.
    """
    p = f.grid.points
    dp = f.grid.spacing
    phases = np.exp(1j * np.outer(np.asarray(R_values), p)) * (dp / np.sqrt(2.0 * np.pi))
    a_f = phases @ f.amp
    a_g = phases @ g.amp
    ovl = overlap(f, g)
    n_sq = np.abs(a_f) ** 2 + np.abs(a_g) ** 2 + sign * 2.0 * np.real(np.conj(a_f) * a_g * ovl)
    n_sq = np.maximum(n_sq, 0.0)
    sp_f, sp_g = _spatial_profiles(f, g, array)
    amp = a_f[:, None] * sp_g[None, :] + sign * a_g[:, None] * sp_f[None, :]
    rows = np.abs(amp) ** 2
    ok = n_sq >= NODAL_EPS
    totals = rows.sum(axis=1) * array.spacing
    rows[ok] /= totals[ok, None]
    rows[~ok] = 0.0
    return n_sq, rows


def _mixture_tables(
    f: ModeDistribution,
    g: ModeDistribution,
    R_values: np.ndarray,
    array: PositionGrid,
):
    """Weights and branch densities for the non-symmetrized process.

    Returns (region weight |psi_f|^2+|psi_g|^2 per R, probability that f
    survives per R, f spatial density over array, g spatial density).
    """
    p = f.grid.points
    dp = f.grid.spacing
    phases = np.exp(1j * np.outer(np.asarray(R_values), p)) * (dp / np.sqrt(2.0 * np.pi))
    w_f = np.abs(phases @ f.amp) ** 2
    w_g = np.abs(phases @ g.amp) ** 2
    region_weight = w_f + w_g
    with np.errstate(invalid="ignore", divide="ignore"):
        w_branch_f = np.where(region_weight > 0, w_g / region_weight, 0.0)
    sp_f, sp_g = _spatial_profiles(f, g, array)
    dens_f = _normalized(np.abs(sp_f) ** 2, array.spacing)
    dens_g = _normalized(np.abs(sp_g) ** 2, array.spacing)
    return region_weight, w_branch_f, dens_f, dens_g


def _mixture_row(w_f: float, w_g: float, dens_f: np.ndarray, dens_g: np.ndarray, dr: float) -> np.ndarray:
    return _normalized(w_f * dens_g + w_g * dens_f, dr)


# ---------------------------------------------------------------------------
# sampling


def sample_first_detection(
    state: TwoParticleState,
    region: PositionGrid,
    stream: CounterStream,
    size: int | None = None,
):
    """Draw first-detection position(s) by inverse CDF over the region density.

    Deterministic given the stream state; consecutive calls consume
    consecutive draws of the stream's substream.
    """
    density = detection_density(state, region)
    cdf = make_cdf(density.density)
    idx = sample_discrete(cdf, stream.uniform(size))
    return region.points[idx]


def _chunk_ranges(n: int, workers: int) -> list[tuple[int, int]]:
    bounds = np.linspace(0, n, min(workers, n) + 1).astype(int)
    return [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]


def _run_kernel_chunks(cfg: ExperimentConfig, fn, out_arrays: tuple, args: tuple) -> int:
    """Run a sampling kernel over worker chunks; returns total redraws."""
    chunks = _chunk_ranges(cfg.trials, cfg.workers)

    def run(chunk):
        lo, hi = chunk
        outs = tuple(a[lo:hi] for a in out_arrays)
        return fn(cfg.seed, lo, hi - lo, *args, cfg.max_redraws, *outs)

    if len(chunks) == 1:
        results = [run(chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            results = list(pool.map(run, chunks))
    if any(res < 0 for res in results):
        raise RedrawCapExceeded(
            f"a trial exceeded {cfg.max_redraws} nodal redraws; "
            "the first-detection density is concentrated on nodal points"
        )
    return int(sum(results))


def run_trials(cfg: ExperimentConfig) -> TrialRunResult:
    """Simulate the full two-stage scheme and histogram the array positions."""
    state = cfg.state
    f, g = state.f, state.g
    array = cfg.array
    if cfg.conditioning is Conditioning.FIXED_R:
        R_values = np.array([cfg.fixed_r], dtype=np.float64)
    else:
        R_values = cfg.region.points

    out_R = np.empty(cfg.trials, dtype=np.int64)
    out_r = np.empty(cfg.trials, dtype=np.int64)

    if cfg.truth is Truth.SYMMETRIZED:
        if state.is_null:
            raise NullStateError("cannot run trials on a null two-particle state")
        n_sq, rows = _pure_rows(f, g, state.stats.sign, R_values, array)
        nodal = (n_sq < NODAL_EPS).astype(np.uint8)
        if np.all(nodal):
            raise NodalPointUndefined(
                "N^2 vanishes at the fixed detection point"
                if cfg.conditioning is Conditioning.FIXED_R
                else "N^2 vanishes over the whole region"
            )
        region_cdf = make_cdf(n_sq if R_values.size > 1 else np.array([1.0]))
        row_cdfs = np.cumsum(rows * array.spacing, axis=1)
        row_cdfs[nodal == 0, -1] = 1.0
        # Nodal rows are never sampled (the kernel redraws first); keep their
        # CDFs valid anyway so a bug cannot turn into an out-of-range index.
        row_cdfs[nodal == 1] = 1.0
        redraws = _run_kernel_chunks(
            cfg,
            _kernels.sample_symmetrized,
            (out_R, out_r),
            (region_cdf, nodal, np.ascontiguousarray(row_cdfs)),
        )
        branches = None
    else:
        region_weight, w_branch_f, dens_f, dens_g = _mixture_tables(f, g, R_values, array)
        nodal = (region_weight < NODAL_EPS).astype(np.uint8)
        if np.all(nodal):
            raise NodalPointUndefined("both spatial amplitudes vanish over the region")
        region_cdf = make_cdf(region_weight if R_values.size > 1 else np.array([1.0]))
        out_branch = np.empty(cfg.trials, dtype=np.uint8)
        redraws = _run_kernel_chunks(
            cfg,
            _kernels.sample_mixture,
            (out_R, out_branch, out_r),
            (
                region_cdf,
                nodal,
                w_branch_f,
                make_cdf(dens_f),
                make_cdf(dens_g),
            ),
        )
        branches = np.where(out_branch == 0, "f", "g")

    R_drawn = R_values[out_R]
    r_drawn = array.points[out_r]
    records = [
        EventRecord(
            trial=i,
            R=float(R_drawn[i]),
            r=float(r_drawn[i]),
            branch=None if branches is None else str(branches[i]),
        )
        for i in range(cfg.trials)
    ]
    counts = np.bincount(out_r, minlength=array.m)
    empirical = DetectionPattern(
        array,
        counts / (cfg.trials * array.spacing),
        PatternKind.EMPIRICAL,
        meta={
            "truth": cfg.truth.value,
            "R": cfg.fixed_r if cfg.conditioning is Conditioning.FIXED_R else None,
            "sign": state.stats.sign,
            "seed": cfg.seed,
            "redraws": redraws,
            "assumption": "first-detection density ~ N^2(R)",
        },
        counts=counts,
    )
    return TrialRunResult(config=cfg, records=records, empirical=empirical, redraws=redraws)


# ---------------------------------------------------------------------------
# statistics


def chi_square_gof(counts: np.ndarray, probs: np.ndarray, min_expected: float = 5.0) -> ChiSquareResult:
    """Pearson goodness of fit with adjacent-bin pooling.

    Bins are merged left to right until each pooled bin has expected count
    >= min_expected (the straggler tail joins the last pooled bin), keeping
    the chi-square approximation honest at moderate sample sizes.
    """
    counts = np.asarray(counts, dtype=np.float64)
    expected = np.asarray(probs, dtype=np.float64) * counts.sum()
    obs_m: list[float] = []
    exp_m: list[float] = []
    o_acc = e_acc = 0.0
    for o, e in zip(counts, expected):
        o_acc += o
        e_acc += e
        if e_acc >= min_expected:
            obs_m.append(o_acc)
            exp_m.append(e_acc)
            o_acc = e_acc = 0.0
    if (o_acc or e_acc) and obs_m:
        obs_m[-1] += o_acc
        exp_m[-1] += e_acc
    if len(obs_m) < 2:
        return ChiSquareResult(0.0, 0, 1.0)
    obs = np.array(obs_m)
    exp = np.array(exp_m)
    stat = float(np.sum((obs - exp) ** 2 / exp))
    dof = len(obs_m) - 1
    return ChiSquareResult(stat, dof, float(chi2.sf(stat, dof)))


def _marginal_model(region_weights: np.ndarray, rows: np.ndarray, dr: float) -> np.ndarray:
    probs = region_weights / region_weights.sum()
    return _normalized(probs @ rows, dr)


def _model_patterns(
    f: ModeDistribution,
    g: ModeDistribution,
    array: PositionGrid,
    fixed_r: float | None,
    region: PositionGrid | None,
) -> tuple[dict[int, np.ndarray | None], np.ndarray]:
    """Pure-model densities for both signs plus the mixture density.

    Under marginalization each hypothesis averages its per-R array density
    over its own first-detection density.  A sign whose model is undefined
    (nodal at the fixed R, or empty over the region) maps to None.
    """
    if fixed_r is not None:
        R_values = np.array([fixed_r])
    elif region is not None:
        R_values = region.points
    else:
        raise ValueError("provide fixed_r or a region grid for marginalization")

    pure: dict[int, np.ndarray | None] = {}
    for sign in (1, -1):
        n_sq, rows = _pure_rows(f, g, sign, R_values, array)
        if n_sq.max() < NODAL_EPS:
            pure[sign] = None
        elif fixed_r is not None:
            pure[sign] = rows[0]
        else:
            pure[sign] = _marginal_model(n_sq, rows, array.spacing)

    region_weight, w_branch_f, dens_f, dens_g = _mixture_tables(f, g, R_values, array)
    if region_weight.max() < NODAL_EPS:
        raise NodalPointUndefined("mixture model undefined: no detection probability")
    if fixed_r is not None:
        mix = _mixture_row(
            region_weight[0] * (1.0 - w_branch_f[0]),
            region_weight[0] * w_branch_f[0],
            dens_f,
            dens_g,
            array.spacing,
        )
    else:
        rows = np.empty((R_values.size, array.m))
        for i in range(R_values.size):
            if region_weight[i] < NODAL_EPS:
                rows[i] = 0.0
            else:
                w_g_surv = region_weight[i] * w_branch_f[i]  # |psi_g(R)|^2
                w_f_det = region_weight[i] - w_g_surv  # |psi_f(R)|^2
                rows[i] = _mixture_row(w_f_det, w_g_surv, dens_f, dens_g, array.spacing)
        mix = _marginal_model(region_weight, rows, array.spacing)
    return pure, mix


def discriminate(
    empirical: DetectionPattern,
    f: ModeDistribution,
    g: ModeDistribution,
    *,
    fixed_r: float | None = None,
    region: PositionGrid | None = None,
    alpha: float = DEFAULT_ALPHA,
    sign_threshold: float = SIGN_GAP_NATS,
) -> DiscriminationReport:
    """Test an empirical array histogram against both hypotheses.

    The pure hypothesis is sign-blind: both exchange signs are evaluated and
    the better-likelihood one is tested, so the caller need not know whether
    the source was bosonic or fermionic.  Verdict at significance `alpha`:
    symmetrized when the pure model fits and the mixture is rejected,
    not_symmetrized in the reverse case, inconclusive otherwise (including
    degenerate hypotheses and fewer than 100 counts).
    """
    if empirical.counts is None:
        raise ValueError("discriminate requires an empirical pattern with counts")
    array = empirical.grid
    counts = empirical.counts
    total = int(counts.sum())
    dr = array.spacing
    notes: list[str] = []

    pure_models, mix_density = _model_patterns(f, g, array, fixed_r, region)
    if pure_models[1] is None and pure_models[-1] is None:
        raise NodalPointUndefined("pure model undefined for both signs")

    def _pattern(dens, kind):
        return DetectionPattern(array, dens, kind, meta={"R": fixed_r})

    ll_by_sign = {
        s: None if dens is None else _log_likelihood(counts, _pattern(dens, PatternKind.PURE_MODEL))
        for s, dens in pure_models.items()
    }
    live = [s for s, ll in ll_by_sign.items() if ll is not None]
    best_sign = max(live, key=lambda s: ll_by_sign[s])
    pure_density = pure_models[best_sign]

    pure_pat = _pattern(pure_density, PatternKind.PURE_MODEL)
    mix_pat = _pattern(mix_density, PatternKind.MIXTURE_MODEL)

    tv_pure = pattern_distance(empirical, pure_pat)
    tv_mix = pattern_distance(empirical, mix_pat)
    llr = _log_likelihood(counts, pure_pat) - _log_likelihood(counts, mix_pat)
    gof_pure = chi_square_gof(counts, pure_density * dr)
    gof_mix = chi_square_gof(counts, mix_density * dr)

    degenerate = pattern_distance(pure_pat, mix_pat) < DEGENERATE_TV
    if degenerate:
        notes.append("hypotheses indistinguishable (interference term vanishes on the array)")

    if total < MIN_COUNTS:
        verdict = "inconclusive"
        notes.append(f"insufficient counts ({total} < {MIN_COUNTS})")
    elif degenerate:
        verdict = "inconclusive"
    elif gof_pure.p_value > alpha and gof_mix.p_value < alpha:
        verdict = "symmetrized"
    elif gof_mix.p_value > alpha and gof_pure.p_value < alpha:
        verdict = "not_symmetrized"
    else:
        verdict = "inconclusive"

    inferred_sign = None
    sign_gap = None
    if verdict == "symmetrized":
        if len(live) == 1:
            inferred_sign, sign_gap = live[0], float("inf")
        else:
            try:
                inference = _sign_from_models(
                    counts,
                    _pattern(pure_models[1], PatternKind.PURE_MODEL),
                    _pattern(pure_models[-1], PatternKind.PURE_MODEL),
                    sign_threshold,
                )
                inferred_sign, sign_gap = inference.sign, inference.gap
            except ModelDegenerate:
                notes.append("sign models degenerate; sign not identifiable")

    return DiscriminationReport(
        counts=total,
        tv_distance_to_pure=tv_pure,
        tv_distance_to_mixture=tv_mix,
        log_likelihood_ratio=llr,
        p_value_chi2_pure=gof_pure.p_value,
        p_value_chi2_mixture=gof_mix.p_value,
        verdict=verdict,
        inferred_sign=inferred_sign,
        sign_gap=sign_gap,
        pure_sign_used=best_sign,
        degenerate=degenerate,
        alpha=alpha,
        notes=tuple(notes),
    )


def run_and_discriminate(cfg: ExperimentConfig) -> tuple[TrialRunResult, DiscriminationReport]:
    """Full pipeline: simulate trials, then test the resulting histogram."""
    result = run_trials(cfg)
    report = discriminate(
        result.empirical,
        cfg.state.f,
        cfg.state.g,
        fixed_r=cfg.fixed_r if cfg.conditioning is Conditioning.FIXED_R else None,
        region=None if cfg.conditioning is Conditioning.FIXED_R else cfg.region,
        alpha=cfg.alpha,
        sign_threshold=cfg.sign_threshold,
    )
    return result, report


# ---------------------------------------------------------------------------
# superposition-generation scenario


@dataclass(frozen=True)
class PeakReport:
    """Two-peak summary of the survivor's momentum density |h(p)|^2.

    Locations are grid positions of the density maxima nearest p_f and p_g.
    Weights are the squared moduli of the components of h along the two
    source distributions (Gram-orthogonalized, so the exponentially small
    f-g overlap does not contaminate the split); the weight near p_g is
    |alpha_f|^2 and the weight near p_f is |alpha_g|^2.
    """

    n_peaks: int
    loc_at_pf: float
    loc_at_pg: float
    weight_at_pf: float
    weight_at_pg: float
    weight_ratio: float  # weight_at_pf / weight_at_pg = |alpha_g|^2 : |alpha_f|^2


@dataclass(frozen=True)
class ScenarioResult:
    outcome: CollapseOutcome
    peaks: PeakReport


def _component_weights(outcome: CollapseOutcome) -> tuple[float, float]:
    """|c_f|^2, |c_g|^2 of h = c_g g + c_f f via the 2x2 Gram system."""
    state = outcome.state
    dp = state.f.grid.spacing
    ovl_gf = overlap(state.f, state.g)  # <1_g|1_f>
    h = outcome.h.amp
    proj_g = np.sum(np.conj(state.g.amp) * h) * dp
    proj_f = np.sum(np.conj(state.f.amp) * h) * dp
    gram = np.array([[1.0, ovl_gf], [np.conj(ovl_gf), 1.0]], dtype=complex)
    c_g, c_f = np.linalg.solve(gram, np.array([proj_g, proj_f]))
    return float(abs(c_f) ** 2), float(abs(c_g) ** 2)


def scenario_superposition(
    p_f: float,
    p_g: float,
    sigma: float,
    R: float,
    stats: Statistics,
    *,
    x0_f: float = 0.0,
    x0_g: float = 0.0,
    grid: MomentumGrid | None = None,
    min_separation_factor: float = MIN_SEPARATION_FACTOR,
) -> ScenarioResult:
    """Generate a far-separated two-peak superposition by detection at R.

    Builds Gaussians peaked at p_f and p_g (width sigma), requires
    |p_f - p_g| >= min_separation_factor * sigma and nonvanishing spatial
    amplitudes of both packets at R, collapses, and reports the two peaks
    of |h(p)|^2.
    """
    if abs(p_f - p_g) < min_separation_factor * sigma:
        raise SeparationTooSmall(
            f"|p_f - p_g| = {abs(p_f - p_g)} < {min_separation_factor} * sigma = "
            f"{min_separation_factor * sigma}"
        )
    if stats.sign is None:
        raise ValueError("scenario requires boson or fermion statistics")
    if grid is None:
        lo = min(p_f, p_g) - 8.0 * sigma
        hi = max(p_f, p_g) + 8.0 * sigma
        n = max(513, int(np.ceil((hi - lo) / (sigma / 16.0))) + 1)
        grid = MomentumGrid(lo, hi, n)
    f = make_gaussian(grid, p_f, sigma, x0_f)
    g = make_gaussian(grid, p_g, sigma, x0_g)
    state = TwoParticleState(f, g, stats)
    if abs(position_amplitude(f, R)) < _SPATIAL_AMP_EPS or abs(position_amplitude(g, R)) < _SPATIAL_AMP_EPS:
        raise NodalPointUndefined(
            f"packets do not overlap the detection point R={R}; no superposition is generated"
        )
    outcome = collapse(state, R)

    dens = np.abs(outcome.h.amp) ** 2
    idx, _ = find_peaks(dens, height=PEAK_REL_HEIGHT * dens.max())
    locs = grid.points[idx]
    loc_at_pf = float(locs[np.argmin(np.abs(locs - p_f))]) if locs.size else float("nan")
    loc_at_pg = float(locs[np.argmin(np.abs(locs - p_g))]) if locs.size else float("nan")
    weight_at_pf, weight_at_pg = _component_weights(outcome)
    report = PeakReport(
        n_peaks=int(idx.size),
        loc_at_pf=loc_at_pf,
        loc_at_pg=loc_at_pg,
        weight_at_pf=weight_at_pf,
        weight_at_pg=weight_at_pg,
        weight_ratio=weight_at_pf / weight_at_pg,
    )
    return ScenarioResult(outcome=outcome, peaks=report)


# ---------------------------------------------------------------------------
# text emission (External Interfaces)


def write_events_csv(records: list[EventRecord], path) -> None:
    """Events CSV with header trial,R,r,branch (branch empty when absent)."""
    with open(path, "w", newline="") as fh:
        fh.write("trial,R,r,branch\n")
        for rec in records:
            branch = rec.branch if rec.branch is not None else ""
            fh.write(f"{rec.trial},{rec.R:.17g},{rec.r:.17g},{branch}\n")


def report_text(report: DiscriminationReport) -> str:
    """Key-value rendering of a discrimination report."""
    lines = [
        f"counts = {report.counts}",
        f"tv_distance_to_pure = {report.tv_distance_to_pure:.17g}",
        f"tv_distance_to_mixture = {report.tv_distance_to_mixture:.17g}",
        f"log_likelihood_ratio = {report.log_likelihood_ratio:.17g}",
        f"p_value_chi2_pure = {report.p_value_chi2_pure:.17g}",
        f"p_value_chi2_mixture = {report.p_value_chi2_mixture:.17g}",
        f"verdict = {report.verdict}",
        f"inferred_sign = {report.inferred_sign if report.inferred_sign is not None else 'none'}",
        f"sign_gap = {f'{report.sign_gap:.17g}' if report.sign_gap is not None else 'none'}",
        f"pure_sign_used = {report.pure_sign_used:+d}",
        f"degenerate = {str(report.degenerate).lower()}",
        f"alpha = {report.alpha:.17g}",
    ]
    for i, note in enumerate(report.notes):
        lines.append(f"note_{i} = {note}")
    return "\n".join(lines) + "\n"
