"""Vectorized NumPy implementation of the Monte Carlo sampling core.

Bit-identical twin of the compiled extension `_core`.  Both implement the
same counter-based generator and draw layout, so event streams do not
depend on which backend is active, on chunking, or on worker count.

RNG contract (shared with _core, do not change one without the other):

    root(seed, t) = mix(mix(seed ^ SEED_SALT) + t * GOLD)
    u(seed, t, d) = ((mix(root + (d + 1) * GOLD)) >> 11) * 2^-53

where mix is the splitmix64 finalizer and t is the trial (stream) index.
Draw layout per sampling attempt a of a trial:

    symmetrized trials: R uses draw 2a, array position uses draw 2a+1
    mixture trials:     R uses draw 3a, branch 3a+1, array position 3a+2

A trial redraws (a -> a+1) when its sampled first-detection node is flagged
nodal; each trial may redraw at most `max_redraws` times.
"""

import numpy as np

GOLD = 0x9E3779B97F4A7C15
SEED_SALT = 0x6A09E667F3BCC909
_MASK = 0xFFFFFFFFFFFFFFFF
_U64 = np.uint64
_INV_2_53 = 1.0 / 9007199254740992.0  # 2^-53


def _mix_int(z: int) -> int:
    """splitmix64 finalizer on Python ints (masked to 64 bits)."""
    z &= _MASK
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


def _mix_vec(z: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer on uint64 arrays (wrapping arithmetic)."""
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)
        return z ^ (z >> _U64(31))


def _roots(seed: int, trial_lo: int, n: int) -> np.ndarray:
    base = _mix_int(seed ^ SEED_SALT)
    with np.errstate(over="ignore"):
        t = _U64(trial_lo) + np.arange(n, dtype=np.uint64)
        return _mix_vec(_U64(base) + t * _U64(GOLD))


def _uniform_from_roots(roots: np.ndarray, draw) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = _mix_vec(roots + (np.asarray(draw, dtype=np.uint64) + _U64(1)) * _U64(GOLD))
    return (z >> _U64(11)).astype(np.float64) * _INV_2_53


def stream_uniforms(seed: int, stream: int, draw_lo: int, n: int) -> np.ndarray:
    """n consecutive uniforms in [0, 1) from substream `stream` of `seed`."""
    root = _U64(_mix_int(_mix_int(seed ^ SEED_SALT) + (stream & _MASK) * GOLD))
    draws = _U64(draw_lo) + np.arange(n, dtype=np.uint64)
    return _uniform_from_roots(np.full(n, root, dtype=np.uint64), draws)


def _searchsorted_rows(row_cdfs: np.ndarray, rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    # Per-element np.searchsorted(row_cdfs[rows[i]], u[i], side='right'),
    # batched by grouping trials that share a region node.
    if row_cdfs.shape[0] == 1:
        return np.searchsorted(row_cdfs[0], u, side="right").astype(np.int64)
    out = np.empty(u.shape[0], dtype=np.int64)
    order = np.argsort(rows, kind="stable")
    boundaries = np.flatnonzero(np.diff(rows[order])) + 1
    for grp in np.split(order, boundaries):
        out[grp] = np.searchsorted(row_cdfs[rows[grp[0]]], u[grp], side="right")
    return out


def sample_symmetrized(
    seed: int,
    trial_lo: int,
    n: int,
    region_cdf: np.ndarray,
    nodal: np.ndarray,
    row_cdfs: np.ndarray,
    max_redraws: int,
    out_R: np.ndarray,
    out_r: np.ndarray,
) -> int:
    """Sample n symmetrized trials into out_R/out_r (region and array indices).

    Returns the total number of nodal redraws, or -1 if any trial exhausted
    its redraw budget.
    """
    roots = _roots(seed, trial_lo, n)
    resolved_attempt = np.zeros(n, dtype=np.uint64)
    active = np.arange(n)
    redraws = 0
    for attempt in range(max_redraws + 1):
        u = _uniform_from_roots(roots[active], 2 * attempt)
        idx = np.searchsorted(region_cdf, u, side="right").astype(np.int64)
        out_R[active] = idx
        bad = nodal[idx].astype(bool)
        resolved_attempt[active[~bad]] = attempt
        redraws += int(np.count_nonzero(bad))
        active = active[bad]
        if active.size == 0:
            break
    else:
        return -1
    u = _uniform_from_roots(roots, 2 * resolved_attempt + 1)
    out_r[:] = _searchsorted_rows(row_cdfs, np.asarray(out_R[:n]), u)
    return redraws


def sample_mixture(
    seed: int,
    trial_lo: int,
    n: int,
    region_cdf: np.ndarray,
    nodal: np.ndarray,
    w_branch_f: np.ndarray,
    cdf_f: np.ndarray,
    cdf_g: np.ndarray,
    max_redraws: int,
    out_R: np.ndarray,
    out_branch: np.ndarray,
    out_r: np.ndarray,
) -> int:
    """Sample n non-symmetrized trials; branch 0 means the survivor is f.

    w_branch_f[i] is the probability, given first detection at region node
    i, that the g-type particle was absorbed (so f survives and the array
    position is drawn from cdf_f).  Returns total redraws, or -1 on budget
    exhaustion.
    """
    roots = _roots(seed, trial_lo, n)
    resolved_attempt = np.zeros(n, dtype=np.uint64)
    active = np.arange(n)
    redraws = 0
    for attempt in range(max_redraws + 1):
        u = _uniform_from_roots(roots[active], 3 * attempt)
        idx = np.searchsorted(region_cdf, u, side="right").astype(np.int64)
        out_R[active] = idx
        bad = nodal[idx].astype(bool)
        resolved_attempt[active[~bad]] = attempt
        redraws += int(np.count_nonzero(bad))
        active = active[bad]
        if active.size == 0:
            break
    else:
        return -1
    if active.size:
        return -1
    u_branch = _uniform_from_roots(roots, 3 * resolved_attempt + 1)
    branch_is_f = u_branch < w_branch_f[out_R[:n]]
    out_branch[:] = np.where(branch_is_f, 0, 1).astype(np.uint8)
    u_pos = _uniform_from_roots(roots, 3 * resolved_attempt + 2)
    idx_f = np.searchsorted(cdf_f, u_pos, side="right").astype(np.int64)
    idx_g = np.searchsorted(cdf_g, u_pos, side="right").astype(np.int64)
    out_r[:] = np.where(branch_is_f, idx_f, idx_g)
    return redraws
