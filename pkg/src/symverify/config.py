"""Flat `key = value` configuration files with dotted section prefixes.

Example:

    state.stats = boson
    state.f.p0 = -2.0
    state.f.sigma = 1.0
    state.f.x0 = 0.0
    state.g.p0 = 2.0
    state.g.sigma = 1.0
    state.g.x0 = 0.0
    grid.p_min = -10.0
    grid.p_max = 10.0
    grid.n = 257
    ...

A distribution can instead be loaded from a tabulated CSV with
`state.f.kind = file` and `state.f.path = f.csv`.
"""

from __future__ import annotations

import os

from .errors import ConfigError, SymverifyError
from .experiment import Conditioning, ExperimentConfig, Truth
from .fock import Statistics, TwoParticleState
from .wavepacket import (
    ModeDistribution,
    MomentumGrid,
    PositionGrid,
    load_mode_distribution,
    make_gaussian,
)


def parse_config(path) -> dict[str, str]:
    """Read a key=value file; `#` starts a comment, blank lines are skipped."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key or not value:
                raise ConfigError(f"{path}:{lineno}: empty key or value")
            if key in values:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            values[key] = value
    return values


class ConfigView:
    """Typed accessors over a parsed config, tracking which keys were used."""

    def __init__(self, values: dict[str, str], base_dir: str = "."):
        self.values = values
        self.base_dir = base_dir
        self.used: set[str] = set()

    def _raw(self, key: str, default=None, required: bool = False):
        if key in self.values:
            self.used.add(key)
            return self.values[key]
        if required:
            raise ConfigError(f"missing required config key {key!r}")
        return default

    def get_float(self, key: str, default: float | None = None, required: bool = False):
        raw = self._raw(key, required=required)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"config key {key!r}: expected a number, got {raw!r}") from None

    def get_int(self, key: str, default: int | None = None, required: bool = False):
        raw = self._raw(key, required=required)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"config key {key!r}: expected an integer, got {raw!r}") from None

    def get_str(self, key: str, default: str | None = None, required: bool = False):
        raw = self._raw(key, required=required)
        return default if raw is None else raw

    def get_choice(self, key: str, choices: dict, default=None, required: bool = False):
        raw = self._raw(key, required=required)
        if raw is None:
            return default
        token = raw.lower()
        if token not in choices:
            raise ConfigError(
                f"config key {key!r}: expected one of {sorted(choices)}, got {raw!r}"
            )
        return choices[token]


_STATS = {
    "boson": Statistics.BOSON,
    "fermion": Statistics.FERMION,
    "distinguishable": Statistics.DISTINGUISHABLE,
}
_TRUTH = {t.value: t for t in Truth}
_CONDITIONING = {c.value: c for c in Conditioning}


def build_momentum_grid(cfg: ConfigView) -> MomentumGrid:
    return MomentumGrid(
        cfg.get_float("grid.p_min", required=True),
        cfg.get_float("grid.p_max", required=True),
        cfg.get_int("grid.n", required=True),
    )


def build_position_grid(cfg: ConfigView, section: str) -> PositionGrid:
    return PositionGrid(
        cfg.get_float(f"{section}.r_min", required=True),
        cfg.get_float(f"{section}.r_max", required=True),
        cfg.get_int(f"{section}.m", required=True),
    )


def build_distribution(cfg: ConfigView, section: str, grid: MomentumGrid | None) -> ModeDistribution:
    kind = cfg.get_str(f"{section}.kind", default="gaussian").lower()
    if kind == "gaussian":
        if grid is None:
            raise ConfigError(f"{section}: gaussian distribution needs a grid.* section")
        return make_gaussian(
            grid,
            cfg.get_float(f"{section}.p0", required=True),
            cfg.get_float(f"{section}.sigma", required=True),
            cfg.get_float(f"{section}.x0", default=0.0),
        )
    if kind == "file":
        path = cfg.get_str(f"{section}.path", required=True)
        if not os.path.isabs(path):
            path = os.path.join(cfg.base_dir, path)
        try:
            return load_mode_distribution(path)
        except (OSError, ValueError, SymverifyError) as exc:
            raise ConfigError(f"{section}: cannot load {path}: {exc}") from None
    raise ConfigError(f"{section}.kind: expected 'gaussian' or 'file', got {kind!r}")


def build_state(cfg: ConfigView) -> TwoParticleState:
    stats = cfg.get_choice("state.stats", _STATS, required=True)
    needs_grid = (
        cfg.get_str("state.f.kind", default="gaussian").lower() == "gaussian"
        or cfg.get_str("state.g.kind", default="gaussian").lower() == "gaussian"
    )
    grid = build_momentum_grid(cfg) if needs_grid else None
    f = build_distribution(cfg, "state.f", grid)
    g = build_distribution(cfg, "state.g", grid)
    try:
        return TwoParticleState(f, g, stats)
    except SymverifyError as exc:
        raise ConfigError(f"invalid state: {exc}") from None


def build_experiment_config(cfg: ConfigView, seed_override: int | None = None) -> ExperimentConfig:
    state = build_state(cfg)
    seed = seed_override if seed_override is not None else cfg.get_int("experiment.seed", required=True)
    conditioning = cfg.get_choice(
        "experiment.conditioning", _CONDITIONING, default=Conditioning.FIXED_R
    )
    fixed_r = cfg.get_float("experiment.fixed_r")
    if conditioning is Conditioning.FIXED_R and fixed_r is None:
        raise ConfigError("experiment.conditioning = fixed_r requires experiment.fixed_r")
    return ExperimentConfig(
        state=state,
        region=build_position_grid(cfg, "region"),
        array=build_position_grid(cfg, "array"),
        trials=cfg.get_int("experiment.trials", required=True),
        seed=seed,
        truth=cfg.get_choice("experiment.truth", _TRUTH, required=True),
        conditioning=conditioning,
        fixed_r=fixed_r,
        alpha=cfg.get_float("experiment.alpha", default=1e-3),
        sign_threshold=cfg.get_float("experiment.sign_threshold", default=3.0),
        workers=cfg.get_int("experiment.workers", default=1),
        max_redraws=cfg.get_int("experiment.max_redraws", default=100),
    )
