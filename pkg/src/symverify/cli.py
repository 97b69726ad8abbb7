"""Command-line front end.

Subcommands: collapse, pattern, experiment, scenario-superposition.  Each
reads a key=value config, computes everything in memory, then writes its
output files followed by a run manifest, so a failed run leaves no partial
outputs.  Exit codes: 0 success, 2 config error, 3 undefined collapse
(nodal point or null state), 4 redraw cap exceeded.
"""

from __future__ import annotations

import argparse
import datetime
import os
import sys

from . import __version__
from ._kernels import BACKEND
from .config import (
    ConfigView,
    build_experiment_config,
    build_position_grid,
    build_state,
    parse_config,
)
from .errors import (
    ConfigError,
    NodalPointUndefined,
    NullStateError,
    RedrawCapExceeded,
    SymverifyError,
)
from .experiment import (
    Conditioning,
    Truth,
    report_text,
    run_and_discriminate,
    scenario_superposition,
    write_events_csv,
)
from .fock import Statistics, collapse, collapse_distinguishable
from .patterns import mixture_pattern, pattern_distance, pure_pattern, save_pattern
from .wavepacket import save_mode_distribution

EXIT_CONFIG = 2
EXIT_NODAL = 3
EXIT_REDRAW = 4

_STATS = {"boson": Statistics.BOSON, "fermion": Statistics.FERMION}


class _Outputs:
    """Collects (filename, writer) pairs; flushed only on success."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        self.items: list[tuple[str, object]] = []

    def add(self, name: str, writer) -> None:
        self.items.append((name, writer))

    def flush(self, manifest_lines: list[str]) -> list[str]:
        os.makedirs(self.out_dir, exist_ok=True)
        written = []
        for name, writer in self.items:
            path = os.path.join(self.out_dir, name)
            writer(path)
            written.append(name)
        manifest = ["# symverify run manifest"]
        manifest += manifest_lines
        manifest += [f"output = {name}" for name in written]
        manifest.append(f"timestamp = {datetime.datetime.now().isoformat()}")
        with open(os.path.join(self.out_dir, "manifest.txt"), "w") as fh:
            fh.write("\n".join(manifest) + "\n")
        return written + ["manifest.txt"]


def _text_writer(text: str):
    def write(path):
        with open(path, "w") as fh:
            fh.write(text)

    return write


def _manifest_common(args, cfg: ConfigView, seed=None) -> list[str]:
    lines = [
        f"tool_version = {__version__}",
        f"backend = {BACKEND}",
        f"command = {args.command}",
        f"config = {os.path.abspath(args.config)}",
    ]
    if seed is not None:
        lines.append(f"seed = {seed}")
    lines += [f"config.{k} = {v}" for k, v in sorted(cfg.values.items())]
    return lines


def _outcome_text(outcome) -> str:
    return (
        f"R = {outcome.R:.17g}\n"
        f"alpha_f_re = {outcome.alpha_f.real:.17g}\n"
        f"alpha_f_im = {outcome.alpha_f.imag:.17g}\n"
        f"alpha_g_re = {outcome.alpha_g.real:.17g}\n"
        f"alpha_g_im = {outcome.alpha_g.imag:.17g}\n"
        f"norm_N = {outcome.norm_N:.17g}\n"
        f"sign = {outcome.sign_used:+d}\n"
    )


def cmd_collapse(args) -> int:
    cfg = ConfigView(parse_config(args.config), base_dir=os.path.dirname(args.config) or ".")
    state = build_state(cfg)
    R = cfg.get_float("collapse.R", required=True)
    if state.stats is Statistics.DISTINGUISHABLE:
        detected = cfg.get_str("collapse.detected", required=True)
        outcome = collapse_distinguishable(state, R, detected)
    else:
        outcome = collapse(state, R)
    outputs = _Outputs(args.out_dir)
    outputs.add("h.csv", lambda path: save_mode_distribution(outcome.h, path))
    outputs.add("outcome.txt", _text_writer(_outcome_text(outcome)))
    written = outputs.flush(_manifest_common(args, cfg))
    if not args.quiet:
        print(_outcome_text(outcome), end="")
        print(f"wrote: {', '.join(written)}")
    return 0


def cmd_pattern(args) -> int:
    cfg = ConfigView(parse_config(args.config), base_dir=os.path.dirname(args.config) or ".")
    state = build_state(cfg)
    if state.stats is Statistics.DISTINGUISHABLE:
        raise ConfigError("pattern command requires boson or fermion statistics")
    R = cfg.get_float("collapse.R", required=True)
    array = build_position_grid(cfg, "array")
    outcome = collapse(state, R)
    pure = pure_pattern(outcome, array)
    mixture = mixture_pattern(state.f, state.g, R, array)
    distance = pattern_distance(pure, mixture)
    outputs = _Outputs(args.out_dir)
    outputs.add("pure.csv", lambda path: save_pattern(pure, path))
    outputs.add("mixture.csv", lambda path: save_pattern(mixture, path))
    outputs.add("distance.txt", _text_writer(f"tv_distance = {distance:.17g}\n"))
    written = outputs.flush(_manifest_common(args, cfg))
    if not args.quiet:
        print(f"tv_distance = {distance:.17g}")
        print(f"wrote: {', '.join(written)}")
    return 0


def cmd_experiment(args) -> int:
    cfg = ConfigView(parse_config(args.config), base_dir=os.path.dirname(args.config) or ".")
    exp_cfg = build_experiment_config(cfg, seed_override=args.seed)
    result, report = run_and_discriminate(exp_cfg)
    text = report_text(report)
    outputs = _Outputs(args.out_dir)
    outputs.add("events.csv", lambda path: write_events_csv(result.records, path))
    outputs.add("empirical.csv", lambda path: save_pattern(result.empirical, path))
    outputs.add("report.txt", _text_writer(text))
    manifest = _manifest_common(args, cfg, seed=exp_cfg.seed)
    manifest.append(f"redraws = {result.redraws}")
    manifest.append(f"redraw_fraction = {result.redraw_fraction:.17g}")
    manifest.append("assumption = first-detection density ~ N^2(R)")
    written = outputs.flush(manifest)
    if not args.quiet:
        print(text, end="")
        print(f"wrote: {', '.join(written)}")
    return 0


def cmd_scenario(args) -> int:
    cfg = ConfigView(parse_config(args.config), base_dir=os.path.dirname(args.config) or ".")
    stats = cfg.get_choice("scenario.stats", _STATS, required=True)
    result = scenario_superposition(
        cfg.get_float("scenario.p_f", required=True),
        cfg.get_float("scenario.p_g", required=True),
        cfg.get_float("scenario.sigma", required=True),
        cfg.get_float("scenario.R", required=True),
        stats,
        x0_f=cfg.get_float("scenario.x0_f", default=0.0),
        x0_g=cfg.get_float("scenario.x0_g", default=0.0),
    )
    peaks = result.peaks
    peaks_txt = (
        f"n_peaks = {peaks.n_peaks}\n"
        f"loc_at_pf = {peaks.loc_at_pf:.17g}\n"
        f"loc_at_pg = {peaks.loc_at_pg:.17g}\n"
        f"weight_at_pf = {peaks.weight_at_pf:.17g}\n"
        f"weight_at_pg = {peaks.weight_at_pg:.17g}\n"
        f"weight_ratio = {peaks.weight_ratio:.17g}\n"
    )
    outputs = _Outputs(args.out_dir)
    outputs.add("h.csv", lambda path: save_mode_distribution(result.outcome.h, path))
    outputs.add("peaks.txt", _text_writer(peaks_txt))
    outputs.add("outcome.txt", _text_writer(_outcome_text(result.outcome)))
    written = outputs.flush(_manifest_common(args, cfg))
    if not args.quiet:
        print(peaks_txt, end="")
        print(f"wrote: {', '.join(written)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symverify",
        description="Simulate symmetrization verification by destructive one-particle detection.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, doc in [
        ("collapse", cmd_collapse, "collapse a two-particle state at a detection point"),
        ("pattern", cmd_pattern, "emit pure and mixture array patterns plus their distance"),
        ("experiment", cmd_experiment, "run Monte Carlo trials and the discrimination test"),
        ("scenario-superposition", cmd_scenario, "generate a far-separated two-peak superposition"),
    ]:
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", required=True, help="path to key=value config file")
        p.add_argument("--out-dir", default=".", help="directory for output files")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--quiet", action="store_true", help="suppress stdout echo")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NodalPointUndefined, NullStateError) as exc:
        print(f"undefined collapse: {exc}", file=sys.stderr)
        return EXIT_NODAL
    except RedrawCapExceeded as exc:
        print(f"redraw cap exceeded: {exc}", file=sys.stderr)
        return EXIT_REDRAW
    except SymverifyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
