"""Command line entry point"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy
import pandas

from .modeling.bloch import FrameSpec, build_generator, steady_state
from .modeling.params import derived_params
from .modeling.pump import pump_rate, pump_rate_scan
from .modeling.threshold import power_curve, small_signal_gain
from .represent.contour import extract_contour
from .represent.sweep import run_map
from .utils.config import RunConfig, parse_config
from .utils.errors import CheckpointMismatchError, ConfigError, NumericalError
from .utils.export import export_map, export_table
from .utils.math import technical
from .utils.plot import render_heatmap

logger = logging.getLogger("ybcav")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

COMMANDS = ("params", "pump-rate", "steady", "gain", "threshold-map", "freq-map", "power-curve")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ybcav",
        description="Threshold and frequency-shift maps of the cold ytterbium cavity laser.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("command", choices=COMMANDS, help="what to compute")
    parser.add_argument("--config", type=Path, default=None, help="key = value document")
    parser.add_argument("--out", default=None, help="output base path, without extension")
    parser.add_argument("--workers", type=int, default=None, help="processes for maps")
    parser.add_argument("--resume", type=Path, default=None, help="checkpoint file of a map")
    parser.add_argument("--svg", action="store_true", help="also write <out>.svg for maps")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """Config file, then flags on top"""
    text = ""
    if args.config is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read {args.config}: {e}") from e

    cfg = parse_config(text)
    overrides = {}
    if args.out is not None:
        overrides["out"] = args.out
    if args.workers is not None:
        if args.workers < 1:
            raise ConfigError(f"--workers must be at least 1, got {args.workers}")
        overrides["workers"] = args.workers
    if args.resume is not None:
        overrides["checkpoint"] = str(args.resume)
    return replace(cfg, **overrides)


def _params(cfg: RunConfig, args: argparse.Namespace):
    params = derived_params(cfg.cavity(), cfg.atom())
    print(pandas.Series(params.as_dict()).to_string())


def _pump_rate(cfg: RunConfig, args: argparse.Namespace):
    deltas = numpy.linspace(cfg.scan_min_mhz, cfg.scan_max_mhz, cfg.n_scan)
    scan = pump_rate_scan(cfg.operating_point(), deltas)
    path = export_table(scan, f"{cfg.out}.pump_rate.csv")
    peak = scan.loc[scan["w_rad_per_us"].idxmax()]
    print(f"peak w = {peak['w_rad_per_us']:.6g} rad/µs at Δ_pump = {peak['delta_pump_mhz']:g} MHz")
    print(f"written {path}")


def _steady(cfg: RunConfig, args: argparse.Namespace):
    op = cfg.operating_point()
    w = pump_rate(op)
    rho = steady_state(build_generator(op, FrameSpec(delta_green=op.delta_cavity), w))
    print(f"w = {w:.6g} rad/µs")
    print(pandas.Series(rho.populations, index=["rho_gg", "rho_bb", "rho_ee"]).to_string())


def _gain(cfg: RunConfig, args: argparse.Namespace):
    result = small_signal_gain(cfg.operating_point())
    print(
        pandas.Series(
            {
                "gain_mhz": result.gain_mhz,
                "kappa_mhz": technical(result.kappa),
                "margin_mhz": technical(result.margin),
                "test_amp": result.test_amp,
                "lasing": result.margin > 0,
            },
        ).to_string(),
    )


def _map(cfg: RunConfig, task: str, svg: bool):
    grid = cfg.grid_spec(task)
    map2d = run_map(grid, cfg.sim_config(), workers=cfg.workers, checkpoint_path=cfg.checkpoint)
    for path in export_map(map2d, cfg.out):
        print(f"written {path}")

    if svg:
        contours = extract_contour(map2d) if task == "threshold" else None
        svg_path = Path(f"{cfg.out}.svg")
        svg_path.write_text(render_heatmap(map2d, contours=contours), encoding="utf-8")
        print(f"written {svg_path}")

    if map2d.metadata["errors"]:
        logger.warning(f"⚠  {len(map2d.metadata['errors'])} cells failed, see the metadata")


def _threshold_map(cfg: RunConfig, args: argparse.Namespace):
    _map(cfg, "threshold", args.svg)


def _freq_map(cfg: RunConfig, args: argparse.Namespace):
    _map(cfg, "frequency", args.svg)


def _power_curve(cfg: RunConfig, args: argparse.Namespace):
    powers = numpy.linspace(cfg.p_min_mw, cfg.p_max_mw, cfg.n_power)
    curve = power_curve(cfg.operating_point(), cfg.calibration(), powers)
    path = export_table(curve, f"{cfg.out}.power_curve.csv")
    lasing = curve[curve["lasing"]]
    if len(lasing):
        print(f"lasing from {lasing['p_pump_mw'].iloc[0]:g} mW")
    else:
        print("no lasing over the scanned powers")
    print(f"written {path}")


HANDLERS = {
    "params": _params,
    "pump-rate": _pump_rate,
    "steady": _steady,
    "gain": _gain,
    "threshold-map": _threshold_map,
    "freq-map": _freq_map,
    "power-curve": _power_curve,
}


def main(argv: list[str] | None = None) -> int:
    """
    Runs one command

    :return: 0 on success, 2 for a configuration error, 3 for a numerical failure
    :rtype: int
    """
    args = build_parser().parse_args(argv)

    try:
        cfg = load_config(args)
    except ConfigError as e:
        logger.error(f"✗  Configuration: {e}")
        return EXIT_CONFIG

    try:
        HANDLERS[args.command](cfg, args)
    except NumericalError as e:
        logger.error(f"✗  {type(e).__name__}: {e}")
        return EXIT_NUMERICAL
    except (ConfigError, CheckpointMismatchError) as e:
        logger.error(f"✗  Configuration: {e}")
        return EXIT_CONFIG

    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
