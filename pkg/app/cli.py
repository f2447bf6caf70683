"""
Command line entry point: `python -m app <command> <config>`.

Commands:
    sweep         RMSE versus SNR for both signal models, CSV `snr_db,model,rmse_deg,trials,seed`
    verify-lemma  span-property residual over a phase grid, CSV `phi_rad,residual,holds`
    coarray       one co-array as `lag,weight` lines
    spectrum      single-trial pseudospectrum, CSV `theta_deg,pseudospectrum`
    serve         run the HTTP API with uvicorn
"""

from typing import List, Optional
import argparse
import logging
import sys

from app.core.config import configure_logging, settings
from app.core.exceptions import LabError
from app.core.experiment_file import load_experiment_config
from app.models.geometry import CoarrayKind
from app.services import coarray_geometry, mc_harness

logger = logging.getLogger(__name__)

COARRAY_SETS = ["difference", "positive_sum", "negative_sum", "sdca", "d1bar", "d2bar", "d3bar"]


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config, trials=args.trials)
    output = args.output if args.output is not None else cfg.output_path
    mc_harness.run_sweep(cfg, output_path=output, threads=args.threads)
    return 0


def cmd_verify_lemma(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config)
    rows = mc_harness.verify_lemma(cfg)
    mc_harness.write_csv(
        args.output or "-",
        ["phi_rad", "residual", "holds"],
        (row.to_csv_row() for row in rows),
    )
    return 0


def cmd_coarray(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config)
    arr = cfg.array
    if args.set == "sdca":
        lags = coarray_geometry.sdca(arr)
    elif args.set in ("d1bar", "d2bar", "d3bar"):
        lags = getattr(coarray_geometry.partition_sdca(arr), args.set)
    else:
        lags = coarray_geometry.coarray(arr, CoarrayKind(args.set))
    logger.info(f"📐 {args.set}: {len(lags)} lags, {lags.total_weight()} sensor pairs")
    half = coarray_geometry.virtual_ula_half_length(arr)
    logger.info(f"📐 Virtual ULA on lags -{half}..{half}")
    mc_harness.write_csv(
        args.output or "-",
        ["lag", "weight"],
        lags.csv_rows(),
    )
    return 0


def cmd_spectrum(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config)
    outcome = mc_harness.single_trial_spectrum(cfg)
    if outcome.error is not None:
        raise LabError(f"spectrum trial failed: {outcome.error}")
    logger.info(f"🎯 Truth {outcome.truth_deg} deg, estimate {outcome.estimate.angles_deg} deg")
    if args.dump_snapshots or args.dump_virtual:
        _, snapshots, virtual = mc_harness.trial_artifacts(
            cfg, cfg.spectrum_snr_db, cfg.spectrum_model, cfg.spectrum_trial
        )
        if args.dump_snapshots:
            snapshots.to_csv(args.dump_snapshots)
        if args.dump_virtual:
            mc_harness.write_csv(args.dump_virtual, ["lag", "re", "im"], virtual.csv_rows())
    mc_harness.write_csv(
        args.output or "-",
        ["theta_deg", "pseudospectrum"],
        outcome.estimate.spectrum.csv_rows(),
    )
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("app.main:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sdca-lab", description="Sum-difference co-array laboratory")
    parser.add_argument("--log-level", default=settings.log_level, help="Python logging level (default: %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="Monte Carlo RMSE versus SNR for both signal models")
    sweep.add_argument("config")
    sweep.add_argument("--output", help="CSV path, '-' for stdout (default: output_path from the config)")
    sweep.add_argument("--trials", type=int, help="Override the trial count (e.g. 1000)")
    sweep.add_argument("--threads", type=int, help="Worker threads (default: SDCA_LAB_THREADS)")
    sweep.set_defaults(func=cmd_sweep)

    lemma = sub.add_parser("verify-lemma", help="Span-property residual over a phase grid")
    lemma.add_argument("config")
    lemma.add_argument("--output")
    lemma.set_defaults(func=cmd_verify_lemma)

    coarray = sub.add_parser("coarray", help="Print a co-array as lag,weight lines")
    coarray.add_argument("config")
    coarray.add_argument("--set", choices=COARRAY_SETS, default="sdca")
    coarray.add_argument("--output")
    coarray.set_defaults(func=cmd_coarray)

    spectrum = sub.add_parser("spectrum", help="Single-trial SS-MUSIC pseudospectrum")
    spectrum.add_argument("config")
    spectrum.add_argument("--output")
    spectrum.add_argument("--dump-snapshots", help="Also write the trial's snapshot matrix (re+imj entries)")
    spectrum.add_argument("--dump-virtual", help="Also write the trial's virtual signal as lag,re,im")
    spectrum.set_defaults(func=cmd_spectrum)

    serve = sub.add_parser("serve", help="Run the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.func(args)
    except (LabError, OSError) as e:
        logger.error(f"❌ {args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2
