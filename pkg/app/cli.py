"""Command line interface: gen, select, factor, eval, sweep, ingest and serve."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from .config import (
    COSNTF_DELTA,
    COSNTF_DELTA_REAL,
    COSNTF_MAXITER,
    FGM_LAMBDA,
    LOG_DATE_FORMAT,
    LOG_FORMAT,
    LOG_LEVEL,
    NOISE_LEVELS,
    RECOVERY_DELTA,
    RECOVERY_MAXITER,
    SAMPLING_DISTRIBUTIONS,
    SLICE_SUM_TARGET,
    SWEEP_METHODS,
    SWEEP_TRIALS,
)
from .models.experiment import SynthSpec
from .services.experiments import summarize, sweep, write_csv
from .services.recovery import reconstruct, recover_factors
from .services.scoring import rel_approx, rel_error
from .services.selection import SELECTION_METHODS, select_indices
from .services.synthetic import gen_synthetic
from .utils.image_utils import ingest_images
from .utils.tensor_io import read_idx, read_t3t, write_idx, write_t3t

logger = logging.getLogger(__name__)


def _size(text: str) -> Tuple[int, int]:
    try:
        height, width = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected HxW, got {text!r}")
    if height < 1 or width < 1:
        raise argparse.ArgumentTypeError(f"Sizes must be positive, got {text!r}")
    return height, width


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma separated numbers, got {text!r}")


def _add_spec_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--m", type=int, default=100)
    parser.add_argument("--n", type=int, default=100)
    parser.add_argument("--p", type=int, default=10)
    parser.add_argument("--r1", type=int, default=10)
    parser.add_argument("--r2", type=int, default=3)
    parser.add_argument("--slice-sum", type=float, default=SLICE_SUM_TARGET)
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cosntf", description="Coseparable nonnegative tensor factorization")
    parser.add_argument("--log-level", default=LOG_LEVEL, help="Logging level (default from LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Generate a noisy coseparable synthetic tensor")
    _add_spec_args(gen)
    gen.add_argument("--noise", type=float, default=0.0, help="Noise level ||N||_F / ||A||_F")
    gen.add_argument("--out", type=Path, required=True, help="Output .t3t file")
    gen.add_argument("--truth", type=Path, help="Ground truth .idx file (default: next to --out)")

    select = sub.add_parser("select", help="Select the indices of a coseparable core")
    select.add_argument("tensor", type=Path)
    select.add_argument("--method", choices=SELECTION_METHODS, default="cosntf")
    select.add_argument("--dist", choices=SAMPLING_DISTRIBUTIONS, default="uniform")
    select.add_argument("--r1", type=int, required=True)
    select.add_argument("--r2", type=int, required=True)
    select.add_argument("--seed", type=int, default=0)
    select.add_argument("--delta", type=float, default=None,
                        help=f"Stopping threshold (default {COSNTF_DELTA:g}, or {COSNTF_DELTA_REAL:g} with --real-data)")
    select.add_argument("--real-data", action="store_true", help="Use the looser threshold suited to image data")
    select.add_argument("--maxiter", type=int, default=COSNTF_MAXITER)
    select.add_argument("--lambda", dest="lam", type=float, default=FGM_LAMBDA)
    select.add_argument("--swap", action="store_true", help="Exchange the t-DEIM bases of the tcur method")
    select.add_argument("--out", type=Path, required=True, help="Output .idx file")

    factor = sub.add_parser("factor", help="Recover nonnegative factors for a given core")
    factor.add_argument("tensor", type=Path)
    factor.add_argument("indices", type=Path)
    factor.add_argument("--maxiter", type=int, default=RECOVERY_MAXITER)
    factor.add_argument("--delta", type=float, default=RECOVERY_DELTA)
    factor.add_argument("--out-prefix", type=str, help="Write <prefix>_P1.t3t, <prefix>_core.t3t, <prefix>_P2.t3t")

    evaluate = sub.add_parser("eval", help="Relative error and approximation of two tensors")
    evaluate.add_argument("reference", type=Path)
    evaluate.add_argument("approximation", type=Path)

    sweep_cmd = sub.add_parser("sweep", help="Noise sweep over synthetic tensors")
    _add_spec_args(sweep_cmd)
    sweep_cmd.add_argument("--noise-levels", type=_float_list, default=NOISE_LEVELS)
    sweep_cmd.add_argument("--trials", type=int, default=SWEEP_TRIALS)
    sweep_cmd.add_argument("--methods", type=lambda s: [v for v in s.split(",") if v], default=SWEEP_METHODS)
    sweep_cmd.add_argument("--delta", type=float, default=COSNTF_DELTA)
    sweep_cmd.add_argument("--maxiter", type=int, default=COSNTF_MAXITER)
    sweep_cmd.add_argument("--lambda", dest="lam", type=float, default=FGM_LAMBDA)
    sweep_cmd.add_argument("--timing", action="store_true", help="Record wall time (makes the CSV non-reproducible)")
    sweep_cmd.add_argument("--out", type=Path, required=True, help="Output CSV file")

    ingest = sub.add_parser("ingest", help="Stack a directory of PGM images into a tensor")
    ingest.add_argument("directory", type=Path)
    ingest.add_argument("--resize", type=_size, help="Target size HxW")
    ingest.add_argument("--out", type=Path, required=True)

    serve = sub.add_parser("serve", help="Run the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _cmd_gen(args) -> None:
    spec = SynthSpec(
        m=args.m, n=args.n, p=args.p, r1=args.r1, r2=args.r2,
        noise_level=args.noise, slice_sum=args.slice_sum, seed=args.seed,
    )
    data = gen_synthetic(spec)
    write_t3t(args.out, data.tensor)
    truth = args.truth or args.out.with_suffix(".idx")
    write_idx(truth, data.I, data.J)
    print(f"Wrote {args.out} and {truth}")


def _cmd_select(args) -> None:
    tensor = read_t3t(args.tensor)
    delta = args.delta if args.delta is not None else (COSNTF_DELTA_REAL if args.real_data else COSNTF_DELTA)
    result = select_indices(
        tensor, args.method, args.r1, args.r2, seed=args.seed, dist=args.dist,
        delta=delta, maxiter=args.maxiter, lam=args.lam, swap=args.swap,
    )
    write_idx(args.out, result.I, result.J)
    print(f"{result.method}: I={(result.I + 1).tolist()} J={(result.J + 1).tolist()} "
          f"iterations={result.outer_iterations} converged={result.converged}")


def _cmd_factor(args) -> None:
    tensor = read_t3t(args.tensor)
    rows, cols = read_idx(args.indices)
    model = recover_factors(tensor, rows, cols, maxiter=args.maxiter, delta=args.delta)
    if args.out_prefix:
        write_t3t(f"{args.out_prefix}_P1.t3t", model.P1)
        write_t3t(f"{args.out_prefix}_core.t3t", model.core)
        write_t3t(f"{args.out_prefix}_P2.t3t", model.P2)
    approx = reconstruct(model)
    print(f"rel_error={rel_error(tensor, approx):.6e} rel_approx={100.0 * rel_approx(tensor, approx):.4f}% "
          f"iterations={model.iterations} converged={model.converged}")


def _cmd_eval(args) -> None:
    reference = read_t3t(args.reference)
    approx = read_t3t(args.approximation)
    print(f"rel_error={rel_error(reference, approx):.6e} rel_approx={100.0 * rel_approx(reference, approx):.4f}%")


def _cmd_sweep(args) -> None:
    base = SynthSpec(m=args.m, n=args.n, p=args.p, r1=args.r1, r2=args.r2, slice_sum=args.slice_sum, seed=args.seed)
    records = sweep(
        base, noise_levels=args.noise_levels, trials=args.trials, methods=args.methods,
        delta=args.delta, maxiter=args.maxiter, lam=args.lam, timing=args.timing,
    )
    write_csv(summarize(records), args.out)
    print(f"Wrote {len(records)} trial records to {args.out}")


def _cmd_ingest(args) -> None:
    tensor = ingest_images(args.directory, resize=args.resize)
    write_t3t(args.out, tensor)
    print(f"Wrote {tensor.shape} tensor to {args.out}")


def _cmd_serve(args) -> None:
    import uvicorn

    uvicorn.run("app.main:app", host=args.host, port=args.port)


COMMANDS = {
    "gen": _cmd_gen,
    "select": _cmd_select,
    "factor": _cmd_factor,
    "eval": _cmd_eval,
    "sweep": _cmd_sweep,
    "ingest": _cmd_ingest,
    "serve": _cmd_serve,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Run a subcommand; user errors print one line and return exit code 2."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format=LOG_FORMAT,
        datefmt=LOG_DATE_FORMAT,
    )
    try:
        COMMANDS[args.command](args)
    except ValueError as e:
        print(f"error: {str(e)}", file=sys.stderr)
        return 2
    return 0
