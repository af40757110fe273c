"""Command line front end.

Exit codes: 0 success, 1 invalid input or configuration, 2 mathematical
domain error (non-analytic input, zero function, failed fit), 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from . import defaults
from .errors import HardyError
from .experiments import EXPERIMENTS, FORMATS, ExperimentConfig, emit_report, run_experiment


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for domain errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> tuple[int, ...]:
    """``a..b`` (inclusive) or a comma-separated list."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return tuple(range(int(lo), int(hi) + 1))
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a..b' or comma-separated integers, got {text!r}") from None


_HELP = {
    "growth": "operator norm ratio across p and its power-law slope",
    "zygmund": "square function against the L log L functional",
    "sharpness": "lacunary projection of the beta_N family",
    "bonami": "Lq/L2 and L2/L1 constants of random lacunary polynomials",
    "decompose": "per-piece table of the analytic decomposition",
    "trace": "every estimate of the extrapolation chain on one input",
    "equivalence": "endpoint constant ||Tf||_1 / ||f||_{L log^r L} across a sweep",
    "orlicz-norm": "Luxemburg norm and Zygmund functional of one input",
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--operator", help="square_function | lacunary_projection | riesz_projection")
    common.add_argument("--family", help="family spec, e.g. geometric:rho=0.9 or beta:N=4")
    common.add_argument("--coeffs", metavar="FILE", help="coefficient file with lines n,re,im")
    common.add_argument("--p-grid", type=_floats, help="comma-separated exponents in (1, 2]")
    common.add_argument("--n-range", type=_ints, help="e.g. 1..8 or 3,5,7")
    common.add_argument("--m-range", type=_ints, help="swept sizes (polynomial size or max frequency)")
    common.add_argument("--q-grid", type=_floats, help="comma-separated exponents in (2, 16]")
    common.add_argument("--trials", type=int)
    common.add_argument("--r", type=float, help="Zygmund exponent / model exponent")
    common.add_argument("--grid-oversample", type=float, default=defaults.OVERSAMPLE)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--format", choices=FORMATS, default="json")

    parser = _Parser(prog="hardyano", description="Numerical checks of endpoint extrapolation on the torus.")
    sub = parser.add_subparsers(dest="experiment", required=True, parser_class=_Parser)
    for name in EXPERIMENTS:
        sub.add_parser(name, parents=[common], help=_HELP[name], description=_HELP[name])
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig(
        experiment=args.experiment,
        operator=args.operator,
        family=args.family,
        coeffs=args.coeffs,
        p_grid=args.p_grid,
        n_range=args.n_range,
        m_range=args.m_range,
        q_grid=args.q_grid,
        r=args.r,
        trials=args.trials,
        oversample=args.grid_oversample,
        seed=args.seed,
        out=args.out,
        format=args.format,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args).resolved()
        report = run_experiment(cfg)
        emit_report(report, cfg.out, cfg.format)
    except HardyError as exc:
        print(f"hardyano: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"hardyano: I/O error: {exc}", file=sys.stderr)
        return 3
    if cfg.out not in (None, "-"):
        print(f"wrote {cfg.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
