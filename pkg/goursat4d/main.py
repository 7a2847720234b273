"""Command-line entry point"""
import argparse
import logging
import sys
from typing import List, Optional

from goursat4d.cli.commands import EXIT_INVALID, HANDLERS
from goursat4d.core.config import settings
from goursat4d.schemas import BoundaryMode, FieldFormat, IterationMode, QuadratureRule, SamplerKind

logger = logging.getLogger(__name__)


def configure_logging():
    level = logging.DEBUG if settings.debug else getattr(logging, settings.log_level.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def lengths_arg(text: str) -> List[float]:
    lengths = [float(h) for h in text.split(",")]
    if len(lengths) != 4:
        raise argparse.ArgumentTypeError(f"expected four comma-separated lengths, got {text!r}")
    return lengths


class UsageError(ValueError):
    """Malformed command line"""


class CommandParser(argparse.ArgumentParser):
    """Reports usage errors as exceptions so they map to the invalid-input exit code"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = CommandParser(add_help=False)
    common.add_argument("--p", type=float, default=None, help="L_p exponent (inf for the max norm)")
    common.add_argument("--tol", type=float, default=None, help="convergence / compatibility tolerance")
    common.add_argument("--max-iter", dest="max_iter", type=int, default=None, help="successive-approximation cap")
    common.add_argument("--rule", choices=[r.value for r in QuadratureRule], default=None)
    common.add_argument("--mode", choices=[m.value for m in IterationMode], default=None)
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--out-dir", dest="out_dir", default="out")
    common.add_argument("--format", choices=[f.value for f in FieldFormat], default=FieldFormat.GF4.value)
    common.add_argument("--threads", type=int, default=None, help="worker count, 0 = one per CPU")

    parser = CommandParser(
        prog=settings.app_name,
        description="Goursat problem solver for D1 D2 D3^2 D4^2 u with rough coefficients",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="solve a problem file")
    p.add_argument("spec", help="problem JSON file")

    p = sub.add_parser("convert-bc", parents=[common], help="convert boundary data to the other form")
    p.add_argument("spec")

    p = sub.add_parser("check-compat", parents=[common], help="check the compatibility of classical data")
    p.add_argument("spec")

    p = sub.add_parser("scan-homeo", parents=[common], help="scan ||Qb|| / ||b|| over random samples")
    p.add_argument("--counts", type=int, default=7, help="nodes per axis")
    p.add_argument("--lengths", type=lengths_arg, default=[1.0, 1.0, 1.0, 1.0])
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--sampler", choices=[s.value for s in SamplerKind], default=SamplerKind.UNIFORM.value)

    p = sub.add_parser("mms", parents=[common], help="solve a manufactured case on one or more grids")
    p.add_argument("case")
    p.add_argument("--grids", default="9", help="comma-separated nodes per axis, e.g. 9,17")
    p.add_argument("--lengths", type=lengths_arg, default=[1.0, 1.0, 1.0, 1.0])
    p.add_argument("--boundary", choices=[b.value for b in BoundaryMode], default=BoundaryMode.NONCLASSICAL.value)

    p = sub.add_parser("apply-op", parents=[common], help="apply V_{1,1,2,2} to a field file")
    p.add_argument("field")
    p.add_argument("--spec", default=None, help="problem file supplying grid and coefficients")
    return parser


def run_cli(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; returns the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return HANDLERS[args.command](args)
    except (ValueError, OSError) as exc:
        logger.debug("Invalid input", exc_info=True)
        print(f"error={exc}")
        return EXIT_INVALID


def main():
    configure_logging()
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
