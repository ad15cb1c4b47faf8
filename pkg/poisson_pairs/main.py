"""CLI entry point for poisson-pairs."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .config import load_config
from .errors import InapplicableError, ParseError, PoissonPairsError, PreconditionError, UsageError
from .models import ExitCode
from .registry import case_ids
from .reporting import print_report
from .workbench import CONSTRUCT_KINDS, Workbench


class ArgumentParser(argparse.ArgumentParser):
    """Parser whose errors exit with the usage code instead of 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments."""
    parser = ArgumentParser(
        prog="poisson-pairs",
        description="Exact computations with Poisson pairs: flatness, genericity and constructions",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  poisson-pairs check truncated5.json
  poisson-pairs flatness pencil.json --point 0,0,1,0,1
  poisson-pairs construct secondary-pencil --input truncated5.json --alpha e5 --beta e5+e4
  poisson-pairs --workers 4 verify-paper --all
        """
    )

    parser.add_argument("--config", type=Path, help="Path to configuration file")
    parser.add_argument("--seed", type=int, help="Seed of the generic point search")
    parser.add_argument("--workers", type=int, help="Processes used by verify-paper --all")
    parser.add_argument("--json", action="store_true", help="Print reports as JSON")
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable verbose output")
    parser.add_argument("--version", action="version", version="%(prog)s 1.0.0")

    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="Jacobi identity and modular vector of an algebra file")
    check.add_argument("algebra", type=Path)

    flatness = commands.add_parser("flatness", help="Flatness verdict of a pencil file")
    flatness.add_argument("pencil", type=Path)
    flatness.add_argument("--point", help="Comma-separated rational coordinates")
    flatness.add_argument("--shift", help="Replace Lambda1 by Lambda1 + a*Lambda(point)")

    genericity = commands.add_parser("genericity", help="Genericity of a pencil, or of a couple on an algebra")
    genericity.add_argument("file", type=Path, help="Pencil file, or algebra file with --alpha/--beta")
    genericity.add_argument("--point", help="Comma-separated rational coordinates")
    genericity.add_argument("--alpha", help="Functional in basis labels, e.g. e5")
    genericity.add_argument("--beta", help="Functional in basis labels, e.g. e5+e4")

    construct = commands.add_parser("construct", help="Build an algebra or a pencil file")
    construct.add_argument("kind", choices=CONSTRUCT_KINDS)
    construct.add_argument("--m", type=int, help="Dimension of the truncated algebra")
    construct.add_argument("--n", type=int, help="Size of the affine algebras")
    construct.add_argument("--a", help="Character parameter")
    construct.add_argument("--input", type=Path, help="Algebra file")
    construct.add_argument("--input2", type=Path, help="Second factor of a product (default aff(1))")
    construct.add_argument("--target", type=int, help="1-based target index of the deforming endomorphism")
    construct.add_argument("--source", type=int, help="1-based source index of the deforming endomorphism")
    construct.add_argument("--alpha", help="Functional in basis labels")
    construct.add_argument("--beta", help="Functional in basis labels")
    construct.add_argument("--output", "-o", type=Path, help="Output file (printed when omitted)")

    verify = commands.add_parser("verify-paper", aliases=["verify"], help="Recompute the golden cases")
    selection = verify.add_mutually_exclusive_group(required=True)
    selection.add_argument("--case", action="append", dest="cases", metavar="ID",
                           help=f"Case to run; one of {', '.join(case_ids())}")
    selection.add_argument("--all", action="store_true", dest="run_all", help="Run every case")

    classify = commands.add_parser("classify3", help="Dimension-3 classifiers")
    classifiers = classify.add_subparsers(dest="classifier", required=True)
    linear = classifiers.add_parser("linear", help="Linear pair with the cocycle b2 e1*^e2* + b3 e1*^e3*")
    linear.add_argument("algebra", type=Path)
    linear.add_argument("--b2", required=True)
    linear.add_argument("--b3", required=True)
    lie = classifiers.add_parser("lie", help="Pair of 3-dimensional brackets")
    lie.add_argument("algebra", type=Path)
    lie.add_argument("algebra2", type=Path)

    return parser.parse_args(argv)


def run(workbench: Workbench, args: argparse.Namespace):
    if args.command == "check":
        return workbench.check(args.algebra)
    if args.command == "flatness":
        return workbench.flatness(args.pencil, point=args.point, shift=args.shift)
    if args.command == "genericity":
        return workbench.genericity(args.file, point=args.point, alpha=args.alpha, beta=args.beta)
    if args.command == "construct":
        params = {name: getattr(args, name) for name in
                  ("m", "n", "a", "input", "input2", "target", "source", "alpha", "beta")}
        return workbench.construct(args.kind, params, output=args.output)
    if args.command in ("verify-paper", "verify"):
        return workbench.verify(args.cases or (), run_all=args.run_all)
    if args.classifier == "linear":
        return workbench.classify_linear(args.algebra, args.b2, args.b3)
    return workbench.classify_lie(args.algebra, args.algebra2)


def _exit_code(error: PoissonPairsError) -> ExitCode:
    if isinstance(error, UsageError):
        return ExitCode.USAGE
    if isinstance(error, ParseError):
        return ExitCode.PARSE
    if isinstance(error, (InapplicableError, PreconditionError)):
        return ExitCode.INAPPLICABLE
    return ExitCode.FAILURE


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI application."""
    verbose = False
    try:
        args = parse_arguments(argv)
        verbose = args.verbose
        config = load_config(args.config)

        if args.seed is not None:
            config.seed = args.seed
        if args.workers is not None:
            config.workers = args.workers
        if args.json:
            config.json_output = True
        if args.verbose:
            config.verbose = True
        config.validate()

        logging.basicConfig(
            level=config.effective_log_level,
            format="%(asctime)s %(name)s %(levelname)s %(message)s",
        )

        workbench = Workbench(config)
        report = run(workbench, args)
        print_report(report, json_output=config.json_output)
        return int(report.exit_code)

    except KeyboardInterrupt:
        print("\n Interrupted.")
        return int(ExitCode.INTERRUPTED)
    except PoissonPairsError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return int(_exit_code(e))
    except Exception as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        if verbose:
            import traceback
            traceback.print_exc()
        return int(ExitCode.FAILURE)


if __name__ == "__main__":
    sys.exit(main())
