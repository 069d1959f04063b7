"""
Main application entry point for the varbvp command line.

    varbvp <spectrum|check|solve|verify|oracle> <problem.json> [solutions.json]
           [--csv] [--tol X] [--starts K] [--seed S] [--box R] [--out FILE]
"""

import sys
import argparse
import logging
from pathlib import Path
from typing import List, Optional

# Add parent directory to path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.difference_calculus import SpectralError
from src.problem_loader import ProblemFileError, load_problem_file
from src.reporting import write_atomic
from src.solvers import SolverConfig
from app.config.settings import Settings
from app.solve_engine import EXIT_FAILURE, EXIT_USAGE, CommandResult, SolveEngine, UsageError

logger = logging.getLogger('app.main')

COMMANDS = ('spectrum', 'check', 'solve', 'verify', 'oracle')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varbvp",
        description="Solver and verifier for discrete 2n-order Dirichlet boundary value problems",
    )
    parser.add_argument("command", choices=COMMANDS, help="What to run")
    parser.add_argument("problem", type=Path, help="Problem file (JSON)")
    parser.add_argument("solutions", type=Path, nargs="?",
                        help="Solution file to check (verify only)")
    parser.add_argument("--csv", action="store_true",
                        help="Emit tabular sections as CSV instead of JSON")
    parser.add_argument("--tol", type=float,
                        help="Gradient tolerance (verify: residual threshold, default 1e-8)")
    parser.add_argument("--starts", type=int, help="Random multistart points")
    parser.add_argument("--seed", type=int, help="Seed of the start generator")
    parser.add_argument("--box", type=float, help="Half-width of the start box")
    parser.add_argument("--out", type=Path, help="Write the report to FILE instead of stdout")
    return parser


def solver_config(args: argparse.Namespace, file_overrides: dict) -> SolverConfig:
    """CLI flags > problem-file overrides > environment > defaults."""
    cfg = Settings.solver_config(**file_overrides)
    tol = args.tol if args.command != 'verify' else None
    return cfg.with_overrides(tol_grad=tol, starts=args.starts, seed=args.seed, box_radius=args.box)


def dispatch(engine: SolveEngine, args: argparse.Namespace) -> CommandResult:
    problem = load_problem_file(args.problem)
    if args.command == 'verify':
        return engine.verify(problem, args.solutions, args.tol)

    cfg = solver_config(args, problem.overrides)
    if args.command == 'spectrum':
        return engine.spectrum(problem)
    if args.command == 'check':
        return engine.check(problem)
    if args.command == 'solve':
        return engine.solve(problem, cfg)
    return engine.oracle(problem, cfg)


def run_command(argv: Optional[List[str]] = None) -> int:
    """
    Run one varbvp command.

    Parameters:
    -----------
    argv : list of str, optional
        Arguments without the program name (default: sys.argv[1:])

    Returns:
    --------
    int
        0 on success, 1 on solver non-convergence or failed verification,
        2 on usage or parse errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else 0

    if args.command == 'verify' and args.solutions is None:
        parser.print_usage(sys.stderr)
        print("varbvp: error: verify needs a solutions file", file=sys.stderr)
        return EXIT_USAGE
    if args.command != 'verify' and args.solutions is not None:
        parser.print_usage(sys.stderr)
        print(f"varbvp: error: unexpected argument {args.solutions}", file=sys.stderr)
        return EXIT_USAGE

    engine = SolveEngine()
    if Settings.LOG_LEVEL == "DEBUG":
        Settings.print_settings()
    for issue in Settings.validate():
        logger.warning("%s", issue)

    try:
        result = dispatch(engine, args)
    except (ProblemFileError, UsageError, ValueError) as e:
        logger.error("%s", e)
        print(f"varbvp: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (SpectralError, ArithmeticError) as e:
        # f overflowed or the spectrum failed to converge
        logger.error("%s", e)
        print(f"varbvp: error: {e}", file=sys.stderr)
        return EXIT_FAILURE

    text = result.render(csv=args.csv)
    if args.out is not None:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    return result.exit_code


def main():
    """Main application entry point."""
    sys.exit(run_command())


if __name__ == "__main__":
    main()
