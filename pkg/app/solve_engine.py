"""
Solve Engine - Runs one varbvp command and builds its report.
"""

import logging
import sys
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import List, Optional, Tuple

import pandas as pd

from src import reporting
from src.problem_loader import ProblemFile, load_solutions_path
from src.solvers import SolverConfig
from app.config.settings import Settings
from app.services.screening_service import ScreeningService
from app.services.solve_service import SolveService
from app.utils.metrics import get_metrics

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

_HANDLER_TAG = '_varbvp_handler'


class UsageError(ValueError):
    """A request the command line cannot serve (e.g. oracle with N > 4)."""


@dataclass
class CommandResult:
    """Report of one command: the JSON document, its CSV tables and the exit code."""

    report: dict
    tables: List[Tuple[str, pd.DataFrame]] = field(default_factory=list)
    exit_code: int = EXIT_OK

    def render(self, csv: bool = False) -> str:
        if csv and self.tables:
            return reporting.csv_sections(self.tables)
        return reporting.canonical_json(self.report)


class SolveEngine:
    """Executes the spectrum, check, solve, verify and oracle commands."""

    def __init__(self, screening: Optional[ScreeningService] = None,
                 solving: Optional[SolveService] = None):
        self.logger = self._setup_logger()
        self.screening = screening or ScreeningService()
        self.solving = solving or SolveService()
        self.metrics = get_metrics()
        self.metrics.reset()

    def _setup_logger(self) -> logging.Logger:
        """Attach fresh stderr (and optional file) handlers to the app and src loggers."""
        level = getattr(logging, Settings.LOG_LEVEL, logging.INFO)
        formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')

        handlers = []
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(level)
        handlers.append(console_handler)
        if Settings.LOG_TO_FILE:
            Settings.LOG_DIR.mkdir(parents=True, exist_ok=True)
            log_file = Settings.LOG_DIR / f"varbvp_{datetime.now().strftime('%Y%m%d')}.log"
            file_handler = logging.FileHandler(log_file)
            file_handler.setLevel(logging.DEBUG)
            handlers.append(file_handler)

        for name in ('app', 'src'):
            named = logging.getLogger(name)
            named.setLevel(min(level, logging.DEBUG if Settings.LOG_TO_FILE else level))
            named.propagate = False
            for old in [h for h in named.handlers if getattr(h, _HANDLER_TAG, False)]:
                named.removeHandler(old)
                old.close()
            for handler in handlers:
                handler.setFormatter(formatter)
                setattr(handler, _HANDLER_TAG, True)
                named.addHandler(handler)
        return logging.getLogger('app.engine')

    # ------------------------------------------------------------------
    # Commands
    # ------------------------------------------------------------------

    def spectrum(self, problem: ProblemFile) -> CommandResult:
        bounds, th = self.screening.spectrum(problem)
        body = reporting.spectrum_row(bounds, th)
        body['n'], body['N'] = problem.spec.n, problem.spec.N
        report = reporting.envelope('spectrum', problem, body)
        return CommandResult(report, [('spectrum', reporting.spectrum_table(bounds, th))])

    def check(self, problem: ProblemFile) -> CommandResult:
        result = self.screening.check(problem)
        report = reporting.envelope('check', problem, result.to_dict())
        return CommandResult(report, [('claims', reporting.conditions_table(result.reports))])

    def solve(self, problem: ProblemFile, cfg: SolverConfig) -> CommandResult:
        """Solve and emit a report that doubles as a solution file for verify."""
        spec = problem.spec
        theorems = self.screening.check(problem).theorems if problem.claims else None
        outcome = self.solving.solve(spec, cfg, theorems)
        digest = reporting.fingerprint(problem)
        outcome.solutions.fingerprint = digest

        body = {
            'lambda': spec.spectral_bounds.lambda_min,
            'solver': cfg.to_dict(),
            'strategy': [step.label for step in outcome.plan],
            'theorems': theorems.to_dict() if theorems is not None else None,
            'solutions': [p.to_dict() for p in outcome.solutions],
            'mountain_pass': [mp.to_dict() for mp in outcome.mountain_passes],
            'failed_starts': outcome.failed_starts,
            'notes': outcome.notes,
            'complete': outcome.complete,
        }
        report = reporting.envelope('solve', problem, body, digest)
        tables = [('solutions', reporting.solutions_table(outcome.solutions.points, spec.N))]
        self.metrics.log_summary()
        return CommandResult(report, tables, EXIT_OK if outcome.complete else EXIT_FAILURE)

    def verify(self, problem: ProblemFile, solutions_path: Path, tol: Optional[float]) -> CommandResult:
        spec = problem.spec
        solutions = load_solutions_path(solutions_path, spec.N)
        digest = reporting.fingerprint(problem)
        tol = Settings.VERIFY_TOL if tol is None else tol
        outcome = self.solving.verify(spec, solutions, tol, digest)
        body = {
            'tol': tol,
            'fingerprint_match': outcome.fingerprint_match,
            'points': [p.to_dict() for p in outcome.points],
            'passed': outcome.passed,
        }
        report = reporting.envelope('verify', problem, body, digest)
        table = reporting.verification_table([p.x for p in outcome.points],
                                             [p.report for p in outcome.points],
                                             [p.kind for p in outcome.points], spec.N)
        table.insert(4, 'ok', [p.ok for p in outcome.points])
        return CommandResult(report, [('verify', table)], EXIT_OK if outcome.passed else EXIT_FAILURE)

    def oracle(self, problem: ProblemFile, cfg: SolverConfig) -> CommandResult:
        spec = problem.spec
        if spec.N > Settings.ORACLE_MAX_N:
            raise UsageError(f"oracle is limited to N <= {Settings.ORACLE_MAX_N}, got N={spec.N}")
        result = self.solving.oracle(spec, cfg, Settings.ORACLE_MAX_NODES)
        digest = reporting.fingerprint(problem)
        body = {
            'lambda': spec.spectral_bounds.lambda_min,
            'solver': cfg.to_dict(),
            'solutions': [p.to_dict() for p in result],
            'grid': result.diagnostics[-1] if result.diagnostics else None,
            'failed_starts': sum(1 for d in result.diagnostics if 'error' in d),
        }
        report = reporting.envelope('oracle', problem, body, digest)
        tables = [('solutions', reporting.solutions_table(result.points, spec.N))]
        self.metrics.log_summary()
        return CommandResult(report, tables, EXIT_OK if result.points else EXIT_FAILURE)
