"""
Solve Service - Strategy selection, multistart, mountain pass, verification
and the oracle census.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.energy import EnergyReport, ProblemSpec, evaluate_point
from src.hypothesis import (
    EXISTENCE_ANTICOERCIVE,
    EXISTENCE_COERCIVE,
    TWO_SOLUTIONS_T1,
    TWO_SOLUTIONS_T2,
    TheoremReport,
)
from src.mountain_pass import (
    EndpointConditionError,
    EscapeSearchError,
    MountainPassResult,
    StagnationError,
    deform_path,
    find_escape_point,
)
from src.nonlinearity import EvaluationError, QuadratureError
from src.problem_loader import SolutionsFile
from src.solvers import (
    ConvergenceError,
    CriticalPoint,
    SolutionSet,
    SolverConfig,
    census,
    classify,
    dedup,
    multistart,
)
from app.utils.metrics import get_metrics

logger = logging.getLogger(__name__)

MOUNTAIN_PASS_ERRORS = (EndpointConditionError, EscapeSearchError, StagnationError,
                        ConvergenceError, EvaluationError, QuadratureError)
J_MATCH_RTOL = 1e-12


@dataclass
class SolveStep:
    """One stage of a solve plan."""

    action: str                 # 'minimize', 'maximize' or 'mountain-pass'
    variant: Optional[str] = None
    required: bool = True       # False for exploratory mountain passes

    @property
    def label(self) -> str:
        return f"mountain-pass:{self.variant}" if self.action == 'mountain-pass' else self.action


@dataclass
class SolveOutcome:
    """Result of the solve command."""

    solutions: SolutionSet
    plan: List[SolveStep]
    mountain_passes: List[MountainPassResult] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    failed_starts: int = 0
    complete: bool = True


@dataclass
class VerifiedPoint:
    x: np.ndarray
    report: EnergyReport
    kind: str
    ok: bool
    J_recorded: Optional[float] = None
    J_match: Optional[bool] = None

    def to_dict(self) -> dict:
        return {
            'x': [float(v) for v in self.x],
            'J': self.report.J,
            'grad_norm': self.report.grad_norm_inf,
            'residual': self.report.residual_norm_inf,
            'kind': self.kind,
            'ok': self.ok,
            'J_recorded': self.J_recorded,
            'J_match': self.J_match,
        }


@dataclass
class VerificationOutcome:
    points: List[VerifiedPoint]
    tol: float
    fingerprint_match: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return (all(p.ok and p.J_match is not False for p in self.points)
                and self.fingerprint_match is not False)


class SolveService:
    """Service for the solve, verify and oracle commands."""

    def __init__(self):
        self.metrics = get_metrics()

    def plan(self, spec: ProblemSpec, theorems: Optional[TheoremReport]) -> List[SolveStep]:
        """
        Choose the solve stages from the screening verdict.

        Coercive evidence minimizes, anti-coercive evidence maximizes; with
        neither both senses run. An applicable two-solution result adds a
        mountain pass from θ. Without one, a mountain pass is still tried
        from θ when θ is a strict local minimum (or maximum) of J, but its
        failure does not fail the run.
        """
        applicable = theorems.applicable if theorems is not None else []
        steps = []
        if EXISTENCE_COERCIVE in applicable:
            steps.append(SolveStep('minimize'))
        if EXISTENCE_ANTICOERCIVE in applicable:
            steps.append(SolveStep('maximize'))
        if not steps:
            steps = [SolveStep('minimize'), SolveStep('maximize')]

        if TWO_SOLUTIONS_T1 in applicable:
            steps.append(SolveStep('mountain-pass', 'inf-max'))
        if TWO_SOLUTIONS_T2 in applicable:
            steps.append(SolveStep('mountain-pass', 'sup-min'))
        if not any(s.action == 'mountain-pass' for s in steps):
            kind = self._theta_kind(spec)
            if kind == 'minimum':
                steps.append(SolveStep('mountain-pass', 'inf-max', required=False))
            elif kind == 'maximum':
                steps.append(SolveStep('mountain-pass', 'sup-min', required=False))
        return steps

    @staticmethod
    def _theta_kind(spec: ProblemSpec) -> Optional[str]:
        theta = np.zeros(spec.N)
        try:
            if np.max(np.abs(spec.grad(theta))) != 0.0:
                return None
            return classify(spec, theta)
        except (EvaluationError, QuadratureError):
            return None

    def solve(self, spec: ProblemSpec, cfg: SolverConfig,
              theorems: Optional[TheoremReport] = None) -> SolveOutcome:
        """
        Run the planned stages and merge every critical point found.

        Parameters:
        -----------
        spec : ProblemSpec
            Problem instance
        cfg : SolverConfig
            Solver settings
        theorems : TheoremReport, optional
            Screening verdict; None when the problem has no claims

        Returns:
        --------
        SolveOutcome
            complete is False when a required stage failed or nothing was found
        """
        steps = self.plan(spec, theorems)
        logger.info("solve plan: %s", ", ".join(s.label for s in steps))
        found: List[CriticalPoint] = []
        outcome = SolveOutcome(solutions=SolutionSet(), plan=steps)

        for step in steps:
            started = time.perf_counter()
            if step.action in ('minimize', 'maximize'):
                result = multistart(spec, step.action, cfg)
                found.extend(result.points)
                outcome.failed_starts += len(result.diagnostics)
                self._record_multistart(spec, cfg, step.action, result)
            else:
                mp = self._mountain_pass(spec, step, cfg, outcome)
                if mp is not None:
                    outcome.mountain_passes.append(mp)
                    found.append(mp.point)
                    self.metrics.record_run(converged=1, iterations=mp.sweeps,
                                            origin='mountain-pass', points=1)
            self.metrics.record_phase(step.label, time.perf_counter() - started)

        outcome.solutions = dedup(found, cfg.dedup_tol)
        if not outcome.solutions.points:
            outcome.complete = False
            outcome.notes.append("no critical point converged")
        if outcome.failed_starts:
            logger.warning("%d local runs did not converge (kept as diagnostics)", outcome.failed_starts)
        return outcome

    def _mountain_pass(self, spec: ProblemSpec, step: SolveStep, cfg: SolverConfig,
                       outcome: SolveOutcome) -> Optional[MountainPassResult]:
        try:
            x_b = find_escape_point(spec, step.variant, cfg)
            return deform_path(spec, np.zeros(spec.N), x_b, step.variant, cfg)
        except MOUNTAIN_PASS_ERRORS as e:
            message = f"{step.label}: {type(e).__name__}: {e}"
            outcome.notes.append(message)
            self.metrics.record_run(failed=1)
            if step.required:
                outcome.complete = False
                logger.error(message)
            else:
                logger.info("exploratory %s", message)
            return None

    def _record_multistart(self, spec: ProblemSpec, cfg: SolverConfig, sense: str,
                           result: SolutionSet) -> None:
        total = 1 + 2 * spec.N + cfg.starts
        failed = len(result.diagnostics)
        divergent = sum(1 for d in result.diagnostics if d['error'].startswith('DivergenceError'))
        self.metrics.record_run(
            converged=total - failed,
            failed=failed,
            divergent=divergent,
            iterations=sum(p.iterations for p in result.points),
            origin='descent' if sense == 'minimize' else 'ascent',
            points=len(result.points),
        )

    def verify(self, spec: ProblemSpec, solutions: SolutionsFile, tol: float,
               fingerprint: Optional[str] = None) -> VerificationOutcome:
        """
        Recompute J, gradient, residual and kind at every recorded point.

        A point passes when ‖residual‖∞ <= tol and its recorded J, if any,
        agrees to 1e-12 relative.
        """
        verified = []
        for x, entry in zip(solutions.points, solutions.recorded):
            report = evaluate_point(spec, x)
            recorded = entry.get('J')
            recorded = float(recorded) if isinstance(recorded, (int, float)) and not isinstance(recorded, bool) else None
            match = None
            if recorded is not None:
                match = bool(abs(report.J - recorded) <= J_MATCH_RTOL * max(1.0, abs(recorded)))
            verified.append(VerifiedPoint(
                x=x,
                report=report,
                kind=classify(spec, x),
                ok=bool(report.residual_norm_inf <= tol),
                J_recorded=recorded,
                J_match=match,
            ))
        fp_match = None
        if fingerprint is not None and solutions.fingerprint is not None:
            fp_match = solutions.fingerprint == fingerprint
        outcome = VerificationOutcome(points=verified, tol=tol, fingerprint_match=fp_match)
        logger.info("verify: %d points, %s", len(verified), "passed" if outcome.passed else "FAILED")
        return outcome

    def oracle(self, spec: ProblemSpec, cfg: SolverConfig, max_nodes: int) -> SolutionSet:
        """Dense census: both senses of multistart plus the grid Newton oracle."""
        started = time.perf_counter()
        result = census(spec, cfg, max_nodes=max_nodes)
        self.metrics.record_phase('oracle', time.perf_counter() - started)
        self.metrics.record_run(converged=len(result.points), origin='oracle', points=len(result.points))
        return result
