"""
Screening Service - Spectral thresholds, growth-condition screening and
theorem applicability for one problem file.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

from src.difference_calculus import SpectralBounds
from src.hypothesis import (
    TWO_SOLUTIONS_T1,
    TWO_SOLUTIONS_T2,
    ConditionReport,
    RingEstimate,
    TheoremReport,
    Thresholds,
    ZeroSlopeInapplicableError,
    applicability,
    mountain_ring,
    screen_claims,
    thresholds,
)
from src.problem_loader import ProblemFile

logger = logging.getLogger(__name__)


@dataclass
class ScreeningResult:
    """Claim reports, the aggregate verdict and the separating rings."""

    reports: List[ConditionReport]
    theorems: TheoremReport
    rings: List[RingEstimate] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'claims': [r.to_dict() for r in self.reports],
            'theorems': self.theorems.to_dict(),
            'rings': [r.to_dict() for r in self.rings],
        }


class ScreeningService:
    """Service for the spectrum and check commands."""

    def spectrum(self, problem: ProblemFile) -> tuple:
        """
        Embedding constants and condition thresholds.

        Returns:
        --------
        tuple (bounds, thresholds)
            SpectralBounds and Thresholds of the problem
        """
        spec = problem.spec
        bounds: SpectralBounds = spec.spectral_bounds
        th: Thresholds = thresholds(spec)
        logger.debug("spectrum n=%d N=%d: λ=%.12g λ_max=%.12g", spec.n, spec.N,
                     bounds.lambda_min, bounds.lambda_max)
        return bounds, th

    def check(self, problem: ProblemFile, c: Optional[float] = None) -> ScreeningResult:
        """
        Screen the claims of a problem file and decide applicability.

        Parameters:
        -----------
        problem : ProblemFile
            Parsed problem file with its claims
        c : float, optional
            Slope constant; defaults to the file's c

        Returns:
        --------
        ScreeningResult
            Reports in claim order, the TheoremReport and, for every
            applicable two-solution result, the ring around θ
        """
        spec = problem.spec
        c = problem.c if c is None else c
        reports = screen_claims(spec, problem.claims)
        for report in reports:
            logger.info("%s: %s", report.condition, report.verdict)
        theorems = applicability(spec, reports, c=c)
        return ScreeningResult(reports=reports, theorems=theorems, rings=self.rings(problem, theorems))

    def rings(self, problem: ProblemFile, theorems: TheoremReport) -> List[RingEstimate]:
        """Separating rings for the applicable two-solution results."""
        spec = problem.spec
        rings = []
        for label, variant in ((TWO_SOLUTIONS_T1, 'inf-max'), (TWO_SOLUTIONS_T2, 'sup-min')):
            if label not in theorems.applicable:
                continue
            c = theorems.c if theorems.c is not None else self._default_c(theorems, variant)
            try:
                rings.append(mountain_ring(spec, c, variant))
            except ZeroSlopeInapplicableError as e:
                logger.warning("no ring for %s: %s", label, e)
        return rings

    @staticmethod
    def _default_c(theorems: TheoremReport, variant: str) -> float:
        values = [s.value for s in theorems.zero_slope or []]
        return max(values) if variant == 'inf-max' else min(values)
