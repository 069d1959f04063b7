"""
Metrics tracking for solver runs.
"""

import logging
from collections import defaultdict
from threading import Lock
from typing import Dict, Optional

logger = logging.getLogger(__name__)


class SolverMetrics:
    """Tracks local solver outcomes and per-phase wall time."""

    def __init__(self):
        """Initialize metrics tracker."""
        self._lock = Lock()
        self.reset()

    def reset(self) -> None:
        """Reset all metrics."""
        with self._lock:
            self.runs = 0
            self.converged = 0
            self.failed = 0
            self.divergent = 0
            self.iterations = 0
            self.points_by_origin = defaultdict(int)
            self.phase_seconds = defaultdict(float)

    def record_run(self, converged: int = 0, failed: int = 0, divergent: int = 0,
                   iterations: int = 0, origin: Optional[str] = None, points: int = 0) -> None:
        """
        Record the outcome of a batch of local runs.

        Parameters:
        -----------
        converged : int
            Runs that reached the gradient tolerance
        failed : int
            Runs that stopped without converging (divergent included)
        divergent : int
            Runs that left the search ball
        iterations : int
            Total iterations spent
        origin : str, optional
            Origin label of the distinct points found
        points : int
            Distinct points found
        """
        with self._lock:
            self.runs += converged + failed
            self.converged += converged
            self.failed += failed
            self.divergent += divergent
            self.iterations += iterations
            if origin is not None:
                self.points_by_origin[origin] += points

    def record_phase(self, name: str, seconds: float) -> None:
        """Add wall time spent in a named phase."""
        with self._lock:
            self.phase_seconds[name] += seconds

    def get_summary(self) -> Dict:
        """
        Get metrics summary.

        Returns:
        --------
        dict
            Dictionary with current metrics
        """
        with self._lock:
            return {
                'runs': self.runs,
                'converged': self.converged,
                'failed': self.failed,
                'divergent': self.divergent,
                'convergence_rate': (self.converged / self.runs * 100) if self.runs > 0 else 0.0,
                'iterations': self.iterations,
                'points_by_origin': dict(self.points_by_origin),
                'phase_seconds': dict(self.phase_seconds),
            }

    def log_summary(self) -> None:
        """Log metrics summary."""
        summary = self.get_summary()
        logger.info("Solver Metrics Summary:")
        logger.info(f"  Local runs: {summary['runs']} ({summary['convergence_rate']:.1f}% converged)")
        logger.info(f"  Failed: {summary['failed']} (divergent: {summary['divergent']})")
        logger.info(f"  Iterations: {summary['iterations']}")
        for origin, count in sorted(summary['points_by_origin'].items()):
            logger.info(f"  Points via {origin}: {count}")
        for phase, seconds in sorted(summary['phase_seconds'].items()):
            logger.info(f"  {phase}: {seconds:.3f}s")


# Global metrics instance
_metrics_instance: Optional[SolverMetrics] = None


def get_metrics() -> SolverMetrics:
    """Get global metrics instance."""
    global _metrics_instance
    if _metrics_instance is None:
        _metrics_instance = SolverMetrics()
    return _metrics_instance
