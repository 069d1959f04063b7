"""
Tests for app/utils/metrics.py
"""

import logging
import threading

import pytest
from app.utils.metrics import SolverMetrics, get_metrics


class TestSolverMetrics:
    """Test SolverMetrics class."""

    def test_metrics_initialization(self):
        """Test metrics initialization."""
        metrics = SolverMetrics()

        assert metrics.runs == 0
        assert metrics.converged == 0
        assert metrics.failed == 0
        assert metrics.divergent == 0
        assert metrics.iterations == 0

    def test_record_run(self):
        """Test recording a batch of local runs."""
        metrics = SolverMetrics()

        metrics.record_run(converged=8, failed=2, divergent=1, iterations=120, origin='descent', points=3)

        assert metrics.runs == 10
        assert metrics.converged == 8
        assert metrics.failed == 2
        assert metrics.divergent == 1
        assert metrics.iterations == 120
        assert metrics.points_by_origin['descent'] == 3

    def test_record_phase(self):
        """Test accumulating wall time per phase."""
        metrics = SolverMetrics()

        metrics.record_phase('minimize', 0.5)
        metrics.record_phase('minimize', 0.25)

        assert metrics.phase_seconds['minimize'] == 0.75

    def test_get_summary(self):
        """Test getting metrics summary."""
        metrics = SolverMetrics()

        metrics.record_run(converged=3, failed=1, origin='ascent', points=2)
        metrics.record_run(converged=1, origin='mountain-pass', points=1)

        summary = metrics.get_summary()

        assert summary['runs'] == 5
        assert summary['converged'] == 4
        assert summary['failed'] == 1
        assert summary['convergence_rate'] == 80.0
        assert summary['points_by_origin'] == {'ascent': 2, 'mountain-pass': 1}

    def test_convergence_rate_without_runs(self):
        assert SolverMetrics().get_summary()['convergence_rate'] == 0.0

    def test_reset(self):
        """Test resetting metrics."""
        metrics = SolverMetrics()
        metrics.record_run(converged=3, failed=1, origin='ascent', points=2)
        metrics.record_phase('maximize', 1.0)

        metrics.reset()

        summary = metrics.get_summary()
        assert summary['runs'] == 0
        assert summary['points_by_origin'] == {}
        assert summary['phase_seconds'] == {}

    def test_thread_safety(self):
        """Test concurrent recording."""
        metrics = SolverMetrics()

        def worker():
            for _ in range(1000):
                metrics.record_run(converged=1)

        threads = [threading.Thread(target=worker) for _ in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

        assert metrics.runs == 4000

    def test_log_summary(self, caplog, monkeypatch):
        """Test that the summary is logged at INFO."""
        monkeypatch.setattr(logging.getLogger("app"), "propagate", True)
        metrics = SolverMetrics()
        metrics.record_run(converged=2, failed=2, divergent=1, origin='descent', points=1)
        metrics.record_phase('minimize', 0.1)

        with caplog.at_level('INFO', logger='app.utils.metrics'):
            metrics.log_summary()

        assert "Solver Metrics Summary" in caplog.text
        assert "50.0% converged" in caplog.text
        assert "Points via descent: 1" in caplog.text


class TestGetMetrics:
    """Test the global accessor."""

    def test_returns_singleton(self):
        assert get_metrics() is get_metrics()
        assert isinstance(get_metrics(), SolverMetrics)
