"""
Tests for src/mountain_pass.py
"""

import pytest
import numpy as np
from src.energy import energy_J
from src.mountain_pass import (
    EndpointConditionError,
    EscapeSearchError,
    deform_path,
    find_escape_point,
    initial_path_max,
    mountain_pass,
)
from src.solvers import SolverConfig


class TestInitialPathMax:
    """Test the maximum over the straight path."""

    def test_diagonal_peak(self, cubic_problem):
        """J(t, t) = t² - t⁴/2 peaks at t = 1 with value 1/2."""
        a, b = np.zeros(2), np.array([3.0, 3.0])
        assert initial_path_max(cubic_problem, a, b, 'inf-max', 41) == pytest.approx(0.5, abs=1e-12)

    def test_sup_min_sign(self, negative_cubic_problem):
        """sup-min maximizes -J; for J >= 0 the peak is 0 at θ."""
        a, b = np.zeros(2), np.array([1.0, 2.0])
        assert initial_path_max(negative_cubic_problem, a, b, 'sup-min', 11) == pytest.approx(0.0, abs=1e-12)


class TestDeformPath:
    """Test path deformation."""

    def test_cubic_inf_max(self, cubic_problem, default_config):
        result = deform_path(cubic_problem, [0.0, 0.0], [3.0, 3.0], 'inf-max', default_config)
        point = result.point
        assert point.origin == 'mountain-pass'
        assert point.grad_norm_inf <= default_config.tol_grad
        assert point.J == pytest.approx(0.5, abs=1e-9)
        assert result.endpoint_level < point.J <= result.initial_path_max + 1e-9

    def test_history_is_monotone(self, cubic_problem):
        cfg = SolverConfig(path_points=21)
        result = deform_path(cubic_problem, [0.0, 0.0], [1.0, 3.5], 'inf-max', cfg)
        history = result.level_history
        assert all(b <= a for a, b in zip(history, history[1:]))
        assert result.point.grad_norm_inf <= cfg.tol_grad
        assert result.endpoint_level < result.point.J

    def test_sup_min_mirrors_inf_max(self, cubic_problem, default_config):
        """sup-min on (-p, -f) finds the same point with J negated."""
        inf_max = mountain_pass(cubic_problem, [0.0, 0.0], [3.0, 3.0], 'inf-max', default_config)
        sup_min = mountain_pass(cubic_problem.negated(), [0.0, 0.0], [3.0, 3.0], 'sup-min', default_config)
        assert sup_min.J == pytest.approx(-inf_max.J, abs=1e-9)
        np.testing.assert_allclose(sup_min.x.values, inf_max.x.values, atol=1e-6)

    def test_no_ridge(self, linear_problem, default_config):
        """J is a positive quadratic; nothing on the path exceeds the far endpoint."""
        with pytest.raises(EndpointConditionError, match="ridge"):
            deform_path(linear_problem, [0.0, 0.0, 0.0], [1.0, 2.0, 1.0], 'inf-max', default_config)

    def test_rejects_unknown_variant(self, cubic_problem, default_config):
        with pytest.raises(ValueError, match="variant"):
            deform_path(cubic_problem, [0.0, 0.0], [3.0, 3.0], 'max-min', default_config)

    def test_to_dict(self, cubic_problem, default_config):
        d = deform_path(cubic_problem, [0.0, 0.0], [3.0, 3.0], 'inf-max', default_config).to_dict()
        assert d['variant'] == 'inf-max'
        assert d['critical_value'] == pytest.approx(0.5, abs=1e-9)
        assert d['endpoint_level'] == 0.0


class TestFindEscapePoint:
    """Test the search for a far endpoint."""

    def test_cubic_escapes(self, cubic_problem, default_config):
        x = find_escape_point(cubic_problem, 'inf-max', default_config)
        assert energy_J(cubic_problem, x) < -1.0

    def test_sup_min_escape(self, negative_cubic_problem, default_config):
        x = find_escape_point(negative_cubic_problem, 'sup-min', default_config)
        assert energy_J(negative_cubic_problem, x) > 1.0

    def test_coercive_energy_has_no_escape(self, negative_cubic_problem, default_config):
        with pytest.raises(EscapeSearchError):
            find_escape_point(negative_cubic_problem, 'inf-max', default_config)

    def test_seeded(self, cubic_problem, default_config):
        np.testing.assert_array_equal(find_escape_point(cubic_problem, 'inf-max', default_config),
                                      find_escape_point(cubic_problem, 'inf-max', default_config))
