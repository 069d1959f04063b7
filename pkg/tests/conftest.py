"""
Pytest configuration and shared fixtures for varbvp tests.
"""

import json
import pytest
import numpy as np
from pathlib import Path
from typing import Dict, Optional

# Add project root to path
import sys
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.energy import ProblemSpec, make_problem
from src.solvers import CriticalPoint, SolverConfig


# ============================================================================
# Helper Functions
# ============================================================================

def random_polynomial(rng: np.random.Generator, degree: int, with_k: bool = True) -> str:
    """
    Random polynomial nonlinearity f(k, x) as an expression string.

    Parameters:
    -----------
    rng : np.random.Generator
        Seeded generator
    degree : int
        Highest power of x
    with_k : bool
        Let the linear coefficient depend on k

    Returns:
    --------
    str
        e.g. "0.31*x^2 - 1.2*x^3 + 0.05*k*x"
    """
    terms = []
    for power in range(1, degree + 1):
        coeff = float(np.round(rng.uniform(-1.5, 1.5), 3))
        if power == 1:
            terms.append(f"{coeff}*x")
        else:
            terms.append(f"{coeff}*x^{power}")
    if with_k:
        terms.append(f"{float(np.round(rng.uniform(-0.2, 0.2), 3))}*k*x")
    return " + ".join(f"({t})" for t in terms)


def random_problem(rng: np.random.Generator, n: Optional[int] = None, N: Optional[int] = None,
                   degree: int = 5) -> ProblemSpec:
    """Random instance with p uniform in [-2, 2] and a random polynomial f."""
    n = int(rng.integers(1, 4)) if n is None else n
    N = int(rng.integers(2, 13)) if N is None else N
    p = rng.uniform(-2.0, 2.0, N + n)
    return ProblemSpec(n=n, N=N, p=p, f=random_polynomial(rng, int(rng.integers(1, degree + 1))))


def write_problem_file(directory: Path, doc: Dict, name: str = "problem.json") -> Path:
    """Write a problem document as JSON and return its path."""
    path = directory / name
    path.write_text(json.dumps(doc, indent=2), encoding="utf-8")
    return path


def assert_critical_point(point: CriticalPoint, tol: float = 1e-8):
    """Helper to assert a point is a verified solution."""
    assert point.grad_norm_inf <= tol
    assert point.residual_norm_inf <= tol
    assert point.kind in ('minimum', 'maximum', 'saddle', 'degenerate')
    assert np.isfinite(point.J)


# ============================================================================
# Problem Fixtures
# ============================================================================

CUBIC_DOC = {"n": 1, "N": 2, "p": [1, 1, 1], "f": "x^3"}


@pytest.fixture
def cubic_problem():
    """n=1, N=2, p≡1, f=x^3: five critical points with J in {0, 0.5, 4.5}."""
    return make_problem(1, 2, 1.0, "x^3")


@pytest.fixture
def negative_cubic_problem():
    """n=1, N=2, p≡1, f=-x^3: θ is the only critical point."""
    return make_problem(1, 2, 1.0, "-x^3")


@pytest.fixture
def linear_problem():
    """f≡0: J is a positive definite quadratic."""
    return make_problem(1, 3, 1.0, "0")


@pytest.fixture
def rng():
    """Seeded generator for reproducible random instances."""
    return np.random.default_rng(20240607)


@pytest.fixture
def cubic_problem_file(tmp_path):
    """The cubic instance as a problem file."""
    return write_problem_file(tmp_path, CUBIC_DOC)


@pytest.fixture
def negative_cubic_problem_file(tmp_path):
    return write_problem_file(tmp_path, {"n": 1, "N": 2, "p": [1, 1, 1], "f": "-x^3"})


# ============================================================================
# Solver Fixtures
# ============================================================================

@pytest.fixture
def default_config():
    """SolverConfig with all defaults."""
    return SolverConfig()


@pytest.fixture
def small_config():
    """Fewer starts and a box that contains every cubic-instance solution."""
    return SolverConfig(starts=40, box_radius=3.0)


# ============================================================================
# Settings Fixtures
# ============================================================================

@pytest.fixture
def quiet_settings(monkeypatch):
    """Keep CLI runs off the log directory and below INFO noise."""
    from app.config.settings import Settings

    monkeypatch.setattr(Settings, 'LOG_LEVEL', 'WARNING')
    monkeypatch.setattr(Settings, 'LOG_TO_FILE', False)
    monkeypatch.setattr(Settings, 'STARTS', 60)
    monkeypatch.setattr(Settings, 'BOX_RADIUS', 3.0)
    monkeypatch.setattr(Settings, 'SEED', 42)
    return Settings
