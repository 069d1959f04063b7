"""
Configuration settings for the varbvp command line.
"""

import logging
import os
import sys
from pathlib import Path
from typing import Optional, TextIO

from dotenv import load_dotenv

from src.solvers import SolverConfig

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger(__name__)

_DEFAULTS = SolverConfig()


def _env_number(name: str, default, parse):
    value = os.getenv(name)
    if value in (None, ""):
        return default
    try:
        return parse(value)
    except ValueError:
        logger.warning("Ignoring %s=%r: not a valid %s, using %r", name, value, parse.__name__, default)
        return default


def _env_float(name: str, default: float) -> float:
    return _env_number(name, default, float)


def _env_int(name: str, default: int) -> int:
    return _env_number(name, default, int)


class Settings:
    """Solver defaults and logging configuration, read from VARBVP_* variables."""

    # Solver defaults (CLI flags and problem-file overrides take precedence)
    TOL_GRAD: float = _env_float("VARBVP_TOL_GRAD", _DEFAULTS.tol_grad)
    MAX_ITER: int = _env_int("VARBVP_MAX_ITER", _DEFAULTS.max_iter)
    STARTS: int = _env_int("VARBVP_STARTS", _DEFAULTS.starts)
    BOX_RADIUS: float = _env_float("VARBVP_BOX_RADIUS", _DEFAULTS.box_radius)
    SEED: int = _env_int("VARBVP_SEED", _DEFAULTS.seed)
    PATH_POINTS: int = _env_int("VARBVP_PATH_POINTS", _DEFAULTS.path_points)
    MP_STEP: float = _env_float("VARBVP_MP_STEP", _DEFAULTS.mp_step)
    DEDUP_TOL: float = _env_float("VARBVP_DEDUP_TOL", _DEFAULTS.dedup_tol)

    # Oracle
    ORACLE_MAX_N: int = 4
    ORACLE_MAX_NODES: int = _env_int("VARBVP_ORACLE_MAX_NODES", 200_000)

    # Verification threshold on ‖residual‖∞
    VERIFY_TOL: float = 1e-8

    # Logging (stderr only; stdout carries the report)
    LOG_LEVEL: str = os.getenv("VARBVP_LOG_LEVEL", "INFO").upper()
    LOG_TO_FILE: bool = os.getenv("VARBVP_LOG_TO_FILE", "false").lower() == "true"
    LOG_DIR: Path = Path(os.getenv("VARBVP_LOG_DIR", Path(__file__).parent.parent.parent / "logs"))

    @classmethod
    def solver_config(cls, **overrides) -> SolverConfig:
        """
        SolverConfig from the current settings.

        Parameters:
        -----------
        **overrides
            SolverConfig fields; None values are ignored

        Returns:
        --------
        SolverConfig
        """
        base = SolverConfig(
            tol_grad=cls.TOL_GRAD,
            max_iter=cls.MAX_ITER,
            starts=cls.STARTS,
            box_radius=cls.BOX_RADIUS,
            seed=cls.SEED,
            path_points=cls.PATH_POINTS,
            mp_step=cls.MP_STEP,
            dedup_tol=cls.DEDUP_TOL,
        )
        return base.with_overrides(**overrides)

    @classmethod
    def validate(cls) -> list[str]:
        """Validate settings and return list of warnings/issues."""
        warnings = []

        try:
            cls.solver_config()
        except ValueError as e:
            warnings.append(f"ERROR: invalid solver setting: {e}")

        if cls.LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            warnings.append(f"ERROR: unknown VARBVP_LOG_LEVEL {cls.LOG_LEVEL!r}")

        if cls.TOL_GRAD > cls.VERIFY_TOL:
            warnings.append(f"⚠️  tol_grad {cls.TOL_GRAD:g} is looser than the verification "
                            f"threshold {cls.VERIFY_TOL:g}; solutions may fail verify")

        if cls.STARTS < 10:
            warnings.append(f"⚠️  Only {cls.STARTS} random starts; multistart may miss solutions")

        if cls.ORACLE_MAX_NODES > 2_000_000:
            warnings.append(f"⚠️  Large oracle grid: {cls.ORACLE_MAX_NODES} nodes")

        return warnings

    @classmethod
    def print_settings(cls, stream: Optional[TextIO] = None):
        """Print current settings (to stderr unless a stream is given)."""
        out = stream or sys.stderr
        print("=" * 80, file=out)
        print("VARBVP SETTINGS", file=out)
        print("=" * 80, file=out)
        print(f"Gradient tolerance: {cls.TOL_GRAD:g}", file=out)
        print(f"Max iterations: {cls.MAX_ITER}", file=out)
        print(f"Random starts: {cls.STARTS} in box radius {cls.BOX_RADIUS:g}", file=out)
        print(f"Seed: {cls.SEED}", file=out)
        print(f"Mountain pass: {cls.PATH_POINTS} nodes, step {cls.MP_STEP:g}", file=out)
        print(f"Dedup tolerance: {cls.DEDUP_TOL:g}", file=out)
        print(f"Oracle: N <= {cls.ORACLE_MAX_N}, <= {cls.ORACLE_MAX_NODES} grid nodes", file=out)
        print(f"Log level: {cls.LOG_LEVEL}{' (+ file in ' + str(cls.LOG_DIR) + ')' if cls.LOG_TO_FILE else ''}",
              file=out)
        print("=" * 80, file=out)

        for warning in cls.validate():
            print(warning, file=out)
        print("=" * 80, file=out)
