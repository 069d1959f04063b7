"""
Tests for app/config/settings.py
"""

import io

from app.config.settings import Settings
from src.solvers import SolverConfig


class TestSettings:
    """Test Settings class."""

    def test_default_values(self):
        """Test the fixed oracle and verification limits."""
        assert Settings.ORACLE_MAX_N == 4
        assert Settings.VERIFY_TOL == 1e-8

    def test_solver_config_from_settings(self, monkeypatch):
        """Test that class attributes flow into SolverConfig."""
        monkeypatch.setattr(Settings, 'STARTS', 17)
        monkeypatch.setattr(Settings, 'SEED', 5)
        cfg = Settings.solver_config()
        assert isinstance(cfg, SolverConfig)
        assert cfg.starts == 17
        assert cfg.seed == 5

    def test_overrides_take_precedence(self, monkeypatch):
        """Test that explicit overrides beat the environment."""
        monkeypatch.setattr(Settings, 'STARTS', 17)
        cfg = Settings.solver_config(starts=3, box_radius=None)
        assert cfg.starts == 3
        assert cfg.box_radius == Settings.BOX_RADIUS

    def test_validate_clean(self, monkeypatch):
        """Test validation with sensible settings."""
        monkeypatch.setattr(Settings, 'TOL_GRAD', 1e-10)
        monkeypatch.setattr(Settings, 'STARTS', 200)
        monkeypatch.setattr(Settings, 'LOG_LEVEL', 'INFO')
        monkeypatch.setattr(Settings, 'ORACLE_MAX_NODES', 20000)
        assert Settings.validate() == []

    def test_validate_invalid_solver_setting(self, monkeypatch):
        """Test validation with a negative box radius."""
        monkeypatch.setattr(Settings, 'BOX_RADIUS', -1.0)
        errors = [w for w in Settings.validate() if "ERROR" in w]
        assert len(errors) == 1
        assert "box_radius" in errors[0]

    def test_validate_unknown_log_level(self, monkeypatch):
        monkeypatch.setattr(Settings, 'LOG_LEVEL', 'LOUD')
        assert any("VARBVP_LOG_LEVEL" in w for w in Settings.validate())

    def test_validate_loose_tolerance(self, monkeypatch):
        """Test warning when tol_grad is looser than the verification threshold."""
        monkeypatch.setattr(Settings, 'TOL_GRAD', 1e-6)
        assert any("looser" in w for w in Settings.validate())

    def test_validate_few_starts(self, monkeypatch):
        monkeypatch.setattr(Settings, 'STARTS', 3)
        assert any("random starts" in w for w in Settings.validate())

    def test_print_settings(self, monkeypatch):
        """Test that settings print to the given stream."""
        monkeypatch.setattr(Settings, 'STARTS', 3)
        out = io.StringIO()
        Settings.print_settings(out)
        text = out.getvalue()
        assert "VARBVP SETTINGS" in text
        assert "Random starts: 3" in text
        assert "random starts" in text

    def test_print_settings_defaults_to_stderr(self, capsys):
        Settings.print_settings()
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "VARBVP SETTINGS" in captured.err


class TestEnvironment:
    """Test the environment parsing helpers."""

    def test_env_float(self, monkeypatch):
        from app.config.settings import _env_float
        monkeypatch.setenv("VARBVP_TEST_FLOAT", "2.5")
        assert _env_float("VARBVP_TEST_FLOAT", 1.0) == 2.5
        monkeypatch.setenv("VARBVP_TEST_FLOAT", "")
        assert _env_float("VARBVP_TEST_FLOAT", 1.0) == 1.0

    def test_env_int(self, monkeypatch):
        from app.config.settings import _env_int
        monkeypatch.delenv("VARBVP_TEST_INT", raising=False)
        assert _env_int("VARBVP_TEST_INT", 7) == 7
        monkeypatch.setenv("VARBVP_TEST_INT", "12")
        assert _env_int("VARBVP_TEST_INT", 7) == 12

    def test_env_int_garbage_falls_back(self, monkeypatch, caplog):
        """A malformed value is logged by name and the default is kept."""
        from app.config.settings import _env_int
        monkeypatch.setenv("VARBVP_TEST_INT", "many")
        with caplog.at_level('WARNING', logger='app.config.settings'):
            assert _env_int("VARBVP_TEST_INT", 7) == 7
        assert "VARBVP_TEST_INT" in caplog.text
        assert "'many'" in caplog.text

    def test_env_float_garbage_falls_back(self, monkeypatch, caplog):
        from app.config.settings import _env_float
        monkeypatch.setenv("VARBVP_TEST_FLOAT", "1e-10x")
        with caplog.at_level('WARNING', logger='app.config.settings'):
            assert _env_float("VARBVP_TEST_FLOAT", 1e-10) == 1e-10
        assert "VARBVP_TEST_FLOAT" in caplog.text

    def test_env_int_rejects_float_text(self, monkeypatch):
        from app.config.settings import _env_int
        monkeypatch.setenv("VARBVP_TEST_INT", "2.5")
        assert _env_int("VARBVP_TEST_INT", 7) == 7
