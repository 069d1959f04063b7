"""
Tests for app/solve_engine.py
"""

import json
import logging

import pytest
import pandas as pd
from app.solve_engine import EXIT_FAILURE, EXIT_OK, CommandResult, SolveEngine, UsageError
from src.problem_loader import parse_problem_file
from tests.conftest import CUBIC_DOC, write_problem_file


def _problem(**changes):
    doc = dict(CUBIC_DOC)
    doc.update(changes)
    return parse_problem_file(json.dumps(doc))


@pytest.fixture
def engine(quiet_settings):
    return SolveEngine()


class TestCommandResult:
    """Test report rendering."""

    def test_json_by_default(self):
        result = CommandResult({'b': 1, 'a': 2}, [('t', pd.DataFrame({'c': [1]}))])
        assert result.render() == '{\n  "a": 2,\n  "b": 1\n}\n'

    def test_csv(self):
        result = CommandResult({'a': 1}, [('t', pd.DataFrame({'c': [1]}))])
        assert result.render(csv=True) == "# t\nc\n1\n"

    def test_csv_without_tables_falls_back_to_json(self):
        assert CommandResult({'a': 1}).render(csv=True) == '{\n  "a": 1\n}\n'


class TestSolveEngine:
    """Test the command methods."""

    def test_logger_handlers_are_replaced(self, quiet_settings):
        SolveEngine()
        SolveEngine()
        tagged = [h for h in logging.getLogger('app').handlers if getattr(h, '_varbvp_handler', False)]
        assert len(tagged) == 1

    def test_spectrum(self, engine):
        result = engine.spectrum(_problem())
        assert result.exit_code == EXIT_OK
        assert result.report['n'] == 1
        assert result.report['N'] == 2
        assert result.tables[0][0] == 'spectrum'

    def test_check_reports_claims(self, engine):
        result = engine.check(_problem(claims=[{"condition": "A2.1", "alpha": 0.4}]))
        assert result.report['claims'][0]['verdict'] == 'violated'
        assert result.tables[0][1]['verdict'].tolist() == ['violated']

    def test_solve_report(self, engine, small_config):
        result = engine.solve(_problem(), small_config)
        report = result.report
        assert result.exit_code == EXIT_OK
        assert report['strategy'] == ['minimize', 'maximize', 'mountain-pass:inf-max']
        assert report['theorems'] is None
        assert report['complete'] is True
        assert report['lambda'] == pytest.approx(1.0, abs=1e-12)
        assert report['solver']['starts'] == small_config.starts
        assert [s['kind'] for s in report['solutions']][0] == 'minimum'

    def test_solve_with_claims(self, engine, small_config):
        problem = _problem(claims=[{"condition": "A3.2", "alpha": 0.2, "q": 4}], c=0.0)
        report = engine.solve(problem, small_config).report
        assert report['strategy'] == ['maximize', 'mountain-pass:inf-max']
        assert report['mountain_pass'][0]['critical_value'] == pytest.approx(0.5, abs=1e-9)

    def test_verify_table_has_ok_column(self, engine, tmp_path):
        path = write_problem_file(tmp_path, {"schema_version": "1", "solutions": [{"x": [0.5, 0.0]}]},
                                  "solutions.json")
        result = engine.verify(_problem(), path, None)
        assert result.exit_code == EXIT_FAILURE
        assert result.report['tol'] == 1e-8
        assert result.tables[0][1]['ok'].tolist() == [False]

    def test_oracle_limit(self, engine, small_config):
        problem = parse_problem_file(json.dumps({"n": 1, "N": 5, "p": [1] * 6, "f": "x^3"}))
        with pytest.raises(UsageError, match="N=5"):
            engine.oracle(problem, small_config)
