"""
Tests for src/reporting.py
"""

import json

import pytest
import numpy as np
import pandas as pd
from src.difference_calculus import embedding_constants
from src.energy import evaluate_point
from src.hypothesis import ConditionParams, screen_claims, thresholds
from src.problem_loader import parse_problem_file
from src.reporting import (
    canonical_json,
    conditions_table,
    csv_sections,
    envelope,
    fingerprint,
    solutions_table,
    spectrum_table,
    to_jsonable,
    verification_table,
    write_atomic,
)
from src.solvers import make_point
from tests.conftest import CUBIC_DOC


@pytest.fixture
def cubic_file():
    return parse_problem_file(json.dumps(CUBIC_DOC))


class TestCanonicalJson:
    """Test deterministic JSON output."""

    def test_sorted_keys_and_newline(self):
        text = canonical_json({'b': 1, 'a': {'d': 2.5, 'c': None}})
        assert text == '{\n  "a": {\n    "c": null,\n    "d": 2.5\n  },\n  "b": 1\n}\n'

    def test_compact(self):
        assert canonical_json({'b': [1, 2], 'a': 0.1}, indent=None) == '{"a":0.10000000000000001,"b":[1,2]}'

    def test_floats_have_17_significant_digits(self):
        text = canonical_json([1.0 / 3.0, 1.0, -0.0, 1e20, 2.5, 3], indent=None)
        assert text == '[0.33333333333333331,1.0,-0.0,1e+20,2.5,3]'

    def test_empty_containers(self):
        assert canonical_json({'a': [], 'b': {}}) == '{\n  "a": [],\n  "b": {}\n}\n'

    def test_floats_round_trip(self):
        value = 0.1 + 0.2
        assert json.loads(canonical_json({'v': value}))['v'] == value

    def test_non_finite_becomes_null(self):
        assert to_jsonable([np.nan, np.inf, 1.0]) == [None, None, 1.0]

    def test_numpy_types(self):
        out = to_jsonable({'a': np.float64(1.5), 'b': np.int64(3), 'c': np.array([1.0, 2.0]), 'd': np.bool_(True)})
        assert out == {'a': 1.5, 'b': 3, 'c': [1.0, 2.0], 'd': True}
        assert type(out['b']) is int

    def test_objects_with_to_dict(self, cubic_problem):
        point = make_point(cubic_problem, [1.0, 1.0], 'descent')
        assert to_jsonable(point)['kind'] == 'degenerate'

    def test_rejects_unknown_types(self):
        with pytest.raises(TypeError):
            to_jsonable({'a': object()})


class TestFingerprint:
    """Test problem fingerprints."""

    def test_stable_across_formatting(self, cubic_file):
        other = parse_problem_file(json.dumps({"f": "x ^ 3", "p": [1, 1, 1], "N": 2, "n": 1}, indent=8))
        assert fingerprint(cubic_file) == fingerprint(other)

    def test_is_sha256_hex(self, cubic_file):
        digest = fingerprint(cubic_file)
        assert len(digest) == 64
        int(digest, 16)

    def test_changes_with_content(self, cubic_file):
        doc = dict(CUBIC_DOC, p=[1, 2, 1])
        assert fingerprint(cubic_file) != fingerprint(parse_problem_file(json.dumps(doc)))

    def test_envelope(self, cubic_file):
        report = envelope('spectrum', cubic_file, {'lambda': 1.0})
        assert report['schema_version'] == "1"
        assert report['command'] == 'spectrum'
        assert report['fingerprint'] == fingerprint(cubic_file)
        assert report['lambda'] == 1.0


class TestTables:
    """Test the pandas tables behind --csv."""

    def test_spectrum_table(self, cubic_problem):
        table = spectrum_table(embedding_constants(2, 1), thresholds(cubic_problem))
        assert list(table.columns) == ['lambda', 'lambda_max', 'bound', 't_low', 't_high']
        assert table.loc[0, 'bound'] == 4.0
        assert table.loc[0, 't_high'] == 2.0

    def test_solutions_table(self, cubic_problem):
        points = [make_point(cubic_problem, x, 'oracle') for x in ([0.0, 0.0], [1.0, 1.0])]
        table = solutions_table(points, 2)
        assert list(table.columns) == ['J', 'grad_norm', 'residual', 'kind', 'origin', 'x1', 'x2']
        assert table['kind'].tolist() == ['minimum', 'degenerate']
        assert table.loc[1, 'J'] == pytest.approx(0.5)

    def test_empty_solutions_table_keeps_columns(self):
        table = solutions_table([], 3)
        assert table.empty
        assert list(table.columns)[-3:] == ['x1', 'x2', 'x3']

    def test_verification_table(self, cubic_problem):
        x = np.array([1.0, 1.0])
        table = verification_table([x], [evaluate_point(cubic_problem, x)], ['degenerate'], 2)
        assert table.loc[0, 'residual'] == pytest.approx(0.0, abs=1e-14)
        assert table.loc[0, 'x2'] == 1.0

    def test_conditions_table(self, cubic_problem):
        reports = screen_claims(cubic_problem, [
            ('A3.2', ConditionParams(alpha=0.2, q=4.0)),
            ('A2.1', ConditionParams(alpha=0.4)),
        ])
        table = conditions_table(reports)
        assert table['verdict'].tolist() == ['consistent', 'violated']
        assert pd.isna(table.loc[0, 'witness_u'])
        assert not pd.isna(table.loc[1, 'witness_u'])

    def test_csv_sections(self):
        text = csv_sections([('first', pd.DataFrame({'a': [1]})), ('second', pd.DataFrame({'b': [2.5]}))])
        assert text == "# first\na\n1\n\n# second\nb\n2.5\n"


class TestWriteAtomic:
    """Test report files."""

    def test_writes_and_replaces(self, tmp_path):
        target = tmp_path / "report.json"
        write_atomic(target, "one\n")
        write_atomic(target, "two\n")
        assert target.read_text(encoding='utf-8') == "two\n"
        assert [p.name for p in tmp_path.iterdir()] == ["report.json"]

    def test_failure_leaves_no_temp_file(self, tmp_path, mocker):
        target = tmp_path / "report.json"
        mocker.patch('src.reporting.os.replace', side_effect=OSError("disk full"))
        with pytest.raises(OSError):
            write_atomic(target, "data")
        assert list(tmp_path.iterdir()) == []
