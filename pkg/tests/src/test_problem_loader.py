"""
Tests for src/problem_loader.py
"""

import json

import pytest
import numpy as np
from src.problem_loader import (
    ProblemFileError,
    load_problem_file,
    load_solutions_file,
    load_solutions_path,
    parse_problem_file,
)
from src.solvers import SolverConfig
from tests.conftest import CUBIC_DOC, write_problem_file


def _doc(**changes):
    doc = dict(CUBIC_DOC)
    doc.update(changes)
    return json.dumps(doc, indent=2)


class TestParseProblemFile:
    """Test problem file parsing and validation."""

    def test_minimal_file(self):
        problem = parse_problem_file(_doc())
        assert problem.spec.n == 1
        assert problem.spec.N == 2
        np.testing.assert_array_equal(problem.spec.p, [1.0, 1.0, 1.0])
        assert problem.overrides == {}
        assert problem.claims == []
        assert problem.c is None

    def test_accepts_bytes(self):
        problem = parse_problem_file(_doc().encode('utf-8'))
        assert problem.spec.to_dict()['f'] == 'x^3'

    def test_description(self):
        assert parse_problem_file(_doc(description="cubic")).spec.description == "cubic"

    def test_claims_and_c(self):
        problem = parse_problem_file(_doc(
            claims=[{"condition": "A3.2", "alpha": 0.2, "q": 4}, {"condition": "A1", "alpha": 1, "M": 2}],
            c=0.0,
        ))
        assert [cond for cond, _ in problem.claims] == ['A3.2', 'A1']
        assert problem.claims[0][1].q == 4.0
        assert problem.claims[1][1].M == 2.0
        assert problem.c == 0.0

    def test_top_level_overrides(self):
        problem = parse_problem_file(_doc(starts=7, box_radius=2.5))
        assert problem.overrides == {'starts': 7, 'box_radius': 2.5}
        cfg = problem.solver_config()
        assert cfg.starts == 7
        assert cfg.box_radius == 2.5

    def test_nested_overrides(self):
        problem = parse_problem_file(_doc(solver={"seed": 9, "tol_grad": 1e-9}))
        assert problem.solver_config(SolverConfig(starts=3)).to_dict()['seed'] == 9
        assert problem.solver_config(SolverConfig(starts=3)).starts == 3

    def test_N_too_small(self):
        text = json.dumps({"n": 1, "N": 1, "p": [1, 1], "f": "x"}, indent=2)
        with pytest.raises(ProblemFileError) as exc:
            parse_problem_file(text)
        assert exc.value.field_name == 'N'
        assert "N >= 2 required, got 1" in str(exc.value)
        assert exc.value.line == 3

    def test_p_length(self):
        with pytest.raises(ProblemFileError, match="p must have N\\+n=3 entries, got 2") as exc:
            parse_problem_file(_doc(p=[1, 1]))
        assert exc.value.field_name == 'p'

    def test_invalid_expression(self):
        with pytest.raises(ProblemFileError, match="invalid expression") as exc:
            parse_problem_file(_doc(f="x^^2"))
        assert exc.value.field_name == 'f'
        assert "offset 2" in str(exc.value)

    def test_x_dependent_divisor(self):
        with pytest.raises(ProblemFileError, match="divisor"):
            parse_problem_file(_doc(f="1/x"))

    def test_zero_divisor(self):
        with pytest.raises(ProblemFileError, match="divisor") as exc:
            parse_problem_file(_doc(f="x/(2-2)"))
        assert exc.value.field_name == 'f'

    def test_divisor_vanishing_at_k(self):
        """k - 2 is zero at the second interior point of N=2."""
        with pytest.raises(ProblemFileError, match="vanishes at k=2") as exc:
            parse_problem_file(_doc(f="x/(k-2)"))
        assert exc.value.field_name == 'f'

    @pytest.mark.parametrize("changes,field_name", [
        ({'n': 0}, 'n'),
        ({'n': 1.5}, 'n'),
        ({'N': "2"}, 'N'),
        ({'p': "1,1,1"}, 'p'),
        ({'p': [1, None, 1]}, 'p[1]'),
        ({'f': 3}, 'f'),
        ({'description': 5}, 'description'),
        ({'c': "zero"}, 'c'),
        ({'starts': 0}, 'solver'),
        ({'starts': 2.5}, 'starts'),
        ({'solver': {"speed": 1}}, 'speed'),
        ({'solver': [1, 2]}, 'solver'),
        ({'claims': {"condition": "A1"}}, 'claims'),
        ({'claims': [{"alpha": 1}]}, 'claims[0]'),
        ({'claims': [{"condition": "Q7", "alpha": 1}]}, 'claims[0].condition'),
        ({'claims': [{"condition": "A1", "alpha": 1, "M": -1}]}, 'claims[0].M'),
        ({'colour': "blue"}, 'colour'),
    ])
    def test_field_errors(self, changes, field_name):
        with pytest.raises(ProblemFileError) as exc:
            parse_problem_file(_doc(**changes))
        assert exc.value.field_name == field_name

    def test_missing_field(self):
        with pytest.raises(ProblemFileError, match="required field is missing"):
            parse_problem_file(json.dumps({"N": 2, "p": [1, 1, 1], "f": "x"}))

    def test_malformed_json(self):
        with pytest.raises(ProblemFileError, match="malformed JSON") as exc:
            parse_problem_file('{\n  "n": 1,\n  "N": 2,,\n}')
        assert exc.value.line == 3

    def test_not_an_object(self):
        with pytest.raises(ProblemFileError, match="JSON object"):
            parse_problem_file("[1, 2, 3]")

    def test_invalid_utf8(self):
        with pytest.raises(ProblemFileError, match="UTF-8"):
            parse_problem_file(b'{"f": "\xff"}')

    def test_is_value_error(self):
        assert issubclass(ProblemFileError, ValueError)


class TestCanonical:
    """Test the problem content used for fingerprints."""

    def test_formatting_does_not_matter(self):
        compact = json.dumps(CUBIC_DOC, separators=(',', ':'))
        reordered = json.dumps({"f": "x^3", "p": [1.0, 1.0, 1.0], "N": 2, "n": 1}, indent=4)
        assert parse_problem_file(compact).canonical() == parse_problem_file(reordered).canonical()

    def test_expression_is_canonicalized(self):
        a = parse_problem_file(_doc(f="x ^ 3")).canonical()
        b = parse_problem_file(_doc(f="(x)^3")).canonical()
        assert a == b

    def test_overrides_are_part_of_content(self):
        assert parse_problem_file(_doc()).canonical() != parse_problem_file(_doc(starts=3)).canonical()


class TestLoadFromDisk:
    """Test path-based loaders."""

    def test_load_problem_file(self, cubic_problem_file):
        assert load_problem_file(cubic_problem_file).spec.N == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(ProblemFileError, match="cannot read"):
            load_problem_file(tmp_path / "nope.json")

    def test_load_solutions_path(self, tmp_path):
        path = write_problem_file(tmp_path, {"schema_version": "1", "solutions": [{"x": [1, 1]}]},
                                  "solutions.json")
        solutions = load_solutions_path(path, 2)
        np.testing.assert_array_equal(solutions.points[0], [1.0, 1.0])


class TestLoadSolutionsFile:
    """Test solution file parsing."""

    def test_points_in_order(self):
        text = json.dumps({
            "schema_version": "1",
            "fingerprint": "abc",
            "solutions": [{"x": [0, 0], "J": 0.0}, {"x": [1, 1], "J": 0.5}],
        })
        solutions = load_solutions_file(text, 2)
        assert len(solutions.points) == 2
        np.testing.assert_array_equal(solutions.points[1], [1.0, 1.0])
        assert solutions.fingerprint == "abc"
        assert solutions.recorded[1]['J'] == 0.5

    def test_schema_version_required(self):
        with pytest.raises(ProblemFileError, match="schema_version"):
            load_solutions_file(json.dumps({"solutions": []}))

    def test_wrong_length(self):
        text = json.dumps({"schema_version": "1", "solutions": [{"x": [1, 2, 3]}]})
        with pytest.raises(ProblemFileError, match="N=2") as exc:
            load_solutions_file(text, 2)
        assert exc.value.field_name == 'solutions[0].x'

    def test_non_numeric_entry(self):
        text = json.dumps({"schema_version": "1", "solutions": [{"x": [1, "a"]}]})
        with pytest.raises(ProblemFileError, match="finite number"):
            load_solutions_file(text)

    def test_empty_solution_list(self):
        assert load_solutions_file(json.dumps({"schema_version": "1", "solutions": []})).points == []
