"""
Problem and solution file loading for the varbvp command line.

Both files are UTF-8 JSON. A problem file holds n, N, p (N+n numbers from
index 1-n to N) and f, plus optional solver overrides, growth-condition
claims and the slope constant c.
"""

import json
import re
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .energy import ProblemSpec
from .hypothesis import CONDITION_IDS, ConditionParams
from .nonlinearity import ExpressionError, parse_expression
from .solvers import SolverConfig

SCHEMA_VERSION = "1"

OVERRIDE_FIELDS = tuple(f.name for f in fields(SolverConfig))
_INTEGER_OVERRIDES = ('max_iter', 'starts', 'seed', 'path_points')
_KNOWN_KEYS = {'n', 'N', 'p', 'f', 'description', 'claims', 'c', 'solver'} | set(OVERRIDE_FIELDS)


class ProblemFileError(ValueError):
    """A problem or solution file failed to parse or validate."""

    def __init__(self, message: str, field_name: Optional[str] = None, line: Optional[int] = None):
        where = []
        if field_name:
            where.append(f"field '{field_name}'")
        if line:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.reason = message
        self.field_name = field_name
        self.line = line


@dataclass
class ProblemFile:
    """A validated problem file."""

    spec: ProblemSpec
    overrides: Dict[str, Union[int, float]] = field(default_factory=dict)
    claims: List[Tuple[str, ConditionParams]] = field(default_factory=list)
    c: Optional[float] = None

    def solver_config(self, base: Optional[SolverConfig] = None) -> SolverConfig:
        """base (defaults when omitted) with the file's overrides applied."""
        return (base or SolverConfig()).with_overrides(**self.overrides)

    def canonical(self) -> dict:
        """Content that identifies the problem; formatting and key order do not matter."""
        return {
            'problem': self.spec.to_dict(),
            'overrides': dict(sorted(self.overrides.items())),
            'claims': [
                {'condition': cond, 'alpha': params.alpha, 'q': params.q, 'M': params.M}
                for cond, params in self.claims
            ],
            'c': self.c,
        }


@dataclass
class SolutionsFile:
    """Points read from a solution file."""

    points: List[np.ndarray]
    fingerprint: Optional[str] = None
    recorded: List[dict] = field(default_factory=list)


# ============================================================================
# Helpers
# ============================================================================

def _decode(data: Union[bytes, str]) -> Tuple[str, object]:
    if isinstance(data, bytes):
        try:
            text = data.decode('utf-8')
        except UnicodeDecodeError as e:
            raise ProblemFileError(f"file is not valid UTF-8: {e.reason} at byte {e.start}") from e
    else:
        text = data
    try:
        return text, json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemFileError(f"malformed JSON: {e.msg} (column {e.colno})", line=e.lineno) from e


def _line_of(text: str, key: str) -> Optional[int]:
    """1-based line of the first occurrence of "key": in text."""
    match = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    if match is None:
        return None
    return text.count('\n', 0, match.start()) + 1


def _integer(doc: dict, key: str, text: str) -> int:
    if key not in doc:
        raise ProblemFileError("required field is missing", key, _line_of(text, key))
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) \
            or not np.isfinite(value) or int(value) != value:
        raise ProblemFileError(f"expected an integer, got {value!r}", key, _line_of(text, key))
    return int(value)


def _real(value, key: str, text: str, line_key: Optional[str] = None) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value):
        raise ProblemFileError(f"expected a finite number, got {value!r}", key,
                               _line_of(text, line_key or key))
    return float(value)


def _overrides(doc: dict, text: str) -> Dict[str, Union[int, float]]:
    nested = doc.get('solver') or {}
    if not isinstance(nested, dict):
        raise ProblemFileError("expected an object of solver settings", 'solver', _line_of(text, 'solver'))
    raw = dict(nested)
    raw.update({k: doc[k] for k in OVERRIDE_FIELDS if k in doc})
    out: Dict[str, Union[int, float]] = {}
    for key, value in raw.items():
        if key not in OVERRIDE_FIELDS:
            raise ProblemFileError(f"unknown solver setting; expected one of {', '.join(OVERRIDE_FIELDS)}",
                                   key, _line_of(text, key))
        number = _real(value, key, text)
        if key in _INTEGER_OVERRIDES:
            if int(number) != number:
                raise ProblemFileError(f"expected an integer, got {value!r}", key, _line_of(text, key))
            number = int(value)
        out[key] = number
    try:
        SolverConfig().with_overrides(**out)
    except ValueError as e:
        raise ProblemFileError(str(e), 'solver') from e
    return out


def _claims(doc: dict, text: str) -> List[Tuple[str, ConditionParams]]:
    raw = doc.get('claims', [])
    if not isinstance(raw, list):
        raise ProblemFileError("expected an array of claims", 'claims', _line_of(text, 'claims'))
    claims = []
    for i, item in enumerate(raw):
        name = f"claims[{i}]"
        if not isinstance(item, dict) or 'condition' not in item or 'alpha' not in item:
            raise ProblemFileError("each claim needs 'condition' and 'alpha'", name, _line_of(text, 'claims'))
        cond = item['condition']
        if cond not in CONDITION_IDS:
            raise ProblemFileError(f"unknown condition {cond!r}", f"{name}.condition",
                                   _line_of(text, 'claims'))
        alpha = _real(item['alpha'], f"{name}.alpha", text, 'claims')
        q = None if item.get('q') is None else _real(item['q'], f"{name}.q", text, 'claims')
        M = _real(item.get('M', 0.0), f"{name}.M", text, 'claims')
        if M < 0:
            raise ProblemFileError(f"M must be >= 0, got {M:g}", f"{name}.M", _line_of(text, 'claims'))
        claims.append((cond, ConditionParams(alpha=alpha, q=q, M=M)))
    return claims


# ============================================================================
# Loaders
# ============================================================================

def parse_problem_file(data: Union[bytes, str]) -> ProblemFile:
    """
    Parse and validate a problem file.

    Parameters:
    -----------
    data : bytes or str
        UTF-8 JSON document

    Returns:
    --------
    ProblemFile
        The ProblemSpec plus solver overrides, claims and c

    Raises:
    -------
    ProblemFileError
        Malformed JSON, a missing or mistyped field, N < 2, len(p) != N+n
        or an expression error; the message names the field and line
    """
    text, doc = _decode(data)
    if not isinstance(doc, dict):
        raise ProblemFileError("top level must be a JSON object", line=1)
    unknown = sorted(set(doc) - _KNOWN_KEYS)
    if unknown:
        raise ProblemFileError(f"unknown field(s): {', '.join(unknown)}", unknown[0], _line_of(text, unknown[0]))

    n = _integer(doc, 'n', text)
    N = _integer(doc, 'N', text)
    if n < 1:
        raise ProblemFileError(f"n >= 1 required, got {n}", 'n', _line_of(text, 'n'))
    if N < 2:
        raise ProblemFileError(f"N >= 2 required, got {N}", 'N', _line_of(text, 'N'))

    p_raw = doc.get('p')
    if not isinstance(p_raw, list):
        raise ProblemFileError("expected an array of numbers", 'p', _line_of(text, 'p'))
    if len(p_raw) != N + n:
        raise ProblemFileError(f"p must have N+n={N + n} entries, got {len(p_raw)}", 'p', _line_of(text, 'p'))
    p = [_real(v, f"p[{i}]", text, 'p') for i, v in enumerate(p_raw)]

    f_raw = doc.get('f')
    if not isinstance(f_raw, str):
        raise ProblemFileError("expected an expression string", 'f', _line_of(text, 'f'))
    try:
        f = parse_expression(f_raw)
    except ExpressionError as e:
        raise ProblemFileError(f"invalid expression: {e}", 'f', _line_of(text, 'f')) from e

    description = doc.get('description')
    if description is not None and not isinstance(description, str):
        raise ProblemFileError("expected a string", 'description', _line_of(text, 'description'))

    c = None if doc.get('c') is None else _real(doc['c'], 'c', text)
    try:
        spec = ProblemSpec(n=n, N=N, p=np.array(p), f=f, description=description)
    except ValueError as e:
        raise ProblemFileError(str(e), 'f', _line_of(text, 'f')) from e
    return ProblemFile(spec=spec, overrides=_overrides(doc, text), claims=_claims(doc, text), c=c)


def load_problem_file(filepath: Union[str, Path]) -> ProblemFile:
    """Read and parse a problem file from disk."""
    path = Path(filepath)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ProblemFileError(f"cannot read {path}: {e.strerror}") from e
    return parse_problem_file(data)


def load_solutions_file(data: Union[bytes, str], N: Optional[int] = None) -> SolutionsFile:
    """
    Parse a solution file (the output of `solve`).

    Parameters:
    -----------
    data : bytes or str
        UTF-8 JSON with "schema_version" and "solutions"
    N : int, optional
        Expected length of every x

    Returns:
    --------
    SolutionsFile
        Points in file order with the recorded fingerprint and entries
    """
    text, doc = _decode(data)
    if not isinstance(doc, dict):
        raise ProblemFileError("top level must be a JSON object", line=1)
    version = doc.get('schema_version')
    if version != SCHEMA_VERSION:
        raise ProblemFileError(f"unsupported schema_version {version!r}; expected {SCHEMA_VERSION!r}",
                               'schema_version', _line_of(text, 'schema_version'))
    entries = doc.get('solutions')
    if not isinstance(entries, list):
        raise ProblemFileError("expected an array", 'solutions', _line_of(text, 'solutions'))

    points = []
    for i, entry in enumerate(entries):
        name = f"solutions[{i}].x"
        x = entry.get('x') if isinstance(entry, dict) else None
        if not isinstance(x, list) or not x:
            raise ProblemFileError("expected a non-empty array of numbers", name, _line_of(text, 'solutions'))
        values = np.array([_real(v, name, text, 'solutions') for v in x])
        if N is not None and len(values) != N:
            raise ProblemFileError(f"x must have N={N} entries, got {len(values)}", name,
                                   _line_of(text, 'solutions'))
        points.append(values)
    fingerprint = doc.get('fingerprint')
    return SolutionsFile(points=points, fingerprint=fingerprint if isinstance(fingerprint, str) else None,
                         recorded=[e for e in entries if isinstance(e, dict)])


def load_solutions_path(filepath: Union[str, Path], N: Optional[int] = None) -> SolutionsFile:
    """Read and parse a solution file from disk."""
    path = Path(filepath)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ProblemFileError(f"cannot read {path}: {e.strerror}") from e
    return load_solutions_file(data, N)
