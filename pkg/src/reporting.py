"""
Machine-readable reports: canonical JSON, problem fingerprints and pandas
tables for the --csv output.
"""

import hashlib
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from .difference_calculus import SpectralBounds
from .energy import EnergyReport
from .hypothesis import ConditionReport, Thresholds
from .problem_loader import SCHEMA_VERSION, ProblemFile
from .solvers import CriticalPoint


def to_jsonable(obj):
    """
    Plain JSON types with keys sorted recursively.

    Non-finite floats become null since JSON has no spelling for them.
    """
    if hasattr(obj, 'to_dict'):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(obj[k]) for k in sorted(obj, key=str)}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def format_float(value: float) -> str:
    """17 significant digits, always spelled as a JSON real."""
    text = format(value, '.17g')
    return text if ('.' in text or 'e' in text) else text + '.0'


def _encode(obj, indent: Optional[int], level: int) -> str:
    if isinstance(obj, float):
        return format_float(obj)
    if not isinstance(obj, (dict, list)):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        colon = ': ' if indent is not None else ':'
        parts = [json.dumps(k, ensure_ascii=False) + colon + _encode(v, indent, level + 1)
                 for k, v in obj.items()]
        opening, closing = '{', '}'
    else:
        parts = [_encode(v, indent, level + 1) for v in obj]
        opening, closing = '[', ']'
    if not parts:
        return opening + closing
    if indent is None:
        return opening + ','.join(parts) + closing
    pad = '\n' + ' ' * (indent * (level + 1))
    return opening + pad + (',' + pad).join(parts) + '\n' + ' ' * (indent * level) + closing


def canonical_json(obj, indent: Optional[int] = 2) -> str:
    """Deterministic JSON text: sorted keys, 17-digit floats, trailing newline when indented."""
    text = _encode(to_jsonable(obj), indent, 0)
    return text + '\n' if indent is not None else text


def fingerprint(problem: ProblemFile) -> str:
    """sha256 of the compact canonical JSON of the problem content."""
    payload = canonical_json(problem.canonical(), indent=None)
    return hashlib.sha256(payload.encode('utf-8')).hexdigest()


def envelope(command: str, problem: ProblemFile, body: dict, digest: Optional[str] = None) -> dict:
    """Top-level report every command emits."""
    report = {
        'schema_version': SCHEMA_VERSION,
        'command': command,
        'fingerprint': digest or fingerprint(problem),
    }
    report.update(body)
    return report


# ============================================================================
# Tables
# ============================================================================

def spectrum_row(bounds: SpectralBounds, th: Thresholds) -> dict:
    row = bounds.to_dict()
    row.update(th.to_dict())
    return row


def spectrum_table(bounds: SpectralBounds, th: Thresholds) -> pd.DataFrame:
    return pd.DataFrame([spectrum_row(bounds, th)], columns=['lambda', 'lambda_max', 'bound', 't_low', 't_high'])


def _x_columns(N: int) -> List[str]:
    return [f"x{k}" for k in range(1, N + 1)]


def solutions_table(points: Sequence[CriticalPoint], N: int) -> pd.DataFrame:
    """One row per critical point: J, norms, kind, origin and x(1..N)."""
    columns = ['J', 'grad_norm', 'residual', 'kind', 'origin'] + _x_columns(N)
    rows = []
    for point in points:
        row = {
            'J': point.J,
            'grad_norm': point.grad_norm_inf,
            'residual': point.residual_norm_inf,
            'kind': point.kind,
            'origin': point.origin,
        }
        row.update(zip(_x_columns(N), point.x.to_list()))
        rows.append(row)
    return pd.DataFrame(rows, columns=columns)


def verification_table(points: Sequence[np.ndarray], reports: Sequence[EnergyReport],
                       kinds: Sequence[str], N: int) -> pd.DataFrame:
    columns = ['J', 'grad_norm', 'residual', 'kind'] + _x_columns(N)
    rows = []
    for x, report, kind in zip(points, reports, kinds):
        row = {'J': report.J, 'grad_norm': report.grad_norm_inf,
               'residual': report.residual_norm_inf, 'kind': kind}
        row.update(zip(_x_columns(N), [float(v) for v in x]))
        rows.append(row)
    return pd.DataFrame(rows, columns=columns)


def conditions_table(reports: Iterable[ConditionReport]) -> pd.DataFrame:
    """Screening outcome per claim, witness columns empty when consistent."""
    columns = ['condition', 'family', 'alpha', 'q', 'M', 'verdict', 'witness_k', 'witness_u', 'witness_value']
    rows = []
    for r in reports:
        rows.append({
            'condition': r.condition,
            'family': r.family,
            'alpha': r.params.alpha,
            'q': r.params.q,
            'M': r.params.M,
            'verdict': r.verdict,
            'witness_k': r.witness.k if r.witness else None,
            'witness_u': r.witness.u if r.witness else None,
            'witness_value': r.witness.value if r.witness else None,
        })
    return pd.DataFrame(rows, columns=columns)


def to_csv(table: pd.DataFrame) -> str:
    return table.to_csv(index=False, lineterminator='\n')


def csv_sections(sections: Sequence[tuple]) -> str:
    """Concatenate (title, DataFrame) pairs, each headed by a '# title' line."""
    return '\n'.join(f"# {title}\n{to_csv(table)}" for title, table in sections)


# ============================================================================
# Output
# ============================================================================

def write_atomic(filepath: Union[str, Path], text: str) -> None:
    """Write text to a temporary file beside filepath, then rename it into place."""
    path = Path(filepath)
    directory = path.parent if str(path.parent) else Path('.')
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix='.tmp', dir=directory)
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
