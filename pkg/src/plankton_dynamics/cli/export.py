"""CSV and JSON export of analysis and simulation results."""
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Type

from pydantic import BaseModel, ValidationError

from plankton_dynamics.analysis.bifurcation import NSReport
from plankton_dynamics.analysis.fixed_points import FixedPointRecord, FixedPointReport
from plankton_dynamics.analysis.regions import RegionsReport
from plankton_dynamics.analysis.stability import ClassificationReport
from plankton_dynamics.simulation.dynamics import MLEResult, OrbitResult, SweepResult
from plankton_dynamics.utils.errors import ExportError
from plankton_dynamics.utils.logger import StructuredLogger

logger = StructuredLogger(__name__)

SCHEMAS: Dict[str, Type[BaseModel]] = {
    'ns_report': NSReport,
    'sweep_result': SweepResult,
    'orbit_result': OrbitResult,
    'mle_result': MLEResult,
    'fixed_point_report': FixedPointReport,
    'classification_report': ClassificationReport,
    'regions_report': RegionsReport,
}


def schema_of(result: BaseModel) -> str:
    for name, model in SCHEMAS.items():
        if type(result) is model:
            return name
    raise ExportError(f"no export schema for {type(result).__name__}")


def fmt_number(value: Any) -> str:
    """17 significant digits for floats, plain text for everything else."""
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return format(value, '.17g')
    if value is None:
        return ''
    if hasattr(value, 'value'):
        return str(value.value)
    return str(value)


def _flatten(prefix: str, value: Any, out: List[List[str]]) -> None:
    if isinstance(value, dict):
        for key, item in value.items():
            _flatten(f"{prefix}.{key}" if prefix else key, item, out)
    elif isinstance(value, (list, tuple)):
        for i, item in enumerate(value):
            _flatten(f"{prefix}.{i}", item, out)
    else:
        out.append([prefix, fmt_number(value)])


def _record_rows(records: Iterable[FixedPointRecord]) -> List[List[str]]:
    return [
        [
            rec.kind.value,
            rec.branch or '',
            fmt_number(rec.point.u),
            fmt_number(rec.point.v),
            fmt_number(rec.char_p),
            fmt_number(rec.char_q),
            rec.label.value if rec.label else '',
            fmt_number(rec.tangent),
        ]
        for rec in records
    ]


_RECORD_HEADER = ['kind', 'branch', 'u', 'v', 'p', 'q', 'label', 'tangent']


def csv_rows(result: BaseModel) -> List[List[str]]:
    """Header row followed by data rows for any exportable result."""
    if isinstance(result, SweepResult):
        rows = [['theta', 'u', 'v', 'mle']]
        for theta, column, mle in zip(result.theta_grid, result.samples, result.mle):
            rows.extend([fmt_number(theta), fmt_number(u), fmt_number(v), fmt_number(mle)] for u, v in column)
        return rows
    if isinstance(result, OrbitResult):
        rows = [['step', 'u', 'v']]
        rows.extend([str(n), fmt_number(u), fmt_number(v)] for n, u, v in zip(result.step, result.u, result.v))
        return rows
    if isinstance(result, MLEResult):
        p = result.params
        return [
            ['beta', 'r', 'theta', 'c', 'h', 'mle'],
            [fmt_number(p.beta), fmt_number(p.r), fmt_number(p.theta), fmt_number(p.c), str(p.h), fmt_number(result.mle)],
        ]
    if isinstance(result, FixedPointReport):
        # count and case label lead as field,value rows; the records follow
        return [
            ['field', 'value'],
            ['count', str(result.count)],
            ['case_label', result.case_label],
            _RECORD_HEADER,
        ] + _record_rows(result.points)
    if isinstance(result, ClassificationReport):
        return [_RECORD_HEADER] + _record_rows([result.origin, result.boundary_u1, *result.interior])
    if isinstance(result, (NSReport, RegionsReport)):
        rows: List[List[str]] = []
        _flatten('', result.model_dump(mode='python'), rows)
        return [['field', 'value']] + rows
    raise ExportError(f"no CSV layout for {type(result).__name__}")


def to_json_document(result: BaseModel) -> str:
    """{"schema": <kind>, "data": <fields>} with complex values as {re, im}."""
    data = json.loads(result.model_dump_json())
    return json.dumps({'schema': schema_of(result), 'data': data}, indent=2) + '\n'


def to_csv_text(result: BaseModel) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerows(csv_rows(result))
    return buffer.getvalue()


def export(result: BaseModel, format: str, path: Optional[str] = None) -> None:
    """Write result as csv or json to path, or to stdout when path is None."""
    if format == 'json':
        text = to_json_document(result)
    elif format == 'csv':
        text = to_csv_text(result)
    else:
        raise ExportError(f"unknown export format '{format}'")

    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding='utf-8')
    except OSError as e:
        logger.error(f"Failed to write {path}: {e}", error=e)
        raise ExportError(f"cannot write {path}: {e}") from e
    logger.info("Result exported", path=path, format=format, schema=schema_of(result))


def load_json(path: str) -> BaseModel:
    """Read a JSON export back into its result type."""
    try:
        document = json.loads(Path(path).read_text(encoding='utf-8'))
    except (OSError, ValueError) as e:
        raise ExportError(f"cannot read {path}: {e}") from e
    model = SCHEMAS.get(document.get('schema')) if isinstance(document, dict) else None
    if model is None:
        raise ExportError(f"{path} has no known schema")
    try:
        return model.model_validate(document['data'])
    except (KeyError, ValidationError) as e:
        raise ExportError(f"{path} does not hold a valid {document['schema']}: {e}") from e
