"""
Machine-readable output: the JSON envelope, CSV rendering and atomic writes.

Envelopes carry no timestamps unless run metadata is requested, so two
identical invocations produce byte-identical output.
"""

import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

SCHEMA_VERSION = "1"


def sanitize(value: Any) -> Any:
    """Make a payload JSON-safe: infinities become strings, tuples become lists."""
    if isinstance(value, dict):
        return {str(k): sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [sanitize(v) for v in value]
    if isinstance(value, np.ndarray):
        return [sanitize(v) for v in value.tolist()]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


@dataclass
class OutputEnvelope:
    command: str
    params: Dict[str, Any]
    payload: Any
    warnings: List[str] = field(default_factory=list)
    run: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'schema_version': SCHEMA_VERSION,
            'command': self.command,
            'params': sanitize(self.params),
            'payload': sanitize(self.payload),
            'warnings': list(self.warnings),
        }
        if self.run is not None:
            data['run'] = sanitize(self.run)
        return data

    def render(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"


def format_cell(value: Any) -> str:
    """CSV cell: floats with 17 significant digits, empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return "%.17g" % value
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return buffer.getvalue()


class OutputFile:
    """
    Destination for command output.

    With a path the text goes to a temp file first and is renamed over the
    target, so readers never see a half-written file. Without one it goes
    to stdout.
    """

    def __init__(self, path: Optional[str] = None):
        self.path = path
        self.temp_path = path + ".tmp" if path else None

    def write(self, text: str):
        if not self.path:
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        with open(self.temp_path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        os.replace(self.temp_path, self.path)
