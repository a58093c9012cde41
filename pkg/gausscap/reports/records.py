"""
Record Emitters
===============
Every command produces a list of flat records. They are written either as
CSV ('.' decimals, '\\n' line endings, header row, floats as their shortest
repr, at most 17 significant digits and exact on reading back) or as a JSON
document carrying the schema version.
"""

import csv
import io
import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from gausscap.errors import DomainError

SCHEMA_VERSION = 1

Record = Dict[str, Any]


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    return value


def to_csv(records: Sequence[Record], columns: Optional[Sequence[str]] = None) -> str:
    if columns is None:
        columns = list(records[0]) if records else []
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([format_value(rec.get(col)) for col in columns])
    return buf.getvalue()


def to_json(records: Sequence[Record], command: str) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command":        command,
        "records":        [_jsonable(r) for r in records],
    }
    return json.dumps(doc, indent=2) + "\n"


def render(records: Sequence[Record], fmt: str, command: str, columns: Optional[Sequence[str]] = None) -> str:
    if fmt == "json":
        return to_json(records, command)
    return to_csv(records, columns)


def write_records(
    records: Sequence[Record],
    path: Path,
    fmt: str,
    command: str,
    columns: Optional[Sequence[str]] = None,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # newline="" keeps '\n' on every platform
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(render(records, fmt, command, columns))
    return path


def read_json_records(path: Path) -> List[Record]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DomainError(f"unsupported schema version {doc.get('schema_version')!r}")
    return doc["records"]
