"""Table emission and ingestion for the CLI.

One table model, two byte-stable encodings. Floats are cut to 9
significant digits in both: CSV through the format string, JSON by
re-parsing the formatted value, so the two encodings carry identical
numbers and repeated runs are byte-identical. Missing values (a blank
cell in CSV, null in JSON) stand for fields a row legitimately lacks,
like the spiral-only bookkeeping radius on circular rows.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union

from .errors import ConfigError

FLOAT_FORMAT = "%.9g"

Cell = Union[int, float, str, None]


@dataclass
class Table:
    columns: List[str]
    rows: List[List[Cell]] = field(default_factory=list)

    def append(self, *values: Cell) -> None:
        if len(values) != len(self.columns):
            raise ValueError(
                f"row has {len(values)} cells, table has {len(self.columns)} columns"
            )
        self.rows.append(list(values))


def _csv_cell(value: Cell) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if not math.isfinite(value):
            return ""
        return FLOAT_FORMAT % value
    return str(value)


def _json_cell(value: Cell) -> Cell:
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        return float(FLOAT_FORMAT % value)
    return value


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def render_json(table: Table) -> str:
    doc = {
        "columns": table.columns,
        "rows": [[_json_cell(v) for v in row] for row in table.rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def render(table: Table, fmt: str) -> str:
    if fmt == "csv":
        return render_csv(table)
    if fmt == "json":
        return render_json(table)
    raise ConfigError(f"format={fmt!r}: expected csv or json")


def write_table(table: Table, path: Union[str, Path], fmt: str) -> None:
    Path(path).write_text(render(table, fmt), encoding="utf-8")


def _parse_cell(text: str) -> Cell:
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_table(path: Union[str, Path], fmt: Optional[str] = None) -> Table:
    """Read back a table this module wrote.

    The format is inferred from the file suffix unless given. CSV cells
    come back as int, float or str by narrowest fit; blank means None.
    """
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix == ".json" else "csv"
    text = path.read_text(encoding="utf-8")
    if fmt == "json":
        doc = json.loads(text)
        return Table(columns=list(doc["columns"]), rows=[list(r) for r in doc["rows"]])
    if fmt == "csv":
        reader = csv.reader(io.StringIO(text))
        try:
            columns = next(reader)
        except StopIteration:
            raise ConfigError(f"{path}: empty file, expected a header row")
        rows = [[_parse_cell(c) for c in row] for row in reader]
        return Table(columns=columns, rows=rows)
    raise ConfigError(f"format={fmt!r}: expected csv or json")


def meta_path(out: Union[str, Path]) -> Path:
    return Path(str(out) + ".meta.json")


def write_meta(out: Union[str, Path], meta: dict) -> None:
    """Sidecar recording how a table was produced.

    Holds the resolved config and library version only; nothing
    time-dependent, so reruns stay byte-identical.
    """
    text = json.dumps(meta, indent=2, sort_keys=True) + "\n"
    meta_path(out).write_text(text, encoding="utf-8")
