import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

SIGNIFICANT_DIGITS = 12


@dataclass
class SweepResult:
    """Tabular series of derived observables, one row per grid point."""
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def add_row(self, values: Sequence[Any]):
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values for {len(self.columns)} columns")
        self.rows.append(list(values))

    def column(self, name: str) -> List[Any]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]

    def numeric_columns(self) -> List[str]:
        """Columns whose values are all real numbers (bools excluded)."""
        return [
            name for name in self.columns
            if self.rows and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in self.column(name))
        ]


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return str(value)
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def render_csv(result: SweepResult) -> str:
    """CSV text with the metadata echoed as '# key=value' header comments."""
    buffer = io.StringIO()
    for key, value in result.metadata.items():
        buffer.write(f"# {key}={format_value(value)}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([format_value(value) for value in row])
    return buffer.getvalue()


def write_csv(result: SweepResult, path: Optional[Union[str, Path]] = None) -> str:
    """Write the CSV to path (if given) and return its text."""
    text = render_csv(result)
    if path is not None:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
    return text
