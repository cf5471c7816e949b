"""Tabular evaluation reports with a macro-averaged aggregate row.

Values are stored as fractions in [0, 1] and rendered as percentages with
one decimal. The ``all`` row is always the unweighted arithmetic mean of
the per-class rows (macro average), never recomputed from pooled counts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from paddydx.errors import InvalidInput


@dataclass(frozen=True)
class ReportRow:
    label: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class EvalReport:
    columns: tuple[str, ...]
    rows: tuple[ReportRow, ...]
    metadata: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row.values) != len(self.columns):
                raise InvalidInput(
                    f"row {row.label!r} has {len(row.values)} values, expected {len(self.columns)}"
                )
            if row.label == "all":
                raise InvalidInput("'all' is reserved for the aggregate row")

    def aggregate(self) -> ReportRow:
        """Macro average of the per-class rows."""
        if not self.rows:
            raise InvalidInput("report has no per-class rows to aggregate")
        n = len(self.rows)
        means = tuple(
            sum(row.values[j] for row in self.rows) / n for j in range(len(self.columns))
        )
        return ReportRow(label="all", values=means)

    def render_text(self) -> str:
        """Aligned plain-text table, aggregate row first, percentages at 1 decimal."""
        header = ["class", *self.columns]
        body = [self.aggregate(), *self.rows]
        cells = [header] + [
            [row.label, *(f"{100.0 * v:.1f}" for v in row.values)] for row in body
        ]
        widths = [max(len(r[j]) for r in cells) for j in range(len(header))]
        lines = []
        for r in cells:
            left = r[0].ljust(widths[0])
            rest = "  ".join(r[j].rjust(widths[j]) for j in range(1, len(header)))
            lines.append(f"{left}  {rest}".rstrip())
        for key, value in self.metadata.items():
            lines.append(f"# {key}: {value}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        """Machine-readable form: per-class rows with a trailing ``all`` row."""
        rows = [
            {"class": row.label, **dict(zip(self.columns, row.values))}
            for row in (*self.rows, self.aggregate())
        ]
        return json.dumps(
            {"columns": list(self.columns), "rows": rows, "metadata": dict(self.metadata)},
            indent=2,
            sort_keys=False,
        )

    @staticmethod
    def from_json(text: str) -> "EvalReport":
        doc = json.loads(text)
        columns = tuple(doc["columns"])
        rows = tuple(
            ReportRow(label=r["class"], values=tuple(r[c] for c in columns))
            for r in doc["rows"]
            if r["class"] != "all"
        )
        return EvalReport(columns=columns, rows=rows, metadata=doc.get("metadata", {}))
