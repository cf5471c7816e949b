import json

import pytest

from paddydx.errors import InvalidInput
from paddydx.metrics.report import EvalReport, ReportRow

# Per-class detection rows used throughout (fractions of 1).
ROWS = (
    ReportRow("alpha", (0.728, 0.528, 0.509)),
    ReportRow("beta", (0.874, 0.904, 0.891)),
    ReportRow("gamma", (0.712, 0.765, 0.786)),
)


def _report():
    return EvalReport(columns=("box_precision", "box_recall", "map50"), rows=ROWS)


def test_aggregate_is_macro_mean():
    agg = _report().aggregate()
    for j in range(3):
        expected = sum(r.values[j] for r in ROWS) / len(ROWS)
        assert agg.values[j] == pytest.approx(expected, abs=1e-12)


def test_text_rendering_shows_percentages_one_decimal():
    text = _report().render_text()
    lines = text.splitlines()
    assert lines[0].split() == ["class", "box_precision", "box_recall", "map50"]
    assert lines[1].split()[0] == "all"
    assert lines[2].split() == ["alpha", "72.8", "52.8", "50.9"]


def test_json_round_trip_with_trailing_all_row():
    report = _report()
    doc = json.loads(report.to_json())
    assert doc["rows"][-1]["class"] == "all"
    assert EvalReport.from_json(report.to_json()) == report


def test_all_label_reserved():
    with pytest.raises(InvalidInput):
        EvalReport(columns=("x",), rows=(ReportRow("all", (1.0,)),))


def test_row_width_checked():
    with pytest.raises(InvalidInput):
        EvalReport(columns=("x", "y"), rows=(ReportRow("a", (1.0,)),))


def test_empty_report_cannot_aggregate():
    report = EvalReport(columns=("x",), rows=())
    with pytest.raises(InvalidInput):
        report.aggregate()
