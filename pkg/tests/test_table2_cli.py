"""The published detection table, reproduced end-to-end through the CLI."""

import subprocess
import sys
from pathlib import Path

from click.testing import CliRunner

from paddydx.cli import main

SCRIPT = Path(__file__).resolve().parent.parent / "scripts" / "reproduce_detection_table.py"


def test_engineered_fixtures_reproduce_all_row(tmp_path):
    proc = subprocess.run(
        [sys.executable, str(SCRIPT), "--write-dirs", str(tmp_path)],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "table reproduced" in proc.stdout

    runner = CliRunner()
    result = runner.invoke(
        main,
        ["eval", "detect", str(tmp_path / "preds"), str(tmp_path / "gts"),
         "--conf-cutoff", "0.5"],
    )
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[1].split() == ["all", "73.6", "65.7", "69.0"]
    assert lines[2].split() == ["bacterial_leaf_blight", "72.8", "52.8", "50.9"]
    assert lines[6].split() == ["blast", "84.0", "58.2", "66.4"]
