#!/usr/bin/env python3
"""Reproduce the detection experiment's report table from synthetic fixtures.

For each of the 12 disease classes this constructs a synthetic set of
ground-truth boxes and ranked predictions whose box precision, box recall
(at the 0.5 confidence operating point), and AP50 hit the published
per-class values, then runs the library evaluator over the scenes and
prints the resulting table. The 'all' row lands on 73.6 / 65.7 / 69.0.

With --write-dirs the scenes are also materialized as per-image text files
compatible with `paddydx eval detect` (this writes a few thousand small
files).

Construction per class, with n ground truths and targets (p, r, m):
    t  = r*n true positives at high confidence
    f  = t*(1-p)/p false positives (operating precision p)
    if m > r:  e extra TPs below the cutoff lift the AP sweep's recall:
               AP = t/n + (e/n) * (t+e)/(t+f+e), solved for e
    if m < r:  f1 of the FPs outrank every TP, dragging AP down:
               AP = (t/n) * t/(t+f1), solved for f1
Every prediction either sits exactly on its own ground truth (IoU 1) or in
an empty cell (IoU 0), so matching is unambiguous.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from paddydx.core.taxonomy import DETECTION_CLASSES
from paddydx.metrics.detection import detection_report

# class slug -> (box precision, box recall, map50), percentages
TABLE2 = {
    "bacterial_leaf_blight": (72.8, 52.8, 50.9),
    "bacterial_leaf_streak": (87.4, 90.4, 89.1),
    "bacterial_panicle_blight": (71.2, 76.5, 78.6),
    "black_stem_borer": (73.4, 78.8, 75.3),
    "blast": (84.0, 58.2, 66.4),
    "brown_spot": (77.6, 42.1, 55.4),
    "downy_mildew": (68.4, 59.6, 67.3),
    "hispa": (35.4, 21.5, 21.9),
    "leaf_roller": (84.8, 71.9, 76.2),
    "tungro": (75.0, 81.8, 82.4),
    "white_stem_borer": (76.2, 82.8, 83.8),
    "yellow_stem_borer": (77.5, 72.4, 80.6),
}

CONF_TP = 0.90
CONF_FP_LEAD = 0.95  # outranks TPs (m < r rows)
CONF_FP_TAIL = 0.60
CONF_EXTRA = 0.30  # below the operating cutoff
CUTOFF = 0.50

CELLS_PER_IMAGE = 16


def plan_class(p: float, r: float, m: float, n: int) -> tuple[int, int, int, int]:
    """(t, f1, f2, e): TP count, leading FPs, trailing FPs, sub-cutoff TPs."""
    t = round(r * n)
    f = round(t * (1.0 - p) / p)
    if m >= r:
        amount = n * (m - t / n)
        disc = (t - amount) ** 2 + 4.0 * amount * (t + f)
        e = round((-(t - amount) + math.sqrt(disc)) / 2.0)
        f1 = 0
    else:
        f1 = round(t * (r - m) / m)
        e = 0
    f2 = f - f1
    assert f2 >= 0 and t + e <= n, "targets not representable at this n"
    return t, f1, f2, e


def cell_box(k: int) -> tuple[float, float, float, float]:
    """Disjoint unit-grid cell boxes, CELLS_PER_IMAGE per image."""
    col = k % CELLS_PER_IMAGE
    x0 = col / CELLS_PER_IMAGE
    return (x0, 0.25, x0 + 1.0 / (2 * CELLS_PER_IMAGE), 0.5)


def build_scenes(n: int = 4000):
    """Per-image (preds, gts) lists realizing the published per-class numbers."""
    preds_by_image: list[list] = []
    gts_by_image: list[list] = []

    for cls_idx, cls in enumerate(DETECTION_CLASSES):
        p, r, m = (v / 100.0 for v in TABLE2[cls.slug])
        t, f1, f2, e = plan_class(p, r, m, n)

        def paired_images(count: int, conf: float):
            """Images whose predictions sit exactly on their ground truths."""
            for start in range(0, count, CELLS_PER_IMAGE):
                size = min(CELLS_PER_IMAGE, count - start)
                gts = [(cls_idx, cell_box(k)) for k in range(size)]
                preds = [(cls_idx, conf, cell_box(k)) for k in range(size)]
                preds_by_image.append(preds)
                gts_by_image.append(gts)

        def unpaired_images(count: int, conf: float | None):
            """Prediction-only (conf set) or ground-truth-only images."""
            for start in range(0, count, CELLS_PER_IMAGE):
                size = min(CELLS_PER_IMAGE, count - start)
                if conf is None:
                    preds_by_image.append([])
                    gts_by_image.append([(cls_idx, cell_box(k)) for k in range(size)])
                else:
                    preds_by_image.append(
                        [(cls_idx, conf, cell_box(k)) for k in range(size)]
                    )
                    gts_by_image.append([])

        paired_images(t, CONF_TP)
        paired_images(e, CONF_EXTRA)
        unpaired_images(f1, CONF_FP_LEAD)
        unpaired_images(f2, CONF_FP_TAIL)
        unpaired_images(n - t - e, None)  # never-detected ground truths

    return preds_by_image, gts_by_image


def write_dirs(preds_by_image, gts_by_image, root: Path) -> None:
    preds_dir = root / "preds"
    gts_dir = root / "gts"
    preds_dir.mkdir(parents=True, exist_ok=True)
    gts_dir.mkdir(parents=True, exist_ok=True)
    for i, (preds, gts) in enumerate(zip(preds_by_image, gts_by_image)):
        stem = f"scene{i:06d}"
        pred_lines = []
        for cls, conf, (x0, y0, x1, y1) in preds:
            cx, cy, w, h = (x0 + x1) / 2, (y0 + y1) / 2, x1 - x0, y1 - y0
            pred_lines.append(f"{cls} {conf:.6f} {cx:.6f} {cy:.6f} {w:.6f} {h:.6f}")
        gt_lines = []
        for cls, (x0, y0, x1, y1) in gts:
            cx, cy, w, h = (x0 + x1) / 2, (y0 + y1) / 2, x1 - x0, y1 - y0
            gt_lines.append(f"{cls} {cx:.6f} {cy:.6f} {w:.6f} {h:.6f}")
        if pred_lines:
            (preds_dir / f"{stem}.txt").write_text("\n".join(pred_lines) + "\n")
        if gt_lines:
            (gts_dir / f"{stem}.txt").write_text("\n".join(gt_lines) + "\n")
    print(f"wrote {len(preds_by_image)} scenes under {root}")
    print(f"evaluate with: paddydx eval detect {preds_dir} {gts_dir} --conf-cutoff {CUTOFF}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--gt-per-class", type=int, default=4000)
    parser.add_argument("--write-dirs", type=Path, default=None,
                        help="also materialize scenes as eval-compatible text files")
    args = parser.parse_args()

    preds_by_image, gts_by_image = build_scenes(args.gt_per_class)
    report = detection_report(preds_by_image, gts_by_image, conf_cutoff=CUTOFF)
    print(report.render_text())

    ok = True
    rendered = {row.label: row.values for row in report.rows}
    for slug, targets in TABLE2.items():
        got = tuple(round(100.0 * v, 1) for v in rendered[slug])
        if got != targets:
            print(f"MISMATCH {slug}: got {got}, want {targets}")
            ok = False
    aggregate = tuple(round(100.0 * v, 1) for v in report.aggregate().values)
    if aggregate != (73.6, 65.7, 69.0):
        print(f"MISMATCH all: got {aggregate}")
        ok = False
    print("table reproduced" if ok else "table NOT reproduced")

    if args.write_dirs is not None:
        write_dirs(preds_by_image, gts_by_image, args.write_dirs)
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
