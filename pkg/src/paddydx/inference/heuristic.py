"""Heuristic reference backend for end-to-end demos on arbitrary images.

Detects blobs of saturated hue on a coarse cell grid and derives a class
from the dominant hue; classification uses a softmax over hue-bucket
energy. Deterministic, dependency-free, and carries no accuracy claim.
"""

from __future__ import annotations

import numpy as np

from paddydx.core.geometry import NormalizedBox
from paddydx.core.taxonomy import NUM_CLASSES, NUM_DETECTION_CLASSES
from paddydx.inference.backends import (
    CLASSIFY,
    DETECT,
    ClassificationResult,
    Detection,
    ImageInput,
    ModelBackend,
)

_GRID = 8
_SATURATION_FLOOR = 0.25
_CELL_FRACTION = 0.35


def _hsv(pixels: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rgb = pixels.astype(np.float64) / 255.0
    mx = rgb.max(axis=2)
    mn = rgb.min(axis=2)
    delta = mx - mn
    sat = np.where(mx > 0, delta / np.maximum(mx, 1e-12), 0.0)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    hue = np.zeros_like(mx)
    nz = delta > 0
    rmax = nz & (mx == r)
    gmax = nz & (mx == g) & ~rmax
    bmax = nz & ~rmax & ~gmax
    hue[rmax] = (60.0 * ((g - b)[rmax] / delta[rmax])) % 360.0
    hue[gmax] = 60.0 * ((b - r)[gmax] / delta[gmax]) + 120.0
    hue[bmax] = 60.0 * ((r - g)[bmax] / delta[bmax]) + 240.0
    return hue, sat, mx


class HeuristicBackend(ModelBackend):
    def __init__(self, backend_id: str = "heuristic", version: str = "1"):
        super().__init__(
            backend_id=backend_id,
            version=version,
            capabilities=frozenset({CLASSIFY, DETECT}),
            input_side=256,
        )

    def classify(self, image: ImageInput) -> ClassificationResult:
        hue, sat, _ = _hsv(image.raster.pixels)
        buckets = np.zeros(NUM_CLASSES, dtype=np.float64)
        mask = sat > _SATURATION_FLOOR
        if mask.any():
            idx = (hue[mask] / 360.0 * NUM_CLASSES).astype(np.int64) % NUM_CLASSES
            np.add.at(buckets, idx, sat[mask])
        logits = buckets / max(buckets.max(), 1e-12)
        exp = np.exp(logits - logits.max())
        return ClassificationResult.from_probs(exp / exp.sum())

    def detect(self, image: ImageInput) -> list[Detection]:
        pixels = image.raster.pixels
        h, w = pixels.shape[:2]
        hue, sat, val = _hsv(pixels)
        marked = np.zeros((_GRID, _GRID), dtype=bool)
        cell_hue = np.zeros((_GRID, _GRID))
        cell_sat = np.zeros((_GRID, _GRID))
        for gy in range(_GRID):
            for gx in range(_GRID):
                ys = slice(gy * h // _GRID, max((gy + 1) * h // _GRID, gy * h // _GRID + 1))
                xs = slice(gx * w // _GRID, max((gx + 1) * w // _GRID, gx * w // _GRID + 1))
                cell_mask = (sat[ys, xs] > _SATURATION_FLOOR) & (val[ys, xs] > 0.2)
                if cell_mask.mean() > _CELL_FRACTION:
                    marked[gy, gx] = True
                    cell_hue[gy, gx] = np.median(hue[ys, xs][cell_mask])
                    cell_sat[gy, gx] = float(sat[ys, xs][cell_mask].mean())

        detections = []
        seen = np.zeros_like(marked)
        for gy in range(_GRID):
            for gx in range(_GRID):
                if not marked[gy, gx] or seen[gy, gx]:
                    continue
                # BFS over adjacent marked cells forms one blob
                stack = [(gy, gx)]
                cells = []
                seen[gy, gx] = True
                while stack:
                    cy, cx = stack.pop()
                    cells.append((cy, cx))
                    for ny, nx in ((cy - 1, cx), (cy + 1, cx), (cy, cx - 1), (cy, cx + 1)):
                        if 0 <= ny < _GRID and 0 <= nx < _GRID and marked[ny, nx] and not seen[ny, nx]:
                            seen[ny, nx] = True
                            stack.append((ny, nx))
                ys = [c[0] for c in cells]
                xs = [c[1] for c in cells]
                x0, x1 = min(xs) / _GRID, (max(xs) + 1) / _GRID
                y0, y1 = min(ys) / _GRID, (max(ys) + 1) / _GRID
                mean_hue = float(np.mean([cell_hue[c] for c in cells]))
                conf = float(np.clip(np.mean([cell_sat[c] for c in cells]), 0.0, 1.0))
                cls = int(mean_hue / 360.0 * NUM_DETECTION_CLASSES) % NUM_DETECTION_CLASSES
                detections.append(
                    Detection(
                        class_index=cls,
                        confidence=conf,
                        box=NormalizedBox.from_corners(x0, y0, x1, y1),
                    )
                )
        return detections
