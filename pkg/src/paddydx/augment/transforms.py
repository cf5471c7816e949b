"""Geometric/photometric augmentation with bounding-box preservation.

A transform is an affine map about the image center composed, in order, of
rotation, horizontal shear, and axis flips, followed by an additive
brightness shift. Pixels are resampled bilinearly with black fill outside
the source frame. Box corners go through the same affine map; each box is
replaced by the axis-aligned hull of its mapped corners, clipped to the
frame, and kept only if the clipped area covers at least ``min_visibility``
of the unclipped hull (the fraction the transform left in frame).

Surviving box coordinates are snapped to the 1e-6 grid used by the
annotation file format, so in-memory pipelines and file round-trips agree
and a double flip restores coordinates exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from paddydx.core.geometry import NormalizedBox
from paddydx.core.image import RasterImage
from paddydx.errors import InvalidInput

COORD_DECIMALS = 6  # annotation files carry 6-decimal fixed point


@dataclass(frozen=True)
class TransformSpec:
    rotation: float = 0.0  # degrees, [-180, 180]
    hflip: bool = False
    vflip: bool = False
    brightness_delta: float = 0.0  # fraction of full scale, [-1, 1]
    shear_x: float = 0.0  # degrees, (-90, 90)

    def __post_init__(self) -> None:
        if not -180.0 <= self.rotation <= 180.0:
            raise InvalidInput(f"rotation out of range: {self.rotation}")
        if not abs(self.brightness_delta) <= 1.0:
            raise InvalidInput(f"brightness_delta out of range: {self.brightness_delta}")
        if not abs(self.shear_x) < 90.0:
            raise InvalidInput(f"shear_x out of range: {self.shear_x}")

    @property
    def is_identity(self) -> bool:
        return (
            self.rotation == 0.0
            and not self.hflip
            and not self.vflip
            and self.brightness_delta == 0.0
            and self.shear_x == 0.0
        )

    @property
    def moves_geometry(self) -> bool:
        return self.rotation != 0.0 or self.hflip or self.vflip or self.shear_x != 0.0


@dataclass(frozen=True)
class AugmentConfig:
    rotation_range: tuple[float, float] = (-30.0, 30.0)
    brightness_range: tuple[float, float] = (-0.2, 0.2)
    shear_range: tuple[float, float] = (-10.0, 10.0)
    flip_probabilities: tuple[float, float] = (0.5, 0.5)  # (horizontal, vertical)
    min_visibility: float = 0.30
    seed: int = 0

    def __post_init__(self) -> None:
        for name, (lo, hi) in (
            ("rotation_range", self.rotation_range),
            ("brightness_range", self.brightness_range),
            ("shear_range", self.shear_range),
        ):
            if not lo <= 0.0 <= hi:
                raise InvalidInput(f"{name} must contain 0, got ({lo}, {hi})")
        for p in self.flip_probabilities:
            if not 0.0 <= p <= 1.0:
                raise InvalidInput("flip probabilities must lie in [0, 1]")
        if not 0.0 < self.min_visibility <= 1.0:
            raise InvalidInput(f"min_visibility must lie in (0, 1], got {self.min_visibility}")


@dataclass(frozen=True)
class AnnotatedImage:
    image: RasterImage
    boxes: tuple[tuple[int, NormalizedBox], ...]  # (detection class index, box)


def random_transform(config: AugmentConfig, draw_index: int) -> TransformSpec:
    """Deterministic draw: the same (seed, draw_index) yields the same spec."""
    rng = np.random.default_rng([config.seed & 0xFFFFFFFFFFFFFFFF, draw_index])
    rotation = float(rng.uniform(*config.rotation_range))
    shear = float(rng.uniform(*config.shear_range))
    brightness = float(rng.uniform(*config.brightness_range))
    hflip = bool(rng.random() < config.flip_probabilities[0])
    vflip = bool(rng.random() < config.flip_probabilities[1])
    return TransformSpec(
        rotation=rotation,
        hflip=hflip,
        vflip=vflip,
        brightness_delta=brightness,
        shear_x=shear,
    )


def affine_matrix(t: TransformSpec, width: int, height: int) -> np.ndarray:
    """3x3 forward map (source pixel -> destination pixel) about the center."""
    theta = math.radians(t.rotation)
    rot = np.array(
        [
            [math.cos(theta), -math.sin(theta), 0.0],
            [math.sin(theta), math.cos(theta), 0.0],
            [0.0, 0.0, 1.0],
        ]
    )
    shear = np.array(
        [[1.0, math.tan(math.radians(t.shear_x)), 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    )
    flip = np.diag([-1.0 if t.hflip else 1.0, -1.0 if t.vflip else 1.0, 1.0])
    cx, cy = width / 2.0, height / 2.0
    to_center = np.array([[1.0, 0.0, -cx], [0.0, 1.0, -cy], [0.0, 0.0, 1.0]])
    from_center = np.array([[1.0, 0.0, cx], [0.0, 1.0, cy], [0.0, 0.0, 1.0]])
    return from_center @ flip @ shear @ rot @ to_center


def _warp_image(pixels: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Inverse-map bilinear resampling with black fill."""
    h, w = pixels.shape[:2]
    inv = np.linalg.inv(matrix)
    ys, xs = np.meshgrid(
        np.arange(h, dtype=np.float64) + 0.5,
        np.arange(w, dtype=np.float64) + 0.5,
        indexing="ij",
    )
    src_x = inv[0, 0] * xs + inv[0, 1] * ys + inv[0, 2] - 0.5
    src_y = inv[1, 0] * xs + inv[1, 1] * ys + inv[1, 2] - 0.5

    x0 = np.floor(src_x).astype(np.int64)
    y0 = np.floor(src_y).astype(np.int64)
    tx = src_x - x0
    ty = src_y - y0

    out = np.zeros((h, w, 3), dtype=np.float64)
    src = pixels.astype(np.float64)
    for dy in (0, 1):
        for dx in (0, 1):
            xi = x0 + dx
            yi = y0 + dy
            weight = (tx if dx else 1.0 - tx) * (ty if dy else 1.0 - ty)
            inside = (xi >= 0) & (xi < w) & (yi >= 0) & (yi < h)
            xi_c = np.clip(xi, 0, w - 1)
            yi_c = np.clip(yi, 0, h - 1)
            sample = src[yi_c, xi_c] * inside[..., None]
            out += weight[..., None] * sample
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def _quantize(value: float) -> float:
    return round(value, COORD_DECIMALS)


_MIN_EXTENT = 10.0**-COORD_DECIMALS
_OVERHANG_TOL = 1e-9


def _fit_axis(center: float, extent: float) -> tuple[float, float]:
    """Shrink an extent whose quantized corners overhang [0, 1].

    Grid snapping can push a corner out by up to half a grid step; the fix
    is symmetric under mirroring, so flip round trips stay exact.
    """
    over = max(0.0, extent / 2.0 - center, center + extent / 2.0 - 1.0)
    if over <= _OVERHANG_TOL:
        return center, extent
    shrunk = extent - 2.0 * over
    if shrunk >= _MIN_EXTENT:
        return center, shrunk
    # sub-grid sliver hugging an edge: pin the center inside instead
    center = min(max(center, _MIN_EXTENT / 2.0), 1.0 - _MIN_EXTENT / 2.0)
    return center, _MIN_EXTENT


def transform_box(
    box: NormalizedBox,
    matrix: np.ndarray,
    width: int,
    height: int,
    min_visibility: float,
) -> NormalizedBox | None:
    """Map a box through the affine; None when visibility drops below the floor."""
    x0, y0, x1, y1 = box.corners()
    corners_px = np.array(
        [
            [x0 * width, y0 * height, 1.0],
            [x1 * width, y0 * height, 1.0],
            [x0 * width, y1 * height, 1.0],
            [x1 * width, y1 * height, 1.0],
        ]
    )
    mapped = corners_px @ matrix.T
    hx0, hy0 = mapped[:, 0].min(), mapped[:, 1].min()
    hx1, hy1 = mapped[:, 0].max(), mapped[:, 1].max()
    hull_area = (hx1 - hx0) * (hy1 - hy0)
    if hull_area <= 0.0:
        return None
    cx0, cy0 = max(hx0, 0.0), max(hy0, 0.0)
    cx1, cy1 = min(hx1, float(width)), min(hy1, float(height))
    clipped_w, clipped_h = cx1 - cx0, cy1 - cy0
    if clipped_w <= 0.0 or clipped_h <= 0.0:
        return None
    if clipped_w * clipped_h / hull_area < min_visibility:
        return None
    cx, w = _fit_axis(
        _quantize((cx0 + cx1) / 2.0 / width),
        max(_quantize(clipped_w / width), _MIN_EXTENT),
    )
    cy, h = _fit_axis(
        _quantize((cy0 + cy1) / 2.0 / height),
        max(_quantize(clipped_h / height), _MIN_EXTENT),
    )
    return NormalizedBox(cx=cx, cy=cy, w=w, h=h)


def apply_transform(
    ann: AnnotatedImage, t: TransformSpec, min_visibility: float = 0.30
) -> AnnotatedImage:
    """Transform pixels and boxes together; boxes may be dropped, never moved
    independently of the pixels."""
    if not 0.0 < min_visibility <= 1.0:
        raise InvalidInput(f"min_visibility must lie in (0, 1], got {min_visibility}")
    if t.is_identity:
        return ann

    pixels = ann.image.pixels
    boxes = ann.boxes
    if t.moves_geometry:
        matrix = affine_matrix(t, ann.image.width, ann.image.height)
        pixels = _warp_image(pixels, matrix)
        kept = []
        for cls, box in boxes:
            moved = transform_box(
                box, matrix, ann.image.width, ann.image.height, min_visibility
            )
            if moved is not None:
                kept.append((cls, moved))
        boxes = tuple(kept)

    if t.brightness_delta != 0.0:
        shifted = pixels.astype(np.int16) + int(round(t.brightness_delta * 255.0))
        pixels = np.clip(shifted, 0, 255).astype(np.uint8)

    return AnnotatedImage(image=RasterImage(pixels), boxes=boxes)
