"""Model-input preprocessing: bilinear resize and ImageNet normalization."""

from __future__ import annotations

import numpy as np

from paddydx.core.image import RasterImage
from paddydx.errors import InvalidInput

INPUT_SIDES = (256, 384, 640)

# Standard published ImageNet per-channel statistics.
IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)


def resize_bilinear(pixels: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resize of an HxWxC array (half-pixel-center convention)."""
    h, w = pixels.shape[:2]
    src_y = (np.arange(out_h, dtype=np.float64) + 0.5) * (h / out_h) - 0.5
    src_x = (np.arange(out_w, dtype=np.float64) + 0.5) * (w / out_w) - 0.5
    y0 = np.clip(np.floor(src_y).astype(np.int64), 0, h - 1)
    x0 = np.clip(np.floor(src_x).astype(np.int64), 0, w - 1)
    y1 = np.clip(y0 + 1, 0, h - 1)
    x1 = np.clip(x0 + 1, 0, w - 1)
    ty = np.clip(src_y - y0, 0.0, 1.0)[:, None, None]
    tx = np.clip(src_x - x0, 0.0, 1.0)[None, :, None]

    src = pixels.astype(np.float64)
    top = src[y0][:, x0] * (1.0 - tx) + src[y0][:, x1] * tx
    bottom = src[y1][:, x0] * (1.0 - tx) + src[y1][:, x1] * tx
    return top * (1.0 - ty) + bottom * ty


def resize_uint8(image: RasterImage, side: int) -> RasterImage:
    """Square bilinear resize keeping the 8-bit pixel type."""
    out = resize_bilinear(image.pixels, side, side)
    return RasterImage(np.clip(np.rint(out), 0, 255).astype(np.uint8))


def preprocess(image: RasterImage, target_side: int, normalize: bool = True) -> np.ndarray:
    """Resize to a square model input and optionally ImageNet-normalize.

    Returns a float32 CHW tensor. Without normalization, values stay in
    [0, 255]; with it, each channel becomes (x/255 - mean_c) / std_c.
    """
    if target_side not in INPUT_SIDES:
        raise InvalidInput(f"target_side must be one of {INPUT_SIDES}, got {target_side}")
    resized = resize_bilinear(image.pixels, target_side, target_side)
    if normalize:
        mean = np.asarray(IMAGENET_MEAN, dtype=np.float64)
        std = np.asarray(IMAGENET_STD, dtype=np.float64)
        resized = (resized / 255.0 - mean) / std
    return resized.transpose(2, 0, 1).astype(np.float32)
