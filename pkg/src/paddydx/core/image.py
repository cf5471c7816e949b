"""8-bit RGB raster images and codec helpers."""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from paddydx.errors import InvalidInput, UnsupportedMedia


@dataclass(frozen=True)
class RasterImage:
    """Row-major HxWx3 uint8 pixel buffer."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        p = self.pixels
        if not isinstance(p, np.ndarray) or p.dtype != np.uint8 or p.ndim != 3 or p.shape[2] != 3:
            raise InvalidInput("pixels must be an HxWx3 uint8 array")
        if p.shape[0] < 1 or p.shape[1] < 1:
            raise InvalidInput("image dimensions must be >= 1")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @staticmethod
    def from_buffer(buffer: bytes, width: int, height: int) -> "RasterImage":
        if len(buffer) != width * height * 3:
            raise InvalidInput(
                f"buffer length {len(buffer)} != {width}x{height}x3"
            )
        arr = np.frombuffer(buffer, dtype=np.uint8).reshape(height, width, 3).copy()
        return RasterImage(arr)


SUPPORTED_FORMATS = ("JPEG", "PNG")


def decode_image(data: bytes) -> RasterImage:
    """Decode JPEG/PNG bytes into an RGB raster. Anything else is rejected."""
    try:
        with Image.open(io.BytesIO(data)) as im:
            if im.format not in SUPPORTED_FORMATS:
                raise UnsupportedMedia(f"unsupported image format: {im.format}")
            rgb = im.convert("RGB")
            return RasterImage(np.asarray(rgb, dtype=np.uint8).copy())
    except UnidentifiedImageError:
        raise UnsupportedMedia("bytes do not decode as JPEG or PNG") from None


def encode_png(image: RasterImage) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(image.pixels, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()
