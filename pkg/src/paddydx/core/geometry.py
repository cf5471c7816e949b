"""Geometric primitives: normalized bounding boxes and geographic points."""

from __future__ import annotations

from dataclasses import dataclass

from paddydx.errors import InvalidInput


@dataclass(frozen=True)
class NormalizedBox:
    """Axis-aligned box as fractions of image dimensions.

    (cx, cy) is the box center, (w, h) the full extent. Centers must lie in
    [0, 1]; extents in (0, 1]. Corners may overhang the frame slightly
    (e.g. a wide box centered near an edge); consumers that need in-frame
    geometry clip explicitly.
    """

    cx: float
    cy: float
    w: float
    h: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.cx <= 1.0 and 0.0 <= self.cy <= 1.0):
            raise InvalidInput(f"box center out of range: ({self.cx}, {self.cy})")
        if not (0.0 < self.w <= 1.0 and 0.0 < self.h <= 1.0):
            raise InvalidInput(f"box extent out of range: ({self.w}, {self.h})")

    def corners(self) -> tuple[float, float, float, float]:
        """(x0, y0, x1, y1) in normalized coordinates."""
        return (
            self.cx - self.w / 2.0,
            self.cy - self.h / 2.0,
            self.cx + self.w / 2.0,
            self.cy + self.h / 2.0,
        )

    @property
    def area(self) -> float:
        return self.w * self.h

    def clamp(self) -> "NormalizedBox":
        """Clamp fields into their valid ranges. No-op on valid boxes."""
        return NormalizedBox(
            cx=min(max(self.cx, 0.0), 1.0),
            cy=min(max(self.cy, 0.0), 1.0),
            w=min(self.w, 1.0),
            h=min(self.h, 1.0),
        )

    @staticmethod
    def from_corners(x0: float, y0: float, x1: float, y1: float) -> "NormalizedBox":
        if x1 <= x0 or y1 <= y0:
            raise InvalidInput(f"degenerate corners: ({x0}, {y0}, {x1}, {y1})")
        return NormalizedBox(
            cx=(x0 + x1) / 2.0,
            cy=(y0 + y1) / 2.0,
            w=x1 - x0,
            h=y1 - y0,
        )


@dataclass(frozen=True)
class GeoPoint:
    latitude: float
    longitude: float

    def __post_init__(self) -> None:
        if not -90.0 <= self.latitude <= 90.0:
            raise InvalidInput(f"latitude out of range: {self.latitude}")
        if not -180.0 <= self.longitude <= 180.0:
            raise InvalidInput(f"longitude out of range: {self.longitude}")
