"""Model backend abstraction and inference result types.

Backends are pluggable: anything advertising the ``classify`` capability
returns a 13-class probability vector; anything advertising ``detect``
returns raw detections (pre-filter, pre-NMS) in the 12-class detection
index space. Trained-weight backends plug in behind this same boundary.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

from paddydx.core.geometry import NormalizedBox
from paddydx.core.image import RasterImage, decode_image, encode_png
from paddydx.core.taxonomy import NUM_CLASSES
from paddydx.errors import InvalidInput, Unsupported

CLASSIFY = "classify"
DETECT = "detect"

DETECTION_STATUSES = ("raw", "kept", "verified", "contested")


class ImageInput:
    """Image bytes plus lazily-decoded raster; digest identifies content."""

    def __init__(self, data: bytes):
        self.data = data
        self.digest = hashlib.sha256(data).hexdigest()
        self._raster: RasterImage | None = None

    @property
    def raster(self) -> RasterImage:
        if self._raster is None:
            self._raster = decode_image(self.data)
        return self._raster

    @classmethod
    def from_raster(cls, image: RasterImage) -> "ImageInput":
        inp = cls(encode_png(image))
        inp._raster = image
        return inp


@dataclass(frozen=True)
class ClassificationResult:
    probs: tuple[float, ...]
    top_class: int
    top_prob: float

    def __post_init__(self) -> None:
        if len(self.probs) != NUM_CLASSES:
            raise InvalidInput(f"expected {NUM_CLASSES} probabilities, got {len(self.probs)}")
        if abs(sum(self.probs) - 1.0) > 1e-6:
            raise InvalidInput(f"probabilities sum to {sum(self.probs)}, expected 1")
        if self.top_class != max(range(NUM_CLASSES), key=lambda i: self.probs[i]):
            raise InvalidInput("top_class must be the argmax of probs")

    @classmethod
    def from_probs(cls, probs) -> "ClassificationResult":
        probs = tuple(float(p) for p in probs)
        top = max(range(len(probs)), key=lambda i: probs[i])
        return cls(probs=probs, top_class=top, top_prob=probs[top])


@dataclass(frozen=True)
class Detection:
    class_index: int  # detection index space (0..11)
    confidence: float
    box: NormalizedBox
    status: str = "raw"

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise InvalidInput(f"confidence out of range: {self.confidence}")
        if self.status not in DETECTION_STATUSES:
            raise InvalidInput(f"unknown detection status: {self.status!r}")

    def with_status(self, status: str) -> "Detection":
        return replace(self, status=status)


@dataclass
class ModelBackend:
    """Base backend; subclasses implement the capabilities they declare."""

    backend_id: str
    version: str = "0"
    capabilities: frozenset[str] = field(default_factory=frozenset)
    input_side: int = 256

    def classify(self, image: ImageInput) -> ClassificationResult:
        raise Unsupported(f"backend {self.backend_id!r} cannot classify")

    def detect(self, image: ImageInput) -> list[Detection]:
        raise Unsupported(f"backend {self.backend_id!r} cannot detect")

    def require(self, capability: str) -> None:
        if capability not in self.capabilities:
            raise Unsupported(
                f"backend {self.backend_id!r} lacks the {capability!r} capability"
            )
