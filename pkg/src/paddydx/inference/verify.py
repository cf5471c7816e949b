"""Two-stage diagnosis: detector proposes, classifier verifies.

Each detection's region is cropped (expanded by a margin and clipped to
the frame), resized to the classifier's input side, and classified. The
detection is marked ``verified`` when the classifier agrees — its top
class maps to the detection's class, or it assigns that class at least
``agree_prob`` — and ``contested`` otherwise. Detections are never
dropped, rescored, or moved by verification.
"""

from __future__ import annotations

from paddydx.augment.preprocess import resize_uint8
from paddydx.core.image import RasterImage
from paddydx.core.taxonomy import detection_to_class_index
from paddydx.inference.backends import CLASSIFY, Detection, ImageInput, ModelBackend

DEFAULT_CROP_MARGIN = 0.10
DEFAULT_AGREE_PROB = 0.30


def crop_region(image: RasterImage, det: Detection, crop_margin: float) -> RasterImage:
    """Pixel crop of the detection box expanded by a per-side margin."""
    x0, y0, x1, y1 = det.box.corners()
    mx = crop_margin * det.box.w
    my = crop_margin * det.box.h
    px0 = max(int((x0 - mx) * image.width), 0)
    py0 = max(int((y0 - my) * image.height), 0)
    px1 = min(int(round((x1 + mx) * image.width)), image.width)
    py1 = min(int(round((y1 + my) * image.height)), image.height)
    px1 = max(px1, px0 + 1)
    py1 = max(py1, py0 + 1)
    return RasterImage(image.pixels[py0:py1, px0:px1].copy())


def verify_detections(
    image: ImageInput,
    dets: list[Detection],
    classifier: ModelBackend,
    crop_margin: float = DEFAULT_CROP_MARGIN,
    agree_prob: float = DEFAULT_AGREE_PROB,
) -> list[Detection]:
    classifier.require(CLASSIFY)
    out = []
    for det in dets:
        crop = crop_region(image.raster, det, crop_margin)
        crop = resize_uint8(crop, classifier.input_side)
        result = classifier.classify(ImageInput.from_raster(crop))
        mapped = detection_to_class_index(det.class_index)
        agrees = result.top_class == mapped or result.probs[mapped] >= agree_prob
        out.append(det.with_status("verified" if agrees else "contested"))
    return out
