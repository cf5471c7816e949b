from paddydx.inference.backends import (
    CLASSIFY,
    DETECT,
    ClassificationResult,
    Detection,
    ImageInput,
    ModelBackend,
)
from paddydx.inference.fixtures import FixtureBackend, FixtureStore
from paddydx.inference.heuristic import HeuristicBackend
from paddydx.inference.postprocess import (
    DEFAULT_CONF_THRESHOLD,
    DEFAULT_NMS_IOU,
    detect,
    nms,
)
from paddydx.inference.verify import (
    DEFAULT_AGREE_PROB,
    DEFAULT_CROP_MARGIN,
    crop_region,
    verify_detections,
)

__all__ = [
    "CLASSIFY",
    "DETECT",
    "DEFAULT_AGREE_PROB",
    "DEFAULT_CONF_THRESHOLD",
    "DEFAULT_CROP_MARGIN",
    "DEFAULT_NMS_IOU",
    "ClassificationResult",
    "Detection",
    "FixtureBackend",
    "FixtureStore",
    "HeuristicBackend",
    "ImageInput",
    "ModelBackend",
    "crop_region",
    "detect",
    "nms",
    "verify_detections",
]
