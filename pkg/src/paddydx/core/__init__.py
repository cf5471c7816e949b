from paddydx.core.geometry import GeoPoint, NormalizedBox
from paddydx.core.image import RasterImage, decode_image, encode_png
from paddydx.core.taxonomy import (
    CLASSES,
    DETECTION_CLASSES,
    NUM_CLASSES,
    NUM_DETECTION_CLASSES,
    DiseaseClass,
    class_index,
    detection_class,
    detection_index,
    detection_to_class_index,
    get_class,
    index_to_slug,
    pathogen_kind,
)
from paddydx.core.treatments import TreatmentEntry, TreatmentKB, load_kb, treatment_for

__all__ = [
    "CLASSES",
    "DETECTION_CLASSES",
    "NUM_CLASSES",
    "NUM_DETECTION_CLASSES",
    "DiseaseClass",
    "GeoPoint",
    "NormalizedBox",
    "RasterImage",
    "TreatmentEntry",
    "TreatmentKB",
    "class_index",
    "decode_image",
    "detection_class",
    "detection_index",
    "detection_to_class_index",
    "encode_png",
    "get_class",
    "index_to_slug",
    "load_kb",
    "pathogen_kind",
    "treatment_for",
]
