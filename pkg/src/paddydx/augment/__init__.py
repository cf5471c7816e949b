from paddydx.augment.annotations import (
    ManifestRow,
    format_boxes,
    parse_boxes,
    read_annotation_file,
    read_manifest,
    write_annotation_file,
    write_manifest,
)
from paddydx.augment.preprocess import (
    IMAGENET_MEAN,
    IMAGENET_STD,
    INPUT_SIDES,
    preprocess,
    resize_bilinear,
    resize_uint8,
)
from paddydx.augment.split import SplitManifest, split_dataset
from paddydx.augment.transforms import (
    AnnotatedImage,
    AugmentConfig,
    TransformSpec,
    affine_matrix,
    apply_transform,
    random_transform,
    transform_box,
)

__all__ = [
    "AnnotatedImage",
    "AugmentConfig",
    "IMAGENET_MEAN",
    "IMAGENET_STD",
    "INPUT_SIDES",
    "ManifestRow",
    "SplitManifest",
    "TransformSpec",
    "affine_matrix",
    "apply_transform",
    "format_boxes",
    "parse_boxes",
    "preprocess",
    "random_transform",
    "read_annotation_file",
    "read_manifest",
    "resize_bilinear",
    "resize_uint8",
    "split_dataset",
    "transform_box",
    "write_annotation_file",
    "write_manifest",
]
