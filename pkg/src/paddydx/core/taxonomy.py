"""Canonical 13-class paddy disease taxonomy.

The class list is fixed: one healthy class (``normal``) plus 12 diseases
grouped by pathogen kind (3 fungal, 3 bacterial, 1 viral, 5 pest).
Indices are assigned by lexicographic slug order, which makes them
deterministic and reproducible everywhere (reports, annotation files,
probability vectors).

Detection models operate on the 12 disease classes only; classification
models see all 13. Use the ``detection_*`` helpers to move between the
two index spaces (mapping is by identical slug).
"""

from __future__ import annotations

from dataclasses import dataclass

from paddydx.errors import NotFound

PATHOGEN_KINDS = ("fungal", "bacterial", "viral", "pest", "none")


@dataclass(frozen=True)
class DiseaseClass:
    index: int
    slug: str
    display_name: str
    pathogen_kind: str


_RAW = [
    # slug, display name, pathogen kind
    ("bacterial_leaf_blight", "Bacterial Leaf Blight", "bacterial"),
    ("bacterial_leaf_streak", "Bacterial Leaf Streak", "bacterial"),
    ("bacterial_panicle_blight", "Bacterial Panicle Blight", "bacterial"),
    ("black_stem_borer", "Black Stem Borer", "pest"),
    ("blast", "Blast", "fungal"),
    ("brown_spot", "Brown Spot", "fungal"),
    ("downy_mildew", "Downy Mildew", "fungal"),
    ("hispa", "Hispa", "pest"),
    ("leaf_roller", "Leaf Roller", "pest"),
    ("normal", "Normal", "none"),
    ("tungro", "Tungro", "viral"),
    ("white_stem_borer", "White Stem Borer", "pest"),
    ("yellow_stem_borer", "Yellow Stem Borer", "pest"),
]

assert [slug for slug, _, _ in _RAW] == sorted(slug for slug, _, _ in _RAW)

CLASSES: tuple[DiseaseClass, ...] = tuple(
    DiseaseClass(index=i, slug=slug, display_name=name, pathogen_kind=kind)
    for i, (slug, name, kind) in enumerate(_RAW)
)

NUM_CLASSES = len(CLASSES)  # 13

_BY_SLUG = {c.slug: c for c in CLASSES}

# Detection index space: the 12 disease classes, still in slug order.
DETECTION_CLASSES: tuple[DiseaseClass, ...] = tuple(
    c for c in CLASSES if c.slug != "normal"
)
NUM_DETECTION_CLASSES = len(DETECTION_CLASSES)  # 12

_DETECTION_BY_SLUG = {c.slug: i for i, c in enumerate(DETECTION_CLASSES)}


def class_index(slug: str) -> int:
    """Classification index (0..12) of a slug; raises NotFound for unknown slugs."""
    try:
        return _BY_SLUG[slug].index
    except KeyError:
        raise NotFound(f"unknown disease class slug: {slug!r}") from None


def index_to_slug(index: int) -> str:
    return get_class(index).slug


def get_class(index: int) -> DiseaseClass:
    if not 0 <= index < NUM_CLASSES:
        raise NotFound(f"class index out of range: {index}")
    return CLASSES[index]


def pathogen_kind(index: int) -> str:
    return get_class(index).pathogen_kind


def detection_index(slug: str) -> int:
    """Detection index (0..11) of a disease slug; ``normal`` is not detectable."""
    try:
        return _DETECTION_BY_SLUG[slug]
    except KeyError:
        raise NotFound(f"not a detection class slug: {slug!r}") from None


def detection_class(index: int) -> DiseaseClass:
    if not 0 <= index < NUM_DETECTION_CLASSES:
        raise NotFound(f"detection class index out of range: {index}")
    return DETECTION_CLASSES[index]


def detection_to_class_index(detection_idx: int) -> int:
    """Map a detection-space index to the 13-class classification index."""
    return detection_class(detection_idx).index
