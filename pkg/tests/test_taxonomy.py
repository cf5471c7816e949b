import pytest

from paddydx.core import taxonomy
from paddydx.errors import NotFound


def test_exactly_13_classes_with_unique_contiguous_indices():
    assert taxonomy.NUM_CLASSES == 13
    assert [c.index for c in taxonomy.CLASSES] == list(range(13))
    assert len({c.slug for c in taxonomy.CLASSES}) == 13


def test_indices_follow_lexicographic_slug_order():
    slugs = [c.slug for c in taxonomy.CLASSES]
    assert slugs == sorted(slugs)


def test_bacterial_leaf_blight_is_index_zero():
    # first slug lexicographically among the 13
    assert taxonomy.class_index("bacterial_leaf_blight") == 0


def test_round_trip_for_all_slugs():
    for c in taxonomy.CLASSES:
        assert taxonomy.index_to_slug(taxonomy.class_index(c.slug)) == c.slug


def test_unknown_slug_raises():
    with pytest.raises(NotFound):
        taxonomy.class_index("rice_smut")


def test_out_of_range_index_raises():
    with pytest.raises(NotFound):
        taxonomy.get_class(13)
    with pytest.raises(NotFound):
        taxonomy.get_class(-1)


def test_pathogen_kinds_match_paper_grouping():
    assert taxonomy.pathogen_kind(taxonomy.class_index("tungro")) == "viral"
    assert taxonomy.pathogen_kind(taxonomy.class_index("brown_spot")) == "fungal"
    assert taxonomy.pathogen_kind(taxonomy.class_index("normal")) == "none"
    assert taxonomy.pathogen_kind(taxonomy.class_index("bacterial_leaf_streak")) == "bacterial"
    assert taxonomy.pathogen_kind(taxonomy.class_index("hispa")) == "pest"


def test_pathogen_partition_counts():
    kinds = [c.pathogen_kind for c in taxonomy.CLASSES if c.slug != "normal"]
    assert kinds.count("fungal") == 3
    assert kinds.count("bacterial") == 3
    assert kinds.count("viral") == 1
    assert kinds.count("pest") == 5


def test_normal_is_unique_none_kind():
    nones = [c for c in taxonomy.CLASSES if c.pathogen_kind == "none"]
    assert [c.slug for c in nones] == ["normal"]


def test_detection_space_excludes_normal():
    assert taxonomy.NUM_DETECTION_CLASSES == 12
    assert all(c.slug != "normal" for c in taxonomy.DETECTION_CLASSES)


def test_detection_to_classification_mapping_is_by_slug():
    for i, c in enumerate(taxonomy.DETECTION_CLASSES):
        assert taxonomy.detection_to_class_index(i) == taxonomy.class_index(c.slug)
    with pytest.raises(NotFound):
        taxonomy.detection_index("normal")
