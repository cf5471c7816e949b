import pytest
from hypothesis import given
from hypothesis import strategies as st

from paddydx.core.geometry import GeoPoint, NormalizedBox
from paddydx.errors import InvalidInput

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
extent = st.floats(min_value=1e-6, max_value=1.0, allow_nan=False, exclude_min=False)


@given(cx=unit, cy=unit, w=extent, h=extent)
def test_clamping_is_noop_on_valid_boxes(cx, cy, w, h):
    box = NormalizedBox(cx=cx, cy=cy, w=w, h=h)
    assert box.clamp() == box


def test_zero_extent_rejected():
    with pytest.raises(InvalidInput):
        NormalizedBox(cx=0.5, cy=0.5, w=0.0, h=0.1)
    with pytest.raises(InvalidInput):
        NormalizedBox(cx=0.5, cy=0.5, w=0.1, h=0.0)


def test_center_out_of_range_rejected():
    with pytest.raises(InvalidInput):
        NormalizedBox(cx=1.2, cy=0.5, w=0.1, h=0.1)
    with pytest.raises(InvalidInput):
        NormalizedBox(cx=0.5, cy=-0.1, w=0.1, h=0.1)


def test_corner_round_trip():
    box = NormalizedBox(cx=0.5, cy=0.25, w=0.5, h=0.5)
    assert NormalizedBox.from_corners(*box.corners()) == box


def test_from_corners_rejects_degenerate():
    with pytest.raises(InvalidInput):
        NormalizedBox.from_corners(0.5, 0.2, 0.5, 0.4)


def test_geopoint_ranges():
    GeoPoint(latitude=90.0, longitude=-180.0)
    with pytest.raises(InvalidInput):
        GeoPoint(latitude=90.5, longitude=0.0)
    with pytest.raises(InvalidInput):
        GeoPoint(latitude=0.0, longitude=181.0)
