import numpy as np
import pytest
from shapely.geometry import box as shapely_box

from conftest import random_image
from paddydx.augment.transforms import (
    AnnotatedImage,
    AugmentConfig,
    TransformSpec,
    affine_matrix,
    apply_transform,
    random_transform,
    transform_box,
)
from paddydx.core.geometry import NormalizedBox
from paddydx.errors import InvalidInput


def oracle_visibility(box: NormalizedBox, matrix, width, height) -> float:
    """Polygon-clipping visibility: clipped hull area / unclipped hull area."""
    x0, y0, x1, y1 = box.corners()
    pts = []
    for x, y in ((x0, y0), (x1, y0), (x0, y1), (x1, y1)):
        px, py = x * width, y * height
        pts.append(
            (
                matrix[0][0] * px + matrix[0][1] * py + matrix[0][2],
                matrix[1][0] * px + matrix[1][1] * py + matrix[1][2],
            )
        )
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    hull = shapely_box(min(xs), min(ys), max(xs), max(ys))
    frame = shapely_box(0.0, 0.0, float(width), float(height))
    if hull.area == 0.0:
        return 0.0
    return hull.intersection(frame).area / hull.area


def grid_box(rng) -> NormalizedBox:
    """Random in-frame box with 1e-6-grid coordinates, as annotation files carry."""
    w = round(float(rng.uniform(0.05, 0.4)), 6)
    h = round(float(rng.uniform(0.05, 0.4)), 6)
    cx = round(float(rng.uniform(w / 2, 1 - w / 2)), 6)
    cy = round(float(rng.uniform(h / 2, 1 - h / 2)), 6)
    return NormalizedBox(cx=cx, cy=cy, w=w, h=h)


class TestTransformSpec:
    def test_field_ranges(self):
        with pytest.raises(InvalidInput):
            TransformSpec(rotation=181.0)
        with pytest.raises(InvalidInput):
            TransformSpec(brightness_delta=1.5)
        with pytest.raises(InvalidInput):
            TransformSpec(shear_x=90.0)

    def test_identity_detection(self):
        assert TransformSpec().is_identity
        assert not TransformSpec(hflip=True).is_identity
        assert not TransformSpec(brightness_delta=0.1).is_identity


class TestRandomTransform:
    def test_determinism(self):
        config = AugmentConfig(seed=77)
        assert random_transform(config, 3) == random_transform(config, 3)
        assert random_transform(config, 3) != random_transform(config, 4)

    def test_zero_width_ranges_give_identity_geometry(self):
        config = AugmentConfig(
            rotation_range=(0.0, 0.0),
            brightness_range=(0.0, 0.0),
            shear_range=(0.0, 0.0),
            flip_probabilities=(0.0, 0.0),
            seed=5,
        )
        spec = random_transform(config, 0)
        assert spec.is_identity

    def test_thousand_draws_stay_in_ranges(self):
        config = AugmentConfig(seed=11)
        for i in range(1000):
            spec = random_transform(config, i)
            assert -30.0 <= spec.rotation <= 30.0
            assert -0.2 <= spec.brightness_delta <= 0.2
            assert -10.0 <= spec.shear_x <= 10.0

    def test_ranges_must_contain_zero(self):
        with pytest.raises(InvalidInput):
            AugmentConfig(rotation_range=(5.0, 10.0))


class TestApplyTransform:
    def test_identity_is_bit_for_bit(self, rng):
        ann = AnnotatedImage(image=random_image(rng), boxes=((0, grid_box(rng)),))
        out = apply_transform(ann, TransformSpec())
        assert out is ann

    def test_brightness_only_leaves_boxes_untouched(self, rng):
        box = grid_box(rng)
        ann = AnnotatedImage(image=random_image(rng), boxes=((3, box),))
        out = apply_transform(ann, TransformSpec(brightness_delta=0.1))
        assert out.boxes == ((3, box),)
        delta = out.image.pixels.astype(int) - ann.image.pixels.astype(int)
        assert delta.max() <= 26 and delta.min() >= 0

    def test_brightness_clamps(self, rng):
        ann = AnnotatedImage(image=random_image(rng), boxes=())
        bright = apply_transform(ann, TransformSpec(brightness_delta=1.0))
        assert np.all(bright.image.pixels == 255)

    def test_hflip_moves_box_center(self, rng):
        box = NormalizedBox(cx=0.2, cy=0.5, w=0.1, h=0.1)
        ann = AnnotatedImage(image=random_image(rng), boxes=((1, box),))
        out = apply_transform(ann, TransformSpec(hflip=True))
        ((cls, moved),) = out.boxes
        assert cls == 1
        assert moved.cx == pytest.approx(0.8, abs=1e-12)
        assert (moved.cy, moved.w, moved.h) == (0.5, 0.1, 0.1)

    def test_hflip_mirrors_pixels(self, rng):
        ann = AnnotatedImage(image=random_image(rng), boxes=())
        out = apply_transform(ann, TransformSpec(hflip=True))
        assert np.array_equal(out.image.pixels, ann.image.pixels[:, ::-1])

    def test_double_hflip_restores_boxes_exactly(self, rng):
        spec = TransformSpec(hflip=True)
        for _ in range(50):
            box = grid_box(rng)
            ann = AnnotatedImage(image=random_image(rng), boxes=((2, box),))
            twice = apply_transform(apply_transform(ann, spec), spec)
            assert twice.boxes == ((2, box),)

    def test_low_visibility_box_dropped(self, rng):
        # 500x100 frame, full-width thin box, rotated 90 degrees: only 100 of
        # its 500-pixel hull stays in frame -> visibility 0.2
        image = random_image(rng, height=100, width=500)
        box = NormalizedBox(cx=0.5, cy=0.5, w=1.0, h=0.2)
        ann = AnnotatedImage(image=image, boxes=((0, box),))
        dropped = apply_transform(ann, TransformSpec(rotation=90.0), min_visibility=0.30)
        assert dropped.boxes == ()
        kept = apply_transform(ann, TransformSpec(rotation=90.0), min_visibility=0.15)
        assert len(kept.boxes) == 1
        survivor = kept.boxes[0][1]
        assert survivor.w == pytest.approx(0.04, abs=1e-6)
        assert survivor.h == pytest.approx(1.0, abs=1e-6)

    def test_survival_matches_polygon_clipping_oracle(self, rng):
        config = AugmentConfig(seed=21)
        image = random_image(rng, height=60, width=90)
        for i in range(200):
            spec = random_transform(config, i)
            if not spec.moves_geometry:
                continue
            box = grid_box(rng)
            matrix = affine_matrix(spec, image.width, image.height)
            visibility = oracle_visibility(box, matrix, image.width, image.height)
            if abs(visibility - 0.30) < 1e-9:
                continue
            moved = transform_box(box, matrix, image.width, image.height, 0.30)
            assert (moved is not None) == (visibility >= 0.30)

    def test_visibility_monotonicity(self, rng):
        config = AugmentConfig(seed=31)
        image = random_image(rng, height=64, width=64)
        boxes = tuple((0, grid_box(rng)) for _ in range(6))
        ann = AnnotatedImage(image=image, boxes=boxes)
        for i in range(50):
            spec = random_transform(config, i)
            counts = [
                len(apply_transform(ann, spec, min_visibility=v).boxes)
                for v in (0.1, 0.3, 0.6, 0.9)
            ]
            assert counts == sorted(counts, reverse=True)

    def test_survivors_are_valid_and_in_frame(self, rng):
        config = AugmentConfig(seed=41)
        image = random_image(rng)
        ann = AnnotatedImage(image=image, boxes=tuple((1, grid_box(rng)) for _ in range(5)))
        for i in range(100):
            out = apply_transform(ann, random_transform(config, i), 0.30)
            for _, b in out.boxes:
                x0, y0, x1, y1 = b.corners()
                assert -1e-9 <= x0 < x1 <= 1.0 + 1e-9
                assert -1e-9 <= y0 < y1 <= 1.0 + 1e-9

    def test_rotation_warp_fills_corners_black(self, rng):
        ann = AnnotatedImage(image=random_image(rng, height=40, width=40), boxes=())
        out = apply_transform(ann, TransformSpec(rotation=45.0))
        assert tuple(out.image.pixels[0, 0]) == (0, 0, 0)
