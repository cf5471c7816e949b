#!/usr/bin/env python3
"""Generate a synthetic directory-per-class dataset for exercising the CLI.

Images are random-noise PNGs with a saturated patch (so the heuristic
backend finds something); each gets a sibling annotation file boxing the
patch. Use the output with `paddydx dataset stats|split|augment`.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from paddydx.core.image import RasterImage, encode_png
from paddydx.core.taxonomy import CLASSES, detection_index


def synth_image(rng, height, width, hue_angle):
    pixels = rng.integers(20, 90, size=(height, width, 3), dtype=np.uint8)
    # one saturated patch whose color loosely tracks the class
    ph, pw = height // 3, width // 3
    y0 = int(rng.integers(0, height - ph))
    x0 = int(rng.integers(0, width - pw))
    channel = int(hue_angle) % 3
    patch = np.full((ph, pw, 3), 30, dtype=np.uint8)
    patch[:, :, channel] = 220
    pixels[y0 : y0 + ph, x0 : x0 + pw] = patch
    cx = (x0 + pw / 2) / width
    cy = (y0 + ph / 2) / height
    return RasterImage(pixels), (cx, cy, pw / width, ph / height)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("out_dir", type=Path)
    parser.add_argument("--per-class", type=int, default=4)
    parser.add_argument("--size", type=int, default=96)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    total = 0
    for i, cls in enumerate(CLASSES):
        class_dir = args.out_dir / cls.slug
        class_dir.mkdir(parents=True, exist_ok=True)
        for k in range(args.per_class):
            image, (cx, cy, w, h) = synth_image(rng, args.size, args.size, i)
            (class_dir / f"img{k}.png").write_bytes(encode_png(image))
            if cls.slug != "normal":
                det_cls = detection_index(cls.slug)
                (class_dir / f"img{k}.txt").write_text(
                    f"{det_cls} {cx:.6f} {cy:.6f} {w:.6f} {h:.6f}\n"
                )
            total += 1
    print(f"wrote {total} images under {args.out_dir}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
