"""Fixture backend: replays canned outputs keyed by image content digest.

The store file is JSON with two maps, both keyed by the lowercase hex
SHA-256 of the image bytes::

    {
      "classify": {"<digest>": {"probs": [p0, ..., p12]}},
      "detect":   {"<digest>": [{"class": i, "conf": c, "box": [cx, cy, w, h]}]}
    }

This makes the platform deterministic and testable without trained weights.
"""

from __future__ import annotations

import json
from pathlib import Path

from paddydx.core.geometry import NormalizedBox
from paddydx.core.taxonomy import NUM_DETECTION_CLASSES
from paddydx.errors import FixtureMiss, InvalidInput
from paddydx.inference.backends import (
    CLASSIFY,
    DETECT,
    ClassificationResult,
    Detection,
    ImageInput,
    ModelBackend,
)


class FixtureStore:
    def __init__(
        self,
        classify: dict[str, ClassificationResult] | None = None,
        detect: dict[str, tuple[Detection, ...]] | None = None,
    ):
        self.classify_map = dict(classify or {})
        self.detect_map = dict(detect or {})

    @staticmethod
    def from_dict(doc: dict) -> "FixtureStore":
        classify = {}
        for digest, entry in doc.get("classify", {}).items():
            classify[digest] = ClassificationResult.from_probs(entry["probs"])
        detect = {}
        for digest, entries in doc.get("detect", {}).items():
            dets = []
            for d in entries:
                cls = int(d["class"])
                if not 0 <= cls < NUM_DETECTION_CLASSES:
                    raise InvalidInput(f"fixture detection class out of range: {cls}")
                cx, cy, w, h = d["box"]
                dets.append(
                    Detection(
                        class_index=cls,
                        confidence=float(d["conf"]),
                        box=NormalizedBox(cx=cx, cy=cy, w=w, h=h),
                    )
                )
            detect[digest] = tuple(dets)
        return FixtureStore(classify=classify, detect=detect)

    @staticmethod
    def load(path: str | Path) -> "FixtureStore":
        return FixtureStore.from_dict(json.loads(Path(path).read_text("utf-8")))

    def to_dict(self) -> dict:
        return {
            "classify": {
                digest: {"probs": list(result.probs)}
                for digest, result in sorted(self.classify_map.items())
            },
            "detect": {
                digest: [
                    {
                        "class": d.class_index,
                        "conf": d.confidence,
                        "box": [d.box.cx, d.box.cy, d.box.w, d.box.h],
                    }
                    for d in dets
                ]
                for digest, dets in sorted(self.detect_map.items())
            },
        }

    def save(self, path: str | Path) -> None:
        # sort_keys + fixed separators keep regeneration byte-identical
        Path(path).write_text(
            json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", "utf-8"
        )


class FixtureBackend(ModelBackend):
    def __init__(self, store: FixtureStore, backend_id: str = "fixture", version: str = "1"):
        super().__init__(
            backend_id=backend_id,
            version=version,
            capabilities=frozenset({CLASSIFY, DETECT}),
            input_side=256,
        )
        self.store = store

    def classify(self, image: ImageInput) -> ClassificationResult:
        result = self.store.classify_map.get(image.digest)
        if result is None:
            raise FixtureMiss(f"no classification fixture for digest {image.digest}")
        return result

    def detect(self, image: ImageInput) -> list[Detection]:
        dets = self.store.detect_map.get(image.digest)
        if dets is None:
            raise FixtureMiss(f"no detection fixture for digest {image.digest}")
        return list(dets)
