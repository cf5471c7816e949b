import numpy as np
import pytest

from paddydx.core.image import RasterImage
from paddydx.inference.backends import (
    CLASSIFY,
    ClassificationResult,
    ImageInput,
    ModelBackend,
)


def random_image(rng: np.random.Generator, height: int = 48, width: int = 64) -> RasterImage:
    return RasterImage(rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


class StaticClassifier(ModelBackend):
    """Classifier stub returning one fixed probability vector for any input."""

    def __init__(self, probs, backend_id="static-classifier"):
        super().__init__(
            backend_id=backend_id,
            version="1",
            capabilities=frozenset({CLASSIFY}),
            input_side=256,
        )
        self._result = ClassificationResult.from_probs(probs)

    def classify(self, image: ImageInput) -> ClassificationResult:
        return self._result


def one_hot_probs(index: int, num_classes: int = 13, top: float = 0.9):
    rest = (1.0 - top) / (num_classes - 1)
    return [top if i == index else rest for i in range(num_classes)]
