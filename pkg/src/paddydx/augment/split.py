"""Deterministic train/test dataset splitting.

Splitting happens before augmentation, and augmentation is only ever
applied to the train partition, so no augmented item can leak test data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from paddydx.errors import InvalidInput


@dataclass(frozen=True)
class SplitManifest:
    train: tuple[str, ...]
    test: tuple[str, ...]
    seed: int
    ratio: float


def split_dataset(items: Sequence[str], ratio: float, seed: int) -> SplitManifest:
    """Seeded shuffle then partition: round(ratio * N) items go to train."""
    if not items:
        raise InvalidInput("cannot split an empty item list")
    if not 0.0 < ratio < 1.0:
        raise InvalidInput(f"ratio must lie in (0, 1), got {ratio}")
    if len(set(items)) != len(items):
        raise InvalidInput("item ids must be unique")
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    order = rng.permutation(len(items))
    shuffled = [items[i] for i in order]
    n_train = int(round(ratio * len(items)))
    return SplitManifest(
        train=tuple(shuffled[:n_train]),
        test=tuple(shuffled[n_train:]),
        seed=seed,
        ratio=ratio,
    )
