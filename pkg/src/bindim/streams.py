"""Deterministic named RNG streams.

Every random choice in the package flows from one master seed plus a
sequence of tags (strings or integers) naming the purpose of the stream.
Two calls with the same seed and tags always yield the same generator, so
results are reproducible and independent of evaluation order.
"""
from __future__ import annotations

import hashlib

import numpy as np


def _tag_words(tags) -> list[int]:
    words = []
    for tag in tags:
        if isinstance(tag, (int, np.integer)):
            words.append(int(tag) & 0xFFFFFFFFFFFFFFFF)
        else:
            digest = hashlib.sha256(str(tag).encode("utf-8")).digest()
            words.append(int.from_bytes(digest[:8], "little"))
    return words


def derive_rng(seed: int, *tags) -> np.random.Generator:
    """Generator for the stream named by ``tags`` under ``seed``."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, *_tag_words(tags)]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def derive_seed(seed: int, *tags) -> int:
    """Integer sub-seed for the stream named by ``tags`` under ``seed``."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, *_tag_words(tags)]
    state = np.random.SeedSequence(entropy).generate_state(1, np.uint64)
    return int(state[0])
