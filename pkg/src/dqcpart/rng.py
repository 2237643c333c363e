"""Seed derivation and the shared counter-based generator."""

import hashlib

import numpy as np


def derive_seed(*parts) -> int:
    """Hash an arbitrary tuple of seeds/labels into a 64-bit seed."""
    h = hashlib.blake2b(digest_size=8)
    for p in parts:
        h.update(repr(p).encode())
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "little")


def make_rng(seed: int, *labels) -> np.random.Generator:
    """Philox generator keyed by ``seed`` and optional sub-stream labels."""
    if labels:
        seed = derive_seed(seed, *labels)
    return np.random.Generator(np.random.Philox(seed))
