"""Hierarchical seed derivation: one master seed fans out to named sub-streams.

Every random stage derives its generator as rng_for(master, "stage", index, ...)
so runs are reproducible bit-exactly from the master seed alone and stages stay
independent of each other's draw counts.
"""
from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(master: int, *labels) -> int:
    """Map (master seed, label path) to a stable 64-bit sub-seed."""
    h = hashlib.sha256()
    h.update(str(int(master)).encode())
    for label in labels:
        h.update(b"/")
        h.update(str(label).encode())
    return int.from_bytes(h.digest()[:8], "little")


def rng_for(master: int, *labels) -> np.random.Generator:
    """Seeded generator for one named stage of a run."""
    return np.random.default_rng(derive_seed(master, *labels))
