"""
Seed derivation and file checksums.
"""

import hashlib
from pathlib import Path

import numpy as np

SEED_BITS = 64


def trial_seed(base_seed: int, rho_index: int, trial_index: int) -> int:
    """Independent 64-bit seed for one (rho, trial) cell of a sweep."""
    ss = np.random.SeedSequence(base_seed, spawn_key=(rho_index, trial_index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sampling_rng(base_seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(base_seed, spawn_key=(0xA1,))))


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()

