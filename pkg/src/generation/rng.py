"""
Random streams.

Every draw comes from numpy's Philox counter-based bit generator
(Philox-4x64, 10 rounds) seeded through a SeedSequence. A stream is addressed
by a base seed plus a spawn key, so (seed, cell, trial) tuples map to
independent streams without sharing sequential state.
"""

import zlib
from typing import Tuple, Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence]

GENERATOR_NAME = "numpy.random.Philox (Philox-4x64-10) via SeedSequence"

# Spawn-key slot used instead of the p index when designs are nested across p.
NESTED_P = 2**32 - 1


def make_generator(seed: SeedLike) -> np.random.Generator:
    """Philox-backed Generator for an integer seed or SeedSequence."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.Philox(seed))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


def figure_key(name: str) -> int:
    """Stable 32-bit key for a preset name (CRC-32)."""
    return zlib.crc32(name.encode("utf-8"))


def trial_stream(
    base_seed: int, figure: str, n_index: int, p_index: int, trial: int
) -> np.random.SeedSequence:
    """SeedSequence for one trial of one cell."""
    return np.random.SeedSequence(
        entropy=int(base_seed), spawn_key=(figure_key(figure), n_index, p_index, trial)
    )


def instance_streams(
    stream: np.random.SeedSequence,
) -> Tuple[np.random.SeedSequence, np.random.SeedSequence, np.random.SeedSequence]:
    """Independent child streams for design, ground truth and noise."""
    design, truth, noise = stream.spawn(3)
    return design, truth, noise
