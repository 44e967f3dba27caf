"""Counter-based random streams: one Philox generator per (base seed, replica index)."""

import numpy as np

SEED_MASK = (1 << 64) - 1


def split_seed(base_seed, index):
    """Deterministic 64-bit child seed of ``base_seed`` for replica ``index``."""
    sequence = np.random.SeedSequence([int(base_seed) & SEED_MASK, int(index)])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def make_generator(seed):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed) & SEED_MASK)))

