"""Counter-based normal variates.

Every variate is a pure function of (seed, stream, block, position): a Philox
generator keyed by ``(seed, stream)`` with its counter set to the block index
supplies one 64-bit word per variate, mapped through the inverse normal CDF.
Experiments are laid out in fixed-size blocks, so a given experiment's draws
never depend on how many workers produced them or in which order.
"""

import secrets

import numpy as np
from scipy.special import ndtri

__all__ = ["BLOCK_SIZE", "fresh_seed", "normal_block", "blocks"]

BLOCK_SIZE = 512
_MASK64 = (1 << 64) - 1


def fresh_seed():
    return secrets.randbits(63)


def _generator(seed, stream, block):
    return np.random.Philox(key=[seed & _MASK64, stream & _MASK64], counter=[0, 0, block, 0])


def normal_block(seed, block, n_rows, n_cols, stream=0):
    """``(n_rows, n_cols)`` standard normals for experiments starting at
    ``block * BLOCK_SIZE``."""
    raw = _generator(seed, stream, block).random_raw(n_rows * n_cols)
    u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53
    return ndtri(u).reshape(n_rows, n_cols)


def blocks(k):
    """``(block_index, n_rows)`` pairs covering ``k`` experiments."""
    full, rest = divmod(k, BLOCK_SIZE)
    out = [(b, BLOCK_SIZE) for b in range(full)]
    if rest:
        out.append((full, rest))
    return out
