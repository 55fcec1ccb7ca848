"""Counter-based uniforms for reproducible, parallel-safe chains.

Every block of sweeps draws from a Philox stream keyed by (seed, chain id)
with the block index in the counter, so each (seed, chain, sweep, site)
address maps to one fixed uniform regardless of how many chains run in
parallel or how the sweeps are batched at runtime.
"""

from __future__ import annotations

import numpy as np


def sweep_uniforms(seed: int, chain_id: int, block: int, sweeps: int,
                   nsites: int) -> np.ndarray:
    """Uniforms for ``sweeps`` consecutive sweeps starting at block ``block``.

    Returns an array of shape (sweeps, nsites); row i belongs to sweep
    ``block * sweeps + i`` when blocks are consumed contiguously.
    """
    bg = np.random.Philox(key=np.array([seed & 0xFFFFFFFFFFFFFFFF,
                                        chain_id & 0xFFFFFFFFFFFFFFFF],
                                       dtype=np.uint64),
                          counter=np.array([0, 0, block, 0], dtype=np.uint64))
    return np.random.Generator(bg).random((sweeps, nsites))


def derive_chain_id(*parts: int) -> int:
    """Mix cell/replicate indices into one 64-bit chain id (splitmix-style)."""
    acc = 0x9E3779B97F4A7C15
    for p in parts:
        acc ^= (p & 0xFFFFFFFFFFFFFFFF) + 0x9E3779B97F4A7C15 + ((acc << 6) & 0xFFFFFFFFFFFFFFFF) + (acc >> 2)
        acc &= 0xFFFFFFFFFFFFFFFF
        acc = (acc * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
        acc ^= acc >> 31
    return acc
