"""Counter-based random number streams.

Every stochastic component draws from a Philox generator whose 128-bit key
is derived from a tuple of integer labels (seed, replicate, site, ...).
Streams with distinct labels are statistically independent, and a stream is
fully determined by its labels, so parallel or re-ordered execution cannot
change results.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    # Standard splitmix64 finalizer; good avalanche for key derivation.
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def stream_key(*labels: int) -> tuple[int, int]:
    """Hash a label tuple into a 128-bit Philox key (two 64-bit words)."""
    h0 = 0x243F6A8885A308D3
    h1 = 0x13198A2E03707344
    for lab in labels:
        w = int(lab) & _MASK64
        h0 = _splitmix64(h0 ^ w)
        h1 = _splitmix64(h1 ^ (w ^ 0xA5A5A5A5A5A5A5A5))
    return h0, h1


def stream(*labels: int) -> np.random.Generator:
    """Independent generator keyed by the given integer labels."""
    k0, k1 = stream_key(*labels)
    return np.random.Generator(np.random.Philox(key=np.array([k0, k1], dtype=np.uint64)))
