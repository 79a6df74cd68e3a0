"""Counter-based random number streams for reproducible parallel sampling.

The generator is the SplitMix64 sequence: output ``i`` of the stream with
key ``k`` is ``mix64(k + (i + 1) * GAMMA)`` where ``mix64`` is the Stafford
"mix13" finalizer.  Because each output depends only on (key, counter),
any draw can be regenerated in O(1) from its index, so walks can be
extended, replayed or sharded across workers without carrying generator
state around.

Streams are addressed by (seed, stream id).  The engine assigns stream id
= sample index, which makes every Monte Carlo sample bit-reproducible no
matter how samples are batched over workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_M64 = (1 << 64) - 1

GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """Stafford mix13 finalizer on 64-bit integers."""
    z &= _M64
    z = ((z ^ (z >> 30)) * _MIX1) & _M64
    z = ((z ^ (z >> 27)) * _MIX2) & _M64
    return z ^ (z >> 31)


def stream_key(seed: int, stream: int) -> int:
    """Derive the 64-bit key of stream ``stream`` under master ``seed``.

    Keys are the SplitMix64 outputs of a master sequence seeded with
    ``mix64(seed + GAMMA)``, so distinct (seed, stream) pairs map to
    well-separated keys.
    """
    master = mix64((seed + GAMMA) & _M64)
    return mix64((master + (stream & _M64) * GAMMA) & _M64)


def raw(key: int, counter: int) -> int:
    """Output ``counter`` (0-based) of the stream with the given key."""
    return mix64((key + (counter + 1) * GAMMA) & _M64)


def raw_block(key: int, start: int, n: int) -> np.ndarray:
    """Vectorized ``raw`` for counters start..start+n-1 (uint64 array)."""
    c = np.arange(start + 1, start + n + 1, dtype=np.uint64)
    z = np.uint64(key) + c * np.uint64(GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


@dataclass(frozen=True)
class Stream:
    """A deterministic, randomly-accessible draw stream."""

    seed: int
    stream: int = 0

    @property
    def key(self) -> int:
        return stream_key(self.seed, self.stream)

    def draw(self, counter: int) -> int:
        return raw(self.key, counter)

    def block(self, start: int, n: int) -> np.ndarray:
        return raw_block(self.key, start, n)

    def directions(self, start: int, n: int) -> np.ndarray:
        """Uniform direction indices in {0,1,2,3} for steps start..start+n-1."""
        return (self.block(start, n) & np.uint64(3)).astype(np.int64)
