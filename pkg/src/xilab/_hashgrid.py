"""Numba building blocks shared by the sampling and scanning kernels.

The spatial hash maps one lattice point to one cell: coordinates are
packed into a single uint64 (32 bits each, two's complement), which is
injective for |x|, |y| < 2**31, and stored in an open-addressing table
with linear probing.  Tables are cleared in O(1) between samples by
stamping each slot with the epoch that wrote it.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U64 = np.uint64

_GAMMA = U64(0x9E3779B97F4A7C15)
_MIX1 = U64(0xBF58476D1CE4E5B9)
_MIX2 = U64(0x94D049BB133111EB)
_LOW32 = U64(0xFFFFFFFF)


@njit(inline="always")
def mix64(z):
    z = (z ^ (z >> U64(30))) * _MIX1
    z = (z ^ (z >> U64(27))) * _MIX2
    return z ^ (z >> U64(31))


@njit(inline="always")
def stream_key(seed, stream):
    master = mix64(U64(seed) + _GAMMA)
    return mix64(master + U64(stream) * _GAMMA)


@njit(inline="always")
def raw_draw(key, counter):
    return mix64(U64(key) + (U64(counter) + U64(1)) * _GAMMA)


@njit(inline="always")
def pack_point(x, y):
    return ((U64(x) & _LOW32) << U64(32)) | (U64(y) & _LOW32)


@njit(inline="always")
def grid_insert(keys, stamps, mask, epoch, k):
    i = np.int64(mix64(k)) & mask
    while True:
        if stamps[i] != epoch:
            stamps[i] = epoch
            keys[i] = k
            return
        if keys[i] == k:
            return
        i = (i + 1) & mask


@njit(inline="always")
def grid_contains(keys, stamps, mask, epoch, k):
    i = np.int64(mix64(k)) & mask
    while True:
        if stamps[i] != epoch:
            return False
        if keys[i] == k:
            return True
        i = (i + 1) & mask


def table_capacity(expected_inserts: int) -> int:
    """Power-of-two capacity keeping the load factor under ~1/3."""
    cap = 64
    while cap < 3 * max(1, expected_inserts):
        cap *= 2
    return cap
