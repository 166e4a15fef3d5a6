"""Small helpers for int-backed bit vectors."""

from __future__ import annotations

from typing import Iterable, Iterator


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_list(mask: int) -> list[int]:
    return list(iter_bits(mask))


def from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def full(n: int) -> int:
    return (1 << n) - 1


def lowest(mask: int) -> int:
    """Index of the least set bit; -1 for the empty mask."""
    return (mask & -mask).bit_length() - 1
