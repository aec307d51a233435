"""Bitmask helpers: worker subsets are encoded as ints, bit j set iff worker j is in the set."""

from typing import Iterable, List, Sequence


def mask_of(workers: Iterable[int]) -> int:
    mask = 0
    for j in workers:
        mask |= 1 << j
    return mask


def members_of(mask: int) -> List[int]:
    workers = []
    j = 0
    while mask:
        if mask & 1:
            workers.append(j)
        mask >>= 1
        j += 1
    return workers


def full_mask(n: int) -> int:
    return (1 << n) - 1


def mask_weight(mask: int, weights: Sequence[int]) -> int:
    total = 0
    j = 0
    while mask:
        if mask & 1:
            total += weights[j]
        mask >>= 1
        j += 1
    return total


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def submasks(mask: int) -> Iterable[int]:
    """All submasks of `mask`, including 0 and `mask` itself, in decreasing order"""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask
