"""Vertex sets as Python ints.

Bit ``i`` set means vertex ``i`` is present.  Everything here is a thin
helper; the rest of the package manipulates masks directly with ``&``,
``|`` and ``int.bit_count``.
"""

from typing import Iterable, Iterator, List


def from_iter(items: Iterable[int]) -> int:
    mask = 0
    for i in items:
        mask |= 1 << i
    return mask


def members(mask: int) -> Iterator[int]:
    """Yield the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_list(mask: int) -> List[int]:
    return list(members(mask))


def full(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return mask.bit_count()


def is_subset(a: int, b: int) -> bool:
    return a & b == a


def sort_key(mask: int):
    """Lexicographic key on the sorted member list."""
    return tuple(members(mask))


def antichain_key(mask: int) -> int:
    """Same order as :func:`sort_key` among sets none of which contains another.

    The lowest vertex where two such sets differ decides the lexicographic
    order, so reversing the 64 bits and negating gives an integer key.
    """
    return -int(f"{mask:064b}"[::-1], 2)
