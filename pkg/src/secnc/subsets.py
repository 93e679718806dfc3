"""Helpers for destination index sets: bitmask enumeration and partitions."""

from __future__ import annotations

from collections.abc import Iterable, Iterator


def mask_of(a: Iterable[int]) -> int:
    """Bitmask with bit i-1 set for each 1-based index i."""
    m = 0
    for i in a:
        m |= 1 << (i - 1)
    return m


def set_of(mask: int) -> frozenset[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def nonempty_subsets(m: int) -> Iterator[frozenset[int]]:
    """All nonempty subsets of {1..m}, in ascending bitmask order."""
    for mask in range(1, 1 << m):
        yield set_of(mask)


def subsets_of(a: Iterable[int]) -> Iterator[frozenset[int]]:
    """All nonempty subsets of ``a``, deterministic order."""
    elems = sorted(a)
    for mask in range(1, 1 << len(elems)):
        yield frozenset(e for i, e in enumerate(elems) if mask >> i & 1)


def partitions(a: Iterable[int]) -> Iterator[tuple[frozenset[int], ...]]:
    """All partitions of ``a`` into nonempty blocks.

    The block containing the smallest element is chosen first, which makes
    the enumeration order deterministic and each partition appear once.
    """
    elems = frozenset(a)
    if not elems:
        yield ()
        return
    first = min(elems)
    rest = sorted(elems - {first})
    for mask in range(1 << len(rest)):
        block = frozenset([first] + [e for i, e in enumerate(rest) if mask >> i & 1])
        for tail in partitions(elems - block):
            yield (block,) + tail


def format_subset(a: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in sorted(a)) + "}"
