"""Subsets of a finite ground set encoded as integer bitmasks."""

from typing import Iterable, Iterator, List, Sequence


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def members(mask: int) -> List[int]:
    """Indices of the set bits, lowest first."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def is_subset(small: int, big: int) -> bool:
    return small & big == small


def submasks(mask: int) -> Iterator[int]:
    """Every subset of ``mask``, including the empty set and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def label(mask: int, names: Sequence[str], sep: str = ",") -> str:
    return sep.join(names[i] for i in members(mask))
