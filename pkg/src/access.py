"""
Monotone access structures given by their minimal qualified sets.

Participants are lowercase names in a fixed order (the king ``k`` first,
then ``p1..pn`` for the king-and-pawns family). Subsets are handled as
bitmasks over that order; bit ``i`` is participant ``i``.
"""

import re
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, List, Tuple, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationInfo,
    field_serializer,
    field_validator,
    model_validator,
)

from src.errors import InvalidParameter
from src.utils.bitsets import is_subset, mask_of, members

KING = "k"
NAME_PATTERN = re.compile(r"^[a-z][a-z0-9]*$")

NAMED_STRUCTURES: Dict[str, List[Tuple[str, ...]]] = {
    "path4": [("a", "b"), ("b", "c"), ("c", "d")],
    "fan": [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c")],
    "triangle-d": [("a", "b"), ("a", "c"), ("b", "c", "d")],
}

Subset = Union[int, Iterable[str]]


def pawn(i: int) -> str:
    return f"p{i}"


def pawn_index(name: str) -> int:
    """1-based pawn index, 0 for the king."""
    if name == KING:
        return 0
    if not re.fullmatch(r"p[1-9][0-9]*", name):
        raise InvalidParameter(f"{name!r} is neither the king nor a pawn")
    return int(name[1:])


class AccessStructure(BaseModel):
    model_config = ConfigDict(frozen=True)

    participants: Tuple[str, ...] = Field(..., min_length=1)
    minimal_qualified: Tuple[FrozenSet[str], ...] = Field(..., min_length=1)

    @field_validator("participants")
    @classmethod
    def _check_names(cls, value: Tuple[str, ...]) -> Tuple[str, ...]:
        if len(set(value)) != len(value):
            raise ValueError("Participant names must be unique")
        for name in value:
            if not NAME_PATTERN.match(name):
                raise ValueError(f"Invalid participant name {name!r}")
        return value

    @field_validator("minimal_qualified")
    @classmethod
    def _canonical_order(
        cls, value: Tuple[FrozenSet[str], ...], info: ValidationInfo
    ) -> Tuple[FrozenSet[str], ...]:
        order = {name: i for i, name in enumerate(info.data.get("participants", ()))}
        for group in value:
            if not group:
                raise ValueError("Minimal qualified sets must be nonempty")
            unknown = group - order.keys()
            if unknown:
                raise ValueError(f"Unknown participants {sorted(unknown)}")
        unique = set(value)
        return tuple(sorted(unique, key=lambda g: sorted(order[x] for x in g)))

    @model_validator(mode="after")
    def _check_antichain(self) -> "AccessStructure":
        masks = self.minimal_masks
        for i, a in enumerate(masks):
            for j, b in enumerate(masks):
                if i != j and is_subset(a, b):
                    raise ValueError("Minimal qualified sets must form an antichain")
        covered = 0
        for m in masks:
            covered |= m
        if covered != (1 << len(self.participants)) - 1:
            raise ValueError("Every participant must lie in a minimal qualified set")
        return self

    @field_serializer("minimal_qualified")
    def _serialize_groups(self, value: Tuple[FrozenSet[str], ...]) -> List[List[str]]:
        return [self.names(self.mask(group)) for group in value]

    @cached_property
    def index(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.participants)}

    @cached_property
    def minimal_masks(self) -> Tuple[int, ...]:
        order = {name: i for i, name in enumerate(self.participants)}
        return tuple(mask_of(order[x] for x in group) for group in self.minimal_qualified)

    @property
    def size(self) -> int:
        return len(self.participants)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def mask(self, subset: Subset) -> int:
        if isinstance(subset, int):
            if subset < 0 or subset > self.full_mask:
                raise InvalidParameter(f"Mask {subset} is outside the participant set")
            return subset
        mask = 0
        for name in subset:
            if name not in self.index:
                raise InvalidParameter(f"Unknown participant {name!r}")
            mask |= 1 << self.index[name]
        return mask

    def names(self, mask: int) -> List[str]:
        return [self.participants[i] for i in members(mask)]

    def qualifies(self, mask: int) -> bool:
        return any(m & mask == m for m in self.minimal_masks)

    def to_json_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


def make_gamma(n: int) -> AccessStructure:
    """The king and ``n`` pawns: {k, p_i} for every i, plus all pawns together."""
    if n < 2:
        raise InvalidParameter(f"Gamma_n needs n >= 2, got {n}")
    pawns = [pawn(i) for i in range(1, n + 1)]
    groups = [frozenset({KING, p}) for p in pawns] + [frozenset(pawns)]
    return AccessStructure(participants=(KING, *pawns), minimal_qualified=tuple(groups))


def make_named(name: str) -> AccessStructure:
    try:
        groups = NAMED_STRUCTURES[name]
    except KeyError:
        raise InvalidParameter(
            f"Unknown structure {name!r}; expected one of {sorted(NAMED_STRUCTURES)}"
        ) from None
    return AccessStructure(
        participants=("a", "b", "c", "d"),
        minimal_qualified=tuple(frozenset(g) for g in groups),
    )


def parse_structure(label: str) -> AccessStructure:
    """``gamma_N`` or one of the named four-participant structures."""
    match = re.fullmatch(r"gamma_(\d+)", label)
    if match:
        return make_gamma(int(match.group(1)))
    return make_named(label)


def is_qualified(structure: AccessStructure, subset: Subset) -> bool:
    return structure.qualifies(structure.mask(subset))


def minimal_sets_ordered(structure: AccessStructure) -> List[FrozenSet[str]]:
    """Minimal qualified sets, lexicographic by participant index."""
    return list(structure.minimal_qualified)


def maximal_unqualified(structure: AccessStructure) -> List[FrozenSet[str]]:
    """Unqualified sets all of whose one-element extensions are qualified."""
    found = []
    full = structure.full_mask
    for mask in range(full + 1):
        if structure.qualifies(mask):
            continue
        rest = full & ~mask
        if all(structure.qualifies(mask | (1 << i)) for i in members(rest)):
            found.append(mask)
    return [frozenset(structure.names(m)) for m in found]


def maximal_unqualified_masks(structure: AccessStructure) -> List[int]:
    return [structure.mask(group) for group in maximal_unqualified(structure)]


def is_plus_submodular_pair(structure: AccessStructure, x: int, y: int) -> bool:
    return (
        structure.qualifies(x)
        and structure.qualifies(y)
        and not structure.qualifies(x & y)
    )


def load_structure(data: Dict[str, Any]) -> AccessStructure:
    groups = tuple(frozenset(g) for g in data.get("minimal_qualified", ()))
    return AccessStructure(
        participants=tuple(data.get("participants", ())), minimal_qualified=groups
    )
