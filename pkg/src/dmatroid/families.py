"""Families of circuit-index sets and the three closure primitives.

A member is a bitmask over circuit indices of some base matroid (the
"universe").  Universes may be wider than a machine word (cap 4096);
Python ints keep the set algebra exact either way.  Storage is hash-set
based so the literal membership test required by the closure step is
O(1), with a deterministic (size, then lexicographic) view for output.
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from .core import canonical_key, iter_bits, mask_of, set_of

MAX_UNIVERSE = 4096
MAX_ENUMERATION_UNIVERSE = 25


class UniverseTooLarge(Exception):
    """Universe exceeds what the requested operation can enumerate."""


class Family:
    """A duplicate-free collection of subsets of a fixed universe."""

    __slots__ = ("universe", "masks")

    def __init__(self, universe: int, members: Iterable[int] = ()):
        if universe > MAX_UNIVERSE:
            raise UniverseTooLarge(f"universe {universe} exceeds {MAX_UNIVERSE}")
        self.universe = universe
        self.masks = frozenset(members)
        top = (1 << universe) - 1
        for m in self.masks:
            if m & ~top:
                raise ValueError(f"member {set_of(m)} outside universe {universe}")

    def __contains__(self, mask: int) -> bool:
        return mask in self.masks

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.masks, key=canonical_key))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (Family,)):
            return NotImplemented
        return self.universe == other.universe and self.masks == other.masks

    def __hash__(self) -> int:
        return hash((self.universe, self.masks))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(universe={self.universe}, members={len(self)})"

    def to_dict(self) -> dict:
        return {
            "universe": self.universe,
            "sets": [list(set_of(m)) for m in self],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Family":
        return cls(int(d["universe"]), [mask_of(s) for s in d["sets"]])


class Antichain(Family):
    """A family in which no member contains another (checked on build)."""

    def __init__(
        self, universe: int, members: Iterable[int] = (), *, _trusted: bool = False
    ):
        super().__init__(universe, members)
        if _trusted:
            return
        by_size = sorted(self.masks, key=canonical_key)
        for i, small in enumerate(by_size):
            for big in by_size[i + 1 :]:
                if small != big and small & ~big == 0:
                    raise ValueError(
                        f"{set_of(small)} contained in {set_of(big)}: not an antichain"
                    )


def minimalize(family: Family | Iterable[int], universe: int | None = None) -> Antichain:
    """Inclusion-minimal members of a family.

    Idempotent; the result is an antichain over the same universe.
    """
    if isinstance(family, Family):
        masks = family.masks
        universe = family.universe
    else:
        masks = frozenset(family)
        if universe is None:
            raise ValueError("universe required when passing raw masks")
    kept: list[int] = []
    for m in sorted(masks, key=canonical_key):
        if not any(k & ~m == 0 for k in kept):
            kept.append(m)
    return Antichain(universe, kept, _trusted=True)


def up_contains(antichain: Family, mask: int) -> bool:
    """Membership of ``mask`` in the upward closure of a family.

    The closure itself is never materialized: true iff some member is a
    subset of ``mask``.
    """
    return any(m & ~mask == 0 for m in antichain.masks)


def epsilon_step(family: Family) -> Family:
    """One literal closure step on a family of circuit-index sets.

    Adds, for every pair of members whose intersection is *not literally a
    member*, the union minus any single shared index.  Pairs with equal
    members or empty intersections contribute nothing.  The output is
    deduplicated; it always contains the input family.
    """
    masks = family.masks
    members = sorted(masks, key=canonical_key)
    out = set(masks)
    for i, a in enumerate(members):
        for b in members[i + 1 :]:
            inter = a & b
            if inter == 0 or inter in masks:
                continue
            union = a | b
            for c in iter_bits(inter):
                out.add(union & ~(1 << c))
    return Family(family.universe, out)


def count_upward_closure(antichain: Family, universe: int) -> int:
    """Number of subsets of the universe that contain some member.

    Enumerates all 2**universe subsets (vectorized subset-sum sweep), so
    the universe is capped at 25.
    """
    if universe > MAX_ENUMERATION_UNIVERSE:
        raise UniverseTooLarge(
            f"universe {universe} exceeds {MAX_ENUMERATION_UNIVERSE} for enumeration"
        )
    if not antichain.masks:
        return 0
    dep = np.zeros(1 << universe, dtype=bool)
    members = np.fromiter(antichain.masks, dtype=np.int64)
    dep[members] = True
    # upward closure: propagate marks to supersets one bit at a time
    for b in range(universe):
        block = dep.reshape(-1, 2, 1 << b)
        block[:, 1, :] |= block[:, 0, :]
    return int(dep.sum())


def upward_closure_members(antichain: Family, universe: int) -> np.ndarray:
    """Boolean vector over all 2**universe subsets of the upward closure."""
    if universe > MAX_ENUMERATION_UNIVERSE:
        raise UniverseTooLarge(
            f"universe {universe} exceeds {MAX_ENUMERATION_UNIVERSE} for enumeration"
        )
    dep = np.zeros(1 << universe, dtype=bool)
    if antichain.masks:
        members = np.fromiter(antichain.masks, dtype=np.int64)
        dep[members] = True
        for b in range(universe):
            block = dep.reshape(-1, 2, 1 << b)
            block[:, 1, :] |= block[:, 0, :]
    return dep
