"""Circuit-presented matroids on small ground sets.

Ground elements are integers 0..n-1 and every subset is a Python int
bitmask, so set algebra is constant-time word arithmetic.  Public
construction goes through :func:`from_circuits`, which canonicalizes the
circuit list (sorted by size, then lexicographically by element tuple)
and checks the circuit axioms.  That canonical order fixes the circuit
*indices*, which later become the ground set of the derived matroid, so
all downstream output is reproducible byte for byte.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

MAX_GROUND = 64
# Derived matroids live on the circuit indices of a base matroid; they may
# exceed the word-size cap (the constructor is then called internally with
# validate=False on a known-good antichain).
MAX_CIRCUIT_UNIVERSE = 4096


class MatroidError(Exception):
    """Base class for matroid construction and query errors."""


class EmptyCircuit(MatroidError):
    """A supplied circuit is empty (violates axiom C1)."""


class ComparableCircuits(MatroidError):
    """One supplied circuit contains another (violates axiom C2)."""


class ExchangeFails(MatroidError):
    """Circuit exchange (C3) fails; carries the witness pair and element."""

    def __init__(self, c1: int, c2: int, e: int):
        self.c1, self.c2, self.e = c1, c2, e
        super().__init__(
            f"no circuit inside ({set_of(c1)} | {set_of(c2)}) - {{{e}}}"
        )


class NotABasis(MatroidError):
    """The given set is not a basis of the matroid."""


class ElementInBasis(MatroidError):
    """Fundamental circuit requested for an element of the basis itself."""


class GroundSetTooLarge(MatroidError):
    """Ground set exceeds the supported maximum."""


def mask_of(indices: Iterable[int]) -> int:
    """Bitmask of an iterable of element indices."""
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def set_of(mask: int) -> tuple[int, ...]:
    """Ascending tuple of the elements of a bitmask."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def canonical_key(mask: int) -> tuple[int, tuple[int, ...]]:
    """Sort key: cardinality first, then lexicographic element order."""
    return (mask.bit_count(), set_of(mask))


class Matroid:
    """A matroid given by its ground-set size and canonical circuit list.

    Instances are immutable; every operation is a pure function of the
    inputs, so values can be shared freely across threads.
    """

    __slots__ = ("n", "circuits", "labels")

    def __init__(
        self,
        n: int,
        circuits: Sequence[int],
        labels: Sequence[str] | None = None,
        *,
        validate: bool = True,
    ):
        if validate:
            if n > MAX_GROUND:
                raise GroundSetTooLarge(f"n={n} exceeds {MAX_GROUND}")
            _check_c1_c2(circuits, n)
        self.n = n
        self.circuits = tuple(sorted(set(circuits), key=canonical_key))
        if labels is not None and len(labels) != n:
            raise MatroidError("labels length must equal n")
        self.labels = tuple(labels) if labels is not None else None

    def __eq__(self, other: object) -> bool:
        # labeled equality: same ground size and same circuit sets;
        # display labels are ignored
        if not isinstance(other, Matroid):
            return NotImplemented
        return self.n == other.n and self.circuits == other.circuits

    def __hash__(self) -> int:
        return hash((self.n, self.circuits))

    def __repr__(self) -> str:
        return f"Matroid(n={self.n}, circuits={len(self.circuits)})"

    # -- label helpers -------------------------------------------------

    def label(self, e: int) -> str:
        return self.labels[e] if self.labels else str(e)

    def set_label(self, mask: int) -> str:
        return "{" + ",".join(self.label(e) for e in iter_bits(mask)) + "}"

    # -- independence and rank -----------------------------------------

    def is_independent(self, s: int) -> bool:
        """True iff no circuit is contained in the bitmask ``s``."""
        for c in self.circuits:
            if c & ~s == 0:
                return False
        return True

    def greedy_basis_of(self, s: int) -> int:
        """Maximal independent subset of ``s``, scanning elements ascending.

        Greedy attains the maximum cardinality by the matroid exchange
        property; the brute-force oracle cross-checks this.
        """
        t = 0
        for e in iter_bits(s):
            cand = t | (1 << e)
            if self._independent_quick(cand, e):
                t = cand
        return t

    def _independent_quick(self, s: int, new_e: int) -> bool:
        # only circuits through new_e can first appear when new_e is added
        bit = 1 << new_e
        for c in self.circuits:
            if c & bit and c & ~s == 0:
                return False
        return True

    def rank_of(self, s: int) -> int:
        return self.greedy_basis_of(s).bit_count()

    def nullity_of(self, s: int) -> int:
        return s.bit_count() - self.rank_of(s)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def rank(self) -> int:
        return self.rank_of(self.full_mask)

    def nullity(self) -> int:
        return self.n - self.rank()

    def nullity_table(self) -> list[int]:
        """Nullity of every subset, indexed by bitmask (requires n <= 20)."""
        if self.n > 20:
            raise GroundSetTooLarge("nullity table only built for n <= 20")
        return [self.nullity_of(s) for s in range(1 << self.n)]

    # -- circuits ---------------------------------------------------------

    def fundamental_circuit(self, basis: int, e: int) -> int:
        """The unique circuit inside ``basis | {e}`` for e outside a basis."""
        if basis & (1 << e):
            raise ElementInBasis(f"element {self.label(e)} lies in the basis")
        if not self.is_independent(basis) or basis.bit_count() != self.rank():
            raise NotABasis(f"{self.set_label(basis)} is not a basis")
        inside = basis | (1 << e)
        found = [c for c in self.circuits if c & ~inside == 0]
        assert len(found) == 1, "nullity 1 forces a unique circuit"
        return found[0]

    # -- connectivity and sums --------------------------------------------

    def connected_components(self) -> list[int]:
        """Partition of the ground set into connectivity blocks (as masks).

        Elements of a common circuit are merged; elements in no circuit
        are singleton blocks.  Uses union-find over the ground set.
        """
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for c in self.circuits:
            es = set_of(c)
            for other in es[1:]:
                ra, rb = find(es[0]), find(other)
                if ra != rb:
                    parent[rb] = ra
        blocks: dict[int, int] = {}
        for e in range(self.n):
            blocks.setdefault(find(e), 0)
            blocks[find(e)] |= 1 << e
        return sorted(blocks.values(), key=canonical_key)

    def is_connected(self) -> bool:
        return self.n >= 1 and len(self.connected_components()) == 1

    def direct_sum(self, other: "Matroid") -> "Matroid":
        """Disjoint union; circuits of ``other`` are shifted past ``self``."""
        if self.n + other.n > MAX_GROUND:
            raise GroundSetTooLarge(
                f"direct sum has {self.n + other.n} > {MAX_GROUND} elements"
            )
        shifted = [c << self.n for c in other.circuits]
        labels = None
        if self.labels is not None or other.labels is not None:
            labels = [self.label(e) for e in range(self.n)] + [
                other.label(e) for e in range(other.n)
            ]
        return Matroid(
            self.n + other.n, list(self.circuits) + shifted, labels
        )

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        d: dict = {"n": self.n}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        d["circuits"] = [list(set_of(c)) for c in self.circuits]
        return d

    @staticmethod
    def from_dict(d: dict, validate_exchange: bool = False) -> "Matroid":
        return from_circuits(
            int(d["n"]),
            [mask_of(c) for c in d["circuits"]],
            labels=d.get("labels"),
            validate_exchange=validate_exchange,
        )


def _check_c1_c2(circuits: Sequence[int], n: int) -> None:
    seen = sorted(set(circuits), key=canonical_key)
    full = (1 << n) - 1
    for c in seen:
        if c == 0:
            raise EmptyCircuit("the empty set cannot be a circuit")
        if c & ~full:
            raise MatroidError(f"circuit {set_of(c)} has elements >= n={n}")
    for i, c1 in enumerate(seen):
        for c2 in seen[i + 1 :]:
            # canonical order sorts by size, so only c1 <= c2 can nest
            if c1 & ~c2 == 0:
                raise ComparableCircuits(
                    f"{set_of(c1)} is contained in {set_of(c2)}"
                )


def _check_c3(circuits: Sequence[int]) -> None:
    cs = list(circuits)
    for i, c1 in enumerate(cs):
        for c2 in cs[i + 1 :]:
            inter = c1 & c2
            if not inter:
                continue
            union = c1 | c2
            for e in iter_bits(inter):
                target = union & ~(1 << e)
                if not any(c & ~target == 0 for c in cs):
                    raise ExchangeFails(c1, c2, e)


def from_circuits(
    n: int,
    circuits: Iterable[int | Iterable[int]],
    labels: Sequence[str] | None = None,
    validate_exchange: bool = False,
) -> Matroid:
    """Build a matroid from its circuits, validating the circuit axioms.

    C1 (no empty circuit) and C2 (no containments) are always checked;
    C3 (circuit exchange) is checked exhaustively over all pairs and all
    common elements when ``validate_exchange`` is set.

    Args:
        n: ground-set size, at most 64.
        circuits: bitmasks or iterables of element indices in 0..n-1.
        labels: optional display names, one per element.
        validate_exchange: run the quadratic C3 check.

    Raises:
        EmptyCircuit, ComparableCircuits, ExchangeFails, GroundSetTooLarge
    """
    masks = [c if isinstance(c, int) else mask_of(c) for c in circuits]
    m = Matroid(n, masks, labels, validate=True)
    if validate_exchange:
        _check_c3(m.circuits)
    return m
