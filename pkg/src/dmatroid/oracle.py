"""Independent brute-force validators the other modules are tested against.

Everything here works on frozensets and plain loops, deliberately sharing
no subset-enumeration code with the bitmask engines it validates.  The
oracles may be exponential; that is the point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .core import Matroid, set_of

MAX_DEPENDENT_UNIVERSE = 15


class UniverseTooLarge(Exception):
    pass


class EngineDisagreement(Exception):
    """The derivation engines produced different circuit collections."""


@dataclass
class CheckFailure:
    axiom: str
    witness: dict


@dataclass
class AxiomReport:
    ok: bool
    failures: list[CheckFailure] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "failures": [
                {"axiom": f.axiom, "witness": f.witness} for f in self.failures
            ],
        }


def _powerset(items: Iterable) -> Iterable[frozenset]:
    items = list(items)
    return (
        frozenset(c)
        for r in range(len(items) + 1)
        for c in itertools.combinations(items, r)
    )


def check_circuit_axioms(circuits: Iterable[Iterable[int]]) -> AxiomReport:
    """Exhaustive C1/C2/C3 verification with witnesses for each failure."""
    cs = [frozenset(c) for c in circuits]
    failures: list[CheckFailure] = []
    for c in cs:
        if not c:
            failures.append(CheckFailure("C1", {"circuit": []}))
    for c1, c2 in itertools.combinations(cs, 2):
        small, big = sorted((c1, c2), key=len)
        if small < big or small == big:
            failures.append(
                CheckFailure("C2", {"inner": sorted(small), "outer": sorted(big)})
            )
    cset = set(cs)
    for c1, c2 in itertools.combinations(cs, 2):
        for e in c1 & c2:
            target = (c1 | c2) - {e}
            if not any(c3 <= target for c3 in cset):
                failures.append(
                    CheckFailure(
                        "C3",
                        {"c1": sorted(c1), "c2": sorted(c2), "element": e},
                    )
                )
    return AxiomReport(not failures, failures)


def check_dependent_axioms(
    members: Iterable[Iterable[int]], universe: int
) -> AxiomReport:
    """Exhaustive D1/D2/D3 verification of a dependent-set family.

    Small families are checked with plain frozenset loops; larger ones
    use a vectorized scan over the same definitions (the pairs are still
    enumerated exhaustively).
    """
    if universe > MAX_DEPENDENT_UNIVERSE:
        raise UniverseTooLarge(
            f"universe {universe} exceeds {MAX_DEPENDENT_UNIVERSE}"
        )
    fam = {frozenset(m) for m in members}
    if len(fam) > 2000:
        return _check_dependent_axioms_vectorized(fam, universe)
    failures: list[CheckFailure] = []
    if frozenset() in fam:
        failures.append(CheckFailure("D1", {"member": []}))
    ground = list(range(universe))
    for d in fam:
        for e in ground:
            if e not in d and (d | {e}) not in fam:
                failures.append(
                    CheckFailure(
                        "D2", {"member": sorted(d), "superset_missing": e}
                    )
                )
    fam_list = sorted(fam, key=lambda s: (len(s), sorted(s)))
    for i, d1 in enumerate(fam_list):
        for d2 in fam_list[i + 1 :]:
            inter = d1 & d2
            if inter in fam:
                continue
            union = d1 | d2
            for e in inter:
                if (union - {e}) not in fam:
                    failures.append(
                        CheckFailure(
                            "D3",
                            {
                                "d1": sorted(d1),
                                "d2": sorted(d2),
                                "element": e,
                            },
                        )
                    )
    return AxiomReport(not failures, failures)


def _check_dependent_axioms_vectorized(
    fam: set[frozenset], universe: int
) -> AxiomReport:
    import numpy as np

    failures: list[CheckFailure] = []
    masks = np.fromiter(
        (sum(1 << e for e in d) for d in fam), dtype=np.int64, count=len(fam)
    )
    masks.sort()
    present = np.zeros(1 << universe, dtype=bool)
    present[masks] = True
    if present[0]:
        failures.append(CheckFailure("D1", {"member": []}))
    for b in range(universe):
        half = present.reshape(-1, 2, 1 << b)
        viol = half[:, 0, :] & ~half[:, 1, :]
        if viol.any():
            lower = np.nonzero(viol.reshape(-1))[0][0]
            row, col = divmod(int(lower), 1 << b)
            member = row * (1 << (b + 1)) + col
            failures.append(
                CheckFailure(
                    "D2",
                    {"member": sorted(_bits(member)), "superset_missing": b},
                )
            )
    block = max(1, (1 << 22) // len(masks))
    for start in range(0, len(masks), block):
        a = masks[start : start + block]
        inter = a[:, None] & masks[None, :]
        keep = (inter != 0) & ~present[inter]
        ri = np.arange(start, start + len(a))[:, None]
        keep &= np.arange(len(masks))[None, :] > ri
        if not keep.any():
            continue
        ii, jj = np.nonzero(keep)
        pint = inter[keep]
        puni = a[ii] | masks[jj]
        while True:
            live = pint != 0
            if not live.any():
                break
            low = pint & -pint
            bad = live & ~present[puni ^ low]
            if bad.any():
                w = int(np.nonzero(bad)[0][0])
                failures.append(
                    CheckFailure(
                        "D3",
                        {
                            "d1": sorted(_bits(int(a[ii[w]]))),
                            "d2": sorted(_bits(int(masks[jj[w]]))),
                            "element": int(low[w]).bit_length() - 1,
                        },
                    )
                )
                return AxiomReport(False, failures)
            pint = pint ^ low
    return AxiomReport(not failures, failures)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def brute_rank(m: Matroid, s: int) -> int:
    """Rank by definition: the largest subset of ``s`` containing no circuit."""
    elements = set_of(s)
    if len(elements) > 20:
        raise UniverseTooLarge("brute rank limited to |S| <= 20")
    circuits = [frozenset(set_of(c)) for c in m.circuits]
    best = 0
    for t in _powerset(elements):
        if len(t) <= best:
            continue
        if not any(c <= t for c in circuits):
            best = len(t)
    return best


@dataclass
class CrossCheckReport:
    """Result of running all derivation engines on one matroid."""

    engines: dict[str, int]  # engine name -> circuit count
    circuits: frozenset[int]
    depths_replayed: int
    b_engine_skipped: bool

    def to_dict(self) -> dict:
        return {
            "engines": dict(self.engines),
            "circuit_count": len(self.circuits),
            "depth_witnesses_replayed": self.depths_replayed,
            "b_engine_skipped": self.b_engine_skipped,
        }


def cross_check_derivation(
    m: Matroid, *, b_budget: int = 200_000, a_budget: int = 1 << 25
) -> CrossCheckReport:
    """Run the explicit, un-minimalized, and minimalized engines and compare.

    Raises EngineDisagreement with the first differing set if any two
    engines disagree on the circuit collection.  Depth witnesses of the
    minimalized engine are replayed against its iteration snapshots.
    The un-minimalized engine is skipped above ``b_budget`` family
    members (its families grow without the interleaved minimalization).
    """
    from . import derived

    result = derived.derive_circuits(m)
    if not result.complete:
        raise EngineDisagreement("minimalized engine did not reach a fixpoint")
    e_circuits = frozenset(result.delta.circuits)
    engines = {"fixpoint_min": len(e_circuits)}

    universe = len(m.circuits)
    if (1 << universe) <= a_budget:
        vec, _ = derived.explicit_dependent_vector(m)
        for b in range(universe):  # the dependent family must be upward closed
            half = vec.reshape(-1, 2, 1 << b)
            if (half[:, 0, :] & ~half[:, 1, :]).any():
                raise EngineDisagreement(
                    "explicit dependent family is not upward closed"
                )
        a_min = frozenset(derived.minimal_of_upclosed(vec, universe))
        engines["explicit_dependents"] = len(a_min)
        _compare("explicit_dependents", a_min, e_circuits, m)

    b_skipped = True
    try:
        b = derived.b_sequence(m, budget=b_budget)
        b_skipped = False
        engines["unminimalized"] = len(b.masks)
        _compare("unminimalized", frozenset(b.masks), e_circuits, m)
    except derived.CombinatorialBudgetExceeded:
        pass

    replayed = derived.replay_witnesses(result)

    return CrossCheckReport(engines, e_circuits, replayed, b_skipped)


def _compare(name: str, got: frozenset[int], want: frozenset[int], m: Matroid) -> None:
    if got != want:
        diff = sorted(got ^ want)[0]
        raise EngineDisagreement(
            f"{name} disagrees with fixpoint_min; first differing set "
            f"{[m.set_label(1 << i) for i in set_of(diff)]}"
        )
