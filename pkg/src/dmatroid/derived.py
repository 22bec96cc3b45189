"""The combinatorial derived matroid of a circuit-presented matroid.

The derived matroid lives on the circuit indices of a base matroid M.
Its dependent sets are generated from the seed family

    A0 = { A subseteq C : |A| > nullity(support(A)) }

by alternating a pair-closure step with either upward closure (the
dependent-set engine), nothing (the un-minimalized engine), or
minimalization (the fixpoint engine that this module's main entry point
uses).  All three engines are implemented independently and are
cross-checked against each other by the oracle module.

A structural fact keeps the fixpoint engine tractable: any generated set
whose size exceeds the matroid nullity already satisfies the seed
inequality, hence contains a seed-minimal member (or is one), hence can
never change a minimalized family.  Emissions are therefore filtered to
size <= nullity(M) before the exact seed-membership test; pair scans can
skip pairs whose union exceeds nullity(M) + 1 outright.  The naive
engines do not use this shortcut, which is what makes the cross-check
meaningful.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .core import Matroid, canonical_key, iter_bits, set_of
from .families import (
    MAX_ENUMERATION_UNIVERSE,
    MAX_UNIVERSE,
    Antichain,
    Family,
    UniverseTooLarge,
    minimalize,
    up_contains,
)

DEFAULT_SUBSET_BUDGET = 30_000_000


class CombinatorialBudgetExceeded(Exception):
    """An enumeration or family-size budget was exhausted."""


@dataclass(frozen=True)
class DeriveLimits:
    """Resource limits for the fixpoint iteration.

    ``max_set_size`` defaults to nullity(M) + 2; every true derived
    circuit has size at most nullity(M) + 1, so the default cap cannot
    exclude circuits.  A lower cap drops intermediate sets and marks the
    run incomplete instead of truncating silently.
    """

    max_iterations: int = 32
    max_set_size: int | None = None
    subset_budget: int = DEFAULT_SUBSET_BUDGET
    keep_snapshots: bool = True

    def resolved_set_size(self, m: Matroid) -> int:
        return self.max_set_size if self.max_set_size is not None else m.nullity() + 2


@dataclass
class IterationRecord:
    index: int
    family_size: int
    new_count: int
    displaced_count: int
    elapsed: float  # wall seconds; never serialized (outputs must be byte-stable)


@dataclass
class DerivationTrace:
    iterations: list[IterationRecord]
    max_iterations: int
    max_set_size: int
    fixpoint: bool
    fixpoint_index: int | None  # first i with E_{i+1} = E_i, if reached
    snapshots: list[frozenset[int]] | None = None

    def to_dict(self) -> dict:
        return {
            "iterations": [
                {
                    "index": r.index,
                    "family_size": r.family_size,
                    "new": r.new_count,
                    "displaced": r.displaced_count,
                }
                for r in self.iterations
            ],
            "max_iterations": self.max_iterations,
            "max_set_size": self.max_set_size,
            "fixpoint": self.fixpoint,
            "fixpoint_index": self.fixpoint_index,
        }


@dataclass
class Witness:
    """How a derived circuit of positive depth was generated."""

    parent1: int
    parent2: int
    removed: int  # circuit index taken out of the parents' intersection
    iteration: int


@dataclass
class DerivedResult:
    """Derived matroid plus provenance of every circuit."""

    base: Matroid
    delta: Matroid
    depths: dict[int, int]
    witnesses: dict[int, Witness]
    trace: DerivationTrace
    complete: bool

    def to_dict(self) -> dict:
        circuits = list(self.delta.circuits)
        return {
            "base": self.base.to_dict(),
            "delta": {
                "n": self.delta.n,
                "circuits": [list(set_of(c)) for c in circuits],
            },
            "depths": [self.depths[c] for c in circuits],
            "witnesses": [
                {
                    "circuit": list(set_of(c)),
                    "parents": [
                        list(set_of(self.witnesses[c].parent1)),
                        list(set_of(self.witnesses[c].parent2)),
                    ],
                    "removed": self.witnesses[c].removed,
                    "iteration": self.witnesses[c].iteration,
                }
                for c in circuits
                if c in self.witnesses
            ],
            "trace": self.trace.to_dict(),
            "complete": self.complete,
        }


# ---------------------------------------------------------------------------
# support / nullity plumbing


class _NullityOracle:
    """Nullity of unions of circuit supports, memoized per support mask."""

    def __init__(self, m: Matroid):
        self.m = m
        self._memo: dict[int, int] = {}

    def nullity(self, support: int) -> int:
        got = self._memo.get(support)
        if got is None:
            got = self.m.nullity_of(support)
            self._memo[support] = got
        return got

    def nullities_for(self, supports: np.ndarray) -> np.ndarray:
        """Vectorized lookup: unique supports are ranked once via greedy."""
        uniq, inverse = np.unique(supports, return_inverse=True)
        vals = np.fromiter(
            (self.nullity(int(s)) for s in uniq), dtype=np.int16, count=len(uniq)
        )
        return vals[inverse]


def support_of(m: Matroid, circuit_set: int) -> int:
    """Union of the supports of the indexed circuits."""
    supp = 0
    for i in iter_bits(circuit_set):
        supp |= m.circuits[i]
    return supp


def a0_contains(m: Matroid, circuit_set: int) -> bool:
    """Seed-family membership: size exceeds the nullity of the support."""
    return circuit_set.bit_count() > m.nullity_of(support_of(m, circuit_set))


# ---------------------------------------------------------------------------
# seed antichain


def _combination_chunks(u: int, s: int, chunk: int = 1 << 18):
    it = itertools.combinations(range(u), s)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.int16)


def _masks_from_columns(cols: np.ndarray, bit_lut: np.ndarray) -> np.ndarray:
    masks = bit_lut[cols[:, 0]].copy()
    for j in range(1, cols.shape[1]):
        masks |= bit_lut[cols[:, j]]
    return masks


def a0_minimal(
    m: Matroid, *, budget: int = DEFAULT_SUBSET_BUDGET, force_python: bool = False
) -> Antichain:
    """Minimal members of the seed family over the circuit universe.

    Only subset sizes up to nullity(M) + 1 are enumerated: a member of
    size nullity(M) + 2 or more stays in the seed family after removing
    any element, so it cannot be minimal.  This bound is what makes the
    41-circuit cases enumerable; the brute-force oracle re-derives it on
    small instances.
    """
    u = len(m.circuits)
    if u > MAX_UNIVERSE:
        raise UniverseTooLarge(f"{u} circuits exceed the {MAX_UNIVERSE} cap")
    max_size = min(m.nullity() + 1, u)
    total = sum(math.comb(u, s) for s in range(1, max_size + 1))
    if total > budget:
        raise CombinatorialBudgetExceeded(
            f"{total} subsets of sizes <= {max_size} exceed budget {budget}"
        )
    if u <= 64 and not force_python:
        found = _a0_minimal_numpy(m, max_size)
    else:
        found = _a0_minimal_python(m, max_size)
    return Antichain(u, found, _trusted=True)


def _a0_minimal_numpy(m: Matroid, max_size: int) -> list[int]:
    u = len(m.circuits)
    circ = np.array(m.circuits, dtype=np.uint64)
    bit_lut = np.uint64(1) << np.arange(u, dtype=np.uint64)
    oracle = _NullityOracle(m)
    found: list[int] = []
    found_sorted = np.empty(0, dtype=np.uint64)

    for s in range(1, max_size + 1):
        new_this_size: list[np.ndarray] = []
        for cols in _combination_chunks(u, s):
            supp = circ[cols[:, 0]].copy()
            for j in range(1, s):
                supp |= circ[cols[:, j]]
            keep = s > oracle.nullities_for(supp)
            if not keep.any():
                continue
            cols_kept = cols[keep]
            masks = _masks_from_columns(cols_kept, bit_lut)
            if len(found_sorted):
                alive = np.ones(len(masks), dtype=bool)
                # a smaller minimal member inside the candidate kills it
                for t in range(3, s):
                    for pattern in itertools.combinations(range(s), t):
                        sub = bit_lut[cols_kept[:, pattern[0]]].copy()
                        for j in pattern[1:]:
                            sub |= bit_lut[cols_kept[:, j]]
                        alive &= ~np.isin(sub, found_sorted, assume_unique=False)
                masks = masks[alive]
            if len(masks):
                new_this_size.append(masks)
        if new_this_size:
            fresh = np.concatenate(new_this_size)
            found.extend(int(x) for x in fresh)
            found_sorted = np.sort(
                np.concatenate([found_sorted, fresh.astype(np.uint64)])
            )
    return found


def _a0_minimal_python(m: Matroid, max_size: int) -> list[int]:
    u = len(m.circuits)
    oracle = _NullityOracle(m)
    found: set[int] = set()
    out: list[int] = []
    for s in range(1, max_size + 1):
        for cols in itertools.combinations(range(u), s):
            supp = 0
            for i in cols:
                supp |= m.circuits[i]
            if s <= oracle.nullity(supp):
                continue
            if any(
                (sub_mask := sum(1 << c for c in sub)) in found
                for t in range(3, s)
                for sub in itertools.combinations(cols, t)
            ):
                continue
            mask = sum(1 << c for c in cols)
            out.append(mask)
        found.update(out)
    return out


def a0_size_class(m: Matroid, s: int) -> list[int]:
    """All (not only minimal) seed-family members of one size."""
    u = len(m.circuits)
    oracle = _NullityOracle(m)
    out: list[int] = []
    if u <= 64:
        circ = np.array(m.circuits, dtype=np.uint64)
        bit_lut = np.uint64(1) << np.arange(u, dtype=np.uint64)
        for cols in _combination_chunks(u, s):
            supp = circ[cols[:, 0]].copy()
            for j in range(1, s):
                supp |= circ[cols[:, j]]
            keep = s > oracle.nullities_for(supp)
            if keep.any():
                out.extend(int(x) for x in _masks_from_columns(cols[keep], bit_lut))
    else:
        for cols in itertools.combinations(range(u), s):
            supp = 0
            for i in cols:
                supp |= m.circuits[i]
            if s > oracle.nullity(supp):
                out.append(sum(1 << c for c in cols))
    return out


# ---------------------------------------------------------------------------
# fixpoint engine (minimalize after every closure step)


def derive_circuits(m: Matroid, limits: DeriveLimits | None = None) -> DerivedResult:
    """Iterate closure + minimalization to the derived circuit antichain.

    Starts from the minimal seed members, applies the pair-closure step,
    keeps inclusion-minimal sets, and repeats until the antichain is
    stable or a limit is hit.  The depth of a surviving circuit is the
    first iteration at which it appeared; each circuit of positive depth
    carries a generating witness that can be replayed.
    """
    limits = limits or DeriveLimits()
    u = len(m.circuits)
    if u > MAX_UNIVERSE:
        raise UniverseTooLarge(f"{u} circuits exceed the {MAX_UNIVERSE} cap")
    cap = limits.resolved_set_size(m)
    n_m = m.nullity()

    t0 = time.perf_counter()
    seed = a0_minimal(m, budget=limits.subset_budget)
    seed_masks = sorted(seed.masks, key=canonical_key)

    limit_hit = False
    members: set[int] = set()
    first_seen: dict[int, int] = {}
    for x in seed_masks:
        if x.bit_count() > cap:
            limit_hit = True  # undersized cap drops seed sets; flagged, not silent
            continue
        members.add(x)
        first_seen[x] = 0

    snapshots: list[frozenset[int]] | None = (
        [frozenset(members)] if limits.keep_snapshots else None
    )
    records = [IterationRecord(0, len(members), len(members), 0, time.perf_counter() - t0)]
    witnesses: dict[int, Witness] = {}

    use_numpy = u <= 64
    frontier = set(members)
    displaced_any = False
    fixpoint_index: int | None = None

    for step in range(1, limits.max_iterations + 1):
        t0 = time.perf_counter()
        scan_all = (step == 1) or displaced_any
        scan_from = members if scan_all else frontier
        if use_numpy:
            cands, capped = _scan_pairs_numpy(
                m, members, scan_from, scan_all, n_m, cap
            )
        else:
            cands, capped = _scan_pairs_python(
                m, members, scan_from, scan_all, n_m, cap
            )
        limit_hit = limit_hit or capped

        accepted, displaced = _min_update(members, cands)
        displaced_any = bool(displaced)
        for x in accepted:
            first_seen[x] = step
            w = cands[x]
            witnesses[x] = Witness(w[0], w[1], w[2], step)
        frontier = set(accepted)
        records.append(
            IterationRecord(
                step, len(members), len(accepted), len(displaced),
                time.perf_counter() - t0,
            )
        )
        if snapshots is not None:
            snapshots.append(frozenset(members))
        if not accepted:
            fixpoint_index = step - 1
            break

    fixpoint = fixpoint_index is not None and not limit_hit
    complete = fixpoint

    final = sorted(members, key=canonical_key)
    delta = Matroid(u, final, labels=_delta_labels(m), validate=False)
    depths = {x: first_seen[x] for x in final}
    trace = DerivationTrace(
        records, limits.max_iterations, cap,
        fixpoint, fixpoint_index, snapshots,
    )
    return DerivedResult(m, delta, depths,
                         {x: w for x, w in witnesses.items() if x in members},
                         trace, complete)


def _delta_labels(m: Matroid) -> list[str]:
    return ["".join(m.label(e) for e in iter_bits(c)) for c in m.circuits]


def _scan_pairs_numpy(
    m: Matroid,
    members: set[int],
    scan_from: set[int],
    scan_all: bool,
    n_m: int,
    cap: int,
) -> tuple[dict[int, tuple[int, int, int]], bool]:
    """Collect useful closure emissions from member pairs.

    Returns {emission mask: (parent1, parent2, removed index)} for
    emissions outside the seed family, plus a flag for emissions dropped
    by an undersized cap.  Pairs whose union exceeds nullity + 1 only
    emit seed members and are skipped (see module docstring).
    """
    # only members of size <= the emission window can form useful pairs:
    # a useful union has at most min(nullity, cap) + 1 indices and strictly
    # contains both members of the (antichain) pair
    window = min(n_m, cap)
    small = {x for x in members if x.bit_count() <= window}
    small_from = {x for x in scan_from if x.bit_count() <= window}
    if not small or not small_from:
        return {}, False
    all_sorted = np.sort(np.fromiter(small, dtype=np.uint64, count=len(small)))
    from_sorted = np.sort(np.fromiter(small_from, dtype=np.uint64, count=len(small_from)))
    older_set = small - small_from
    older = (
        np.empty(0, dtype=np.uint64)
        if scan_all
        else np.sort(np.fromiter(older_set, dtype=np.uint64, count=len(older_set)))
    )
    oracle = _NullityOracle(m)
    circ = np.array(m.circuits, dtype=np.uint64)
    capped = False
    out: dict[int, tuple[int, int, int]] = {}

    block = max(1, (1 << 22) // max(len(all_sorted), 1))

    def handle(rows: np.ndarray, cols_arr: np.ndarray, triangle_base: int | None):
        nonlocal capped
        for start in range(0, len(rows), block):
            a = rows[start : start + block]
            inter = a[:, None] & cols_arr[None, :]
            union = a[:, None] | cols_arr[None, :]
            upc = np.bitwise_count(union)
            keep = inter != 0
            if triangle_base is not None:
                # only the strict upper triangle of the frontier block
                ri = np.arange(start, start + len(a))[:, None]
                ci = np.arange(len(cols_arr))[None, :]
                keep &= ci > ri
            over_nullity = upc > n_m + 1
            in_window = keep & ~over_nullity
            if cap < n_m:
                dropped = keep & (upc > cap + 1) & ~over_nullity
                if dropped.any():
                    capped = True
                    in_window &= upc <= cap + 1
            if not in_window.any():
                continue
            ii, jj = np.nonzero(in_window)
            pi = a[ii]
            pj = cols_arr[jj]
            pint = pi & pj
            puni = pi | pj
            big = np.bitwise_count(pint) >= 3
            if big.any():
                blocked = np.isin(pint[big], all_sorted)
                keep2 = np.ones(len(pi), dtype=bool)
                keep2[np.nonzero(big)[0][blocked]] = False
                pi, pj, pint, puni = pi[keep2], pj[keep2], pint[keep2], puni[keep2]
            if not len(pi):
                continue
            emissions = _peel_emissions(pi, pj, pint, puni)
            if not len(emissions):
                continue
            em, p1, p2, rem = emissions
            size = np.bitwise_count(em).astype(np.int64)
            supp = np.zeros(len(em), dtype=np.uint64)
            tmp = em.copy()
            while True:
                live = tmp != 0
                if not live.any():
                    break
                low = tmp & (~tmp + np.uint64(1))
                idx = np.zeros(len(tmp), dtype=np.int64)
                idx[live] = np.log2(low[live].astype(np.float64)).astype(np.int64)
                supp[live] |= circ[idx[live]]
                tmp ^= low
            nul = oracle.nullities_for(supp)
            fresh = ~(size > nul)
            for x, q1, q2, r in zip(
                em[fresh], p1[fresh], p2[fresh], rem[fresh]
            ):
                xi = int(x)
                if xi not in out and xi not in members:
                    out[xi] = (int(q1), int(q2), int(r))

    if scan_all:
        handle(from_sorted, from_sorted, triangle_base=0)
    else:
        if len(older):
            handle(from_sorted, older, None)
        handle(from_sorted, from_sorted, triangle_base=0)
    return out, capped


def _peel_emissions(pi, pj, pint, puni):
    """Emit union-minus-one-shared-index for every pair, in (pair, bit) order."""
    ems, e1, e2, rem, order = [], [], [], [], []
    tmp = pint.copy()
    pair_idx = np.arange(len(pint))
    bit_round = 0
    while True:
        live = tmp != 0
        if not live.any():
            break
        low = tmp & (~tmp + np.uint64(1))
        em = puni ^ low
        ems.append(em[live])
        e1.append(pi[live])
        e2.append(pj[live])
        rem.append(np.log2(low[live].astype(np.float64)).astype(np.int64))
        order.append(pair_idx[live] * 64 + bit_round)
        tmp = tmp ^ low
        bit_round += 1
    if not ems:
        return ()
    em = np.concatenate(ems)
    p1 = np.concatenate(e1)
    p2 = np.concatenate(e2)
    rm = np.concatenate(rem)
    srt = np.argsort(np.concatenate(order), kind="stable")
    return em[srt], p1[srt], p2[srt], rm[srt]


def _scan_pairs_python(
    m: Matroid,
    members: set[int],
    scan_from: set[int],
    scan_all: bool,
    n_m: int,
    cap: int,
) -> tuple[dict[int, tuple[int, int, int]], bool]:
    window = min(n_m, cap)
    ordered = sorted(x for x in members if x.bit_count() <= window)
    from_set = {x for x in scan_from if x.bit_count() <= window}
    oracle = _NullityOracle(m)
    capped = False
    out: dict[int, tuple[int, int, int]] = {}
    for idx, a in enumerate(ordered):
        for b in ordered[idx + 1 :]:
            if not scan_all and a not in from_set and b not in from_set:
                continue
            inter = a & b
            if inter == 0:
                continue
            union = a | b
            usize = union.bit_count()
            if usize > n_m + 1:
                continue
            if usize - 1 > cap:
                capped = True
                continue
            if inter.bit_count() >= 3 and inter in members:
                continue
            for c in iter_bits(inter):
                x = union & ~(1 << c)
                supp = support_of(m, x)
                if x.bit_count() > oracle.nullity(supp):
                    continue
                if x not in out and x not in members:
                    out[x] = (a, b, c)
    return out, capped


def _contains_member(x: int, size: int, lookup: set[int]) -> bool:
    """True iff some subset of ``x`` with >= 3 elements is in ``lookup``."""
    els = set_of(x)
    for t in range(3, size):
        for sub in itertools.combinations(els, t):
            if sum(1 << c for c in sub) in lookup:
                return True
    return False


def _min_update(
    members: set[int], cands: dict[int, tuple[int, int, int]]
) -> tuple[list[int], list[int]]:
    """Insert candidates, keep the family an antichain; mutates ``members``.

    Returns (accepted new members, displaced old members).
    """
    accepted: list[int] = []
    acc_set: set[int] = set()
    for x in sorted(cands, key=canonical_key):
        if _contains_member(x, x.bit_count(), members) or _contains_member(
            x, x.bit_count(), acc_set
        ):
            continue
        accepted.append(x)
        acc_set.add(x)
    displaced: list[int] = []
    if accepted:
        max_mask = max(members, default=0) | max(accepted)
        if len(members) * len(accepted) > 1 << 20 and max_mask < 1 << 64:
            arr = np.fromiter(members, dtype=np.uint64, count=len(members))
            hit = np.zeros(len(arr), dtype=bool)
            for x in accepted:
                xv = np.uint64(x)
                hit |= (arr & xv) == xv
            displaced = [int(v) for v in arr[hit]]
        else:
            for old in list(members):
                ob = old.bit_count()
                for x in accepted:
                    if x.bit_count() < ob and (old & x) == x:
                        displaced.append(old)
                        break
        for old in displaced:
            members.remove(old)
        members.update(accepted)
    return accepted, displaced


def replay_witnesses(result: DerivedResult) -> int:
    """Re-derive every positive-depth circuit from its recorded witness.

    Requires iteration snapshots.  Checks that both parents were members
    of the previous antichain, their intersection was not, and removing
    the recorded index from their union gives the circuit.  Returns the
    number of witnesses replayed.
    """
    snaps = result.trace.snapshots
    if snaps is None:
        raise ValueError("derivation was run without snapshots")
    count = 0
    for x, w in result.witnesses.items():
        prev = snaps[w.iteration - 1]
        inter = w.parent1 & w.parent2
        assert w.parent1 in prev and w.parent2 in prev, "witness parents missing"
        assert inter not in prev, "witness intersection was already a member"
        assert inter & (1 << w.removed), "removed index not shared by parents"
        assert (w.parent1 | w.parent2) & ~(1 << w.removed) == x, "witness mismatch"
        count += 1
    return count


# ---------------------------------------------------------------------------
# explicit dependent-set engine (materializes the full family)


def derive_dependents_explicit(m: Matroid) -> Family:
    """The full dependent-set family of the derived matroid, materialized.

    Alternates the pair-closure step with upward closure over all
    2**|C| subsets, so the circuit universe is capped at 25.  The result
    is upward closed; its minimal members must match the fixpoint engine.
    """
    vec, _ = explicit_dependent_vector(m)
    u = len(m.circuits)
    return Family(u, (int(x) for x in np.nonzero(vec)[0]))


def explicit_dependent_vector(m: Matroid) -> tuple[np.ndarray, int]:
    """Boolean vector over all subsets, plus the first stable iteration."""
    u = len(m.circuits)
    if u > MAX_ENUMERATION_UNIVERSE:
        raise UniverseTooLarge(
            f"{u} circuits exceed the {MAX_ENUMERATION_UNIVERSE} enumeration cap"
        )
    n_m = m.nullity()
    size = np.bitwise_count(np.arange(1 << u, dtype=np.uint64)).astype(np.int16)

    supp = np.zeros(1, dtype=np.uint64)
    for i in range(u):
        supp = np.concatenate([supp, supp | np.uint64(m.circuits[i])])
    nul = _NullityOracle(m).nullities_for(supp)

    f = size > nul
    f[0] = False
    small = size <= n_m + 1

    processed: set[int] = set()
    frontier = np.nonzero(f & small)[0].astype(np.uint64)
    stable_at = 0
    for step in range(1, (1 << u) + 2):
        new_marks = _explicit_scan(f, frontier, processed, u)
        f_next = f.copy()
        if len(new_marks):
            f_next[new_marks] = True
        for b in range(u):  # upward closure
            blockv = f_next.reshape(-1, 2, 1 << b)
            blockv[:, 1, :] |= blockv[:, 0, :]
        changed = np.nonzero(f_next & ~f)[0]
        if not len(changed):
            stable_at = step - 1
            break
        processed.update(int(x) for x in frontier)
        f = f_next
        frontier = changed[small[changed]].astype(np.uint64)
    return f, stable_at


def _explicit_scan(
    f: np.ndarray, frontier: np.ndarray, processed: set[int], u: int
) -> np.ndarray:
    """Closure emissions not yet in the family, from pairs meeting the frontier."""
    if not len(frontier):
        return np.empty(0, dtype=np.int64)
    older = np.fromiter(processed, dtype=np.uint64, count=len(processed))
    marks: list[np.ndarray] = []
    block = max(1, (1 << 22) // max(len(older) + len(frontier), 1))

    def scan(rows: np.ndarray, cols_arr: np.ndarray, triangle: bool):
        for start in range(0, len(rows), block):
            a = rows[start : start + block]
            inter = a[:, None] & cols_arr[None, :]
            union = a[:, None] | cols_arr[None, :]
            keep = inter != 0
            if triangle:
                ri = np.arange(start, start + len(a))[:, None]
                keep &= np.arange(len(cols_arr))[None, :] > ri
            keep &= ~f[inter.astype(np.int64)]
            if not keep.any():
                continue
            pint = inter[keep]
            puni = union[keep]
            while True:
                live = pint != 0
                if not live.any():
                    break
                low = pint & (~pint + np.uint64(1))
                em = (puni ^ low)[live].astype(np.int64)
                fresh = em[~f[em]]
                if len(fresh):
                    marks.append(fresh)
                pint = pint ^ low
    if len(older):
        scan(frontier, older, triangle=False)
    scan(frontier, frontier, triangle=True)
    if not marks:
        return np.empty(0, dtype=np.int64)
    return np.unique(np.concatenate(marks))


def minimal_of_upclosed(vec: np.ndarray, u: int) -> list[int]:
    """Minimal members of an upward-closed family given as a 2**u vector."""
    minimal = vec.copy()
    for b in range(u):
        blockv = vec.reshape(-1, 2, 1 << b)
        has_sub = blockv[:, 0, :]
        minimal.reshape(-1, 2, 1 << b)[:, 1, :] &= ~has_sub
    return [int(x) for x in np.nonzero(minimal)[0]]


# ---------------------------------------------------------------------------
# un-minimalized engine


def b_sequence(
    m: Matroid, *, budget: int = 200_000, trace_sizes: list[int] | None = None
) -> Antichain:
    """Closure iteration without interleaved minimalization.

    Keeps every generated set, iterates the literal closure step to
    stability, and minimalizes once at the end.  Families grow quickly
    without the interleaved minimum, so this engine is budgeted and meant
    for small instances; it is the third independent derivation route.
    """
    u = len(m.circuits)
    if u > MAX_UNIVERSE:
        raise UniverseTooLarge(f"{u} circuits exceed the {MAX_UNIVERSE} cap")
    seed = a0_minimal(m)
    members: set[int] = set(seed.masks)
    if trace_sizes is not None:
        trace_sizes.append(len(members))
    if not members:
        return Antichain(u, [], _trusted=True)
    frontier = set(members)
    use_numpy = u <= 64
    while frontier:
        if len(members) > budget:
            raise CombinatorialBudgetExceeded(
                f"family grew past {budget} members"
            )
        if use_numpy:
            fresh = _b_step_numpy(members, frontier, u, budget - len(members))
        else:
            fresh = _b_step_python(members, frontier)
        members.update(fresh)
        frontier = fresh
        if trace_sizes is not None:
            trace_sizes.append(len(members))
    return minimalize(members, u)


def _b_step_numpy(
    members: set[int], frontier: set[int], universe: int, room: int
) -> set[int]:
    front = np.sort(np.fromiter(frontier, dtype=np.uint64, count=len(frontier)))
    older_set = members - frontier
    older = np.sort(np.fromiter(older_set, dtype=np.uint64, count=len(older_set)))
    use_lut = universe <= MAX_ENUMERATION_UNIVERSE
    if use_lut:
        seen = np.zeros(1 << universe, dtype=bool)
        idx = np.fromiter(members, dtype=np.int64, count=len(members))
        seen[idx] = True
        all_sorted = None
    else:
        seen = None
        all_sorted = np.sort(
            np.fromiter(members, dtype=np.uint64, count=len(members))
        )
    fresh_arrays: list[np.ndarray] = []
    fresh_total = 0
    block = max(1, (1 << 22) // max(len(members), 1))

    def scan(rows: np.ndarray, cols_arr: np.ndarray, triangle: bool):
        nonlocal fresh_total
        if fresh_total > room:
            raise CombinatorialBudgetExceeded(
                f"closure step overflows the {room + len(members)}-member budget"
            )
        for start in range(0, len(rows), block):
            a = rows[start : start + block]
            inter = a[:, None] & cols_arr[None, :]
            keep = inter != 0
            if triangle:
                ri = np.arange(start, start + len(a))[:, None]
                keep &= np.arange(len(cols_arr))[None, :] > ri
            if not keep.any():
                continue
            ii, jj = np.nonzero(keep)
            pint = inter[keep]
            if use_lut:
                blocked = seen[pint.astype(np.int64)]
            else:
                blocked = np.isin(pint, all_sorted)
            if blocked.all():
                continue
            pi = a[ii[~blocked]]
            pj = cols_arr[jj[~blocked]]
            pint = pint[~blocked]
            puni = pi | pj
            while True:
                live = pint != 0
                if not live.any():
                    break
                low = pint & (~pint + np.uint64(1))
                em = (puni ^ low)[live]
                if use_lut:
                    ei = np.unique(em.astype(np.int64))
                    new = ei[~seen[ei]]
                    if len(new):
                        seen[new] = True
                        fresh_arrays.append(new)
                        fresh_total += len(new)
                else:
                    fresh_arrays.append(em.astype(np.int64))
                    fresh_total += len(em)
                pint = pint ^ low
                if fresh_total > room:
                    raise CombinatorialBudgetExceeded(
                        f"closure step overflows the {room + len(members)}-member budget"
                    )

    if len(older):
        scan(front, older, triangle=False)
    scan(front, front, triangle=True)
    if not fresh_arrays:
        return set()
    if use_lut:
        return {int(x) for arr in fresh_arrays for x in arr}
    merged = np.unique(np.concatenate(fresh_arrays))
    return {int(x) for x in merged} - members


def _b_step_python(members: set[int], frontier: set[int]) -> set[int]:
    ordered = sorted(members)
    fresh: set[int] = set()
    for idx, a in enumerate(ordered):
        for b in ordered[idx + 1 :]:
            if a not in frontier and b not in frontier:
                continue
            inter = a & b
            if inter == 0 or inter in members:
                continue
            union = a | b
            for c in iter_bits(inter):
                x = union & ~(1 << c)
                if x not in members:
                    fresh.add(x)
    return fresh


# ---------------------------------------------------------------------------
# queries and statistics


def is_dependent_in_derived(result: DerivedResult, circuit_set: int) -> str:
    """Classify a circuit set as dependent / independent / unknown.

    Dependence is certain once any derived circuit is contained in the
    set; independence is only certain when the derivation is complete.
    """
    if up_contains_masks(result.delta.circuits, circuit_set):
        return "dependent"
    return "independent" if result.complete else "unknown"


def up_contains_masks(masks, x: int) -> bool:
    for mmask in masks:
        if mmask & ~x == 0:
            return True
    return False


@dataclass
class DerivedStats:
    size_histogram: dict[int, int]
    depth_histogram: dict[int, int]
    rank: int
    rank_bound: int
    connected: bool
    triangle_coverage: list[bool]
    complete: bool

    def to_dict(self) -> dict:
        return {
            "size_histogram": {str(k): v for k, v in sorted(self.size_histogram.items())},
            "depth_histogram": {str(k): v for k, v in sorted(self.depth_histogram.items())},
            "rank": self.rank,
            "rank_bound": self.rank_bound,
            "connected": self.connected,
            "elements_in_triangle": sum(self.triangle_coverage),
            "ground_size": len(self.triangle_coverage),
            "complete": self.complete,
        }

    def histogram_csv(self) -> str:
        lines = ["size,count"]
        for k in sorted(self.size_histogram):
            lines.append(f"{k},{self.size_histogram[k]}")
        return "\n".join(lines) + "\n"


def derived_stats(result: DerivedResult) -> DerivedStats:
    """Circuit-size and depth histograms, rank, connectivity, triangles."""
    delta = result.delta
    sizes: dict[int, int] = {}
    depths: dict[int, int] = {}
    for c in delta.circuits:
        sizes[c.bit_count()] = sizes.get(c.bit_count(), 0) + 1
        d = result.depths[c]
        depths[d] = depths.get(d, 0) + 1
    in_triangle = [False] * delta.n
    for c in delta.circuits:
        if c.bit_count() == 3:
            for e in iter_bits(c):
                in_triangle[e] = True
    return DerivedStats(
        sizes,
        depths,
        delta.rank(),
        result.base.n - result.base.rank(),
        delta.is_connected(),
        in_triangle,
        result.complete,
    )


def hanging_extension_check(m: Matroid, s: int, c_index: int) -> tuple[bool, bool | None]:
    """Probe the seed family with a circuit hanging off a set's support.

    Returns (hypotheses_hold, extension_in_seed).  The hypotheses are
    that the set is outside the seed family and the indexed circuit has
    an element outside the set's support; when they hold the extension
    by that circuit never lands in the seed family.
    """
    if s & (1 << c_index):
        raise ValueError("circuit index already in the set")
    if a0_contains(m, s):
        return False, None
    if m.circuits[c_index] & ~support_of(m, s) == 0:
        return False, None
    return True, a0_contains(m, s | (1 << c_index))


@dataclass
class SeedStepBreakdown:
    """Candidate pools of the first closure step, by generator sizes.

    ``pool_33`` collects the union-minus-shared sets from pairs of
    seed 3-sets; the other pools keep only candidates that escape the
    seed family.  Pools from generator sizes (3,4) and (4,4) cover every
    other way a first-step candidate of size <= nullity can arise.
    """

    pool_33: list[int]
    pool_33_new: list[int]
    pool_33_new_3sets: list[int]
    pool_34_new: list[int]
    pool_44_new: list[int]

    def support_histogram(self, m: Matroid, masks: list[int]) -> dict[int, int]:
        out: dict[int, int] = {}
        for x in masks:
            k = support_of(m, x).bit_count()
            out[k] = out.get(k, 0) + 1
        return out

    def to_dict(self, m: Matroid) -> dict:
        return {
            "pool_33": len(self.pool_33),
            "pool_33_support_histogram": {
                str(k): v
                for k, v in sorted(self.support_histogram(m, self.pool_33).items())
            },
            "pool_33_new": len(self.pool_33_new),
            "pool_33_new_3sets": len(self.pool_33_new_3sets),
            "pool_34_new": len(self.pool_34_new),
            "pool_44_new": len(self.pool_44_new),
        }


def seed_step_breakdown(m: Matroid) -> SeedStepBreakdown:
    """First-closure-step candidates over the seed family, by pair shape.

    Only candidates of size at most nullity(M) can escape the seed
    family, and 4-set candidates need generator pairs with a 5-set
    union; with the simplicity of the seed this pins the generator
    sizes to (3,3), (3,4) and (4,4).  Pairs are grouped by shared
    subsets instead of scanned densely.
    """
    threes = a0_size_class(m, 3)
    fours = a0_size_class(m, 4)
    oracle = _NullityOracle(m)

    def in_a0(x: int) -> bool:
        return x.bit_count() > oracle.nullity(support_of(m, x))

    pool_33: set[int] = set()
    pool_33_3sets: set[int] = set()
    for a, b in itertools.combinations(threes, 2):
        inter = a & b
        pc = inter.bit_count()
        if pc == 1:
            pool_33.add((a | b) ^ inter)
        elif pc == 2:
            union = a | b
            for c in iter_bits(inter):
                pool_33_3sets.add(union & ~(1 << c))

    # bucket the seed 4-sets by their 2- and 3-subsets for sparse pairing
    by_pair: dict[int, list[int]] = {}
    by_triple: dict[int, list[int]] = {}
    for f in fours:
        els = set_of(f)
        for two in itertools.combinations(els, 2):
            by_pair.setdefault((1 << two[0]) | (1 << two[1]), []).append(f)
        for three in itertools.combinations(els, 3):
            by_triple.setdefault(
                (1 << three[0]) | (1 << three[1]) | (1 << three[2]), []
            ).append(f)

    pool_34_new: set[int] = set()
    for a in threes:
        els = set_of(a)
        for two in itertools.combinations(els, 2):
            key = (1 << two[0]) | (1 << two[1])
            for f in by_pair.get(key, ()):
                if (a & f) != key:
                    continue
                union = a | f
                for c in iter_bits(key):
                    x = union & ~(1 << c)
                    if not in_a0(x):
                        pool_34_new.add(x)

    pool_44_new: set[int] = set()
    for key, bucket in by_triple.items():
        if len(bucket) < 2 or in_a0(key):
            continue
        for f1, f2 in itertools.combinations(bucket, 2):
            union = f1 | f2
            for c in iter_bits(key):
                x = union & ~(1 << c)
                if not in_a0(x):
                    pool_44_new.add(x)

    return SeedStepBreakdown(
        sorted(pool_33, key=canonical_key),
        sorted((x for x in pool_33 if not in_a0(x)), key=canonical_key),
        sorted((x for x in pool_33_3sets if not in_a0(x)), key=canonical_key),
        sorted(pool_34_new, key=canonical_key),
        sorted(pool_44_new, key=canonical_key),
    )
