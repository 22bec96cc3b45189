from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import dmatroid as dm
from dmatroid.core import mask_of
from dmatroid.families import (
    Antichain,
    Family,
    UniverseTooLarge,
    count_upward_closure,
    epsilon_step,
    minimalize,
    up_contains,
)

from conftest import circuit_set_mask


def fam(universe, *sets):
    return Family(universe, [mask_of(s) for s in sets])


def test_family_deterministic_iteration():
    f = fam(4, [2, 3], [0], [1, 2])
    assert [dm.set_of(m) for m in f] == [(0,), (1, 2), (2, 3)]


def test_antichain_rejects_containment():
    with pytest.raises(ValueError):
        Antichain(4, [mask_of([0]), mask_of([0, 1])])


def test_family_rejects_out_of_universe():
    with pytest.raises(ValueError):
        Family(3, [mask_of([5])])


def test_minimalize_basic():
    got = minimalize(fam(4, [1, 2], [1, 2, 3], [1, 3]))
    assert got.masks == {mask_of([1, 2]), mask_of([1, 3])}


def test_minimalize_idempotent_on_antichain():
    a = minimalize(fam(5, [0, 1], [2, 3], [0, 2, 4]))
    assert minimalize(a) == a


def test_minimalize_seed_of_u36(u36):
    a0 = dm.a0_minimal(u36)
    sizes = sorted(m.bit_count() for m in a0.masks)
    assert sizes.count(3) == 60 and sizes.count(4) == 735
    assert minimalize(a0) == a0


def test_up_contains():
    a = Antichain(3, [mask_of([0, 1])])
    assert up_contains(a, mask_of([0, 1, 2]))
    assert not up_contains(a, mask_of([0, 2]))


def test_up_contains_vamos_example(vamos, vamos_two_steps):
    s = circuit_set_mask(vamos, "adgh", "bcef", "bcgh", "defgh")
    circuits = Antichain(41, vamos_two_steps.delta.circuits, _trusted=True)
    assert up_contains(circuits, s)


def test_epsilon_of_empty_and_disjoint():
    assert epsilon_step(fam(4)) == fam(4)
    disjoint = fam(4, [0, 1], [2, 3])
    assert epsilon_step(disjoint) == disjoint


def test_epsilon_forced_new_member():
    f = fam(3, [0, 1], [1, 2])
    assert mask_of([0, 2]) in epsilon_step(f).masks


def test_epsilon_vamos_appendix_pair(vamos):
    a1 = circuit_set_mask(vamos, "adef", "bcef", "abcd")
    a2 = circuit_set_mask(vamos, "adgh", "bcgh", "abcd")
    new = circuit_set_mask(vamos, "adef", "bcef", "adgh", "bcgh")
    out = epsilon_step(Family(41, [a1, a2]))
    assert new in out.masks


def test_count_upward_closure_examples(u36, derived_u36):
    assert count_upward_closure(Antichain(3, [mask_of([0])]), 3) == 4
    assert count_upward_closure(Antichain(3, []), 3) == 0
    a = Antichain(15, derived_u36.delta.circuits, _trusted=True)
    assert count_upward_closure(a, 15) == 32252


def test_count_upward_closure_rejects_large_universe():
    with pytest.raises(UniverseTooLarge):
        count_upward_closure(Antichain(3, [1]), 26)


# -- property tests ----------------------------------------------------------

small_families = st.lists(
    st.integers(min_value=1, max_value=(1 << 7) - 1), min_size=0, max_size=14
).map(lambda masks: Family(7, masks))


@given(small_families)
def test_epsilon_contains_input(f):
    assert f.masks <= epsilon_step(f).masks


@given(small_families)
def test_epsilon_independent_of_member_order(f):
    # the step is a set union over unordered pairs; shuffling storage
    # cannot change it
    again = Family(7, list(f.masks)[::-1])
    assert epsilon_step(f) == epsilon_step(again)


@given(small_families, st.integers(min_value=0, max_value=(1 << 7) - 1))
def test_up_contains_matches_raw_family(f, x):
    assert up_contains(minimalize(f), x) == any(y & ~x == 0 for y in f.masks)


@given(small_families)
def test_minimalize_idempotent(f):
    once = minimalize(f)
    assert minimalize(once) == once


@given(
    st.lists(
        st.integers(min_value=0, max_value=(1 << 7) - 1).filter(
            lambda m: m.bit_count() >= 3
        ),
        max_size=10,
    )
)
def test_epsilon_preserves_min_size_three(masks):
    f = Family(7, masks)
    out = epsilon_step(f)
    assert all(m.bit_count() >= 3 for m in out.masks)


@given(small_families, st.integers(min_value=0, max_value=(1 << 7) - 1))
@settings(max_examples=50)
def test_count_matches_membership_loop(f, _x):
    a = minimalize(f)
    want = sum(1 for s in range(1 << 7) if up_contains(a, s))
    assert count_upward_closure(a, 7) == want
