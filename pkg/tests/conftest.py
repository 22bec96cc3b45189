from __future__ import annotations

import json

import pytest

import dmatroid as dm
from dmatroid import fieldrep, generators


def load_rep(name: str) -> fieldrep.Representation:
    with open(generators.fixture_path(name + ".json")) as fh:
        return fieldrep.Representation.from_dict(json.load(fh))


@pytest.fixture(scope="session")
def k4() -> dm.Matroid:
    return dm.graphic(dm.k4_graph())


@pytest.fixture(scope="session")
def q6() -> dm.Matroid:
    return dm.q6()


@pytest.fixture(scope="session")
def vamos() -> dm.Matroid:
    return dm.vamos()


@pytest.fixture(scope="session")
def u36() -> dm.Matroid:
    return dm.uniform(3, 6)


@pytest.fixture(scope="session")
def derived_k4(k4):
    return dm.derive_circuits(k4)


@pytest.fixture(scope="session")
def derived_u36(u36):
    return dm.derive_circuits(u36)


@pytest.fixture(scope="session")
def vamos_two_steps(vamos):
    return dm.derive_circuits(vamos, dm.DeriveLimits(max_iterations=2))


@pytest.fixture(scope="session")
def q1_rep():
    return load_rep("q1_f7")


@pytest.fixture(scope="session")
def q2_rep():
    return load_rep("q2_f7")


@pytest.fixture(scope="session")
def ow_q1(q1_rep, u36):
    return dm.ow_derived(q1_rep, u36)


@pytest.fixture(scope="session")
def ow_q2(q2_rep, u36):
    return dm.ow_derived(q2_rep, u36)


def circuit_index(m: dm.Matroid, labels: str | tuple) -> int:
    """Index of a circuit given by element labels (e.g. 'adgh' or '124')."""
    if m.labels is not None:
        elems = [list(m.labels).index(ch) for ch in labels]
    else:
        elems = [int(ch) for ch in labels]
    return m.circuits.index(dm.mask_of(elems))


def circuit_set_mask(m: dm.Matroid, *words: str) -> int:
    """Bitmask over circuit indices for a family given by label words."""
    return dm.mask_of(circuit_index(m, w) for w in words)
