"""Constructors for the matroids used throughout, plus matroid file I/O."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

from .core import Matroid, from_circuits, mask_of

MAX_CYCLES = 10**6


class ParseError(Exception):
    """Malformed matroid/graph/matrix file; message carries the field."""


def uniform(k: int, n: int) -> Matroid:
    """Uniform matroid U(k, n): circuits are all (k+1)-subsets.

    k = n gives the free matroid (no circuits); k = 0 gives n loops.
    """
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    circuits = [mask_of(c) for c in itertools.combinations(range(n), k + 1)]
    return from_circuits(n, circuits)


@dataclass
class Graph:
    """Undirected multigraph with canonically numbered edges.

    Edges keep their input order; edge i of the graph becomes ground
    element i of the graphic matroid.  Self-loops are allowed and map to
    size-1 circuits.
    """

    vertices: int
    edges: list[tuple[int, int]] = field(default_factory=list)
    labels: list[str] | None = None

    def __post_init__(self):
        for u, v in self.edges:
            if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise ValueError(f"edge ({u},{v}) outside vertex range")

    def to_dict(self) -> dict:
        d: dict = {"vertices": self.vertices, "edges": [list(e) for e in self.edges]}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        return d

    @staticmethod
    def from_dict(d: dict) -> "Graph":
        return Graph(
            int(d["vertices"]),
            [(int(u), int(v)) for u, v in d["edges"]],
            d.get("labels"),
        )


def graphic(g: Graph) -> Matroid:
    """Graphic matroid: circuits are the edge sets of simple cycles.

    Cycles are enumerated by DFS paths anchored at their smallest vertex;
    the edge-set form deduplicates traversal directions and parallel
    routes.  Bounded at one million cycles.
    """
    m = len(g.edges)
    if m > 64:
        raise ValueError(f"{m} edges exceed the 64-element ground cap")
    labels = g.labels if g.labels is not None else [str(i + 1) for i in range(m)]

    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(g.vertices)}
    circuits: set[int] = set()
    for i, (u, v) in enumerate(g.edges):
        if u == v:
            circuits.add(1 << i)  # self-loop
        else:
            adj[u].append((v, i))
            adj[v].append((u, i))

    def extend(anchor: int, vertex: int, visited: int, edge_mask: int) -> None:
        if len(circuits) > MAX_CYCLES:
            raise ValueError("cycle budget exceeded")
        for nxt, ei in adj[vertex]:
            bit = 1 << ei
            if edge_mask & bit:
                continue
            if nxt == anchor and edge_mask:
                circuits.add(edge_mask | bit)
                continue
            if nxt <= anchor or visited & (1 << nxt):
                continue
            extend(anchor, nxt, visited | (1 << nxt), edge_mask | bit)

    for a in range(g.vertices):
        extend(a, a, 1 << a, 0)

    return from_circuits(m, sorted(circuits), labels=labels)


def k4_graph() -> Graph:
    """K4 with edges ab, ac, ad, bc, bd, cd labeled 1..6."""
    return Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
                 labels=["1", "2", "3", "4", "5", "6"])


def vamos() -> Matroid:
    """The rank-4 matroid on a..h whose only 4-circuits are five planes.

    The 4-circuits are abcd, adef, adgh, bcef, bcgh; every 5-set
    containing none of them is also a circuit, giving 41 circuits.
    """
    names = "abcdefgh"
    four = [mask_of(names.index(ch) for ch in word)
            for word in ("abcd", "adef", "adgh", "bcef", "bcgh")]
    circuits = list(four)
    for c in itertools.combinations(range(8), 5):
        m = mask_of(c)
        if not any(f & ~m == 0 for f in four):
            circuits.append(m)
    return from_circuits(8, circuits, labels=list(names))


def q6() -> Matroid:
    """Rank-3 six-point matroid with two 3-point lines (11 circuits).

    Circuits: 123, 345, and every 4-set containing neither line.
    """
    lines = [mask_of([0, 1, 2]), mask_of([2, 3, 4])]
    circuits = list(lines)
    for c in itertools.combinations(range(6), 4):
        m = mask_of(c)
        if not any(l & ~m == 0 for l in lines):
            circuits.append(m)
    return from_circuits(6, circuits, labels=[str(i + 1) for i in range(6)])


# -- file I/O ----------------------------------------------------------------


def _read_json(path: str | Path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def load_matroid(path: str | Path, validate_exchange: bool = False) -> Matroid:
    """Read a matroid JSON file; canonicalizes and validates C1/C2 (C3 on flag)."""
    d = _read_json(path)
    for key in ("n", "circuits"):
        if key not in d:
            raise ParseError(f"{path}: missing field '{key}'")
    return Matroid.from_dict(d, validate_exchange=validate_exchange)


def save_matroid(m: Matroid, path: str | Path) -> None:
    """Write a matroid in canonical JSON form (round-trips exactly)."""
    with open(path, "w") as fh:
        json.dump(m.to_dict(), fh, indent=1)
        fh.write("\n")


def load_graph(path: str | Path) -> Graph:
    d = _read_json(path)
    for key in ("vertices", "edges"):
        if key not in d:
            raise ParseError(f"{path}: missing field '{key}'")
    return Graph.from_dict(d)


def fixture_path(name: str) -> Path:
    """Path of a packaged fixture file (paper matrices and matroids)."""
    return Path(__file__).parent / "fixtures" / name
