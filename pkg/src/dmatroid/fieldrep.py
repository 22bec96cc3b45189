"""Representations, exact linear algebra, and representation-derived matroids.

Covers the column matroid of a matrix over GF(p), GF(p^2) or the
rationals, circuit vectors (minimal-support dual codewords), the derived
matroid built from them, the binary-matroid variant via circuit
indicator vectors, seeded random uniform representations, and the weak
order on matroids with a common ground set.

Rational computations clear denominators and run fraction-free integer
elimination, so every zero test is a certified integer identity.  The
hot circuit-enumeration path uses int64 vectors with an overflow guard
and falls back to arbitrary-precision integers when the guard trips.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import Matroid, iter_bits, mask_of, set_of
from .fields import (
    Field,
    FieldError,
    PrimeField,
    QuadraticExtField,
    RationalField,
    field_from_spec,
)

INT64_GUARD = 1 << 61


class NotACircuit(Exception):
    """The given set does not support a one-dimensional dependency."""


class RepresentationMismatch(Exception):
    """The supplied matrix does not represent the supplied matroid."""


class FieldTooSmall(Exception):
    """Could not sample a generic matrix after the resample budget."""


class GroundSizeMismatch(Exception):
    """Weak-order comparison of matroids on different ground sizes."""


@dataclass(frozen=True)
class FieldMatrix:
    """Dense matrix with entries in one exact field."""

    field: Field
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples

    def __post_init__(self):
        if len(self.entries) != self.rows or any(
            len(r) != self.cols for r in self.entries
        ):
            raise ValueError("entry grid does not match rows x cols")

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> list:
        return [self.entries[i][j] for i in range(self.rows)]

    def to_dict(self) -> dict:
        return {
            "field": self.field.spec_dict(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": [
                [self.field.to_str(x) for x in row] for row in self.entries
            ],
        }

    @staticmethod
    def from_dict(d: dict) -> "FieldMatrix":
        fld = field_from_spec(d["field"])
        entries = tuple(
            tuple(fld.parse(s) for s in row) for row in d["entries"]
        )
        return FieldMatrix(fld, int(d["rows"]), int(d["cols"]), entries)


def matrix_from_rows(field: Field, rows: Sequence[Sequence]) -> FieldMatrix:
    entries = tuple(tuple(row) for row in rows)
    return FieldMatrix(field, len(entries), len(entries[0]) if entries else 0, entries)


class Representation:
    """A full-row-rank matrix plus the convention for what its rows span.

    primal: rows generate the code Q whose column matroid is M.
    dual:   rows generate the dual code (the paper-style input); the
            primal generator is recovered once as a kernel basis.
    """

    def __init__(self, matrix: FieldMatrix, convention: str = "primal"):
        if convention not in ("primal", "dual"):
            raise ValueError(f"convention must be primal or dual, got {convention!r}")
        rank, _ = rank_and_kernel(matrix)
        if rank != matrix.rows:
            raise ValueError("representation matrix must have full row rank")
        self.matrix = matrix
        self.convention = convention
        self._primal: FieldMatrix | None = None

    @property
    def field(self) -> Field:
        return self.matrix.field

    @property
    def ground_size(self) -> int:
        return self.matrix.cols

    def primal_matrix(self) -> FieldMatrix:
        """A generator matrix of the primal code Q (rows spanning Q)."""
        if self._primal is None:
            if self.convention == "primal":
                self._primal = self.matrix
            else:
                _, kernel = rank_and_kernel(self.matrix)
                self._primal = kernel
        return self._primal

    def to_dict(self) -> dict:
        d = self.matrix.to_dict()
        d["convention"] = self.convention
        return d

    @staticmethod
    def from_dict(d: dict) -> "Representation":
        return Representation(FieldMatrix.from_dict(d), d.get("convention", "primal"))


# ---------------------------------------------------------------------------
# exact elimination


def _row_reduce(field: Field, rows: list[list]) -> tuple[list[list], list[int]]:
    """In-place reduced row echelon form; returns (rows, pivot columns)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if not field.is_zero(rows[i][col]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = field.inv(rows[r][col])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not field.is_zero(rows[i][col]):
                c = rows[i][col]
                rows[i] = [
                    field.sub(x, field.mul(c, y)) for x, y in zip(rows[i], rows[r])
                ]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank_and_kernel(mx: FieldMatrix) -> tuple[int, FieldMatrix]:
    """Rank of the matrix and a basis of its right null space (as rows).

    Kernel rows v satisfy M v = 0; their count is cols - rank.  For the
    rationals the elimination runs over cleared-denominator integers via
    the fraction-free update, then back-substitutes exactly.
    """
    field = mx.field
    rows = [list(r) for r in mx.entries]
    rows, pivots = _row_reduce(field, rows)
    rank = len(pivots)
    free = [j for j in range(mx.cols) if j not in pivots]
    kernel_rows = []
    for j in free:
        v = [field.zero] * mx.cols
        v[j] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(rows[r][j])
        kernel_rows.append(tuple(v))
    kernel = FieldMatrix(field, len(kernel_rows), mx.cols, tuple(kernel_rows))
    return rank, kernel


def _clear_denominators(vec: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in vec:
        den = den * x.denominator // math.gcd(den, x.denominator)
    out = [int(x * den) for x in vec]
    g = 0
    for v in out:
        g = math.gcd(g, v)
    if g > 1:
        out = [v // g for v in out]
    return out


# ---------------------------------------------------------------------------
# column matroids (minimal dependent column sets)


def _column_circuits_generic(field: Field, cols: list[list]) -> tuple[list[int], set[int]]:
    """Circuits of the column matroid by depth-first independent-set search.

    Every independent set is visited once through its sorted column
    order; dependent extensions are circuit candidates, confirmed after
    the search by checking that all their maximal proper subsets were
    found independent.
    """
    ncols = len(cols)
    nrows = len(cols[0]) if cols else 0
    indep: set[int] = {0}
    candidates: list[int] = []
    basis: list[tuple[int, list]] = []  # (pivot row, monic reduced vector)

    def reduce(vec: list) -> list:
        v = list(vec)
        for p, row in basis:
            c = v[p]
            if not field.is_zero(c):
                v = [field.sub(x, field.mul(c, y)) for x, y in zip(v, row)]
        return v

    def dfs(mask: int, start: int) -> None:
        for e in range(start, ncols):
            v = reduce(cols[e])
            pivot = next((i for i in range(nrows) if not field.is_zero(v[i])), None)
            child = mask | (1 << e)
            if pivot is None:
                candidates.append(child)
                continue
            indep.add(child)
            inv = field.inv(v[pivot])
            basis.append((pivot, [field.mul(inv, x) for x in v]))
            dfs(child, e + 1)
            basis.pop()

    dfs(0, 0)
    circuits = [
        c
        for c in candidates
        if all((c ^ (1 << x)) in indep for x in iter_bits(c))
    ]
    return circuits, indep


class _Int64Overflow(Exception):
    pass


def _column_circuits_int(cols: np.ndarray) -> tuple[list[int], set[int]]:
    """Integer specialization: fraction-free updates on int64 vectors.

    ``cols`` is (nrows, ncols).  Columns are reduced against a growing
    echelon basis with the cross-multiplication update and renormalized
    by their gcd, so dependence tests are exact integer zero tests.
    Raises _Int64Overflow if any update could leave the safe range.
    """
    nrows, ncols = cols.shape
    indep: set[int] = {0}
    candidates: list[int] = []

    def dfs(mask: int, col_idx: np.ndarray, vecs: np.ndarray) -> None:
        zero = ~vecs.any(axis=0)
        for j in np.nonzero(zero)[0]:
            candidates.append(mask | (1 << int(col_idx[j])))
        live = np.nonzero(~zero)[0]
        for pos_i, j in enumerate(live):
            e = int(col_idx[j])
            child = mask | (1 << e)
            indep.add(child)
            rest = live[pos_i + 1 :]
            if not len(rest):
                continue
            row = vecs[:, j]
            pivot = int(np.nonzero(row)[0][0])
            tail = vecs[:, rest]
            piv_val = int(row[pivot])
            m1 = int(np.abs(tail).max(initial=0))
            m2 = int(np.abs(row).max(initial=0))
            if m1 * max(abs(piv_val), m2) * 2 >= INT64_GUARD:
                raise _Int64Overflow
            new_tail = tail * piv_val - np.outer(row, tail[pivot, :])
            g = np.gcd.reduce(np.abs(new_tail), axis=0)
            g[g == 0] = 1
            new_tail //= g
            dfs(child, col_idx[rest], new_tail)

    dfs(0, np.arange(ncols), cols.copy())
    circuits = [
        c
        for c in candidates
        if all((c ^ (1 << x)) in indep for x in iter_bits(c))
    ]
    return circuits, indep


def _column_circuits(field: Field, columns: list[list]) -> tuple[list[int], set[int]]:
    if isinstance(field, RationalField) and columns:
        ints = [_clear_denominators(c) for c in columns]
        arr = np.array(ints, dtype=np.int64).T
        if len(ints) and np.abs(arr).max(initial=0) < 1 << 20:
            try:
                return _column_circuits_int(arr)
            except _Int64Overflow:
                pass
        cols = [[Fraction(v) for v in c] for c in ints]
        return _column_circuits_generic(field, cols)
    return _column_circuits_generic(field, columns)


def matroid_from_matrix(rep: Representation) -> Matroid:
    """Column matroid of a representation (on the primal generator).

    Circuits are the minimal column sets whose submatrix loses rank,
    found in increasing size up to rank + 1.
    """
    primal = rep.primal_matrix()
    if primal.cols > 64:
        raise ValueError(f"{primal.cols} columns exceed the 64-element ground cap")
    columns = [primal.column(j) for j in range(primal.cols)]
    circuits, _ = _column_circuits(primal.field, columns)
    return Matroid(primal.cols, circuits, validate=False)


def independent_count(rep: Representation) -> int:
    """Number of independent column sets, the empty set included."""
    primal = rep.primal_matrix()
    columns = [primal.column(j) for j in range(primal.cols)]
    _, indep = _column_circuits(primal.field, columns)
    return len(indep)


# ---------------------------------------------------------------------------
# circuit vectors and derived matroids


def circuit_vector(rep: Representation, circuit: int) -> tuple:
    """The dual codeword supported exactly on a circuit, normalized.

    Unique up to scale; normalized so the first nonzero coordinate is 1,
    and over the rationals cleared to coprime integers.  Raises
    NotACircuit if the solution space is not one-dimensional or the
    support shrinks.
    """
    field = rep.field
    n = rep.ground_size
    members = list(iter_bits(circuit))
    if rep.convention == "dual":
        g = rep.matrix
        outside = [j for j in range(n) if not (circuit >> j) & 1]
        rows = [[g.entries[i][j] for i in range(g.rows)] for j in outside]
        sub = FieldMatrix(field, len(rows), g.rows, tuple(tuple(r) for r in rows))
        _, kernel = rank_and_kernel(sub)
        if kernel.rows != 1:
            raise NotACircuit(
                f"{sorted(members)}: dependency space has dimension {kernel.rows}"
            )
        lam = kernel.row(0)
        vec = [
            _dot(field, lam, [g.entries[i][j] for i in range(g.rows)])
            for j in range(n)
        ]
    else:
        p = rep.primal_matrix()
        sub_cols = [[p.entries[i][j] for i in range(p.rows)] for j in members]
        sub = FieldMatrix(
            field, p.rows, len(members), tuple(zip(*sub_cols))
        )
        _, kernel = rank_and_kernel(sub)
        if kernel.rows != 1:
            raise NotACircuit(
                f"{sorted(members)}: dependency space has dimension {kernel.rows}"
            )
        coeffs = kernel.row(0)
        vec = [field.zero] * n
        for j, c in zip(members, coeffs):
            vec[j] = c
    support = {j for j in range(n) if not field.is_zero(vec[j])}
    if support != set(members):
        raise NotACircuit(f"{sorted(members)}: support shrank to {sorted(support)}")
    first = vec[min(support)]
    inv = field.inv(first)
    vec = [field.mul(inv, x) for x in vec]
    if isinstance(field, RationalField):
        vec = [Fraction(v) for v in _clear_denominators(vec)]
    return tuple(vec)


def _dot(field: Field, a: Sequence, b: Sequence):
    acc = field.zero
    for x, y in zip(a, b):
        acc = field.add(acc, field.mul(x, y))
    return acc


def ow_circuit_matrix(rep: Representation, base: Matroid | None = None) -> tuple[Matroid, FieldMatrix]:
    """Base matroid plus the n x |C| matrix of its circuit vectors.

    Columns follow the base matroid's canonical circuit order.
    """
    if base is None:
        base = matroid_from_matrix(rep)
    vecs = [circuit_vector(rep, c) for c in base.circuits]
    n = rep.ground_size
    entries = tuple(
        tuple(v[i] for v in vecs) for i in range(n)
    )
    return base, FieldMatrix(rep.field, n, len(vecs), entries)


def ow_derived(rep: Representation, base: Matroid | None = None) -> Matroid:
    """Derived matroid of a representation: the circuit-vector column matroid.

    Ground elements are the circuits of the base matroid in canonical
    order; scaling of circuit vectors cannot change the result.
    """
    base, mat = ow_circuit_matrix(rep, base)
    columns = [mat.column(j) for j in range(mat.cols)]
    circuits, _ = _column_circuits(rep.field, columns)
    labels = ["".join(base.label(e) for e in iter_bits(c)) for c in base.circuits]
    return Matroid(len(base.circuits), circuits, labels=labels, validate=False)


def longyear_derived(m: Matroid, binary_rep: Representation) -> Matroid:
    """Binary-matroid derived matroid via iterated symmetric differences.

    A circuit set is dependent exactly when some nonempty subset has an
    empty iterated symmetric difference, i.e. when the circuit indicator
    vectors are linearly dependent over GF(2); so this is the column
    matroid of the 0/1 circuit-incidence matrix.  The representation
    argument certifies that the input matroid is binary.
    """
    fld = binary_rep.field
    if not isinstance(fld, PrimeField) or fld.p != 2:
        raise RepresentationMismatch("certifying representation must be over GF(2)")
    if matroid_from_matrix(binary_rep) != m:
        raise RepresentationMismatch(
            "the GF(2) matrix does not represent the given matroid"
        )
    gf2 = fld
    columns = [
        [gf2.one if (c >> i) & 1 else gf2.zero for i in range(m.n)]
        for c in m.circuits
    ]
    circuits, _ = _column_circuits(gf2, columns)
    labels = ["".join(m.label(e) for e in iter_bits(c)) for c in m.circuits]
    return Matroid(len(m.circuits), circuits, labels=labels, validate=False)


# ---------------------------------------------------------------------------
# random representations


def random_uniform_rep(
    k: int,
    n: int,
    field: Field,
    seed: int,
    attempts: int = 64,
) -> Representation:
    """Seeded random k x n matrix with every k x k minor nonzero.

    The nonzero-minor condition certifies that the column matroid is
    U(k, n).  Entries come from a counter-based generator keyed by the
    seed, so results are reproducible; candidate matrices are resampled
    until the condition holds or the attempt budget runs out.
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    for _ in range(attempts):
        if isinstance(field, RationalField):
            raw = rng.integers(1, 11, size=(k, n))
            entries = tuple(
                tuple(Fraction(int(x)) for x in row) for row in raw
            )
        elif isinstance(field, QuadraticExtField):
            raw0 = rng.integers(0, field.p, size=(k, n))
            raw1 = rng.integers(0, field.p, size=(k, n))
            entries = tuple(
                tuple((int(a), int(b)) for a, b in zip(r0, r1))
                for r0, r1 in zip(raw0, raw1)
            )
        else:
            raw = rng.integers(0, field.p, size=(k, n))
            entries = tuple(tuple(int(x) for x in row) for row in raw)
        mx = FieldMatrix(field, k, n, entries)
        if _all_top_minors_nonzero(mx, k):
            return Representation(mx, "primal")
    raise FieldTooSmall(
        f"no matrix with all {k}x{k} minors nonzero in {attempts} attempts over {field.name}"
    )


def _all_top_minors_nonzero(mx: FieldMatrix, k: int) -> bool:
    for cols in itertools.combinations(range(mx.cols), k):
        rows = [[mx.entries[i][j] for j in cols] for i in range(k)]
        _, pivots = _row_reduce(mx.field, rows)
        if len(pivots) != k:
            return False
    return True


# ---------------------------------------------------------------------------
# weak order


class WeakOrder(Enum):
    EQUAL = "equal"
    GREATER_OR_EQUAL = "greater-or-equal"
    LESS_OR_EQUAL = "less-or-equal"
    INCOMPARABLE = "incomparable"


def _all_circuits_dependent_in(a: Matroid, b: Matroid) -> bool:
    # every circuit of a contains a circuit of b
    for c in a.circuits:
        if not any(d & ~c == 0 for d in b.circuits):
            return False
    return True


def weak_order_compare(n1: Matroid, n2: Matroid) -> WeakOrder:
    """Weak-order verdict: n1 >= n2 when n1's dependents are n2's dependents.

    Dependence is upward closed, so it suffices to test the circuits.
    A strictly greater matroid has strictly fewer dependencies.
    """
    if n1.n != n2.n:
        raise GroundSizeMismatch(f"ground sizes differ: {n1.n} vs {n2.n}")
    ge = _all_circuits_dependent_in(n1, n2)
    le = _all_circuits_dependent_in(n2, n1)
    if ge and le:
        return WeakOrder.EQUAL
    if ge:
        return WeakOrder.GREATER_OR_EQUAL
    if le:
        return WeakOrder.LESS_OR_EQUAL
    return WeakOrder.INCOMPARABLE


def circuit_diff(n1: Matroid, n2: Matroid) -> tuple[list[int], list[int]]:
    """Circuits only in n1 and only in n2 (as masks, canonical order)."""
    c1, c2 = set(n1.circuits), set(n2.circuits)
    only1 = [c for c in n1.circuits if c not in c2]
    only2 = [c for c in n2.circuits if c not in c1]
    return only1, only2
