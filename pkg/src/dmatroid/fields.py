"""Exact arithmetic for prime fields, quadratic extensions, and rationals.

Field elements are plain values (ints, coefficient pairs, Fractions); a
field object carries the operations.  Everything is exact: no floating
point anywhere, so zero tests certify rank statements.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any, Sequence

MAX_PRIME = 1 << 31


class FieldError(Exception):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for d in range(2, int(p**0.5) + 1):
        if p % d == 0:
            return False
    return True


class PrimeField:
    """GF(p); elements are ints reduced to 0..p-1."""

    def __init__(self, p: int):
        if p > MAX_PRIME or not _is_prime(p):
            raise FieldError(f"{p} is not a prime below 2^31")
        self.p = p

    name = property(lambda self: f"GF({self.p})")
    zero = property(lambda self: 0)
    one = property(lambda self: 1)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def from_int(self, k: int):
        return k % self.p

    def parse(self, s: str):
        return int(s) % self.p

    def to_str(self, a) -> str:
        return str(a % self.p)

    def spec_dict(self) -> dict | str:
        return {"p": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("p", self.p))

    def __repr__(self):
        return self.name


_EXT_TERM = re.compile(r"([+-]?[^+-]+)")


class QuadraticExtField:
    """GF(p^2) as GF(p)[a] / (a^2 + c1*a + c0); elements are (a0, a1) pairs.

    The modulus must be irreducible over GF(p).  Any irreducible choice
    gives the same matroids downstream (they are invariant under field
    isomorphism); the modulus is recorded in serialized output so runs
    are reproducible.
    """

    def __init__(self, p: int, modulus: Sequence[int] = ()):
        self.base = PrimeField(p)
        self.p = p
        if not modulus:
            modulus = self._default_modulus(p)
        c0, c1 = modulus[0] % p, modulus[1] % p
        if p == 2:
            irreducible = (c0, c1) == (1, 1)
        else:
            disc = (c1 * c1 - 4 * c0) % p
            irreducible = pow(disc, (p - 1) // 2, p) == p - 1
        if not irreducible:
            raise FieldError(f"x^2 + {c1}x + {c0} is reducible over GF({p})")
        self.c0, self.c1 = c0, c1

    @staticmethod
    def _default_modulus(p: int) -> tuple[int, int]:
        if p == 2:
            return 1, 1
        # x^2 - r for the smallest non-residue r
        for r in range(2, p):
            if pow(r, (p - 1) // 2, p) == p - 1:
                return (-r) % p, 0
        raise FieldError(f"no quadratic non-residue mod {p}")

    name = property(lambda self: f"GF({self.p}^2)")
    zero = property(lambda self: (0, 0))
    one = property(lambda self: (1, 0))

    def add(self, a, b):
        return ((a[0] + b[0]) % self.p, (a[1] + b[1]) % self.p)

    def sub(self, a, b):
        return ((a[0] - b[0]) % self.p, (a[1] - b[1]) % self.p)

    def mul(self, a, b):
        # (a0 + a1 x)(b0 + b1 x) with x^2 = -c1 x - c0
        hi = a[1] * b[1]
        return (
            (a[0] * b[0] - self.c0 * hi) % self.p,
            (a[0] * b[1] + a[1] * b[0] - self.c1 * hi) % self.p,
        )

    def neg(self, a):
        return ((-a[0]) % self.p, (-a[1]) % self.p)

    def inv(self, a):
        # conjugate over GF(p): x -> -c1 - x; norm is a scalar
        a0, a1 = a
        conj = ((a0 - a1 * self.c1) % self.p, (-a1) % self.p)
        norm = (a0 * a0 - self.c1 * a0 * a1 + self.c0 * a1 * a1) % self.p
        ninv = self.base.inv(norm)
        return (conj[0] * ninv % self.p, conj[1] * ninv % self.p)

    def is_zero(self, a) -> bool:
        return a[0] % self.p == 0 and a[1] % self.p == 0

    def from_int(self, k: int):
        return (k % self.p, 0)

    def parse(self, s: str):
        """Parse '3a+2', '-a', '5', '2a-1' into a coefficient pair."""
        s = s.replace(" ", "")
        if not s:
            raise FieldError("empty field element")
        a0 = a1 = 0
        for term in _EXT_TERM.findall(s):
            if "a" in term:
                coeff = term[: term.index("a")]
                if coeff in ("", "+"):
                    c = 1
                elif coeff == "-":
                    c = -1
                else:
                    c = int(coeff)
                a1 += c
            else:
                a0 += int(term)
        return (a0 % self.p, a1 % self.p)

    def to_str(self, a) -> str:
        a0, a1 = a[0] % self.p, a[1] % self.p
        if a1 == 0:
            return str(a0)
        head = "a" if a1 == 1 else f"{a1}a"
        return head if a0 == 0 else f"{head}+{a0}"

    def spec_dict(self) -> dict | str:
        return {"p": self.p, "modulus": [self.c0, self.c1, 1]}

    def __eq__(self, other):
        return (
            isinstance(other, QuadraticExtField)
            and (other.p, other.c0, other.c1) == (self.p, self.c0, self.c1)
        )

    def __hash__(self):
        return hash(("ext", self.p, self.c0, self.c1))

    def __repr__(self):
        return self.name


class RationalField:
    """Exact rationals; elements are Fractions kept in lowest terms."""

    name = property(lambda self: "Q")
    zero = property(lambda self: Fraction(0))
    one = property(lambda self: Fraction(1))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def is_zero(self, a) -> bool:
        return a == 0

    def from_int(self, k: int):
        return Fraction(k)

    def parse(self, s: str):
        return Fraction(s)

    def to_str(self, a) -> str:
        return str(Fraction(a))

    def spec_dict(self) -> dict | str:
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


Field = Any  # duck-typed: PrimeField | QuadraticExtField | RationalField


def field_from_spec(spec: dict | str) -> Field:
    """Build a field from its JSON descriptor ({"p": ...} / "Q")."""
    if spec == "Q":
        return RationalField()
    if isinstance(spec, dict) and "p" in spec:
        p = int(spec["p"])
        if "modulus" in spec:
            mod = [int(c) for c in spec["modulus"]]
            if len(mod) != 3 or mod[2] != 1:
                raise FieldError("modulus must be a monic quadratic [c0, c1, 1]")
            return QuadraticExtField(p, (mod[0], mod[1]))
        if "ext" in spec and int(spec["ext"]) == 2:
            return QuadraticExtField(p)
        return PrimeField(p)
    raise FieldError(f"unrecognized field spec {spec!r}")


def parse_field_argument(text: str) -> Field:
    """CLI field syntax: 'Q', a prime like '10007', or a prime square like '49'."""
    if text.upper() in ("Q", "RATIONAL", "RATIONALS"):
        return RationalField()
    n = int(text)
    if _is_prime(n):
        return PrimeField(n)
    root = int(round(n**0.5))
    if root * root == n and _is_prime(root):
        return QuadraticExtField(root)
    raise FieldError(f"field must be Q, a prime, or a prime square; got {text}")
