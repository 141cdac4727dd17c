"""Finite fields GF(p^k) for p in {2, 3} with discrete-log arithmetic.

Elements are represented by integer codes: code 0 is the zero element and
code c (1 <= c <= p^k - 1) is gen^(c-1) for the fixed primitive element
``gen``.  Multiplication and inversion are exponent arithmetic; addition
goes through a Zech logarithm table built once per field.

Defining moduli are Conway polynomials, shipped as static data below.
Conway polynomials are norm-compatible across extensions, so the map
gen_sub -> gen_ext^((|ext|-1)/(|sub|-1)) is a field embedding; `embed`,
`into_subfield` and `trace` rely on this.

Element text form: ``0``, ``1``, then powers of the generator written
``w``, ``w2``, ... for GF(9), ``z``, ``z2``, ... for GF(4) and ``x``,
``x2``, ... for other extension fields.  Parsing and printing round-trip.
"""

from __future__ import annotations

import functools
from typing import Iterator

# Conway polynomials C_{p,k}, coefficient lists with constant term first
# (monic: last entry is 1).  Regenerated and spot-checked by the test suite.
CONWAY_POLYNOMIALS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (2, 10): (1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1),
    (2, 11): (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 12): (1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 2, 1, 0, 2, 0, 1),
    (3, 7): (1, 0, 2, 0, 0, 0, 0, 1),
    (3, 8): (2, 2, 2, 0, 1, 2, 0, 0, 1),
    (3, 9): (1, 1, 2, 2, 0, 0, 0, 0, 0, 1),
    (3, 10): (2, 1, 0, 0, 2, 2, 2, 0, 0, 0, 1),
}

# Table budget: p^k may not exceed this many elements.
MAX_ORDER = 1 << 20

# Pairwise add/mul tables (used by vectorized linear algebra) are only
# built for small fields; larger fields fall back to scalar arithmetic.
PAIR_TABLE_LIMIT = 128

_SYMBOLS = {(3, 2): "w", (2, 2): "z"}


class Field:
    """An immutable finite field GF(p^k) with Zech-log tables."""

    def __init__(self, p: int, k: int) -> None:
        if (p, k) not in CONWAY_POLYNOMIALS:
            raise ValueError(f"unsupported field GF({p}^{k}); no modulus shipped")
        order = p**k
        if order > MAX_ORDER:
            raise ValueError(f"GF({p}^{k}) exceeds the table budget")
        self.p = p
        self.k = k
        self.order = order
        self.modulus = CONWAY_POLYNOMIALS[(p, k)]
        self.symbol = _SYMBOLS.get((p, k), "x")
        self._half = (order - 1) // 2  # log of -1 for odd p
        self._build_tables()
        self._pair_tables = None
        self.zero = FieldElt(self, 0)
        self.one = FieldElt(self, 1)
        self.gen = FieldElt(self, 2 if order > 2 else 1)

    def _build_tables(self) -> None:
        p, k, order = self.p, self.k, self.order
        mod = self.modulus
        # powers of the generator as base-p digit keys
        key_of_log = [0] * (order - 1)
        log_of_key: dict[int, int] = {}
        coeffs = [0] * k
        coeffs[0] = 1
        pk = p**k
        for i in range(order - 1):
            key = 0
            for d in reversed(coeffs):
                key = key * p + d
            key_of_log[i] = key
            log_of_key[key] = i
            # multiply by x modulo the defining polynomial
            lead = coeffs[-1]
            for j in range(k - 1, 0, -1):
                coeffs[j] = coeffs[j - 1]
            coeffs[0] = 0
            if lead:
                for j in range(k):
                    coeffs[j] = (coeffs[j] - lead * mod[j]) % p
        if len(log_of_key) != order - 1:
            raise AssertionError(f"modulus for GF({p}^{k}) is not primitive")
        # zech[d] = code of gen^d + 1
        zech = [0] * (order - 1)
        for d in range(order - 1):
            key = key_of_log[d]
            c0 = key % p
            key1 = key - c0 + (c0 + 1) % p
            zech[d] = 0 if key1 == 0 else log_of_key[key1] + 1
        self._zech = zech
        self._key_of_log = key_of_log
        self._pk = pk

    # -- scalar arithmetic on integer codes -------------------------------

    def add_codes(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        n = self.order - 1
        z = self._zech[(a - b) % n]
        if z == 0:
            return 0
        return (b - 1 + z - 1) % n + 1

    def neg_code(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        return (a - 1 + self._half) % (self.order - 1) + 1

    def sub_codes(self, a: int, b: int) -> int:
        return self.add_codes(a, self.neg_code(b))

    def mul_codes(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return (a - 1 + b - 1) % (self.order - 1) + 1

    def inv_code(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero field element")
        return -(a - 1) % (self.order - 1) + 1

    def div_codes(self, a: int, b: int) -> int:
        return self.mul_codes(a, self.inv_code(b))

    def pow_code(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return (a - 1) * e % (self.order - 1) + 1

    def conj_code(self, a: int) -> int:
        """The map x -> x^sqrt(order); requires a square field order."""
        if self.k % 2:
            raise ValueError(f"{self!r} has non-square order; no conjugation")
        return self.pow_code(a, self.p ** (self.k // 2))

    # -- elements ----------------------------------------------------------

    def elt(self, code: int) -> FieldElt:
        if not 0 <= code < self.order:
            raise ValueError(f"code {code} out of range for {self!r}")
        return FieldElt(self, code)

    def from_log(self, e: int) -> FieldElt:
        return FieldElt(self, e % (self.order - 1) + 1)

    def elements(self) -> Iterator[FieldElt]:
        return (FieldElt(self, c) for c in range(self.order))

    def format_code(self, code: int) -> str:
        if code == 0:
            return "0"
        if code == 1:
            return "1"
        if self.k == 1:
            return str(self._key_of_log[code - 1])
        e = code - 1
        return self.symbol if e == 1 else f"{self.symbol}{e}"

    def parse(self, token: str) -> FieldElt:
        token = token.strip()
        if token.isdigit():
            n = int(token)
            if self.k == 1 or n <= 1:
                if self.k == 1:
                    # keys of prime-field elements are their integer values
                    if n >= self.p:
                        raise ValueError(f"token {token!r} out of range for {self!r}")
                    if n == 0:
                        return self.zero
                    for c in range(1, self.order):
                        if self._key_of_log[c - 1] == n:
                            return FieldElt(self, c)
                return FieldElt(self, n)
            # small integers mean repeated sums of 1 (e.g. "2" = -1 in GF(9))
            code = 0
            for _ in range(n % self.p):
                code = self.add_codes(code, 1)
            return FieldElt(self, code)
        if token.startswith(self.symbol):
            rest = token[len(self.symbol):]
            if rest == "":
                return FieldElt(self, 2)
            if rest.isdigit():
                return self.from_log(int(rest))
        raise ValueError(f"cannot parse {token!r} as an element of {self!r}")

    # -- vectorized helper tables ------------------------------------------

    def pair_tables(self):
        """(add, mul, neg, inv, conj) numpy tables, or None for big fields."""
        if self.order > PAIR_TABLE_LIMIT:
            return None
        if self._pair_tables is None:
            import numpy as np

            q = self.order
            add = np.zeros((q, q), dtype=np.int16)
            mul = np.zeros((q, q), dtype=np.int16)
            for a in range(q):
                for b in range(q):
                    add[a, b] = self.add_codes(a, b)
                    mul[a, b] = self.mul_codes(a, b)
            neg = np.array([self.neg_code(a) for a in range(q)], dtype=np.int16)
            inv = np.array([0] + [self.inv_code(a) for a in range(1, q)], dtype=np.int16)
            conj = None
            if self.k % 2 == 0:
                conj = np.array([self.conj_code(a) for a in range(q)], dtype=np.int16)
            self._pair_tables = (add, mul, neg, inv, conj)
        return self._pair_tables

    def __repr__(self) -> str:
        return f"GF({self.order})"


class FieldElt:
    """A field element: a reference to its field plus an integer code."""

    __slots__ = ("field", "code")

    def __init__(self, field: Field, code: int) -> None:
        self.field = field
        self.code = code

    def _check(self, other: "FieldElt") -> None:
        if not isinstance(other, FieldElt):
            raise TypeError(f"expected a field element, got {other!r}")
        if other.field is not self.field:
            raise ValueError(f"mixed fields: {self.field!r} and {other.field!r}")

    def __add__(self, other: "FieldElt") -> "FieldElt":
        self._check(other)
        return FieldElt(self.field, self.field.add_codes(self.code, other.code))

    def __sub__(self, other: "FieldElt") -> "FieldElt":
        self._check(other)
        return FieldElt(self.field, self.field.sub_codes(self.code, other.code))

    def __mul__(self, other: "FieldElt") -> "FieldElt":
        self._check(other)
        return FieldElt(self.field, self.field.mul_codes(self.code, other.code))

    def __truediv__(self, other: "FieldElt") -> "FieldElt":
        self._check(other)
        return FieldElt(self.field, self.field.div_codes(self.code, other.code))

    def __pow__(self, e: int) -> "FieldElt":
        return FieldElt(self.field, self.field.pow_code(self.code, e))

    def __neg__(self) -> "FieldElt":
        return FieldElt(self.field, self.field.neg_code(self.code))

    def conj(self) -> "FieldElt":
        return FieldElt(self.field, self.field.conj_code(self.code))

    def is_zero(self) -> bool:
        return self.code == 0

    @property
    def log(self) -> int:
        if self.code == 0:
            raise ValueError("zero has no discrete log")
        return self.code - 1

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldElt)
            and other.field is self.field
            and other.code == self.code
        )

    def __hash__(self) -> int:
        return hash((id(self.field), self.code))

    def __repr__(self) -> str:
        return f"{self.field.format_code(self.code)}"


@functools.lru_cache(maxsize=None)
def field(p: int, k: int) -> Field:
    """The shared GF(p^k) instance (fields are immutable, so one is enough)."""
    return Field(p, k)


@functools.lru_cache(maxsize=None)
def field_of_order(q: int) -> Field:
    for p in (2, 3):
        k = 0
        n = q
        while n % p == 0:
            n //= p
            k += 1
        if n == 1 and k > 0:
            return field(p, k)
    raise ValueError(f"unsupported field order {q}")


def _embed_step(sub: Field, ext: Field) -> int:
    if sub.p != ext.p or ext.k % sub.k:
        raise ValueError(f"{sub!r} is not a subfield of {ext!r}")
    return (ext.order - 1) // (sub.order - 1)


def embed(a: FieldElt, into: Field) -> FieldElt:
    """Embed a into the extension field `into` (Conway-compatible map)."""
    if a.field is into:
        return a
    step = _embed_step(a.field, into)
    if a.code == 0:
        return into.zero
    return FieldElt(into, (a.code - 1) * step % (into.order - 1) + 1)


def into_subfield(a: FieldElt, sub: Field) -> FieldElt:
    """Rewrite a as an element of the subfield `sub`; error if a is not in it."""
    if a.field is sub:
        return a
    step = _embed_step(sub, a.field)
    if a.code == 0:
        return sub.zero
    if (a.code - 1) % step:
        raise ValueError(f"{a!r} does not lie in the embedded {sub!r}")
    return FieldElt(sub, (a.code - 1) // step + 1)


def trace(a: FieldElt, sub: Field) -> FieldElt:
    """Relative trace from a's field down to `sub`: sum of a^(|sub|^i)."""
    ext = a.field
    _embed_step(sub, ext)  # validates the tower
    reps = ext.k // sub.k
    acc = 0
    c = a.code
    for _ in range(reps):
        acc = ext.add_codes(acc, c)
        c = ext.pow_code(c, sub.order)
    return into_subfield(FieldElt(ext, acc), sub)
