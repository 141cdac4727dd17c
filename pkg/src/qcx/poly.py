"""Polynomials over finite fields and the factorization of x^m - 1.

A `Poly` keeps its coefficients as a tuple of element codes, constant
term first, with no trailing zeros.  The text form is the reverse: space
separated element tokens from the highest-degree coefficient down to the
constant, e.g. ``w2 0 w4`` for w2*x^2 + w4 over GF(9).

`cyclotomic_factor` splits x^m - 1 over GF(q2) into irreducible factors
via q2-cyclotomic cosets mod m: the coset of u yields the minimal
polynomial of xi^u for a fixed primitive m-th root of unity xi.  A factor
is self-reciprocal exactly when its coset contains -u mod m; the rest of
the factors come in reciprocal pairs.  Factors are listed in a canonical
order (degree, then coefficient order with 0 < 1 < gen < gen^2 < ...),
which reproduces the ordering used by common computer algebra output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .gf import Field, FieldElt, embed, field, field_of_order, into_subfield


class Poly:
    """A dense polynomial over a finite field (coefficient codes, constant first)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs) -> None:
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, field: Field) -> "Poly":
        return cls(field, ())

    @classmethod
    def from_elements(cls, elts) -> "Poly":
        elts = list(elts)
        if not elts:
            raise ValueError("empty coefficient list; use Poly.zero")
        f = elts[0].field
        return cls(f, [e.code for e in elts])

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial assigned -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Poly)
            and other.field is self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self) -> int:
        return hash((id(self.field), self.coeffs))

    def __add__(self, other: "Poly") -> "Poly":
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(F, [F.add_codes(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __sub__(self, other: "Poly") -> "Poly":
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(F, [F.sub_codes(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __mul__(self, other: "Poly") -> "Poly":
        F = self.field
        if self.is_zero() or other.is_zero():
            return Poly.zero(F)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = F.add_codes(out[i + j], F.mul_codes(a, b))
        return Poly(F, out)

    def scale(self, c: int) -> "Poly":
        F = self.field
        return Poly(F, [F.mul_codes(c, a) for a in self.coeffs])

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv_code(self.coeffs[-1]))

    def shift_mod(self, a: int, m: int) -> "Poly":
        """x^a * self modulo x^m - 1 (cyclic rotation of coefficients)."""
        out = [0] * m
        F = self.field
        for i, c in enumerate(self.coeffs):
            if c:
                j = (i + a) % m
                out[j] = F.add_codes(out[j], c)
        return Poly(F, out)

    def eval_in(self, a: FieldElt) -> FieldElt:
        """Horner evaluation at a point in this field or an extension of it."""
        E = a.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = E.mul_codes(acc, a.code)
            if c:
                acc = E.add_codes(acc, embed(FieldElt(self.field, c), E).code)
        return FieldElt(E, acc)

    def reciprocal(self) -> "Poly":
        """Monic reciprocal x^deg * f(1/x); needs a nonzero constant term."""
        if self.is_zero() or self.coeffs[0] == 0:
            raise ValueError("reciprocal requires a nonzero constant term")
        return Poly(self.field, reversed(self.coeffs)).monic()

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        return " ".join(self.field.format_code(c) for c in reversed(self.coeffs))

    def __repr__(self) -> str:
        return f"Poly({self.field!r}, {self})"


def parse_poly(field: Field, text: str) -> Poly:
    """Parse space-separated coefficient tokens, highest degree first."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty polynomial text")
    codes = [field.parse(t).code for t in tokens]
    return Poly(field, list(reversed(codes)))


def eval_vector(f_vec, a: FieldElt) -> list[FieldElt]:
    """Componentwise evaluation of a tuple of polynomials at a point."""
    return [f.eval_in(a) for f in f_vec]


@dataclass(frozen=True)
class SelfReciprocalFactor:
    poly: Poly
    exponent: int  # smallest u with poly(xi^u) = 0
    degree: int
    subfield: Field  # the extension generated by xi^u over the base field


@dataclass(frozen=True)
class ReciprocalPair:
    poly: Poly  # the lexicographically smaller factor of the pair
    reciprocal: Poly
    exponent: int  # smallest v with poly(xi^v) = 0; reciprocal(xi^-v) = 0
    degree: int
    subfield: Field


@dataclass(frozen=True)
class Slot:
    """One CRT component: where to evaluate and over which field."""

    kind: str  # "self", "pair" or "pair*"
    index: int  # position within its own group
    exponent: int  # evaluation exponent: xi^exponent is the root used
    degree: int
    subfield: Field

    @property
    def label(self) -> str:
        star = "*" if self.kind == "pair*" else ""
        return f"{'self' if self.kind == 'self' else 'pair' + star}@{self.exponent}"


@dataclass(frozen=True)
class FactorPattern:
    """x^m - 1 over GF(q2), split into self-reciprocal factors and pairs."""

    base_field: Field
    m: int
    selfrec: tuple[SelfReciprocalFactor, ...]
    pairs: tuple[ReciprocalPair, ...]
    splitting_field: Field
    xi: FieldElt  # canonical primitive m-th root of unity

    @property
    def s(self) -> int:
        return len(self.selfrec)

    @property
    def r(self) -> int:
        return len(self.pairs)

    def slots(self) -> list[Slot]:
        out = [
            Slot("self", i, f.exponent, f.degree, f.subfield)
            for i, f in enumerate(self.selfrec)
        ]
        for j, p in enumerate(self.pairs):
            out.append(Slot("pair", j, p.exponent, p.degree, p.subfield))
            out.append(Slot("pair*", j, (-p.exponent) % self.m, p.degree, p.subfield))
        return out

    def root(self, exponent: int) -> FieldElt:
        return self.xi ** (exponent % self.m)

    def product(self) -> Poly:
        acc = Poly(self.base_field, [1])
        for f in self.selfrec:
            acc = acc * f.poly
        for p in self.pairs:
            acc = acc * p.poly * p.reciprocal
        return acc


def _poly_key(f: Poly):
    # degree first, then coefficient codes from the highest term down;
    # code order is 0 < 1 < gen < gen^2 < ...
    return (f.degree, tuple(reversed(f.coeffs)))


def cyclotomic_factor(q2: int | Field, m: int) -> FactorPattern:
    """Factor x^m - 1 over GF(q2) via cyclotomic cosets mod m."""
    F = q2 if isinstance(q2, Field) else field_of_order(q2)
    Q = F.order
    if m < 1 or math.gcd(m, Q) != 1:
        raise ValueError(f"need gcd(m, {Q}) = 1, got m = {m}")
    t = 1
    while pow(Q, t, m) != 1:
        t += 1
    E = field(F.p, F.k * t)
    xi = E.from_log((E.order - 1) // m) if m > 1 else E.one

    seen = set()
    cosets: list[list[int]] = []
    for u in range(m):
        if u in seen:
            continue
        cs = []
        v = u
        while v not in seen:
            seen.add(v)
            cs.append(v)
            v = v * Q % m
        cosets.append(cs)

    def min_poly(coset: list[int]) -> Poly:
        # product of (x - xi^v) over the coset, then mapped down to F
        acc = [E.one.code]
        for v in coset:
            root = (xi**v).code
            nroot = E.neg_code(root)
            nxt = [0] * (len(acc) + 1)
            for i, c in enumerate(acc):
                nxt[i + 1] = E.add_codes(nxt[i + 1], c)
                nxt[i] = E.add_codes(nxt[i], E.mul_codes(c, nroot))
            acc = nxt
        return Poly(F, [into_subfield(FieldElt(E, c), F).code for c in acc])

    by_min = {min(cs): cs for cs in cosets}
    selfrec = []
    pair_list = []
    done = set()
    for cs in cosets:
        u = min(cs)
        if u in done:
            continue
        partner = min(by_min[min((-v) % m for v in cs)])
        if partner == u:
            selfrec.append((min_poly(cs), u, len(cs)))
            done.add(u)
        else:
            fa, fb = min_poly(cs), min_poly(by_min[partner])
            (h, hu), (hr, _hru) = sorted(
                [(fa, u), (fb, partner)], key=lambda t: _poly_key(t[0])
            )
            # the stored exponent is the smallest root exponent of the
            # lex-smaller factor; the reciprocal then vanishes at -v
            v = min(cs) if h is fa else partner
            pair_list.append((h, hr, v, len(cs)))
            done.add(u)
            done.add(partner)

    selfrec.sort(key=lambda t: _poly_key(t[0]))
    pair_list.sort(key=lambda t: _poly_key(t[0]))

    def subfield_for(degree: int) -> Field:
        return field(F.p, F.k * degree)

    return FactorPattern(
        base_field=F,
        m=m,
        selfrec=tuple(
            SelfReciprocalFactor(f, u, e, subfield_for(e)) for f, u, e in selfrec
        ),
        pairs=tuple(
            ReciprocalPair(h, hr, v, e, subfield_for(e)) for h, hr, v, e in pair_list
        ),
        splitting_field=E,
        xi=xi,
    )
