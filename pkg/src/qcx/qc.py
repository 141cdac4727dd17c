"""Quasi-cyclic codes of index ell over GF(q2) and their CRT constituents.

A codeword of length m*ell is viewed as an m x ell array; column t is
read as the polynomial c_t(x) = sum_g c[g,t] x^g in R = GF(q2)[x]/(x^m-1),
and the code is an R-submodule of R^ell.  Codewords are flattened
block-by-block: array position (g, t) maps to vector index t*m + g, so
the module action of x is a simultaneous cyclic rotation of each block.

`decompose` evaluates module generators at the canonical root of each
irreducible factor of x^m - 1 and spans over the matching extension
field.  `lift` is the inverse construction: a constituent row vector v
over the extension K = GF(q2^e) attached to evaluation exponent E
produces the codeword whose (g, t) entry is the relative trace
Tr_{K/GF(q2)}(v_t * xi^(-g*E)); the R-module generated by these trace
codewords (all m block rotations are included before row reduction) is
the quasi-cyclic code with the prescribed constituents.

Hermitian duality acts on constituents through the coupling
    (C^perp_H) at exponent E  =  Frob_q( Euclidean dual of C at -q^{-1}E mod m ),
where q^2 is the alphabet size and Frob_q is the entrywise q-th power.
The map E -> -q^{-1}E is an involution on the cyclotomic cosets; it fixes
the cosets of 0 and m/2 (the x -+ 1 components) but in general it does
NOT coincide with E -> -E, so the two members of a reciprocal pair are
not always dual to each other: a pair component can couple to a
component of a different pair, or to itself.  `coupling` computes the
pairing once per pattern; `so_check`, `dual_constituents` and the
constituent-level hull all use it.  The hull dimension is computed both
from the expanded matrix and through the constituents, and the two
routes are required to agree.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .gf import Field, FieldElt, embed, field_of_order, into_subfield
from .linalg import (
    Mat,
    dual,
    gram_euclidean,
    gram_hermitian,
    rref,
    subspace_intersect,
    vstack,
)
from .poly import FactorPattern, Poly, Slot, cyclotomic_factor, parse_poly


class QcConsistencyError(RuntimeError):
    """Raised when two independent computation routes disagree."""


@functools.lru_cache(maxsize=None)
def pattern_for(q2: int, m: int) -> FactorPattern:
    return cyclotomic_factor(q2, m)


class ConstituentSet:
    """One generator matrix per CRT component, in canonical (rref) form."""

    __slots__ = ("pattern", "ell", "selfrec_cons", "pair_cons")

    def __init__(self, pattern: FactorPattern, ell: int, selfrec_cons, pair_cons) -> None:
        if len(selfrec_cons) != pattern.s or len(pair_cons) != pattern.r:
            raise ValueError("constituent count does not match the factor pattern")
        self.pattern = pattern
        self.ell = ell
        self.selfrec_cons = tuple(rref(M).basis for M in selfrec_cons)
        self.pair_cons = tuple(
            (rref(A).basis, rref(B).basis) for A, B in pair_cons
        )
        for slot, M in zip(pattern.slots(), self.slot_mats()):
            if M.ncols != ell:
                raise ValueError(f"slot {slot.label}: expected {ell} columns")
            if M.field is not slot.subfield:
                raise ValueError(f"slot {slot.label}: wrong constituent field")

    def slot_mats(self) -> list[Mat]:
        """Matrices aligned with pattern.slots() order."""
        out = list(self.selfrec_cons)
        for a, b in self.pair_cons:
            out.append(a)
            out.append(b)
        return out

    def dims(self) -> list[int]:
        return [M.nrows for M in self.slot_mats()]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ConstituentSet)
            and other.pattern is self.pattern
            and other.ell == self.ell
            and all(a == b for a, b in zip(self.slot_mats(), other.slot_mats()))
        )

    def __repr__(self) -> str:
        dims = ",".join(str(d) for d in self.dims())
        return f"ConstituentSet(q2={self.pattern.base_field.order}, m={self.pattern.m}, ell={self.ell}, dims=[{dims}])"


class QCCode:
    """A quasi-cyclic code: module generators plus the expanded matrix."""

    __slots__ = ("field", "m", "ell", "module_gens", "expanded")

    def __init__(self, field: Field, m: int, ell: int, module_gens, expanded: Mat) -> None:
        self.field = field
        self.m = m
        self.ell = ell
        self.module_gens = tuple(tuple(g) for g in module_gens)
        self.expanded = expanded

    @property
    def n(self) -> int:
        return self.m * self.ell

    @property
    def dim(self) -> int:
        return self.expanded.nrows

    def __repr__(self) -> str:
        return (
            f"QCCode([{self.n},{self.dim}]_{self.field.order}, m={self.m}, ell={self.ell},"
            f" {len(self.module_gens)} generators)"
        )

    @classmethod
    def from_module_gens(cls, field: Field, m: int, ell: int, gens) -> "QCCode":
        gens = [tuple(g) for g in gens]
        for g in gens:
            if len(g) != ell:
                raise ValueError(f"generator arity {len(g)} != ell = {ell}")
            for f in g:
                if f.field is not field:
                    raise ValueError("generator polynomial over the wrong field")
                if f.degree >= m:
                    raise ValueError(f"generator degree {f.degree} >= m = {m}")
        rows = []
        for g in gens:
            for a in range(m):
                rows.append(_gen_to_row(g, a, m, ell))
        expanded = rref(Mat(field, rows, ncols=m * ell)).basis
        return cls(field, m, ell, gens, expanded)

    @classmethod
    def from_expanded(cls, field: Field, m: int, ell: int, mat: Mat) -> "QCCode":
        """Wrap an expanded matrix; its row space must be shift-invariant."""
        basis = rref(mat).basis
        shifted = Mat(field, np.array([_shift_row(r, m, ell) for r in basis.a], dtype=np.int16).reshape(basis.nrows, m * ell) if basis.nrows else basis.a)
        if rref(vstack(basis, shifted)).rank != basis.nrows:
            raise ValueError("row space is not closed under the block shift")
        gens = [tuple(_row_to_polys(field, r, m, ell)) for r in basis.a]
        if not gens:
            gens = []
        return cls(field, m, ell, gens, basis)

    def serialize(self) -> str:
        lines = [f"{self.field.order} {self.m} {self.ell}"]
        for g in self.module_gens:
            lines.append("(" + ", ".join(str(f) for f in g) + ")")
        return "\n".join(lines) + "\n"


def _gen_to_row(gen, a: int, m: int, ell: int) -> list[int]:
    row = [0] * (m * ell)
    for t, f in enumerate(gen):
        sh = f.shift_mod(a, m)
        for g, c in enumerate(sh.coeffs):
            row[t * m + g] = c
    return row


def _shift_row(row, m: int, ell: int) -> list[int]:
    out = [0] * (m * ell)
    for t in range(ell):
        blk = row[t * m : (t + 1) * m]
        for g in range(m):
            out[t * m + (g + 1) % m] = int(blk[g])
    return out


def _row_to_polys(field: Field, row, m: int, ell: int) -> list[Poly]:
    return [Poly(field, [int(c) for c in row[t * m : (t + 1) * m]]) for t in range(ell)]


def parse_generator_tuple(field: Field, m: int, ell: int, text: str) -> tuple[Poly, ...]:
    """Parse one generator like ``(1, w2 w4)``: ell comma-separated
    coefficient arrays, each highest degree first."""
    t = text.strip()
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1]
    parts = [p.strip() for p in t.split(",")]
    if len(parts) != ell:
        raise ValueError(f"generator {text!r}: {len(parts)} components, expected ell = {ell}")
    polys = []
    for pos, part in enumerate(parts):
        tokens = part.split()
        if not tokens:
            raise ValueError(f"generator {text!r}: empty component {pos}")
        while tokens and tokens[0] == "0":
            tokens.pop(0)
        if len(tokens) > m:
            raise ValueError(
                f"generator {text!r}: component {pos} has degree {len(tokens) - 1} >= m = {m}"
            )
        try:
            polys.append(parse_poly(field, " ".join(tokens)) if tokens else Poly.zero(field))
        except ValueError as exc:
            raise ValueError(f"generator {text!r}: component {pos}: {exc}") from exc
    return tuple(polys)


def parse_qc(text: str) -> QCCode:
    """Parse the textual quasi-cyclic form: header `q2 m ell`, then one
    generator tuple per line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty quasi-cyclic code text")
    head = lines[0].split()
    if len(head) != 3:
        raise ValueError(f"bad header {lines[0]!r}; expected 'q2 m ell'")
    q2, m, ell = (int(x) for x in head)
    F = field_of_order(q2)
    gens = [parse_generator_tuple(F, m, ell, ln) for ln in lines[1:]]
    if not gens:
        raise ValueError("no module generators")
    return QCCode.from_module_gens(F, m, ell, gens)


# ---------------------------------------------------------------------------
# CRT decomposition and the trace-formula inverse
# ---------------------------------------------------------------------------


def decompose(C: QCCode, pattern: FactorPattern | None = None) -> ConstituentSet:
    """Evaluate the module generators at each canonical root and span."""
    pat = pattern or pattern_for(C.field.order, C.m)
    gens = C.module_gens if C.module_gens else [
        tuple(_row_to_polys(C.field, r, C.m, C.ell)) for r in C.expanded.a
    ]
    slot_rows: list[list[list[int]]] = [[] for _ in pat.slots()]
    for i, slot in enumerate(pat.slots()):
        root = pat.root(slot.exponent)
        K = slot.subfield
        for g in gens:
            slot_rows[i].append([into_subfield(f.eval_in(root), K).code for f in g])
    mats = [
        Mat(slot.subfield, rows, ncols=C.ell)
        for slot, rows in zip(pat.slots(), slot_rows)
    ]
    selfrec = mats[: pat.s]
    pairs = [(mats[pat.s + 2 * j], mats[pat.s + 2 * j + 1]) for j in range(pat.r)]
    return ConstituentSet(pat, C.ell, selfrec, pairs)


def _trace_row(pat: FactorPattern, slot: Slot, codes, ell: int) -> list[list[int]]:
    """The m x ell trace codeword for one constituent row (as code grid)."""
    F = pat.base_field
    E = pat.splitting_field
    m = pat.m
    K = slot.subfield
    emb = [embed(FieldElt(K, c), E) for c in codes]
    step = pat.root((-slot.exponent) % m)  # xi^(-E)
    reps = K.k // F.k
    Q = F.order
    grid = []
    fac = E.one
    for _g in range(m):
        row = []
        for lam in emb:
            z = (lam * fac).code
            acc = 0
            c = z
            for _ in range(reps):
                acc = E.add_codes(acc, c)
                c = E.pow_code(c, Q)
            row.append(into_subfield(FieldElt(E, acc), F).code)
        grid.append(row)
        fac = fac * step
    return grid


def lift(S: ConstituentSet) -> QCCode:
    """Rebuild the quasi-cyclic code with the given constituents."""
    pat = S.pattern
    F = pat.base_field
    m, ell = pat.m, S.ell
    gens = []
    for slot, M in zip(pat.slots(), S.slot_mats()):
        for r in range(M.nrows):
            grid = _trace_row(pat, slot, M.row_codes(r), ell)
            gens.append(
                tuple(Poly(F, [grid[g][t] for g in range(m)]) for t in range(ell))
            )
    if gens:
        C = QCCode.from_module_gens(F, m, ell, gens)
    else:
        C = QCCode(F, m, ell, [], Mat(F, [], ncols=m * ell))
    want = dimension(S)
    if C.dim != want:
        raise QcConsistencyError(
            f"trace lift produced dimension {C.dim}, constituents say {want}"
        )
    return C


def dimension(S: ConstituentSet) -> int:
    """Dimension over GF(q2): sum of (factor degree) * (constituent dim)."""
    return sum(
        slot.degree * M.nrows for slot, M in zip(S.pattern.slots(), S.slot_mats())
    )


@functools.lru_cache(maxsize=None)
def _coupling_for(q2: int, m: int) -> tuple[tuple[int, int], ...]:
    """Per slot: (partner slot index, twist steps t) such that the dual
    at this slot is Frob_q(dual_E(partner^(q2^t))).

    -q^{-1}E mod m lands in the partner's coset; t counts the q2-power
    steps from the partner's canonical exponent to that exact exponent.
    """
    pat = pattern_for(q2, m)
    F = pat.base_field
    q = F.p ** (F.k // 2)
    qinv = pow(q, -1, m) if m > 1 else 0
    slots = pat.slots()
    cosets = [
        {s.exponent * pow(q2, t, m) % m for t in range(s.degree)} for s in slots
    ]
    out = []
    for s in slots:
        exact = (-qinv * s.exponent) % m
        j = next(j for j, cos in enumerate(cosets) if exact in cos)
        t = 0
        e = slots[j].exponent
        while e != exact:
            e = e * q2 % m
            t += 1
        out.append((j, t))
    return tuple(out)


def coupling(pattern: FactorPattern) -> tuple[tuple[int, int], ...]:
    return _coupling_for(pattern.base_field.order, pattern.m)


def _dual_slot(S: ConstituentSet, mats: list[Mat], i: int) -> Mat:
    """The Hermitian-dual constituent at slot i, from the coupling law."""
    pat = S.pattern
    q2 = pat.base_field.order
    q = pat.base_field.p ** (pat.base_field.k // 2)
    j, t = coupling(pat)[i]
    partner = mats[j].pow_entries(pow(q2, t))
    return rref(dual(partner, "euclidean").pow_entries(q)).basis


@dataclass
class SoCheck:
    """Per-slot Hermitian self-orthogonality verdicts, in slot order."""

    slot_ok: tuple[bool, ...]
    s: int  # number of self-reciprocal slots

    @property
    def overall(self) -> bool:
        return all(self.slot_ok)

    @property
    def selfrec_ok(self) -> tuple[bool, ...]:
        return self.slot_ok[: self.s]

    @property
    def pair_ok(self) -> tuple[bool, ...]:
        rest = self.slot_ok[self.s :]
        return tuple(rest[2 * j] and rest[2 * j + 1] for j in range(len(rest) // 2))

    def ok_outside_first(self) -> bool:
        """All constraints hold except possibly at the x -+ 1 component.

        That component couples only to itself, so its verdict is
        independent of the others.
        """
        return all(self.slot_ok[1:])


def so_check(S: ConstituentSet) -> SoCheck:
    """Slotwise self-orthogonality: the component at exponent E must be
    contained in the Hermitian-dual component there, which couples it to
    the component at -q^{-1}E.  At the x -+ 1 slot this is ordinary
    Hermitian self-orthogonality over the base field."""
    pat = S.pattern
    q2 = pat.base_field.order
    q = pat.base_field.p ** (pat.base_field.k // 2)
    mats = S.slot_mats()
    cpl = coupling(pat)
    oks = []
    for i in range(len(mats)):
        j, t = cpl[i]
        partner = mats[j].pow_entries(pow(q2, t) * q)
        oks.append((partner @ mats[i].T()).is_zero())
    return SoCheck(tuple(oks), pat.s)


@dataclass
class HullResult:
    basis: Mat
    dim: int
    e: int  # defect: code dimension minus hull dimension


def hull_dim_from_constituents(S: ConstituentSet) -> int:
    mats = S.slot_mats()
    total = 0
    for i, slot in enumerate(S.pattern.slots()):
        total += slot.degree * subspace_intersect(mats[i], _dual_slot(S, mats, i)).nrows
    return total


def hull(C: QCCode) -> HullResult:
    """Hermitian hull of the expanded code, cross-checked against the
    constituent-level computation."""
    G = C.expanded
    H = subspace_intersect(G, dual(G, "hermitian"))
    via_cons = hull_dim_from_constituents(decompose(C))
    if H.nrows != via_cons:
        raise QcConsistencyError(
            f"hull dimension mismatch: matrices say {H.nrows}, constituents say {via_cons}"
        )
    return HullResult(basis=H, dim=H.nrows, e=C.dim - H.nrows)


def dual_constituents(S: ConstituentSet) -> ConstituentSet:
    """Constituents of the Hermitian dual code, slot by slot."""
    mats = S.slot_mats()
    out = [_dual_slot(S, mats, i) for i in range(len(mats))]
    pat = S.pattern
    selfrec = out[: pat.s]
    pairs = [(out[pat.s + 2 * j], out[pat.s + 2 * j + 1]) for j in range(pat.r)]
    return ConstituentSet(pat, S.ell, selfrec, pairs)


# ---------------------------------------------------------------------------
# Constituent text form (used by the CLI for decompose/lift round trips)
# ---------------------------------------------------------------------------


def format_constituents(S: ConstituentSet) -> str:
    pat = S.pattern
    lines = [f"constituents {pat.base_field.order} {pat.m} {S.ell}"]
    for slot, M in zip(pat.slots(), S.slot_mats()):
        kind = "self" if slot.kind == "self" else ("pair" if slot.kind == "pair" else "pair*")
        if M.nrows == 0:
            body = "-"
        else:
            body = " ; ".join(
                " ".join(M.field.format_code(int(c)) for c in row) for row in M.a
            )
        lines.append(f"{kind} {slot.exponent} : {body}")
    return "\n".join(lines) + "\n"


def parse_constituents(text: str) -> ConstituentSet:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("constituents"):
        raise ValueError("expected a 'constituents q2 m ell' header")
    _, q2, m, ell = lines[0].split()
    q2, m, ell = int(q2), int(m), int(ell)
    pat = pattern_for(q2, m)
    by_key: dict[tuple[str, int], Mat] = {}
    for ln in lines[1:]:
        head, _, body = ln.partition(":")
        kind, exp = head.split()
        key = (kind, int(exp))
        slot = next(
            (
                s
                for s in pat.slots()
                if s.exponent == key[1]
                and (s.kind == "self") == (kind == "self")
                and (s.kind == "pair*") == (kind == "pair*")
            ),
            None,
        )
        if slot is None:
            raise ValueError(f"no slot {kind} {exp} for q2={q2}, m={m}")
        body = body.strip()
        K = slot.subfield
        if body == "-" or not body:
            by_key[key] = Mat(K, [], ncols=ell)
        else:
            rows = []
            for rtxt in body.split(";"):
                rows.append([K.parse(tok).code for tok in rtxt.split()])
            by_key[key] = Mat(K, rows, ncols=ell)
    slots = pat.slots()
    mats = []
    for s in slots:
        kind = "self" if s.kind == "self" else ("pair" if s.kind == "pair" else "pair*")
        if (kind, s.exponent) not in by_key:
            raise ValueError(f"missing slot {kind} {s.exponent}")
        mats.append(by_key[(kind, s.exponent)])
    selfrec = mats[: pat.s]
    pairs = [(mats[pat.s + 2 * j], mats[pat.s + 2 * j + 1]) for j in range(pat.r)]
    return ConstituentSet(pat, ell, selfrec, pairs)
