"""Dense linear algebra over the finite fields in `gf`.

Matrices hold element codes in a numpy int32 array.  Row reduction runs
vectorized through per-field add/mul lookup tables when the field is
small, and falls back to scalar arithmetic for large fields (those only
ever carry tiny constituent matrices here).

All spanning-set outputs (kernels, duals, sums, intersections) are
returned in reduced row echelon form with zero rows dropped, so two
subspaces are equal iff their matrices are equal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import Field, FieldElt

_SCALAR_CUTOFF = 80  # entries; below this the python loop beats numpy


class Mat:
    """A matrix over a finite field; rows are codewords/generators."""

    __slots__ = ("field", "a")

    def __init__(self, field: Field, rows, ncols: int | None = None) -> None:
        if isinstance(rows, np.ndarray):
            a = rows.astype(np.int32, copy=True)
            if a.ndim != 2:
                raise ValueError("expected a 2-D array")
        else:
            rows = [list(r) for r in rows]
            if rows:
                ncols = len(rows[0])
                if any(len(r) != ncols for r in rows):
                    raise ValueError("ragged rows")
                a = np.array(rows, dtype=np.int32)
            else:
                if ncols is None:
                    raise ValueError("empty matrix needs an explicit ncols")
                a = np.zeros((0, ncols), dtype=np.int32)
        self.field = field
        self.a = a

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Mat":
        return cls(field, np.zeros((nrows, ncols), dtype=np.int32))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        a = np.zeros((n, n), dtype=np.int32)
        np.fill_diagonal(a, 1)
        return cls(field, a)

    @classmethod
    def from_elements(cls, rows, ncols: int | None = None, field: Field | None = None) -> "Mat":
        rows = [list(r) for r in rows]
        if rows and field is None:
            field = rows[0][0].field
        if field is None:
            raise ValueError("field required for an empty element matrix")
        return cls(field, [[e.code for e in r] for r in rows], ncols=ncols)

    @property
    def nrows(self) -> int:
        return self.a.shape[0]

    @property
    def ncols(self) -> int:
        return self.a.shape[1]

    def elt(self, i: int, j: int) -> FieldElt:
        return FieldElt(self.field, int(self.a[i, j]))

    def row_codes(self, i: int) -> list[int]:
        return [int(c) for c in self.a[i]]

    def conj(self) -> "Mat":
        """Entrywise x -> x^sqrt(|F|) (requires a square field order)."""
        if self.field.k % 2:
            raise ValueError(f"{self.field!r} has no conjugation")
        sq = self.field.p ** (self.field.k // 2)
        n = self.field.order - 1
        a = self.a
        out = np.where(a == 0, 0, (a - 1) * sq % n + 1).astype(np.int32)
        return Mat(self.field, out)

    def pow_entries(self, e: int) -> "Mat":
        """Entrywise x -> x^e (e >= 0); a field automorphism when e is a
        power of the characteristic."""
        n = self.field.order - 1
        a = self.a
        out = np.where(a == 0, 0, (a - 1) * (e % n) % n + 1).astype(np.int32)
        return Mat(self.field, out)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Mat)
            and other.field is self.field
            and other.a.shape == self.a.shape
            and bool(np.array_equal(other.a, self.a))
        )

    def __hash__(self):  # pragma: no cover - matrices are not dict keys
        return NotImplemented

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(self.field.format_code(int(c)) for c in row) for row in self.a
        )
        return f"Mat({self.field!r}, {self.nrows}x{self.ncols}: {body})"

    def __matmul__(self, other: "Mat") -> "Mat":
        if other.field is not self.field:
            raise ValueError("mixed fields in matrix product")
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matrix product")
        F = self.field
        tabs = F.pair_tables()
        out = np.zeros((self.nrows, other.ncols), dtype=np.int32)
        if tabs is not None and self.a.size and other.a.size:
            add, mul = tabs[0], tabs[1]
            for k in range(self.ncols):
                col = self.a[:, k]
                if not col.any():
                    continue
                out = add[out, mul[col[:, None], other.a[k, :][None, :]]]
        else:
            for i in range(self.nrows):
                for j in range(other.ncols):
                    acc = 0
                    for k in range(self.ncols):
                        acc = F.add_codes(
                            acc, F.mul_codes(int(self.a[i, k]), int(other.a[k, j]))
                        )
                    out[i, j] = acc
        return Mat(F, out)

    def T(self) -> "Mat":
        return Mat(self.field, self.a.T.copy())

    def is_zero(self) -> bool:
        return not self.a.any()


def vstack(a: Mat, b: Mat) -> Mat:
    if a.field is not b.field or a.ncols != b.ncols:
        raise ValueError("incompatible matrices for stacking")
    return Mat(a.field, np.vstack([a.a, b.a]))


@dataclass
class RrefResult:
    mat: Mat  # full reduced matrix, zero rows at the bottom
    rank: int
    pivots: tuple[int, ...]

    @property
    def basis(self) -> Mat:
        """The nonzero rows: a canonical basis of the row space."""
        return Mat(self.mat.field, self.mat.a[: self.rank].copy())


def _rref_scalar(F: Field, a: np.ndarray, col_order) -> tuple[np.ndarray, list[int]]:
    rows = [[int(c) for c in r] for r in a]
    nr = len(rows)
    cur = 0
    pivots = []
    for col in col_order:
        piv = next((r for r in range(cur, nr) if rows[r][col]), None)
        if piv is None:
            continue
        rows[cur], rows[piv] = rows[piv], rows[cur]
        c = rows[cur][col]
        if c != 1:
            ic = F.inv_code(c)
            rows[cur] = [F.mul_codes(ic, x) for x in rows[cur]]
        prow = rows[cur]
        for r in range(nr):
            if r != cur and rows[r][col]:
                f = F.neg_code(rows[r][col])
                rr = rows[r]
                rows[r] = [F.add_codes(rr[j], F.mul_codes(f, prow[j])) for j in range(len(rr))]
        pivots.append(col)
        cur += 1
        if cur == nr:
            break
    return np.array(rows, dtype=np.int32) if rows else a.copy(), pivots


def _rref_tables(F: Field, a: np.ndarray, col_order) -> tuple[np.ndarray, list[int]]:
    add, mul, neg, inv, _ = F.pair_tables()
    w = a.copy()
    nr = w.shape[0]
    cur = 0
    pivots = []
    for col in col_order:
        nz = np.nonzero(w[cur:, col])[0]
        if nz.size == 0:
            continue
        piv = cur + int(nz[0])
        if piv != cur:
            w[[cur, piv]] = w[[piv, cur]]
        c = int(w[cur, col])
        if c != 1:
            w[cur] = mul[int(inv[c]), w[cur]]
        others = np.nonzero(w[:, col])[0]
        others = others[others != cur]
        if others.size:
            factors = neg[w[others, col]]
            w[others] = add[w[others], mul[factors[:, None], w[cur][None, :]]]
        pivots.append(col)
        cur += 1
        if cur == nr:
            break
    return w, pivots


def rref(M: Mat, col_order=None) -> RrefResult:
    """Reduced row echelon form; pivot search follows col_order if given."""
    order = list(range(M.ncols)) if col_order is None else list(col_order)
    if M.nrows == 0:
        return RrefResult(Mat(M.field, M.a.copy()), 0, ())
    if M.field.pair_tables() is None or M.a.size <= _SCALAR_CUTOFF:
        w, pivots = _rref_scalar(M.field, M.a, order)
    else:
        w, pivots = _rref_tables(M.field, M.a, order)
    if col_order is None:
        # canonical form: rows already appear in pivot order
        pass
    return RrefResult(Mat(M.field, w), len(pivots), tuple(pivots))


def rank(M: Mat) -> int:
    return rref(M).rank


def kernel(M: Mat) -> Mat:
    """Canonical basis of {x : M x^T = 0}."""
    F = M.field
    n = M.ncols
    r = rref(M)
    piv = list(r.pivots)
    free = [j for j in range(n) if j not in set(piv)]
    rows = []
    R = r.mat.a
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, p in enumerate(piv):
            v[p] = F.neg_code(int(R[i, f]))
        rows.append(v)
    out = Mat(F, rows, ncols=n)
    return rref(out).basis


def dual(G: Mat, form: str = "euclidean") -> Mat:
    """Generator matrix of the dual code under the chosen inner product."""
    if form == "euclidean":
        return kernel(G)
    if form == "hermitian":
        # <v,u>_H = sum v_i u_i^q, so the Hermitian dual is the entrywise
        # conjugate of the Euclidean dual
        return kernel(G).conj()
    raise ValueError(f"unknown duality form {form!r}")


def subspace_sum(A: Mat, B: Mat) -> Mat:
    return rref(vstack(A, B)).basis


def subspace_intersect(A: Mat, B: Mat) -> Mat:
    ha = kernel(A)
    hb = kernel(B)
    return kernel(vstack(ha, hb))


def subspace_combine(A: Mat, B: Mat, op: str) -> Mat:
    if op == "sum":
        return subspace_sum(A, B)
    if op == "intersect":
        return subspace_intersect(A, B)
    raise ValueError(f"unknown subspace op {op!r}")


def span_basis(M: Mat) -> Mat:
    """Canonical (rref, zero rows dropped) basis of the row space."""
    return rref(M).basis


def same_span(A: Mat, B: Mat) -> bool:
    return span_basis(A) == span_basis(B)


def contains_row_space(A: Mat, B: Mat) -> bool:
    """True iff the row space of A contains the row space of B."""
    return rref(vstack(A, B)).rank == rref(A).rank


def gram_hermitian(A: Mat) -> Mat:
    """Matrix of pairwise Hermitian inner products of the rows of A."""
    return A @ A.conj().T()


def gram_euclidean(A: Mat, B: Mat) -> Mat:
    return A @ B.T()


@dataclass(frozen=True)
class CodeParams:
    """Classical code parameters [n, k, d] over a field of the given order."""

    n: int
    k: int
    d: int | None
    field_order: int

    def __post_init__(self) -> None:
        if not 0 <= self.k <= self.n:
            raise ValueError(f"bad dimensions [{self.n},{self.k}]")
        if self.k >= 1 and self.d is not None and not 1 <= self.d <= self.n - self.k + 1:
            raise ValueError(f"[{self.n},{self.k},{self.d}] violates the Singleton bound")

    def __str__(self) -> str:
        d = "?" if self.d is None else str(self.d)
        return f"[{self.n},{self.k},{d}]_{self.field_order}"
