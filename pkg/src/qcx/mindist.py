"""Exact minimum weight of linear codes over small fields.

Two independent engines:

* `min_weight_bruteforce` enumerates every nonzero message, vectorized in
  numpy batches over a precomputed tail table.  It is the oracle for the
  fast path and refuses message spaces above its cap.

* `min_weight_infoset` is an information-set / multiple-matrix
  enumeration.  Systematic generator matrices are built greedily: each
  round row-reduces preferring columns not yet used as pivots, records
  the rank deficiency delta_a = k - (new pivots), and stops when no new
  pivot column can be found.  Messages are enumerated by ascending
  support weight w with the first nonzero coordinate normalized to 1
  (weights are invariant under scalar multiples).  After finishing level
  w every not-yet-seen codeword restricts to weight >= w + 1 - delta_a
  on each matrix's fresh pivot set, so

      lower(w) = sum_a max(0, w + 1 - delta_a)

  and the lightest codeword seen so far is an upper bound.  The scan
  ends when lower >= upper (exact distance), when a requested target
  bound is certified, or when the next level would exceed the work
  budget (the current (lower, upper) bracket is returned).

Work is counted in enumerated messages and level costs are checked
before a level starts, so results are deterministic for a given budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .linalg import Mat, rref, vstack

BRUTE_CAP = 1 << 24
_TAIL_MAX = 4096


@dataclass
class DistanceResult:
    """Outcome of a minimum-weight computation.

    `lower` is always a certified lower bound on the distance; `upper`
    is the weight of the lightest codeword seen (with a witness), or
    None if none was evaluated.  The result is exact when the two meet.
    """

    lower: int
    upper: int | None
    witness: tuple[int, ...] | None
    work: int
    method: str

    def __post_init__(self) -> None:
        # the level bound only constrains codewords not yet enumerated, so
        # it may overshoot a found codeword; the distance never exceeds it
        if self.upper is not None and self.lower > self.upper:
            self.lower = self.upper

    @property
    def exact(self) -> bool:
        return self.upper is not None and self.lower >= self.upper

    @property
    def d(self) -> int:
        if not self.exact:
            raise ValueError(f"distance not certified exactly (bracket {self.bracket})")
        return self.upper

    @property
    def bracket(self) -> tuple[int, int | None]:
        return (self.lower, self.upper)

    def meets(self, target: int) -> bool:
        """True iff d >= target is certified."""
        return self.lower >= target and (self.upper is None or self.upper >= target)


def _basis_rows(G: Mat) -> Mat:
    basis = rref(G).basis
    if basis.nrows == 0:
        raise ValueError("zero-dimensional code has no minimum distance")
    return basis


def _check_witness(G: Mat, basis: Mat, res: DistanceResult) -> DistanceResult:
    if res.witness is None:
        return res
    w = Mat(G.field, [list(res.witness)], ncols=basis.ncols)
    weight = sum(1 for c in res.witness if c)
    member = rref(vstack(basis, w)).rank == basis.nrows
    if weight != res.upper or not member:
        raise RuntimeError("internal error: witness failed verification")
    return res


def _scaled_rows(F, rows: np.ndarray) -> np.ndarray:
    """(k, q-1, n) array: rows scaled by every nonzero field element."""
    _, mul, _, _, _ = F.pair_tables()
    k, n = rows.shape
    q = F.order
    out = np.empty((k, q - 1, n), dtype=np.uint8)
    for s in range(1, q):
        out[:, s - 1, :] = mul[s, rows]
    return out


def _add_flat(F) -> np.ndarray:
    add = F.pair_tables()[0]
    return np.ascontiguousarray(add, dtype=np.uint8).reshape(-1)


class _Best:
    __slots__ = ("weight", "vec", "work")

    def __init__(self) -> None:
        self.weight: int | None = None
        self.vec: np.ndarray | None = None
        self.work = 0

    def offer_block(self, sums: np.ndarray, wts: np.ndarray) -> None:
        m = int(wts.min())
        if self.weight is None or m < self.weight:
            idx = int(np.argmax(wts == m))
            self.weight = m
            self.vec = sums[idx].copy()


def _scan_level(F, scaled: np.ndarray, flat_scaled: np.ndarray, addflat, w: int, best: _Best) -> None:
    k = scaled.shape[0]
    q = F.order
    n = scaled.shape[2]
    if w == 1:
        block = scaled[:, 0, :]
        wts = np.count_nonzero(block, axis=1)
        best.work += k
        best.offer_block(block, wts)
        return

    qm1 = q - 1

    def leaf(partial: np.ndarray, start: int) -> None:
        block = flat_scaled[start * qm1 :]
        idx = partial.astype(np.int32) * q
        sums = addflat[idx[None, :] + block]
        wts = np.count_nonzero(sums, axis=1)
        best.work += block.shape[0]
        best.offer_block(sums, wts)

    def rec(partial: np.ndarray, start: int, remaining: int) -> None:
        if remaining == 1:
            leaf(partial, start)
            return
        for i in range(start, k - remaining + 1):
            base = partial.astype(np.int32) * q
            for s in range(qm1):
                rec(addflat[base + scaled[i, s]], i + 1, remaining - 1)

    for i1 in range(0, k - w + 1):
        rec(scaled[i1, 0], i1 + 1, w - 1)


def _info_matrices(F, basis: Mat) -> tuple[list[np.ndarray], list[int]]:
    k, n = basis.nrows, basis.ncols
    used: set[int] = set()
    mats: list[np.ndarray] = []
    deltas: list[int] = []
    while True:
        unused = [c for c in range(n) if c not in used]
        if not unused:
            break
        order = unused + sorted(used)
        rr = rref(basis, col_order=order)
        fresh = [p for p in rr.pivots if p not in used]
        if not fresh:
            break
        mats.append(rr.mat.a[:k].astype(np.uint8))
        deltas.append(k - len(fresh))
        used.update(fresh)
    return mats, deltas


def min_weight_infoset(
    G: Mat,
    *,
    work_limit: int | None = None,
    target: int | None = None,
    on_level=None,
) -> DistanceResult:
    """Exact minimum weight (or a certified bracket) by information sets.

    With `target` set, the scan stops as soon as d >= target is certified
    or a lighter codeword disproves it.  With `work_limit` set, a level
    whose projected cost would exceed the remaining budget is not
    started and the current bracket is returned.
    """
    F = G.field
    if F.pair_tables() is None:
        raise ValueError(f"field {F!r} too large for the enumeration kernel")
    basis = _basis_rows(G)
    k = basis.nrows
    q = F.order
    mats, deltas = _info_matrices(F, basis)
    scaled = [_scaled_rows(F, m) for m in mats]
    flat = [s.reshape(-1, s.shape[2]) for s in scaled]
    addflat = _add_flat(F)
    best = _Best()
    lower = 0
    w = 0
    while True:
        w += 1
        level_cost = len(mats) * comb(k, w) * (q - 1) ** (w - 1)
        if work_limit is not None and best.work + level_cost > work_limit:
            break
        for sc, fl in zip(scaled, flat):
            _scan_level(F, sc, fl, addflat, w, best)
        lower = sum(max(0, w + 1 - d) for d in deltas)
        if on_level is not None:
            on_level(w, lower, best.weight)
        if best.weight is not None and lower >= best.weight:
            break
        if target is not None and best.weight is not None and best.weight < target:
            break
        if target is not None and lower >= target:
            break
        if w >= k:
            lower = best.weight  # all messages enumerated
            break
    witness = tuple(int(c) for c in best.vec) if best.vec is not None else None
    res = DistanceResult(
        lower=lower,
        upper=best.weight,
        witness=witness,
        work=best.work,
        method="infoset",
    )
    return _check_witness(G, basis, res)


def min_weight_bruteforce(G: Mat, cap: int = BRUTE_CAP) -> DistanceResult:
    """Exact minimum weight by full message enumeration (the oracle)."""
    F = G.field
    if F.pair_tables() is None:
        raise ValueError(f"field {F!r} too large for brute-force enumeration")
    basis = _basis_rows(G)
    k, n = basis.nrows, basis.ncols
    q = F.order
    total = q**k
    if total - 1 > cap:
        raise ValueError(
            f"brute force needs {total - 1} messages (> cap {cap}); use min_weight_infoset"
        )
    add, mul = F.pair_tables()[0], F.pair_tables()[1]
    addflat = _add_flat(F)
    rows = basis.a.astype(np.uint8)

    t = 0
    while t < k and q ** (t + 1) <= _TAIL_MAX:
        t += 1
    tail = np.zeros((1, n), dtype=np.uint8)
    for i in range(k - t, k):
        scaledi = mul[np.arange(q)[:, None], rows[i][None, :]].astype(np.uint8)
        # new tail: scalar choice is the most significant digit of the block
        pieces = [addflat[scaledi[s].astype(np.int32) * q + tail] for s in range(q)]
        tail = np.concatenate(pieces, axis=0)
    tail_wts_cache = None

    best = _Best()
    best.work = total - 1

    def scan_head(partial: np.ndarray, head_zero: bool) -> None:
        nonlocal tail_wts_cache
        sums = addflat[partial.astype(np.int32) * q + tail]
        wts = np.count_nonzero(sums, axis=1)
        if head_zero:
            wts = wts.copy()
            wts[0] = n + 1  # exclude the all-zero message
        best.offer_block(sums, wts)

    def rec(partial: np.ndarray, i: int, zero_so_far: bool) -> None:
        if i == k - t:
            scan_head(partial, zero_so_far)
            return
        base = partial.astype(np.int32) * q
        for s in range(q):
            nxt = addflat[base + mul[s, rows[i]]] if s else partial
            rec(nxt, i + 1, zero_so_far and s == 0)

    rec(np.zeros(n, dtype=np.uint8), 0, True)
    witness = tuple(int(c) for c in best.vec) if best.vec is not None else None
    res = DistanceResult(
        lower=best.weight,
        upper=best.weight,
        witness=witness,
        work=total - 1,
        method="bruteforce",
    )
    return _check_witness(G, basis, res)


def min_weight_auto(
    G: Mat,
    *,
    work_limit: int | None = None,
    target: int | None = None,
    brute_threshold: int = 4096,
) -> DistanceResult:
    """Brute force for tiny message spaces, information sets otherwise."""
    k = rref(G).rank
    if k and G.field.order**k - 1 <= brute_threshold:
        return min_weight_bruteforce(G)
    return min_weight_infoset(G, work_limit=work_limit, target=target)
