"""Seeded search for quasi-cyclic codes with designed Hermitian hulls.

Constituent sets are sampled so that every component except the one at
the x -+ 1 factor satisfies its self-orthogonality constraint (the
duality coupling of `qc`): components coupled to themselves are drawn
as twisted self-orthogonal subspaces, coupled pairs draw the first side
freely and the second inside the twisted dual of the first.  The x -+ 1
component is free; the hull defect e is then controlled entirely by it,
and candidates are filtered by e <= e_max before any expensive work.

Trials are reproducible: trial i uses random.Random(f"{seed}:{i}"), so
results are identical for any worker count and are merged in trial
order.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from datetime import datetime, timezone

from .gf import Field, field_of_order
from .linalg import Mat, dual, rref, subspace_intersect
from .mindist import min_weight_auto
from .qc import ConstituentSet, coupling, dimension, lift, pattern_for
from .quantum import construction_x
from .tables import RegistryRecord


@dataclass
class SearchConfig:
    q2: int
    m: int
    ell: int
    trials: int = 1000
    seed: int = 0
    e_max: int = 1
    work_limit: int | None = 4_000_000
    target: tuple[int, int, int] | None = None  # (n, k, d) floor to meet or beat
    workers: int = 1
    mode: str = "random"  # random | exhaustive
    timestamps: bool = False

    def __post_init__(self) -> None:
        import math

        if math.gcd(self.m, self.q2) != 1:
            raise ValueError(f"need gcd(m, q2) = 1, got m={self.m}, q2={self.q2}")
        if self.e_max < 0:
            raise ValueError("e_max must be >= 0")
        if self.mode not in ("random", "exhaustive"):
            raise ValueError(f"unknown search mode {self.mode!r}")


def parse_config(text: str) -> SearchConfig:
    """Flat key=value config (one pair per line, '#' comments)."""
    kv: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        kv[key] = val
    missing = [k for k in ("q2", "m", "ell") if k not in kv]
    if missing:
        raise ValueError(f"config is missing required keys: {', '.join(missing)}")
    ints = {k: int(kv[k]) for k in ("q2", "m", "ell", "trials", "seed", "e_max", "workers") if k in kv}
    cfg = SearchConfig(
        q2=ints.pop("q2"),
        m=ints.pop("m"),
        ell=ints.pop("ell"),
        **ints,
    )
    if "work_limit" in kv:
        cfg.work_limit = int(kv["work_limit"])
    if "mode" in kv:
        cfg.mode = kv["mode"]
        cfg.__post_init__()
    if "target" in kv:
        parts = kv["target"].replace("[", "").replace("]", "").split(",")
        if len(parts) != 3:
            raise ValueError(f"bad target {kv['target']!r}; expected n,k,d")
        cfg.target = tuple(int(p) for p in parts)
    return cfg


# ---------------------------------------------------------------------------
# Constituent sampling
# ---------------------------------------------------------------------------


def _random_subspace(K: Field, ell: int, rng: random.Random, dim: int | None = None) -> Mat:
    d = rng.randint(0, ell) if dim is None else dim
    if d == 0:
        return Mat(K, [], ncols=ell)
    while True:
        M = Mat(K, [[rng.randrange(K.order) for _ in range(ell)] for _ in range(d)], ncols=ell)
        r = rref(M)
        if r.rank == d:
            return r.basis


def _random_subspace_of(W: Mat, rng: random.Random) -> Mat:
    if W.nrows == 0:
        return Mat(W.field, [], ncols=W.ncols)
    d = rng.randint(0, W.nrows)
    if d == 0:
        return Mat(W.field, [], ncols=W.ncols)
    while True:
        coeffs = Mat(
            W.field,
            [[rng.randrange(W.field.order) for _ in range(W.nrows)] for _ in range(d)],
            ncols=W.nrows,
        )
        r = rref(coeffs @ W)
        if r.rank == d:
            return r.basis


def _is_twisted_so(M: Mat, twist: int) -> bool:
    return (M.pow_entries(twist) @ M.T()).is_zero()


def _random_twisted_so(K: Field, ell: int, rng: random.Random, twist: int) -> Mat:
    """A random subspace M with M^(twist) . M^T = 0 (dimension <= ell/2)."""
    want = rng.randint(0, ell // 2)
    if want == 0:
        return Mat(K, [], ncols=ell)
    if ell <= 3:
        # rejection is cheap at this size
        for _ in range(200):
            M = _random_subspace(K, ell, rng, dim=want)
            if _is_twisted_so(M, twist):
                return M
            if want > 1 and rng.random() < 0.25:
                want -= 1
        return Mat(K, [], ncols=ell)
    # grow an isotropic basis vector by vector
    n = K.order - 1
    tw_inv = pow(twist, -1, n) if n > 1 else 1
    basis = Mat(K, [], ncols=ell)
    for _ in range(want):
        if basis.nrows:
            # candidates orthogonal to the span on both sides of the form
            right = dual(basis.pow_entries(twist), "euclidean")
            left = dual(basis, "euclidean").pow_entries(tw_inv)
            W = subspace_intersect(right, rref(left).basis)
        else:
            W = Mat.identity(K, ell)
        found = None
        for _try in range(200):
            v = _random_subspace_of(W, rng)
            if v.nrows != 1:
                continue
            cand = rref(Mat(K, list(basis.a) + list(v.a), ncols=ell)).basis
            if cand.nrows == basis.nrows + 1 and _is_twisted_so(cand, twist):
                found = cand
                break
        if found is None:
            break
        basis = found
    return basis


def sample_constituents(pattern, ell: int, rng: random.Random, constrain: bool = True) -> ConstituentSet:
    """Draw one constituent set; with `constrain`, all components except
    the x -+ 1 one satisfy their self-orthogonality conditions."""
    slots = pattern.slots()
    cpl = coupling(pattern)
    F = pattern.base_field
    q2 = F.order
    q = F.p ** (F.k // 2)
    mats: list[Mat | None] = [None] * len(slots)
    for i, slot in enumerate(slots):
        if mats[i] is not None:
            continue
        K = slot.subfield
        j, t = cpl[i]
        if not constrain or i == 0:
            mats[i] = _random_subspace(K, ell, rng)
            if constrain and i == 0 and j != 0:
                raise RuntimeError("x -+ 1 component must couple to itself")
            continue
        if j == i:
            twist = (pow(q2, t) * q) % (K.order - 1) or (K.order - 1)
            mats[i] = _random_twisted_so(K, ell, rng, twist)
        else:
            mats[i] = _random_subspace(K, ell, rng)
            # partner lives inside the twisted dual of this side
            jj, tt = cpl[j]
            assert jj == i
            twist = (pow(q2, tt) * q) % (K.order - 1) or (K.order - 1)
            W = dual(mats[i].pow_entries(twist), "euclidean")
            mats[j] = _random_subspace_of(W, rng)
    s = pattern.s
    selfrec = mats[:s]
    pairs = [(mats[s + 2 * j], mats[s + 2 * j + 1]) for j in range(pattern.r)]
    return ConstituentSet(pattern, ell, selfrec, pairs)


def _all_subspaces(K: Field, ell: int):
    """Every subspace of K^ell as an rref basis (small fields/lengths only)."""
    out = [Mat(K, [], ncols=ell)]
    for d in range(1, ell + 1):
        for pivots in itertools.combinations(range(ell), d):
            free_pos = [
                (r, c)
                for r in range(d)
                for c in range(ell)
                if c > pivots[r] and c not in pivots
            ]
            for vals in itertools.product(range(K.order), repeat=len(free_pos)):
                rows = [[0] * ell for _ in range(d)]
                for r, p in enumerate(pivots):
                    rows[r][p] = 1
                for (r, c), v in zip(free_pos, vals):
                    rows[r][c] = v
                out.append(Mat(K, rows, ncols=ell))
    return out


def enumerate_constituents(pattern, ell: int, e_max: int):
    """All constituent sets satisfying the design constraints (the x -+ 1
    component is Hermitian self-orthogonal when e_max = 0, free otherwise)."""
    slots = pattern.slots()
    cpl = coupling(pattern)
    F = pattern.base_field
    q2 = F.order
    q = F.p ** (F.k // 2)

    def slot_options(i: int, others: list[Mat | None]):
        """Admissible matrices for slot i given already-fixed partners."""
        K = slots[i].subfield
        j, t = cpl[i]
        twist = (pow(q2, t) * q) % (K.order - 1) or (K.order - 1)
        if j == i:
            allsub = _all_subspaces(K, ell)
            if i == 0 and e_max > 0:
                return allsub
            return [M for M in allsub if _is_twisted_so(M, twist)]
        if others[j] is None:
            return _all_subspaces(K, ell)  # first member of the pair: free
        jj, tt = cpl[j]
        assert jj == i
        Kj = slots[j].subfield
        twist_j = (pow(q2, tt) * q) % (Kj.order - 1) or (Kj.order - 1)
        return _all_subspaces_of(dual(others[j].pow_entries(twist_j), "euclidean"))

    order = []
    for i in range(len(slots)):
        j, _ = cpl[i]
        if j >= i:
            order.append(i)
            if j > i:
                order.append(j)

    def walk(pos: int, mats: list[Mat | None]):
        if pos == len(order):
            s = pattern.s
            selfrec = mats[:s]
            pairs = [(mats[s + 2 * a], mats[s + 2 * a + 1]) for a in range(pattern.r)]
            yield ConstituentSet(pattern, ell, selfrec, pairs)
            return
        i = order[pos]
        for M in slot_options(i, mats):
            mats[i] = M
            yield from walk(pos + 1, mats)
            mats[i] = None

    yield from walk(0, [None] * len(slots))


def _all_subspaces_of(W: Mat):
    K = W.field
    if W.nrows == 0:
        return [Mat(K, [], ncols=W.ncols)]
    out = []
    for coeff in _all_subspaces(K, W.nrows):
        if coeff.nrows == 0:
            out.append(Mat(K, [], ncols=W.ncols))
        else:
            out.append(rref(coeff @ W).basis)
    return out


# ---------------------------------------------------------------------------
# Search drivers
# ---------------------------------------------------------------------------


def _quick_params(S: ConstituentSet):
    k = dimension(S)
    c1 = S.slot_mats()[0]
    e = c1.nrows - subspace_intersect(c1, dual(c1, "hermitian")).nrows
    return k, e


def _evaluate(cfg: SearchConfig, S: ConstituentSet, trial: int) -> RegistryRecord | None:
    n = cfg.m * cfg.ell
    k, e = _quick_params(S)
    if k == 0:
        return None  # the zero code only yields the trivial [[n, n, 1]]
    if e > cfg.e_max:
        return None
    n_q, k_q = n + e, n - 2 * k + e
    if k_q < 0:
        return None
    if cfg.target is not None and (n_q, k_q) != (cfg.target[0], cfg.target[1]):
        return None
    C = lift(S)
    # cheap screen: a dual basis row lighter than the target kills the bound
    target_d = cfg.target[2] if cfg.target is not None else None
    D = dual(C.expanded, "hermitian")
    if target_d is not None:
        import numpy as np

        row_wts = np.count_nonzero(D.a, axis=1)
        if row_wts.size and int(row_wts.min()) < target_d:
            return None
    res = construction_x(C, work_limit=cfg.work_limit, certify_d=target_d)
    if cfg.target is not None and not (
        res.params.d_lower >= cfg.target[2]
        and res.d_dual.meets(cfg.target[2])
        and (res.d_sum is None or res.d_sum.meets(max(1, cfg.target[2] - 1)))
    ):
        return None
    gens = tuple("(" + ", ".join(str(f) for f in g) + ")" for g in C.module_gens)
    return RegistryRecord(
        id=f"qc{cfg.q2}m{cfg.m}l{cfg.ell}-s{cfg.seed}t{trial}",
        q2=cfg.q2,
        m=cfg.m,
        ell=cfg.ell,
        generators=gens,
        k=C.dim,
        hull_dim=C.dim - res.e,
        e=res.e,
        d_dual=res.d_dual.lower,
        d_dual_exact=res.d_dual.exact,
        d_sum=res.d_sum.lower if res.d_sum else None,
        d_sum_exact=res.d_sum.exact if res.d_sum else None,
        n_q=res.params.n,
        k_q=res.params.k,
        d_lower=res.params.d_lower,
        seed=cfg.seed,
        trial=trial,
        timestamp=datetime.now(timezone.utc).isoformat() if cfg.timestamps else None,
    )


def _run_trial_range(cfg: SearchConfig, lo: int, hi: int) -> list[RegistryRecord]:
    pat = pattern_for(cfg.q2, cfg.m)
    out = []
    for trial in range(lo, hi):
        rng = random.Random(f"{cfg.seed}:{trial}")
        S = sample_constituents(pat, cfg.ell, rng)
        rec = _evaluate(cfg, S, trial)
        if rec is not None:
            out.append(rec)
    return out


def search_run(cfg: SearchConfig) -> list[RegistryRecord]:
    """Random search; deterministic for a fixed (config, seed), with
    results independent of the worker count."""
    if cfg.mode == "exhaustive":
        return search_exhaustive(cfg)
    if cfg.workers <= 1 or cfg.trials < 64:
        return _run_trial_range(cfg, 0, cfg.trials)
    from concurrent.futures import ProcessPoolExecutor

    chunk = (cfg.trials + cfg.workers - 1) // cfg.workers
    spans = [(lo, min(lo + chunk, cfg.trials)) for lo in range(0, cfg.trials, chunk)]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        parts = list(pool.map(_run_trial_range, itertools.repeat(cfg), *zip(*spans)))
    merged = [rec for part in parts for rec in part]
    merged.sort(key=lambda r: r.trial)
    return merged


def search_exhaustive(cfg: SearchConfig) -> list[RegistryRecord]:
    """Enumerate every admissible constituent set (tiny shapes only) and
    keep the best record for each stabilizer (n, k)."""
    pat = pattern_for(cfg.q2, cfg.m)
    best: dict[tuple[int, int], RegistryRecord] = {}
    for trial, S in enumerate(enumerate_constituents(pat, cfg.ell, cfg.e_max)):
        rec = _evaluate(cfg, S, trial)
        if rec is None:
            continue
        key = (rec.n_q, rec.k_q)
        if key not in best or rec.d_lower > best[key].d_lower:
            best[key] = rec
    return sorted(best.values(), key=lambda r: (r.n_q, r.k_q, r.trial))
