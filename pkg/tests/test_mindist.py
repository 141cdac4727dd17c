import random

import pytest

from qcx.gf import field
from qcx.linalg import Mat, rref, vstack
from qcx.mindist import (
    DistanceResult,
    min_weight_auto,
    min_weight_bruteforce,
    min_weight_infoset,
)

from conftest import random_matrix


def test_single_generator_gf9(gf9):
    w = gf9.gen
    G = Mat(gf9, [[1, (w**2).code]], ncols=2)
    for fn in (min_weight_bruteforce, min_weight_infoset):
        res = fn(G)
        assert res.d == 2
        assert res.witness is not None and sum(1 for c in res.witness if c) == 2


def test_zero_dimensional_code(gf9):
    Z = Mat.zeros(gf9, 2, 5)
    with pytest.raises(ValueError):
        min_weight_bruteforce(Z)
    with pytest.raises(ValueError):
        min_weight_infoset(Z)


def test_brute_cap_refusal(gf4):
    G = Mat.identity(gf4, 14)
    with pytest.raises(ValueError, match="infoset"):
        min_weight_bruteforce(G, cap=1000)


def test_cross_method_regression(rng):
    checked = 0
    for F in (field(2, 2), field(3, 2)):
        kmax = 7 if F.order == 4 else 5
        while checked < 30 or (F.order == 9 and checked < 60):
            n = rng.randrange(4, 15)
            k = rng.randrange(1, min(n, kmax) + 1)
            G = random_matrix(F, k, n, rng)
            if rref(G).rank == 0:
                continue
            b = min_weight_bruteforce(G)
            i = min_weight_infoset(G)
            assert b.exact and i.exact and b.d == i.d
            checked += 1
        checked = 0 if F.order == 4 else checked


def test_witness_always_valid(rng, gf9):
    for _ in range(20):
        G = random_matrix(gf9, rng.randrange(1, 6), 10, rng)
        if rref(G).rank == 0:
            continue
        res = min_weight_auto(G)
        w = Mat(gf9, [list(res.witness)], ncols=10)
        assert rref(vstack(rref(G).basis, w)).rank == rref(G).rank
        assert sum(1 for c in res.witness if c) == res.d


def test_monotone_bounds_hook(example2):
    from qcx.linalg import dual

    D = dual(example2.expanded, "hermitian")
    events = []
    res = min_weight_infoset(D, on_level=lambda w, lo, up: events.append((w, lo, up)))
    assert res.d == 5
    lowers = [e[1] for e in events]
    assert lowers == sorted(lowers)
    uppers = [e[2] for e in events if e[2] is not None]
    assert all(a >= b for a, b in zip(uppers, uppers[1:]))


def test_work_limit_bracket(example2):
    from qcx.linalg import dual

    D = dual(example2.expanded, "hermitian")
    res = min_weight_infoset(D, work_limit=100)
    assert not res.exact
    lo, up = res.bracket
    assert lo >= 1 and (up is None or up >= 5)
    # bracket brackets the true value
    assert lo <= 5 and (up is None or up >= 5)


def test_target_mode(example2):
    from qcx.linalg import dual

    D = dual(example2.expanded, "hermitian")
    ok = min_weight_infoset(D, target=5)
    assert ok.meets(5)
    ok4 = min_weight_infoset(D, target=4)
    assert ok4.meets(4) and ok4.work <= ok.work
    # an impossible target is disproved by a light codeword
    bad = min_weight_infoset(D, target=6)
    assert not bad.meets(6) and bad.upper == 5


def test_result_bracket_normalization():
    r = DistanceResult(lower=6, upper=4, witness=None, work=0, method="infoset")
    assert r.lower == 4 and r.exact and r.d == 4


def test_work_counts_reported(gf9, rng):
    G = random_matrix(gf9, 3, 8, rng)
    b = min_weight_bruteforce(G)
    assert b.work == 9 ** rref(G).rank - 1
    i = min_weight_infoset(G)
    assert i.work > 0


def test_d_property_raises_on_bracket():
    r = DistanceResult(lower=2, upper=5, witness=None, work=0, method="infoset")
    with pytest.raises(ValueError):
        r.d
