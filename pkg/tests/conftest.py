import random

import pytest

from qcx.gf import field
from qcx.linalg import Mat, rref
from qcx.qc import ConstituentSet, parse_qc, pattern_for

# The two worked constructions: explicit module generators over GF(4)
# (m=15) and GF(9) (m=8), both of index 2.

EXAMPLE1_QC = """4 15 2
(z 0 1 z2 0 0 z2 1 0 z 0 0 0, z2 z2 0 z2 1 0 z2 1 z2 z z2 0 z 1)
(0, z2 z z2 z2 0 z 1 z z 0 1 z2 1 1 0)
"""

EXAMPLE2_QC = """9 8 2
(w3 0 w 0 w6 0 w2 w4, w2 w4 0 w4 w3 0 w7 w3)
(0, w w6 w3 1 w5 w2 w7 w4)
"""


@pytest.fixture(scope="session")
def example1():
    return parse_qc(EXAMPLE1_QC)


@pytest.fixture(scope="session")
def example2():
    return parse_qc(EXAMPLE2_QC)


def random_subspace(F, ncols, rng, dim=None):
    d = rng.randint(0, ncols) if dim is None else dim
    if d == 0:
        return Mat(F, [], ncols=ncols)
    while True:
        M = Mat(F, [[rng.randrange(F.order) for _ in range(ncols)] for _ in range(d)], ncols=ncols)
        r = rref(M)
        if r.rank == d:
            return r.basis


def random_constituents(q2, m, ell, rng):
    """A fully unconstrained random constituent set."""
    pat = pattern_for(q2, m)
    selfrec = [random_subspace(s.subfield, ell, rng) for s in pat.selfrec]
    pairs = [
        (random_subspace(p.subfield, ell, rng), random_subspace(p.subfield, ell, rng))
        for p in pat.pairs
    ]
    return ConstituentSet(pat, ell, selfrec, pairs)


def random_matrix(F, nrows, ncols, rng):
    return Mat(F, [[rng.randrange(F.order) for _ in range(ncols)] for _ in range(nrows)], ncols=ncols)


@pytest.fixture
def rng():
    return random.Random(0xC0DE)


@pytest.fixture(scope="session")
def gf4():
    return field(2, 2)


@pytest.fixture(scope="session")
def gf9():
    return field(3, 2)
