import math
import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sarith import abgroup as ab


# ---------------------------------------------------------------------------
# oracle: invariant factors via gcds of k x k minors


def minors_gcd_invariants(M):
    rows, cols = len(M), len(M[0])
    n = min(rows, cols)
    gcds = [1]
    for k in range(1, n + 1):
        g = 0
        for rsel in combinations(range(rows), k):
            for csel in combinations(range(cols), k):
                sub = [[M[i][j] for j in csel] for i in rsel]
                g = math.gcd(g, ab.det_int(sub))
        gcds.append(g)
    out = []
    for k in range(1, n + 1):
        if gcds[k] == 0:
            out.append(0)
        else:
            out.append(gcds[k] // gcds[k - 1])
    return out


def is_unimodular(M):
    return abs(ab.det_int(M)) == 1


# ---------------------------------------------------------------------------
# snf examples


def test_snf_diag_2_3():
    U, D, V = ab.snf([[2, 0], [0, 3]])
    assert [D[0][0], D[1][1]] == [1, 6]
    assert is_unimodular(U) and is_unimodular(V)


def test_snf_zero_matrix():
    U, D, V = ab.snf([[0, 0], [0, 0]])
    assert D == [[0, 0], [0, 0]]


def test_snf_identity():
    U, D, V = ab.snf([[1, 0], [0, 1]])
    assert D == [[1, 0], [0, 1]]


def test_snf_dim_limit():
    with pytest.raises(ValueError):
        ab.snf([[0] * 33])


@settings(max_examples=120, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_snf_properties(r, c, data):
    M = [[data.draw(st.integers(-9, 9)) for _ in range(c)] for _ in range(r)]
    U, D, V = ab.snf(M)
    assert ab._matmul(ab._matmul(U, M), V) == D
    assert is_unimodular(U) and is_unimodular(V)
    diag = [D[i][i] for i in range(min(r, c))]
    for i in range(r):
        for j in range(c):
            if i != j:
                assert D[i][j] == 0
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        if a:
            assert b % a == 0
        else:
            assert b == 0
    # invariant factors match the k x k minor-gcd oracle
    assert diag == minors_gcd_invariants(M)


def test_kernel_basis():
    M = [[1, 2], [2, 4], [0, 0]]
    ker = ab.kernel_basis(M)
    # kernel of x*M = 0 has rank 2
    assert len(ker) == 2
    for v in ker:
        assert all(sum(v[i] * M[i][j] for i in range(3)) == 0 for j in range(2))


def test_row_space_basis():
    M = [[2, 0], [0, 3], [2, 3]]
    basis = ab.row_space_basis(M)
    assert len(basis) == 2
    # (1, 0) is not in the lattice; (2, 3) is
    U, D, V = ab.snf(basis)
    assert D[0][0] == 1 and D[1][1] == 6


def test_unimodular_inverse():
    W = [[1, 2], [0, 1]]
    Winv = ab.unimodular_inverse(W)
    assert ab._matmul(W, Winv) == [[1, 0], [0, 1]]
    with pytest.raises(ValueError):
        ab.unimodular_inverse([[2, 0], [0, 1]])


# ---------------------------------------------------------------------------
# groups


def test_finabgroup_validation():
    with pytest.raises(ValueError):
        ab.FinAbGroup((1,), 0)
    with pytest.raises(ValueError):
        ab.FinAbGroup((4, 6), 0)  # 4 does not divide 6
    g = ab.FinAbGroup((2, 4), 1)
    assert g.order() is None
    assert ab.FinAbGroup((2, 4), 0).order() == 8


def test_grpelem_arithmetic():
    g = ab.FinAbGroup((3,), 1)
    a = g.element([2, 5])
    b = g.element([2, -5])
    assert (a + b).coords == (1, 0)
    assert (a - a).is_identity()
    assert a.scale(3).coords == (0, 15)


def test_elements_enumeration():
    g = ab.FinAbGroup((2, 4), 0)
    assert len(set(g.elements())) == 8


def test_quotient_by_rows_gcd_example():
    # Z / <2Z> = Z/2
    z = ab.FinAbGroup((), 1)
    q, proj = ab.quotient_by_rows(z, [[2]])
    assert q.factors == (2,) and q.rank == 0
    assert proj([1]).coords == (1,)
    assert proj([2]).is_identity()
    assert proj([3]) == proj([1])


def test_quotient_to_trivial():
    z = ab.FinAbGroup((), 1)
    q, proj = ab.quotient_by_rows(z, [[1]])
    assert q.factors == () and q.rank == 0
    assert proj([5]).is_identity()


def test_quotient_of_z_plus_torsion():
    # (Z/9 + Z) / <(0,1)> = Z/9
    g = ab.FinAbGroup((9,), 1)
    q, proj = ab.quotient_by_rows(g, [[0, 1]])
    assert q.factors == (9,) and q.rank == 0
    assert proj([4, 7]).coords == (4,)
    # projection is a homomorphism
    rng = random.Random(3)
    for _ in range(100):
        u = [rng.randint(-9, 9) for _ in range(2)]
        v = [rng.randint(-9, 9) for _ in range(2)]
        s = [a + b for a, b in zip(u, v)]
        assert proj(s) == proj(u) + proj(v)


def test_quotient_mixed():
    # (Z + Z) / <(2, 0), (0, 3)> = Z/2 + Z/3 = Z/6
    g = ab.FinAbGroup((), 2)
    q, proj = ab.quotient_by_rows(g, [[2, 0], [0, 3]])
    assert q.factors == (6,) and q.rank == 0
    elems = {proj([i, j]).coords for i in range(2) for j in range(3)}
    assert len(elems) == 6
