"""Finitely generated abelian groups via exact integer Smith normal form.

The SNF uses naive gcd pivoting with explicit unimodular transformation
matrices; coefficient growth is irrelevant at the dimensions involved
(<= 32), and every step is auditable.
"""

from __future__ import annotations

import math

from .errors import InvariantViolationError

MAX_SNF_DIM = 32


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _matmul(A, B):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for l in range(k):
            a = Ai[l]
            if a:
                Bl = B[l]
                row = out[i]
                for j in range(m):
                    row[j] += a * Bl[j]
    return out


def snf(M):
    """Smith normal form: (U, D, V) with U*M*V = D, U and V unimodular,
    D diagonal with nonnegative entries and d1 | d2 | ... ."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if rows > MAX_SNF_DIM or cols > MAX_SNF_DIM:
        raise ValueError(f"matrix dimensions exceed {MAX_SNF_DIM}")
    A = [list(r) for r in M]
    U = _identity(rows)
    V = _identity(cols)

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def row_add(i, j, c):  # row i += c * row j
        A[i] = [a + c * b for a, b in zip(A[i], A[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]

    def col_add(i, j, c):  # col i += c * col j
        for r in A:
            r[i] += c * r[j]
        for r in V:
            r[i] += c * r[j]

    def row_neg(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]

    k = 0
    while k < rows and k < cols:
        # find a nonzero pivot of smallest absolute value
        piv = None
        for i in range(k, rows):
            for j in range(k, cols):
                if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        row_swap(k, piv[0])
        col_swap(k, piv[1])
        while True:
            # clear column k
            dirty = False
            for i in range(k + 1, rows):
                if A[i][k]:
                    q = A[i][k] // A[k][k]
                    row_add(i, k, -q)
                    if A[i][k]:
                        row_swap(k, i)
                        dirty = True
            for j in range(k + 1, cols):
                if A[k][j]:
                    q = A[k][j] // A[k][k]
                    col_add(j, k, -q)
                    if A[k][j]:
                        col_swap(k, j)
                        dirty = True
            if not dirty:
                break
        if A[k][k] < 0:
            row_neg(k)
        k += 1

    # enforce the divisibility chain with 2x2 block reductions
    r = k
    changed = True
    while changed:
        changed = False
        for i in range(r - 1):
            a, b = A[i][i], A[i + 1][i + 1]
            if a and b % a:
                changed = True
                g = math.gcd(a, b)
                col_add(i, i + 1, 1)  # block is now [[a, 0], [b, b]]
                while A[i + 1][i]:
                    q = A[i][i] // A[i + 1][i]
                    row_add(i, i + 1, -q)
                    row_swap(i, i + 1)
                # block is [[+-g, x], [0, y]]; x and y are multiples of g
                if A[i][i] < 0:
                    row_neg(i)
                if A[i][i + 1]:
                    col_add(i + 1, i, -(A[i][i + 1] // A[i][i]))
                if A[i + 1][i + 1] < 0:
                    row_neg(i + 1)
                if A[i][i] != g or A[i + 1][i + 1] % g:
                    raise InvariantViolationError("divisibility fix-up failed")

    D = [[A[i][j] if i == j else 0 for j in range(cols)] for i in range(rows)]
    for i in range(min(rows, cols)):
        if D[i][i] != A[i][i]:  # pragma: no cover
            raise InvariantViolationError("non-diagonal SNF result")
    # verify U M V == D exactly
    if _matmul(_matmul(U, [list(r) for r in M]), V) != D:
        raise InvariantViolationError("SNF transform check failed")
    return U, D, V


def unimodular_inverse(W):
    U, D, V = snf(W)
    n = len(W)
    if any(D[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is not unimodular")
    return _matmul(V, U)


def det_int(M) -> int:
    """Determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(M)
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def kernel_basis(M):
    """Basis of the left kernel {x : x M = 0} as a list of row vectors."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    U, D, V = snf(M)
    out = []
    for i in range(rows):
        if i >= cols or D[i][i] == 0:
            out.append(list(U[i]))
    return out


def row_space_basis(M):
    """Basis of the row lattice of M."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if rows == 0:
        return []
    U, D, V = snf(M)
    Vinv = unimodular_inverse(V)
    out = []
    for i in range(min(rows, cols)):
        if D[i][i]:
            out.append([D[i][i] * x for x in Vinv[i]])
    return out


class FinAbGroup:
    """A finitely generated abelian group: invariant factors (each >= 2,
    forming a divisibility chain) plus a free rank."""

    __slots__ = ("factors", "rank")

    def __init__(self, factors, rank):
        factors = tuple(int(f) for f in factors)
        for f in factors:
            if f < 2:
                raise ValueError("invariant factors must be >= 2")
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise ValueError("invariant factors must form a divisibility chain")
        self.factors = factors
        self.rank = int(rank)

    @property
    def dim(self):
        return len(self.factors) + self.rank

    def order(self):
        """Group order, or None when infinite."""
        if self.rank:
            return None
        return math.prod(self.factors)

    def reduce(self, coords):
        coords = list(coords)
        if len(coords) != self.dim:
            raise ValueError("coordinate length mismatch")
        for i, f in enumerate(self.factors):
            coords[i] %= f
        return tuple(coords)

    def element(self, coords) -> "GrpElem":
        return GrpElem(self, self.reduce(coords))

    def identity(self) -> "GrpElem":
        return GrpElem(self, (0,) * self.dim)

    def elements(self):
        """All elements (finite groups only)."""
        if self.rank:
            raise ValueError("infinite group")
        def rec(i):
            if i == len(self.factors):
                yield ()
                return
            for rest in rec(i + 1):
                for c in range(self.factors[i]):
                    yield (c,) + rest
        return (GrpElem(self, cs) for cs in rec(0))

    def __eq__(self, other):
        return (isinstance(other, FinAbGroup) and self.factors == other.factors
                and self.rank == other.rank)

    def __hash__(self):
        return hash((self.factors, self.rank))

    def to_json(self):
        return {"invariant_factors": list(self.factors), "free_rank": self.rank}

    def __repr__(self):
        parts = [f"Z/{f}" for f in self.factors] + ["Z"] * self.rank
        return " x ".join(parts) if parts else "0"


class GrpElem:
    """An element of a :class:`FinAbGroup` in canonical coordinates."""

    __slots__ = ("group", "coords")

    def __init__(self, group, coords):
        self.group = group
        self.coords = tuple(coords)

    def __add__(self, other):
        if other.group != self.group:
            raise ValueError("elements of different groups")
        return self.group.element(a + b for a, b in zip(self.coords, other.coords))

    def __neg__(self):
        return self.group.element(-a for a in self.coords)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int):
        return self.group.element(k * a for a in self.coords)

    def is_identity(self):
        return not any(self.coords)

    def __eq__(self, other):
        return (isinstance(other, GrpElem) and self.group == other.group
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.group, self.coords))

    def __repr__(self):
        return f"{list(self.coords)} in {self.group!r}"


def quotient_by_rows(group: FinAbGroup, rows):
    """Quotient of ``group`` by the subgroup generated by the given
    coordinate vectors.

    Returns (quotient group, projection function on coordinate vectors).
    """
    n = group.dim
    rel = []
    for i, f in enumerate(group.factors):
        r = [0] * n
        r[i] = f
        rel.append(r)
    for r in rows:
        r = list(r)
        if len(r) != n:
            raise ValueError("relation length mismatch")
        rel.append(r)
    if not rel:
        quotient = FinAbGroup((), n)
        return quotient, lambda coords: quotient.element(coords)
    U, D, V = snf(rel)
    m = len(rel)
    diag = [D[i][i] if i < m else 0 for i in range(n)]
    keep = [(j, diag[j]) for j in range(n) if diag[j] != 1]
    factors = tuple(d for _, d in keep if d >= 2)
    rank = sum(1 for _, d in keep if d == 0)
    quotient = FinAbGroup(factors, rank)

    def project(coords):
        coords = list(coords)
        if len(coords) != n:
            raise ValueError("coordinate length mismatch")
        w = [sum(coords[i] * V[i][j] for i in range(n)) for j in range(n)]
        out = []
        for j, d in keep:
            if d >= 2:
                out.append(w[j] % d)
        for j, d in keep:
            if d == 0:
                out.append(w[j])
        return quotient.element(out)

    return quotient, project
