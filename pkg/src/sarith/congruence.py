"""Principal congruence subgroups of SL_n(F_q[t]) and their cusp counts.

The quotient ring R = F_q[t]/(f) is small enough to enumerate, and the
flag-coset count |SL_n(R)/B_n(R)| is obtained by exhaustive enumeration
of SL_n(R) and direct orbit expansion of first-column data; the Gaussian
product formula and the unimodular-pair count serve only as cross-checks
of the enumeration, never as the primary computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from . import ffield as ff
from .errors import BudgetError, InvariantViolationError, PoleReductionError
from .funcfield import P1, RatFunc
from .slgroups import MatK, char_poly, diag_matrix, elementary, in_sl_os

RING_ENUM_MAX = 4096


class QuotRing:
    """F_q[t]/(f) with enumerable elements and cached unit set."""

    def __init__(self, field, modulus):
        if ff.pdeg(modulus) < 1:
            raise ValueError("modulus must be nonconstant")
        modulus, _ = ff.pmonic(field, modulus)
        self.field = field
        self.modulus = modulus
        self.size = field.size ** ff.pdeg(modulus)
        if self.size > RING_ENUM_MAX:
            raise BudgetError(f"quotient ring of size {self.size} over budget")
        self._elements = None
        self._units = None
        self._is_field = None

    # element reps are reduced polynomials (degree < deg modulus)

    def zero(self):
        return ()

    def one(self):
        return (self.field.one(),)

    def reduce_poly(self, poly):
        return ff.pmod(self.field, poly, self.modulus)

    def elements(self):
        if self._elements is None:
            F = self.field
            d = ff.pdeg(self.modulus)
            out = []
            for digits in iproduct(range(F.size), repeat=d):
                out.append(ff.ptrim([F.dec(x) for x in digits]))
            self._elements = out
        return self._elements

    def units(self):
        if self._units is None:
            F = self.field
            self._units = {e for e in self.elements()
                           if e and ff.pdeg(ff.pgcd(F, e, self.modulus)) == 0}
        return self._units

    def is_field(self) -> bool:
        if self._is_field is None:
            self._is_field = ff._is_irreducible(self.field, self.modulus)
        return self._is_field

    def add(self, a, b):
        return ff.padd(self.field, a, b)

    def sub(self, a, b):
        return ff.psub(self.field, a, b)

    def neg(self, a):
        return ff.pneg(self.field, a)

    def mul(self, a, b):
        return self.reduce_poly(ff.pmul(self.field, a, b))

    def inv(self, a):
        g, s, _ = ff.pextgcd(self.field, a, self.modulus)
        if ff.pdeg(g) != 0:
            raise ZeroDivisionError("element is not a unit")
        return self.reduce_poly(s)

    def enc(self, a) -> int:
        F = self.field
        n = 0
        for c in reversed(range(ff.pdeg(self.modulus))):
            n = n * F.size + (F.enc(a[c]) if c < len(a) else 0)
        return n

    def reduce_ratfunc(self, x: RatFunc):
        """Image of a function with no pole at divisors of the modulus."""
        g = ff.pgcd(self.field, x.den, self.modulus)
        if ff.pdeg(g) != 0:
            raise PoleReductionError(
                "denominator shares a factor with the reduction modulus")
        num = self.reduce_poly(x.num)
        den = self.reduce_poly(x.den)
        return self.mul(num, self.inv(den))

    def __repr__(self):
        return f"F_{self.field.size}[t]/({ff.poly_to_str(self.field, self.modulus)})"


class RingMat:
    """A square matrix over a quotient ring."""

    __slots__ = ("ring", "rows", "n")

    def __init__(self, ring, rows):
        self.ring = ring
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)

    @staticmethod
    def identity(ring, n):
        return RingMat(ring, [[ring.one() if i == j else ring.zero()
                               for j in range(n)] for i in range(n)])

    def __mul__(self, other):
        R = self.ring
        n = self.n
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = R.zero()
                for l in range(n):
                    acc = R.add(acc, R.mul(self.rows[i][l], other.rows[l][j]))
                row.append(acc)
            rows.append(row)
        return RingMat(R, rows)

    def det(self):
        return _ring_det(self.ring, self.rows)

    def __eq__(self, other):
        return (isinstance(other, RingMat) and self.ring is other.ring
                and self.rows == other.rows)

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        F = self.ring.field
        body = "; ".join(", ".join(ff.poly_to_str(F, x) for x in row)
                         for row in self.rows)
        return f"[{body}] over {self.ring!r}"


def _ring_det(R, rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = R.zero()
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = R.mul(rows[0][j], _ring_det(R, minor))
        acc = R.add(acc, term) if j % 2 == 0 else R.sub(acc, term)
    return acc


def reduce_matrix(M: MatK, R: QuotRing) -> RingMat:
    """Entrywise reduction of an SL_n(k) matrix mod the ring modulus."""
    return RingMat(R, [[R.reduce_ratfunc(x) for x in row] for row in M.rows])


def gamma_i_member(M: MatK, curve, S, modulus) -> bool:
    """Membership in the principal congruence subgroup of level (modulus):
    S-integral and congruent to the identity."""
    if curve.kind != P1:
        raise ValueError("congruence subgroups live over the projective line here")
    if not any(p.is_infinite() for p in S):
        raise ValueError("S must contain the infinite place so that O_S "
                         "contains F_q[t]")
    modulus = tuple(modulus)
    if not in_sl_os(M, S):
        return False
    R = QuotRing(curve.base, modulus)
    return reduce_matrix(M, R) == RingMat.identity(R, M.n)


# ---------------------------------------------------------------------------
# flag-coset counts


def gaussian_flag_count(n: int, q: int) -> int:
    total = 1
    for k in range(1, n + 1):
        total *= sum(q ** i for i in range(k))
    return total


def _sl2_elements(R: QuotRing):
    """Exhaustive enumeration of SL_2(R) with determinant pruning: unit
    upper-left entries determine d; the rest goes through a product table."""
    elements = R.elements()
    units = R.units()
    one = R.one()
    prod_pairs: dict = {}
    for b in elements:
        for c in elements:
            prod_pairs.setdefault(R.mul(b, c), []).append((b, c))
    out = []
    for a in elements:
        if a in units:
            ainv = R.inv(a)
            for b in elements:
                for c in elements:
                    d = R.mul(ainv, R.add(one, R.mul(b, c)))
                    out.append((a, b, c, d))
        else:
            for d in elements:
                val = R.sub(R.mul(a, d), one)
                for b, c in prod_pairs.get(val, ()):
                    out.append((a, b, c, d))
    return out


def _unimodular_pair_count(R: QuotRing) -> int:
    """Pairs (a, b) with a*d - b*c = 1 solvable, by brute-force search."""
    elements = R.elements()
    one = R.one()
    count = 0
    for a in elements:
        for b in elements:
            if any(R.sub(R.mul(a, d), R.mul(b, c)) == one
                   for c in elements for d in elements):
                count += 1
    return count


def _sl3_field_elements(R: QuotRing):
    if not R.is_field():
        raise BudgetError("n = 3 enumeration requires a field quotient")
    elements = R.elements()
    zero = R.zero()
    one = R.one()
    out = []
    rows = list(iproduct(elements, repeat=3))
    for r1 in rows:
        if all(x == zero for x in r1):
            continue
        for r2 in rows:
            # cofactor vector c with det = r3 . c
            c = (R.sub(R.mul(r1[1], r2[2]), R.mul(r1[2], r2[1])),
                 R.sub(R.mul(r1[2], r2[0]), R.mul(r1[0], r2[2])),
                 R.sub(R.mul(r1[0], r2[1]), R.mul(r1[1], r2[0])))
            piv = next((i for i in range(3) if c[i] != zero), None)
            if piv is None:
                continue
            cinv = R.inv(c[piv])
            others = [i for i in range(3) if i != piv]
            for free in iproduct(elements, repeat=2):
                r3 = [zero, zero, zero]
                acc = one
                for i, v in zip(others, free):
                    r3[i] = v
                    acc = R.sub(acc, R.mul(v, c[i]))
                r3[piv] = R.mul(acc, cinv)
                out.append((r1, r2, tuple(r3)))
    return out


def _b_generators(R: QuotRing, n: int):
    """Right-multiplication generators of B_n(R) cap SL_n(R)."""
    gens = []
    one, zero = R.one(), R.zero()
    for i in range(n - 1):
        for j in range(i + 1, n):
            for e in R.elements():
                if e == zero:
                    continue
                rows = [[one if a == b else zero for b in range(n)]
                        for a in range(n)]
                rows[i][j] = e
                gens.append(RingMat(R, rows))
    for i in range(n - 1):
        for u in R.units():
            if u == one:
                continue
            rows = [[one if a == b else zero for b in range(n)]
                    for a in range(n)]
            rows[i][i] = u
            rows[i + 1][i + 1] = R.inv(u)
            gens.append(RingMat(R, rows))
    return gens


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        parent = self.parent
        root = x
        while parent.setdefault(root, root) != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def flag_coset_count(n: int, R: QuotRing) -> int:
    """|SL_n(R)/B_n(R)| by exhaustive enumeration and direct orbit
    expansion; the Gaussian product (fields) and the unimodular-pair count
    (n = 2 non-fields) are asserted as independent cross-checks."""
    if n == 2:
        if R.size > 64:
            raise BudgetError("n = 2 flag enumeration limited to |R| <= 64")
        tuples = _sl2_elements(R)
        units = R.units()
        columns = {(a, c) for a, b, c, d in tuples}
        orbits = set()
        for a, c in columns:
            orbits.add(min(((R.enc(R.mul(u, a)), R.enc(R.mul(u, c)))
                            for u in units)))
        count = len(orbits)
        # |SL_2| must be count * |B cap SL_2|
        if len(tuples) != count * len(units) * R.size:
            raise InvariantViolationError("coset sizes do not tile SL_2(R)")
        if R.is_field():
            if count != gaussian_flag_count(2, R.size):
                raise InvariantViolationError("Gaussian cross-check failed")
        elif R.size <= 16:
            upc = _unimodular_pair_count(R)
            if upc % len(units) or count != upc // len(units):
                raise InvariantViolationError("unimodular-pair cross-check failed")
        return count
    if n == 3:
        if R.size > 4:
            raise BudgetError("n = 3 flag enumeration limited to fields of size <= 4")
        mats = [RingMat(R, rows) for rows in _sl3_field_elements(R)]
        uf = _UnionFind()
        gens = _b_generators(R, 3)
        for m in mats:
            key = m.rows
            for g in gens:
                uf.union(key, (m * g).rows)
        count = len({uf.find(m.rows) for m in mats})
        if count != gaussian_flag_count(3, R.size):
            raise InvariantViolationError("Gaussian cross-check failed")
        return count
    raise BudgetError("flag enumeration supports n in {2, 3}")


def congruence_cusp_count(n: int, field, modulus) -> int:
    """Number of congruence-level cusp classes: |SL_n(R)/B_n(R)| for
    R = F_q[t]/(modulus)."""
    return flag_coset_count(n, QuotRing(field, modulus))


# ---------------------------------------------------------------------------
# torsion mechanism and stabilizer structure


def charpoly_reduction_check(M: MatK, R: QuotRing) -> bool:
    """Reduce the characteristic polynomial det(M - T id) mod the ring
    modulus and compare with (1 - T)^n."""
    coeffs = char_poly(M)
    reduced = [R.reduce_ratfunc(c) for c in coeffs]
    target = [R.one()]
    for _ in range(M.n):
        # multiply by (1 - T)
        nxt = [R.zero()] * (len(target) + 1)
        for i, c in enumerate(target):
            nxt[i] = R.add(nxt[i], c)
            nxt[i + 1] = R.sub(nxt[i + 1], c)
        target = nxt
    return reduced == target


@dataclass(frozen=True)
class StabStructure:
    """Diagonalizable part of a cusp stabilizer: a finite torus times a
    free lattice."""

    torsion_order: int
    free_rank: int

    def to_json(self):
        return {"torsion_order": self.torsion_order, "free_rank": self.free_rank}


def stabilizer_structure(curve, S, n: int) -> StabStructure:
    """Structure constants of the diagonalizable part of the standard-cusp
    stabilizer in SL_n(O_S): torsion |F_q^*|^(n-1) and free rank
    (n-1) * rank(O_S^*)."""
    from .picard import unit_lattice
    lat = unit_lattice(curve, S)
    q = curve.base.size
    return StabStructure(torsion_order=(q - 1) ** (n - 1),
                         free_rank=(n - 1) * lat.rank)


def laurent_counterexample_check(q: int, n: int = 2) -> bool:
    """Over F_q[t, 1/t] with congruence level (t - 1), the diagonal matrix
    diag(t, 1/t, 1, ..., 1) lies in the congruence subgroup and stabilizes
    the standard cusp without being unipotent."""
    from .cusps import Chamber, GSpec, max_unipotent_member, stabilizer_member
    from .funcfield import CurveDesc, place_from_spec

    curve = CurveDesc.projective_line(ff.ff_make(q, 1))
    S = {place_from_spec(curve, "t"), curve.place_inf()}
    modulus = ff.pfrom_ints(curve.base, [-1, 1])  # t - 1
    t = curve.gen_f()
    entries = [t, t.inverse()] + [curve.one_f()] * (n - 2)
    M = diag_matrix(curve, entries)
    gspec = GSpec.congruence(modulus)
    ch = Chamber.standard(curve, n)
    in_gamma = gamma_i_member(M, curve, S, modulus)
    stab, parts = stabilizer_member(M, ch, curve, S, gspec)
    non_unip = not max_unipotent_member(M, ch, curve, S, gspec)
    return bool(in_gamma and stab and parts is not None and non_unip)


# ---------------------------------------------------------------------------
# elementary lifting (surjectivity witness for the reduction map)


def lift_from_quotient(n: int, R: QuotRing, Mbar: RingMat, curve) -> MatK:
    """A matrix in SL_n(F_q[t]) reducing to Mbar, built by writing Mbar as
    a product of elementary matrices over R and lifting each parameter."""
    if curve.kind != P1 or curve.base is not R.field:
        raise ValueError("lifting targets SL_n over the same base field")
    A = [list(r) for r in Mbar.rows]
    ops = []  # row_i += r * row_j, applied left to right

    def row_add(i, j, r):
        A[i] = [R.add(a, R.mul(r, b)) for a, b in zip(A[i], A[j])]
        ops.append((i, j, r))

    units = R.units()
    one, zero = R.one(), R.zero()
    for k in range(n):
        if A[k][k] not in units:
            others = list(range(k + 1, n))
            fixed = False
            for coeffs in iproduct(R.elements(), repeat=len(others)):
                cand = A[k][k]
                for j, r in zip(others, coeffs):
                    cand = R.add(cand, R.mul(r, A[j][k]))
                if cand in units:
                    for j, r in zip(others, coeffs):
                        if r != zero:
                            row_add(k, j, r)
                    fixed = True
                    break
            if not fixed:
                raise InvariantViolationError("no elementary pivot fix exists")
        pinv = R.inv(A[k][k])
        for i in range(n):
            if i != k and A[i][k] != zero:
                row_add(i, k, R.neg(R.mul(A[i][k], pinv)))
    # now A is diagonal with unit entries multiplying to det = 1
    for i in range(n - 1):
        u = A[i][i]
        if u == one:
            continue
        uinv = R.inv(u)
        # left-multiply rows (i, i+1) by diag(u^{-1}, u) = w(u^{-1}) w(-1)
        for (a, b, r) in [(i, i + 1, R.neg(one)), (i + 1, i, one),
                          (i, i + 1, R.neg(one)),
                          (i, i + 1, uinv), (i + 1, i, R.neg(u)),
                          (i, i + 1, uinv)]:
            row_add(a, b, r)
        if A[i][i] != one:
            raise InvariantViolationError("diagonal normalization failed")
    if A != [list(r) for r in RingMat.identity(R, n).rows]:
        raise InvariantViolationError("elementary reduction did not reach id")
    # Mbar = product over recorded ops of inverse elementaries, in order
    lift = MatK.identity(curve, n)
    F = curve.base
    for (i, j, r) in ops:
        x = RatFunc.from_poly(F, ff.pneg(F, r))
        lift = lift * elementary(curve, n, i + 1, j + 1, x)
    if reduce_matrix(lift, R) != Mbar:
        raise InvariantViolationError("lift does not reduce back to the input")
    return lift
