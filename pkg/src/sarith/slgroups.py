"""SL_n over the function field k and over O_S: exact matrix arithmetic,
elementary generators, S-integrality, Borel factorization, projective
action, and seeded random sampling of group elements.

Matrices are immutable; determinants are computed once at construction
(products and adjugate inverses reuse the known value).  The samplers are
the only stateful objects; each owns its RNG, seeded from its config, so
identical configs yield identical streams.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import ffield as ff
from .errors import NotUpperTriangularError
from .funcfield import P1, RatFunc, os_member

_IDX = range


class MatK:
    """An n x n determinant-1 matrix over the function field of a curve."""

    __slots__ = ("curve", "n", "rows", "_inv")

    def __init__(self, curve, rows, _trusted=False):
        self.curve = curve
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)
        self._inv = None
        if any(len(r) != self.n for r in self.rows):
            raise ValueError("matrix is not square")
        if not _trusted:
            d = _det(curve, self.rows)
            if d != curve.one_f():
                raise ValueError("matrix determinant is not 1")

    @staticmethod
    def identity(curve, n) -> "MatK":
        one, zero = curve.one_f(), curve.zero_f()
        return MatK(curve, [[one if i == j else zero for j in range(n)]
                            for i in range(n)], _trusted=True)

    def __mul__(self, other: "MatK") -> "MatK":
        if other.curve is not self.curve or other.n != self.n:
            raise ValueError("incompatible matrices")
        n = self.n
        rows = []
        for i in _IDX(n):
            row = []
            for j in _IDX(n):
                acc = self.rows[i][0] * other.rows[0][j]
                for l in _IDX(1, n):
                    acc = acc + self.rows[i][l] * other.rows[l][j]
                row.append(acc)
            rows.append(row)
        return MatK(self.curve, rows, _trusted=True)

    def inverse(self) -> "MatK":
        if self._inv is None:
            adj = _adjugate(self.curve, self.rows)
            self._inv = MatK(self.curve, adj, _trusted=True)
        return self._inv

    def det(self):
        return _det(self.curve, self.rows)

    def entry(self, i, j):
        return self.rows[i][j]

    def is_upper_triangular(self) -> bool:
        zero = self.curve.zero_f()
        return all(self.rows[i][j] == zero
                   for i in _IDX(self.n) for j in _IDX(i))

    def is_unit_upper(self) -> bool:
        one = self.curve.one_f()
        return (self.is_upper_triangular()
                and all(self.rows[i][i] == one for i in _IDX(self.n)))

    def is_identity(self) -> bool:
        return self == MatK.identity(self.curve, self.n)

    def __eq__(self, other):
        return (isinstance(other, MatK) and self.curve is other.curve
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.curve.key, self.rows))

    def to_json(self):
        return {"n": self.n,
                "entries": [[x.to_str() for x in row] for row in self.rows]}

    @staticmethod
    def from_json(curve, obj) -> "MatK":
        from .funcfield import func_from_str
        return MatK(curve, [[func_from_str(curve, s) for s in row]
                            for row in obj["entries"]])

    def __repr__(self):
        body = "; ".join(", ".join(x.to_str() for x in row) for row in self.rows)
        return f"[{body}]"


def _det(curve, rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = curve.zero_f()
    for j in range(n):
        if not rows[0][j]:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _det(curve, minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def _adjugate(curve, rows):
    n = len(rows)
    if n == 1:
        return [[curve.one_f()]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            c = _det(curve, minor)
            out[j][i] = c if (i + j) % 2 == 0 else -c
    return out


def minor_det(curve, mat: MatK, row_sel, col_sel):
    """Determinant of the submatrix on the given rows and columns."""
    sub = [[mat.rows[i][j] for j in col_sel] for i in row_sel]
    return _det(curve, sub)


@dataclass(frozen=True)
class BorelParts:
    t: MatK
    u: MatK


def elementary(curve, n, i, j, x) -> MatK:
    """theta_(i,j)(x): the identity plus x in entry (i, j); 1-based indices."""
    if i == j:
        raise ValueError("elementary matrix needs i != j")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError("index out of range")
    one, zero = curve.one_f(), curve.zero_f()
    rows = [[one if a == b else zero for b in range(n)] for a in range(n)]
    rows[i - 1][j - 1] = x
    return MatK(curve, rows, _trusted=True)


def diag_matrix(curve, entries) -> MatK:
    zero = curve.zero_f()
    n = len(entries)
    rows = [[entries[i] if i == j else zero for j in range(n)] for i in range(n)]
    return MatK(curve, rows)


def in_sl_os(M: MatK, S) -> bool:
    """True iff every entry is regular outside S (det 1 is structural)."""
    return all(os_member(x, S) for row in M.rows for x in row)


def borel_factor(M: MatK) -> BorelParts:
    """Write an upper-triangular M as t * u with t diagonal and u unit
    upper triangular."""
    if not M.is_upper_triangular():
        raise NotUpperTriangularError("matrix is not upper triangular")
    n = M.n
    diag = [M.rows[i][i] for i in range(n)]
    t = diag_matrix(M.curve, diag)
    zero, one = M.curve.zero_f(), M.curve.one_f()
    rows = []
    for i in range(n):
        inv = diag[i].inverse()
        row = [zero] * i + [one] + [M.rows[i][j] * inv for j in range(i + 1, n)]
        rows.append(row)
    u = MatK(M.curve, rows, _trusted=True)
    return BorelParts(t=t, u=u)


def char_poly(M: MatK):
    """Coefficients of det(M - T*id) as a list of k-elements, constant
    term first (length n + 1)."""
    curve = M.curve
    zero, one = curve.zero_f(), curve.one_f()
    # entries of M - T*id as polynomials in T over k
    ent = [[[M.rows[i][j]] if i != j else [M.rows[i][j], -one]
            for j in range(M.n)] for i in range(M.n)]

    def padd_k(f, g):
        if len(f) < len(g):
            f, g = g, f
        out = list(f)
        for i, c in enumerate(g):
            out[i] = out[i] + c
        return out

    def pmul_k(f, g):
        out = [zero] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if not a:
                continue
            for j, b in enumerate(g):
                out[i + j] = out[i + j] + a * b
        return out

    def pneg_k(f):
        return [-c for c in f]

    def det_poly(rows):
        n = len(rows)
        if n == 1:
            return rows[0][0]
        acc = [zero]
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            term = pmul_k(rows[0][j], det_poly(minor))
            acc = padd_k(acc, term if j % 2 == 0 else pneg_k(term))
        return acc

    out = det_poly(ent)
    out += [zero] * (M.n + 1 - len(out))
    return out


# ---------------------------------------------------------------------------
# projective points and the Moebius action


class ProjPoint:
    """A point (a : b) of P^1(k) with a canonical representative.

    Projective-line backend: denominators cleared, content gcd removed,
    the first nonzero coordinate made monic.  Elliptic backend: the first
    nonzero coordinate scaled to 1.
    """

    __slots__ = ("curve", "a", "b")

    def __init__(self, curve, a, b):
        if not a and not b:
            raise ValueError("(0 : 0) is not a projective point")
        self.curve = curve
        if curve.kind == P1:
            F = curve.base
            na = a.num if a else ()
            nb = b.num if b else ()
            da = a.den if a else (F.one(),)
            db = b.den if b else (F.one(),)
            pa = ff.pmul(F, na, db)
            pb = ff.pmul(F, nb, da)
            g = ff.pgcd(F, pa, pb)
            if ff.pdeg(g) > 0:
                pa = ff.pdivmod(F, pa, g)[0] if pa else ()
                pb = ff.pdivmod(F, pb, g)[0] if pb else ()
            lead = pa[-1] if pa else pb[-1]
            c = F.inv(lead)
            pa, pb = ff.pscale(F, c, pa), ff.pscale(F, c, pb)
            self.a = RatFunc.from_poly(F, pa)
            self.b = RatFunc.from_poly(F, pb)
        else:
            scale = (a if a else b).inverse()
            self.a = a * scale
            self.b = b * scale

    def coords(self):
        return self.a, self.b

    def __eq__(self, other):
        return (isinstance(other, ProjPoint) and self.curve is other.curve
                and self.a == other.a and self.b == other.b)

    def __hash__(self):
        return hash((self.curve.key, self.a, self.b))

    def cross_equal(self, other) -> bool:
        """Projective equality by cross-multiplication (no normal forms)."""
        return self.a * other.b == self.b * other.a

    def __repr__(self):
        return f"({self.a!r} : {self.b!r})"


def standard_cusp(curve) -> ProjPoint:
    return ProjPoint(curve, curve.one_f(), curve.zero_f())


def mobius_action(M: MatK, pt: ProjPoint) -> ProjPoint:
    if M.n != 2:
        raise ValueError("Moebius action is for 2 x 2 matrices")
    a, b = pt.coords()
    return ProjPoint(M.curve,
                     M.rows[0][0] * a + M.rows[0][1] * b,
                     M.rows[1][0] * a + M.rows[1][1] * b)


# ---------------------------------------------------------------------------
# seeded random sampling


@dataclass(frozen=True)
class SamplerCfg:
    seed: int
    word_length: int = 4
    height: int = 2
    unit_exponent_bound: int = 2

    def to_json(self):
        return {"seed": self.seed, "word_length": self.word_length,
                "height": self.height,
                "unit_exponent_bound": self.unit_exponent_bound}


def _random_poly(rng, F, max_deg, nonzero=False):
    while True:
        deg = rng.randint(0, max_deg)
        coeffs = [F.dec(rng.randrange(F.size)) for _ in range(deg + 1)]
        poly = ff.ptrim(coeffs)
        if poly or not nonzero:
            return poly


def random_k_element(rng, curve, height):
    """A height-bounded element of the function field.

    On the elliptic backend the parameters stay in the coordinate ring
    (u, v polynomial) to keep divisor supports at factoring scale."""
    if curve.kind == P1:
        num = _random_poly(rng, curve.base, height)
        den = _random_poly(rng, curve.base, height, nonzero=True)
        return RatFunc.make(curve.base, num, den)
    u = _random_poly(rng, curve.base, height)
    v = _random_poly(rng, curve.base, height)
    return curve.from_poly_pair(u, v)


def random_os_element(rng, curve, S, height):
    """A height-bounded element of O_S."""
    if curve.kind == P1:
        finite = sorted((p for p in S if not p.is_infinite()),
                        key=lambda p: p.sort_key())
        inf_in_s = any(p.is_infinite() for p in S)
        den = (curve.base.one(),)
        room = height
        for place in finite:
            if room < place.degree:
                break
            e = rng.randint(0, room // place.degree)
            for _ in range(e):
                den = ff.pmul(curve.base, den, place.poly)
            room -= e * place.degree
        max_num = height if inf_in_s else ff.pdeg(den)
        num = _random_poly(rng, curve.base, max_num)
        return RatFunc.make(curve.base, num, den)
    if not any(p.is_infinite() for p in S):
        raise ValueError("elliptic O_S sampling needs the infinite place in S")
    u = _random_poly(rng, curve.base, height)
    v = _random_poly(rng, curve.base, height)
    return curve.from_poly_pair(u, v)


class GammaSampler:
    """Seeded sampler of elements of SL_n(O_S): uniform random words over
    height-bounded elementary matrices and unit-diagonal moves."""

    def __init__(self, curve, S, n, cfg: SamplerCfg):
        self.curve = curve
        self.S = frozenset(S)
        self.n = n
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)
        self._units = self._unit_pool()

    def _unit_pool(self):
        units = [self.curve.const_f(c)
                 for c in range(2, self.curve.base.p)]
        units += [self.curve.const_f(1)]
        if self.curve.kind == P1:
            from .picard import unit_lattice
            lat = unit_lattice(self.curve, self.S)
            for g in lat.generators:
                for e in range(1, self.cfg.unit_exponent_bound + 1):
                    acc = self.curve.one_f()
                    for _ in range(e):
                        acc = acc * g
                    units.append(acc)
                    units.append(acc.inverse())
        return [u for u in units if u != self.curve.one_f()] or [self.curve.one_f()]

    def _positions(self):
        i = self.rng.randrange(self.n)
        j = self.rng.randrange(self.n - 1)
        if j >= i:
            j += 1
        return i + 1, j + 1

    def sample(self) -> MatK:
        length = self.rng.randint(0, self.cfg.word_length)
        M = MatK.identity(self.curve, self.n)
        for _ in range(length):
            if self.rng.random() < 0.8 or not self._units:
                i, j = self._positions()
                x = random_os_element(self.rng, self.curve, self.S,
                                      self.cfg.height)
                M = M * elementary(self.curve, self.n, i, j, x)
            else:
                i, j = self._positions()
                u = self.rng.choice(self._units)
                entries = [self.curve.one_f()] * self.n
                entries[i - 1] = u
                entries[j - 1] = u.inverse()
                M = M * diag_matrix(self.curve, entries)
        return M


def sample_gamma(n, curve, S, cfg: SamplerCfg) -> MatK:
    """One element of SL_n(O_S) from a fresh sampler (deterministic in cfg)."""
    return GammaSampler(curve, S, n, cfg).sample()


def sample_chamber_word(rng, curve, n, word_length, height) -> MatK:
    """A random element of SL_n(k) as a word in elementary matrices with
    height-bounded function-field parameters."""
    M = MatK.identity(curve, n)
    length = rng.randint(0, word_length)
    for _ in range(length):
        i = rng.randrange(n)
        j = rng.randrange(n - 1)
        if j >= i:
            j += 1
        x = random_k_element(rng, curve, height)
        M = M * elementary(curve, n, i + 1, j + 1, x)
    return M


def random_upper_triangular(rng, curve, n, height) -> MatK:
    """A random upper-triangular determinant-1 matrix over k."""
    zero = curve.zero_f()
    diag = []
    prod = curve.one_f()
    for _ in range(n - 1):
        u = random_k_element(rng, curve, height)
        while not u:
            u = random_k_element(rng, curve, height)
        diag.append(u)
        prod = prod * u
    diag.append(prod.inverse())
    rows = []
    for i in range(n):
        row = [zero] * i + [diag[i]]
        row += [random_k_element(rng, curve, height) for _ in range(n - 1 - i)]
        rows.append(row)
    return MatK(curve, rows, _trusted=True)
