"""Elliptic-curve engine for the function-field backend.

Provides the exact group law over any coefficient field model, closed
point (place) enumeration by Frobenius orbits, the group structure of
E(F_p) by pure order enumeration, local power-series expansions at
places, valuations and principal divisors of functions u(x) + v(x)y.

Place models.  A place whose residue degree is m is stored over a fixed
model of F_{p^m}: the canonical field from ``ff_make(p, m)`` whenever
p^m <= CANON_MODEL_MAX, else F_p[X]/(h) for the (canonical) minimal
polynomial h of the x-coordinate, in which the class of X is a root by
construction.  Places above an irreducible h with no rational
y-coordinate over F_{p^deg h} carry no representative at all: they are
determined by h, and their Frobenius orbit sums cancel pairwise.
"""

from __future__ import annotations

import math

from . import ffield as ff
from .errors import BudgetError, InvariantViolationError, PrecisionExhaustedError
from .funcfield import Divisor, EllFunc, EllPlace, RatFunc

CANON_MODEL_MAX = 10_000
ENUM_BUDGET = 10_000


# ---------------------------------------------------------------------------
# group law (points are None for O, else (x, y) raw pairs over a model M)


def on_curve(curve, M, pt) -> bool:
    if pt is None:
        return True
    x, y = pt
    rhs = _rhs_at(curve, M, x)
    return M.mul(y, y) == rhs


def _rhs_at(curve, M, x):
    return ff.peval_in(M, _rhs_ints(curve), x)


def _rhs_ints(curve):
    # coefficients of x^3 + ax + b as plain ints (base field is prime)
    return (curve.b, curve.a, 0, 1)


def ec_neg(M, pt):
    if pt is None:
        return None
    return (pt[0], M.neg(pt[1]))


def ec_add(curve, M, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 == M.neg(y2):
            return None
        # doubling; y1 != 0 here since y1 = -y1 was excluded (char != 2)
        num = M.add(M.smul(3, M.mul(x1, x1)), M.const(curve.a))
        lam = M.mul(num, M.inv(M.smul(2, y1)))
    else:
        lam = M.mul(M.sub(y2, y1), M.inv(M.sub(x2, x1)))
    x3 = M.sub(M.sub(M.mul(lam, lam), x1), x2)
    y3 = M.sub(M.mul(lam, M.sub(x1, x3)), y1)
    return (x3, y3)


def ec_mul(curve, M, k: int, P):
    if k < 0:
        return ec_mul(curve, M, -k, ec_neg(M, P))
    R = None
    B = P
    while k:
        if k & 1:
            R = ec_add(curve, M, R, B)
        B = ec_add(curve, M, B, B)
        k >>= 1
    return R


def frob_pt(M, pt):
    if pt is None:
        return None
    return (M.frob(pt[0]), M.frob(pt[1]))


def affine_points(curve, M) -> list:
    """All affine points of E over the model field M, in coordinate
    enumeration order."""
    if M.size > ENUM_BUDGET:
        raise BudgetError(f"point enumeration over a field of size {M.size}")
    squares: dict = {}
    for y in M.elements():
        squares.setdefault(M.enc(M.mul(y, y)), []).append(y)
    pts = []
    for x in M.elements():
        c = _rhs_at(curve, M, x)
        for y in squares.get(M.enc(c), []):
            pts.append((x, y))
    return pts


# ---------------------------------------------------------------------------
# places


def canonical_model(curve, m: int) -> ff.FieldDesc:
    p = curve.base.p
    if p ** m > CANON_MODEL_MAX:
        raise BudgetError(f"no canonical model for degree {m} over F_{p}")
    return ff.ff_make(p, m)


def _orbit(M, pt):
    orb = [pt]
    q = frob_pt(M, pt)
    while q != pt:
        orb.append(q)
        q = frob_pt(M, q)
    return orb


def _x_orbit_size(M, x) -> int:
    n = 1
    z = M.frob(x)
    while z != x:
        z = M.frob(z)
        n += 1
    return n


def _minpoly_from_orbit(M, x) -> tuple:
    """Minimal polynomial of x over F_p, as a tuple of ints."""
    poly = [M.one()]
    z = x
    while True:
        # poly <- poly * (X - z)
        new = [M.zero()] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i + 1] = M.add(new[i + 1], c)
            new[i] = M.sub(new[i], M.mul(c, z))
        poly = new
        z = M.frob(z)
        if z == x:
            break
    out = []
    for c in poly:
        out.append(_descend_to_int(M, c))
    return tuple(out)


def _descend_to_int(M, c) -> int:
    """A Frobenius-fixed model element as an integer mod p."""
    if M.d == 1:
        return c
    if any(c[1:]):
        raise InvariantViolationError("element is not in the prime field")
    return c[0]


def make_affine_place(curve, M, pt) -> EllPlace:
    """The closed point through an affine point, normalized.

    Orbits that pair (x, y) with (x, -y) are stored representative-free as
    inert places over the minimal polynomial of x.
    """
    orb = _orbit(M, pt)
    m = len(orb)
    mx = _x_orbit_size(M, pt[0])
    if m == 2 * mx:
        h = _minpoly_from_orbit(M, pt[0])
        return EllPlace(curve, "inert", h=ff.pfrom_ints(curve.base, h), degree=m)
    if m != mx:  # pragma: no cover - impossible: [F_p(x,y):F_p(x)] <= 2
        raise InvariantViolationError("orbit size is not 1 or 2 times the x-orbit")
    rep = min(orb, key=lambda q: (M.enc(q[0]), M.enc(q[1])))
    return EllPlace(curve, "aff", model=M, x=rep[0], y=rep[1], degree=m)


def affine_place(curve, M, x, y) -> EllPlace:
    if not on_curve(curve, M, (x, y)):
        raise ValueError("point is not on the curve")
    place = make_affine_place(curve, M, (x, y))
    if place.degree != M.d:
        raise ValueError(
            f"point has degree {place.degree}, not {M.d}; "
            f"give coordinates over its own residue field")
    return place


def elliptic_places_up_to(curve, D: int):
    """The infinite place plus all affine places of degree <= D."""
    out = [curve.place_inf()]
    for m in range(1, D + 1):
        M = canonical_model(curve, m)
        seen = set()
        for pt in affine_points(curve, M):
            if len(_orbit(M, pt)) != m:
                continue
            place = make_affine_place(curve, M, pt)
            if place not in seen:
                seen.add(place)
                out.append(place)
    out.sort(key=lambda p: p.sort_key())
    return out


def place_class_point(curve, place):
    """Frobenius-orbit sum of a place, as a point of E(F_p) (None = O).

    For representative-free (inert) places the orbit pairs opposite points,
    so the sum is O.  The result is checked to be Frobenius-invariant.
    """
    if place.kind in ("inf", "inert"):
        return None
    M = place.model
    total = None
    for pt in _orbit(M, (place.x, place.y)):
        total = ec_add(curve, M, total, pt)
    if frob_pt(M, total) != total:
        raise InvariantViolationError("orbit sum is not Frobenius-invariant")
    if total is None:
        return None
    return (_descend_to_int(M, total[0]), _descend_to_int(M, total[1]))


# ---------------------------------------------------------------------------
# group structure of E(F_p) by order enumeration


def _factorize(n: int) -> dict:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _divisors(n: int) -> list:
    divs = [1]
    for p, e in _factorize(n).items():
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


class EllGroupData:
    """E(F_p) as an abstract abelian group with point coordinates."""

    __slots__ = ("curve", "points", "order", "factors", "coords")

    def __init__(self, curve, points, order, factors, coords):
        self.curve = curve
        self.points = points
        self.order = order
        self.factors = factors      # invariant factors (each >= 2), ascending
        self.coords = coords        # point -> coordinate tuple, a group iso


_GROUP_CACHE: dict = {}


def group_structure(curve) -> EllGroupData:
    data = _GROUP_CACHE.get(curve.key)
    if data is not None:
        return data
    M = curve.base
    pts = affine_points(curve, M)
    pts.sort(key=lambda q: (M.enc(q[0]), M.enc(q[1])))
    all_pts = [None] + pts
    n = len(all_pts)

    def order_of(pt):
        o = n
        for p in _factorize(n):
            while o % p == 0 and ec_mul(curve, M, o // p, pt) is None:
                o //= p
        return o

    orders = {pt: order_of(pt) for pt in all_pts}
    e = max(orders.values())
    if n % e or e % (n // e):
        raise InvariantViolationError("group order/exponent mismatch")
    d1, d2 = n // e, e
    for m in _divisors(e):
        actual = sum(1 for pt in all_pts if orders[pt] > 0 and m % orders[pt] == 0)
        if actual != math.gcd(d1, m) * math.gcd(d2, m):
            raise InvariantViolationError(
                "order statistics do not match the derived structure")

    coords: dict = {}
    if d2 == 1:
        factors = ()
        coords[None] = ()
    elif d1 == 1:
        factors = (d2,)
        g1 = next(pt for pt in all_pts if orders[pt] == d2)
        acc = None
        for i in range(d2):
            coords[acc] = (i,)
            acc = ec_add(curve, M, acc, g1)
    else:
        factors = (d1, d2)
        g1 = next(pt for pt in all_pts if orders[pt] == d2)
        s1 = {}
        acc = None
        for i in range(d2):
            s1[acc] = i
            acc = ec_add(curve, M, acc, g1)
        h = None
        for cand in all_pts:
            if cand in s1:
                continue
            j, acc2 = 1, cand
            while acc2 not in s1 and j <= d1:
                acc2 = ec_add(curve, M, acc2, cand)
                j += 1
            if j == d1 and acc2 in s1:
                c = s1[acc2]
                if c % d1:
                    raise InvariantViolationError("inconsistent torsion split")
                h = ec_add(curve, M, cand,
                           ec_mul(curve, M, -(c // d1), g1))
                break
        if h is None or ec_mul(curve, M, d1, h) is not None:
            raise InvariantViolationError("no complementary generator found")
        for j in range(d1):
            base = ec_mul(curve, M, j, h)
            acc = base
            for i in range(d2):
                coords[acc] = (j, i)
                acc = ec_add(curve, M, acc, g1)
        if len(coords) != n:
            raise InvariantViolationError("coordinate table is not a bijection")
    data = EllGroupData(curve, all_pts, n, factors, coords)
    _GROUP_CACHE[curve.key] = data
    return data


# ---------------------------------------------------------------------------
# valuations and divisors


_SPLIT_TYPE_CACHE: dict = {}
_PLACES_OVER_CACHE: dict = {}
_MINPOLY_CACHE: dict = {}
_ROOT_CACHE: dict = {}


def split_type(curve, h) -> str:
    """Fibre type of E over the place (h) of the x-line: "ram" when h
    divides x^3+ax+b, "split" when it has a rational square root mod h,
    "inert" otherwise."""
    key = (curve.key, h)
    t = _SPLIT_TYPE_CACHE.get(key)
    if t is not None:
        return t
    F = curve.base
    c = ff.pmod(F, curve.rhs_poly(), h)
    if not c:
        t = "ram"
    else:
        m = ff.pdeg(h)
        e = ff.ppowmod(F, c, (F.p ** m - 1) // 2, h)
        one = ff.pconst(F, F.one())
        if e == one:
            t = "split"
        elif e == ff.pneg(F, one):
            t = "inert"
        else:
            raise InvariantViolationError("Euler criterion returned a non-unit")
    _SPLIT_TYPE_CACHE[key] = t
    return t


def _root_in_model(curve, h):
    """(model field, a root of h in it).  Canonical model with a cached
    brute-force scan when small enough, else F_p[X]/(h) whose X is a root."""
    key = (curve.base.p, h)
    got = _ROOT_CACHE.get(key)
    if got is not None:
        return got
    p = curve.base.p
    m = ff.pdeg(h)
    ints = tuple(_descend_to_int(curve.base, c) for c in h)
    if p ** m <= CANON_MODEL_MAX:
        M = ff.ff_make(p, m)
        root = None
        for x in M.elements():
            if M.is_zero(ff.peval_in(M, ints, x)):
                root = x
                break
        if root is None:
            raise InvariantViolationError("irreducible h has no root in F_{p^deg h}")
    else:
        M = ff.field_with_modulus(p, ints)
        root = M.dec(p)  # the class of X
    _ROOT_CACHE[key] = (M, root)
    return M, root


def places_over(curve, h):
    """Places of E above the monic irreducible h, as (place, point) pairs
    where point is an affine point generating the place (None for inert)."""
    key = (curve.key, h)
    got = _PLACES_OVER_CACHE.get(key)
    if got is not None:
        return got
    m = ff.pdeg(h)
    typ = split_type(curve, h)
    if typ == "inert":
        out = [(EllPlace(curve, "inert", h=h, degree=2 * m), None, None)]
    else:
        M, x0 = _root_in_model(curve, h)
        if typ == "ram":
            pt = (x0, M.zero())
            out = [(make_affine_place(curve, M, pt), M, pt)]
        else:
            c = _rhs_at(curve, M, x0)
            y0 = M.sqrt(c)
            if y0 is None:
                raise InvariantViolationError("split fibre without a square root")
            pt1, pt2 = (x0, y0), (x0, M.neg(y0))
            out = [(make_affine_place(curve, M, pt1), M, pt1),
                   (make_affine_place(curve, M, pt2), M, pt2)]
    _PLACES_OVER_CACHE[key] = out
    return out


def _minpoly_of_place(place) -> tuple:
    h = _MINPOLY_CACHE.get(place)
    if h is None:
        ints = _minpoly_from_orbit(place.model, place.x)
        h = ff.pfrom_ints(place.curve.base, ints)
        _MINPOLY_CACHE[place] = h
    return h


def _mult_in(F, poly, f) -> int:
    m = 0
    while poly:
        q, r = ff.pdivmod(F, poly, f)
        if r:
            return m
        poly = q
        m += 1
    return m


def _nu_h(rf: RatFunc, h) -> int:
    F = rf.field
    return _mult_in(F, rf.num, h) - _mult_in(F, rf.den, h)


def _inf_valuation(f: EllFunc) -> int:
    vals = []
    if f.u:
        vals.append(-2 * f.u.deg())
    if f.v:
        vals.append(-2 * f.v.deg() - 3)
    return min(vals)


def elliptic_valuation(f: EllFunc, place: EllPlace, prec: int = 24) -> int:
    """Order of vanishing of f at a place.

    Everything except genuinely cancelling split fibres is settled by
    valuations of the norm; the remaining case expands f in the local
    parameter to ``prec`` terms and raises
    :class:`PrecisionExhaustedError` when all of them vanish.
    """
    if f.is_zero():
        raise ValueError("valuation of the zero function")
    if place.kind == "inf":
        return _inf_valuation(f)
    if place.kind == "inert":
        nu = _nu_h(f.norm(), place.h)
        if nu % 2:
            raise InvariantViolationError("odd norm valuation at an inert place")
        return nu // 2
    h = _minpoly_of_place(place)
    if place.model.is_zero(place.y):
        return _nu_h(f.norm(), h)
    if f.u.is_zero():
        return _nu_h(f.v, h)
    if f.v.is_zero():
        return _nu_h(f.u, h)
    alpha, beta = _nu_h(f.u, h), _nu_h(f.v, h)
    if alpha != beta:
        return min(alpha, beta)
    return _split_tie_valuation(f, place.model, place.x, place.y, h, alpha, prec)


# -- power series over a model field (dense lists, fixed precision) --------


def _ser_mul(M, a, b, N):
    out = [M.zero()] * N
    for i, x in enumerate(a):
        if i >= N or M.is_zero(x):
            continue
        for j, y in enumerate(b):
            if i + j >= N:
                break
            out[i + j] = M.add(out[i + j], M.mul(x, y))
    return out


def _ser_inv(M, a, N):
    c0 = a[0]
    inv0 = M.inv(c0)
    out = [M.zero()] * N
    out[0] = inv0
    for k in range(1, N):
        acc = M.zero()
        for i in range(1, min(k, len(a) - 1) + 1):
            acc = M.add(acc, M.mul(a[i], out[k - i]))
        out[k] = M.neg(M.mul(inv0, acc))
    return out


def _taylor_shift(M, ints, x0):
    """Coefficients of poly(x0 + s) for a polynomial with integer
    coefficients, as model-field elements."""
    res: list = []
    for c in reversed(ints):
        new = [M.zero()] * (len(res) + 1)
        for i, a in enumerate(res):
            new[i] = M.add(new[i], M.mul(a, x0))
            new[i + 1] = M.add(new[i + 1], a)
        new[0] = M.add(new[0], M.const(c))
        res = new
    return res if res else [M.zero()]


def _poly_ints(F, poly) -> tuple:
    return tuple(_descend_to_int(F, c) for c in poly)


def _sqrt_series(curve, M, x0, y0, N):
    """Y(s) with Y^2 = rhs(x0 + s) and Y(0) = y0 != 0, to N terms."""
    C = _taylor_shift(M, _rhs_ints(curve), x0)
    inv2 = M.inv(M.const(2))
    y = [y0]
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        t = _ser_inv(M, y + [M.zero()] * (prec - len(y)), prec)
        cy = _ser_mul(M, C, t, prec)
        y = y + [M.zero()] * (prec - len(y))
        y = [M.mul(inv2, M.add(a, b)) for a, b in zip(y, cy)]
    return y


def _stripped_series(M, rf: RatFunc, h, x0, N):
    """Series of rf / h^{nu_h(rf)} at x = x0 + s, to N terms."""
    F = rf.field
    num, den = rf.num, rf.den
    a = _mult_in(F, num, h)
    for _ in range(a):
        num = ff.pdivmod(F, num, h)[0]
    b = _mult_in(F, den, h)
    for _ in range(b):
        den = ff.pdivmod(F, den, h)[0]
    ns = _taylor_shift(M, _poly_ints(F, num), x0)
    ds = _taylor_shift(M, _poly_ints(F, den), x0)
    return _ser_mul(M, ns, _ser_inv(M, ds + [M.zero()] * max(0, N - len(ds)), N), N)


def _split_tie_valuation(f, M, x0, y0, h, alpha, N) -> int:
    if N < 1:
        raise PrecisionExhaustedError(N)
    U = _stripped_series(M, f.u, h, x0, N)
    V = _stripped_series(M, f.v, h, x0, N)
    Y = _sqrt_series(f.curve, M, x0, y0, N)
    VY = _ser_mul(M, V, Y, N)
    for i in range(N):
        if not M.is_zero(M.add(U[i], VY[i])):
            return alpha + i
    raise PrecisionExhaustedError(N)


# -- principal divisors ------------------------------------------------------


def divisor_of_ell(f: EllFunc) -> Divisor:
    curve = f.curve
    F = curve.base
    coeffs: dict = {}
    nu0 = _inf_valuation(f)
    if nu0:
        coeffs[curve.place_inf()] = nu0
    nrm = f.norm()
    cands = set()
    for poly in (nrm.num, nrm.den, f.u.den, f.v.den):
        if ff.pdeg(poly) >= 1:
            cands.update(ff.poly_factor(F, poly)[0])
    for h in sorted(cands, key=lambda g: tuple(F.enc(c) for c in g)):
        typ = split_type(curve, h)
        nuN = _nu_h(nrm, h)
        if typ == "inert":
            if nuN:
                if nuN % 2:
                    raise InvariantViolationError("odd inert norm valuation")
                place = places_over(curve, h)[0][0]
                coeffs[place] = nuN // 2
        elif typ == "ram":
            if nuN:
                place = places_over(curve, h)[0][0]
                coeffs[place] = nuN
        else:
            (p1, M, pt1), (p2, _, _) = places_over(curve, h)
            if f.u.is_zero():
                v1 = v2 = _nu_h(f.v, h)
            elif f.v.is_zero():
                v1 = v2 = _nu_h(f.u, h)
            else:
                alpha, beta = _nu_h(f.u, h), _nu_h(f.v, h)
                if alpha != beta:
                    v1 = v2 = min(alpha, beta)
                else:
                    bound = nuN - 2 * alpha + 2
                    v1 = _split_tie_valuation(f, M, pt1[0], pt1[1], h,
                                              alpha, bound)
                    v2 = nuN - v1
            if v1 + v2 != nuN:
                raise InvariantViolationError("split valuations do not sum to the norm")
            if v1:
                coeffs[p1] = v1
            if v2:
                coeffs[p2] = v2
    return Divisor(curve, coeffs)


def os_member_ell(f: EllFunc, S) -> bool:
    if f.is_zero():
        return True
    inf_in_s = any(p.is_infinite() for p in S)
    if inf_in_s and f.is_poly_pair():
        return True
    from .funcfield import divisor_of
    div = divisor_of(f)
    for place, mult in div.coeffs.items():
        if mult < 0 and place not in S:
            return False
    return True
