"""Divisor class groups Pic(C) and Pic(O_S), ideal classes of finitely
generated fractional ideals, and the S-unit lattice.

Classes of fractional ideals are always computed through divisors: the
ideal generated by g_1, ..., g_r has min_i nu_P(g_i) at each place P
outside S, and its class is the image of that divisor in Pic(O_S).  This
leans entirely on the valuation machinery and is uniform across the two
curve backends.
"""

from __future__ import annotations

import math

from . import abgroup as ab
from . import ffield as ff
from .errors import BudgetError, InvariantViolationError
from .funcfield import P1, RatFunc, divisor_of

_PIC_CURVE_CACHE: dict = {}
_PIC_OS_CACHE: dict = {}


class PicMap:
    """The class-of-a-place homomorphism into a fixed abelian group."""

    def __init__(self, group, coords_fn):
        self.group = group
        self._coords_fn = coords_fn
        self._cache: dict = {}

    def coords_of(self, place):
        got = self._cache.get(place)
        if got is None:
            got = tuple(self._coords_fn(place))
            self._cache[place] = got
        return got

    def class_of(self, place) -> ab.GrpElem:
        return self.group.element(self.coords_of(place))


def pic_curve(curve):
    """(Pic(C), place-class map).

    P^1: the degree map onto Z.  Elliptic: Z + E(F_q), where the torsion
    coordinates of a place are those of its Frobenius-orbit sum under the
    group law and the free coordinate is the degree.
    """
    got = _PIC_CURVE_CACHE.get(curve.key)
    if got is not None:
        return got
    if curve.kind == P1:
        group = ab.FinAbGroup((), 1)

        def coords(place):
            return (place.degree,)
    else:
        from . import elliptic
        data = elliptic.group_structure(curve)
        group = ab.FinAbGroup(data.factors, 1)

        def coords(place):
            pt = elliptic.place_class_point(curve, place)
            return data.coords[pt] + (place.degree,)

    result = (group, PicMap(group, coords))
    _PIC_CURVE_CACHE[curve.key] = result
    return result


class PicOS:
    """Pic(O_S) = Pic(C) / <classes of S>, with the projected place map."""

    def __init__(self, curve, S, group, place_map, project):
        self.curve = curve
        self.S = S
        self.group = group
        self.place_map = place_map
        self.project = project

    def class_of(self, place) -> ab.GrpElem:
        return self.place_map.class_of(place)

    def order(self):
        return self.group.order()


def pic_os(curve, S) -> PicOS:
    """Pic(O_S) as the cokernel of the subgroup generated by the classes
    of the places in S, computed via Smith normal form."""
    S = frozenset(S)
    if not S:
        raise ValueError("S must be nonempty")
    key = (curve.key, S)
    got = _PIC_OS_CACHE.get(key)
    if got is not None:
        return got
    pic_c, cmap = pic_curve(curve)
    rows = [list(cmap.coords_of(p)) for p in _sorted_places(S)]
    quotient, project = ab.quotient_by_rows(pic_c, rows)
    place_map = PicMap(quotient, lambda p: project(cmap.coords_of(p)).coords)
    result = PicOS(curve, S, quotient, place_map,
                   lambda coords: project(coords))
    _PIC_OS_CACHE[key] = result
    return result


def _sorted_places(S):
    return sorted(S, key=lambda p: p.sort_key())


def ideal_class(gens, curve, S) -> ab.GrpElem:
    """Class in Pic(O_S) of the O_S-module generated by the given
    function-field elements (not all zero): the image of the divisor
    sum_{P not in S} min_i nu_P(g_i) * P."""
    gens = [g for g in gens if g]
    if not gens:
        raise ValueError("all generators are zero")
    S = frozenset(S)
    pic = pic_os(curve, S)
    mins: dict = {}
    support: dict = {}
    for g in gens:
        div = divisor_of(g)
        for place, mult in div.coeffs.items():
            if place in S:
                continue
            support.setdefault(place, []).append(mult)
    n_gens = len(gens)
    total = pic.group.identity()
    for place, mults in support.items():
        m = min(mults) if len(mults) == n_gens else min(min(mults), 0)
        if m:
            total = total + pic.class_of(place).scale(m)
    return total


class UnitLattice:
    """O_S^* modulo torsion: q - 1 roots of unity times a free lattice.

    ``generators`` holds explicit functions on the projective line; on the
    elliptic backend it holds abstract exponent vectors over the sorted
    places of S (constructing the functions themselves would need
    Riemann-Roch machinery, out of scope)."""

    __slots__ = ("torsion", "rank", "generators", "places")

    def __init__(self, torsion, rank, generators, places):
        self.torsion = torsion
        self.rank = rank
        self.generators = generators
        self.places = places


def unit_lattice(curve, S) -> UnitLattice:
    """Structure of O_S^*: torsion order |F_q^*| and a basis of the free
    part, obtained as the kernel of Z^S -> Pic(C) via SNF."""
    S_sorted = _sorted_places(frozenset(S))
    if not S_sorted:
        raise ValueError("S must be nonempty")
    pic_c, cmap = pic_curve(curve)
    n = pic_c.dim
    s = len(S_sorted)
    stacked = [list(cmap.coords_of(p)) for p in S_sorted]
    for i, f in enumerate(pic_c.factors):
        row = [0] * n
        row[i] = f
        stacked.append(row)
    kernel = ab.kernel_basis(stacked)
    projected = [v[:s] for v in kernel if any(v[:s])]
    basis = ab.row_space_basis(projected) if projected else []
    rank = len(basis)
    if rank != s - 1:
        raise InvariantViolationError(
            f"unit lattice rank {rank} != #S - 1 = {s - 1}")
    basis = [_normalize_unit_vector(v, S_sorted) for v in basis]
    if curve.kind == P1:
        gens = [_p1_unit_function(curve, v, S_sorted) for v in basis]
    else:
        gens = basis
    return UnitLattice(curve.base.size - 1, rank, gens, S_sorted)


def _normalize_unit_vector(v, places):
    for exp, place in zip(v, places):
        if place.is_infinite():
            continue
        if exp > 0:
            return v
        if exp < 0:
            return [-x for x in v]
    return v


def _p1_unit_function(curve, v, places) -> RatFunc:
    F = curve.base
    num = (F.one(),)
    den = (F.one(),)
    for exp, place in zip(v, places):
        if place.is_infinite() or exp == 0:
            continue
        for _ in range(abs(exp)):
            if exp > 0:
                num = ff.pmul(F, num, place.poly)
            else:
                den = ff.pmul(F, den, place.poly)
    return RatFunc.make(F, num, den)


# ---------------------------------------------------------------------------
# independent oracle: quotient order / element orders by direct coset
# enumeration, using subgroup-membership tests only (no SNF anywhere)


def _membership_tester(pic_group, s_rows):
    """Return a predicate testing membership in the subgroup of Pic(C)
    generated by the rows (supports one or two generators)."""
    factors = pic_group.factors
    e = math.lcm(*factors) if factors else 1
    k = len(factors)

    def torsion_ok(lams, x):
        for i in range(k):
            acc = sum(l * row[i] for l, row in zip(lams, s_rows))
            if (acc - x[i]) % factors[i]:
                return False
        return True

    degs = [row[k] for row in s_rows]

    if len(s_rows) == 1:
        d = degs[0]

        def member(x):
            if x[k] % d:
                return False
            lam = x[k] // d
            return torsion_ok((lam,), x)
        return member

    if len(s_rows) == 2:
        d1, d2 = degs
        g = math.gcd(d1, d2)

        def member(x):
            if x[k] % g:
                return False
            # particular solution of l1*d1 + l2*d2 = x_free
            a, b = _ext_gcd(d1, d2)
            l1 = a * (x[k] // g)
            l2 = b * (x[k] // g)
            # kernel direction (d2/g, -d1/g); torsion has period dividing e
            for t in range(e):
                lam = (l1 + t * (d2 // g), l2 - t * (d1 // g))
                if torsion_ok(lam, x):
                    return True
            return False
        return member

    raise NotImplementedError("direct oracle supports |S| <= 2")


def _ext_gcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return x0, y0


def pic_os_cosets_oracle(curve, S, bound: int = 100):
    """(order, sorted element-order multiset) of Pic(O_S) by direct coset
    enumeration in Pic(C): breadth-first closure over generator images,
    with cosets identified purely by subgroup-membership tests."""
    pic_c, cmap = pic_curve(curve)
    s_rows = [list(cmap.coords_of(p)) for p in _sorted_places(frozenset(S))]
    member = _membership_tester(pic_c, s_rows)
    n = pic_c.dim
    gens = []
    for i in range(n):
        v = [0] * n
        v[i] = 1
        gens.append(tuple(v))

    def add(x, y):
        return tuple(a + b for a, b in zip(x, y))

    def sub(x, y):
        return tuple(a - b for a, b in zip(x, y))

    reps = [tuple([0] * n)]
    frontier = [tuple([0] * n)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                cand = add(x, g)
                if not any(member(sub(cand, r)) for r in reps):
                    reps.append(cand)
                    nxt.append(cand)
                    if len(reps) > bound:
                        raise BudgetError("coset enumeration exceeded bound")
        frontier = nxt

    orders = []
    for x in reps:
        k = 1
        acc = x
        while not member(acc):
            acc = add(acc, x)
            k += 1
            if k > len(reps):
                raise InvariantViolationError("element order exceeds group order")
        orders.append(k)
    return len(reps), sorted(orders)


def group_order_multiset(group: ab.FinAbGroup):
    """Element-order multiset of a finite group, from its invariant factors."""
    orders = []
    for el in group.elements():
        o = 1
        for c, f in zip(el.coords, group.factors):
            if c:
                o = math.lcm(o, f // math.gcd(f, c))
        orders.append(o)
    return sorted(orders)
