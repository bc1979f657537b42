"""Cusps of SL_n(O_S) made computable.

A chamber is a determinant-1 matrix g over the function field, standing
for the cusp g^{-1} * (standard cusp); two matrices describe the same
cusp exactly when they differ by SL_n(O_S) on the left and by an
upper-triangular determinant-1 matrix on the right.  The Steinitz
invariant assigns to a chamber the (n-1)-tuple of ideal classes of its
leading-column minor ideals; it is constant on cusps, and the census
checks how many values it takes against |Pic(O_S)|^{n-1}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from . import ffield as ff
from .errors import (BudgetError, InvariantViolationError, NonEuclideanError,
                     NotUpperTriangularError)
from .funcfield import P1, RatFunc
from .picard import ideal_class, pic_os
from .slgroups import (BorelParts, MatK, ProjPoint, borel_factor, elementary,
                       in_sl_os, minor_det, mobius_action,
                       sample_chamber_word, standard_cusp)


class Chamber:
    """A cusp representative; equality of cusps is double-coset equality,
    which is detected through the invariant, not through ==."""

    __slots__ = ("g", "_ginv")

    def __init__(self, g: MatK):
        self.g = g
        self._ginv = None

    @property
    def ginv(self) -> MatK:
        if self._ginv is None:
            self._ginv = self.g.inverse()
        return self._ginv

    @staticmethod
    def standard(curve, n) -> "Chamber":
        return Chamber(MatK.identity(curve, n))

    def __repr__(self):
        return f"Chamber({self.g!r})"


@dataclass(frozen=True)
class CuspInvariant:
    """(n-1)-tuple of Pic(O_S) classes: entry i is the class of the ideal
    of (i+1) x (i+1) minors of the first i+1 columns."""

    classes: tuple

    def coords_key(self):
        return tuple(c.coords for c in self.classes)

    def to_json(self):
        return [list(c.coords) for c in self.classes]

    def is_trivial(self):
        return all(c.is_identity() for c in self.classes)


def steinitz_invariant(ch: Chamber, curve, S) -> CuspInvariant:
    """Ideal classes of the leading-minor (Pluecker) ideals of the chamber
    matrix, one per level 1 .. n-1."""
    g = ch.g
    n = g.n
    classes = []
    for i in range(1, n):
        cols = tuple(range(i))
        gens = []
        for rows in combinations(range(n), i):
            m = minor_det(curve, g, rows, cols)
            if m:
                gens.append(m)
        if not gens:
            raise InvariantViolationError("all leading minors vanish")
        classes.append(ideal_class(gens, curve, S))
    return CuspInvariant(tuple(classes))


# ---------------------------------------------------------------------------
# group specs (which arithmetic group the predicates quantify over)


@dataclass(frozen=True)
class GSpec:
    """SL_n(O_S) or a principal congruence subgroup of it."""

    kind: str                 # "sl_os" | "congruence"
    ideal: tuple = None       # modulus polynomial for "congruence"

    @staticmethod
    def sl_os() -> "GSpec":
        return GSpec("sl_os")

    @staticmethod
    def congruence(modulus) -> "GSpec":
        return GSpec("congruence", tuple(modulus))

    def member(self, M: MatK, curve, S) -> bool:
        if self.kind == "sl_os":
            return in_sl_os(M, S)
        from .congruence import gamma_i_member
        return gamma_i_member(M, curve, S, self.ideal)


def max_unipotent_member(M: MatK, ch: Chamber, curve, S, gspec=None) -> bool:
    """Membership in the maximal unipotent subgroup attached to the
    chamber: M lies in the group and conjugating by the chamber matrix
    lands in the unit upper-triangular subgroup."""
    gspec = gspec or GSpec.sl_os()
    if not gspec.member(M, curve, S):
        return False
    conj = ch.g * M * ch.ginv
    return conj.is_unit_upper()


def stabilizer_member(M: MatK, ch: Chamber, curve, S, gspec=None):
    """(membership in the cusp stabilizer, Borel parts of the conjugate).

    The conjugate g M g^{-1} is upper triangular exactly when M stabilizes
    the cusp; its diagonal/unipotent split is returned on success."""
    gspec = gspec or GSpec.sl_os()
    if not gspec.member(M, curve, S):
        return False, None
    conj = ch.g * M * ch.ginv
    try:
        parts = borel_factor(conj)
    except NotUpperTriangularError:
        return False, None
    return True, parts


# ---------------------------------------------------------------------------
# Euclidean reduction (projective line, S = {infinity})


def reduce_to_standard(pt: ProjPoint, curve, S) -> MatK:
    """A matrix in SL_2(F_q[t]) moving (a : b) to the standard cusp,
    built from the extended Euclidean algorithm on the coprime polynomial
    representative."""
    if curve.kind != P1 or set(S) != {curve.place_inf()}:
        raise NonEuclideanError("reduction needs the projective line with S = {inf}")
    F = curve.base
    a, b = pt.a.num, pt.b.num  # coprime polynomials, first nonzero monic
    g, s, t = ff.pextgcd(F, a, b)
    if ff.pdeg(g) != 0:
        raise InvariantViolationError("normalized point has non-unit gcd")
    rows = [[RatFunc.from_poly(F, s), RatFunc.from_poly(F, t)],
            [RatFunc.from_poly(F, ff.pneg(F, b)), RatFunc.from_poly(F, a)]]
    gamma = MatK(curve, rows)
    if mobius_action(gamma, pt) != standard_cusp(curve):
        raise InvariantViolationError("reduction did not reach the standard cusp")
    return gamma


# ---------------------------------------------------------------------------
# deterministic witnesses


def complete_pair(curve, a, b) -> MatK:
    """Extend a nonzero column (a, b) to a determinant-1 matrix."""
    zero, one = curve.zero_f(), curve.one_f()
    if a:
        return MatK(curve, [[a, zero], [b, a.inverse()]])
    return MatK(curve, [[a, -b.inverse()], [b, zero]])


def _witness_column_pairs(curve, S):
    """Deterministic stream of candidate ideal-generator pairs whose
    classes walk through Pic(O_S)."""
    yield curve.one_f(), curve.zero_f()
    if curve.kind == P1:
        F = curve.base
        shifts = [ff.pX(F), ff.pfrom_ints(F, [1, 1])]
        s_polys = {p.poly for p in S if not p.is_infinite()}
        for q_poly in ff.irreducibles_up_to(F, 3):
            if q_poly in s_polys:
                continue
            fq = RatFunc.from_poly(F, q_poly)
            for e in (1, 2, 3):
                a = fq
                for _ in range(e - 1):
                    a = a * fq
                for sh in shifts:
                    if not ff.pmod(F, sh, q_poly):
                        continue
                    yield a, a * RatFunc.from_poly(F, sh)
    else:
        from . import elliptic
        if not any(p.is_infinite() for p in S):
            return
        x, y = curve.gen_f(), curve.y_f()
        for place in elliptic.elliptic_places_up_to(curve, 1):
            if place.is_infinite() or place in S:
                continue
            x0 = curve.const_f(place.x)
            y0 = curve.const_f(place.y)
            yield x - x0, y - y0


def witness_chambers_by_class(curve, S) -> dict:
    """For n = 2: one chamber per realized Pic(O_S) class, found by a
    deterministic search through structured generator pairs."""
    pic = pic_os(curve, S)
    expected = pic.order()
    found: dict = {}
    for a, b in _witness_column_pairs(curve, S):
        cls = ideal_class([a, b], curve, S)
        if cls.coords not in found:
            found[cls.coords] = complete_pair(curve, a, b)
            if len(found) == expected:
                break
    return found


def _embed_block(curve, n, block: MatK, pos: int) -> MatK:
    one, zero = curve.one_f(), curve.zero_f()
    rows = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for i in range(2):
        for j in range(2):
            rows[pos + i][pos + j] = block.rows[i][j]
    return MatK(curve, rows, _trusted=True)


def _seed_chambers(curve, S, n, expected):
    """Identity, per-class witnesses (n = 2), and componentwise block
    products for higher rank."""
    seeds = [Chamber.standard(curve, n)]
    witnesses = witness_chambers_by_class(curve, S)
    if n == 2:
        seeds.extend(Chamber(m) for m in witnesses.values())
        return seeds
    blocks = list(witnesses.values())
    slots = n - 1
    combos = [[]]
    for _ in range(slots):
        combos = [c + [blk] for c in combos for blk in blocks]
        if len(combos) * len(blocks) > 4 * expected:
            break
    for combo in combos:
        m = MatK.identity(curve, n)
        for pos, blk in enumerate(combo):
            m = m * _embed_block(curve, n, blk, pos)
        seeds.append(Chamber(m))
    return seeds


# ---------------------------------------------------------------------------
# census


@dataclass
class CensusReport:
    curve_spec: str
    place_specs: list
    n: int
    expected: int
    entries: list                 # [(coords tuple-of-tuples, witness MatK)]
    samples_used: int
    cfg_json: dict

    def found_count(self) -> int:
        return len(self.entries)

    def to_json(self):
        return {
            "config": {
                "curve": self.curve_spec,
                "places": self.place_specs,
                "n": self.n,
                "sampler": self.cfg_json,
            },
            "expected": self.expected,
            "found": [
                {"class_coords": [list(c) for c in coords],
                 "witness_matrix": mat.to_json()}
                for coords, mat in self.entries
            ],
            "samples_used": self.samples_used,
        }


def cusp_census(curve, S, n, cfg, samples: int = 500,
                extra_chambers=()) -> CensusReport:
    """Count the distinct Steinitz invariants over sampled chambers plus
    deterministic witnesses.

    Exceeding |Pic(O_S)|^{n-1} distinct values is a hard invariant
    violation (it would falsify invariance), never a math outcome.
    """
    S = frozenset(S)
    pic = pic_os(curve, S)
    order = pic.order()
    expected = order ** (n - 1)
    if expected > 10_000:
        raise BudgetError(f"census expects {expected} classes, over budget")
    found: dict = {}

    def record(ch: Chamber):
        inv = steinitz_invariant(ch, curve, S)
        key = inv.coords_key()
        if key not in found:
            if len(found) + 1 > expected:
                raise InvariantViolationError(
                    "more invariant values than |Pic(O_S)|^(n-1); "
                    "the invariant is not cusp-stable")
            found[key] = ch.g

    for ch in _seed_chambers(curve, S, n, expected):
        record(ch)
    for ch in extra_chambers:
        record(ch)
    rng = random.Random(cfg.seed)
    for _ in range(samples):
        record(Chamber(sample_chamber_word(rng, curve, n,
                                           cfg.word_length, cfg.height)))
    entries = sorted(found.items(), key=lambda kv: kv[0])
    return CensusReport(
        curve_spec=curve.to_spec(),
        place_specs=sorted(p.to_spec() for p in S),
        n=n,
        expected=expected,
        entries=entries,
        samples_used=samples,
        cfg_json=cfg.to_json(),
    )
