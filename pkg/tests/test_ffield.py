import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sarith.errors import DegreeCapError, SpecParseError
from sarith import ffield as ff


# ---------------------------------------------------------------------------
# independent oracles


def mobius(n):
    result, m = 1, n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def necklace_count(q, m):
    """Number of monic irreducibles of degree m over F_q."""
    total = 0
    e = 1
    while e <= m:
        if m % e == 0:
            total += mobius(e) * q ** (m // e)
        e += 1
    return total // m


DESK_FIELDS = [(2, d) for d in range(1, 7)] + [(3, d) for d in range(1, 5)] \
    + [(5, 1), (5, 2), (7, 1), (7, 2), (13, 1)]


# ---------------------------------------------------------------------------
# field construction


def test_f2_has_two_elements():
    F = ff.ff_make(2, 1)
    assert F.size == 2
    assert sorted(F.elements()) == [0, 1]


def test_f4_modulus_is_t2_t_1():
    # only irreducible quadratic over F_2, found by exhaustive root check
    F2 = ff.ff_make(2, 1)
    quads = [g for g in ff._monic_polys(F2, 2)
             if all(ff.peval(F2, g, a) != 0 for a in F2.elements())]
    assert quads == [(1, 1, 1)]
    F4 = ff.ff_make(2, 2)
    assert F4.modulus == (1, 1, 1)
    assert F4.size == 4


def test_f3_fermat():
    F = ff.ff_make(3, 1)
    for a in F.elements():
        assert F.pow_(a, 3) == a


def test_ff_make_rejects_composite():
    with pytest.raises(ValueError):
        ff.ff_make(4, 1)
    with pytest.raises(ValueError):
        ff.ff_make(1, 1)


def test_fields_are_interned():
    assert ff.ff_make(3, 2) is ff.ff_make(3, 2)


@pytest.mark.parametrize("p,d", DESK_FIELDS)
def test_field_axioms_and_frobenius(p, d):
    F = ff.ff_make(p, d)
    assert F.size == p ** d
    elems = list(F.elements())
    rng = random.Random(p * 100 + d)
    one, zero = F.one(), F.zero()
    # x^{p^d} = x for every element, by enumeration
    for a in elems:
        assert F.pow_(a, F.size) == a
    # exhaustively for tiny fields, sampled for the larger ones
    if F.size <= 16:
        triples = [(a, b, c) for a in elems for b in elems for c in elems]
    else:
        triples = [tuple(rng.choice(elems) for _ in range(3)) for _ in range(500)]
    for a, b, c in triples:
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a in elems:
        assert F.add(a, zero) == a
        assert F.mul(a, one) == a
        assert F.add(a, F.neg(a)) == zero
        if not F.is_zero(a):
            assert F.mul(a, F.inv(a)) == one


@pytest.mark.parametrize("p,d", [(2, 2), (3, 2), (5, 2), (2, 4)])
def test_sqrt_roundtrip(p, d):
    F = ff.ff_make(p, d)
    for a in F.elements():
        r = F.sqrt(a)
        if r is not None:
            assert F.mul(r, r) == a
    squares = {F.mul(a, a) for a in F.elements()}
    for a in F.elements():
        if a not in squares:
            assert F.sqrt(a) is None


# ---------------------------------------------------------------------------
# irreducibles


def test_irreducibles_f2_degree_1():
    F = ff.ff_make(2, 1)
    assert ff.irreducibles_up_to(F, 1) == [(0, 1), (1, 1)]  # t, t+1


def test_irreducibles_f2_degree_2():
    F = ff.ff_make(2, 1)
    assert ff.irreducibles_up_to(F, 2) == [(0, 1), (1, 1), (1, 1, 1)]


def test_irreducibles_f3_degree_1():
    F = ff.ff_make(3, 1)
    assert ff.irreducibles_up_to(F, 1) == [(0, 1), (1, 1), (2, 1)]


@pytest.mark.parametrize("p,d", [(2, 1), (3, 1), (2, 2)])
def test_necklace_identity(p, d):
    F = ff.ff_make(p, d)
    q = F.size
    table = ff.irreducibles_up_to(F, 4)
    for m in range(1, 5):
        n_m = sum(1 for g in table if ff.pdeg(g) == m)
        assert n_m == necklace_count(q, m)
    # equivalent form: sum over divisors reproduces q^d
    for dd in range(1, 5):
        total = sum(m * sum(1 for g in table if ff.pdeg(g) == m)
                    for m in range(1, dd + 1) if dd % m == 0)
        assert total == q ** dd


# ---------------------------------------------------------------------------
# factorization


def test_factor_t2_plus_t_over_f2():
    F = ff.ff_make(2, 1)
    f = ff.pfrom_ints(F, [0, 1, 1])  # t^2 + t
    factors, lead = ff.poly_factor(F, f)
    assert lead == F.one()
    assert factors == {(0, 1): 1, (1, 1): 1}


def test_factor_irreducible_quadratic_over_f2():
    F = ff.ff_make(2, 1)
    f = ff.pfrom_ints(F, [1, 1, 1])
    factors, _ = ff.poly_factor(F, f)
    assert factors == {f: 1}


def test_factor_monomial_square_over_f3():
    F = ff.ff_make(3, 1)
    f = ff.pfrom_ints(F, [0, 0, 1])  # t^2
    factors, lead = ff.poly_factor(F, f)
    assert factors == {(0, 1): 2}
    assert lead == F.one()


def test_factor_zero_rejected():
    F = ff.ff_make(2, 1)
    with pytest.raises(ValueError):
        ff.poly_factor(F, ())


@pytest.mark.parametrize("p", [2, 3, 5])
def test_factor_expand_roundtrip_1000(p):
    F = ff.ff_make(p, 1)
    rng = random.Random(97 + p)
    for _ in range(1000):
        deg = rng.randint(0, 8)
        coeffs = [rng.randrange(p) for _ in range(deg)] + [rng.randrange(1, p)]
        f = ff.pfrom_ints(F, coeffs)
        factors, lead = ff.poly_factor(F, f)
        prod = ff.pconst(F, lead)
        for g, m in factors.items():
            for _ in range(m):
                prod = ff.pmul(F, prod, g)
        assert prod == f


# ---------------------------------------------------------------------------
# polynomial ring laws


def polys(p, max_deg=6):
    return st.lists(st.integers(0, p - 1), max_size=max_deg + 1).map(
        lambda cs: ff.pfrom_ints(ff.ff_make(p, 1), cs))


@settings(max_examples=60)
@given(f=polys(3), g=polys(3))
def test_deg_of_product_adds(f, g):
    F = ff.ff_make(3, 1)
    if f and g:
        assert ff.pdeg(ff.pmul(F, f, g)) == ff.pdeg(f) + ff.pdeg(g)


@settings(max_examples=60)
@given(f=polys(2), g=polys(2))
def test_divmod_exact(f, g):
    F = ff.ff_make(2, 1)
    if g:
        q, r = ff.pdivmod(F, f, g)
        assert ff.padd(F, ff.pmul(F, q, g), r) == f
        assert ff.pdeg(r) < ff.pdeg(g)


@settings(max_examples=60)
@given(f=polys(5), g=polys(5))
def test_extgcd_bezout(f, g):
    F = ff.ff_make(5, 1)
    d, s, t = ff.pextgcd(F, f, g)
    assert ff.padd(F, ff.pmul(F, s, f), ff.pmul(F, t, g)) == d
    if f and g:
        assert not ff.pmod(F, f, d)
        assert not ff.pmod(F, g, d)


def test_degree_cap_enforced():
    F = ff.ff_make(2, 1)
    f = ff.pfrom_ints(F, [0] * 40 + [1])
    with pytest.raises(DegreeCapError):
        ff.pmul(F, f, f)


# ---------------------------------------------------------------------------
# text round-trip


@pytest.mark.parametrize("p,d", [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)])
def test_poly_str_roundtrip(p, d):
    F = ff.ff_make(p, d)
    rng = random.Random(11 * p + d)
    elems = list(F.elements())
    for _ in range(200):
        coeffs = [rng.choice(elems) for _ in range(rng.randint(0, 6))]
        f = ff.ptrim(coeffs)
        s = ff.poly_to_str(F, f)
        assert ff.poly_from_str(F, s) == f


def test_poly_str_examples():
    F = ff.ff_make(2, 1)
    f = ff.pfrom_ints(F, [1, 1, 1])
    assert ff.poly_to_str(F, f) == "t^2+t+1"
    assert ff.poly_from_str(F, "t^2+t+1") == f
    assert ff.poly_from_str(F, "1*t^2+1*t+1") == f
    F3 = ff.ff_make(3, 1)
    assert ff.poly_to_str(F3, ff.pfrom_ints(F3, [2, 0, 1])) == "t^2+2"
    assert ff.poly_to_str(F3, ()) == "0"
    assert ff.poly_from_str(F3, "0") == ()


def test_poly_parse_errors_carry_position():
    F = ff.ff_make(2, 1)
    with pytest.raises(SpecParseError):
        ff.poly_from_str(F, "t^2+!")
    with pytest.raises(SpecParseError):
        ff.poly_from_str(F, "5*t")  # coefficient out of range
    with pytest.raises(SpecParseError):
        ff.poly_from_str(F, "")


# ---------------------------------------------------------------------------
# FFElem wrapper


def test_ffelem_operators():
    F = ff.ff_make(3, 2)
    a = ff.FFElem(F, F.dec(4))
    b = ff.FFElem(F, F.dec(7))
    assert (a + b) - b == a
    assert (a * b) / b == a
    assert a * 1 == a
    assert bool(a - a) is False
    assert hash(a) == hash(ff.FFElem(F, F.dec(4)))
