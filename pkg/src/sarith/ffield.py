"""Exact arithmetic in small finite fields F_{p^d} and in F_q[t].

A field is described by a prime p, an extension degree d and a monic
irreducible modulus over F_p.  The modulus is chosen deterministically
(smallest monic irreducible in base-p coefficient encoding), so equal
parameters always yield the identical interned field object.

Raw element representations are deliberately primitive so the hot loops
(polynomial gcd, division, factoring) stay allocation-light:

* prime field (d = 1): an int in [0, p)
* extension field (d > 1): a length-d tuple of ints, constant
  coefficient first

:class:`FFElem` wraps a raw value with operator syntax for callers that
prefer objects.  Fields of size <= 4096 get discrete log/exp tables, which
makes extension-field multiplication a dict lookup.

Polynomials over F_q are dense tuples of raw coefficients, constant term
first, with no trailing zeros; the zero polynomial is the empty tuple.
They are manipulated through module-level functions (``padd``, ``pmul``,
``pdivmod``, ...) rather than a class.
"""

from __future__ import annotations

from .errors import BudgetError, DegreeCapError, SpecParseError

DEGREE_CAP = 64          # hard cap on any polynomial degree we ever build
TABLE_MAX = 4096         # log/exp tables for extension fields up to this size
IRR_ENUM_MAX = 100_000   # q^m budget when enumerating monic degree-m polys

_FIELDS: dict = {}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


class FieldDesc:
    """F_{p^d} with a fixed monic irreducible modulus over F_p.

    Instances are interned on (p, modulus); identity comparison is safe.
    """

    __slots__ = ("p", "d", "modulus", "size", "_exp", "_log", "_gen")

    def __init__(self, p, d, modulus):
        self.p = p
        self.d = d
        self.modulus = modulus  # tuple of length d+1, constant first, monic
        self.size = p ** d
        self._exp = None
        self._log = None
        self._gen = None

    def __repr__(self):
        if self.d == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.d}"

    # raw representations -------------------------------------------------

    def zero(self):
        return 0 if self.d == 1 else (0,) * self.d

    def one(self):
        return 1 if self.d == 1 else (1,) + (0,) * (self.d - 1)

    def const(self, c: int):
        """Embed an integer (class mod p) as a field element."""
        c %= self.p
        return c if self.d == 1 else (c,) + (0,) * (self.d - 1)

    def is_zero(self, a) -> bool:
        return a == 0 if self.d == 1 else not any(a)

    def enc(self, a) -> int:
        """Base-p integer encoding; defines the fixed enumeration order."""
        if self.d == 1:
            return a
        n = 0
        for c in reversed(a):
            n = n * self.p + c
        return n

    def dec(self, n: int):
        if self.d == 1:
            return n
        out = []
        for _ in range(self.d):
            out.append(n % self.p)
            n //= self.p
        return tuple(out)

    def elements(self):
        return (self.dec(n) for n in range(self.size))

    # arithmetic -----------------------------------------------------------

    def add(self, a, b):
        if self.d == 1:
            return (a + b) % self.p
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        if self.d == 1:
            return (a - b) % self.p
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        if self.d == 1:
            return (-a) % self.p
        p = self.p
        return tuple((-x) % p for x in a)

    def smul(self, c: int, a):
        if self.d == 1:
            return (c * a) % self.p
        p = self.p
        return tuple((c * x) % p for x in a)

    def mul(self, a, b):
        if self.d == 1:
            return (a * b) % self.p
        if self._log is None and self.size <= TABLE_MAX:
            self._build_tables()
        if self._log is not None:
            if not any(a) or not any(b):
                return self.zero()
            return self._exp[(self._log[a] + self._log[b]) % (self.size - 1)]
        return self._mul_vec(a, b)

    def _mul_vec(self, a, b):
        p, d, mod = self.p, self.d, self.modulus
        conv = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    conv[i + j] += x * y
        # reduce by the monic modulus
        for i in range(2 * d - 2, d - 1, -1):
            c = conv[i] % p
            if c:
                for j in range(d + 1):
                    conv[i - d + j] -= c * mod[j]
        return tuple(c % p for c in conv[:d])

    def inv(self, a):
        if self.d == 1:
            if a == 0:
                raise ZeroDivisionError("inverse of zero field element")
            return pow(a, self.p - 2, self.p)
        if not any(a):
            raise ZeroDivisionError("inverse of zero field element")
        if self._log is None and self.size <= TABLE_MAX:
            self._build_tables()
        if self._log is not None:
            return self._exp[(-self._log[a]) % (self.size - 1)]
        return self.pow_(a, self.size - 2)

    def pow_(self, a, e: int):
        if e < 0:
            return self.pow_(self.inv(a), -e)
        r = self.one()
        b = a
        while e:
            if e & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            e >>= 1
        return r

    def frob(self, a):
        """Frobenius x -> x^p."""
        return self.pow_(a, self.p)

    def sqrt(self, a):
        """A square root of a, or None when a is a non-square."""
        if self.is_zero(a):
            return a
        q = self.size
        if self.p == 2:
            return self.pow_(a, q // 2)
        if self._log is None and q <= TABLE_MAX:
            self._build_tables()
        if self._log is not None:
            l = self._log[a]
            if l % 2:
                return None
            return self._exp[l // 2]
        return self._sqrt_tonelli(a)

    def _sqrt_tonelli(self, a):
        q = self.size
        if self.pow_(a, (q - 1) // 2) != self.one():
            return None
        if q % 4 == 3:
            return self.pow_(a, (q + 1) // 4)
        # Tonelli-Shanks; the non-residue scan follows enumeration order
        s, m = q - 1, 0
        while s % 2 == 0:
            s //= 2
            m += 1
        z = None
        for n in range(2, q):
            cand = self.dec(n)
            if self.pow_(cand, (q - 1) // 2) != self.one():
                z = cand
                break
        c = self.pow_(z, s)
        t = self.pow_(a, s)
        r = self.pow_(a, (s + 1) // 2)
        while t != self.one():
            i, t2 = 0, t
            while t2 != self.one():
                t2 = self.mul(t2, t2)
                i += 1
            b = self.pow_(c, 1 << (m - i - 1))
            m = i
            c = self.mul(b, b)
            t = self.mul(t, c)
            r = self.mul(r, b)
        return r

    def generator(self):
        """A multiplicative generator (smallest in enumeration order)."""
        if self._gen is not None:
            return self._gen
        n = self.size
        raw_mul = (lambda a, b: (a * b) % self.p) if self.d == 1 else self._mul_vec
        for k in range(1, n):
            g = self.dec(k)
            seen = 1
            x = g
            while x != self.one():
                x = raw_mul(x, g)
                seen += 1
                if seen > n:  # pragma: no cover - defensive
                    raise RuntimeError("multiplicative order walk overran")
            if seen == n - 1:
                self._gen = g
                return g
        raise ZeroDivisionError("trivial multiplicative group")  # pragma: no cover

    def _build_tables(self):
        g = self.generator()
        exp = [self.one()]
        x = self.one()
        for _ in range(self.size - 2):
            x = self._mul_vec(x, g) if self.d > 1 else (x * g) % self.p
            exp.append(x)
        self._exp = exp
        self._log = {v: i for i, v in enumerate(exp)}

    # text form ------------------------------------------------------------

    def coeff_str(self, a) -> str:
        if self.d == 1:
            return str(a)
        return "[" + ",".join(str(c) for c in reversed(a)) + "]"

    def coeff_parse(self, s: str, pos: int = 0):
        s = s.strip()
        if self.d == 1:
            if not s.isdigit():
                raise SpecParseError(f"expected integer coefficient, got {s!r}",
                                     pos=pos)
            v = int(s)
            if v >= self.p:
                raise SpecParseError(f"coefficient {v} out of range 0..{self.p - 1}",
                                     pos=pos)
            return v
        if not (s.startswith("[") and s.endswith("]")):
            raise SpecParseError(f"expected bracketed coefficient, got {s!r}",
                                 pos=pos)
        parts = s[1:-1].split(",")
        if len(parts) != self.d:
            raise SpecParseError(f"coefficient needs {self.d} entries, got {len(parts)}",
                                 pos=pos)
        try:
            digits = [int(x) for x in parts]
        except ValueError:
            raise SpecParseError(f"bad coefficient {s!r}", pos=pos) from None
        if any(not 0 <= x < self.p for x in digits):
            raise SpecParseError(f"coefficient digits out of range in {s!r}", pos=pos)
        return tuple(reversed(digits))


class FFElem:
    """An element of a :class:`FieldDesc`, with operator syntax."""

    __slots__ = ("field", "rep")

    def __init__(self, field: FieldDesc, rep):
        self.field = field
        self.rep = rep

    def _coerce(self, other):
        if isinstance(other, FFElem):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other.rep
        if isinstance(other, int):
            return self.field.const(other)
        return NotImplemented

    def __add__(self, other):
        r = self._coerce(other)
        return FFElem(self.field, self.field.add(self.rep, r))

    __radd__ = __add__

    def __sub__(self, other):
        r = self._coerce(other)
        return FFElem(self.field, self.field.sub(self.rep, r))

    def __mul__(self, other):
        r = self._coerce(other)
        return FFElem(self.field, self.field.mul(self.rep, r))

    __rmul__ = __mul__

    def __truediv__(self, other):
        r = self._coerce(other)
        return FFElem(self.field, self.field.mul(self.rep, self.field.inv(r)))

    def __neg__(self):
        return FFElem(self.field, self.field.neg(self.rep))

    def __pow__(self, e):
        return FFElem(self.field, self.field.pow_(self.rep, e))

    def __eq__(self, other):
        if isinstance(other, FFElem):
            return self.field is other.field and self.rep == other.rep
        if isinstance(other, int):
            return self.rep == self.field.const(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.rep))

    def __bool__(self):
        return not self.field.is_zero(self.rep)

    def __repr__(self):
        return f"{self.field.coeff_str(self.rep)} in {self.field!r}"


def field_with_modulus(p: int, modulus: tuple) -> FieldDesc:
    """Intern F_p[X]/(modulus) for an explicitly given monic irreducible."""
    key = (p, tuple(modulus))
    f = _FIELDS.get(key)
    if f is None:
        f = FieldDesc(p, len(modulus) - 1, tuple(modulus))
        _FIELDS[key] = f
    return f


def ff_make(p: int, d: int) -> FieldDesc:
    """Field descriptor for F_{p^d} with the deterministic modulus choice:
    the monic irreducible of degree d that is smallest in base-p coefficient
    encoding.  For d = 1 the (unused) modulus is t."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if d < 1:
        raise ValueError("degree must be >= 1")
    if d == 1:
        return field_with_modulus(p, (0, 1))
    base = ff_make(p, 1)
    for g in _monic_polys(base, d):
        if _is_irreducible(base, g):
            return field_with_modulus(p, g)
    raise ValueError(f"no irreducible modulus found for F_{p}^{d}")  # pragma: no cover


# ---------------------------------------------------------------------------
# dense polynomials over F_q


def ptrim(coeffs) -> tuple:
    coeffs = list(coeffs)
    while coeffs:
        c = coeffs[-1]
        if c == 0 or (isinstance(c, tuple) and not any(c)):
            coeffs.pop()
        else:
            break
    return tuple(coeffs)


def pdeg(f) -> int:
    """Degree, with deg(0) = -1."""
    return len(f) - 1


def pconst(F: FieldDesc, c) -> tuple:
    return () if F.is_zero(c) else (c,)


def pX(F: FieldDesc) -> tuple:
    return (F.zero(), F.one())


def pfrom_ints(F: FieldDesc, ints) -> tuple:
    """Polynomial from integer coefficients, constant first."""
    return ptrim([F.const(c) for c in ints])


def padd(F: FieldDesc, f, g) -> tuple:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = F.add(out[i], c)
    return ptrim(out)


def pneg(F: FieldDesc, f) -> tuple:
    return tuple(F.neg(c) for c in f)


def psub(F: FieldDesc, f, g) -> tuple:
    return padd(F, f, pneg(F, g))


def pscale(F: FieldDesc, c, f) -> tuple:
    if F.is_zero(c):
        return ()
    return ptrim([F.mul(c, x) for x in f])


def pmul(F: FieldDesc, f, g) -> tuple:
    if not f or not g:
        return ()
    if pdeg(f) + pdeg(g) > DEGREE_CAP:
        raise DegreeCapError(
            f"product degree {pdeg(f) + pdeg(g)} exceeds cap {DEGREE_CAP}")
    out = [F.zero()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if F.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return ptrim(out)


def pdivmod(F: FieldDesc, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if pdeg(f) < pdeg(g):
        return (), f
    inv_lead = F.inv(g[-1])
    rem = list(f)
    dq = pdeg(f) - pdeg(g)
    quo = [F.zero()] * (dq + 1)
    for k in range(dq, -1, -1):
        c = F.mul(rem[k + pdeg(g)], inv_lead)
        if not F.is_zero(c):
            quo[k] = c
            for j, b in enumerate(g):
                rem[k + j] = F.sub(rem[k + j], F.mul(c, b))
    return ptrim(quo), ptrim(rem)


def pmod(F: FieldDesc, f, g) -> tuple:
    return pdivmod(F, f, g)[1]


def pmonic(F: FieldDesc, f):
    """(monic multiple-of-unit form, leading coefficient)."""
    if not f:
        return (), F.one()
    lead = f[-1]
    if lead == F.one():
        return f, lead
    return pscale(F, F.inv(lead), f), lead


def pgcd(F: FieldDesc, f, g) -> tuple:
    while g:
        f, g = g, pmod(F, f, g)
    return pmonic(F, f)[0]


def pextgcd(F: FieldDesc, f, g):
    """(gcd monic, s, t) with s*f + t*g = gcd."""
    r0, r1 = f, g
    s0, s1 = pconst(F, F.one()), ()
    t0, t1 = (), pconst(F, F.one())
    while r1:
        q, r = pdivmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(F, s0, pmul(F, q, s1))
        t0, t1 = t1, psub(F, t0, pmul(F, q, t1))
    if not r0:
        return (), s0, t0
    lead = r0[-1]
    c = F.inv(lead)
    return pscale(F, c, r0), pscale(F, c, s0), pscale(F, c, t0)


def ppowmod(F: FieldDesc, f, e: int, m) -> tuple:
    r = pconst(F, F.one())
    b = pmod(F, f, m)
    while e:
        if e & 1:
            r = pmod(F, pmul(F, r, b), m)
        b = pmod(F, pmul(F, b, b), m)
        e >>= 1
    return r


def peval(F: FieldDesc, f, a):
    """Evaluate f at a field element (possibly of an extension of F's
    prime field; the coefficients are embedded via their integer residues
    when F is the prime field itself)."""
    acc = F.zero()
    for c in reversed(f):
        acc = F.add(F.mul(acc, a), c)
    return acc


def peval_in(M: FieldDesc, f, a):
    """Evaluate a prime-field polynomial f at a point of the extension M."""
    acc = M.zero()
    for c in reversed(f):
        acc = M.add(M.mul(acc, a), M.const(c))
    return acc


# ---------------------------------------------------------------------------
# irreducibles and factorization


def _monic_polys(F: FieldDesc, m: int):
    """Monic degree-m polynomials in base-p(-power) encoding order."""
    q = F.size
    if q ** m > IRR_ENUM_MAX:
        raise BudgetError(
            f"enumerating {q}^{m} monic polynomials exceeds the budget")
    one = F.one()
    for n in range(q ** m):
        coeffs = []
        k = n
        for _ in range(m):
            coeffs.append(F.dec(k % q))
            k //= q
        coeffs.append(one)
        yield tuple(coeffs)


_IRR_CACHE: dict = {}


def irreducibles_up_to(F: FieldDesc, D: int) -> list:
    """All monic irreducible polynomials over F of degree <= D, ordered by
    (degree, coefficient encoding).  Complete and duplicate-free by
    construction: each candidate is sieved by trial division against the
    irreducibles of at most half its degree."""
    by_deg = _IRR_CACHE.setdefault(id(F), {})
    for m in range(1, D + 1):
        if m in by_deg:
            continue
        found = []
        lower = [g for dd in range(1, m // 2 + 1) for g in by_deg[dd]]
        for cand in _monic_polys(F, m):
            if all(pmod(F, cand, g) for g in lower):
                found.append(cand)
        by_deg[m] = found
    out = []
    for m in range(1, D + 1):
        out.extend(by_deg[m])
    return out


def _is_irreducible(F: FieldDesc, f) -> bool:
    m = pdeg(f)
    if m <= 0:
        return False
    if m == 1:
        return True
    for g in irreducibles_up_to(F, m // 2):
        if not pmod(F, f, g):
            return False
    return True


def poly_factor(F: FieldDesc, f):
    """Factor f into monic irreducibles by trial division.

    Returns ({irreducible poly: multiplicity}, leading coefficient) with
    lead * prod(g^m) == f exactly.
    """
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    work, lead = pmonic(F, f)
    factors: dict = {}
    if pdeg(work) == 0:
        return factors, lead
    for g in irreducibles_up_to(F, pdeg(work) // 2):
        if pdeg(work) < pdeg(g):
            break
        while True:
            q, r = pdivmod(F, work, g)
            if r:
                break
            factors[g] = factors.get(g, 0) + 1
            work = q
    if pdeg(work) >= 1:
        factors[work] = factors.get(work, 0) + 1
    return factors, lead


# ---------------------------------------------------------------------------
# canonical text form: "c_k*t^k+...+c_0"


def poly_to_str(F: FieldDesc, f, var: str = "t") -> str:
    if not f:
        return "0"
    terms = []
    for k in range(pdeg(f), -1, -1):
        c = f[k]
        if F.is_zero(c):
            continue
        if k == 0:
            terms.append(F.coeff_str(c))
            continue
        tpart = var if k == 1 else f"{var}^{k}"
        if F.d == 1 and c == 1:
            terms.append(tpart)
        else:
            terms.append(f"{F.coeff_str(c)}*{tpart}")
    return "+".join(terms)


def _split_terms(s: str):
    """Split on '+' at bracket depth zero, yielding (term, start_pos)."""
    depth = 0
    start = 0
    for i, ch in enumerate(s):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "+" and depth == 0:
            yield s[start:i], start
            start = i + 1
    yield s[start:], start


def poly_from_str(F: FieldDesc, s: str, var: str = "t") -> tuple:
    text = s.replace(" ", "")
    if not text:
        raise SpecParseError("empty polynomial", text=s, pos=0)
    if text == "0":
        return ()
    coeffs: dict = {}
    for term, pos in _split_terms(text):
        if not term:
            raise SpecParseError("empty term", text=s, pos=pos)
        if var in term:
            head, _, tail = term.partition(var)
            if head.endswith("*"):
                head = head[:-1]
            c = F.coeff_parse(head, pos) if head else F.one()
            if tail == "":
                k = 1
            elif tail.startswith("^") and tail[1:].isdigit():
                k = int(tail[1:])
            else:
                raise SpecParseError(f"bad exponent in term {term!r}",
                                     text=s, pos=pos)
        else:
            c = F.coeff_parse(term, pos)
            k = 0
        if k > DEGREE_CAP:
            raise DegreeCapError(f"degree {k} exceeds cap {DEGREE_CAP}")
        if k in coeffs:
            c = F.add(coeffs[k], c)
        coeffs[k] = c
    out = [F.zero()] * (max(coeffs) + 1)
    for k, c in coeffs.items():
        out[k] = c
    return ptrim(out)
