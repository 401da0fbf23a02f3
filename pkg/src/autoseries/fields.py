"""Exact coefficient fields.

Three families of scalars live here:

* :class:`FqField` / :class:`FqElement` -- the finite field F_q, q = p^e, realised
  as F_p[z]/(modulus).  Elements are packed into a single integer
  ``sum(c_i * p**i)`` so that hot loops elsewhere can work with plain ints and
  the field's table-driven methods.
* :class:`Poly` / :class:`RatFunc` -- polynomials and rational functions in t
  over F_q.
* :class:`LambdaElement` / :class:`LambdaRational` -- the perfect symbolic field
  F_p(lambda^{1/p^oo}) generated by a transcendental lambda.

:func:`solve_homogeneous` computes right null spaces over any of these by
fraction-free (Bareiss) Gauss-Jordan elimination.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache


class FieldError(ValueError):
    """Inconsistent or invalid field data."""


def _is_prime(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


# ---------------------------------------------------------------------------
# polynomials over F_p given as coefficient lists (low degree first)

def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _fp_polymod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        f = a[-1] * inv % p
        sh = len(a) - len(b)
        for i, bi in enumerate(b):
            a[sh + i] = (a[sh + i] - f * bi) % p
        _trim(a)
    return a


def is_irreducible_fp(coeffs, p):
    """Irreducibility of a polynomial over F_p by trial division (small degrees)."""
    coeffs = _trim([c % p for c in coeffs])
    deg = len(coeffs) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            if not _fp_polymod(coeffs, list(tail) + [1], p):
                return False
    return True


@lru_cache(maxsize=None)
def default_modulus(p, e):
    """First monic irreducible of degree ``e`` over F_p in a fixed enumeration order.

    The order enumerates the non-leading coefficients with the constant term
    varying fastest, which gives z^2+z+1 for F_4 and z^3+z+1 for F_8.
    """
    if e == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=e):
        cand = tuple(reversed(tail)) + (1,)
        if is_irreducible_fp(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {e} over F_{p}")


class FqField:
    """The finite field F_q = F_p[z]/(modulus), q = p**e.

    Elements are ints in ``range(q)``; digit i (base p) is the coefficient of z^i.
    """

    _cache = {}

    def __new__(cls, p, e=1, modulus=None):
        modulus = tuple(default_modulus(p, e) if modulus is None else modulus)
        key = (p, e, modulus)
        obj = cls._cache.get(key)
        if obj is None:
            obj = super().__new__(cls)
            obj._setup(p, e, modulus)
            cls._cache[key] = obj
        return obj

    def __getnewargs__(self):
        return (self.p, self.e, self.modulus)

    def _setup(self, p, e, modulus):
        if not _is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if e < 1 or len(modulus) != e + 1 or modulus[-1] % p != 1:
            raise FieldError("modulus must be monic of degree e")
        if e > 1 and not is_irreducible_fp(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.p, self.e, self.modulus = p, e, modulus
        self.q = q = p ** e
        # log / antilog tables
        self._exp = [0] * (2 * q)
        self._log = [None] * q
        for g in range(2, q) if q > 2 else [1]:
            seen = self._powers(g)
            if len(seen) == q - 1:
                break
        self.primitive = g
        for i, v in enumerate(seen):
            self._exp[i] = v
            self._log[v] = i
        for i in range(q - 1, 2 * q):
            self._exp[i] = self._exp[i % (q - 1)]
        self._frob = [[self._pow_slow(a, p ** k) for a in range(q)] for k in range(e)]
        if e > 1:
            self.gen = p  # class of z
        else:
            self.gen = g

    # raw polynomial multiplication used only while building tables
    def _digits(self, a):
        d = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            d.append(r)
        return d

    def _pack(self, d):
        v = 0
        for c in reversed(d):
            v = v * self.p + c % self.p
        return v

    def _mul_slow(self, a, b):
        p, e = self.p, self.e
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        red = _fp_polymod(prod, list(self.modulus), p) if e > 1 else [prod[0] % p]
        return self._pack(red + [0] * (e - len(red)))

    def _pow_slow(self, a, n):
        r, b = 1, a
        while n:
            if n & 1:
                r = self._mul_slow(r, b)
            b = self._mul_slow(b, b)
            n >>= 1
        return r

    def _powers(self, g):
        out, v = [], 1
        while True:
            out.append(v)
            v = self._mul_slow(v, g)
            if v == 1 or len(out) >= self.q:
                return out

    # arithmetic on packed ints
    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if self.e == 1:
            return (a + b) % self.p
        p, r, m = self.p, 0, 1
        while a or b:
            r += ((a % p + b % p) % p) * m
            a //= p
            b //= p
            m *= p
        return r

    def neg(self, a):
        if self.p == 2:
            return a
        if self.e == 1:
            return -a % self.p
        p, r, m = self.p, 0, 1
        while a:
            r += (-(a % p) % p) * m
            a //= p
            m *= p
        return r

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in finite field")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 1 if n == 0 else 0
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def frob(self, a, k=1):
        """a^(p^k); k may be negative."""
        return self._frob[k % self.e][a]

    def from_int(self, n):
        """Image of the integer n under Z -> F_p -> F_q."""
        return n % self.p

    def dot(self, u, v):
        s = 0
        for a, b in zip(u, v):
            if a and b:
                s = self.add(s, self.mul(a, b))
        return s

    def elements(self):
        return range(self.q)

    def __call__(self, value):
        return FqElement(self, value)

    def to_json(self):
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["p"], obj["e"], tuple(obj["modulus"]))

    @classmethod
    def parse(cls, text, modulus=None):
        """Parse a field tag such as ``"2"``, ``"2^2"`` or ``"F_4"``."""
        t = text.strip().removeprefix("F_").removeprefix("GF")
        if "^" in t:
            p, e = (int(x) for x in t.split("^"))
        else:
            n = int(t)
            for p in range(2, n + 1):
                if n % p == 0:
                    break
            e = 0
            while n > 1 and n % p == 0:
                n //= p
                e += 1
            if n != 1:
                raise FieldError(f"{text!r} is not a prime power")
        return cls(p, e, modulus)

    def format(self, a):
        if self.e == 1:
            return str(a)
        if a == 0:
            return "0"
        return f"g^{self._log[a]}" if self.gen == self.primitive else str(a)

    def __repr__(self):
        return f"FqField(p={self.p}, e={self.e}, modulus={self.modulus})"

    def __reduce__(self):
        return (FqField, (self.p, self.e, self.modulus))


class FqElement:
    """An element of F_q with operator overloading."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        self.field = field
        self.value = value % field.q if isinstance(value, int) and 0 <= value < field.q else \
            field.from_int(value)

    def _coerce(self, other):
        if isinstance(other, FqElement):
            if other.field is not self.field:
                raise FieldError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else FqElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else FqElement(self.field, self.field.sub(self.value, o))

    def __rsub__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else FqElement(self.field, self.field.sub(o, self.value))

    def __mul__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else FqElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else FqElement(self.field, self.field.div(self.value, o))

    def __neg__(self):
        return FqElement(self.field, self.field.neg(self.value))

    def __pow__(self, n):
        return FqElement(self.field, self.field.pow(self.value, n))

    def __eq__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else self.value == o

    def __hash__(self):
        return hash((self.field.q, self.value))

    def __bool__(self):
        return self.value != 0

    def is_zero(self):
        return self.value == 0

    def inverse(self):
        return FqElement(self.field, self.field.inv(self.value))

    def frobenius(self, k=1):
        return FqElement(self.field, self.field.frob(self.value, k))

    def __repr__(self):
        return f"FqElement({self.field.format(self.value)} in F_{self.field.q})"


def frobenius(x, k=1):
    """x^(p^k) for an element of F_q or of the lambda field; k may be negative."""
    return x.frobenius(k)


# ---------------------------------------------------------------------------
# polynomials and rational functions in t over F_q

class Poly:
    """Polynomial in t over an :class:`FqField`; ``coeffs`` low degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        self.field = field
        self.coeffs = _trim(list(coeffs))

    @classmethod
    def monomial(cls, field, n, c=1):
        return cls(field, [0] * n + [c])

    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, o):
        F = self.field
        a, b = self.coeffs, o.coeffs
        n = max(len(a), len(b))
        return Poly(F, [F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)])

    def __neg__(self):
        return Poly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        F = self.field
        if isinstance(o, int):
            o = Poly(F, [o])
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return Poly(F)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly(F, out)

    def scale(self, c):
        F = self.field
        return Poly(F, [F.mul(c, x) for x in self.coeffs])

    def shift(self, n):
        return Poly(self.field, [0] * n + self.coeffs) if self.coeffs else self

    def divmod(self, o):
        F = self.field
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.coeffs)
        b = o.coeffs
        inv = F.inv(b[-1])
        qt = [0] * max(len(a) - len(b) + 1, 0)
        while len(a) >= len(b):
            f = F.mul(a[-1], inv)
            sh = len(a) - len(b)
            qt[sh] = f
            for i, bi in enumerate(b):
                a[sh + i] = F.sub(a[sh + i], F.mul(f, bi))
            _trim(a)
        return Poly(F, qt), Poly(F, a)

    def __floordiv__(self, o):
        return self.divmod(o)[0]

    def __mod__(self, o):
        return self.divmod(o)[1]

    def exact_div(self, o):
        qt, r = self.divmod(o)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return qt

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lead()))

    def gcd(self, o):
        a, b = self, o
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def frobenius(self, k=1):
        """Apply x -> x^(p^k) to the coefficients only."""
        F = self.field
        return Poly(F, [F.frob(c, k) for c in self.coeffs])

    def __call__(self, x):
        F = self.field
        r = 0
        for c in reversed(self.coeffs):
            r = F.add(F.mul(r, x), c)
        return r

    def __eq__(self, o):
        return isinstance(o, Poly) and self.coeffs == o.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __repr__(self):
        return f"Poly({self.format()})"

    def format(self, var="t"):
        F = self.field
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            cs = F.format(c)
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            else:
                terms.append(f"{cs}*{mono}")
        return " + ".join(terms) if terms else "0"


class RatFunc:
    """Reduced quotient num/den of polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce=True):
        if den is None:
            den = Poly(num.field, [1])
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce:
            if num.is_zero():
                den = Poly(num.field, [1])
            else:
                g = num.gcd(den)
                if g.degree() > 0:
                    num, den = num // g, den // g
            c = num.field.inv(den.lead())
            num, den = num.scale(c), den.scale(c)
        self.num, self.den = num, den

    @property
    def field(self):
        return self.num.field

    @classmethod
    def const(cls, field, c):
        return cls(Poly(field, [c]))

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, o):
        if isinstance(o, Poly):
            o = RatFunc(o)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if isinstance(o, Poly):
            o = RatFunc(o)
        return RatFunc(self.num * o.num, self.den * o.den)

    def __truediv__(self, o):
        if isinstance(o, Poly):
            o = RatFunc(o)
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def frobenius(self, k=1):
        return RatFunc(self.num.frobenius(k), self.den.frobenius(k))

    def __eq__(self, o):
        if isinstance(o, RatFunc):
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def valuation(self):
        if self.is_zero():
            return None
        return self.num.valuation() - self.den.valuation()

    def laurent(self, prec):
        """Laurent expansion at t = 0 as ``(v, coeffs)`` meaning sum coeffs[i] t^(v+i), i < prec - v."""
        F = self.field
        if self.is_zero():
            return 0, []
        vd = self.den.valuation()
        den = Poly(F, self.den.coeffs[vd:])
        v = -vd
        n = prec - v
        if n <= 0:
            return v, []
        return v, series_div(F, self.num.coeffs[:n], den.coeffs, n)

    def format(self):
        if self.den.degree() == 0:
            return self.num.format()
        return f"({self.num.format()})/({self.den.format()})"

    def __repr__(self):
        return f"RatFunc({self.format()})"


def series_mul(F, a, b, n):
    """Product of two truncated power series (lists) modulo t^n."""
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j in range(min(len(b), n - i)):
                y = b[j]
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return out


def series_div(F, a, b, n):
    """a / b modulo t^n for power series with b[0] != 0."""
    if not b or b[0] == 0:
        raise ZeroDivisionError("power series with non-unit constant term")
    inv0 = F.inv(b[0])
    out = [0] * n
    a = list(a[:n]) + [0] * max(0, n - len(a))
    for k in range(n):
        s = a[k]
        for j in range(1, min(k, len(b) - 1) + 1):
            if b[j] and out[k - j]:
                s = F.sub(s, F.mul(b[j], out[k - j]))
        out[k] = F.mul(s, inv0)
    return out


# ---------------------------------------------------------------------------
# the perfect field F_p(lambda^{1/p^oo})

def _check_exponent(e, p):
    d = e.denominator
    while d % p == 0:
        d //= p
    if d != 1:
        raise FieldError(f"exponent {e} does not have a {p}-power denominator")


class LambdaElement:
    """A finite sum of c * lambda^e with e in Z[1/p] and c in F_p (a Laurent polynomial).

    Exponents are kept as reduced :class:`fractions.Fraction` values, i.e. the
    canonical pair (n, k) with e = n / p**k.
    """

    __slots__ = ("p", "terms")

    def __init__(self, p, terms=None):
        self.p = p
        clean = {}
        for e, c in (terms or {}).items():
            e = Fraction(e)
            c %= p
            if c:
                _check_exponent(e, p)
                clean[e] = c
        self.terms = clean

    @classmethod
    def one(cls, p):
        return cls(p, {Fraction(0): 1})

    @classmethod
    def monomial(cls, p, e, c=1):
        return cls(p, {Fraction(e): c})

    def is_zero(self):
        return not self.terms

    def _same(self, o):
        if isinstance(o, int):
            return LambdaElement(self.p, {Fraction(0): o})
        if not isinstance(o, LambdaElement) or o.p != self.p:
            raise FieldError("lambda elements of different characteristic")
        return o

    def __add__(self, o):
        o = self._same(o)
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = (t.get(e, 0) + c) % self.p
        return LambdaElement(self.p, t)

    __radd__ = __add__

    def __neg__(self):
        return LambdaElement(self.p, {e: -c for e, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._same(o))

    def __rsub__(self, o):
        return self._same(o) - self

    def __mul__(self, o):
        o = self._same(o)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = e1 + e2
                t[e] = (t.get(e, 0) + c1 * c2) % self.p
        return LambdaElement(self.p, t)

    __rmul__ = __mul__

    def frobenius(self, k=1):
        f = Fraction(self.p) ** k
        return LambdaElement(self.p, {e * f: c for e, c in self.terms.items()})

    def _as_poly(self, scale, shift):
        """Coefficient list in u = lambda^(1/scale), after multiplying by u^shift."""
        out = {}
        for e, c in self.terms.items():
            n = e * scale
            assert n.denominator == 1
            out[int(n) + shift] = c
        return out

    def exact_div(self, o):
        """Exact quotient in the Laurent ring; raises ArithmeticError if inexact."""
        o = self._same(o)
        if o.is_zero():
            raise ZeroDivisionError("division by zero lambda element")
        if self.is_zero():
            return LambdaElement(self.p)
        p = self.p
        scale = 1
        for e in itertools.chain(self.terms, o.terms):
            while (e * scale).denominator != 1:
                scale *= p
        a = self._as_poly(scale, 0)
        b = o._as_poly(scale, 0)
        bmin, bmax = min(b), max(b)
        inv = pow(b[bmax], -1, p)
        quo = {}
        a = dict(a)
        while a:
            top = max(a)
            if top - bmax < min(a) - bmin:
                raise ArithmeticError("inexact division of lambda elements")
            f = a[top] * inv % p
            sh = top - bmax
            quo[sh] = f
            for k, v in b.items():
                a[k + sh] = (a.get(k + sh, 0) - f * v) % p
                if a[k + sh] == 0:
                    del a[k + sh]
        return LambdaElement(p, {Fraction(k, scale): c for k, c in quo.items()})

    def __eq__(self, o):
        if isinstance(o, int):
            o = LambdaElement(self.p, {Fraction(0): o})
        return isinstance(o, LambdaElement) and self.p == o.p and self.terms == o.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def to_json(self):
        out = []
        for e in sorted(self.terms):
            k, d = 0, e.denominator
            while d > 1:
                d //= self.p
                k += 1
            out.append({"num": e.numerator, "pow": k, "coeff": self.terms[e]})
        return {"terms": out}

    @classmethod
    def from_json(cls, p, obj):
        return cls(p, {Fraction(t["num"], p ** t["pow"]): t["coeff"] for t in obj["terms"]})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            parts.append(("" if c == 1 else f"{c}*") + f"lam^({e})")
        return " + ".join(parts)


class LambdaRational:
    """A quotient of :class:`LambdaElement` values; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = LambdaElement.one(num.p)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = num, den

    @property
    def p(self):
        return self.num.p

    def _lift(self, o):
        if isinstance(o, LambdaRational):
            return o
        if isinstance(o, (LambdaElement, int)):
            return LambdaRational(self.num._same(o))
        return NotImplemented

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, o):
        o = self._lift(o)
        return LambdaRational(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return LambdaRational(-self.num, self.den)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __mul__(self, o):
        o = self._lift(o)
        return LambdaRational(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._lift(o)
        return LambdaRational(self.num * o.den, self.den * o.num)

    def frobenius(self, k=1):
        return LambdaRational(self.num.frobenius(k), self.den.frobenius(k))

    def __eq__(self, o):
        o = self._lift(o)
        if o is NotImplemented:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    __hash__ = None

    def __repr__(self):
        return f"({self.num!r})/({self.den!r})"


# ---------------------------------------------------------------------------
# null spaces

class _FqRing:
    def __init__(self, F):
        self.F = F
        self.zero, self.one = 0, 1

    def is_zero(self, a):
        return a == 0

    def mul(self, a, b):
        return self.F.mul(a, b)

    def sub(self, a, b):
        return self.F.sub(a, b)

    def neg(self, a):
        return self.F.neg(a)

    def exact_div(self, a, b):
        return self.F.div(a, b)


class _ObjRing:
    """Ring of objects with +, -, * and ``exact_div``."""

    def __init__(self, zero, one):
        self.zero, self.one = zero, one

    def is_zero(self, a):
        return a.is_zero()

    def mul(self, a, b):
        return a * b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def exact_div(self, a, b):
        return a.exact_div(b)


def _bareiss_nullspace(rows, ncols, R):
    """Fraction-free Gauss-Jordan; returns null vectors over the ring R."""
    A = [list(r) for r in rows]
    m = len(A)
    prev = R.one
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if not R.is_zero(A[i][c])), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pv = A[r][c]
        for i in range(m):
            if i == r:
                continue
            a_ic = A[i][c]
            row = A[i]
            for j in range(ncols):
                if j == c:
                    continue
                val = R.sub(R.mul(pv, row[j]), R.mul(a_ic, A[r][j]))
                row[j] = R.exact_div(val, prev)
            row[c] = R.zero
        prev = pv
        pivots.append(c)
        r += 1
        if r == m:
            break
    # after fraction-free Gauss-Jordan every pivot entry equals ``prev``
    basis = []
    pivset = set(pivots)
    for f in range(ncols):
        if f in pivset:
            continue
        v = [R.zero] * ncols
        v[f] = prev
        for i, c in enumerate(pivots):
            v[c] = R.neg(A[i][f])
        basis.append(v)
    return basis


def _kind(x):
    if isinstance(x, FqElement):
        return ("fq", x.field)
    if isinstance(x, (RatFunc, Poly)):
        return ("ratfunc", x.field)
    if isinstance(x, (LambdaElement, LambdaRational)):
        return ("lambda", x.p)
    raise FieldError(f"unsupported matrix entry {x!r}")


def solve_homogeneous(matrix, field=None):
    """Basis of the right null space of ``matrix``.

    Entries may be packed ints (``field`` an :class:`FqField` is then required),
    :class:`FqElement`, :class:`RatFunc`/:class:`Poly`, or
    :class:`LambdaElement`/:class:`LambdaRational`.  The basis is returned with
    entries of the same kind as the input (ring-valued kinds come back with
    denominator 1).  An empty list means only the zero solution exists.
    """
    rows = [list(r) for r in matrix]
    if not rows:
        return []
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise FieldError("ragged matrix")
    if field is not None:
        R = _FqRing(field)
        for r in rows:
            for x in r:
                if not isinstance(x, int) or not 0 <= x < field.q:
                    raise FieldError("entry outside the declared field")
        return _bareiss_nullspace(rows, ncols, R)
    kinds = {_kind(x) for r in rows for x in r}
    if len(kinds) != 1:
        raise FieldError("inconsistent field descriptors across entries")
    kind, desc = kinds.pop()
    if kind == "fq":
        basis = _bareiss_nullspace([[x.value for x in r] for r in rows], ncols, _FqRing(desc))
        return [[FqElement(desc, x) for x in v] for v in basis]
    if kind == "ratfunc":
        F = desc
        prows = []
        for r in rows:
            r = [x if isinstance(x, RatFunc) else RatFunc(x) for x in r]
            den = Poly(F, [1])
            for x in r:
                den = den * (x.den // den.gcd(x.den))
            prows.append([x.num * (den // x.den) for x in r])
        basis = _bareiss_nullspace(prows, ncols, _ObjRing(Poly(F), Poly(F, [1])))
        out = []
        for v in basis:
            g = Poly(F)
            for x in v:
                g = g.gcd(x) if not x.is_zero() else g
            out.append([RatFunc(x // g if not g.is_zero() else x) for x in v])
        return out
    p = desc
    lrows = []
    for r in rows:
        r = [x if isinstance(x, LambdaRational) else LambdaRational(x) for x in r]
        den = LambdaElement.one(p)
        for x in r:
            den = den * x.den
        lrows.append([x.num * den.exact_div(x.den) for x in r])
    basis = _bareiss_nullspace(lrows, ncols, _ObjRing(LambdaElement(p), LambdaElement.one(p)))
    return [[LambdaRational(x) for x in v] for v in basis]


def rank_fq(rows, F):
    """Rank of a matrix of packed F_q ints (ordinary elimination)."""
    A = [list(r) for r in rows]
    if not A:
        return 0
    n = len(A[0])
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = F.inv(A[rank][c])
        A[rank] = [F.mul(inv, x) for x in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def solve_fq(A, b, F):
    """One solution x of A x = b over F_q (packed ints), or None if inconsistent."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [list(A[i]) + [b[i]] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, x) for x in M[r]]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    for i in range(r, m):
        if M[i][n]:
            return None
    x = [0] * n
    for i, c in enumerate(pivots):
        x[c] = M[i][n]
    return x
