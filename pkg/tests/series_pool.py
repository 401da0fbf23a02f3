"""Test series paired with independent coefficient oracles.

Each entry knows its support explicitly (an enumeration of (exponent,
coefficient) pairs up to a bound), so pointwise and convolution checks never
go through the automaton machinery under test.
"""

import random
from fractions import Fraction

from autoseries import series as S
from autoseries.fields import FqField


class Oracle:
    def __init__(self, name, series, terms):
        self.name = name
        self.series = series
        self._terms = terms  # function bound -> {exponent: coeff} for exponents <= bound
        self.field = series.field

    def terms(self, bound):
        return {e: c for e, c in self._terms(Fraction(bound)).items() if c and e <= bound}

    def coeff(self, i):
        i = Fraction(i)
        return self.terms(i).get(i, 0)


def _powers(p, bound, start=1):
    out, k = [], Fraction(start)
    while k <= bound:
        out.append(k)
        k *= p
    return out


def finite(F, terms, name=None):
    terms = {Fraction(e): c for e, c in terms.items() if c}
    return Oracle(name or f"finite{sorted(terms)}", S.from_terms(F, terms),
                  lambda bound: dict(terms))


def power_sparse(F):
    return Oracle("power-sparse", S.power_sparse(F),
                  lambda bound: {e: 1 for e in _powers(F.p, bound)})


def geometric(F, c=1):
    def terms(bound):
        n = int(bound) if bound >= 0 else -1
        return {Fraction(i): c for i in range(n + 1)}
    return Oracle(f"geometric*{c}", S.geometric(F, c), terms)


def rescaled(o, a, b=0):
    """Same inner data read with x_i = inner(a i + b): exponents (e - b)/a."""
    x = o.series
    q = S.QuasiAutomaticSeries(x.inner, x.a * a, x.a * b + x.b)

    def terms(bound):
        # inner exponent j maps to i = (j - b) / a
        top = a * bound + b
        return {(e - b) / a: c for e, c in o.terms(top).items()}
    return Oracle(f"({o.name})@({a},{b})", q, terms)


def random_finite(F, rng, n=4):
    p = F.p
    terms = {}
    for _ in range(n):
        e = Fraction(rng.randrange(-3 * p, 6 * p), p ** rng.randint(0, 2))
        terms[e] = rng.randrange(1, F.q)
    return finite(F, terms)


def pool(F, rng):
    """A varied list of oracles over F."""
    out = [geometric(F), power_sparse(F), random_finite(F, rng), random_finite(F, rng, 6)]
    if F.q > 2:
        out.append(geometric(F, F.q - 1))
    out.append(rescaled(power_sparse(F), 3))
    out.append(rescaled(geometric(F), 1, 2))
    return out


def sample_indices(p, rng, count, extra=()):
    """Rationals in [-3, 40) with p-power, 3*p-power and other denominators, plus extras."""
    out = list(extra)
    while len(out) < count:
        kind = rng.random()
        if kind < 0.4:
            out.append(Fraction(rng.randrange(-3, 40)))
        elif kind < 0.8:
            k = rng.randint(1, 3)
            out.append(Fraction(rng.randrange(-3 * p ** k, 40 * p ** k), p ** k))
        elif kind < 0.95:
            out.append(Fraction(rng.randrange(-9, 120), 3 * p ** rng.randint(0, 2)))
        else:
            out.append(Fraction(rng.randrange(1, 60), 7))
    return out[:max(count, len(extra))]


def convolution(F, xo, yo, i):
    """Coefficient at i of the Cauchy product, from the explicit supports."""
    ylow = min(yo.terms(i + 100), default=None)
    xlow = min(xo.terms(i + 100), default=None)
    if ylow is None or xlow is None:
        return 0
    s = 0
    xs = xo.terms(i - ylow)
    for e, c in xs.items():
        d = yo.coeff(i - e)
        if d:
            s = F.add(s, F.mul(c, d))
    return s


FIELDS = [FqField(2), FqField(3), FqField(2, 2)]


def default_rng(seed=7):
    return random.Random(seed)
