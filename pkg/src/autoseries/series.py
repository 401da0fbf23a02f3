"""Automatic and quasi-automatic generalized power series over F_q.

An :class:`AutomaticSeries` stores biautomatic data (iota, pi, f1, f2): the
coefficient at the value of a canonical word ``s1 . s2`` is

    pi o f1(rev(s1)) o f2(s2) o iota  applied to 1,

with f1 twisted by +1 and f2 by -1.  On a vector this means the fractional
digits act first, least significant first, then the integer digits, most
significant first.  A :class:`QuasiAutomaticSeries` adds an affine support
shift: its coefficient at i is the inner coefficient at a*i + b.

Closure operations that move exponents (reindexing, Frobenius twists,
substitutions, products) go through finite-state coefficient functions and
the carry engine of :mod:`autoseries.reindex`; sums and Hadamard products are
direct sums and tensor products of the data.  Every constructor returns data
reduced to its reachable and observable part.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .codec import RADIX, encode_frac, in_z_inv_p
from .dfao import (DEAD, Dfao, explore, lp_dfao, minimize, product,
                   dedekind_cut_dfao, reverse_after_dot, reverse_function)
from .errors import ResourceError
from .fields import FqField
from .reindex import combine_reversed, pad_tolerant_reversed
from .semilinear import (ComposedFunction, SemilinearMap, block_diag, frob_mat, frob_vec,
                         identity, kron, kron_vec, mat_mul, mat_vec, transpose_mat, vec_mat)

DEFAULT_MONOID_CAP = 2 ** 18


class FieldMismatch(ValueError):
    """Series over different coefficient fields."""


# ---------------------------------------------------------------------------
# span bookkeeping for reductions

class _Span:
    """Incrementally maintained row-echelon basis with coordinate recovery."""

    def __init__(self, F, n):
        self.F, self.n = F, n
        self.rows = []      # reduced vectors with a pivot
        self.pivots = []
        self.combos = []    # each reduced row as a combination of accepted vectors
        self.accepted = []

    def _reduce(self, v):
        F = self.F
        v = list(v)
        combo = [0] * len(self.accepted)
        for row, piv, cmb in zip(self.rows, self.pivots, self.combos):
            c = v[piv]
            if c:
                for j in range(self.n):
                    if row[j]:
                        v[j] = F.sub(v[j], F.mul(c, row[j]))
                for j, x in enumerate(cmb):
                    if x:
                        combo[j] = F.add(combo[j], F.mul(c, x))
        return v, combo

    def add(self, v):
        """Add v if independent; return True if it was added."""
        F = self.F
        r, combo = self._reduce(v)
        piv = next((j for j, x in enumerate(r) if x), None)
        if piv is None:
            return False
        inv = F.inv(r[piv])
        r = [F.mul(inv, x) for x in r]
        self.accepted.append(tuple(v))
        # r = v - sum combo_j accepted_j, scaled by inv
        cmb = [F.neg(F.mul(inv, c)) for c in combo] + [inv]
        for c in self.combos:
            c.append(0)
        self.rows.append(r)
        self.pivots.append(piv)
        self.combos.append(cmb)
        return True

    def coords(self, v):
        """Coordinates of v in the accepted vectors (v must lie in the span)."""
        r, combo = self._reduce(v)
        if any(r):
            raise ValueError("vector outside the span")
        return tuple(combo) + (0,) * (len(self.accepted) - len(combo))

    def __len__(self):
        return len(self.accepted)


def _closure(F, seeds, maps):
    """Basis of the smallest F_q-subspace containing ``seeds`` and stable under ``maps``."""
    n = len(seeds[0]) if seeds else 0
    span = _Span(F, n)
    for v in seeds:
        span.add(v)
    i = 0
    while i < len(span.accepted):
        b = span.accepted[i]
        for m in maps:
            span.add(m.apply(b))
        i += 1
    return list(span.accepted)


def _restrict(F, iota, pi, maps):
    """Restrict data to the smallest subspace containing iota and stable under ``maps``.

    ``maps`` is a list of (key, matrix, twist).  Returns new (iota, pi, maps).
    """
    n = len(iota)
    span = _Span(F, n)
    if not span.add(iota):
        return None
    i = 0
    while i < len(span.accepted):
        b = span.accepted[i]
        for _, M, k in maps:
            span.add(mat_vec(F, M, frob_vec(F, b, k)))
        i += 1
    basis = span.accepted
    r = len(basis)
    new_maps = []
    for key, M, k in maps:
        cols = [span.coords(mat_vec(F, M, frob_vec(F, b, k))) for b in basis]
        new_maps.append((key, tuple(tuple(cols[j][i] for j in range(r)) for i in range(r)), k))
    new_iota = span.coords(iota)
    new_pi = tuple(F.dot(pi, b) for b in basis)
    return new_iota, new_pi, new_maps


# ---------------------------------------------------------------------------

class AutomaticSeries:
    """Biautomatic data (iota, pi, f1, f2) over F_q with support in Z[1/p] >= 0."""

    def __init__(self, field, iota, pi, f1, f2):
        self.field = field
        self.iota = tuple(iota)
        self.pi = tuple(pi)
        if not isinstance(f1, ComposedFunction):
            f1 = ComposedFunction(field, {a: SemilinearMap(field, m, 1) for a, m in f1.items()})
        if not isinstance(f2, ComposedFunction):
            f2 = ComposedFunction(field, {a: SemilinearMap(field, m, -1) for a, m in f2.items()})
        self.f1, self.f2 = f1, f2
        self._stable = None
        d = len(self.iota)
        if len(self.pi) != d or f1.dim not in (0, d) or f2.dim not in (0, d):
            raise ValueError("inconsistent dimensions in series data")
        if set(f1.maps) != set(range(self.p)) or set(f2.maps) != set(range(self.p)):
            raise ValueError("every digit needs a map")

    @property
    def p(self):
        return self.field.p

    @property
    def dim(self):
        return len(self.iota)

    def coeff_word(self, word):
        """Evaluate the data on a word ``s1 . s2`` (no canonicality check)."""
        F = self.field
        j = word.index(RADIX)
        v = self.iota
        for c in reversed(word[j + 1:]):
            v = self.f2.maps[c].apply(v)
        for d in word[:j]:
            v = self.f1.maps[d].apply(v)
        return F.dot(self.pi, v)

    def coefficient(self, r):
        r = Fraction(r)
        if r < 0 or not in_z_inv_p(r, self.p):
            return 0
        return self.coeff_word(encode_frac(r, self.p))

    @property
    def stable(self):
        """Certificate that padded words give the same value as canonical ones.

        Coefficient queries always canonicalize, so this is informational.  A
        trailing fractional zero acts first, by f2(0) on iota; a leading integer
        zero acts by f1(0) on the vectors reachable after the fractional part.
        Both differences must be invisible to pi after any further digits.
        """
        if self._stable is None:
            F = self.field
            f1 = [m for _, m in sorted(self.f1.maps.items())]
            f2 = [m for _, m in sorted(self.f2.maps.items())]
            trail = [tuple(F.sub(a, b) for a, b in zip(self.f2.maps[0].apply(self.iota), self.iota))]
            W = _closure(F, _closure(F, trail, f2), f1)
            V2 = _closure(F, [self.iota], f2)
            units = [F.p ** j for j in range(F.e)]
            lead = []
            for b in V2:
                for u in units:
                    v = tuple(F.mul(u, c) for c in b)
                    lead.append(tuple(F.sub(x, y) for x, y in zip(self.f1.maps[0].apply(v), v)))
            W += _closure(F, lead, f1)
            self._stable = not any(F.dot(self.pi, w) for w in W)
        return self._stable

    def _maps(self):
        out = [((1, a), m.matrix, 1) for a, m in sorted(self.f1.maps.items())]
        out += [((2, a), m.matrix, -1) for a, m in sorted(self.f2.maps.items())]
        return out

    @classmethod
    def _from_maps(cls, F, iota, pi, maps):
        f1 = {key[1]: M for key, M, _ in maps if key[0] == 1}
        f2 = {key[1]: M for key, M, _ in maps if key[0] == 2}
        return cls(F, iota, pi, f1, f2)

    def reduce(self):
        """Equivalent data restricted to reachable vectors and observable functionals."""
        F = self.field
        res = _restrict(F, self.iota, self.pi, self._maps())
        if res is None or not any(res[1]):
            return zero_automatic(F)
        iota, pi, maps = res
        # dual pass on the transposed data
        tmaps = [(key, frob_mat(F, transpose_mat(M), -k), -k) for key, M, k in maps]
        res = _restrict(F, pi, iota, tmaps)
        if res is None:
            return zero_automatic(F)
        tpi, tiota, tmaps = res
        maps = [(key, frob_mat(F, transpose_mat(M), -k), -k) for key, M, k in tmaps]
        return AutomaticSeries._from_maps(F, tiota, tpi, maps)

    def frobenius_data(self, k):
        """Data computing phi^k of every coefficient."""
        F = self.field
        return AutomaticSeries(F, frob_vec(F, self.iota, k), frob_vec(F, self.pi, k),
                               self.f1.frobenius(k), self.f2.frobenius(k))

    def to_json(self):
        return {"field": self.field.to_json(), "dim": self.dim, "iota": list(self.iota),
                "pi": list(self.pi), "f1": self.f1.to_json(), "f2": self.f2.to_json()}

    @classmethod
    def from_json(cls, obj):
        F = FqField.from_json(obj["field"])
        return cls(F, obj["iota"], obj["pi"], ComposedFunction.from_json(F, obj["f1"]),
                   ComposedFunction.from_json(F, obj["f2"]))

    def __repr__(self):
        return f"AutomaticSeries(F_{self.field.q}, dim={self.dim})"


def zero_automatic(F):
    p = F.p
    z = ((0,),)
    return AutomaticSeries(F, (0,), (0,), {a: z for a in range(p)}, {a: z for a in range(p)})


class QuasiAutomaticSeries:
    """Sum of x_i t^i where x_i is the inner coefficient at a*i + b."""

    def __init__(self, inner, a=1, b=0):
        if a < 1 or b < 0 or int(a) != a or int(b) != b:
            raise ValueError("need a positive integer a and a nonnegative integer b")
        self.inner, self.a, self.b = inner, int(a), int(b)
        self.metadata = {}

    @property
    def field(self):
        return self.inner.field

    @property
    def p(self):
        return self.inner.p

    @property
    def dim(self):
        return self.inner.dim

    def coeff(self, i):
        j = self.a * Fraction(i) + self.b
        return self.inner.coefficient(j)

    __getitem__ = coeff

    def support_bound(self):
        """Every exponent of the support is at least this value."""
        return Fraction(-self.b, self.a)

    def truncation(self, r, grid):
        """Dict of nonzero coefficients at exponents i < r with a*i + b on the grid (1/p^grid)Z."""
        p = self.p
        out = {}
        top = self.a * Fraction(r) + self.b
        step = Fraction(1, p ** grid)
        j = Fraction(0)
        while j < top:
            c = self.inner.coefficient(j)
            if c:
                out[(j - self.b) / self.a] = c
            j += step
        return out

    def to_json(self):
        return {"a": self.a, "b": self.b, **self.inner.to_json()}

    @classmethod
    def from_json(cls, obj):
        return cls(AutomaticSeries.from_json(obj), obj.get("a", 1), obj.get("b", 0))

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    def debug_dump(self, n=20, grid=3, scan=4096):
        """First n nonzero terms on the grid p^-grid, looking at most `scan` grid points."""
        F = self.field
        lines = [f"series over F_{F.q}, a={self.a}, b={self.b}, dim={self.dim}"]
        shown = 0
        j = Fraction(0)
        step = Fraction(1, self.p ** grid)
        while shown < n and j < scan * step:
            c = self.inner.coefficient(j)
            if c:
                lines.append(f"  t^{(j - self.b) / self.a}: {F.format(c)}")
                shown += 1
            j += step
        return "\n".join(lines)

    def __repr__(self):
        return f"QuasiAutomaticSeries(F_{self.field.q}, a={self.a}, b={self.b}, dim={self.dim})"


def _quasi(x):
    if isinstance(x, QuasiAutomaticSeries):
        return x
    return QuasiAutomaticSeries(x)


def coeff(x, i):
    return _quasi(x).coeff(i)


# ---------------------------------------------------------------------------
# automata <-> series

def from_inward_dfao(M, F):
    """Series whose coefficient at s1.s2 is the output of M on ``rev(s2) . s1``.

    The data are 0/1 matrices on one coordinate per (state, phase); the
    radix transition is folded into the first integer digit and into pi.
    """
    p = F.p
    di = M.alphabet.index(RADIX)
    pre = [M.q0]
    seen = {M.q0}
    for q in pre:
        for a in range(p):
            t = M.step(q, a)
            if t not in seen:
                seen.add(t)
                pre.append(t)
    post = []
    pseen = set()
    frontier = []
    for q in pre:
        t = M.delta[q][di]
        for a in range(1, p):
            u = M.step(t, a)
            if u not in pseen:
                pseen.add(u)
                frontier.append(u)
    for q in frontier:
        post.append(q)
        for a in range(p):
            t = M.step(q, a)
            if t not in pseen:
                pseen.add(t)
                frontier.append(t)
    index = {("pre", q): i for i, q in enumerate(pre)}
    for q in post:
        index[("post", q)] = len(index)
    n = len(index)

    def mat(pairs):
        rows = [[0] * n for _ in range(n)]
        for src, dst in pairs:
            if dst in index:
                rows[index[dst]][index[src]] = 1
        return tuple(tuple(r) for r in rows)

    f2 = {a: mat([(("pre", q), ("pre", M.step(q, a))) for q in pre]) for a in range(p)}
    f1 = {}
    for a in range(p):
        pairs = [(("post", q), ("post", M.step(q, a))) for q in post]
        pairs += [(("pre", q), ("post", M.step(M.delta[q][di], a))) for q in pre]
        f1[a] = mat(pairs)
    pi = [0] * n
    for q in pre:
        pi[index[("pre", q)]] = _as_field(M.outputs[M.delta[q][di]])
    for q in post:
        pi[index[("post", q)]] = _as_field(M.outputs[q])
    iota = [0] * n
    iota[index[("pre", M.q0)]] = 1
    return AutomaticSeries(F, iota, pi, f1, f2).reduce()


def _as_field(o):
    if o is True:
        return 1
    if o is False or o is None:
        return 0
    return o


def inward_dfao(x, cap=DEFAULT_MONOID_CAP):
    """Automaton on ``rev(s2) . s1`` computing the inner coefficient (vector tracking)."""
    x = x.inner if isinstance(x, QuasiAutomaticSeries) else x
    F = x.field

    def step(k, a):
        if k is DEAD:
            return DEAD
        phase, v = k
        if a == RADIX:
            return DEAD if phase else (1, v)
        m = x.f1.maps[a] if phase else x.f2.maps[a]
        return (phase, m.apply(v))

    def output(k):
        if k is DEAD or k[0] == 0:
            return 0
        return F.dot(x.pi, k[1])

    A = tuple(range(F.p)) + (RADIX,)
    return minimize(explore(A, (0, x.iota), step, output, cap=cap, what="vector tracking"))


def reversed_dfao(x, cap=DEFAULT_MONOID_CAP):
    """Pad-tolerant automaton on ``rev(s2) . rev(s1)`` computing the inner coefficient."""
    return pad_tolerant_reversed(reverse_after_dot(inward_dfao(x, cap), cap), cap)


def from_reversed_dfao(M, F, cap=DEFAULT_MONOID_CAP):
    return from_inward_dfao(reverse_after_dot(M, cap), F)


def from_standard_dfao(M, F, cap=DEFAULT_MONOID_CAP):
    """Series from an automaton reading canonical words in standard order."""
    rev = reverse_function(M, cap)
    return from_inward_dfao(reverse_after_dot(rev, cap), F)


def coefficient_dfao(x, cap=DEFAULT_MONOID_CAP, canonical_only=True):
    """Standard-order automaton of the inner coefficient, by monoid tracking.

    Before the mark the state is the accumulated map f1 (matrix, twist mod e);
    at the mark it collapses to the functional pi o f1; after the mark the
    functional absorbs f2 digit by digit.
    """
    x = x.inner if isinstance(x, QuasiAutomaticSeries) else x
    F = x.field
    e = F.e
    d = x.dim

    def step(k, a):
        if k is DEAD:
            return DEAD
        if k[0] == 0:
            _, A, tw = k
            if a == RADIX:
                return (1, vec_mat(F, x.pi, A), tw)
            m = x.f1.maps[a]
            return (0, mat_mul(F, m.matrix, frob_mat(F, A, 1)), (tw + 1) % e)
        if a == RADIX:
            return DEAD
        _, r, tw = k
        m = x.f2.maps[a]
        return (1, vec_mat(F, r, frob_mat(F, m.matrix, tw)), (tw - 1) % e)

    def output(k):
        if k is DEAD or k[0] == 0:
            return 0
        _, r, tw = k
        return F.dot(r, frob_vec(F, x.iota, tw))

    A = tuple(range(F.p)) + (RADIX,)
    M = explore(A, (0, identity(d), 0), step, output, cap=cap, what="monoid tracking")
    if canonical_only:
        M = product(M, lp_dfao(F.p), lambda v, ok: v if ok else 0)
    return minimize(M)


def support_dfao(x, cap=DEFAULT_MONOID_CAP):
    """Accepts canonical words (standard order) where the inner coefficient is nonzero."""
    return minimize(coefficient_dfao(x, cap).map_outputs(lambda v: v != 0))


def functional_states(x, cap=DEFAULT_MONOID_CAP):
    """Distinct states (phase, functional, twist mod e) of the outward automaton.

    The outward automaton reads ``rev(s1) . s2``; its state is the functional
    pi o f1(rev(s1)) o f2(prefix of s2) together with the accumulated twist.
    Returns the set of reachable (functional, twist) pairs.
    """
    x = x.inner if isinstance(x, QuasiAutomaticSeries) else x
    F = x.field
    start = (0, x.pi, 0)
    seen = {start}
    todo = [start]
    while todo:
        phase, r, tw = todo.pop()
        nxt = []
        if phase == 0:
            nxt.append((1, r, tw))
        maps = x.f2.maps if phase else x.f1.maps
        for m in maps.values():
            nxt.append((phase, vec_mat(F, r, frob_mat(F, m.matrix, tw)), (tw + m.twist) % F.e))
        for k in nxt:
            if k not in seen:
                if len(seen) >= cap:
                    raise ResourceError("functional tracking", cap)
                seen.add(k)
                todo.append(k)
    return {(r, tw) for _, r, tw in seen}


# ---------------------------------------------------------------------------
# basic series

def zero_series(F):
    return QuasiAutomaticSeries(zero_automatic(F))


def _finite_inward(F, table):
    """Inward automaton for a finite table {canonical word: value}."""
    inward = {}
    for w, c in table.items():
        j = w.index(RADIX)
        inward[tuple(reversed(w[j + 1:])) + (RADIX,) + w[:j]] = c
    prefixes = {()}
    for w in inward:
        for i in range(len(w) + 1):
            prefixes.add(w[:i])

    def step(k, a):
        if k is DEAD:
            return DEAD
        nk = k + (a,)
        return nk if nk in prefixes else DEAD

    A = tuple(range(F.p)) + (RADIX,)
    return minimize(explore(A, (), step, lambda k: 0 if k is DEAD else inward.get(k, 0)))


def from_terms(F, terms):
    """Series with finitely many terms {exponent: coefficient} (exponents in Z[1/p])."""
    terms = {Fraction(e): c for e, c in terms.items() if c}
    if not terms:
        return zero_series(F)
    low = min(terms)
    b = max(0, -math.floor(low))
    table = {}
    for e, c in terms.items():
        if not in_z_inv_p(e, F.p):
            raise ValueError(f"exponent {e} is not in Z[1/{F.p}]")
        table[encode_frac(e + b, F.p)] = c
    return QuasiAutomaticSeries(from_inward_dfao(_finite_inward(F, table), F), 1, b)


def monomial(F, e, c=1):
    return from_terms(F, {Fraction(e): c})


def polynomial(F, coeffs):
    """Series of a polynomial given by its coefficient list (low degree first)."""
    return from_terms(F, {i: c for i, c in enumerate(coeffs) if c})


def geometric(F, c=1):
    """The series sum_{n >= 0} c t^n."""
    p = F.p
    one = ((1,),)
    zero = ((0,),)
    inner = AutomaticSeries(F, (1,), (c,), {a: one for a in range(p)},
                            {a: zero for a in range(p)})
    return QuasiAutomaticSeries(inner)


def from_coefficient_function(F, f, order="standard", cap=DEFAULT_MONOID_CAP):
    """Series from an automaton with F_q outputs in the given reading order."""
    if order == "standard":
        return QuasiAutomaticSeries(from_standard_dfao(f, F, cap))
    if order == "reversed":
        return QuasiAutomaticSeries(from_reversed_dfao(f, F, cap))
    if order == "inward":
        return QuasiAutomaticSeries(from_inward_dfao(f, F))
    raise ValueError(f"unknown order {order!r}")


def power_sparse(F, p_base=None):
    """sum_{n >= 0} t^(p^n): the standard-order language 10*. over the digits."""
    p = F.p

    def step(k, a):
        if k == "dead":
            return k
        if k == 0:
            return 1 if a == 1 else "dead"
        if k == 1:
            if a == 0:
                return 1
            return 2 if a == RADIX else "dead"
        return "dead"

    A = tuple(range(p)) + (RADIX,)
    M = explore(A, 0, step, lambda k: 1 if k == 2 else 0)
    return QuasiAutomaticSeries(from_standard_dfao(M, F))


# ---------------------------------------------------------------------------
# closure operations

def _check_fields(*xs):
    F = xs[0].field
    for x in xs[1:]:
        if x.field is not F:
            raise FieldMismatch("series over different coefficient fields")
    return F


def _engine(xs, coeffs, B, k, weight, cap):
    F = xs[0].field
    revs = [reversed_dfao(x.inner if isinstance(x, QuasiAutomaticSeries) else x, cap)
            for x in xs]
    M = combine_reversed(revs, coeffs, Fraction(B), k, F.p, F, weight, cap)
    return from_reversed_dfao(M, F, cap)


def _first(o):
    return o[0]


def reshape(x, a, b, cap=DEFAULT_MONOID_CAP):
    """Same series with support parameters (a, b); a must be a multiple of x.a, b/a >= x.b/x.a."""
    x = _quasi(x)
    if a % x.a:
        raise ValueError("new a must be a multiple of the old one")
    m = a // x.a
    B = b - m * x.b
    if Fraction(b, a) < Fraction(x.b, x.a):
        raise ValueError("new shift does not cover the support")
    if m == 1 and B == 0:
        return x
    inner = _engine([x], (m,), B, 0, _first, cap)
    return QuasiAutomaticSeries(inner, a, b)


def _common(x, y, cap):
    x, y = _quasi(x), _quasi(y)
    a = x.a * y.a // math.gcd(x.a, y.a)
    b = max(a // x.a * x.b, a // y.a * y.b)
    return reshape(x, a, b, cap), reshape(y, a, b, cap)


def add(x, y, cap=DEFAULT_MONOID_CAP):
    """Coefficientwise sum (direct sum of the data)."""
    _check_fields(x, y)
    x, y = _common(x, y, cap)
    X, Y = x.inner, y.inner
    F = X.field
    f1 = {a: block_diag([X.f1.maps[a].matrix, Y.f1.maps[a].matrix]) for a in range(F.p)}
    f2 = {a: block_diag([X.f2.maps[a].matrix, Y.f2.maps[a].matrix]) for a in range(F.p)}
    inner = AutomaticSeries(F, X.iota + Y.iota, X.pi + Y.pi, f1, f2).reduce()
    return QuasiAutomaticSeries(inner, x.a, x.b)


def scalar_mul(c, x):
    x = _quasi(x)
    X = x.inner
    F = X.field
    inner = AutomaticSeries(F, X.iota, tuple(F.mul(c, v) for v in X.pi), X.f1, X.f2)
    return QuasiAutomaticSeries(inner.reduce(), x.a, x.b)


def neg(x):
    return scalar_mul(x.field.neg(1), x)


def sub(x, y, cap=DEFAULT_MONOID_CAP):
    return add(x, neg(y), cap)


def _hadamard_inner(X, Y):
    F = X.field
    f1 = {a: kron(F, X.f1.maps[a].matrix, Y.f1.maps[a].matrix) for a in range(F.p)}
    f2 = {a: kron(F, X.f2.maps[a].matrix, Y.f2.maps[a].matrix) for a in range(F.p)}
    return AutomaticSeries(F, kron_vec(F, X.iota, Y.iota), kron_vec(F, X.pi, Y.pi),
                           f1, f2).reduce()


def hadamard(x, y, cap=DEFAULT_MONOID_CAP):
    """Coefficientwise product (tensor product of the data)."""
    _check_fields(x, y)
    x, y = _common(x, y, cap)
    return QuasiAutomaticSeries(_hadamard_inner(x.inner, y.inner), x.a, x.b)


def _power_function(F, nu):
    """Inward automaton of j -> nu^j for j in Z[1/p] >= 0."""

    def step(k, a):
        if k is DEAD:
            return DEAD
        phase, v, w = k
        if a == RADIX:
            return DEAD if phase else (1, v, w)
        if phase == 0:
            return (0, F.frob(F.mul(F.pow(nu, a), v), -1), w)
        return (1, v, F.mul(F.pow(w, F.p), F.pow(nu, a)))

    def output(k):
        if k is DEAD or k[0] == 0:
            return 0
        return F.mul(k[1], k[2])

    A = tuple(range(F.p)) + (RADIX,)
    return minimize(explore(A, (0, 1, 1), step, output))


def power_series(F, mu):
    """The rank-one series sum_i mu^i t^i over i in Z[1/p] >= 0."""
    if mu == 0:
        raise ValueError("mu must be nonzero")
    return QuasiAutomaticSeries(from_inward_dfao(_power_function(F, mu), F))


def subst_scale(x, mu, cap=DEFAULT_MONOID_CAP):
    """t -> mu t: the coefficient at i is multiplied by mu^i (roots taken inside F_q)."""
    x = _quasi(x)
    F = x.field
    if mu == 0:
        raise ValueError("mu must be nonzero")
    nu = next((v for v in range(1, F.q) if F.pow(v, x.a) == mu), None)
    if nu is None:
        raise ValueError(f"mu has no {x.a}-th root in F_{F.q}; reshape the series first")
    g = from_inward_dfao(_power_function(F, nu), F)
    inner = _hadamard_inner(x.inner, g)
    out = QuasiAutomaticSeries(inner, x.a, x.b)
    return scalar_mul(F.pow(F.inv(nu), x.b), out)


def _split_exponent(e, p):
    e = Fraction(e)
    if e <= 0:
        raise ValueError("exponent must be positive")
    n, d = e.numerator, e.denominator
    k = 0
    while d % p == 0:
        d //= p
        k += 1
    if d != 1:
        raise ValueError(f"exponent {e} is not of the form n/p^k")
    return n, k


def _scale_support(x, n, k, cap):
    """Series with coefficient at n i / p^k equal to the coefficient of x at i (k may be < 0)."""
    x = _quasi(x)
    p = x.p
    at = n * p ** max(-k, 0)
    alpha_k = max(k, 0)
    # the support bound -b/a scales too, so the shift may have to grow
    b2 = max(x.b, math.ceil(Fraction(at * x.b, p ** alpha_k)))
    B = p ** alpha_k * b2 - at * x.b
    inner = _engine([x], (at,), B, alpha_k, _first, cap)
    return QuasiAutomaticSeries(inner, x.a, b2)


def subst_power(x, e, cap=DEFAULT_MONOID_CAP):
    """t -> t^e for e = n/p^k: the support is multiplied by e."""
    n, k = _split_exponent(e, _quasi(x).p)
    if n == 1 and k == 0:
        return _quasi(x)
    return _scale_support(x, n, k, cap)


def frobenius_series(x, k, cap=DEFAULT_MONOID_CAP):
    """phi^k applied to the series: coefficient at p^k i is (coefficient at i)^(p^k)."""
    x = _quasi(x)
    if k == 0:
        return x
    y = _scale_support(x, 1, -k, cap)
    return QuasiAutomaticSeries(y.inner.frobenius_data(k).reduce(), y.a, y.b)


def truncate(x, r, cap=DEFAULT_MONOID_CAP):
    """Keep the coefficients at exponents i < r."""
    x = _quasi(x)
    F = x.field
    bound = x.a * Fraction(r) + x.b
    if bound <= 0:
        return zero_series(F)
    cut = dedekind_cut_dfao(F.p, bound).map_outputs(int)
    ind = from_standard_dfao(cut, F, cap)
    return QuasiAutomaticSeries(_hadamard_inner(x.inner, ind), x.a, x.b)


def mul_fq(x, y, cap=DEFAULT_MONOID_CAP):
    """Cauchy product over F_q via the carry engine on pairs of support words."""
    F = _check_fields(x, y)
    x, y = _common(x, y, cap)
    weight = lambda o: F.mul(o[0], o[1])  # noqa: E731
    inner = _engine([x, y], (1, 1), 0, 0, weight, cap)
    return QuasiAutomaticSeries(inner, x.a, 2 * x.b)


def shift(x, e, cap=DEFAULT_MONOID_CAP):
    """Multiply by t^e for e in Z[1/p] (any sign)."""
    x = _quasi(x)
    e = Fraction(e)
    return mul_fq(x, monomial(x.field, e), cap)


def well_ordered(x, cap=DEFAULT_MONOID_CAP):
    """Verdict of :func:`autoseries.dfao.well_ordered_check` on the support."""
    from .dfao import well_ordered_check

    return well_ordered_check(support_dfao(x, cap), x.p)


def equal_on(x, y, exponents):
    return all(coeff(x, i) == coeff(y, i) for i in exponents)


def truncated_coeffs(x, n):
    """Integer-exponent coefficients x_0..x_{n-1}."""
    return [coeff(x, i) for i in range(n)]


__all__ = [
    "AutomaticSeries", "QuasiAutomaticSeries", "FieldMismatch", "coeff", "add", "sub", "neg",
    "scalar_mul", "hadamard", "subst_scale", "subst_power", "frobenius_series", "truncate",
    "support_dfao", "coefficient_dfao", "mul_fq", "reshape", "shift", "zero_series",
    "from_terms", "monomial", "polynomial", "geometric", "power_sparse", "power_series",
    "from_inward_dfao", "from_standard_dfao", "from_reversed_dfao", "inward_dfao",
    "reversed_dfao", "from_coefficient_function", "well_ordered", "truncated_coeffs",
    "ResourceError", "Dfao",
]
