"""Solvers whose answers are generalized power series.

* :func:`artin_schreier_neg` solves y^p - y = x for x with negative support;
  the answer y = x^(1/p) + x^(1/p^2) + ... is again quasi-automatic.
* :func:`artin_schreier_pos` gives certified truncations of
  y = c - x - x^p - ... when the support of x is positive.
* :func:`additive_solve` handles P(phi)(y) = x for P split into linear
  factors over F_q.
* :func:`truncation_witness` expands a root of a monic twisted polynomial one
  term at a time, by the Newton polygon of its coefficients.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .codec import RADIX, encode_frac
from .dfao import DEAD, dedekind_cut_dfao, explore, is_empty, minimize, product
from .fields import FqField
from .series import (DEFAULT_MONOID_CAP, AutomaticSeries, QuasiAutomaticSeries, _engine, _first,
                     _quasi, add, coeff, frobenius_series, monomial, scalar_mul, sub, subst_power,
                     support_dfao, truncate, zero_series)


class SupportError(ValueError):
    """The input series violates a support precondition."""


class NotWellOrdered(ValueError):
    """A support without a least element was met."""


class NotSplitError(ValueError):
    """An equation needs a larger coefficient field; ``degree`` is the extension degree if known."""

    def __init__(self, message, degree=None):
        super().__init__(message if degree is None else f"{message} (extension degree {degree})")
        self.degree = degree


# ---------------------------------------------------------------------------
# support minima

def _useful(M):
    """States from which some accepting state is reachable."""
    back = {q: set() for q in range(len(M.delta))}
    for q, row in enumerate(M.delta):
        for r in row:
            back[r].add(q)
    todo = [q for q, o in enumerate(M.outputs) if o]
    seen = set(todo)
    while todo:
        q = todo.pop()
        for r in back[q]:
            if r not in seen:
                seen.add(r)
                todo.append(r)
    return seen


def dfao_min_value(M, p):
    """Least value of a canonical word accepted by a standard-order boolean DFAO, or None."""
    useful = _useful(M)
    if M.q0 not in useful:
        return None
    di = M.alphabet.index(RADIX)
    digits = [a for a in M.alphabet if a != RADIX]
    good = [{q for q in range(len(M.delta)) if M.delta[q][di] in useful}]
    level, seen, length = {M.q0}, set(), 0
    while not level & good[0]:
        key = frozenset(level)
        if key in seen:
            return None
        seen.add(key)
        length += 1
        level = {M.step(q, d) for q in level for d in digits if d or length > 1}
    for r in range(1, length):
        good.append({q for q in range(len(M.delta))
                     if any(M.step(q, d) in good[r - 1] for d in digits)})
    cur, val = M.q0, Fraction(0)
    for i in range(length):
        rem = length - i - 1
        d = next(d for d in digits if (d or i) and M.step(cur, d) in good[rem])
        cur = M.step(cur, d)
        val = val * p + d
    cur = M.step(cur, RADIX)
    visited = set()
    k = 0
    while not M.outputs[cur]:
        if cur in visited:
            raise NotWellOrdered("support has no least element")
        visited.add(cur)
        d = next(d for d in digits if M.step(cur, d) in useful)
        cur = M.step(cur, d)
        k += 1
        val += Fraction(d, p ** k)
    return val


def _word_dfao(p, r):
    """Accepts exactly the canonical word of r."""
    word = encode_frac(Fraction(r), p)
    A = tuple(range(p)) + (RADIX,)

    def step(i, a):
        if i is DEAD or i >= len(word) or word[i] != a:
            return DEAD
        return i + 1

    return minimize(explore(A, 0, step, lambda i: i is not DEAD and i == len(word)))


def support_min(x, above=None, cap=DEFAULT_MONOID_CAP):
    """Least exponent of the support (strictly greater than ``above`` if given), or None."""
    x = _quasi(x)
    p = x.p
    S = support_dfao(x, cap)
    if above is not None:
        j0 = x.a * Fraction(above) + x.b
        if j0 >= 0:
            cut = dedekind_cut_dfao(p, j0)
            S = product(S, cut, lambda s, lt: bool(s) and not lt)
            S = minimize(product(S, _word_dfao(p, j0), lambda s, eq: bool(s) and not eq))
    j = dfao_min_value(S, p)
    return None if j is None else (j - x.b) / x.a


def is_zero(x, cap=DEFAULT_MONOID_CAP):
    """True when every coefficient at a canonical word vanishes."""
    return is_empty(support_dfao(_quasi(x), cap))


def _split_support(x, cap):
    """(negative part, constant term, positive part)."""
    neg = truncate(x, 0, cap)
    c0 = coeff(x, 0)
    pos = sub(x, neg, cap)
    if c0:
        pos = sub(pos, monomial(x.field, 0, c0), cap)
    return neg, c0, pos


# ---------------------------------------------------------------------------
# Artin-Schreier, negative support

def _as_window(X):
    """y with y^p - y = x for x supported in (-1, 0), both given with shift (a, b) = (1, 1).

    Reading u = 1 + s in (0, 1) as 0.d_1 d_2 ..., one has p s > -1 exactly when
    d_1 = p - 1, and then p s + 1 = 0.d_2 ....  Hence
    g(d_1 w) = [d_1 = p - 1] phi^-1(h(w) + g(w)) for the inner coefficient
    functions g of y and h of x, which extends the fractional-digit data of x
    by one coordinate.
    """
    inner = X.inner
    F = inner.field
    p = F.p
    d = inner.dim
    pi_inv = tuple(F.frob(c, -1) for c in inner.pi)
    f2 = {}
    for c in range(p):
        T = inner.f2.maps[c].matrix
        delta = 1 if c == p - 1 else 0
        rows = [tuple(T[i]) + (0,) for i in range(d)]
        rows.append(tuple(F.mul(delta, v) for v in pi_inv) + (delta,))
        f2[c] = tuple(rows)
    zero = tuple((0,) * (d + 1) for _ in range(d + 1))
    f1 = {c: zero for c in range(p)}
    iota = tuple(inner.iota) + (0,)
    pi = (0,) * d + (1,)
    return QuasiAutomaticSeries(AutomaticSeries(F, iota, pi, f1, f2).reduce(), 1, 1)


class ArtinSchreierResult:
    """The solution y together with the window series of the reduced problem."""

    def __init__(self, y, x_tilde, y_window, scale_k, a):
        self.y = y
        self.x_tilde = x_tilde
        self.y_window = y_window
        self.scale_k = scale_k
        self.a = a

    def y_tilde(self, cap=DEFAULT_MONOID_CAP):
        """t^(1/p) y_window: supported on (0, 1/p) and solving Y^p - t^((p-1)/p) Y = x_tilde."""
        from .series import shift

        return shift(self.y_window, Fraction(1, self.y_window.p), cap)


def artin_schreier_neg(x, cap=DEFAULT_MONOID_CAP, details=False):
    """The solution y = sum_{k>=1} x^(1/p^k) of y^p - y = x, for x with negative support.

    The support is first moved into (-1, 0) by t -> t^a and t -> t^(1/p^k);
    both substitutions commute with the equation and are undone at the end.
    """
    x = _quasi(x)
    F = x.field
    p = F.p
    if not is_zero(sub(x, truncate(x, 0, cap), cap)):
        raise SupportError("x must be supported on negative exponents")
    if is_zero(x):
        z = zero_series(F)
        return ArtinSchreierResult(z, z, z, 0, 1) if details else z
    lo = support_min(x, cap=cap) * x.a
    x1 = QuasiAutomaticSeries(x.inner, 1, x.b)
    k = 0
    while p ** k <= -lo:
        k += 1
    x2 = subst_power(x1, Fraction(1, p ** k), cap) if k else x1
    x3 = QuasiAutomaticSeries(_engine([x2], (1,), 1 - x2.b, 0, _first, cap), 1, 1)
    y3 = _as_window(x3)
    y2 = subst_power(y3, p ** k, cap) if k else y3
    y = QuasiAutomaticSeries(y2.inner, x.a, y2.b)
    if details:
        return ArtinSchreierResult(y, QuasiAutomaticSeries(x3.inner, 1, 0), y3, k, x.a)
    return y


# ---------------------------------------------------------------------------
# Artin-Schreier, positive support

class Truncation:
    """A series known to agree with the true answer on exponents below ``radius``."""

    def __init__(self, series, radius):
        self.series = series
        self.radius = radius  # None: exact everywhere

    def __repr__(self):
        return f"Truncation({self.series!r}, radius={self.radius})"


def artin_schreier_pos(x, c=0, N=8, cap=DEFAULT_MONOID_CAP):
    """Truncation of y = c - x - x^p - ... - x^(p^(N-1)) at radius p^N * min(support x).

    ``c`` must lie in F_p, so that y^p - y = x holds below the radius.
    """
    x = _quasi(x)
    F = x.field
    if F.frob(c) != c:
        raise ValueError("the constant branch must lie in F_p")
    if not is_zero(truncate(x, 0, cap)) or coeff(x, 0):
        raise SupportError("x must be supported on positive exponents")
    const = monomial(F, 0, c) if c else zero_series(F)
    if is_zero(x):
        return Truncation(const, None)
    v = support_min(x, cap=cap)
    r = v * x.p ** N
    total = zero_series(F)
    for k in range(N):
        total = add(total, frobenius_series(x, k, cap), cap)
    y = sub(const, total, cap)
    return Truncation(truncate(y, r, cap), r)


# ---------------------------------------------------------------------------
# additive polynomials

def skew_mul(F, A, B):
    """Coefficients of A(T) B(T) in the twisted ring (T c = c^p T)."""
    out = [0] * (len(A) + len(B) - 1)
    for i, a in enumerate(A):
        for j, b in enumerate(B):
            out[i + j] = F.add(out[i + j], F.mul(a, F.frob(b, i)))
    return out


class AdditivePoly:
    """P(T) = sum_j d_j T^j over F_q acting as P(phi); optional split form u (T - mu_1)...(T - mu_k)."""

    def __init__(self, field, coeffs, roots=None, unit=1):
        self.field = field
        self.coeffs = [int(c) for c in coeffs]
        while len(self.coeffs) > 1 and not self.coeffs[-1]:
            self.coeffs.pop()
        if not self.coeffs[-1]:
            raise ValueError("the zero polynomial is not allowed")
        self.roots = None if roots is None else [int(m) for m in roots]
        self.unit = unit
        if self.roots is not None:
            prod = self.from_roots(field, self.roots, unit).coeffs
            if prod != self.coeffs:
                raise ValueError("split form does not multiply back to the coefficients")

    @classmethod
    def from_roots(cls, field, roots, unit=1):
        F = field
        P = [unit]
        for mu in roots:
            P = skew_mul(F, P, [F.neg(mu), 1])
        obj = cls.__new__(cls)
        obj.field, obj.coeffs, obj.roots, obj.unit = F, P, list(roots), unit
        return obj

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def apply(self, y, cap=DEFAULT_MONOID_CAP):
        """P(phi)(y) as a series."""
        y = _quasi(y)
        out = zero_series(self.field)
        for j, d in enumerate(self.coeffs):
            if d:
                out = add(out, scalar_mul(d, frobenius_series(y, j, cap)), cap)
        return out

    def apply_terms(self, terms):
        """P(phi) of a finite dict {exponent: coefficient}."""
        F = self.field
        out = {}
        for j, d in enumerate(self.coeffs):
            if not d:
                continue
            for e, c in terms.items():
                k = e * F.p ** j
                out[k] = F.add(out.get(k, 0), F.mul(d, F.frob(c, j)))
        return {e: c for e, c in out.items() if c}

    def __repr__(self):
        return f"AdditivePoly({self.coeffs}, roots={self.roots})"


def _extension_degree_for_root(F, mu):
    """Least n with a solution of a^(p-1) = mu in F_(q^n)."""
    n = 1
    while True:
        e = (F.q ** n - 1) // (F.p - 1)
        if F.pow(mu, e) == 1:
            return n
        n += 1


def solve_linear_factor(mu, w, flag=0, radius=None, cap=DEFAULT_MONOID_CAP):
    """z with z^p - mu z = w; returns a :class:`Truncation`.

    For mu != 0 the substitution z = alpha u with alpha^(p-1) = mu turns the
    equation into u^p - u = w / alpha^p; ``flag`` in F_p picks the solution.
    A positive-support part of w needs ``radius``.
    """
    w = _quasi(w)
    F = w.field
    p = F.p
    if mu == 0:
        if flag:
            raise ValueError("T has no branches")
        return Truncation(frobenius_series(w, -1, cap), radius)
    alpha = next((a for a in range(1, F.q) if F.pow(a, p - 1) == mu), None)
    if alpha is None:
        raise NotSplitError("T - mu does not split", _extension_degree_for_root(F, mu))
    scale = F.inv(F.pow(alpha, p))
    ws = scalar_mul(scale, w)
    neg, c0, pos = _split_support(ws, cap)
    u = artin_schreier_neg(neg, cap)
    root = next((r for r in range(F.q) if F.sub(F.pow(r, p), r) == c0), None)
    if root is None:
        raise NotSplitError("Artin-Schreier constant has no root", p)
    root = F.add(root, F.from_int(flag))
    if root:
        u = add(u, monomial(F, 0, root), cap)
    r_out = radius
    if not is_zero(pos):
        if radius is None:
            raise ValueError("a positive-support part needs a truncation radius")
        v = support_min(pos, cap=cap)
        n = 0
        while v * p ** n < radius:
            n += 1
        u = add(u, artin_schreier_pos(pos, 0, n, cap).series, cap)
        u = truncate(u, radius, cap)
    return Truncation(scalar_mul(alpha, u), r_out)


def additive_solve(P, x, flags=None, radius=None, cap=DEFAULT_MONOID_CAP):
    """y with P(phi)(y) = x for P given in split form u (T - mu_1) ... (T - mu_k).

    Factors are peeled off from the left; ``flags`` gives one F_p branch per
    factor.  The answer is exact when x has no positive-support part, and
    otherwise certified below ``radius``.
    """
    if P.roots is None:
        raise NotSplitError("no split form given")
    F = P.field
    flags = list(flags or [0] * len(P.roots))
    if len(flags) != len(P.roots):
        raise ValueError("one branch flag per linear factor")
    z = Truncation(scalar_mul(F.inv(P.unit), _quasi(x)), radius)
    for mu, fl in zip(P.roots, flags):
        z = solve_linear_factor(mu, z.series, fl, radius, cap)
    y = z.series
    y.metadata = {"certified_radius": None if radius is None else str(radius),
                  "flags": flags}
    return y


# ---------------------------------------------------------------------------
# term-by-term witness for roots of twisted polynomials

def _frac(s):
    return str(Fraction(s))


class Witness:
    """Terms found so far, the certified truncations and the reason for stopping."""

    def __init__(self, field, P, rhs, terms, certified, reason, choices):
        self.field, self.P, self.rhs = field, P, rhs
        self.terms = terms
        self.certified = certified
        self.reason = reason
        self.choices = choices

    @property
    def radius(self):
        return self.certified[-1][0] if self.certified else None

    def truncation(self):
        return dict(self.terms)

    def to_json(self):
        F = self.field
        return {
            "r": None if self.radius is None else _frac(self.radius),
            "certified": {"field": F.to_json(),
                          "terms": [[_frac(e), c] for e, c in self.terms]},
            "pending": {"P": [[[_frac(e), c] for e, c in sorted(Pj.items())] for Pj in self.P],
                        "rhs": None if not isinstance(self.rhs, dict)
                        else [[_frac(e), c] for e, c in sorted(self.rhs.items())]},
            "reason": self.reason,
            "choices": [[_frac(e), n] for e, n in self.choices],
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def load_checkpoint(obj):
    """(field, P, rhs, terms) from a checkpoint written by :meth:`Witness.to_json`."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    F = FqField.from_json(obj["certified"]["field"])
    P = [{Fraction(e): c for e, c in Pj} for Pj in obj["pending"]["P"]]
    rhs = obj["pending"]["rhs"]
    rhs = {} if rhs is None else {Fraction(e): c for e, c in rhs}
    terms = [(Fraction(e), c) for e, c in obj["certified"]["terms"]]
    return F, P, rhs, terms


def _additive_roots(F, lcs, target):
    """All a in F_q with sum_j lcs[j] a^(p^j) = target."""
    out = []
    for a in range(F.q):
        s = 0
        for j, c in lcs.items():
            s = F.add(s, F.mul(c, F.frob(a, j)))
        if s == target:
            out.append(a)
    return out


def _needed_degree(F, lcs, target, max_degree=8):
    if F.e != 1:
        return None
    for n in range(2, max_degree + 1):
        E = FqField(F.p, n)
        if _additive_roots(E, lcs, target):
            return n
    return None


class _Rhs:
    """Right-hand side: a finite dict or a quasi-automatic series, walked in support order."""

    def __init__(self, rhs, cap):
        self.series = None if isinstance(rhs, dict) else _quasi(rhs)
        self.terms = dict(rhs) if isinstance(rhs, dict) else None
        self.cap = cap

    def coeff(self, e):
        if self.terms is not None:
            return self.terms.get(e, 0)
        return coeff(self.series, e)

    def support_after(self, e):
        if self.terms is not None:
            later = [k for k, c in self.terms.items() if c and (e is None or k > e)]
            return min(later, default=None)
        return support_min(self.series, above=e, cap=self.cap)


def _leading(F, rhs, D):
    """Least exponent where rhs + D is nonzero, with its coefficient (or (None, 0))."""
    keys = sorted(D)
    pos = None
    while True:
        nxt = rhs.support_after(pos)
        cands = [k for k in keys if (pos is None or k > pos)]
        if nxt is not None:
            cands.append(nxt)
        if not cands:
            return None, 0
        e = min(cands)
        c = F.add(rhs.coeff(e), D.get(e, 0))
        if c:
            return e, c
        pos = e


def truncation_witness(field, P, rhs=None, budget=16, leading=None, precision=None,
                       terms=None, cap=DEFAULT_MONOID_CAP):
    """Expand a solution y of sum_j P_j(t) phi^j(y) = rhs term by term.

    ``P`` is a list of finite dicts {exponent: coefficient} (P[-1] is the unit 1
    for a monic polynomial); ``rhs`` is a finite dict or a series (default 0).
    With R = rhs - P(phi)(partial), the next exponent is rho with
    min_j (v(P_j) + rho p^j) = v(R) and its coefficient solves the boundary
    equation sum_{j tight} lc(P_j) a^(p^j) = lc(R) over F_q.  Free terms at
    Newton-polygon breakpoints below rho are taken from ``leading`` (default
    zero).  Returns a :class:`Witness`; ``terms`` resumes from a checkpoint.
    """
    F = field
    p = F.p
    P = [{Fraction(e): c for e, c in Pj.items() if c} for Pj in P]
    if not P or not P[-1]:
        raise ValueError("P needs a nonzero leading coefficient")
    leading = {Fraction(e): c for e, c in (leading or {}).items()}
    R = _Rhs(rhs if rhs is not None else {}, cap)
    vals = {j: min(Pj) for j, Pj in enumerate(P) if Pj}
    lcs_all = {j: P[j][vals[j]] for j in vals}
    terms = list(terms or [])
    D = {}
    certified, choices = [], []

    def push(rho, a):
        terms.append((rho, a))
        for j, Pj in enumerate(P):
            for e, c in Pj.items():
                k = e + rho * p ** j
                v = F.sub(D.get(k, 0), F.mul(c, F.frob(a, j)))
                if v:
                    D[k] = v
                else:
                    D.pop(k, None)

    for rho, a in list(terms):
        terms.remove((rho, a))
        push(rho, a)

    def c_of(rho):
        return min(vals[j] + rho * p ** j for j in vals)

    def tight(rho):
        m = c_of(rho)
        return [j for j in vals if vals[j] + rho * p ** j == m]

    breaks = set()
    js = sorted(vals)
    for i in js:
        for j in js:
            if i < j:
                rho = Fraction(vals[i] - vals[j], p ** j - p ** i)
                if len(tight(rho)) > 1:
                    breaks.add(rho)
    reason = "budget exhausted"
    while len(terms) < budget:
        last = terms[-1][0] if terms else None
        v, lc = _leading(F, R, D)
        if precision is not None and v is not None and terms:
            reliable = precision + min(terms[0][0] * p ** j for j in vals)
            if v >= reliable:
                reason = "coefficient precision exhausted"
                break
        rho_star = None if v is None else max((v - vals[j]) / p ** j for j in vals)
        free = sorted(b for b in breaks if (last is None or b > last)
                      and (rho_star is None or b < rho_star) and leading.get(b))
        if free:
            b = free[0]
            lcs = {j: lcs_all[j] for j in tight(b)}
            a = leading[b]
            if a not in _additive_roots(F, lcs, 0):
                raise ValueError(f"prescribed term at {b} does not solve its boundary equation")
            certified.append((b, dict(terms)))
            push(b, a)
            continue
        if rho_star is None:
            reason = "exact solution reached"
            certified.append((None, dict(terms)))
            break
        if last is not None and rho_star <= last:
            reason = "no term can cancel the residual (inconsistent branch)"
            break
        lcs = {j: lcs_all[j] for j in tight(rho_star)}
        roots = _additive_roots(F, lcs, lc)
        if not roots:
            n = _needed_degree(F, lcs, lc)
            reason = ("boundary equation has no root over F_q"
                      + ("" if n is None else f"; needs an extension of degree {n}"))
            break
        if rho_star in leading:
            a = leading[rho_star]
            if a not in roots:
                raise ValueError(f"prescribed term at {rho_star} does not solve its boundary equation")
        else:
            a = roots[0]
        if len(roots) > 1:
            choices.append((rho_star, len(roots)))
        certified.append((rho_star, dict(terms)))
        push(rho_star, a)
    return Witness(F, P, rhs if isinstance(rhs, dict) or rhs is None else None,
                   terms, certified, reason, choices)


__all__ = [
    "support_min", "dfao_min_value", "is_zero", "artin_schreier_neg", "artin_schreier_pos",
    "ArtinSchreierResult", "Truncation", "AdditivePoly", "skew_mul", "solve_linear_factor",
    "additive_solve", "truncation_witness", "Witness", "load_checkpoint", "SupportError",
    "NotSplitError", "NotWellOrdered",
]
