"""Algebraic power series over F_q and their automatic data.

* :func:`newton_expand` lifts an isolated branch of P(t, y) = 0 to any t-adic
  precision.
* :class:`FunctionField` does exact arithmetic in L = F_q(t)[y]/(P) and
  implements the decimation operators s_0..s_{p-1}, defined by
  u = sum_i t^i s_i(u)^p.
* :func:`christol_forward` closes the branch under decimation and emits
  :class:`~autoseries.series.AutomaticSeries` data.
* :func:`ore_annihilator` goes back: it finds a monic P(T) with
  sum_j P_j(t) phi^j(x) = 0 for an automatic power series x.
"""

from __future__ import annotations

import re

from .errors import VerificationError
from .fields import FqField, Poly, RatFunc, series_div, series_mul, solve_homogeneous
from .series import AutomaticSeries, QuasiAutomaticSeries

DEFAULT_ORBIT_CAP = 512


class ParseError(ValueError):
    """Malformed polynomial text; ``position`` points at the offending character."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class BranchError(ValueError):
    """The initial segment does not isolate a branch."""


# ---------------------------------------------------------------------------
# bivariate polynomials: dict {power of y: Poly in t}

_TOKEN = re.compile(r"\s*(?:(\d+)|([tyg])|(\^)|([+\-])|(\*)|(\()|(\)))")


def parse_polynomial(text, F):
    """Parse text such as ``"y^2 + y + t"`` or ``"(1+t)*y + 1"`` over F.

    ``g`` denotes the generator of F_q.  Returns {j: Poly} with P = sum_j P_j(t) y^j.
    """
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastindex
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append((0, None, len(text)))
    parser = _Parser(toks, F)
    P = parser.expr()
    if parser.peek()[0] != 0:
        raise ParseError("unexpected token", parser.peek()[2])
    return {j: c for j, c in P.items() if not c.is_zero()}


class _Parser:
    NUM, VAR, CARET, SIGN, STAR, LP, RP = 1, 2, 3, 4, 5, 6, 7

    def __init__(self, toks, F):
        self.toks, self.i, self.F = toks, 0, F

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expr(self):
        total = {}
        sign = 1
        if self.peek()[0] == self.SIGN:
            sign = -1 if self.take()[1] == "-" else 1
        while True:
            term = self.term()
            if sign < 0:
                term = {j: -c for j, c in term.items()}
            total = _badd(total, term)
            if self.peek()[0] != self.SIGN:
                break
            sign = -1 if self.take()[1] == "-" else 1
        return total

    def term(self):
        out = self.factor()
        while True:
            k = self.peek()[0]
            if k == self.STAR:
                self.take()
                out = _bmul(out, self.factor())
            elif k in (self.NUM, self.VAR, self.LP):
                out = _bmul(out, self.factor())
            else:
                return out

    def factor(self):
        F = self.F
        kind, val, pos = self.take()
        if kind == self.NUM:
            base = {0: Poly(F, [F.from_int(int(val))])}
        elif kind == self.VAR:
            if val == "t":
                base = {0: Poly(F, [0, 1])}
            elif val == "y":
                base = {1: Poly(F, [1])}
            else:
                base = {0: Poly(F, [F.gen])}
        elif kind == self.LP:
            base = self.expr()
            if self.take()[0] != self.RP:
                raise ParseError("missing closing parenthesis", pos)
        else:
            raise ParseError("expected a number, variable or parenthesis", pos)
        if self.peek()[0] == self.CARET:
            self.take()
            k2, v2, p2 = self.take()
            if k2 != self.NUM:
                raise ParseError("expected an exponent", p2)
            n = int(v2)
            out = {0: Poly(F, [1])}
            for _ in range(n):
                out = _bmul(out, base)
            return out
        return base


def _badd(A, B):
    out = dict(A)
    for j, c in B.items():
        out[j] = out[j] + c if j in out else c
    return out


def _bmul(A, B):
    out = {}
    for i, a in A.items():
        for j, b in B.items():
            c = a * b
            out[i + j] = out[i + j] + c if i + j in out else c
    return out


def format_polynomial(P, var="y"):
    parts = []
    for j in sorted(P, reverse=True):
        c = P[j]
        if c.is_zero():
            continue
        cs = c.format()
        mono = "" if j == 0 else (var if j == 1 else f"{var}^{j}")
        if not mono:
            parts.append(cs)
        elif cs == "1":
            parts.append(mono)
        else:
            parts.append(f"({cs})*{mono}")
    return " + ".join(parts) if parts else "0"


def y_degree(P):
    return max(j for j, c in P.items() if not c.is_zero())


def derivative_y(P):
    F = next(iter(P.values())).field
    out = {}
    for j, c in P.items():
        if j and j % F.p:
            out[j - 1] = c.scale(F.from_int(j))
    return {j: c for j, c in out.items() if not c.is_zero()}


def is_separable(P):
    return bool(derivative_y(P))


# ---------------------------------------------------------------------------
# branches

class AlgebraicSeriesRep:
    """A root of P(t, y) in F_q[[t]] singled out by an initial coefficient segment."""

    def __init__(self, field, P, segment):
        if isinstance(P, str):
            P = parse_polynomial(P, field)
        if not P:
            raise BranchError("P must be nonzero")
        self.field, self.P, self.segment = field, P, [int(c) for c in segment]
        if not self.segment:
            raise BranchError("the segment needs at least the constant term")

    @classmethod
    def parse(cls, text, field, segment=(0,)):
        return cls(field, parse_polynomial(text, field), segment)

    def __repr__(self):
        return f"AlgebraicSeriesRep({format_polynomial(self.P)}, F_{self.field.q}, {self.segment})"


def eval_series(F, P, x, n):
    """P(t, x) mod t^n for a power series x (list)."""
    out = [0] * n
    for j in range(max(P), -1, -1):
        out = series_mul(F, out, x, n)
        if j not in P:
            continue
        c = P[j].coeffs[:n]
        for i, v in enumerate(c):
            out[i] = F.add(out[i], v)
    return out


def _frobenius_reduce(P):
    """Write P(t, y) = Q(t, y^(p^k)) with Q separable; returns (Q, k)."""
    F = next(iter(P.values())).field
    k = 0
    while not is_separable(P):
        if any(j % F.p for j in P):
            raise BranchError("P is not a polynomial in y^p yet has zero derivative")
        P = {j // F.p: c for j, c in P.items()}
        k += 1
    return P, k


def newton_expand(rep, N):
    """Coefficients x_0..x_{N-1} of the branch, by Newton iteration."""
    F = rep.field
    P, k = _frobenius_reduce(rep.P)
    if k:
        q = F.p ** k
        seg = [0] * ((len(rep.segment) - 1) * q + 1)
        for i, c in enumerate(rep.segment):
            seg[i * q] = F.frob(c, k)
        z = _newton(F, P, seg, N * q)
        if any(c for i, c in enumerate(z) if i % q):
            raise BranchError("the root is not a power series in t (fractional exponents)")
        return [F.frob(z[i * q], -k) for i in range(N)]
    return _newton(F, P, rep.segment, N)


def _newton(F, P, segment, N):
    dP = derivative_y(P)
    x0 = segment[0]
    res0 = eval_series(F, P, [x0], 1)[0]
    if res0:
        raise BranchError("constant term is not a root of P(0, y)")
    d0 = eval_series(F, dP, [x0], 1)[0] if dP else 0
    if not d0:
        raise BranchError("y-derivative of P vanishes at the branch; no unique lift")
    chk = eval_series(F, P, segment, len(segment))
    if any(chk):
        raise BranchError("segment does not satisfy P modulo its length")
    x = list(segment[:N]) + [0] * max(0, N - len(segment))
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        r = eval_series(F, P, x[:prec], prec)
        d = eval_series(F, dP, x[:prec], prec)
        corr = series_div(F, r, d, prec)
        x = [F.sub(a, b) for a, b in zip(x[:prec], corr)] + x[prec:]
    x = x[:N]
    if any(eval_series(F, P, x, N)):
        raise VerificationError("Newton iteration did not converge")
    for i, c in enumerate(segment[:N]):
        if x[i] != c:
            raise BranchError("segment is not consistent with the lifted branch")
    return x


# ---------------------------------------------------------------------------
# function field arithmetic

def _rat_solve(F, A, b):
    """Solve A x = b over F_q(t) (A square, invertible)."""
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        piv = next(i for i in range(c, n) if not M[i][c].is_zero())
        M[c], M[piv] = M[piv], M[c]
        inv = RatFunc.const(F, 1) / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and not M[i][c].is_zero():
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [M[i][n] for i in range(n)]


class FunctionField:
    """L = F_q(t)[y]/(P) with P separable in y; elements are coordinate lists."""

    def __init__(self, F, P):
        if not is_separable(P):
            raise ValueError("P is inseparable in y")
        self.F = F
        self.n = y_degree(P)
        lead = RatFunc(P[self.n])
        self.P = P
        # y^n = -sum_{j<n} (P_j / P_n) y^j
        self.red = [RatFunc(-P[j]) / lead if j in P else self.zero_r() for j in range(self.n)]
        self._ypow = None
        self._basis_p = None

    def zero_r(self):
        return RatFunc(Poly(self.F))

    def one_r(self):
        return RatFunc.const(self.F, 1)

    def element(self, coords):
        c = [x if isinstance(x, RatFunc) else RatFunc(x) for x in coords]
        return c + [self.zero_r()] * (self.n - len(c))

    def y(self):
        e = [self.zero_r()] * self.n
        if self.n == 1:
            e[0] = self.red[0]
        else:
            e[1] = self.one_r()
        return e

    def const(self, r):
        e = [self.zero_r()] * self.n
        e[0] = r if isinstance(r, RatFunc) else RatFunc(r)
        return e

    def mul(self, u, v):
        n = self.n
        prod = [self.zero_r() for _ in range(2 * n - 1)]
        for i, a in enumerate(u):
            if a.is_zero():
                continue
            for j, b in enumerate(v):
                if not b.is_zero():
                    prod[i + j] = prod[i + j] + a * b
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c.is_zero():
                continue
            for j in range(n):
                if not self.red[j].is_zero():
                    prod[k - n + j] = prod[k - n + j] + c * self.red[j]
        return prod[:n]

    def add(self, u, v):
        return [a + b for a, b in zip(u, v)]

    def scale(self, c, u):
        r = RatFunc.const(self.F, c) if isinstance(c, int) else c
        return [r * a for a in u]

    def power(self, u, k):
        out = self.const(self.one_r())
        for _ in range(k):
            out = self.mul(out, u)
        return out

    def _p_basis(self):
        """Columns: coordinates of y^(p m), m < n."""
        if self._basis_p is None:
            yp = self.power(self.y(), self.F.p)
            cols = [self.const(self.one_r())]
            for _ in range(1, self.n):
                cols.append(self.mul(cols[-1], yp))
            self._basis_p = [[cols[j][i] for j in range(self.n)] for i in range(self.n)]
        return self._basis_p

    def decimate(self, u, i):
        """s_i(u) with u = sum_i t^i s_i(u)^p."""
        F = self.F
        c = _rat_solve(F, self._p_basis(), u)
        out = []
        for cm in c:
            out.append(decimate_rational(cm, i))
        return out

    def expand(self, u, x, N):
        """Power series of u = sum_j u_j y^j with y -> x (x a list), mod t^N, as (val, coeffs)."""
        F = self.F
        extra = max((cm.den.valuation() for cm in u if not cm.is_zero()), default=0)
        prec = N + extra
        total = [0] * prec
        xp = [1] + [0] * (prec - 1)
        for j, cm in enumerate(u):
            if j:
                xp = series_mul(F, xp, x[:prec] + [0] * max(0, prec - len(x)), prec)
            if cm.is_zero():
                continue
            vd = cm.den.valuation()
            den = Poly(F, cm.den.coeffs[vd:])
            q = series_div(F, cm.num.coeffs[:prec], den.coeffs, prec)
            term = series_mul(F, q, xp, prec)
            # divide by t^vd later: accumulate with shift
            shifted = [0] * (extra - vd) + term
            for k in range(prec):
                if k < len(shifted) and shifted[k]:
                    total[k] = F.add(total[k], shifted[k])
        # total represents t^extra * u
        if any(total[:extra]):
            raise ValueError("element has a pole at t = 0")
        return total[extra:extra + N]


class FunctionFieldElement:
    """An element of F_q(t)[y]/(P), stored by coordinates in 1, y, ..., y^(n-1)."""

    def __init__(self, ctx, coords):
        self.ctx = ctx
        self.coords = ctx.element(coords)

    @classmethod
    def gen(cls, ctx):
        return cls(ctx, ctx.y())

    @classmethod
    def constant(cls, ctx, r):
        return cls(ctx, ctx.const(r))

    def __add__(self, o):
        return FunctionFieldElement(self.ctx, self.ctx.add(self.coords, o.coords))

    def __sub__(self, o):
        return FunctionFieldElement(self.ctx, [a - b for a, b in zip(self.coords, o.coords)])

    def __mul__(self, o):
        if isinstance(o, FunctionFieldElement):
            return FunctionFieldElement(self.ctx, self.ctx.mul(self.coords, o.coords))
        return FunctionFieldElement(self.ctx, self.ctx.scale(o, self.coords))

    def __pow__(self, k):
        return FunctionFieldElement(self.ctx, self.ctx.power(self.coords, k))

    def __eq__(self, o):
        return isinstance(o, FunctionFieldElement) and self.coords == o.coords

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)

    def decimate(self, i):
        return FunctionFieldElement(self.ctx, self.ctx.decimate(self.coords, i))

    def expand(self, branch, N):
        """Power series mod t^N, with y mapped to the branch coefficients ``branch``."""
        return self.ctx.expand(self.coords, branch, N)

    def __repr__(self):
        return "FunctionFieldElement(" + ", ".join(c.format() for c in self.coords) + ")"


def decimate(u, i):
    """s_i(u) for a :class:`FunctionFieldElement`."""
    return u.decimate(i)


def decimate_rational(c, i):
    """s_i of a rational function: phi^-1 applied to the i-th t-residue part."""
    F = c.field
    p = F.p
    if c.is_zero():
        return c
    num = c.num
    den = c.den
    dpow = Poly(F, [1])
    for _ in range(p - 1):
        dpow = dpow * den
    Nn = num * dpow
    coeffs = [Nn[k] for k in range(i, Nn.degree() + 1, p)]
    E = Poly(F, [F.frob(v, -1) for v in coeffs])
    return RatFunc(E, den)


def decimate_series(F, x, i):
    """s_i of a power series given as a list."""
    return [F.frob(x[k], -1) for k in range(i, len(x), F.p)]


def _span_coords(F, basis, u):
    """Coordinates of u in an F_q-independent list ``basis`` of elements, or None."""
    vecs = basis + [u]
    den = Poly(F, [1])
    for v in vecs:
        for c in v:
            if not c.is_zero():
                den = den * (c.den // den.gcd(c.den))
    keys = set()
    flat = []
    for v in vecs:
        row = {}
        for i, c in enumerate(v):
            if c.is_zero():
                continue
            num = c.num * (den // c.den)
            for k, a in enumerate(num.coeffs):
                if a:
                    row[(i, k)] = a
                    keys.add((i, k))
        flat.append(row)
    keys = sorted(keys)
    from .fields import solve_fq

    A = [[flat[j].get(key, 0) for j in range(len(basis))] for key in keys]
    b = [flat[-1].get(key, 0) for key in keys]
    if not basis:
        return () if not any(b) else None
    if not keys:
        return (0,) * len(basis)
    sol = solve_fq(A, b, F)
    return None if sol is None else tuple(sol)


class ChristolResult:
    """Orbit basis, decimation matrices and the resulting series."""

    def __init__(self, series, basis, matrices, frob_twist, dimension_cap_hit=False):
        self.series = series
        self.basis = basis
        self.matrices = matrices
        self.frob_twist = frob_twist
        self.metadata = {"dimension": len(basis), "frobenius_twist": frob_twist,
                         "dimension_bound": "cap-and-verify"}


def christol_forward(rep, cap=DEFAULT_ORBIT_CAP, details=False):
    """Automatic data of an algebraic branch via the decimation orbit.

    The orbit V of the branch x under s_0..s_{p-1} is found by breadth-first
    search with exact F_q-membership tests.  With A_a the matrix of s_a on a
    basis of V (s_a is phi^-1-semilinear), the data are f1(a) = (phi(A_a^T), +1),
    iota = constant terms of the basis, pi = coordinates of x; f2 is trivial.
    """
    from .series import frobenius_series

    F = rep.field
    p = F.p
    P, k = _frobenius_reduce(rep.P)
    seg = rep.segment
    if k:
        seg = [0] * (len(seg) * p ** k)
        for i, c in enumerate(rep.segment):
            seg[i * p ** k] = F.frob(c, k)
        seg = seg[:max(1, len(seg) - p ** k + 1)]
    L = FunctionField(F, P)
    x = L.y()
    basis = [x]
    i = 0
    while i < len(basis):
        for a in range(p):
            u = L.decimate(basis[i], a)
            if _span_coords(F, basis, u) is None:
                if len(basis) >= cap:
                    from .errors import ResourceError

                    raise ResourceError("decimation orbit", cap)
                basis.append(u)
        i += 1
    d = len(basis)
    mats = {}
    for a in range(p):
        cols = [_span_coords(F, basis, L.decimate(b, a)) for b in basis]
        mats[a] = [[cols[j][r] for j in range(d)] for r in range(d)]
    xs = _newton(F, P, seg, 4 + max(16, 4 * d))
    iota = []
    for b in basis:
        iota.append(L.expand(b, xs, 1)[0])
    f1 = {a: tuple(tuple(F.frob(mats[a][j][i], 1) for j in range(d)) for i in range(d))
          for a in range(p)}
    ident = tuple(tuple(1 if r == c else 0 for c in range(d)) for r in range(d))
    zero = tuple((0,) * d for _ in range(d))
    f2 = {a: (ident if a == 0 else zero) for a in range(p)}
    pi = tuple(1 if j == 0 else 0 for j in range(d))
    inner = AutomaticSeries(F, tuple(iota), pi, f1, f2)
    series = QuasiAutomaticSeries(inner)
    if k:
        series = frobenius_series(series, -k)
    if details:
        return ChristolResult(series, basis, mats, k)
    return series


# ---------------------------------------------------------------------------
# annihilators

class TwistedPolynomial:
    """Monic P(T) = sum_j P_j T^j with P_j in F_q(t), acting by T -> phi."""

    def __init__(self, coeffs):
        self.coeffs = list(coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def numerators(self):
        """Polynomials Q_j with the same relation after clearing denominators."""
        F = self.coeffs[0].field
        den = Poly(F, [1])
        for c in self.coeffs:
            den = den * (c.den // den.gcd(c.den))
        return [c.num * (den // c.den) for c in self.coeffs]

    def residual(self, x, N):
        """sum_j Q_j x^(p^j) mod t^N for a power series x given as a list of length >= N."""
        Q = self.numerators()
        F = Q[0].field
        out = [0] * N
        for j, q in enumerate(Q):
            xp = _frob_series_list(F, x, j, N)
            term = series_mul(F, q.coeffs, xp, N)
            out = [F.add(a, b) for a, b in zip(out, term)]
        return out

    def format(self):
        parts = []
        for j in range(self.degree, -1, -1):
            c = self.coeffs[j]
            if c.is_zero():
                continue
            mono = "" if j == 0 else ("T" if j == 1 else f"T^{j}")
            cs = c.format()
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"TwistedPolynomial({self.format()})"


def _frob_series_list(F, x, j, N):
    """x^(p^j) mod t^N for a list x."""
    q = F.p ** j
    out = [0] * N
    for i, c in enumerate(x):
        if i * q >= N:
            break
        if c:
            out[i * q] = F.frob(c, j)
    return out


def ore_annihilator(x, max_order=None, max_degree=64, extra=64):
    """Monic twisted polynomial annihilating an automatic power series over F_q.

    For coefficient degree bounds D = 1, 2, 4, ... and orders d = 1, 2, ...
    it looks for polynomials Q_j of degree <= D with sum_j Q_j x^(p^j) = 0 mod t^N,
    N = 2 (d+1)(D+1) + extra, by F_q linear algebra; any candidate is then
    re-verified modulo t^(2 N), and once more at double that precision.
    """
    x = x if isinstance(x, QuasiAutomaticSeries) else QuasiAutomaticSeries(x)
    F = x.field
    p = F.p
    if x.a != 1:
        raise ValueError("reshape the series to a = 1 before computing an annihilator")
    dim = x.dim
    max_order = max_order or dim + 1
    inner = x.inner
    D = 1
    while D <= max_degree:
        for d in range(1, max_order + 1):
            N = 2 * (d + 1) * (D + 1) + extra
            xs = [inner.coefficient(i) for i in range(N)]
            rel = _find_relation(F, xs, d, D, N)
            if rel is None:
                continue
            P = _normalize(F, rel, x.b, p)
            Pi = _normalize(F, rel, 0, p)
            for M in (2 * N, 4 * N):
                ys = [inner.coefficient(i) for i in range(M)]
                if not any(Pi.residual(ys, M)):
                    P.metadata = {"order": d, "degree_bound": D, "verified_precision": M,
                                  "shift_b": x.b}
                    return P
        D *= 2
    raise VerificationError("no annihilator found within the search bounds")


def _find_relation(F, xs, d, D, N):
    cols = []
    powers = [_frob_series_list(F, xs, j, N) for j in range(d + 1)]
    for j in range(d + 1):
        for k in range(D + 1):
            col = [0] * k + powers[j][:N - k]
            cols.append(col)
    rows = [[cols[c][r] for c in range(len(cols))] for r in range(N)]
    basis = solve_homogeneous(rows, F)
    for v in basis:
        Q = [Poly(F, v[j * (D + 1):(j + 1) * (D + 1)]) for j in range(d + 1)]
        if not Q[d].is_zero():
            return Q
    return None


def _normalize(F, Q, b, p):
    """Monic form of sum Q_j T^j; with a shift b the series is t^-b times the computed one."""
    Q = list(Q)
    if b:
        Q = [q * Poly.monomial(F, b * p ** j) for j, q in enumerate(Q)]
    lead = Q[-1]
    coeffs = [RatFunc(q, lead) if not q.is_zero() else RatFunc(Poly(F)) for q in Q]
    return TwistedPolynomial(coeffs)


__all__ = [
    "parse_polynomial", "format_polynomial", "AlgebraicSeriesRep", "newton_expand",
    "FunctionField", "FunctionFieldElement", "decimate", "decimate_rational", "christol_forward", "ore_annihilator",
    "TwistedPolynomial", "ParseError", "BranchError", "FqField",
]
