"""Digit-sum supports, linearized recurrences and the twist-recurrence tests.

A sequence satisfies the linearized recurrence (d_0, ..., d_k) when
d_0 c_n + d_1 c_{n+1}^p + ... + d_k c_{n+k}^(p^k) = 0 for all n >= 0.
The sequences tested are read off a coefficient function f on
T_c = S_{1,0,c} cap (-1, 0) along

    c_n = f(-b_1 p^-1 - ... - b_{j-1} p^-(j-1) - p^-n (b_j p^-j + b_{j+1} p^-(j+1) + ...)).

Over a finite field every such sequence is eventually periodic; over
F_p(lambda^(1/p^oo)) the series of :func:`build_counterexample` has no
common recurrence, which :func:`refute_counterexample` certifies by an empty
null space.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .codec import RADIX, in_z_inv_p, p_adic_pair
from .dfao import DEAD, explore, lp_dfao, minimize
from .errors import ResourceError
from .fields import LambdaElement, rank_fq, solve_homogeneous


class StreamExhausted(ValueError):
    """A sequence ran out of terms."""


class DigitSumError(ValueError):
    """The digits of a family exceed the allowed digit sum."""


# ---------------------------------------------------------------------------
# S_{a,b,c}

class SupportSpec:
    """Parameters (a, b, c) of the set S_{a,b,c} for a fixed prime p."""

    def __init__(self, a, b, c, p):
        if a < 1 or c < 0:
            raise ValueError("need a >= 1 and c >= 0")
        self.a, self.b, self.c, self.p = int(a), int(b), int(c), int(p)

    def __repr__(self):
        return f"SupportSpec(a={self.a}, b={self.b}, c={self.c}, p={self.p})"

    def __eq__(self, o):
        return isinstance(o, SupportSpec) and (self.a, self.b, self.c, self.p) == (o.a, o.b, o.c, o.p)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.p))


def digit_sum(r, p):
    """Sum of the base-p digits of a rational in Z[1/p] (integer and fractional parts)."""
    n, _ = p_adic_pair(Fraction(r), p)
    total = 0
    while n:
        n, d = divmod(n, p)
        total += d
    return total


def sabc_member(spec, s):
    """True when s lies in S_{a,b,c}: ceil(a s) >= -b and frac(-a s) has digit sum <= c."""
    s = Fraction(s)
    p = spec.p
    u = spec.a * s
    if not in_z_inv_p(u, p):
        return False
    n = -((-u.numerator) // u.denominator)  # ceil
    if n < -spec.b:
        return False
    return digit_sum(n - u, p) <= spec.c


def sabc_dfao(spec):
    """Boolean DFAO on canonical words of u = a s + b + 1 accepting exactly the s in S_{a,b,c}.

    For u > 0 with fractional digits z_1..z_m (z_m != 0), frac(-a s) has digit
    sum sum_i (p - 1 - z_i) + 1; the automaton keeps that running sum,
    saturating at c + 1.  Integer u > 0 are always accepted.
    """
    p, c = spec.p, spec.c
    canon = lp_dfao(p)
    A = tuple(range(p)) + (RADIX,)
    top = c + 1

    def step(k, a):
        if k is DEAD:
            return DEAD
        q, phase, pos, tot, frac = k
        q = canon.step(q, a)
        if a == RADIX:
            return DEAD if phase else (q, 1, pos, 0, False)
        if phase == 0:
            return (q, 0, pos or a != 0, 0, False)
        return (q, 1, pos, min(top, tot + p - 1 - a), True)

    def output(k):
        if k is DEAD:
            return False
        q, phase, pos, tot, frac = k
        if phase != 1 or not canon.outputs[q]:
            return False
        return tot + 1 <= c if frac else pos

    return minimize(explore(A, (canon.q0, 0, False, 0, False), step, output))


def sabc_value(spec, s):
    """The value u = a s + b + 1 read by :func:`sabc_dfao`."""
    return spec.a * Fraction(s) + spec.b + 1


# ---------------------------------------------------------------------------
# arithmetic on the two coefficient kinds

class _Ops:
    """Uniform arithmetic on packed F_q ints or :class:`LambdaElement` values."""

    def __init__(self, field=None, p=None):
        self.field = field
        self.p = field.p if field is not None else p

    @classmethod
    def of(cls, sample, field=None):
        if field is not None:
            return cls(field=field)
        if isinstance(sample, LambdaElement):
            return cls(p=sample.p)
        raise ValueError("a field is needed for integer-coded coefficients")

    def frob(self, x, k):
        if self.field is not None:
            return self.field.frob(x, k)
        return x.frobenius(k)

    def mul(self, a, b):
        if self.field is not None:
            return self.field.mul(a, b)
        return a * b

    def add(self, a, b):
        if self.field is not None:
            return self.field.add(a, b)
        return a + b

    def zero(self):
        return 0 if self.field is not None else LambdaElement(self.p)

    def is_zero(self, a):
        return a == 0 if self.field is not None else a.is_zero()


def _stream(seq, n):
    if callable(seq):
        return seq(n)
    if n >= len(seq):
        raise StreamExhausted(f"sequence has only {len(seq)} terms")
    return seq[n]


# ---------------------------------------------------------------------------
# linearized recurrences

class Lrr:
    """Coefficients d_0..d_k of d_0 c_n + d_1 c_{n+1}^p + ... + d_k c_{n+k}^(p^k) = 0."""

    def __init__(self, coeffs, field=None):
        self.coeffs = list(coeffs)
        self.field = field
        ops = _Ops.of(self.coeffs[0], field)
        if all(ops.is_zero(d) for d in self.coeffs):
            raise ValueError("an LRR needs a nonzero coefficient")

    @property
    def length(self):
        return len(self.coeffs) - 1

    def residual(self, seq, n):
        ops = _Ops.of(self.coeffs[0], self.field)
        tot = ops.zero()
        for j, d in enumerate(self.coeffs):
            tot = ops.add(tot, ops.mul(d, ops.frob(_stream(seq, n + j), j)))
        return tot

    def from_difference(self):
        """LRR for {c_n} given that this one holds for {c_{n+1}^p - c_n}.

        The coefficients are -d_0, d_0 - d_1, ..., d_{k-1} - d_k, d_k.
        """
        d = self.coeffs
        ops = _Ops.of(d[0], self.field)
        neg = (lambda x: self.field.neg(x)) if self.field is not None else (lambda x: -x)
        out = [neg(d[0])]
        for i in range(1, len(d)):
            out.append(ops.add(d[i - 1], neg(d[i])))
        out.append(d[-1])
        return Lrr(out, self.field)

    def __repr__(self):
        return f"Lrr({self.coeffs})"


def lrr_check(r, seq, N):
    """True when the recurrence holds for n = 0..N-1."""
    ops = _Ops.of(r.coeffs[0], r.field)
    return all(ops.is_zero(r.residual(seq, n)) for n in range(N))


def _lrr_rows(seqs, k, N, ops):
    rows = []
    for seq in seqs:
        for n in range(N):
            rows.append([ops.frob(_stream(seq, n + j), j) for j in range(k + 1)])
    return rows


def lrr_fit(sequences, K, N, field=None, min_order=0):
    """Smallest-order LRR (order <= K) holding on the first N windows of every sequence, or None."""
    sequences = list(sequences)
    if not sequences:
        return None
    sample = _stream(sequences[0], 0)
    ops = _Ops.of(sample, field)
    for k in range(min_order, K + 1):
        rows = _lrr_rows(sequences, k, N, ops)
        basis = solve_homogeneous(rows, field) if field is not None else solve_homogeneous(rows)
        if basis:
            v = basis[0]
            if field is None:
                v = [x.num if hasattr(x, "num") else x for x in v]
            return Lrr(v, field)
    return None


def lrr_nullspace_dim(sequences, k, N, field=None):
    """Dimension of the space of LRRs of order k that hold on all sequences."""
    sequences = list(sequences)
    ops = _Ops.of(_stream(sequences[0], 0), field)
    rows = _lrr_rows(sequences, k, N, ops)
    basis = solve_homogeneous(rows, field) if field is not None else solve_homogeneous(rows)
    return len(basis)


# ---------------------------------------------------------------------------
# sequences attached to a coefficient function on T_c

def tc_point(b_digits, j, n, p):
    """-b_1 p^-1 - ... - b_{j-1} p^-(j-1) - p^-n (b_j p^-j + ...)."""
    z = Fraction(0)
    for i, b in enumerate(b_digits, start=1):
        w = Fraction(b, p ** i)
        z -= w if i < j else w / p ** n
    return z


def tc_sequences(f, j, b_digits, depth, p, c=None):
    """c_0..c_{depth-1} of the family (j, b) for a coefficient function f on T_c."""
    if j < 1:
        raise ValueError("j must be positive")
    if any(not 0 <= b < p for b in b_digits):
        raise ValueError("digits must lie in 0..p-1")
    if c is not None and sum(b_digits) > c:
        raise DigitSumError(f"digit sum {sum(b_digits)} exceeds {c}")
    return [f(tc_point(b_digits, j, n, p)) for n in range(depth)]


def families(p, c, length, budget=None):
    """(j, digits) pairs with digits of the given length and digit sum <= c, in a fixed order."""
    out = []
    for digits in itertools.product(range(p), repeat=length):
        if sum(digits) > c:
            continue
        for j in range(1, length + 1):
            out.append((j, digits))
            if budget is not None and len(out) >= budget:
                return out
    return out


def series_spec(x, cap=None):
    """SupportSpec (a, b, c) containing the support of a quasi-automatic series over F_q.

    With x_s = inner(a s + b), the fractional part of -a s is 1 - frac(j) for
    j = a s + b, whose digit sum is sum_i (p - 1 - z_i) + 1 over the fractional
    digits z_i of j.  c is the largest such value over the support, found by a
    longest-path computation on the support automaton; a positive-weight cycle
    means no c works for this a.
    """
    from .series import DEFAULT_MONOID_CAP, _quasi, support_dfao

    x = _quasi(x)
    p = x.p
    S = support_dfao(x, cap or DEFAULT_MONOID_CAP)
    di = S.alphabet.index(RADIX)
    useful = _coaccessible(S)
    starts = {S.delta[q][di] for q in _accessible(S)} & useful
    n = len(S.delta)
    NEG = None
    val = [0 if S.outputs[q] else NEG for q in range(n)]
    for rnd in range(n + 1):
        changed = False
        for q in useful:
            for a in range(p):
                r = S.delta[q][S.alphabet.index(a)]
                if val[r] is NEG:
                    continue
                w = val[r] + p - 1 - a
                if val[q] is NEG or w > val[q]:
                    val[q] = w
                    changed = True
        if not changed:
            break
        if rnd == n:
            raise ResourceError("bounded fractional digit sums (none exist for this a)", 0)
    c = 0
    for q in starts:
        for a in range(p):
            r = S.delta[q][S.alphabet.index(a)]
            if r in useful and val[r] is not NEG:
                c = max(c, val[r] + p - 1 - a + 1)
    return SupportSpec(x.a, x.b, c, p)


def _coaccessible(M):
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


def _accessible(M):
    seen = {M.q0}
    todo = [M.q0]
    while todo:
        q = todo.pop()
        for r in M.delta[q]:
            if r not in seen:
                seen.add(r)
                todo.append(r)
    return seen


def _default_ms(x, spec, count=6):
    """m values starting at the first one whose window (m - 1, m] / a meets the support."""
    from .hahn import support_min

    lo = support_min(x)
    if lo is None:
        return list(range(-spec.b, -spec.b + count))
    u = spec.a * lo
    start = max(-spec.b, -((-u.numerator) // u.denominator))
    return list(range(start, start + count))


def _f_m(x, spec, m):
    from .series import coeff

    return lambda z: coeff(x, (m + z) / spec.a)


class TwistVerdict:
    """Outcome of a bounded twist-recurrence test: 'pass', 'fail' or 'inconclusive'."""

    def __init__(self, verdict, order=None, witness=None, details=None):
        self.verdict = verdict
        self.order = order
        self.witness = witness or []
        self.details = details or {}

    def to_json(self):
        return {"verdict": self.verdict, "order": self.order,
                "families": [{"j": j, "b": list(b), "m": m} for m, j, b in self.witness],
                **self.details}

    def __repr__(self):
        return f"TwistVerdict({self.verdict}, order={self.order})"


def twist_recurrent_check(f, spec, K=8, depth=12, family_budget=40, length=3, ms=None,
                          field=None, rank_samples=None):
    """Bounded test of the twist-recurrence conditions.

    ``f`` is either a quasi-automatic series (then f_m(z) = x_{(m+z)/a} for
    six values from the first m whose window meets the support, unless ``ms``
    is given) or a single function on T_c.
    Condition (b) is tested by one joint :func:`lrr_fit` per f_m over the
    budgeted families; condition (c) by checking that the F_q-rank of the
    sampled f_m vectors stops growing.
    """
    from .series import QuasiAutomaticSeries

    if isinstance(f, QuasiAutomaticSeries):
        field = f.field
        ms = list(ms if ms is not None else _default_ms(f, spec))
        fs = [(m, _f_m(f, spec, m)) for m in ms]
    else:
        fs = [(0, f)]
    p, c = spec.p, spec.c
    fams = families(p, c, length, family_budget)
    worst = 0
    for m, fm in fs:
        seqs = [tc_sequences(fm, j, b, depth + K, p, c) for j, b in fams]
        seqs = [s for s in seqs if any(not _is_zero_any(v) for v in s)]
        if not seqs:
            continue
        r = lrr_fit(seqs, K, depth, field)
        if r is None:
            witness = [(m, j, b) for (j, b) in fams]
            return TwistVerdict("fail", K, witness, {"nullspace_dim": 0})
        worst = max(worst, r.length)
    details = {"max_order": worst}
    if field is not None and len(fs) > 1:
        pts = rank_samples or sorted({tc_point(b, j, n, p) for j, b in fams for n in range(3)})
        rows = [[fm(z) for z in pts] for _, fm in fs]
        ranks = [rank_fq(rows[:i], field) for i in range(1, len(rows) + 1)]
        details["ranks"] = ranks
        if len(ranks) >= 2 and ranks[-1] != ranks[-2]:
            return TwistVerdict("inconclusive", worst, [], details)
    return TwistVerdict("pass", worst, [], details)


def _is_zero_any(v):
    return v == 0 if isinstance(v, int) else v.is_zero()


def eventually_periodic(seq, M, N):
    """True when seq[n + N] == seq[n] for every n >= M inside the list."""
    return all(seq[n + N] == seq[n] for n in range(M, len(seq) - N))


def find_period(seq, max_pre, max_period):
    """Least (preperiod, period) within the bounds that fits the list, or None."""
    for N in range(1, max_period + 1):
        for M in range(0, max_pre + 1):
            if len(seq) - N - M >= 2 * N and eventually_periodic(seq, M, N):
                return M, N
    return None


def periodicity_check(x, spec, M=8, N=8, depth=40, family_budget=40, length=3, ms=None):
    """Every budgeted family of every f_m becomes periodic of some period <= N after <= M terms.

    Returns (ok, worst) where worst is the largest (preperiod, period) found.
    """
    from .series import QuasiAutomaticSeries

    p, c = spec.p, spec.c
    if isinstance(x, QuasiAutomaticSeries):
        ms = list(ms if ms is not None else _default_ms(x, spec))
        fs = [_f_m(x, spec, m) for m in ms]
    else:
        fs = [x]
    worst = (0, 1)
    for fm in fs:
        for j, b in families(p, c, length, family_budget):
            seq = tc_sequences(fm, j, b, depth, p, c)
            got = find_period(seq, M, N)
            if got is None:
                return False, None
            worst = max(worst, got)
    return True, worst


# ---------------------------------------------------------------------------
# the counterexample over F_p(lambda^(1/p^oo))

def _two_ones(e, p):
    """Positions (i, k) with i < k if -e = p^-i + p^-k exactly, else None."""
    e = Fraction(e)
    if e >= 0 or not in_z_inv_p(e, p):
        return None
    n, k = p_adic_pair(-e, p)
    pos = []
    i = k
    while n:
        n, d = divmod(n, p)
        if d:
            if d != 1:
                return None
            pos.append(i)
        i -= 1
    if len(pos) != 2:
        return None
    lo, hi = sorted(pos)
    return lo, hi


def _lam_sum(p, lo, hi):
    """lambda^(p^-lo + ... + p^-hi)."""
    return LambdaElement.monomial(p, sum(Fraction(1, p ** i) for i in range(lo, hi + 1)))


class Counterexample:
    """Coefficient oracles for the pair y, x with x^p - x = y and t y^p - lambda t^(1/p) y = lambda t^(-1/p)."""

    def __init__(self, p, depth):
        self.p, self.depth = p, depth

    def y(self, e):
        """y = sum_{m>=1} lambda^(p^-1 + ... + p^-m) t^(-p^-1 - p^-(1+m))."""
        pos = _two_ones(e, self.p)
        if pos is None or pos[0] != 1:
            return LambdaElement(self.p)
        m = pos[1] - 1
        return _lam_sum(self.p, 1, m)

    def x(self, e):
        """x = sum_{m,n>=1} lambda^(p^-(1+n) + ... + p^-(m+n)) t^(-p^-(1+n) - p^-(1+m+n))."""
        pos = _two_ones(e, self.p)
        if pos is None or pos[0] < 2:
            return LambdaElement(self.p)
        n = pos[0] - 1
        m = pos[1] - 1 - n
        return _lam_sum(self.p, 1 + n, m + n)

    def y_exponents(self):
        p = self.p
        return [-Fraction(1, p) - Fraction(1, p ** (1 + m)) for m in range(1, self.depth + 1)]

    def x_exponents(self):
        p = self.p
        return [-Fraction(1, p ** (1 + n)) - Fraction(1, p ** (1 + m + n))
                for m in range(1, self.depth + 1) for n in range(1, self.depth + 1)]

    def check_y_relation(self):
        """Residual of t y^p - lambda t^(1/p) y - lambda t^(-1/p) on every exponent in range."""
        p = self.p
        lam = LambdaElement.monomial(p, 1)
        exps = set()
        for e in self.y_exponents():
            exps.update({p * e + 1, e + Fraction(1, p)})
        exps.add(-Fraction(1, p))
        bad = []
        for E in sorted(exps):
            val = self.y((E - 1) / p).frobenius(1) - lam * self.y(E - Fraction(1, p))
            if E == -Fraction(1, p):
                val = val - lam
            if not val.is_zero():
                bad.append(E)
        return bad

    def check_x_relation(self):
        """Residual of x^p - x - y on every exponent of x, x^p and y in range."""
        p = self.p
        exps = set(self.y_exponents())
        for e in self.x_exponents():
            exps.update({e, p * e})
        bad = []
        for E in sorted(exps):
            val = self.x(E / p).frobenius(1) - self.x(E) - self.y(E)
            if not val.is_zero():
                bad.append(E)
        return bad

    def family(self, j, depth):
        """The sequence for b_{j-1} = b_j = 1 (other digits zero)."""
        digits = [0] * (j - 2) + [1, 1]
        return tc_sequences(self.x, j, digits, depth, self.p, 2)

    def expected_family(self, j, depth):
        """lambda^(p^(1-j) + ... + p^(1-j-n)) for j >= 3; the j = 2 family vanishes."""
        p = self.p
        if j == 2:
            return [LambdaElement(p) for _ in range(depth)]
        return [LambdaElement.monomial(p, sum(Fraction(1, p ** (j - 1 + i)) for i in range(n + 1)))
                for n in range(depth)]


def build_counterexample(p, depth=6):
    """Oracles for y and x; raises if either displayed relation fails within ``depth``."""
    from .errors import VerificationError

    ce = Counterexample(p, depth)
    if ce.check_y_relation():
        raise VerificationError("t y^p - lambda t^(1/p) y = lambda t^(-1/p) fails")
    if ce.check_x_relation():
        raise VerificationError("x^p - x = y fails")
    return ce


def refute_counterexample(p, K, window=2, depth=6):
    """Null-space dimension of the joint order-K LRR system over the families j = 2..K+3."""
    ce = build_counterexample(p, depth)
    js = list(range(2, K + 4))
    seqs = [ce.family(j, window + K) for j in js]
    nonzero = [s for s in seqs if any(not v.is_zero() for v in s)]
    dim = lrr_nullspace_dim(nonzero, K, window) if nonzero else K + 1
    return {"p": p, "order": K,
            "families": [{"j": j, "b": [0] * (j - 2) + [1, 1]} for j in js],
            "nullspace_dim": dim}


__all__ = [
    "SupportSpec", "sabc_member", "sabc_dfao", "sabc_value", "digit_sum", "Lrr", "lrr_check",
    "lrr_fit", "lrr_nullspace_dim", "tc_point", "tc_sequences", "families", "series_spec",
    "twist_recurrent_check", "TwistVerdict", "periodicity_check", "find_period",
    "eventually_periodic", "Counterexample", "build_counterexample", "refute_counterexample",
    "StreamExhausted", "DigitSumError",
]
