"""Zero sets as automata.

For a linear recurrent sequence a_n = u M^n v over F_q, reading the base-p
digits of n most significant first and updating A -> A^p M^d keeps A = M^n;
the matrices that occur form a finite monoid, so the zero set is regular.
For a quasi-automatic series the zero set is the complement of the support.
"""

from __future__ import annotations

from .codec import encode_int
from .dfao import Dfao, complement, explore, lp_dfao, lp0_dfao, minimize, product
from .fields import _is_prime
from .semilinear import identity, mat_mul

DEFAULT_MONOID_CAP = 2 ** 16


class LinearRecurrence:
    """a_n = u M^n v with M a d x d matrix over F_q."""

    def __init__(self, field, M, u, v):
        d = len(M)
        if any(len(r) != d for r in M) or len(u) != d or len(v) != d:
            raise ValueError("inconsistent dimensions")
        self.field = field
        self.M = tuple(tuple(r) for r in M)
        self.u, self.v = tuple(u), tuple(v)

    @classmethod
    def from_recurrence(cls, field, coeffs, initial):
        """a_{n+d} = coeffs[0] a_{n+d-1} + ... + coeffs[d-1] a_n with a_0..a_{d-1} = initial."""
        d = len(coeffs)
        if len(initial) != d:
            raise ValueError("need one initial value per coefficient")
        # state (a_n, ..., a_{n+d-1}); M shifts it by one step
        M = [[0] * d for _ in range(d)]
        for i in range(d - 1):
            M[i][i + 1] = 1
        for j, c in enumerate(coeffs):
            M[d - 1][d - 1 - j] = c
        u = [1] + [0] * (d - 1)
        return cls(field, M, u, initial)

    @property
    def order(self):
        return len(self.M)

    def term(self, n):
        F = self.field
        A = _mat_pow(F, self.M, n)
        return _uav(F, self.u, A, self.v)

    def terms(self, N):
        F = self.field
        out = []
        w = list(self.v)
        for _ in range(N):
            out.append(F.dot(self.u, w))
            w = [F.dot(r, w) for r in self.M]
        return out


def _uav(F, u, A, v):
    Av = [F.dot(r, v) for r in A]
    return F.dot(u, Av)


def _mat_pow(F, A, n):
    R = identity(len(A))
    B = A
    while n:
        if n & 1:
            R = mat_mul(F, R, B)
        B = mat_mul(F, B, B)
        n >>= 1
    return R


def lrs_zero_dfao(rec, p=None, cap=DEFAULT_MONOID_CAP):
    """Minimized DFAO over base-p digits (MSB first) accepting n exactly when a_n = 0."""
    F = rec.field
    p = p or F.p
    powers = {}
    for d in range(p):
        powers[d] = _mat_pow(F, rec.M, d)
    memo = {}

    def step(A, d):
        Ap = memo.get(A)
        if Ap is None:
            Ap = memo[A] = _mat_pow(F, A, p)
        return mat_mul(F, Ap, powers[d])

    def output(A):
        return _uav(F, rec.u, A, rec.v) == 0

    M = explore(tuple(range(p)), identity(rec.order), step, output, cap=cap,
                what="matrix monoid of the recurrence")
    return minimize(M)


def mod_acceptor(p, m, r=0):
    """Base-p integer words (MSB first) whose value is congruent to r mod m."""
    return minimize(explore(tuple(range(p)), 0, lambda k, d: (k * p + d) % m,
                            lambda k: k == r))


def algebraic_zero_dfao(x, cap=None):
    """Canonical words (standard order) at which the inner coefficient of x vanishes."""
    from .series import DEFAULT_MONOID_CAP as SCAP
    from .series import _quasi, support_dfao

    x = _quasi(x)
    S = support_dfao(x, cap or SCAP)
    return minimize(product(complement(S), lp_dfao(x.p), lambda z, ok: bool(z) and ok))


class ZeroSetReport:
    """Brute-force zero set of (1+t)^n - 1 - t^n for n < N and its regular description."""

    def __init__(self, p, N, members, dfao, agrees):
        self.p, self.N = p, N
        self.members = members
        self.dfao = dfao
        self.agrees = agrees

    def expected(self):
        out, k = [], 1
        while k < self.N:
            out.append(k)
            k *= self.p
        return out

    @property
    def ok(self):
        return self.agrees and self.members == self.expected()

    def to_json(self):
        return {"p": self.p, "N": self.N, "members": self.members, "language": "10*",
                "agrees": self.agrees, "ok": self.ok}


def power_of_p_dfao(p):
    """Integer words 1 0* (no leading zeros)."""
    def step(k, d):
        if k == 0:
            return 1 if d == 1 else 3
        if k == 1:
            return 1 if d == 0 else 3
        return 3

    return minimize(explore(tuple(range(p)), 0, step, lambda k: k == 1))


def binomial_gap_zero_set(p, N):
    """Zero set of n -> (1+t)^n - 1 - t^n over F_p for n < N, with the language 10*."""
    if not _is_prime(p):
        raise ValueError("p must be prime")
    # coefficients of (1+t)^n mod p, updated by one multiplication per step
    cur = [1]
    members = []
    for n in range(N):
        gap = list(cur)
        gap[0] = (gap[0] - 1) % p
        gap[n] = (gap[n] - 1) % p
        if not any(gap):
            members.append(n)
        cur = [(a + b) % p for a, b in zip(cur + [0], [0] + cur)]
    M = power_of_p_dfao(p)
    canon = lp0_dfao(p)
    lang = minimize(product(M, canon, lambda a, b: bool(a) and bool(b)))
    found = set(members)
    agrees = all(lang(encode_int(n, p)) == (n in found) for n in range(N))
    return ZeroSetReport(p, N, members, lang, agrees)


__all__ = [
    "LinearRecurrence", "lrs_zero_dfao", "mod_acceptor", "algebraic_zero_dfao",
    "binomial_gap_zero_set", "power_of_p_dfao", "ZeroSetReport", "Dfao",
]
