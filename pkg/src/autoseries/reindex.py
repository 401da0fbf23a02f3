"""Digit-level reindexing of finite-state coefficient functions.

Given finite-state functions x_1..x_r on Z[1/p] >= 0 (automata reading the
reversed canonical word, least significant digit first) the engine builds an
automaton for

    y(s) = sum over t_1..t_r >= 0 with  a_1 t_1 + ... + a_r t_r + B = p^k s
           of  w(x_1(t_1), ..., x_r(t_r)),

where the a_i are positive integers, B is in Z[1/p] (any sign) and k >= 0.
With r = 1 this covers affine reindexing and radix shifts; with r = 2 and
a = (1, 1) it is the Cauchy product.

Reading s least significant digit first, the digits of every t_i are guessed
column by column and matched with a signed carry, which is the uniform
transducer for p-adic addition.  The nondeterminism is removed by tracking,
for every state of the guessing automaton, the number of paths reaching it
modulo p; the output is then a finite sum in F_q.  Columns below the lowest
digit of s are handled by running the path-count vector on virtual zero
digits until it becomes periodic, which is exact whenever each y(s) is a
finite sum (well-ordered supports).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .codec import RADIX, p_adic_pair
from .dfao import (DEFAULT_SUBSET_CAP, DEAD, Dfao, explore, lp0_dfao, lp_dfao, minimize,
                   product, reverse_function)
from .errors import ResourceError
from .fields import FqField


def pad_tolerant_reversed(M, cap=DEFAULT_SUBSET_CAP):
    """Make a reversed-order automaton ignore zeros after the top integer digit.

    The output is taken from the last state reached after the radix mark or
    after a nonzero integer digit.
    """
    di = M.alphabet.index(RADIX)
    digits = [a for a in M.alphabet if a != RADIX]

    def step(k, a):
        if k is DEAD:
            return DEAD
        if k[0] == 0:
            if a == RADIX:
                q = M.delta[k[1]][di]
                return (1, q, q)
            return (0, M.step(k[1], a))
        if a == RADIX:
            return DEAD
        q = M.step(k[1], a)
        return (1, q, q if a != 0 else k[2])

    zero = _zero_like(M.outputs[0])

    def output(k):
        if k is DEAD or k[0] == 0:
            return zero
        return M.outputs[k[2]]

    del digits
    return minimize(explore(M.alphabet, (0, M.q0), step, output, cap=cap))


def _zero_like(o):
    return False if isinstance(o, bool) else 0


def _signed_digits(B, p):
    B = Fraction(B)
    sign = 1 if B >= 0 else -1
    n, e = p_adic_pair(abs(B), p)
    out = {}
    col = -e
    while n:
        n, d = divmod(n, p)
        if d:
            out[col] = sign * d
        col += 1
    return out


class _Engine:
    def __init__(self, xs, coeffs, B, k, p, F, weight):
        if k < 0:
            raise ValueError("the radix shift k must be nonnegative")
        self.xs, self.coeffs, self.k, self.p, self.F = xs, tuple(coeffs), k, p, F
        self.weight = weight
        self.r = len(xs)
        self.bdig = _signed_digits(B, p)
        lo = min(self.bdig, default=0)
        self.hi = max(self.bdig, default=-1)
        self.J = max(-lo, self.hi, k) + 1
        self.cmax = sum(self.coeffs) + 3
        self.tuples = list(itertools.product(range(p), repeat=self.r))
        self._col_memo = {}
        self._done_memo = {}
        self.start = (-self.J - 1, 0, (False,) * self.r, tuple(x.q0 for x in xs))

    def column(self, state, S):
        key = (state, S)
        got = self._col_memo.get(key)
        if got is not None:
            return got
        col, carry, st, qs = state
        J, p = self.J, self.p
        bj = self.bdig.get(col, 0) if -J <= col <= J else 0
        if col == -J - 1:
            nexts = (-J - 1, -J)
        elif col == J + 1:
            nexts = (J + 1,)
        else:
            nexts = (col + 1,)
        out = []
        for u in self.tuples:
            tot = sum(a * d for a, d in zip(self.coeffs, u)) + bj + carry - S
            if tot % p:
                continue
            c2 = tot // p
            if abs(c2) > self.cmax:
                continue
            nst, nqs = list(st), list(qs)
            for i, d in enumerate(u):
                X = self.xs[i]
                if nst[i]:
                    nqs[i] = X.step(nqs[i], d)
                elif d:
                    nst[i] = True
                    nqs[i] = X.step(X.q0, d)
            for nc in nexts:
                if nc == 0:
                    dq = []
                    for i, X in enumerate(self.xs):
                        base = nqs[i] if nst[i] else X.q0
                        dq.append(X.step(base, RADIX))
                    out.append((nc, c2, (True,) * self.r, tuple(dq)))
                else:
                    out.append((nc, c2, tuple(nst), tuple(nqs)))
        self._col_memo[key] = out
        return out

    def completion(self, state):
        """Weighted sum over the ways to finish t_1..t_r above the top digit of s."""
        got = self._done_memo.get(state)
        if got is not None:
            return got
        F = self.F
        col, carry, st, qs = state
        if col >= 0 and col > self.hi and carry == 0:
            val = self.weight(tuple(X.outputs[q] for X, q in zip(self.xs, qs)))
        elif col == self.J + 1 and carry > 0:
            val = 0
        else:
            val = 0
            for nxt in self.column(state, 0):
                c = self.completion(nxt)
                if c:
                    val = F.add(val, c)
        self._done_memo[state] = val
        return val

    @staticmethod
    def _add(vec, state, c, p):
        v = (vec.get(state, 0) + c) % p
        if v:
            vec[state] = v
        else:
            vec.pop(state, None)

    def advance(self, vec, S):
        out = {}
        p = self.p
        for state, c in vec:
            for nxt in self.column(state, S):
                self._add(out, nxt, c, p)
        return tuple(sorted(out.items()))

    def initial(self):
        vec = ((self.start, 1),)
        seen = set()
        while vec not in seen:
            seen.add(vec)
            vec = self.advance(vec, 0)
        return vec

    def build(self, cap=DEFAULT_SUBSET_CAP):
        F, p, k = self.F, self.p, self.k

        def step(key, a):
            if key is DEAD:
                return DEAD
            phase, vec = key
            if a == RADIX:
                if phase:
                    return DEAD
                nv = tuple((s, c) for s, c in vec if s[0] == k)
                return (1, nv)
            nv = self.advance(vec, a)
            return (phase, nv)

        def output(key):
            if key is DEAD or key[0] == 0:
                return 0
            total = 0
            for s, c in key[1]:
                w = self.completion(s)
                if w:
                    total = F.add(total, F.mul(F.from_int(c), w))
            return total

        alphabet = tuple(range(p)) + (RADIX,)
        M = explore(alphabet, (0, self.initial()), step, output, cap=cap,
                    what="reindexing automaton")
        return minimize(M)


def combine_reversed(xs, coeffs, B, k, p, F, weight, cap=DEFAULT_SUBSET_CAP):
    """Reversed-order automaton of y(s) = sum w(x_i(t_i)) over a.t + B = p^k s.

    Every ``xs[i]`` must read reversed words and be tolerant of zeros above
    the top integer digit (see :func:`pad_tolerant_reversed`).
    """
    return _Engine(xs, coeffs, B, k, p, F, weight).build(cap)


def _dotted(M, p):
    """Lift a function on integer words to canonical words with a radix mark."""
    zero = _zero_like(M.outputs[0])
    A = tuple(range(p)) + (RADIX,)

    def step(k, a):
        if k is DEAD:
            return DEAD
        if k[0] == 0:
            return (1, k[1]) if a == RADIX else (0, M.step(k[1], a))
        return DEAD

    def output(k):
        if k is DEAD or k[0] == 0:
            return zero
        return M.outputs[k[1]]

    return minimize(explore(A, (0, M.q0), step, output))


def reindex_standard_dfao(f, a, b, p, field=None, cap=DEFAULT_SUBSET_CAP):
    """f'(s) = f(t) if value(s) = a*value(t) + b, else zero; standard order in and out."""
    integer_words = RADIX not in f.alphabet
    boolean = isinstance(f.outputs[0], bool)
    F = FqField(p) if (field is None or boolean) else field
    g = _dotted(f, p) if integer_words else f
    if boolean:
        g = g.map_outputs(int)
    rev = pad_tolerant_reversed(reverse_function(g, cap), cap)
    y = combine_reversed([rev], (a,), Fraction(b), 0, p, F, lambda o: o[0], cap)
    std = reverse_function(y, cap)
    std = product(std, lp_dfao(p), lambda v, ok: v if ok else 0)
    if integer_words:
        di = std.alphabet.index(RADIX)
        std = explore(tuple(range(p)), std.q0, lambda q, d: std.step(q, d),
                      lambda q: std.outputs[std.delta[q][di]])
        std = product(std, lp0_dfao(p), lambda v, ok: v if ok else 0)
    if boolean:
        std = std.map_outputs(bool)
    return minimize(std)


__all__ = ["combine_reversed", "pad_tolerant_reversed", "reindex_standard_dfao", "ResourceError",
           "Dfao"]
