"""Deterministic finite automata with output.

A :class:`Dfao` is the tuple (Q, Sigma, delta, q0, Delta, tau) with dense
integer states.  Most constructions here build automata lazily from a start
key and a step function (:func:`explore`), which keeps products, subset
constructions and reversal tricks short.

Reading orders for words ``s1 . s2`` used elsewhere in the package:

* standard  ``s1 . s2``
* reversed  ``rev(s2) . rev(s1)``
* inward    ``rev(s2) . s1``
* outward   ``rev(s1) . s2``

:func:`reverse_before_dot`, :func:`reverse_after_dot` and
:func:`reverse_function` move between them.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .codec import RADIX
from .errors import ResourceError

DEFAULT_SUBSET_CAP = 2 ** 20
DEAD = ("dead",)


class AlphabetError(ValueError):
    """A symbol outside the automaton's alphabet, or mismatched alphabets."""


class Dfao:
    """Finite automaton with an output value on every state."""

    __slots__ = ("alphabet", "delta", "q0", "outputs", "_index")

    def __init__(self, alphabet, delta, q0, outputs):
        self.alphabet = tuple(alphabet)
        self.delta = [tuple(row) for row in delta]
        self.q0 = q0
        self.outputs = list(outputs)
        self._index = {a: i for i, a in enumerate(self.alphabet)}
        n = len(self.delta)
        if len(self.outputs) != n or not 0 <= q0 < n:
            raise ValueError("inconsistent automaton data")
        for row in self.delta:
            if len(row) != len(self.alphabet) or any(not 0 <= t < n for t in row):
                raise ValueError("transition table is not total")

    @property
    def num_states(self):
        return len(self.delta)

    def step(self, q, a):
        try:
            return self.delta[q][self._index[a]]
        except KeyError:
            raise AlphabetError(f"symbol {a!r} not in alphabet") from None

    def state_after(self, word, q=None):
        q = self.q0 if q is None else q
        for a in word:
            q = self.step(q, a)
        return q

    def run(self, word):
        """f_M(word) = tau(delta*(q0, word))."""
        return self.outputs[self.state_after(word)]

    __call__ = run

    def map_outputs(self, f):
        return Dfao(self.alphabet, self.delta, self.q0, [f(o) for o in self.outputs])

    def reachable(self):
        seen = {self.q0}
        order = [self.q0]
        for q in order:
            for t in self.delta[q]:
                if t not in seen:
                    seen.add(t)
                    order.append(t)
        return order

    def minimize(self):
        return minimize(self)

    def to_json(self, p=None):
        obj = {
            "alphabet": list(self.alphabet),
            "states": self.num_states,
            "delta": [list(r) for r in self.delta],
            "q0": self.q0,
            "outputs": [_json_value(o) for o in self.outputs],
        }
        if p is not None:
            obj["p"] = p
        return obj

    @classmethod
    def from_json(cls, obj):
        outs = [tuple(o) if isinstance(o, list) else o for o in obj["outputs"]]
        return cls(obj["alphabet"], obj["delta"], obj["q0"], outs)

    def dumps(self, p=None):
        return json.dumps(self.to_json(p), sort_keys=True)

    def to_dot(self, name="M"):
        lines = [f"digraph {name} {{", "  rankdir=LR;", '  start [shape=point];']
        for q, o in enumerate(self.outputs):
            shape = "doublecircle" if o is True else "circle"
            lines.append(f'  q{q} [shape={shape}, label="{q}/{_dot_value(o)}"];')
        lines.append(f"  start -> q{self.q0};")
        for q, row in enumerate(self.delta):
            labels = {}
            for a, t in zip(self.alphabet, row):
                labels.setdefault(t, []).append(str(a))
            for t in sorted(labels):
                lines.append(f'  q{q} -> q{t} [label="{",".join(labels[t])}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def structurally_equal(self, other):
        return (self.alphabet == other.alphabet and self.delta == other.delta
                and self.q0 == other.q0 and self.outputs == other.outputs)

    def __repr__(self):
        return f"Dfao(states={self.num_states}, alphabet={self.alphabet!r})"


def _json_value(o):
    if isinstance(o, Fraction):
        return str(o)
    return o


def _dot_value(o):
    if o is True:
        return "1"
    if o is False:
        return "0"
    return str(o)


def explore(alphabet, start, step, output, cap=DEFAULT_SUBSET_CAP, what="automaton"):
    """Build a Dfao by breadth-first search over hashable keys.

    ``step(key, symbol)`` returns the next key; ``output(key)`` the output.
    States are numbered in discovery order with symbols taken in alphabet order.
    """
    alphabet = tuple(alphabet)
    ids = {start: 0}
    keys = [start]
    delta = []
    i = 0
    while i < len(keys):
        k = keys[i]
        row = []
        for a in alphabet:
            nk = step(k, a)
            j = ids.get(nk)
            if j is None:
                j = len(keys)
                if j >= cap:
                    raise ResourceError(what, cap)
                ids[nk] = j
                keys.append(nk)
            row.append(j)
        delta.append(row)
        i += 1
    return Dfao(alphabet, delta, 0, [output(k) for k in keys])


def minimize(M):
    """Minimal automaton for the same function, canonically numbered.

    Partition refinement starting from the partition by output value (Moore's
    algorithm); the result is renumbered by breadth-first search from q0.
    """
    order = M.reachable()
    out_ids = {}
    block = {}
    for q in order:
        block[q] = out_ids.setdefault(_hashable(M.outputs[q]), len(out_ids))
    nblocks = len(out_ids)
    while True:
        sigs = {}
        new = {}
        for q in order:
            sig = (block[q],) + tuple(block[t] for t in M.delta[q])
            new[q] = sigs.setdefault(sig, len(sigs))
        block = new
        if len(sigs) == nblocks:
            break
        nblocks = len(sigs)
    rep = {}
    for q in order:
        rep.setdefault(block[q], q)

    def step(b, a):
        return block[M.step(rep[b], a)]

    return explore(M.alphabet, block[M.q0], step, lambda b: M.outputs[rep[b]])


def _hashable(o):
    return tuple(o) if isinstance(o, list) else o


def product(M1, M2, combine):
    """Automaton computing combine(f_M1(s), f_M2(s))."""
    if M1.alphabet != M2.alphabet:
        if set(M1.alphabet) != set(M2.alphabet):
            raise AlphabetError("product of automata over different alphabets")
    return explore(M1.alphabet, (M1.q0, M2.q0),
                   lambda k, a: (M1.step(k[0], a), M2.step(k[1], a)),
                   lambda k: combine(M1.outputs[k[0]], M2.outputs[k[1]]),
                   what="product automaton")


def complement(M):
    return M.map_outputs(lambda o: not o)


def constant(alphabet, value):
    return Dfao(alphabet, [[0] * len(alphabet)], 0, [value])


def is_empty(M):
    """True if no reachable state has a truthy output."""
    return not any(M.outputs[q] for q in M.reachable())


def equivalent(M1, M2):
    """True if the two automata compute the same function."""
    P = product(M1, M2, lambda a, b: a == b)
    return all(P.outputs[q] for q in P.reachable())


def _check_boolean(M):
    if any(not isinstance(o, bool) for o in M.outputs):
        raise ValueError("automaton output is not boolean")


def _determinize(alphabet, starts, moves, accepting, cap, what):
    """Subset construction; ``moves(q, a)`` yields NFA successors."""

    def step(S, a):
        return frozenset(t for q in S for t in moves(q, a))

    return explore(alphabet, frozenset(starts), step, lambda S: any(accepting(q) for q in S),
                   cap=cap, what=what)


def reverse_language(M, cap=DEFAULT_SUBSET_CAP):
    """Accepts rev(s) exactly when M accepts s (subset construction, minimized)."""
    _check_boolean(M)
    back = [[[] for _ in M.alphabet] for _ in range(M.num_states)]
    for q, row in enumerate(M.delta):
        for i, t in enumerate(row):
            back[t][i].append(q)
    idx = {a: i for i, a in enumerate(M.alphabet)}
    starts = [q for q in range(M.num_states) if M.outputs[q]]
    R = _determinize(M.alphabet, starts, lambda q, a: back[q][idx[a]],
                     lambda q: q == M.q0, cap, "subset construction")
    return minimize(R)


def project_forall(M, cap=DEFAULT_SUBSET_CAP):
    """Over a product alphabet Sigma x Sigma': accept s iff every lift of s is accepted.

    Built as complement, projection to the first track, subset construction,
    complement.  The empty word is accepted iff M accepts the empty word.
    """
    _check_boolean(M)
    if not all(isinstance(a, tuple) and len(a) == 2 for a in M.alphabet):
        raise AlphabetError("project_forall needs an alphabet of pairs")
    first = sorted({a for a, _ in M.alphabet}, key=_sym_key)
    second = sorted({b for _, b in M.alphabet}, key=_sym_key)
    if len(M.alphabet) != len(first) * len(second):
        raise AlphabetError("alphabet is not a full product")
    idx = {a: i for i, a in enumerate(M.alphabet)}

    def moves(q, a):
        return [M.delta[q][idx[(a, b)]] for b in second]

    bad = _determinize(first, [M.q0], moves, lambda q: not M.outputs[q], cap,
                       "projection subset construction")
    return minimize(complement(bad))


def _sym_key(a):
    return (1, "") if a == RADIX else (0, a) if isinstance(a, int) else (2, str(a))


# ---------------------------------------------------------------------------
# reversal of finite-state functions

def reverse_function(M, cap=DEFAULT_SUBSET_CAP):
    """Automaton computing w -> f_M(rev(w)).

    The state after reading w is the function g_w(q) = tau(delta*(q, rev(w))),
    updated by g_{wa}(q) = g_w(delta(q, a)); the output is g_w(q0).
    """
    n = M.num_states
    idx = {a: i for i, a in enumerate(M.alphabet)}
    start = tuple(_hashable(o) for o in M.outputs)

    def step(g, a):
        i = idx[a]
        return tuple(g[M.delta[q][i]] for q in range(n))

    return minimize(explore(M.alphabet, start, step, lambda g: g[M.q0], cap=cap,
                            what="reversal"))


def reverse_after_dot(M, cap=DEFAULT_SUBSET_CAP, dead_value=0):
    """From M reading ``u . w`` build the automaton reading ``u . rev(w)``.

    Words with no mark or several marks go to a dead state with ``dead_value``.
    """
    n = M.num_states
    idx = {a: i for i, a in enumerate(M.alphabet)}
    di = idx[RADIX]
    outs = tuple(_hashable(o) for o in M.outputs)

    def step(k, a):
        if k is DEAD:
            return DEAD
        if k[0] == 0:
            q = k[1]
            if a == RADIX:
                return (1, M.delta[q][di], outs)
            return (0, M.delta[q][idx[a]])
        if a == RADIX:
            return DEAD
        _, qd, g = k
        i = idx[a]
        return (1, qd, tuple(g[M.delta[q][i]] for q in range(n)))

    def output(k):
        if k is DEAD or k[0] == 0:
            return dead_value
        return k[2][k[1]]

    return minimize(explore(M.alphabet, (0, M.q0), step, output, cap=cap,
                            what="segment reversal"))


def reverse_before_dot(M, cap=DEFAULT_SUBSET_CAP, dead_value=0):
    """From M reading ``u . w`` build the automaton reading ``rev(u) . w``."""
    n = M.num_states
    idx = {a: i for i, a in enumerate(M.alphabet)}
    di = idx[RADIX]

    def step(k, a):
        if k is DEAD:
            return DEAD
        if k[0] == 0:
            h = k[1]
            if a == RADIX:
                return (1, M.delta[h[M.q0]][di])
            i = idx[a]
            return (0, tuple(h[M.delta[q][i]] for q in range(n)))
        if a == RADIX:
            return DEAD
        return (1, M.delta[k[1]][idx[a]])

    def output(k):
        if k is DEAD or k[0] == 0:
            return dead_value
        return M.outputs[k[1]]

    return minimize(explore(M.alphabet, (0, tuple(range(n))), step, output, cap=cap,
                            what="segment reversal"))


# ---------------------------------------------------------------------------
# standard languages

def digits_alphabet(p, radix=True):
    return tuple(range(p)) + ((RADIX,) if radix else ())


def lp0_dfao(p):
    """Canonical integer words (no leading zero, no mark), MSB first."""
    # 0: empty, 1: inside a number, 2: dead
    delta = [[2] + [1] * (p - 1), [1] * p, [2] * p]
    return Dfao(range(p), delta, 0, [True, True, False])


def lp_dfao(p):
    """Canonical words ``s1 . s2`` in standard order."""
    A = digits_alphabet(p)
    # 0 start, 1 int part, 2 frac ok, 3 frac ends in zero, 4 dead
    rows = {
        0: [4] + [1] * (p - 1) + [2],
        1: [1] * p + [2],
        2: [3] + [2] * (p - 1) + [4],
        3: [3] + [2] * (p - 1) + [4],
        4: [4] * (p + 1),
    }
    return Dfao(A, [rows[i] for i in range(5)], 0, [False, False, True, False, False])


def lp_reversed_dfao(p):
    """Canonical words read in reversed order ``rev(s2) . rev(s1)``."""
    A = digits_alphabet(p)
    # 0 start, 1 frac started, 2 after mark (accept), 3 int last digit zero, 4 dead
    rows = {
        0: [4] + [1] * (p - 1) + [2],
        1: [1] * p + [2],
        2: [3] + [2] * (p - 1) + [4],
        3: [3] + [2] * (p - 1) + [4],
        4: [4] * (p + 1),
    }
    return Dfao(A, [rows[i] for i in range(5)], 0, [False, False, True, False, False])


def lp_inward_dfao(p):
    """Canonical words read in inward order ``rev(s2) . s1``."""
    A = digits_alphabet(p)
    # 0 start, 1 frac started, 2 after mark, 3 int started, 4 dead
    rows = {
        0: [4] + [1] * (p - 1) + [2],
        1: [1] * p + [2],
        2: [4] + [3] * (p - 1) + [4],
        3: [3] * p + [4],
        4: [4] * (p + 1),
    }
    return Dfao(A, [rows[i] for i in range(5)], 0, [False, False, True, True, False])


def expansion(r, p):
    """Integer part and eventually periodic fractional digits of r >= 0.

    Returns ``(n, pre, cyc)`` with r = n + 0.pre(cyc)... in base p; ``cyc`` is
    ``(0,)`` for terminating expansions.
    """
    r = Fraction(r)
    n = r.numerator // r.denominator
    f = r - n
    seen = {}
    digits = []
    while f not in seen:
        seen[f] = len(digits)
        f *= p
        d = f.numerator // f.denominator
        digits.append(d)
        f -= d
    j = seen[f]
    return n, tuple(digits[:j]), tuple(digits[j:])


def dedekind_cut_dfao(p, r):
    """Canonical words s (standard order) with value < r; non-canonical words rejected."""
    r = Fraction(r)
    A = digits_alphabet(p)
    canon = lp_dfao(p)
    if r <= 0:
        return minimize(constant(A, False))
    n, pre, cyc = expansion(r, p)
    frac_digits = pre + cyc
    L = len(frac_digits)

    def digit_at(i):
        return frac_digits[i] if i < L else cyc[(i - len(pre)) % len(cyc)]

    def tail_pos(i):
        return i if i < L else len(pre) + (i - len(pre)) % len(cyc)

    tail_nonzero = {}
    for i in range(L):
        rest = frac_digits[i:] + cyc
        tail_nonzero[i] = any(rest)

    def step(k, a):
        c, st = k
        c = canon.step(c, a)
        kind = st[0]
        if kind == "int":
            if a == RADIX:
                v = st[1]
                if v < n:
                    return (c, ("lt",))
                if v > n:
                    return (c, ("gt",))
                return (c, ("eq", 0))
            return (c, ("int", min(st[1] * p + a, n + 1)))
        if kind == "eq":
            if a == RADIX:
                return (c, ("gt",))
            d = digit_at(st[1])
            if a < d:
                return (c, ("lt",))
            if a > d:
                return (c, ("gt",))
            return (c, ("eq", tail_pos(st[1] + 1)))
        return (c, st)

    def output(k):
        c, st = k
        if not canon.outputs[c]:
            return False
        if st[0] == "lt":
            return True
        if st[0] == "eq":
            return tail_nonzero[st[1]]
        return False

    return minimize(explore(A, (canon.q0, ("int", 0)), step, output))


# ---------------------------------------------------------------------------
# well-ordered support

CERTIFIED_WELL_ORDERED = "certified-well-ordered"
CERTIFIED_NOT = "certified-not"
INCONCLUSIVE = "inconclusive"


def _useful_states(M):
    reach = set(M.reachable())
    rev = {q: set() for q in range(M.num_states)}
    for q, row in enumerate(M.delta):
        for t in row:
            rev[t].add(q)
    co = {q for q in range(M.num_states) if M.outputs[q]}
    stack = list(co)
    while stack:
        q = stack.pop()
        for s in rev[q]:
            if s not in co:
                co.add(s)
                stack.append(s)
    return reach & co


def well_ordered_check(M, p, max_cycles=10000):
    """Three-valued analysis of whether the values of L(M) form a well-ordered set.

    M reads canonical words in standard order.  A simple cycle c at a state
    after the radix mark pumps a strictly decreasing chain whenever some
    accepted continuation from that state exceeds c in the first |c| digits;
    that yields ``certified-not``.  Otherwise, if every useful state after
    the mark lies on at most one simple cycle, the verdict is
    ``certified-well-ordered``; if not, ``inconclusive``.
    """
    _check_boolean(M)
    outside = product(M, lp_dfao(p), lambda a, b: a and not b)
    if not is_empty(outside):
        raise ValueError("language is not contained in the canonical words")
    useful = _useful_states(M)
    di = M.alphabet.index(RADIX)
    post = set()
    stack = [M.delta[q][di] for q in useful if M.delta[q][di] in useful]
    post.update(stack)
    while stack:
        q = stack.pop()
        for a in range(p):
            t = M.step(q, a)
            if t in useful and t not in post:
                post.add(t)
                stack.append(t)
    edges = {q: [(a, M.step(q, a)) for a in range(p) if M.step(q, a) in post] for q in post}

    # decreasing pumps along simple cycles
    count = 0
    for q0 in sorted(post):
        stack = [(q0, (), (q0,))]
        while stack:
            q, word, path = stack.pop()
            for a, t in edges[q]:
                if t == q0:
                    count += 1
                    c = word + (a,)
                    for i, qi in enumerate(path):
                        if _pumps_down(M, p, qi, c[i:] + c[:i], post):
                            return CERTIFIED_NOT
                    if count > max_cycles:
                        return INCONCLUSIVE
                elif t not in path and t > q0:
                    stack.append((t, word + (a,), path + (t,)))
    # cycle structure: each nontrivial strongly connected component a simple cycle
    for comp in _sccs(post, edges):
        internal = sum(1 for q in comp for _, t in edges[q] if t in comp)
        if internal and internal != len(comp):
            return INCONCLUSIVE
    return CERTIFIED_WELL_ORDERED


def _pumps_down(M, p, q, c, useful):
    r = q
    for ci in c:
        for d in range(ci + 1, p):
            if M.step(r, d) in useful:
                return True
        r = M.step(r, ci)
    return False


def _sccs(nodes, edges):
    index, low, onstack, stack, out = {}, {}, set(), [], []
    counter = [0]

    def strong(v):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        onstack.add(v)
        for _, w in edges[v]:
            if w not in index:
                strong(w)
                low[v] = min(low[v], low[w])
            elif w in onstack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = set()
            while True:
                w = stack.pop()
                onstack.discard(w)
                comp.add(w)
                if w == v:
                    break
            out.append(comp)

    import sys

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10 * len(nodes) + 1000))
    try:
        for v in sorted(nodes):
            if v not in index:
                strong(v)
    finally:
        sys.setrecursionlimit(old)
    return out


def accepted_values(M, p, max_len):
    """Values of accepted canonical words of length <= max_len (standard order)."""
    from .codec import value

    out = set()
    frontier = [((), M.q0)]
    for _ in range(max_len + 1):
        nxt = []
        for w, q in frontier:
            if M.outputs[q]:
                out.add(value(w, p))
            for a in M.alphabet:
                nxt.append((w + (a,), M.step(q, a)))
        frontier = nxt
    return out


__all__ = [
    "Dfao", "explore", "minimize", "product", "complement", "constant", "is_empty",
    "equivalent", "reverse_language", "project_forall", "reverse_function",
    "reverse_after_dot", "reverse_before_dot", "lp0_dfao", "lp_dfao", "lp_reversed_dfao",
    "lp_inward_dfao", "dedekind_cut_dfao", "expansion", "well_ordered_check",
    "CERTIFIED_WELL_ORDERED", "CERTIFIED_NOT", "INCONCLUSIVE", "AlphabetError",
]
