"""Base-p words for nonnegative integers and nonnegative p-adic rationals.

A word is a tuple whose entries are digits (ints in ``range(p)``) and at most
one radix mark ``'.'``.  Integers are written most significant digit first
with no leading zero (0 is the empty word).  An element of Z[1/p] >= 0 is
written ``s1 '.' s2`` where ``s1`` has no leading zero and ``s2`` has no
trailing zero; integers keep the trailing mark.

The functions here are small and total; the automaton side lives in
:mod:`autoseries.dfao`.
"""

from __future__ import annotations

from fractions import Fraction

RADIX = "."


class WordError(ValueError):
    """A malformed word; ``position`` is the index of the first violation."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (position {position})")
        self.position = position


def p_adic_pair(r, p):
    """Return ``(n, k)`` with r = n / p**k and k minimal; raise if r is not in Z[1/p]."""
    r = Fraction(r)
    n, d = r.numerator, r.denominator
    k = 0
    while d % p == 0:
        d //= p
        k += 1
    if d != 1:
        raise WordError(f"{r} does not have a {p}-power denominator")
    return n, k


def in_z_inv_p(r, p):
    """True if r is a rational with p-power denominator."""
    d = Fraction(r).denominator
    while d % p == 0:
        d //= p
    return d == 1


def encode_int(m, p):
    """The canonical word of a nonnegative integer, most significant digit first."""
    if m < 0:
        raise WordError("negative integers have no encoding")
    out = []
    while m:
        m, r = divmod(m, p)
        out.append(r)
    return tuple(reversed(out))


def decode_int(word, p):
    """Inverse of :func:`encode_int`; rejects leading zeros and radix marks."""
    v = 0
    for i, d in enumerate(word):
        if d == RADIX:
            raise WordError("radix mark in an integer word", i)
        if not isinstance(d, int) or not 0 <= d < p:
            raise WordError(f"digit {d!r} outside base {p}", i)
        if i == 0 and d == 0:
            raise WordError("leading zero", 0)
        v = v * p + d
    return v


def encode_frac(r, p):
    """The canonical word ``s1 . s2`` of r in Z[1/p] >= 0 (r may be an (n, k) pair)."""
    if isinstance(r, tuple):
        r = Fraction(r[0], p ** r[1])
    n, k = p_adic_pair(r, p)
    if n < 0:
        raise WordError("negative values have no encoding")
    ip, fp = divmod(n, p ** k)
    frac = []
    for _ in range(k):
        fp *= p
        d, fp = divmod(fp, p ** k)
        frac.append(d)
    return encode_int(ip, p) + (RADIX,) + tuple(frac)


def check_canonical(word, p):
    """Raise :class:`WordError` unless ``word`` is a canonical element of L_p."""
    dots = [i for i, d in enumerate(word) if d == RADIX]
    if len(dots) != 1:
        raise WordError("expected exactly one radix mark", dots[1] if len(dots) > 1 else len(word))
    j = dots[0]
    for i, d in enumerate(word):
        if i != j and (not isinstance(d, int) or not 0 <= d < p):
            raise WordError(f"digit {d!r} outside base {p}", i)
    if j > 0 and word[0] == 0:
        raise WordError("leading zero", 0)
    if j < len(word) - 1 and word[-1] == 0:
        raise WordError("trailing zero after the radix mark", len(word) - 1)


def decode_frac(word, p):
    """Inverse of :func:`encode_frac`; returns a :class:`fractions.Fraction`."""
    check_canonical(word, p)
    return value(word, p)


def value(word, p):
    """Numeric value of any (possibly padded) word; a word without a mark is an integer."""
    if RADIX in word:
        j = word.index(RADIX)
        s1, s2 = word[:j], word[j + 1:]
    else:
        s1, s2 = word, ()
    v = 0
    for d in s1:
        v = v * p + d
    f = 0
    for d in reversed(s2):
        f = (f + d) / Fraction(p)
    return Fraction(v) + f


def canonical(word, p):
    """Strip leading integer zeros and trailing fractional zeros."""
    if RADIX not in word:
        word = tuple(word) + (RADIX,)
    j = word.index(RADIX)
    s1, s2 = list(word[:j]), list(word[j + 1:])
    while s1 and s1[0] == 0:
        s1.pop(0)
    while s2 and s2[-1] == 0:
        s2.pop()
    return tuple(s1) + (RADIX,) + tuple(s2)


def reverse(word):
    """Reversal; the radix mark position is mirrored."""
    return tuple(reversed(word))


def split(word):
    """``(s1, s2)`` for a word containing one radix mark."""
    j = word.index(RADIX)
    return tuple(word[:j]), tuple(word[j + 1:])


def format_word(word):
    """ASCII form; digits >= 10 are written ``[11]``."""
    return "".join(RADIX if d == RADIX else (str(d) if d < 10 else f"[{d}]") for d in word)


def parse_word(text, p=None):
    """Parse the ASCII form produced by :func:`format_word`."""
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c == RADIX:
            out.append(RADIX)
        elif c.isdigit():
            out.append(int(c))
        elif c == "[":
            j = text.find("]", i)
            if j < 0 or not text[i + 1:j].isdigit():
                raise WordError("unterminated bracketed digit", i)
            out.append(int(text[i + 1:j]))
            i = j
        else:
            raise WordError(f"unexpected character {c!r}", i)
        i += 1
    if p is not None:
        for k, d in enumerate(out):
            if d != RADIX and d >= p:
                raise WordError(f"digit {d} outside base {p}", k)
    if out.count(RADIX) > 1:
        raise WordError("more than one radix mark", len(out) - 1 - out[::-1].index(RADIX))
    return tuple(out)


def words_of_length(p, n, with_radix=False):
    """All words of length n over the digits, optionally with one radix mark inserted."""
    import itertools

    for ds in itertools.product(range(p), repeat=n):
        if not with_radix:
            yield ds
        else:
            for j in range(n + 1):
                yield ds[:j] + (RADIX,) + ds[j:]


class AffineTransducer:
    """Uniform transducer for v -> a*v + b on least-significant-first words.

    The state is the pending carry.  Input is the reversal of a (padded) word;
    the radix mark, when present, is where ``b`` enters the carry.  Without a
    mark the input is an integer and ``b`` enters at the first digit.
    """

    def __init__(self, a, b, p):
        if a < 1 or b < 0:
            raise ValueError("need a >= 1 and b >= 0")
        self.a, self.b, self.p = a, b, p

    @property
    def max_carry(self):
        return self.a + self.b

    def step(self, carry, symbol):
        """Return ``(new_carry, emitted_symbols)``."""
        if symbol == RADIX:
            return carry + self.b, (RADIX,)
        v = self.a * symbol + carry
        return v // self.p, (v % self.p,)

    def flush(self, carry):
        out = []
        while carry:
            carry, r = divmod(carry, self.p)
            out.append(r)
        return tuple(out)

    def transduce(self, rev_word):
        """Image of a reversed word, returned as a reversed canonical word."""
        carry = 0 if RADIX in rev_word else self.b
        out = []
        for s in rev_word:
            carry, em = self.step(carry, s)
            out.extend(em)
        out.extend(self.flush(carry))
        return reverse(canonical(reverse(tuple(out)), self.p))


def affine_transducer(a, b, p):
    """Transducer computing a*value + b on reversed words."""
    return AffineTransducer(a, b, p)
