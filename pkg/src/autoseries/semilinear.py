"""Frobenius-twisted linear algebra over F_q.

A :class:`SemilinearMap` (M, k) acts by v -> M * phi^k(v), where phi^k raises
every coordinate to the p^k-th power.  Composition follows "g o f means apply
f, then g": (M, k) o (N, l) = (M * phi^k(N), k + l).  A word a1...an is
evaluated by a composed function as tau(a1) o ... o tau(an), so the last
digit acts first on a vector.

Matrices are tuples of row tuples holding packed field elements (see
:class:`autoseries.fields.FqField`).
"""

from __future__ import annotations

from .codec import RADIX


class DimensionError(ValueError):
    """Matrices or vectors of incompatible shapes."""


# ---------------------------------------------------------------------------
# dense matrix helpers

def identity(d):
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def zeros(r, c):
    return tuple((0,) * c for _ in range(r))


def mat_mul(F, A, B):
    if A and B and len(A[0]) != len(B):
        raise DimensionError("inner dimensions differ")
    cols = list(zip(*B)) if B else []
    out = []
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if a]
        r = []
        for col in cols:
            s = 0
            for k, a in nz:
                b = col[k]
                if b:
                    s = F.add(s, F.mul(a, b))
            r.append(s)
        out.append(tuple(r))
    return tuple(out)


def mat_vec(F, A, v):
    out = []
    for row in A:
        s = 0
        for a, x in zip(row, v):
            if a and x:
                s = F.add(s, F.mul(a, x))
        out.append(s)
    return tuple(out)


def vec_mat(F, v, A):
    n = len(A[0]) if A else 0
    out = [0] * n
    for x, row in zip(v, A):
        if x:
            for j, a in enumerate(row):
                if a:
                    out[j] = F.add(out[j], F.mul(x, a))
    return tuple(out)


def frob_vec(F, v, k):
    if k % F.e == 0:
        return tuple(v)
    return tuple(F.frob(x, k) for x in v)


def frob_mat(F, A, k):
    if k % F.e == 0:
        return tuple(tuple(r) for r in A)
    return tuple(tuple(F.frob(x, k) for x in r) for r in A)


def transpose_mat(A):
    return tuple(zip(*A)) if A else ()


def kron(F, A, B):
    return tuple(tuple(F.mul(a, b) for a in ra for b in rb) for ra in A for rb in B)


def kron_vec(F, u, v):
    return tuple(F.mul(a, b) for a in u for b in v)


def block_diag(blocks):
    n = sum(len(b) for b in blocks)
    out = []
    off = 0
    for b in blocks:
        for row in b:
            out.append((0,) * off + tuple(row) + (0,) * (n - off - len(row)))
        off += len(b)
    return tuple(out)


def as_matrix(rows):
    return tuple(tuple(int(x) for x in r) for r in rows)


# ---------------------------------------------------------------------------

class SemilinearMap:
    """The map v -> M * phi^k(v) on F_q^d."""

    __slots__ = ("field", "matrix", "twist")

    def __init__(self, field, matrix, twist=0):
        self.field = field
        self.matrix = as_matrix(matrix)
        self.twist = twist
        d = len(self.matrix)
        if any(len(r) != d for r in self.matrix):
            raise DimensionError("semilinear maps need square matrices")

    @property
    def dim(self):
        return len(self.matrix)

    @classmethod
    def identity(cls, field, d):
        return cls(field, identity(d), 0)

    def compose(self, other):
        """self o other: apply ``other`` first."""
        if self.dim != other.dim:
            raise DimensionError("dimension mismatch in composition")
        F = self.field
        M = mat_mul(F, self.matrix, frob_mat(F, other.matrix, self.twist))
        return SemilinearMap(F, M, self.twist + other.twist)

    __matmul__ = compose

    def apply(self, v):
        return mat_vec(self.field, self.matrix, frob_vec(self.field, v, self.twist))

    __call__ = apply

    def transpose(self):
        """T(M, k) = (phi^-k(M^T), -k), the adjoint for the twisted pairing."""
        F = self.field
        return SemilinearMap(F, frob_mat(F, transpose_mat(self.matrix), -self.twist), -self.twist)

    def frobenius(self, k):
        return SemilinearMap(self.field, frob_mat(self.field, self.matrix, k), self.twist)

    def __eq__(self, other):
        if not isinstance(other, SemilinearMap):
            return NotImplemented
        return (self.matrix == other.matrix
                and (self.twist - other.twist) % self.field.e == 0)

    def __hash__(self):
        return hash((self.matrix, self.twist % self.field.e))

    def to_json(self):
        return {"matrix": [list(r) for r in self.matrix], "twist": self.twist}

    def __repr__(self):
        return f"SemilinearMap(twist={self.twist}, matrix={self.matrix})"


def pairing(F, u, v):
    return F.dot(u, v)


class ComposedFunction:
    """Digit-indexed family tau(a) of semilinear maps sharing dimension and twist."""

    def __init__(self, field, maps, twist=None):
        self.field = field
        self.maps = {}
        for a, m in maps.items():
            if not isinstance(m, SemilinearMap):
                m = SemilinearMap(field, m, 1 if twist is None else twist)
            self.maps[a] = m
        dims = {m.dim for m in self.maps.values()}
        twists = {m.twist for m in self.maps.values()}
        if len(dims) > 1:
            raise DimensionError("composed function with mixed dimensions")
        if len(twists) > 1:
            raise ValueError("composed function with mixed twists")
        self.dim = dims.pop() if dims else 0
        self.twist = twists.pop() if twists else (twist or 0)

    @property
    def digits(self):
        return sorted(self.maps)

    def evaluate(self, word):
        """tau(a1) o ... o tau(an); the empty word gives the identity with twist 0."""
        F = self.field
        M = identity(self.dim)
        k = 0
        for a in word:
            m = self.maps[a]
            M = mat_mul(F, M, frob_mat(F, m.matrix, k))
            k += m.twist
        return SemilinearMap(F, M, k)

    def apply_word(self, word, v):
        """Evaluate the word on a vector, last digit first."""
        for a in reversed(word):
            v = self.maps[a].apply(v)
        return v

    def transpose(self):
        return ComposedFunction(self.field, {a: m.transpose() for a, m in self.maps.items()})

    def frobenius(self, k):
        return ComposedFunction(self.field, {a: m.frobenius(k) for a, m in self.maps.items()},
                                twist=self.twist)

    def to_json(self):
        return {"dim": self.dim, "twist": self.twist,
                "digits": {str(a): [list(r) for r in m.matrix] for a, m in sorted(self.maps.items())}}

    @classmethod
    def from_json(cls, field, obj):
        return cls(field, {int(a): SemilinearMap(field, m, obj["twist"])
                           for a, m in obj["digits"].items()}, twist=obj["twist"])


class AutocomposedFunction:
    """f(s) = prod_i tau(class(a1..a_{i-1}), a_i) over a prefix partition.

    ``partition`` is a Dfao over the digits whose states are the prefix
    classes; ``maps[(q, a)]`` is the semilinear map used when digit ``a`` is
    read from class ``q``.
    """

    def __init__(self, field, partition, maps):
        self.field = field
        self.partition = partition
        self.maps = {k: m if isinstance(m, SemilinearMap) else SemilinearMap(field, m, 1)
                     for k, m in maps.items()}
        dims = {m.dim for m in self.maps.values()}
        twists = {m.twist for m in self.maps.values()}
        if len(dims) != 1 or len(twists) != 1:
            raise DimensionError("autocomposed maps must share dimension and twist")
        self.dim = dims.pop()
        self.twist = twists.pop()

    def evaluate(self, word):
        F = self.field
        M = identity(self.dim)
        k = 0
        q = self.partition.q0
        for a in word:
            m = self.maps[(q, a)]
            M = mat_mul(F, M, frob_mat(F, m.matrix, k))
            k += m.twist
            q = self.partition.step(q, a)
        return SemilinearMap(F, M, k)


class PotentiallyComposed:
    """f(s) = pi o inner(s) o iota with linear iota (d' x d) and pi (d x d')."""

    def __init__(self, inner, iota=None, pi=None):
        self.inner = inner
        dp = inner.dim
        self.iota = as_matrix(iota) if iota is not None else identity(dp)
        self.pi = as_matrix(pi) if pi is not None else identity(dp)
        if len(self.iota) != dp or len(self.pi[0]) != dp:
            raise DimensionError("wrapper shapes do not match the inner dimension")
        if len(self.pi) != len(self.iota[0]):
            raise DimensionError("iota and pi disagree on the outer dimension")

    @property
    def field(self):
        return self.inner.field

    @property
    def dim(self):
        return len(self.pi)

    @property
    def inner_dim(self):
        return self.inner.dim

    @property
    def twist(self):
        return self.inner.twist

    def evaluate(self, word):
        F = self.field
        m = self.inner.evaluate(word)
        M = mat_mul(F, mat_mul(F, self.pi, m.matrix), frob_mat(F, self.iota, m.twist))
        return SemilinearMap(F, M, m.twist)


def evaluate(f, word):
    """Evaluate any composed-style function on a word of digits."""
    return f.evaluate(word)


def transpose(f):
    return f.transpose()


def flatten(f):
    """Potentially composed form of an autocomposed function.

    The inner space is V^Q with one copy of V per prefix class; iota is the
    diagonal embedding and pi projects onto the copy of the empty prefix's
    class.  tau'(a) sends (v_q) to (tau(q, a)(v_{delta(q, a)})).
    """
    P = f.partition
    F = f.field
    states = P.reachable()
    pos = {q: i for i, q in enumerate(states)}
    d = f.dim
    n = len(states) * d
    digits = sorted({a for (_, a) in f.maps})
    maps = {}
    for a in digits:
        rows = [[0] * n for _ in range(n)]
        for q in states:
            t = P.step(q, a)
            M = f.maps[(q, a)].matrix
            for i in range(d):
                for j in range(d):
                    rows[pos[q] * d + i][pos[t] * d + j] = M[i][j]
        maps[a] = SemilinearMap(F, rows, f.twist)
    inner = ComposedFunction(F, maps)
    iota = tuple(tuple(1 if r % d == c else 0 for c in range(d)) for r in range(n))
    base = pos[P.q0] * d
    pi = tuple(tuple(1 if c == base + r else 0 for c in range(n)) for r in range(d))
    return PotentiallyComposed(inner, iota, pi)


def _wrap(f):
    if isinstance(f, PotentiallyComposed):
        return f
    return PotentiallyComposed(f)


def reverse_composed(f):
    """g(s) = T(f(rev(s))): transpose every tau(a) and swap iota with pi^T."""
    f = _wrap(f)
    inner = f.inner.transpose()
    return PotentiallyComposed(inner, transpose_mat(f.pi), transpose_mat(f.iota))


def tensor(f, g):
    """Kronecker product of two potentially composed functions with the same twist."""
    f, g = _wrap(f), _wrap(g)
    if f.twist != g.twist:
        raise ValueError("tensor product of functions with different twists")
    F = f.field
    digits = set(f.inner.maps) & set(g.inner.maps)
    maps = {a: SemilinearMap(F, kron(F, f.inner.maps[a].matrix, g.inner.maps[a].matrix), f.twist)
            for a in digits}
    inner = ComposedFunction(F, maps, twist=f.twist)
    return PotentiallyComposed(inner, kron(F, f.iota, g.iota), kron(F, f.pi, g.pi))


def affine_reindex(f, a, b, p, field=None):
    """f'(s) = f(t) when value(s) = a*value(t) + b, otherwise 0.

    ``f`` is a finite-state function given as a :class:`autoseries.dfao.Dfao`
    reading canonical words in standard order, either over the digits only
    (integer words) or over digits and the radix mark.  Boolean outputs give
    a boolean result.  The construction runs the digit-level affine transducer
    on reversed words and re-reverses, as in the engine of
    :mod:`autoseries.reindex`.
    """
    from .reindex import reindex_standard_dfao

    return reindex_standard_dfao(f, a, b, p, field=field)


__all__ = [
    "SemilinearMap", "ComposedFunction", "AutocomposedFunction", "PotentiallyComposed",
    "evaluate", "transpose", "flatten", "reverse_composed", "tensor", "affine_reindex",
    "identity", "mat_mul", "mat_vec", "vec_mat", "frob_mat", "frob_vec", "kron",
    "transpose_mat", "block_diag", "DimensionError", "RADIX",
]
