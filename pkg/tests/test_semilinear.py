import itertools

import pytest
from hypothesis import given, strategies as st

from autoseries.codec import encode_int
from autoseries.dfao import explore
from autoseries.fields import FqField
from autoseries.semilinear import (AutocomposedFunction, ComposedFunction, SemilinearMap,
                                   affine_reindex, evaluate, flatten, frob_vec, identity, kron,
                                   mat_mul, mat_vec, reverse_composed, tensor, transpose)

F4 = FqField(2, 2)
F8 = FqField(2, 3)
g = F4.gen


def rand_map(rng, F, d, k):
    return SemilinearMap(F, [[rng.randrange(F.q) for _ in range(d)] for _ in range(d)], k)


def rand_composed(rng, F, d, p=2, k=1):
    return ComposedFunction(F, {a: rand_map(rng, F, d, k) for a in range(p)})


def words(p, n):
    for k in range(n + 1):
        yield from itertools.product(range(p), repeat=k)


def test_evaluate_examples():
    f = ComposedFunction(F4, {0: SemilinearMap(F4, [[g]], 1), 1: SemilinearMap(F4, [[1]], 1)})
    e = evaluate(f, ())
    assert e.matrix == identity(1) and e.twist == 0
    e = evaluate(f, (0, 0))
    assert e.matrix == ((1,),) and e.twist == 2
    assert evaluate(f, (0,)) == f.maps[0]


def test_transpose_examples():
    I = SemilinearMap(F4, identity(3), 0)
    assert transpose(I) == I
    t = transpose(SemilinearMap(F4, [[g]], 1))
    assert t.matrix == ((F4.mul(g, g),),) and t.twist == -1


@given(st.randoms(use_true_random=False), st.integers(1, 3), st.sampled_from([F4, F8]))
def test_composition_and_transpose_laws(rng, d, F):
    f, h, k = (rand_map(rng, F, d, rng.choice([-1, 1])) for _ in range(3))
    assert (f @ h) @ k == f @ (h @ k)
    assert (f @ h).twist == f.twist + h.twist
    assert transpose(transpose(f)) == f
    assert transpose(f @ h) == transpose(h) @ transpose(f)
    v = [rng.randrange(F.q) for _ in range(d)]
    assert (f @ h).apply(v) == f.apply(h.apply(v))


@given(st.randoms(use_true_random=False), st.integers(1, 3), st.sampled_from([F4, F8]))
def test_pairing_identity(rng, d, F):
    f = rand_map(rng, F, d, 1)
    T = transpose(f)
    for i in range(d):
        for j in range(d):
            u = [int(r == i) for r in range(d)]
            v = [int(r == j) for r in range(d)]
            lhs = F.dot(T.apply(u), v)
            rhs = F.frob(F.dot(u, f.apply(v)), -1)
            assert lhs == rhs


def test_flatten_trivial_partition(rng):
    f = rand_composed(rng, F4, 2)
    P = explore((0, 1), 0, lambda q, a: 0, lambda q: q)
    auto = AutocomposedFunction(F4, P, {(0, a): f.maps[a] for a in (0, 1)})
    flat = flatten(auto)
    assert flat.inner_dim == 2 and flat.iota == identity(2) and flat.pi == identity(2)
    for w in words(2, 5):
        assert flat.evaluate(w) == f.evaluate(w)


def test_flatten_even_odd(rng):
    P = explore((0, 1), 0, lambda q, a: 1 - q, lambda q: q)
    maps = {(q, a): rand_map(rng, F4, 1, 1) for q in (0, 1) for a in (0, 1)}
    auto = AutocomposedFunction(F4, P, maps)
    flat = flatten(auto)
    assert flat.inner_dim == 2
    for w in words(2, 6):
        assert flat.evaluate(w) == auto.evaluate(w)


def test_flatten_identity_maps():
    P = explore((0, 1), 0, lambda q, a: (q + a) % 3, lambda q: q)
    maps = {(q, a): SemilinearMap(F4, identity(2), 1) for q in range(3) for a in (0, 1)}
    flat = flatten(AutocomposedFunction(F4, P, maps))
    for w in words(2, 5):
        assert flat.evaluate(w).matrix == identity(2)


@given(st.randoms(use_true_random=False), st.integers(1, 3), st.sampled_from([F4, F8]))
def test_reverse_composed_duality(rng, d, F):
    f = rand_composed(rng, F, d)
    r = reverse_composed(f)
    rr = reverse_composed(r)
    for w in words(2, 5):
        assert r.evaluate(w) == transpose(f.evaluate(tuple(reversed(w))))
        assert rr.evaluate(w) == f.evaluate(w)


def test_reverse_composed_examples():
    f = ComposedFunction(F4, {0: SemilinearMap(F4, [[g]], 1), 1: SemilinearMap(F4, [[F4.mul(g, g)]], 1)})
    r = reverse_composed(f)
    assert r.evaluate(()).matrix == identity(1)
    assert r.evaluate((0, 1)) == transpose(f.evaluate((1, 0)))


def test_tensor_examples(rng):
    f = rand_composed(rng, F4, 2)
    one = ComposedFunction(F4, {a: SemilinearMap(F4, identity(1), 1) for a in (0, 1)})
    ft = tensor(f, one)
    for w in words(2, 4):
        assert ft.evaluate(w) == f.evaluate(w)
    a1 = ComposedFunction(F4, {0: SemilinearMap(F4, [[g]], 1)})
    b1 = ComposedFunction(F4, {0: SemilinearMap(F4, [[F4.mul(g, g)]], 1)})
    t = tensor(a1, b1).evaluate((0,))
    assert t.matrix == ((1,),) and t.twist == 1
    minus = ComposedFunction(F4, {0: SemilinearMap(F4, [[1]], -1)})
    with pytest.raises(ValueError):
        tensor(a1, minus)


def test_tensor_is_kronecker(rng):
    f, h = rand_composed(rng, F4, 2), rand_composed(rng, F4, 2)
    t = tensor(f, h)
    for w in words(2, 4):
        ef, eh = f.evaluate(w), h.evaluate(w)
        et = t.evaluate(w)
        assert et.matrix == kron(F4, ef.matrix, eh.matrix) and et.twist == ef.twist


def test_apply_word_matches_evaluate(rng):
    f = rand_composed(rng, F8, 3)
    v = [rng.randrange(8) for _ in range(3)]
    for w in words(2, 4):
        m = f.evaluate(w)
        assert tuple(f.apply_word(w, v)) == mat_vec(F8, m.matrix, frob_vec(F8, v, m.twist))
    assert mat_mul(F8, identity(3), identity(3)) == identity(3)


def indicator(p, n):
    target = encode_int(n, p)
    return explore(tuple(range(p)), (), lambda w, a: (w + (a,))[:len(target) + 1],
                   lambda w: w == target)


def test_affine_reindex_examples():
    f = indicator(2, 2)
    same_f = affine_reindex(f, 1, 0, 2)
    g7 = affine_reindex(f, 3, 1, 2)
    for n in range(64):
        w = encode_int(n, 2)
        assert bool(same_f(w)) == (n == 2)
        assert bool(g7(w)) == (n == 7)
    assert not g7(encode_int(4, 2))
