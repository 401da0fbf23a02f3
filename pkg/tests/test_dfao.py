import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from autoseries.codec import RADIX, encode_frac, value, words_of_length
from autoseries.dfao import (CERTIFIED_NOT, CERTIFIED_WELL_ORDERED, AlphabetError, Dfao,
                             complement, dedekind_cut_dfao, equivalent, explore, is_empty,
                             lp0_dfao, lp_dfao, minimize, product, project_forall,
                             reverse_language, well_ordered_check)


def parity():
    return Dfao((0, 1), [[0, 1], [1, 0]], 0, [0, 1])


def words(alphabet, n):
    for k in range(n + 1):
        yield from itertools.product(alphabet, repeat=k)


def is_canonical(word):
    j = word.index(RADIX) if RADIX in word else None
    if j is None or word.count(RADIX) != 1:
        return False
    return not (j > 0 and word[0] == 0) and not (j < len(word) - 1 and word[-1] == 0)


def test_run_examples():
    M = parity()
    assert M(()) == M.outputs[M.q0]
    assert M((1, 0, 1)) == 0
    assert lp0_dfao(2)((0, 1)) is False
    with pytest.raises(AlphabetError):
        M((2,))


def test_minimize_examples():
    M = minimize(parity())
    assert M.num_states == 2
    with_junk = Dfao((0, 1), [[0, 1], [1, 0], [2, 2]], 0, [0, 1, 7])
    assert minimize(with_junk).num_states == 2
    xor = product(parity(), parity(), lambda a, b: a ^ b)
    assert minimize(xor).num_states == 1


def random_dfao(rng, n, alphabet, outputs):
    delta = [[rng.randrange(n) for _ in alphabet] for _ in range(n)]
    return Dfao(alphabet, delta, 0, [rng.choice(outputs) for _ in range(n)])


@given(st.randoms(use_true_random=False), st.integers(1, 7))
def test_minimize_preserves_function(rng, n):
    M = random_dfao(rng, n, (0, 1, 2), [0, 1, 2])
    m = minimize(M)
    for w in words((0, 1, 2), 6):
        assert M(w) == m(w)
    assert minimize(m).structurally_equal(m)
    assert m.num_states <= len(M.reachable())


def test_product_examples():
    P = product(parity(), parity(), lambda a, b: a)
    assert equivalent(P, parity())
    both = product(parity(), parity(), lambda a, b: bool(a and b))
    assert both((1,)) and not both((1, 1))
    A = tuple(range(2)) + (RADIX,)
    lt3 = product(lp_dfao(2), dedekind_cut_dfao(2, 3), lambda a, b: bool(a and b))
    for w in words(A, 6):
        expect = is_canonical(w) and value(w, 2) < 3
        assert bool(lt3(w)) == expect
    with pytest.raises(AlphabetError):
        product(parity(), Dfao((0, 1, 2), [[0, 0, 0]], 0, [0]), lambda a, b: a)


def finite_language(alphabet, members):
    members = {tuple(w) for w in members}
    return explore(alphabet, (), lambda w, a: (w + (a,)) if len(w) < 8 else w,
                   lambda w: w in members)


def test_reverse_language_examples():
    L = finite_language((0, 1), [(1, 0)])
    R = reverse_language(L)
    assert R((0, 1)) and not R((1, 0))
    no_trailing = reverse_language(lp0_dfao(2))
    for w in words((0, 1), 6):
        assert no_trailing(w) == (not w or w[-1] != 0)
    mult3 = explore((0, 1), 0, lambda r, d: (2 * r + d) % 3, lambda r: r == 0)
    lsb = reverse_language(mult3)
    for n in range(64):
        word = tuple(reversed(tuple(int(c) for c in bin(n)[2:]))) if n else ()
        assert lsb(word) == (n % 3 == 0)


@given(st.randoms(use_true_random=False), st.integers(1, 6))
def test_reverse_involution(rng, n):
    M = random_dfao(rng, n, (0, 1), [False, True])
    back = reverse_language(reverse_language(M))
    diff = product(back, minimize(M), lambda a, b: a != b)
    assert is_empty(diff)
    for w in words((0, 1), 5):
        assert reverse_language(M)(w) == M(tuple(reversed(w)))


def test_project_forall_examples():
    A = tuple(itertools.product((0, 1), (0, 1)))
    everything = Dfao(A, [[0] * 4], 0, [True])
    assert project_forall(everything)((0, 1, 1))
    nothing = Dfao(A, [[0] * 4], 0, [False])
    P = project_forall(nothing)
    assert not P(()) and not P((0,))
    even = explore(A, 0, lambda k, a: (k + a[1]) % 2, lambda k: k == 0)
    P = project_forall(even)
    assert P(())
    for w in words((0, 1), 4):
        if w:
            assert not P(w)


@given(st.randoms(use_true_random=False), st.integers(1, 5))
def test_project_forall_brute_force(rng, n):
    A = tuple(itertools.product((0, 1), (0, 1, 2)))
    M = random_dfao(rng, n, A, [False, True])
    P = project_forall(M)
    for w in words((0, 1), 4):
        lifts = itertools.product((0, 1, 2), repeat=len(w))
        assert P(w) == all(M(tuple(zip(w, ls))) for ls in lifts)


def test_well_ordered_examples():
    A = (0, 1, RADIX)
    # .0*1 : values 2^-k, strictly decreasing with no minimum
    def step(k, a):
        table = {(0, RADIX): 1, (1, 0): 1, (1, 1): "acc"}
        return table.get((k, a), "dead")
    dec = minimize(explore(A, 0, step, lambda k: k == "acc"))
    assert dec((RADIX, 0, 0, 1))
    assert well_ordered_check(dec, 2) == CERTIFIED_NOT
    fin = finite_language(A, [encode_frac(Fraction(3, 4), 2), encode_frac(5, 2)])
    assert well_ordered_check(fin, 2) == CERTIFIED_WELL_ORDERED
    # 10*. : powers of two
    def step2(k, a):
        table = {(0, 1): 1, (1, 0): 1, (1, RADIX): "acc"}
        return table.get((k, a), "dead")
    pw = minimize(explore(A, 0, step2, lambda k: k == "acc"))
    assert well_ordered_check(pw, 2) == CERTIFIED_WELL_ORDERED
    with pytest.raises(ValueError):
        well_ordered_check(complement(pw), 2)


@pytest.mark.parametrize("p", [2, 3])
def test_canonical_language(p):
    M = lp_dfao(p)
    for w in words(tuple(range(p)) + (RADIX,), 5):
        assert M(w) == is_canonical(w)


@pytest.mark.parametrize("p,r", [(2, Fraction(5, 4)), (3, Fraction(1, 2)), (2, 3), (3, Fraction(7, 9))])
def test_dedekind_cut(p, r):
    M = dedekind_cut_dfao(p, r)
    for n in range(6):
        for w in words_of_length(p, n, with_radix=True):
            assert bool(M(w)) == (is_canonical(w) and value(w, p) < r)


def test_json_and_dot_are_stable():
    M = minimize(lp_dfao(3))
    assert Dfao.from_json(M.to_json()).structurally_equal(M)
    assert M.dumps(3) == minimize(lp_dfao(3)).dumps(3)
    assert M.to_dot() == minimize(lp_dfao(3)).to_dot()
