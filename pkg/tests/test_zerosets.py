import random

import pytest

from autoseries import series as S
from autoseries.codec import encode_frac, encode_int
from autoseries.dfao import equivalent
from autoseries.fields import FqField
from autoseries.zerosets import (LinearRecurrence, algebraic_zero_dfao, binomial_gap_zero_set,
                                 lrs_zero_dfao, mod_acceptor, power_of_p_dfao)

F2, F3, F4, F5 = FqField(2), FqField(3), FqField(2, 2), FqField(5)


def brute_terms(F, coeffs, initial, N):
    """Direct iteration of a_{n+d} = sum_j coeffs[j] a_{n+d-1-j}."""
    a = list(initial)
    while len(a) < N:
        v = 0
        for j, c in enumerate(coeffs):
            v = F.add(v, F.mul(c, a[-1 - j]))
        a.append(v)
    return a[:N]


def test_terms_match_iteration():
    rec = LinearRecurrence.from_recurrence(F3, [1, 1], [0, 1])
    assert rec.terms(10) == brute_terms(F3, [1, 1], [0, 1], 10)
    assert rec.term(9) == rec.terms(10)[9]
    with pytest.raises(ValueError):
        LinearRecurrence.from_recurrence(F3, [1, 1], [0])


def test_fibonacci_mod_2():
    rec = LinearRecurrence.from_recurrence(F2, [1, 1], [0, 1])
    M = lrs_zero_dfao(rec)
    assert equivalent(M, mod_acceptor(2, 3))
    assert [n for n in range(20) if M(encode_int(n, 2))] == [0, 3, 6, 9, 12, 15, 18]


def _check_against_brute(F, coeffs, initial, N=4096):
    rec = LinearRecurrence.from_recurrence(F, coeffs, initial)
    M = lrs_zero_dfao(rec)
    seq = brute_terms(F, coeffs, initial, N)
    for n in range(N):
        assert M(encode_int(n, F.p)) == (seq[n] == 0), n


@pytest.mark.parametrize("F,coeffs,initial", [
    (F2, [1, 1], [0, 1]),
    (F3, [1, 1], [0, 1]),
    (F5, [2, 3], [1, 0]),
    (F2, [0, 1, 1], [1, 0, 0]),
    (F4, [2, 1], [0, 3]),
    (F3, [0, 0, 1], [1, 0, 2]),
    (F5, [1, 0, 4], [0, 1, 1]),
])
def test_lrs_zero_sets(F, coeffs, initial):
    _check_against_brute(F, coeffs, initial)


def test_random_recurrences():
    rng = random.Random(11)
    for F in (F3, F4):
        for _ in range(3):
            d = rng.randint(1, 3)
            coeffs = [rng.randrange(F.q) for _ in range(d)]
            initial = [rng.randrange(F.q) for _ in range(d)]
            _check_against_brute(F, coeffs, initial, N=729)


def test_mod_acceptor():
    M = mod_acceptor(3, 4, 1)
    assert [n for n in range(20) if M(encode_int(n, 3))] == [1, 5, 9, 13, 17]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_power_of_p_dfao(p):
    M = power_of_p_dfao(p)
    assert [n for n in range(1, p ** 4) if M(encode_int(n, p))] == [1, p, p ** 2, p ** 3]


@pytest.mark.parametrize("p,k", [(2, 6), (3, 6), (5, 4)])
def test_binomial_gap(p, k):
    rep = binomial_gap_zero_set(p, p ** k)
    assert rep.members == [p ** i for i in range(k)]
    assert rep.ok and rep.to_json()["language"] == "10*"
    with pytest.raises(ValueError):
        binomial_gap_zero_set(4, 16)


def test_binomial_gap_oracle():
    """Direct binomial coefficients mod p give the same members."""
    from math import comb

    p, N = 3, 200
    # n = 0 is excluded: (1+t)^0 - 1 - t^0 = -1
    direct = [n for n in range(1, N) if all(comb(n, i) % p == 0 for i in range(1, n))]
    assert binomial_gap_zero_set(p, N).members == direct


@pytest.mark.parametrize("x,F", [(S.power_sparse(F3), F3), (S.geometric(F2), F2),
                                 (S.add(S.power_sparse(F2), S.monomial(F2, -1, 1)), F2)])
def test_algebraic_zero_set(x, F):
    Z = algebraic_zero_dfao(x)
    p = F.p
    for n in range(-x.b, 100):
        w = encode_frac(x.a * n + x.b, p)
        assert Z(w) == (S.coeff(x, n) == 0), n
