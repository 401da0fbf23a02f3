from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from autoseries import series as S
from autoseries.fields import FqField
from autoseries.hahn import (AdditivePoly, NotSplitError, SupportError, additive_solve,
                             artin_schreier_neg, artin_schreier_pos, is_zero, load_checkpoint,
                             skew_mul, solve_linear_factor, support_min, truncation_witness)

F2, F3, F4 = FqField(2), FqField(3), FqField(2, 2)


def grid(lo, hi, p, k):
    """Exponents in [lo, hi) with denominator dividing p^k."""
    step = Fraction(1, p ** k)
    e = Fraction(lo)
    while e < hi:
        yield e
        e += step


def terms_of(F, x, lo, hi, k):
    return {e: S.coeff(x, e) for e in grid(lo, hi, F.p, k) if S.coeff(x, e)}


def as_neg_oracle(F, xterms, depth):
    """sum_{k=1..depth} x^(1/p^k) for a finite x, as a dict."""
    out = {}
    for e, c in xterms.items():
        for k in range(1, depth + 1):
            f = e / F.p ** k
            out[f] = F.add(out.get(f, 0), F.frob(c, -k))
    return {e: c for e, c in out.items() if c}


def test_support_min_examples():
    x = S.add(S.monomial(F3, Fraction(-2, 3), 1), S.monomial(F3, 5, 2))
    assert support_min(x) == Fraction(-2, 3)
    assert support_min(x, above=Fraction(-2, 3)) == 5
    assert support_min(x, above=5) is None
    assert support_min(S.power_sparse(F2), above=3) == 4
    assert is_zero(S.sub(x, x))
    assert not is_zero(x)


@pytest.mark.parametrize("F,xterms", [
    (F2, {Fraction(-1): 1}),
    (F2, {Fraction(-1, 2): 1}),
    (F3, {Fraction(-1, 3): 1}),
    (F3, {Fraction(-5): 2, Fraction(-1, 3): 1}),
    (F4, {Fraction(-3, 2): 2, Fraction(-1, 4): 3}),
])
def test_artin_schreier_neg_against_explicit_sum(F, xterms):
    x = S.zero_series(F)
    for e, c in xterms.items():
        x = S.add(x, S.monomial(F, e, c))
    y = artin_schreier_neg(x)
    depth = 5
    lo = min(xterms)
    # terms of the explicit sum that lie below -|lo|/p^depth are complete
    want = as_neg_oracle(F, xterms, depth + 4)
    cut = lo / F.p ** depth
    k = depth + 2
    got = terms_of(F, y, lo, cut, k)
    assert got == {e: c for e, c in want.items() if e < cut and (e * F.p ** k).denominator == 1}
    # exact identity y^p - y = x
    assert is_zero(S.sub(S.sub(S.frobenius_series(y, 1), y), x))


@pytest.mark.parametrize("F", [F2, F3, FqField(5)])
def test_artin_schreier_neg_window(F):
    p = F.p
    x = S.monomial(F, Fraction(-1, p), 1)
    res = artin_schreier_neg(x, details=True)
    yt = res.y_tilde()
    assert 0 < support_min(yt)
    assert is_zero(S.sub(yt, S.truncate(yt, Fraction(1, p))))
    lhs = S.sub(S.frobenius_series(yt, 1), S.shift(yt, Fraction(p - 1, p)))
    assert is_zero(S.sub(lhs, res.x_tilde))


def test_artin_schreier_neg_rejects_positive():
    with pytest.raises(SupportError):
        artin_schreier_neg(S.monomial(F2, 1, 1))
    assert is_zero(artin_schreier_neg(S.zero_series(F2)))


@pytest.mark.parametrize("F,e,c,branch", [(F2, 1, 1, 0), (F2, 1, 1, 1), (F3, Fraction(1, 3), 2, 2),
                                          (F4, Fraction(1, 2), 3, 1)])
def test_artin_schreier_pos_truncation(F, e, c, branch):
    x = S.monomial(F, e, c)
    N = 5
    tr = artin_schreier_pos(x, branch, N)
    assert tr.radius == e * F.p ** N
    y = tr.series
    resid = S.sub(S.sub(S.frobenius_series(y, 1), y), x)
    assert support_min(resid) is None or support_min(resid) >= tr.radius
    assert S.coeff(y, 0) == branch
    for k in range(N):
        assert S.coeff(y, e * F.p ** k) == F.neg(F.frob(c, k))


def test_artin_schreier_pos_errors():
    with pytest.raises(ValueError):
        artin_schreier_pos(S.monomial(F4, 1, 1), c=2)
    with pytest.raises(SupportError):
        artin_schreier_pos(S.monomial(F2, -1, 1))


@given(st.lists(st.integers(0, 3), min_size=1, max_size=3),
       st.lists(st.integers(0, 3), min_size=1, max_size=3),
       st.lists(st.integers(0, 3), min_size=1, max_size=3))
def test_skew_mul_associative_and_acts(A, B, C):
    F = F4
    assert skew_mul(F, skew_mul(F, A, B), C) == skew_mul(F, A, skew_mul(F, B, C))
    terms = {Fraction(-1): 1, Fraction(1, 2): 2}
    if not A[-1] or not B[-1]:
        return
    PA, PB = AdditivePoly(F, A), AdditivePoly(F, B)
    PAB = AdditivePoly(F, skew_mul(F, A, B))
    assert PAB.apply_terms(terms) == PA.apply_terms(PB.apply_terms(terms))


def test_additive_poly_split_form():
    P = AdditivePoly.from_roots(F4, [1, 0])
    assert AdditivePoly(F4, P.coeffs, roots=[1, 0]).degree == 2
    with pytest.raises(ValueError):
        AdditivePoly(F4, [1, 1, 1], roots=[1, 0])


@pytest.mark.parametrize("roots", [[1], [1, 1], [0, 1], [2, 3]])
def test_additive_solve_negative_rhs(roots):
    F = F4
    P = AdditivePoly.from_roots(F, roots)
    x = S.add(S.monomial(F, -3, 2), S.monomial(F, Fraction(-1, 2), 1))
    y = additive_solve(P, x)
    assert is_zero(S.sub(P.apply(y), x))


def test_additive_solve_with_radius():
    F = F2
    P = AdditivePoly.from_roots(F, [1])
    x = S.add(S.monomial(F, -1, 1), S.monomial(F, 1, 1))
    y = additive_solve(P, x, radius=16)
    resid = S.sub(P.apply(y), x)
    assert support_min(resid) is None or support_min(resid) >= 16
    assert y.metadata["certified_radius"] == "16"


def test_linear_factor_not_split():
    # a^(p-1) = mu needs mu to be a (p-1)-th power; over F3 that excludes 2
    with pytest.raises(NotSplitError) as e:
        solve_linear_factor(2, S.monomial(F3, -1, 1))
    assert e.value.degree == 2


def test_witness_artin_schreier():
    """y^2 + y = t^-1 over F2 gives y = t^-1/2 + t^-1/4 + ..."""
    P = [{0: 1}, {0: 1}]
    w = truncation_witness(F2, P, {Fraction(-1): 1}, budget=6)
    assert w.terms == [(Fraction(-1, 2 ** k), 1) for k in range(1, 7)]
    assert w.reason == "budget exhausted"


def test_witness_against_series_rhs():
    x = S.monomial(F3, -1, 1)
    w = truncation_witness(F3, [{0: 2}, {0: 1}], x, budget=4)
    y = artin_schreier_neg(x)
    for e, c in w.terms:
        assert S.coeff(y, e) == c


def test_witness_checkpoint_resume():
    P = [{Fraction(1): 1}, {0: 1}]
    rhs = {Fraction(-2): 1, Fraction(1, 2): 1}
    full = truncation_witness(F2, P, rhs, budget=8)
    part = truncation_witness(F2, P, rhs, budget=4)
    F, P2, rhs2, terms = load_checkpoint(part.dumps())
    resumed = truncation_witness(F, P2, rhs2, budget=8, terms=terms)
    assert resumed.terms == full.terms
    assert part.to_json()["r"] is not None


def test_witness_needs_extension():
    # y^2 + y = g t^-2 ... over F2 the constant boundary equation a^2 + a = 1 has no root
    w = truncation_witness(F2, [{0: 1}, {0: 1}], {Fraction(0): 1}, budget=4)
    assert "extension of degree 2" in w.reason
