import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from autoseries.fields import (FieldError, FqField, LambdaElement, LambdaRational, Poly, RatFunc,
                               default_modulus, rank_fq, series_div, series_mul,
                               solve_fq, solve_homogeneous)

FIELDS = [FqField(2), FqField(3), FqField(7), FqField(2, 2), FqField(2, 3), FqField(3, 2),
          FqField(5, 2)]


def naive_mul(F, a, b):
    """Schoolbook product in F_p[z]/(modulus) on base-p digit vectors."""
    p, e, m = F.p, F.e, F.modulus
    da = [(a // p ** i) % p for i in range(e)]
    db = [(b // p ** i) % p for i in range(e)]
    prod = [0] * (2 * e)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] += x * y
    for k in range(2 * e - 1, e - 1, -1):
        c = prod[k] % p
        if c:
            for i in range(e + 1):
                prod[k - e + i] -= c * m[i]
    return sum((prod[i] % p) * p ** i for i in range(e))


elems = st.integers(min_value=0, max_value=10 ** 6)


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: f"F{F.q}")
def test_mul_matches_schoolbook(F):
    for a in range(F.q):
        for b in range(F.q):
            assert F.mul(a, b) == naive_mul(F, a, b)


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: f"F{F.q}")
@given(a=elems, b=elems, c=elems)
def test_field_axioms(F, a, b, c):
    a, b, c = a % F.q, b % F.q, c % F.q
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: f"F{F.q}")
@given(a=elems, b=elems, k=st.integers(-4, 4))
def test_frobenius_is_automorphism(F, a, b, k):
    a, b = a % F.q, b % F.q
    assert F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b))
    assert F.frob(F.mul(a, b)) == F.mul(F.frob(a), F.frob(b))
    assert F.frob(a) == F.pow(a, F.p)
    assert F.frob(F.frob(a, k), -k) == a


def test_frobenius_on_f4_generator():
    F = FqField(2, 2)
    g = F.gen
    assert F.pow(g, 3) == 1 and g != 1
    assert F.frob(1, 1) == 1
    assert F.frob(g, 1) == F.mul(g, g)
    assert F.frob(g, 2) == g


def test_default_moduli():
    assert default_modulus(2, 2) == (1, 1, 1)
    assert default_modulus(2, 3) == (1, 1, 0, 1)
    with pytest.raises(FieldError):
        FqField(2, 2, (1, 0, 1))  # z^2 + 1 = (z+1)^2
    with pytest.raises(FieldError):
        FqField(6)


def test_parse_and_json_round_trip():
    for text, q in [("2", 2), ("2^2", 4), ("F_9", 9), ("8", 8)]:
        F = FqField.parse(text)
        assert F.q == q
        assert FqField.from_json(F.to_json()) is F
    with pytest.raises(FieldError):
        FqField.parse("12")


def test_poly_divmod_and_gcd():
    F = FqField(3)
    a = Poly(F, [1, 2, 0, 1])
    b = Poly(F, [2, 1])
    q, r = a.divmod(b)
    assert (q * b + r).coeffs == a.coeffs
    assert r.degree() < b.degree()
    g = (a * b).gcd(b * b)
    assert g.monic().coeffs == b.monic().coeffs


def test_ratfunc_reduces():
    F = FqField(2)
    x = Poly(F, [1, 1])
    r = RatFunc(x * x, x * Poly(F, [0, 1]))
    assert r.num.degree() == 1 and r.den.degree() == 1
    assert (r - r).is_zero()


def test_series_div_inverts_mul():
    F = FqField(5)
    a = [1, 2, 3, 0, 4, 1]
    b = [2, 0, 1, 1, 0, 3]
    c = series_mul(F, a, b, 6)
    assert series_div(F, c, b, 6) == a


# linear algebra

def test_solve_homogeneous_examples():
    F2 = FqField(2)
    assert [list(v) for v in solve_homogeneous([[0]], F2)] == [[1]]
    assert solve_homogeneous([[1, 0, 0], [0, 1, 0], [0, 0, 1]], F2) == []
    basis = solve_homogeneous([[1, 1, 0], [0, 1, 1]], F2)
    assert [list(v) for v in basis] == [[1, 1, 1]]


def _matvec(F, A, v):
    return [F.dot(r, v) for r in A]


@pytest.mark.parametrize("p", [2, 3])
def test_nullspace_matches_enumeration(p, rng):
    F = FqField(p)
    for _ in range(40):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        A = [[rng.randrange(p) for _ in range(n)] for _ in range(m)]
        basis = solve_homogeneous(A, F)
        for v in basis:
            assert not any(_matvec(F, A, v))
        kernel = sum(1 for v in itertools.product(range(p), repeat=n) if not any(_matvec(F, A, v)))
        assert kernel == p ** len(basis)
        assert rank_fq(A, F) + len(basis) == n


def test_solve_fq(rng):
    F = FqField(2, 2)
    for _ in range(30):
        A = [[rng.randrange(4) for _ in range(3)] for _ in range(3)]
        x = [rng.randrange(4) for _ in range(3)]
        b = _matvec(F, A, x)
        y = solve_fq(A, b, F)
        assert y is not None and _matvec(F, A, y) == b
    assert solve_fq([[0]], [1], F) is None


def test_nullspace_over_rational_functions():
    F = FqField(2)
    t = Poly(F, [0, 1])
    one = Poly(F, [1])
    rows = [[RatFunc(t), RatFunc(one)]]
    (v,) = solve_homogeneous(rows)
    total = rows[0][0] * v[0] + rows[0][1] * v[1]
    assert total.is_zero()


# the lambda field

lam_terms = st.dictionaries(
    st.tuples(st.integers(-6, 6), st.integers(0, 3)), st.integers(1, 4), max_size=4)


def _lam(p, d):
    return LambdaElement(p, {Fraction(n, p ** k): c for (n, k), c in d.items()})


@pytest.mark.parametrize("p", [2, 3])
@given(a=lam_terms, b=lam_terms)
def test_lambda_ring_laws(p, a, b):
    x, y = _lam(p, a), _lam(p, b)
    assert x.frobenius(1).frobenius(-1) == x
    assert (x + y).frobenius(1) == x.frobenius(1) + y.frobenius(1)
    assert (x * y).frobenius(1) == x.frobenius(1) * y.frobenius(1)
    assert (x * y) == (y * x)
    assert LambdaElement.from_json(p, x.to_json()) == x


def test_lambda_root_frobenius():
    r = LambdaElement.monomial(2, Fraction(1, 2))
    assert r.frobenius(1) == LambdaElement.monomial(2, 1)


def test_lambda_exact_division():
    p = 3
    a = _lam(p, {(1, 1): 1, (0, 0): 2})
    b = _lam(p, {(2, 0): 1, (-1, 2): 1})
    assert (a * b).exact_div(b) == a


def test_lambda_nullspace():
    p = 2
    one = LambdaElement.one(p)
    lam = LambdaElement.monomial(p, 1)
    rows = [[lam, one], [lam * lam, lam]]
    (v,) = solve_homogeneous(rows)
    assert all(isinstance(c, LambdaRational) for c in v)
    for r in rows:
        assert (r[0] * v[0].num + r[1] * v[1].num).is_zero()
