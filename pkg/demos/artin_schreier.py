"""Solving y^p - y = x for x = t^(-1/p).

The answer y = t^(-1/p^2) + t^(-1/p^3) + ... has infinitely many terms
accumulating at 0, yet it is described by finite automatic data.
"""

from fractions import Fraction

from autoseries import series as S
from autoseries.fields import FqField
from autoseries.hahn import artin_schreier_neg, is_zero, support_min

for p in (2, 3):
    F = FqField(p)
    x = S.monomial(F, Fraction(-1, p), 1)
    res = artin_schreier_neg(x, details=True)
    y = res.y
    grid = [Fraction(n, p ** 6) for n in range(-p ** 6, 1)]
    print(f"p = {p}: support of y on (-1, 0]:", [str(e) for e in grid if y.coeff(e)])
    print("  y^p - y == x:", is_zero(S.sub(S.sub(S.frobenius_series(y, 1), y), x)))
    yt = res.y_tilde()
    print("  window solution starts at", support_min(yt), "and stays below", Fraction(1, p))
