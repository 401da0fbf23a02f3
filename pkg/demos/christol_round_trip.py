"""From an algebraic equation to automatic data and back.

The root of y^2 + y + t over F_2 is sum t^(2^n).  The decimation orbit of
the root spans a 2-dimensional space, which gives a 4-state DFAO reading the
binary digits of n.  A Frobenius relation is then recovered from the
automatic data alone.
"""

from autoseries import series as S
from autoseries.christol import AlgebraicSeriesRep, christol_forward, newton_expand, ore_annihilator
from autoseries.fields import FqField

F = FqField(2)
rep = AlgebraicSeriesRep.parse("y^2 + y + t", F, (0,))

print("Newton:", newton_expand(rep, 20))
res = christol_forward(rep, details=True)
x = res.series
print("orbit dimension:", len(res.basis))
print("automatic:", S.truncated_coeffs(x, 20))

M = S.coefficient_dfao(x)
print("DFAO states:", M.num_states)

P = ore_annihilator(x)
print("relation:", P.format(), "=", "0")
print("metadata:", P.metadata)
