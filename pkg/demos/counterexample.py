"""A series over F_p(lambda^(1/p^oo)) with no linearized recurrence.

Over a finite field the digit families of an algebraic series always satisfy
a common recurrence.  Over the perfect closure of F_p(lambda) this fails: the
joint linear system has only the zero solution for every tested order.
"""

from autoseries.twist import build_counterexample, refute_counterexample

for p in (2, 3):
    ce = build_counterexample(p, depth=6)
    print(f"p = {p}: both defining relations hold to depth 6")
    for j in (3, 4):
        print(f"  family j = {j}:", [str(v) for v in ce.family(j, 3)])
    for K in (1, 2, 3, 4):
        out = refute_counterexample(p, K)
        print(f"  order {K}: null space dimension {out['nullspace_dim']}")
