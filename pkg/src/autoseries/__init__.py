"""Automatic and quasi-automatic generalized power series over finite fields.

The main entry points are re-exported here; see the submodules for the rest.
"""

from .christol import (AlgebraicSeriesRep, TwistedPolynomial, christol_forward, newton_expand,
                       ore_annihilator, parse_polynomial)
from .dfao import Dfao, equivalent, minimize
from .errors import ResourceError, VerificationError
from .fields import FqField, LambdaElement, Poly, RatFunc
from .hahn import (additive_solve, artin_schreier_neg, artin_schreier_pos, support_min,
                   truncation_witness)
from .semilinear import ComposedFunction, SemilinearMap
from .series import (AutomaticSeries, QuasiAutomaticSeries, add, coeff, frobenius_series,
                     hadamard, mul_fq, subst_scale, truncate)
from .twist import (SupportSpec, build_counterexample, periodicity_check,
                    refute_counterexample, twist_recurrent_check)
from .zerosets import LinearRecurrence, algebraic_zero_dfao, binomial_gap_zero_set, lrs_zero_dfao

__version__ = "0.1.0"

__all__ = [
    "AlgebraicSeriesRep", "TwistedPolynomial", "christol_forward", "newton_expand",
    "ore_annihilator", "parse_polynomial", "Dfao", "equivalent", "minimize", "ResourceError",
    "VerificationError", "FqField", "LambdaElement", "Poly", "RatFunc", "additive_solve",
    "artin_schreier_neg", "artin_schreier_pos", "support_min", "truncation_witness",
    "ComposedFunction", "SemilinearMap", "AutomaticSeries", "QuasiAutomaticSeries", "add",
    "coeff", "frobenius_series", "hadamard", "mul_fq", "subst_scale", "truncate", "SupportSpec",
    "build_counterexample", "periodicity_check", "refute_counterexample",
    "twist_recurrent_check", "LinearRecurrence", "algebraic_zero_dfao", "binomial_gap_zero_set",
    "lrs_zero_dfao",
]
