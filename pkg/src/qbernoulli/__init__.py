"""Exact q-Bernoulli numbers, p-adic Volkenborn integration on character
sums, and a verification suite for the convolution identities relating
them."""

from .arith import (PadicContext, PadicNumber, Rational, agreement_valuation,
                    binomial, is_prime, padic_arith, padic_log,
                    padic_log_of_rational, padic_of_rational, valuation)
from .bernoulli import (BetaTable, carlitz_beta, classical_bernoulli,
                        modified_beta, modified_beta_closed,
                        modified_beta_inverse_q)
from .convolution import (AmnValue, a_closed, a_direct, a_direct_stabilized,
                          amn_value, discrete_convolution,
                          star_convolution_value)
from .logring import LogLaurent, ll_arith, ll_evaluate, ll_negate_L
from .qcalc import (CharacterSum, QParam, monomial_characters,
                    monomial_derivative, q_bracket)
from .reporting import IdentityReport, SuiteResult
from .series import (RealEvalContext, genfun_coefficient_check,
                     theorem22_partial_sum, theorem22_residual)
from .verify import ALL_SUITES, RunConfig, run_verify
from .volkenborn import (ConvergenceProfile, CostCaps, RiemannSumResult,
                         character_integral, convergence_profile,
                         double_integral, double_riemann_sum,
                         monomial_integral, riemann_sum,
                         weighted_monomial_integral)

__version__ = "0.1.0"
