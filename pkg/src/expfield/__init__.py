"""Exact computations with finitely presented partial exponential fields.

The package covers Gröbner-basis based field arithmetic, exponential
polynomials, the predimension δ, the modules Ω and Ξ with the closure
operator cl, Khovanskii certificates, bounded strongness searches and a
small presentation language with a command line front end.
"""

from .errors import (ExpFieldError, InputError, ResourceLimitError, ExpUndefinedError,
                     NotInAError, EggRequiredError, CoefficientScopeError, NotClosedError,
                     NoExtensionError, DimensionMismatchError, ParseError, UnitIdealError,
                     NotApplicableError)
from .exact import QMatrix, q_rank, q_kernel
from .ideals import (PolyRing, Poly, Ideal, GroebnerBasis, PresentedField, FieldElement,
                     buchberger, ideal_member, krull_dimension, eliminate, fe_arith, grevlex,
                     lex, block_order)
from .exppoly import ExpPoly, ExpPolyMap, const, var, sym, ep_add, ep_mul, ep_exp, ep_partial, ep_eval
from .presentation import EFieldPresentation, DeltaReport, validate, td, ldim_q, delta
from .differentials import (DiffModule, Derivation, xi_presentation, xi_dim, cl_member,
                            closure_generators, exchange_check, eder_dim, eder_basis,
                            derivation_basis, extend_derivation, verify_derivation,
                            ax_fact_witness)
from .khovanskii import (KhovanskiiCertificate, jacobian, verify_witness, ecl_implies_cl_check,
                         construct_certificate)
from .schanuel import (StrengthReport, EssentialReport, is_strong, ax_inequality_check,
                       dim_via_min_delta, decompose_chain, chain_transitivity, essential_check)
from .syntax import parse, parse_file, format_doc, PresentationDoc

__version__ = "0.1.0"
