"""Theta-function products b_{m,n}: high-precision evaluation, unit-product
closed forms from genus theory, and the class invariants they produce."""

__version__ = "0.1.0"

from .errors import (ConsistencyError, DomainError, HypothesisError, NotFoundError,
                     PrecisionExhaustedError, ThetaUnitsError)
from .qseries import (a_numeric, b_numeric, class_invariant_numeric, eta_imag,
                      qpochhammer_inf, theta_phi, theta_psi)
from .quadfields import (class_number, decompositions, fundamental_unit,
                         genus_character, kronecker_symbol, reduced_forms)
from .algrec import eval_closed_form, is_unit_poly, min_poly, parse
from .derive import derive_b, enumerate_admissible, verify_limit_identity
from .modeq import derive_gn_pipeline
