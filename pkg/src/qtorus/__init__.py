"""Exact arithmetic for the level-r quantized algebra of torus observables."""

from .cyclotomic import (CycloContext, CycloElement, Scalar, XParityError,
                         cyclotomic_polynomial, get_context)
from .torus_space import (OperatorMatrix, TorusVector, annulus_pairing,
                          pairing, recursion_oracle, reduce_color,
                          smove_matrix, tmove_matrix)
from .observables import (ProductToSumError, SlopeData, c_action, c_matrix,
                          pairing_form, pairing_form_expanded,
                          product_to_sum, s_matrix_op, slope_data)
from .tqft import (ContinuedFraction, DegenerateSlopeError, GradingError,
                   IteratedGaussSum, LemmaStepError, MoveWord,
                   TensorInvariant, apply_move_word, bracket_S, c_bracket,
                   collapse_via_lemma, cylinder_annulus_invariant,
                   gauss_sum_for, glue_annuli, identity_invariant,
                   lemma_check, link_complement_invariant, literal_bracket,
                   neg_cfrac, sl2_word_check, word_for_slope)
from .nctorus import (ClockShiftModel, CycloRing, LaurentPoly, LaurentRing,
                      NCWord, ScalarRingError, SymbolElement,
                      clock_shift_model, kernel_compare, nc_cosine,
                      orbit_key, rep_operator, star_multiply, weyl_multiply)

__version__ = "0.1.0"
