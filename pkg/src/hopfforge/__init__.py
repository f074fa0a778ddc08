"""Exact construction and verification of finitely presented Hopf algebras.

The universal quantum ax+b group, its quotients 𝒜_{q,n}, coactions on k[x]
and the checkers for all of their structure live here; see the submodules
for details.
"""
from .scalar import (GF, QQ, QQ_q, FieldMismatchError, RatFunc, Residue, field_add,
                     field_inv, field_mul, field_neg, format_scalar, scalar_pow)
from .ncalg import (Element, NonTerminationError, Presentation, check_local_confluence,
                    critical_pairs, extend_hom, hom_well_defined, normal_form)
from .tensor import TensorElement, flip, map_leg, mul_legs, tensor, tensor_mul
from .hopf import (Character, HopfPresentation, MultiplicativeMatrix, antipode_square,
                   char_convolve, check_antipode, check_bialgebra, hopf_ideal_verify,
                   opposite, remark1_matrix_check, theorem1_verify)
from .comodule import (CoactionSpec, check_filtration, check_left_coaction,
                       check_right_coaction, classify_to_universal, coact)
from .axb import (axb_q, axb_qn, laurent_hopf, section4_identities, subgroup_morphism,
                  universal_axb)
from .oracle import oracle_equal, oracle_from_element, oracle_mul
from .dsl import parse_spec, print_spec

__version__ = "0.1.0"
