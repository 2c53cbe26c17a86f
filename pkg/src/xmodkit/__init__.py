"""Crossed modules in modified categories of interest, over finite carriers.

Objects are groups with extra operations given either by Cayley tables or by
structure constants over Z/p.  Every construction in the package returns data
that can be validated exhaustively; the validators return reports with
concrete witnesses rather than raising.
"""
from .actions import (DerivedAction, SplitExtension, action_from_split_extension,
                      conjugation_action, semidirect_product, trivial_action,
                      validate_derived_action, validate_split_extension)
from .core import (OmegaGroup, Signature, enumerate_elements, eval_op, homomorphisms,
                   isomorphisms, validate_omega_group)
from .errors import InternalTheoremViolation, XmodkitError
from .homotopy import (Derivation, HomGroupoid, HomotopyArrow, are_homotopic,
                       are_homotopy_equivalent, concat_derivations,
                       derivation_to_semidirect_morphism, enumerate_derivations,
                       hom_groupoid, homotopy_target, identity_derivation,
                       invert_derivation, validate_derivation)
from .instances import (dialg_to_leibniz, liezation, specialized_derivation_check,
                        transport_homotopy)
from .report import ValidationReport, Violation
from .simplicial import (MooreComplex, SimplicialHomotopy, SimplicialMap,
                         TruncatedSimplicialObject, moore_complex, moore_length_at_most,
                         validate_simplicial, validate_simplicial_homotopy,
                         validate_simplicial_map)
from .transfer import (TransferReport, check_main2, lift_derivation, nerve, nerve_map,
                       x1_map, x1_object, zeta)
from .xmod import (CrossedModule, XModMorphism, compose_morphisms, find_isomorphism,
                   identity_morphism, is_isomorphism, validate_crossed_module,
                   validate_xmod_morphism)

__all__ = [
    "DerivedAction", "SplitExtension", "action_from_split_extension", "conjugation_action",
    "semidirect_product", "trivial_action", "validate_derived_action",
    "validate_split_extension",
    "OmegaGroup", "Signature", "enumerate_elements", "eval_op", "homomorphisms",
    "isomorphisms", "validate_omega_group",
    "InternalTheoremViolation", "XmodkitError",
    "Derivation", "HomGroupoid", "HomotopyArrow", "are_homotopic", "are_homotopy_equivalent",
    "concat_derivations", "derivation_to_semidirect_morphism", "enumerate_derivations",
    "hom_groupoid", "homotopy_target", "identity_derivation", "invert_derivation",
    "validate_derivation",
    "dialg_to_leibniz", "liezation", "specialized_derivation_check", "transport_homotopy",
    "ValidationReport", "Violation",
    "MooreComplex", "SimplicialHomotopy", "SimplicialMap", "TruncatedSimplicialObject",
    "moore_complex", "moore_length_at_most", "validate_simplicial",
    "validate_simplicial_homotopy", "validate_simplicial_map",
    "TransferReport", "check_main2", "lift_derivation", "nerve", "nerve_map", "x1_map",
    "x1_object", "zeta",
    "CrossedModule", "XModMorphism", "compose_morphisms", "find_isomorphism",
    "identity_morphism", "is_isomorphism", "validate_crossed_module", "validate_xmod_morphism",
]
