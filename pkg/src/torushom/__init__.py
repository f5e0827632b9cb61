"""Exact homology invariants of torus spaces over Buchsbaum simplicial posets."""

from .field import QQ, PrimeField, Rationals, field_from_name
from .poset import (SimplicialPoset, SubposetMask, PosetError, build_from_facets,
                    build_from_cover_table, preset, validate, incidence_number,
                    link, complement_of_link, face_counts)
from .complexes import (cellular_chain_complex, homology, induced_map, classify,
                        order_complex_homology, reduced_betti, betti)
from .sheaves import (CellularSheaf, CellularCosheaf, standard_sheaf, tensor,
                      sheaf_cohomology, cosheaf_homology, constancy_check,
                      sheaf_dump)
from .torusalg import (ExteriorAlgebra, CharacteristicMap, validate_charmap,
                       coefficient_CAI, TorusSheafKit, ideal_sheaf, pi_cosheaf,
                       keylemma_check, duality_check, les_duality_check)
from .facevec import face_vectors, ft_consistency_check, dehn_sommerville_check
from .specseq import (ManifoldProfile, cone_profile, validate_profile, pages,
                      bigraded_betti, theorem_checks, e2_border_sheaf_crosscheck)
from .facering import relation_system, graded_quotient_rank, kernel_generators

__all__ = [
    "QQ", "PrimeField", "Rationals", "field_from_name",
    "SimplicialPoset", "SubposetMask", "PosetError", "build_from_facets",
    "build_from_cover_table", "preset", "validate", "incidence_number", "link",
    "complement_of_link", "face_counts",
    "cellular_chain_complex", "homology", "induced_map", "classify",
    "order_complex_homology", "reduced_betti", "betti",
    "CellularSheaf", "CellularCosheaf", "standard_sheaf", "tensor",
    "sheaf_cohomology", "cosheaf_homology", "constancy_check", "sheaf_dump",
    "ExteriorAlgebra", "CharacteristicMap", "validate_charmap", "coefficient_CAI",
    "TorusSheafKit", "ideal_sheaf", "pi_cosheaf", "keylemma_check",
    "duality_check", "les_duality_check",
    "face_vectors", "ft_consistency_check", "dehn_sommerville_check",
    "ManifoldProfile", "cone_profile", "validate_profile", "pages",
    "bigraded_betti", "theorem_checks", "e2_border_sheaf_crosscheck",
    "relation_system", "graded_quotient_rank", "kernel_generators",
]
__version__ = "0.1.0"
