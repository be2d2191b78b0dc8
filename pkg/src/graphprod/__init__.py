"""Graph products of pairs of groups: normal forms, buildings, commensurability
witnesses and Coxeter-group matrix images, at desk scale."""

from .exceptions import CapExceeded, GraphProdError, HypothesisError, VerificationError
from .graphs import (CliquePoset, SimComplex, SimpleGraph, clique_poset, is_flag,
                     order_complex, poset_complex, sub_complex_containing)
from .groups import (Action, ActionIso, CosetSpace, FiniteGroup, InfiniteCyclic,
                     InfiniteDihedral, PresetSubgroup, Subgroup, check_action_iso, core,
                     coset_action, coset_space, cyclic, dihedral, find_action_iso, klein,
                     make_group, preset, symmetric)
from .words import (GPElement, PairFamily, Presentation, abelianization, in_clique_subgroup,
                    invert, multiply, normalize, presentation, project_to_product,
                    word_engine_abelianization)
from .complexes import (build_choice_complex, build_restricted_complex, build_truncated,
                        coset_complex_iso, covering_checks, fundamental_group,
                        stabilizer_check)
from .coxeter import (CoxeterMatrix, MatrixEngine, TitsRep, coxeter_from_pairs,
                      dinfty_subgroups, embed_symmetric, even_subgroup, linearity_pipeline,
                      orthoparabolic_find, reduce, tits_rep)
from .commensure import (CommInstance, building_iso_only, common_subgroup,
                         equivariant_building_iso, transformation_group_scenario)

__version__ = "0.1.0"
