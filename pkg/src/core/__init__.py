"""Public surface of the core algorithms.

Groups and homomorphisms, nonabelian cohomology in degrees 1 and 2, liens
and extension classes, tame local classes and the global solvers.
"""

from .cohomology import (CohClass1, CohClass2, Cocycle1, Cocycle2,
                         DualModuleSpec, GammaAction, are_cohomologous,
                         class_from_values, delta_central, dual_module,
                         enumerate_cocycles, enumerate_cocycles_exhaustive,
                         h1_enumerate, h2_abelian_enumerate, inflate_class,
                         lift_class, make_action, pushforward_class,
                         quotient_action, restrict_action, restrict_class,
                         springer_obstruction, sub_action, trivial_action,
                         twist_action, twist_bijection)
from .global_datum import (GlobalDatum, Infeasible, LocalTargets,
                           NeutralityCertificate, Obstruction, PlaceSpec,
                           Solution, control_splitting, datum_validate,
                           devissage_solve, hasse_solve, injectivity_on_P,
                           localize, make_datum, make_targets,
                           simple_module_solve, solve_by_filter, sha,
                           weak_approx_check)
from .groups import (FiniteGroup, GroupHom, SubgroupHandle, automorphisms,
                     derived_series, make_hom, minimal_generating_set,
                     quotient_group, subgroup_from_elements,
                     subgroup_generated, validate_group)
from .liens import (ExtensionCocycle, Lien, act_by_h2z, center_module,
                    equivalence_witness, h2_lien_enumerate, is_neutral,
                    make_lien, neutral_via_delta, same_class)
from .local_tame import (LocalClass, TameLocalDatum, classify_local_class,
                         lift_totally_ramified, local_h1_enumerate)

__all__ = [
    # groups
    "FiniteGroup",
    "GroupHom",
    "SubgroupHandle",
    "automorphisms",
    "derived_series",
    "make_hom",
    "minimal_generating_set",
    "quotient_group",
    "subgroup_from_elements",
    "subgroup_generated",
    "validate_group",
    # cohomology
    "CohClass1",
    "CohClass2",
    "Cocycle1",
    "Cocycle2",
    "DualModuleSpec",
    "GammaAction",
    "are_cohomologous",
    "class_from_values",
    "delta_central",
    "dual_module",
    "enumerate_cocycles",
    "enumerate_cocycles_exhaustive",
    "h1_enumerate",
    "h2_abelian_enumerate",
    "inflate_class",
    "lift_class",
    "make_action",
    "pushforward_class",
    "quotient_action",
    "restrict_action",
    "restrict_class",
    "springer_obstruction",
    "sub_action",
    "trivial_action",
    "twist_action",
    "twist_bijection",
    # liens
    "ExtensionCocycle",
    "Lien",
    "act_by_h2z",
    "center_module",
    "equivalence_witness",
    "h2_lien_enumerate",
    "is_neutral",
    "make_lien",
    "neutral_via_delta",
    "same_class",
    # local
    "LocalClass",
    "TameLocalDatum",
    "classify_local_class",
    "lift_totally_ramified",
    "local_h1_enumerate",
    # global
    "GlobalDatum",
    "Infeasible",
    "LocalTargets",
    "NeutralityCertificate",
    "Obstruction",
    "PlaceSpec",
    "Solution",
    "control_splitting",
    "datum_validate",
    "devissage_solve",
    "hasse_solve",
    "injectivity_on_P",
    "localize",
    "make_datum",
    "make_targets",
    "sha",
    "simple_module_solve",
    "solve_by_filter",
    "weak_approx_check",
]
