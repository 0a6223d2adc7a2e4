"""Algebraic geometry over finite groups: equations, radicals, coordinate groups.

The main entry points are re-exported here; see the submodules for details.
"""

from .gcoeff import (GTarget, VerbalData, corollary2_check, corollary3_check, g_decompose,
                     g_identity_check, verbal_subgroup)
from .geometry import (AlgebraicSet, CoordinateGroup, Equation, EquationSystem, closure,
                       coordinate_group, hom_extends, is_algebraic, parse_system,
                       radical_contains, solve)
from .groups import (FiniteGroup, Subgroup, build_group, cyclic, dihedral, direct_product,
                     lower_central_series, nilpotency_class, parse_table, quaternion8,
                     subgroup_closure, symmetric, unitriangular)
from .radical import (AutGenerator, Verdict, Witness, corollary1_check, decompose,
                      endo_invariance_sampled, full_invariance_exact, identity_oracle, identity_sweep,
                      is_characteristic, marked_iso, nielsen_generators, relatively_free,
                      theorem2_report)
from .words import (EndoSpec, Word, WordContext, basic_commutators, enumerate_words, evaluate,
                    free_reduce, parse_word, substitute)

__version__ = "0.1.0"
