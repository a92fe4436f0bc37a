"""Exact rational Burnside rings of finite skeletal categories.

Builds the hom-set matrix of a finite category, inverts it exactly, and
reads off the ring structure, the complete set of orthogonal idempotents
and kernels of restrictions to full subcategories.  Epi<=d and orbit
categories of finite groups are built in.
"""

from .burnside import (BurnsideRing, KernelResult, RingElement, RingMap, burnside_ring,
                       check_eam, eam_matrices, hom_matrix, inclusion_kernel,
                       restriction_map, validate_functor)
from .catgen import (Group, Subgroup, conjugacy_classes_of_subgroups, gen_cyclic, gen_epi,
                     gen_orbit_category, group_from_cayley, load_group, subgroups)
from .combi import (epi_hom_closed_form, epi_inverse_last_row, stirling1, stirling2,
                    stirling_tables, surj_count)
from .fincat import (FactorizationSystem, FinCat, InvalidCategory, NoFactorizationSystem,
                     automorphisms, canonical_factorization_system, full_subcategory,
                     is_epi, is_iso, is_mono, order_objects, validate_category,
                     verify_factorization_system)
from .kernels import BACKEND
from .ratmat import (RatMatrix, mat_det, mat_inverse, mat_mul, mat_solve, nullspace)

__version__ = "0.1.0"
