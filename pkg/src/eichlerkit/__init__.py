"""Eichler quotients and cancellation for integral group rings of finite groups.

The package computes character tables and the count m_H of quaternionic
2-dimensional characters, certifies quotients, builds the levels of minimal
non-Eichler covers over a group catalog, and classifies groups by what is
known about projective cancellation (PC) and stably free cancellation (SFC).
"""

from .chartab import CharacterTable, character_table, m_quaternionic, product_table, verify_table
from .config import Config, get_config, load_config, set_config
from .errors import (EichlerKitError, EnumerationOverflow, InvalidSpec, NoC22Quotient, NotATwoGroup,
                     NotPeriodic, NotQuotientClosed, ParseError, ResourceExceeded, ValidationError)
from .mnec import (EichlerGraph, ExclusionSet, fundamental_lemma_check, gamma_levels, is_minimal_nec,
                   is_non_eichler_cover)
from .perm import PermGroup, Permutation
from .presentation import Presentation, coset_enumerate, parse_presentation
from .quotients import (binary_polyhedral_quotients, has_periodic_cohomology, has_quotient, is_eichler,
                        is_eichler_quotient, is_eichler_simple, is_isomorphic, is_S_eichler, m_h,
                        normal_subgroups, quotient_witnesses)
from .verdict import (Verdict, classify, classify_c22, classify_periodic, classify_two_group,
                      txc2_equivalence_check)
from .zoo import GroupSpec, NamedGroup, build, default_catalog, get_group, load_catalog, parse_catalog

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
