"""grouplab: desk-scale finite permutation-group computations.

The package decides whether a group has a normal series whose factors have
bicyclic Sylow subgroups, computes the structural invariants that bound such
groups (derived length, nilpotent length, p-lengths, chief ranks, Sylow
towers, Frattini quotients), and ships a catalog-driven CLI that checks the
published bounds on concrete groups.
"""

from .caps import Caps, DEFAULT_CAPS, caps_from_env
from .errors import (
    GroupError,
    InputError,
    NotFoundError,
    PreconditionError,
    ResourceLimitError,
)
from .perms import Perm, cycle_string, parse_cycles
from .groups import (
    ConjugacyClassSet,
    GroupHandle,
    QuotientMap,
    build_group,
    center,
    centralizer,
    commutator_subgroup,
    conjugacy_classes,
    contains,
    derived_subgroup,
    element_order,
    enumerate_elements,
    intersection,
    is_normal_in,
    join,
    normal_closure,
    quotient,
    trivial_group,
)

__version__ = "0.1.0"

__all__ = [
    "Caps",
    "DEFAULT_CAPS",
    "caps_from_env",
    "GroupError",
    "InputError",
    "NotFoundError",
    "PreconditionError",
    "ResourceLimitError",
    "Perm",
    "cycle_string",
    "parse_cycles",
    "ConjugacyClassSet",
    "GroupHandle",
    "QuotientMap",
    "build_group",
    "center",
    "centralizer",
    "commutator_subgroup",
    "conjugacy_classes",
    "contains",
    "derived_subgroup",
    "element_order",
    "enumerate_elements",
    "intersection",
    "is_normal_in",
    "join",
    "normal_closure",
    "quotient",
    "trivial_group",
    "__version__",
]
