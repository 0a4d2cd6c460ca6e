"""Orbit-category sites of finite groups: sieves, sheaves, Kan extensions,
exact cohomology and Picard groups of unit cocycles."""

__version__ = "0.1.0"

from .groups import PermGroup, Subgroup, group_from_spec, sylow_subgroups  # noqa: E402
from .fincat import FinCat, FinFunctor, skeleton, full_subcategory  # noqa: E402
from .orbit import OrbitCategory, orbit_category, orbit_inclusion  # noqa: E402
from .abelian import AbGroup, AbMap  # noqa: E402
from .presheaves import AbPresheaf, SetPresheaf, restrict  # noqa: E402
from .sites import Sieve, FiniteTopology, is_sheaf, sipp_topology, subcategory_topology  # noqa: E402
from .kan import right_kan, left_kan_set, derived_right_kan  # noqa: E402
from .cohomology import category_cohomology  # noqa: E402
from .resolution import cech_cohomology, ext_over_category  # noqa: E402
from .picard import pic_bruteforce, sylow_trivial_group, character_embedding  # noqa: E402
