"""Orbit closures of diagonal groups on S-arithmetic quotients of SL_n:
exact number field arithmetic, S-units, Weyl combinatorics, factorizations,
strata of orbit closures, closure prediction and decomposable forms."""

__version__ = "0.1.0"

from .errors import LdoError, TheoremViolation
from .numfield import FieldElement, NumberField, Place, PlaceSet, nf_create
from .exactlin import Matrix, bruhat, relative_bruhat
from .weylcomb import PsiSet, WeylPerm, cone_split
from .strata import admissible_set, closure_poset, orbit_equal_heuristic
from .sunits import unit_closure_classify, unit_group_build, unit_reduce
from .closure3 import maximize_centralizer, systole_scan
from .forms import DecomposableForm, cm_bound_check, density_probe

__all__ = [
    "LdoError",
    "TheoremViolation",
    "FieldElement",
    "NumberField",
    "Place",
    "PlaceSet",
    "nf_create",
    "Matrix",
    "bruhat",
    "relative_bruhat",
    "PsiSet",
    "WeylPerm",
    "cone_split",
    "admissible_set",
    "closure_poset",
    "orbit_equal_heuristic",
    "unit_closure_classify",
    "unit_group_build",
    "unit_reduce",
    "maximize_centralizer",
    "systole_scan",
    "DecomposableForm",
    "cm_bound_check",
    "density_probe",
]
