"""Construction and analysis of vectorial Boolean functions over (GF(2^m))^t.

Lookup-table analytics (DDT, Walsh spectra, ANF/degree), the trivariate cube
family and its solution-counting systems, Walsh-zero geometry (vector-space
extraction, thickness spectra, permutation concatenation), CCZ twisting with
region exploration, and a registry of machine-checked numeric claims.
"""

from .backend import active_backend, set_backend
from .gf2m import FieldSpec, element_from_minpoly, make_field, minimal_polynomial
from .vbf import (
    VBF, CapacityError, algebraic_degree, anf, compose, ddt, degree_spectrum,
    differential_uniformity, ea_transform, from_table, identity, inverse,
    linearity, load_table, monomial, save_json, save_raw, walsh, xor_add,
)
from .trivariate import (
    TrivariateSpec, build_cu, build_cu_inverse_closed_form, build_gold,
    build_tfl, check_symmetries, diff_solution_count, ls_solution_count,
    max_diff_uniformity_cu, permpoly_check, quadratic_linearity_cu,
    search_nonbijectivity_witness,
)
from .geometry import (
    VectorSpaceBasis, ZeroSet, extract_spaces, perm_concat_test, thickness,
    thickness_spectrum, walsh_zeroes,
)
from .ccz import (
    ClassContext, DTSignature, Region, RegionTable, TwistError, dt_signature,
    ea_class_bounds, explore_regions, twist,
)
from .claims import CLAIM_IDS, ClaimContext, ClaimResult, run_claims

__version__ = "0.1.0"
