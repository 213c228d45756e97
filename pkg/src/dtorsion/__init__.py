"""Exact arithmetic for discrete-torsion degrees of freedom in orbifolds:
finite-group cohomology with cyclic and U(1) coefficients, twisted-sector
phase factors, orbifold Euler characteristics, equivariant Cech data, and
projective representations."""

from .errors import DTorsionError
from .phases import ONE, MINUS_ONE, CyclotomicSum, Phase
from .groups import (
    FiniteGroup,
    abelianization,
    alternating,
    centralizer,
    commuting_pairs,
    conjugacy_classes,
    cyclic,
    dihedral,
    direct_product,
    exponent,
    parse_group_spec,
    quaternion,
    symmetric,
)
from .cochains import (
    Cochain,
    CochainSpace,
    coboundary,
    format_cochain,
    is_cocycle,
    parse_cochain,
)
from .cohomology import (
    CohomologyGroup,
    cohomology_u1,
    cohomology_z_oracle,
    cohomology_zn,
    enumerate_class_representatives,
    is_coboundary,
    is_cocycle_mod,
    reduce_by_coboundaries,
)
from .torsion import (
    Sector,
    SectorTable,
    WilsonData,
    assemble_partition,
    check_sl3_invariance,
    epsilon,
    epsilon_table,
    holonomy_phase,
    membrane_phase,
    modular_transform,
    projection_operator,
    sector_orbit,
    transform_triple,
)
from .complexes import (
    GComplex,
    InertiaReport,
    Subcomplex,
    cell_counts,
    circle_with_involution,
    circle_with_rotation,
    euler_char,
    fixed_subcomplex,
    format_complex,
    inertia_components,
    orbifold_euler_conjugacy,
    orbifold_euler_sum,
    parse_complex,
    product_complex,
    quotient_orbit_euler,
    sphere_octahedral,
    torus_power,
)
from .projrep import (
    MonomialMatrix,
    MonomialRep,
    irrep_dimensions,
    is_omega_regular,
    omega_regular_classes,
    twisted_regular_rep,
    twisted_rep_report,
    verify_projective_relation,
)
from .cech import (
    BundleCocycle,
    BundleEquivariantStructure,
    Character,
    DiscreteSite,
    ExtractedClass,
    GerbeCocycle,
    GerbeDifferenceData,
    GerbeEquivariantStructure,
    VerificationReport,
    act_bundle,
    act_gerbe,
    bundle_difference_character,
    characters,
    embed_difference_data,
    extract_discrete_torsion,
    format_cech_document,
    gerbe_difference_data,
    parse_cech_document,
    single_point_site,
    verify_bundle_equivariance,
    verify_gerbe_equivariance,
    verify_group_law_diagram,
)

__version__ = "0.1.0"
