"""Numerical laboratory for dimension lower bounds under k-parameter
families of orthogonal projections onto m-planes in R^n."""

__version__ = "0.1.0"

from .dimest import (
    DimensionEstimate,
    box_counting_dim,
    correlation_dim,
    energy_diagnostic,
    project_points,
)
from .family import (
    BoundTable,
    ExtendedFamily,
    FamilyJacobian,
    FamilySpec,
    bound_table,
    bracket_ceil,
    disjoint_slot_family,
    extend_family,
    extended_plane_derivative_check,
    family_frame,
    family_jacobian,
    family_rows,
    family_rows_fn,
    family_to_dict,
    family_from_dict,
    find_witness_subspace,
    load_family,
    nondegeneracy_check,
    p_of_l,
    p_oracle_dots,
    save_family,
    theorem_lower_bound,
    transversality_probe,
)
from .fractal import (
    SampledMeasure,
    embed,
    four_corner_cantor,
    lebesgue_ball,
    line_cantor,
    load_binary,
    load_csv,
    product_embed,
    save_binary,
    save_csv,
)
from .grassmann import (
    ChartPoint,
    Frame,
    chart_point_frame,
    chart_rows,
    complement,
    projector,
    rotate,
    span_frame,
    span_projector,
    standard_frame,
    subspace_distance,
    tangent_projection_derivative,
)
from .lab import (
    ExperimentConfig,
    ExperimentReport,
    build_measure,
    lambda_grid,
    run_bound_check,
    run_sharpness,
    run_transversality,
    run_verify_suite,
    sharpness_family,
    sharpness_measure,
)
from .multivec import (
    cauchy_binet_norm,
    gram_norm,
    perp_factor_check,
    wedge_operator_norm,
)
