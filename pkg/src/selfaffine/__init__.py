"""Plane self-affine curves with two pieces: construction, tangents,
smoothness classification, length bounds and figure export."""

from .ifs import (
    Affine2,
    EigenParams,
    ValidationReport,
    build_maps,
    compose,
    f1_power_closed_form,
    f2_power_closed_form,
    from_figure_coords,
    params_from_json,
    to_figure_coords,
    validate_params,
)
from .curve import (
    Address,
    Polyline,
    address_of_t,
    alternate_address,
    piece_rectangle,
    piece_triangle,
    point_at,
    sample_curve,
)
from .tangent import (
    Classification,
    Cone2,
    CurveClass,
    TangentLine,
    c1_condition,
    classify,
    cone_image,
    contraction_delta,
    derivative_profile,
    one_sided_slopes_at_z,
    second_difference_probe,
    tangent_at,
)
from .length import (
    LevelStats,
    chord_length_sum,
    level_stats,
    slim_mass_bound,
    walk_zero_hit_fraction,
)
from .witness import (
    Similarity,
    SimilarityIFS,
    WitnessReport,
    angle_floor,
    no_tangent_scan,
    sierpinski_triangle,
    square_carpet,
)

__version__ = "0.1.0"
